//! Pipeline orchestration: input collection, phase execution with
//! self-measured timings, instrumentation output, and error-to-exit-code
//! mapping.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use crate::ast::SyntaxTree;
use crate::coupling::{class_metrics, find_coupling_constructors, find_coupling_methods, usage_stats};
use crate::instrument::{instrument, strip, InstrumentError, ProbeTemplate};
use crate::invocations::{find_invocation_points, summarize};
use crate::parser::{parse, ParseError};
use crate::pathgen::{build_tree, enumerate_paths};
use crate::report::AnalysisReport;
use crate::semantic::{build_model, SemanticError};

pub const PHASE_PARSING: &str = "Parsing";
pub const PHASE_MODEL: &str = "Model building";
pub const PHASE_COUPLING: &str = "Finding coupling methods";
pub const PHASE_ANALYTICS: &str = "Integration & coupling analytics";
pub const PHASE_TESTGEN: &str = "Test case generation";
pub const PHASE_INVOCATIONS: &str = "Invocation analysis";
pub const PHASE_INSTRUMENT: &str = "Code Instrumentation";
pub const PHASE_INVOCATIONS_PER_CLASS: &str = "Invocation Analysis Per Class";
pub const PHASE_TOTAL: &str = "Total";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstrumentMode {
    Off,
    Add,
    Strip,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportSelection {
    pub paths: bool,
    pub defuse: bool,
    pub invocations: bool,
    pub metrics: bool,
}

impl ReportSelection {
    pub fn all() -> Self {
        ReportSelection { paths: true, defuse: true, invocations: true, metrics: true }
    }

    pub fn any(&self) -> bool {
        self.paths || self.defuse || self.invocations || self.metrics
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Files or directories; directories are scanned for `.moo` files.
    pub inputs: Vec<PathBuf>,
    pub reports: ReportSelection,
    pub mode: InstrumentMode,
    /// Rewrite inputs in place instead of writing sibling output files.
    pub in_place: bool,
    pub out_dir: Option<PathBuf>,
    pub json_path: Option<PathBuf>,
    pub builtin_classes: Vec<String>,
    pub template: ProbeTemplate,
}

impl RunConfig {
    pub fn new(inputs: Vec<PathBuf>) -> Self {
        RunConfig {
            inputs,
            reports: ReportSelection::all(),
            mode: InstrumentMode::Off,
            in_place: false,
            out_dir: None,
            json_path: None,
            builtin_classes: default_builtin_classes(),
            template: ProbeTemplate::default(),
        }
    }
}

pub fn default_builtin_classes() -> Vec<String> {
    ["Console", "DateTime", "TimeSpan", "Clock"].iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}:{}: {}", .err.line, .err.message)]
    Parse { path: String, err: ParseError },
    #[error("{0}")]
    Semantic(SemanticError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Config(String),
    #[error("{path}: {err}")]
    Instrument { path: String, err: InstrumentError },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Parse { .. } | PipelineError::Instrument { .. } => 1,
            PipelineError::Semantic(_) => 2,
            PipelineError::Io { .. } => 3,
            PipelineError::Config(_) => 4,
        }
    }
}

/// Expand the configured inputs into an ordered list of `.moo` files.
/// Directory contents are sorted for determinism.
pub fn collect_inputs(config: &RunConfig) -> Result<Vec<PathBuf>, PipelineError> {
    if config.inputs.is_empty() {
        return Err(PipelineError::Config("at least one input file is required".into()));
    }
    let mut files = Vec::new();
    for input in &config.inputs {
        if input.is_dir() {
            let mut found = Vec::new();
            let entries = fs::read_dir(input).map_err(|e| PipelineError::Io {
                path: input.display().to_string(),
                message: e.to_string(),
            })?;
            for entry in entries {
                let entry = entry.map_err(|e| PipelineError::Io {
                    path: input.display().to_string(),
                    message: e.to_string(),
                })?;
                let path = entry.path();
                if path.extension().is_some_and(|e| e == "moo") && path.is_file() {
                    found.push(path);
                }
            }
            found.sort();
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    if files.is_empty() {
        return Err(PipelineError::Config("no .moo files found in the given inputs".into()));
    }
    Ok(files)
}

fn read_source(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path)
        .map_err(|e| PipelineError::Io { path: path.display().to_string(), message: e.to_string() })
}

struct PhaseClock {
    started: Instant,
    entries: Vec<(String, f64)>,
}

impl PhaseClock {
    fn new() -> Self {
        PhaseClock { started: Instant::now(), entries: Vec::new() }
    }

    fn measure<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.entries.push((name.to_string(), t0.elapsed().as_secs_f64() * 1000.0));
        out
    }

    fn finish(mut self) -> Vec<(String, f64)> {
        self.entries.push((PHASE_TOTAL.to_string(), self.started.elapsed().as_secs_f64() * 1000.0));
        self.entries
    }
}

/// Run the full analysis pipeline: parse, model, coupling, analytics, test
/// generation, invocation analysis, and (when enabled) instrumentation.
/// The first error aborts the run.
pub fn run(config: &RunConfig) -> Result<AnalysisReport, PipelineError> {
    let mut clock = PhaseClock::new();
    let files = collect_inputs(config)?;

    let sources: Vec<(PathBuf, String)> =
        files.iter().map(|p| read_source(p).map(|s| (p.clone(), s))).collect::<Result<_, _>>()?;

    let trees: Vec<SyntaxTree> = clock.measure(PHASE_PARSING, || {
        sources
            .iter()
            .map(|(path, src)| {
                parse(src, &path.display().to_string())
                    .map_err(|err| PipelineError::Parse { path: path.display().to_string(), err })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    let model = clock.measure(PHASE_MODEL, || build_model(&trees)).map_err(PipelineError::Semantic)?;

    let (coupling_methods, coupling_ctors) = clock.measure(PHASE_COUPLING, || {
        (find_coupling_methods(&model), find_coupling_constructors(&model))
    });

    let (metrics, usage) = clock.measure(PHASE_ANALYTICS, || {
        let metrics = model
            .classes()
            .iter()
            .map(|c| class_metrics(&model, &c.name).expect("class is in the model"))
            .collect::<Vec<_>>();
        (metrics, usage_stats(&model))
    });

    let (paths, defuse_edges) = clock.measure(PHASE_TESTGEN, || {
        let mut trees_out = Vec::new();
        let mut edges = Vec::new();
        for c in &coupling_methods {
            let (tree, mut e) = build_tree(c, &model);
            trees_out.push(tree);
            edges.append(&mut e);
        }
        (enumerate_paths(&trees_out, &coupling_ctors), edges)
    });

    let points =
        clock.measure(PHASE_INVOCATIONS, || find_invocation_points(&model, &config.builtin_classes));
    let invocation_summary = clock.measure(PHASE_INVOCATIONS_PER_CLASS, || summarize(&points, &model));

    let mut instrumented_files = Vec::new();
    if config.mode == InstrumentMode::Add {
        let results = clock.measure(PHASE_INSTRUMENT, || {
            let mut acc = Vec::new();
            for (path, src) in &sources {
                let tree = trees.iter().find(|t| t.source_path == path.display().to_string());
                let class_names: Vec<&str> = tree
                    .map(|t| t.classes.iter().map(|c| c.name.as_str()).collect())
                    .unwrap_or_default();
                let file_points: Vec<_> = points
                    .iter()
                    .filter(|p| class_names.contains(&p.enclosing_class.as_str()))
                    .cloned()
                    .collect();
                if file_points.is_empty() {
                    continue;
                }
                let result = instrument(src, &file_points, &config.template).map_err(|err| {
                    PipelineError::Instrument { path: path.display().to_string(), err }
                });
                acc.push((path.clone(), result));
            }
            acc
        });
        for (path, result) in results {
            let result = result?;
            let target = instrument_output_path(&path, config);
            fs::write(&target, &result.text).map_err(|e| PipelineError::Io {
                path: target.display().to_string(),
                message: e.to_string(),
            })?;
            instrumented_files.push((target.display().to_string(), result.probes));
        }
    } else {
        clock.measure(PHASE_INSTRUMENT, || {});
    }

    let phase_timings = clock.finish();
    Ok(AnalysisReport {
        paths,
        defuse_edges,
        points,
        invocation_summary,
        metrics,
        usage,
        phase_timings,
        instrumented_files,
    })
}

/// Strip probe lines from every input file. Returns the written paths.
pub fn strip_files(config: &RunConfig) -> Result<Vec<PathBuf>, PipelineError> {
    let files = collect_inputs(config)?;
    let mut written = Vec::new();
    for path in files {
        let source = read_source(&path)?;
        let stripped = strip(&source);
        let target = if config.in_place {
            path.clone()
        } else {
            sibling_with_suffix(&path, "stripped", config.out_dir.as_deref())
        };
        fs::write(&target, stripped).map_err(|e| PipelineError::Io {
            path: target.display().to_string(),
            message: e.to_string(),
        })?;
        written.push(target);
    }
    Ok(written)
}

fn instrument_output_path(input: &Path, config: &RunConfig) -> PathBuf {
    if config.in_place {
        input.to_path_buf()
    } else {
        sibling_with_suffix(input, "instrumented", config.out_dir.as_deref())
    }
}

fn sibling_with_suffix(input: &Path, suffix: &str, out_dir: Option<&Path>) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = format!("{stem}.{suffix}.moo");
    match out_dir {
        Some(dir) => dir.join(name),
        None => input.with_file_name(name),
    }
}

/// Apply a `key=value` config file. Recognized keys: `builtin_classes`
/// (comma-separated, replaces the default list) and repeatable
/// `probe_before` / `probe_after` lines (the first occurrence clears the
/// default template side).
pub fn apply_config_file(path: &Path, config: &mut RunConfig) -> Result<(), PipelineError> {
    let text = read_source(path)?;
    let mut before_reset = false;
    let mut after_reset = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(PipelineError::Config(format!(
                "{}:{}: expected key=value",
                path.display(),
                lineno + 1
            )));
        };
        match key.trim() {
            "builtin_classes" => {
                config.builtin_classes =
                    value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            }
            "probe_before" => {
                if !before_reset {
                    config.template.before.clear();
                    before_reset = true;
                }
                config.template.before.push(value.to_string());
            }
            "probe_after" => {
                if !after_reset {
                    config.template.after.clear();
                    after_reset = true;
                }
                config.template.after.push(value.to_string());
            }
            other => {
                return Err(PipelineError::Config(format!(
                    "{}:{}: unknown key `{}`",
                    path.display(),
                    lineno + 1,
                    other
                )));
            }
        }
    }
    Ok(())
}
