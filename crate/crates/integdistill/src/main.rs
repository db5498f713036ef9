//! `integdistill` — integration analysis and test path generation for
//! MiniOO sources.
//!
//! Exit codes: 0 success, 1 parse error, 2 semantic error, 3 I/O error,
//! 4 invalid configuration.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use integdistill::pipeline::{
    apply_config_file, run, strip_files, InstrumentMode, PipelineError, ReportSelection, RunConfig,
};
use integdistill::report::{
    export_json, render_defuse_log, render_invocations, render_metrics, render_paths_text,
};

#[derive(Parser, Debug)]
#[command(
    name = "integdistill",
    version,
    about = "Coupling-based integration analysis and test path generation for MiniOO sources"
)]
struct Cli {
    /// Input .moo files or directories
    #[arg(required = true, value_name = "inputs")]
    inputs: Vec<PathBuf>,

    /// Report generated test paths
    #[arg(long)]
    paths: bool,

    /// Report the def-use edge log
    #[arg(long)]
    defuse: bool,

    /// Report invocation points and per-class counts
    #[arg(long)]
    invocations: bool,

    /// Report class metrics and usage analytics
    #[arg(long)]
    metrics: bool,

    /// Enable every report section (the default when no section is chosen)
    #[arg(long)]
    all: bool,

    /// Write the JSON report to this file
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,

    /// Write report sections and rewritten sources into this directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Inject timing probes at every invocation point
    #[arg(long, conflicts_with = "strip")]
    instrument: bool,

    /// Remove previously injected probes
    #[arg(long)]
    strip: bool,

    /// Rewrite input files in place when instrumenting or stripping
    #[arg(long)]
    in_place: bool,

    /// Config file with key=value lines (builtin_classes, probe_before,
    /// probe_after)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(4);
        }
    };

    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<(), PipelineError> {
    let mut config = RunConfig::new(cli.inputs);
    config.in_place = cli.in_place;
    config.out_dir = cli.out.clone();
    config.json_path = cli.json.clone();
    config.mode = if cli.instrument {
        InstrumentMode::Add
    } else if cli.strip {
        InstrumentMode::Strip
    } else {
        InstrumentMode::Off
    };
    let explicit = ReportSelection {
        paths: cli.paths,
        defuse: cli.defuse,
        invocations: cli.invocations,
        metrics: cli.metrics,
    };
    config.reports = if cli.all || (!explicit.any() && !cli.strip) {
        ReportSelection::all()
    } else {
        explicit
    };
    if let Some(path) = &cli.config {
        apply_config_file(path, &mut config)?;
    }
    if let Some(dir) = &config.out_dir {
        fs::create_dir_all(dir).map_err(|e| PipelineError::Io {
            path: dir.display().to_string(),
            message: e.to_string(),
        })?;
    }

    if config.mode == InstrumentMode::Strip {
        let written = strip_files(&config)?;
        for path in written {
            eprintln!("stripped: {}", path.display());
        }
        return Ok(());
    }

    let report = run(&config)?;

    let mut sections: Vec<(&str, String)> = Vec::new();
    if config.reports.paths {
        sections.push(("paths", render_paths_text(&report.paths)));
    }
    if config.reports.defuse {
        sections.push(("defuse", render_defuse_log(&report.defuse_edges)));
    }
    if config.reports.invocations {
        sections.push(("invocations", render_invocations(&report.points, &report.invocation_summary)));
    }
    if config.reports.metrics {
        sections.push(("metrics", render_metrics(&report.metrics, &report.usage)));
    }

    if let Some(dir) = &config.out_dir {
        for (name, text) in &sections {
            let path = dir.join(format!("{name}.txt"));
            fs::write(&path, text).map_err(|e| PipelineError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        }
    } else {
        let mut stdout = String::new();
        for (_, text) in &sections {
            stdout.push_str(text);
        }
        print!("{stdout}");
    }

    if let Some(path) = &config.json_path {
        fs::write(path, export_json(&report)).map_err(|e| PipelineError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    }

    for (path, probes) in &report.instrumented_files {
        eprintln!("instrumented: {path} ({} probes)", probes.len());
    }
    for (name, ms) in &report.phase_timings {
        eprintln!("{name}: {ms:.4} ms");
    }
    Ok(())
}
