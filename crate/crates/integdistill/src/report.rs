//! Report rendering and JSON export.
//!
//! Text sections mirror the tool's reference output formats line for line;
//! the JSON document carries the same content with stable key and array
//! ordering, so re-serializing a parsed document is byte-identical.

use serde::Serialize;

use crate::coupling::{ClassMetrics, UsageStats};
use crate::instrument::ProbeRecord;
use crate::invocations::{InvocationPoint, InvocationSummary};
use crate::pathgen::{DefUseEdge, PathKind, TestPath};

/// Everything one run produces, in render order.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub paths: Vec<TestPath>,
    pub defuse_edges: Vec<DefUseEdge>,
    pub points: Vec<InvocationPoint>,
    pub invocation_summary: InvocationSummary,
    pub metrics: Vec<ClassMetrics>,
    pub usage: UsageStats,
    /// Phase name -> elapsed milliseconds, in execution order.
    pub phase_timings: Vec<(String, f64)>,
    /// Files rewritten by instrumentation or stripping, with probe records.
    pub instrumented_files: Vec<(String, Vec<ProbeRecord>)>,
}

/// One header line per path, then one indented `Class:signature` line per
/// node. Constructor paths follow a banner and omit the length suffix.
pub fn render_paths_text(paths: &[TestPath]) -> String {
    let mut out = String::new();
    for p in paths.iter().filter(|p| p.kind == PathKind::Method) {
        out.push_str(&format!("Test Path Number: {} ----- Path Length:{}\n", p.id, p.length));
        for n in &p.nodes {
            out.push_str(&format!("\t{}:{}\n", n.class, n.signature));
        }
    }
    let ctors: Vec<&TestPath> = paths.iter().filter(|p| p.kind == PathKind::Constructor).collect();
    if !ctors.is_empty() {
        out.push_str("************* Constructors **********\n");
        for p in ctors {
            out.push_str(&format!("Test Path Number: {}\n", p.id));
            for n in &p.nodes {
                out.push_str(&format!("\t{}: {}\n", n.class, n.signature));
            }
        }
    }
    out
}

/// One line per edge in discovery order.
pub fn render_defuse_log(edges: &[DefUseEdge]) -> String {
    let mut out = String::new();
    for e in edges {
        out.push_str(&format!(
            "From {} due to used variable:{} --> {} which defines this variable.\n",
            e.from_method, e.field, e.to_method
        ));
    }
    out
}

/// Per-point blocks followed by per-class totals and per-method breakdowns.
pub fn render_invocations(points: &[InvocationPoint], summary: &InvocationSummary) -> String {
    let mut out = String::new();
    out.push_str("---- Invocations---\n");
    for p in points {
        out.push_str(&format!("       *Invocation Point Detected at Line:{}*\n", p.line));
        out.push_str(&format!("       {}\n", p.call_text));
        if p.user_defined {
            out.push_str(&format!("       Invocation Class:{}\n", p.target_class));
        } else {
            out.push_str(&format!(
                "       Invocation Class:{}      Not a user-defined class!\n",
                p.target_class
            ));
        }
        out.push_str(&format!("       Current Class:{} - In method:{}\n", p.enclosing_class, p.enclosing_method));
        out.push_str(&format!(
            "       Class object instance on which invocation detected:{}\n",
            p.receiver_text
        ));
        out.push('\n');
    }
    out.push_str("---- End of Invocation analysis----\n");
    for c in &summary.classes {
        out.push_str(&format!(
            "Number of invocation points in class {}: {} -- out of which {} are User-Defined\n",
            c.class, c.total, c.user_defined
        ));
        for m in &c.methods {
            out.push_str(&format!(
                "  Number of invocation points in method {} is {}; out of which {} are User-Defined\n",
                m.method, m.total, m.user_defined
            ));
        }
    }
    out
}

/// Per-class metric blocks, then the most-used-class block.
pub fn render_metrics(metrics: &[ClassMetrics], usage: &UsageStats) -> String {
    let mut out = String::new();
    for m in metrics {
        out.push_str("-----\n");
        out.push_str(&format!("Class {}\n", m.class));
        out.push_str(&format!("  Number of methods in Class {}: {}\n", m.class, m.method_count));
        out.push_str(&format!("  Number of constructors in Class {}: {}\n", m.class, m.constructor_count));
        out.push_str(&format!(
            "  Maximum number of parameters among methods of class {}: {}\n",
            m.class, m.max_params_over_methods
        ));
        out.push_str(&format!("  Coupling Degree of Class {}: {}\n", m.class, m.coupling_degree));
        if m.base_names.is_empty() {
            out.push_str(&format!("  Bases of class {}:\n", m.class));
        } else {
            out.push_str(&format!("  Bases of class {}: {}\n", m.class, m.base_names.join(", ")));
        }
        out.push_str(&format!("  Number of base types of class {}: {}\n", m.class, m.base_count));
    }
    out.push_str("-----\n");
    if let Some(most) = &usage.most_used {
        let u = usage.per_class.iter().find(|u| u.class == *most);
        let (as_param, as_var) =
            u.map(|u| (u.times_as_method_parameter, u.times_as_variable_type)).unwrap_or((0, 0));
        out.push_str(&format!("Most used class: {most}\n"));
        out.push_str(&format!("  {as_param} times as method parameter\n"));
        out.push_str(&format!("  {as_var} times as variable type inside methods\n"));
    }
    out
}

#[derive(Serialize)]
struct JsonPath {
    id: usize,
    kind: &'static str,
    nodes: Vec<String>,
    length: usize,
}

#[derive(Serialize)]
struct JsonEdge {
    class: String,
    from: String,
    variable: String,
    to: String,
}

#[derive(Serialize)]
struct JsonPoint {
    line: u32,
    call: String,
    target_class: String,
    user_defined: bool,
    builtin: bool,
    enclosing_class: String,
    enclosing_method: String,
    receiver: String,
}

#[derive(Serialize)]
struct JsonMethodStats {
    method: String,
    total: usize,
    user_defined: usize,
}

#[derive(Serialize)]
struct JsonClassStats {
    class: String,
    total: usize,
    user_defined: usize,
    methods: Vec<JsonMethodStats>,
}

#[derive(Serialize)]
struct JsonInvocations {
    points: Vec<JsonPoint>,
    classes: Vec<JsonClassStats>,
}

#[derive(Serialize)]
struct JsonMetrics {
    class: String,
    methods: usize,
    constructors: usize,
    max_params: usize,
    coupling_degree: usize,
    bases: Vec<String>,
    base_count: usize,
}

#[derive(Serialize)]
struct JsonClassUsage {
    class: String,
    as_parameter: usize,
    as_variable_type: usize,
}

#[derive(Serialize)]
struct JsonUsage {
    classes: Vec<JsonClassUsage>,
    most_used: Option<String>,
}

#[derive(Serialize)]
struct JsonReport {
    paths: Vec<JsonPath>,
    defuse_edges: Vec<JsonEdge>,
    invocations: JsonInvocations,
    metrics: Vec<JsonMetrics>,
    usage: JsonUsage,
    timings: serde_json::Map<String, serde_json::Value>,
}

/// Canonical JSON document: fixed top-level keys, arrays in report order,
/// numbers unquoted.
pub fn export_json(report: &AnalysisReport) -> String {
    let doc = JsonReport {
        paths: report
            .paths
            .iter()
            .map(|p| JsonPath {
                id: p.id,
                kind: match p.kind {
                    PathKind::Method => "method",
                    PathKind::Constructor => "constructor",
                },
                nodes: p.nodes.iter().map(|n| format!("{}:{}", n.class, n.signature)).collect(),
                length: p.length,
            })
            .collect(),
        defuse_edges: report
            .defuse_edges
            .iter()
            .map(|e| JsonEdge {
                class: e.class.clone(),
                from: e.from_method.clone(),
                variable: e.field.clone(),
                to: e.to_method.clone(),
            })
            .collect(),
        invocations: JsonInvocations {
            points: report
                .points
                .iter()
                .map(|p| JsonPoint {
                    line: p.line,
                    call: p.call_text.clone(),
                    target_class: p.target_class.clone(),
                    user_defined: p.user_defined,
                    builtin: p.builtin,
                    enclosing_class: p.enclosing_class.clone(),
                    enclosing_method: p.enclosing_method.clone(),
                    receiver: p.receiver_text.clone(),
                })
                .collect(),
            classes: report
                .invocation_summary
                .classes
                .iter()
                .map(|c| JsonClassStats {
                    class: c.class.clone(),
                    total: c.total,
                    user_defined: c.user_defined,
                    methods: c
                        .methods
                        .iter()
                        .map(|m| JsonMethodStats {
                            method: m.method.clone(),
                            total: m.total,
                            user_defined: m.user_defined,
                        })
                        .collect(),
                })
                .collect(),
        },
        metrics: report
            .metrics
            .iter()
            .map(|m| JsonMetrics {
                class: m.class.clone(),
                methods: m.method_count,
                constructors: m.constructor_count,
                max_params: m.max_params_over_methods,
                coupling_degree: m.coupling_degree,
                bases: m.base_names.clone(),
                base_count: m.base_count,
            })
            .collect(),
        usage: JsonUsage {
            classes: report
                .usage
                .per_class
                .iter()
                .map(|u| JsonClassUsage {
                    class: u.class.clone(),
                    as_parameter: u.times_as_method_parameter,
                    as_variable_type: u.times_as_variable_type,
                })
                .collect(),
            most_used: report.usage.most_used.clone(),
        },
        timings: report
            .phase_timings
            .iter()
            .map(|(name, ms)| {
                // Millisecond timings at 4 decimal places; finer float noise
                // is measurement jitter, not signal.
                let rounded = (ms * 10_000.0).round() / 10_000.0;
                (
                    name.clone(),
                    serde_json::Number::from_f64(rounded)
                        .map(serde_json::Value::Number)
                        .unwrap_or(serde_json::Value::Null),
                )
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}
