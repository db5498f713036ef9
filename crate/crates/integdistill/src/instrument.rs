//! Source rewriting: wrap invocation-point statements with timing probes,
//! and strip previously injected probes.
//!
//! Probes are whole inserted lines. Every inserted line ends with the
//! `// @idprobe` marker so stripping needs no re-analysis, and untouched
//! regions of the rewritten file stay byte-identical to the input.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ast::{Expr, Stmt, SyntaxTree};
use crate::invocations::InvocationPoint;
use crate::parser::{parse, ParseError};

pub const PROBE_MARKER: &str = "// @idprobe";

/// Probe line templates. `{id}` is the per-file probe counter starting at 1
/// in source order; `{line}` is the original 1-based line of the invocation
/// point. Rendered lines must stay inside the MiniOO grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeTemplate {
    pub before: Vec<String>,
    pub after: Vec<String>,
}

impl Default for ProbeTemplate {
    fn default() -> Self {
        ProbeTemplate {
            before: vec!["int probe_start_{id} = Clock.now();".to_string()],
            after: vec![
                "int probe_elapsed_{id} = Clock.now() - probe_start_{id};".to_string(),
                "Console.WriteLine(\"Line {0} took {1}\", {line}, probe_elapsed_{id});".to_string(),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeRecord {
    pub id: usize,
    pub line: u32,
    pub invocation_text: String,
}

#[derive(Debug, Clone)]
pub struct InstrumentationResult {
    pub text: String,
    pub probes: Vec<ProbeRecord>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InstrumentError {
    #[error("source does not parse: {0}")]
    SourceParse(ParseError),
    #[error("cannot locate the statement for the invocation point at line {line} (`{call}`); source changed since analysis")]
    PointNotFound { line: u32, call: String },
    #[error("instrumented output does not parse: {0}")]
    OutputParse(ParseError),
}

/// Wrap each point's statement with the template's before/after lines,
/// matching the statement's indentation. Ids are assigned in source order.
pub fn instrument(
    source: &str,
    points: &[InvocationPoint],
    template: &ProbeTemplate,
) -> Result<InstrumentationResult, InstrumentError> {
    let tree = parse(source, "<instrument>").map_err(InstrumentError::SourceParse)?;

    let mut ordered: Vec<&InvocationPoint> = points.iter().collect();
    ordered.sort_by_key(|p| p.line);

    let lines: Vec<&str> = source.split_inclusive('\n').collect();
    // line number -> rendered lines to insert before/after it
    let mut before: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    let mut after: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    let mut probes = Vec::new();

    for (i, point) in ordered.iter().enumerate() {
        let id = i + 1;
        let span = locate_statement(&tree, point).ok_or_else(|| InstrumentError::PointNotFound {
            line: point.line,
            call: point.call_text.clone(),
        })?;
        let indent = indent_of(&lines, span.start_line);
        for t in &template.before {
            before.entry(span.start_line).or_default().push(render_probe_line(t, id, point.line, &indent));
        }
        for t in &template.after {
            after.entry(span.end_line).or_default().push(render_probe_line(t, id, point.line, &indent));
        }
        probes.push(ProbeRecord { id, line: point.line, invocation_text: point.call_text.clone() });
    }

    let mut out = String::new();
    for (idx, raw) in lines.iter().enumerate() {
        let lineno = (idx + 1) as u32;
        let terminator = line_terminator(raw);
        if let Some(ins) = before.get(&lineno) {
            for l in ins {
                out.push_str(l);
                out.push_str(terminator);
            }
        }
        out.push_str(raw);
        if let Some(ins) = after.get(&lineno) {
            if !raw.ends_with('\n') {
                out.push_str(terminator);
            }
            for l in ins {
                out.push_str(l);
                out.push_str(terminator);
            }
        }
    }

    parse(&out, "<instrumented>").map_err(InstrumentError::OutputParse)?;
    Ok(InstrumentationResult { text: out, probes })
}

/// Remove every line bearing the probe marker. Inverse of `instrument` on
/// its own output and the identity on never-instrumented sources.
pub fn strip(source: &str) -> String {
    source
        .split_inclusive('\n')
        .filter(|line| !line.trim_end().ends_with(PROBE_MARKER))
        .collect()
}

fn render_probe_line(template: &str, id: usize, line: u32, indent: &str) -> String {
    let body = template.replace("{id}", &id.to_string()).replace("{line}", &line.to_string());
    format!("{indent}{body} {PROBE_MARKER}")
}

fn indent_of(lines: &[&str], lineno: u32) -> String {
    lines
        .get(lineno as usize - 1)
        .map(|l| l.chars().take_while(|c| *c == ' ' || *c == '\t').collect())
        .unwrap_or_default()
}

fn line_terminator(line: &str) -> &'static str {
    if line.ends_with("\r\n") {
        "\r\n"
    } else {
        "\n"
    }
}

fn locate_statement(tree: &SyntaxTree, point: &InvocationPoint) -> Option<crate::ast::Span> {
    let class = tree.classes.iter().find(|c| c.name == point.enclosing_class)?;
    let member = class
        .constructors
        .iter()
        .chain(class.methods.iter())
        .find(|m| m.name == point.enclosing_method && m.body_span.contains_line(point.line))?;
    stmt_containing_call(&member.body, point.line, &point.call_text).map(Stmt::span)
}

/// The innermost statement whose direct expressions hold the call; control
/// statements claim calls in their conditions, nested blocks are searched
/// first.
fn stmt_containing_call<'a>(stmts: &'a [Stmt], line: u32, call_text: &str) -> Option<&'a Stmt> {
    for stmt in stmts {
        if !stmt.span().contains_line(line) {
            continue;
        }
        match stmt {
            Stmt::Block { stmts: inner, .. } => {
                if let Some(found) = stmt_containing_call(inner, line, call_text) {
                    return Some(found);
                }
            }
            Stmt::If { cond, then_branch, else_branch, .. } => {
                if let Some(found) = stmt_containing_call(std::slice::from_ref(then_branch), line, call_text) {
                    return Some(found);
                }
                if let Some(e) = else_branch {
                    if let Some(found) = stmt_containing_call(std::slice::from_ref(e), line, call_text) {
                        return Some(found);
                    }
                }
                if expr_has_call(cond, line, call_text) {
                    return Some(stmt);
                }
            }
            Stmt::While { cond, body, .. } => {
                if let Some(found) = stmt_containing_call(std::slice::from_ref(body), line, call_text) {
                    return Some(found);
                }
                if expr_has_call(cond, line, call_text) {
                    return Some(stmt);
                }
            }
            Stmt::LocalDecl { init, .. } => {
                if init.as_ref().is_some_and(|e| expr_has_call(e, line, call_text)) {
                    return Some(stmt);
                }
            }
            Stmt::Assign { target, value, .. } => {
                if expr_has_call(target, line, call_text) || expr_has_call(value, line, call_text) {
                    return Some(stmt);
                }
            }
            Stmt::ExprStmt { expr, .. } => {
                if expr_has_call(expr, line, call_text) {
                    return Some(stmt);
                }
            }
            Stmt::Return { value, .. } => {
                if value.as_ref().is_some_and(|e| expr_has_call(e, line, call_text)) {
                    return Some(stmt);
                }
            }
            Stmt::IncDec { target, .. } => {
                if expr_has_call(target, line, call_text) {
                    return Some(stmt);
                }
            }
        }
    }
    None
}

fn expr_has_call(expr: &Expr, line: u32, call_text: &str) -> bool {
    match expr {
        Expr::Call { receiver, args, line: l, text, .. } => {
            (*l == line && text == call_text)
                || receiver.as_ref().is_some_and(|r| expr_has_call(r, line, call_text))
                || args.iter().any(|a| expr_has_call(a, line, call_text))
        }
        Expr::New { args, .. } => args.iter().any(|a| expr_has_call(a, line, call_text)),
        Expr::Member { receiver, .. } => expr_has_call(receiver, line, call_text),
        Expr::Binary { lhs, rhs, .. } => {
            expr_has_call(lhs, line, call_text) || expr_has_call(rhs, line, call_text)
        }
        Expr::Unary { operand, .. } => expr_has_call(operand, line, call_text),
        Expr::Ident { .. } | Expr::This { .. } | Expr::IntLit { .. } | Expr::StrLit { .. } => false,
    }
}
