//! Independent oracles used to cross-check the analysis implementation.
//!
//! The def/use oracle classifies field-name tokens straight off the token
//! stream of a method's source slice: a field token is a def iff it is the
//! leftmost identifier of an assignment or increment statement targeting a
//! field, and a use otherwise. It assumes shadow-free input (no local or
//! parameter named like a field), which the generator guarantees and the
//! demo satisfies.

use std::collections::BTreeSet;

use integdistill::lexer::{tokenize, Token, TokenKind};
use integdistill::pathgen::PathTree;

/// Def/use sets for one method body slice, by token scanning.
pub fn token_scan_def_use(member_source: &str, field_names: &[String]) -> (BTreeSet<String>, BTreeSet<String>) {
    let tokens: Vec<Token> = tokenize(member_source)
        .expect("member slice lexes")
        .into_iter()
        .filter(|t| t.kind != TokenKind::Eof)
        .collect();
    let lex = |i: usize| tokens.get(i).map(|t| t.lexeme.as_str()).unwrap_or("");
    let is_boundary = |i: usize| i == 0 || matches!(lex(i - 1), ";" | "{" | "}");

    let mut defs = BTreeSet::new();
    let mut uses = BTreeSet::new();

    for (i, tok) in tokens.iter().enumerate() {
        if tok.kind != TokenKind::Ident || !field_names.iter().any(|f| f == &tok.lexeme) {
            continue;
        }
        // `other.f` is not an occurrence of this class's field; `this.f` is.
        let base = if i >= 1 && lex(i - 1) == "." {
            if i >= 2 && lex(i - 2) == "this" {
                i - 2
            } else {
                continue;
            }
        } else {
            i
        };
        let name = tok.lexeme.clone();
        let next = lex(i + 1);

        let prefix_incdec = base >= 1
            && matches!(lex(base - 1), "++" | "--")
            && (base == 1 || is_boundary(base - 1));
        let postfix_incdec = is_boundary(base) && matches!(next, "++" | "--") && lex(i + 2) == ";";
        let assign_target = is_boundary(base) && next == "=";

        if prefix_incdec || postfix_incdec {
            defs.insert(name.clone());
            uses.insert(name);
        } else if assign_target {
            defs.insert(name);
        } else {
            uses.insert(name);
        }
    }
    (defs, uses)
}

/// Source slice covering one member (signature line through closing brace).
pub fn member_slice(source: &str, start_line: u32, end_line: u32) -> String {
    source
        .lines()
        .skip(start_line as usize - 1)
        .take((end_line - start_line + 1) as usize)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Root-to-leaf walks of a path tree, by an explicit-stack traversal.
pub fn walk_paths(tree: &PathTree) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    // Stack holds (node id, path of signatures up to and including the node).
    let mut stack = vec![(tree.root(), vec![tree.node(tree.root()).signature.clone()])];
    while let Some((id, path)) = stack.pop() {
        let node = tree.node(id);
        if node.children.is_empty() {
            out.push(path);
            continue;
        }
        for &child in node.children.iter().rev() {
            let mut next = path.clone();
            next.push(tree.node(child).signature.clone());
            stack.push((child, next));
        }
    }
    out
}

/// Assert that `modified` differs from `original` only by inserted lines,
/// each carrying `marker`.
pub fn assert_insertion_only(original: &str, modified: &str, marker: &str) {
    let mut orig = original.lines().peekable();
    for line in modified.lines() {
        if orig.peek() == Some(&line) {
            orig.next();
        } else {
            assert!(
                line.trim_end().ends_with(marker),
                "unexpected non-marker line in instrumented output: {line:?}"
            );
        }
    }
    let leftover: Vec<&str> = orig.collect();
    assert!(leftover.is_empty(), "original lines missing from output: {leftover:?}");
}
