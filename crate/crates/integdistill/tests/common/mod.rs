//! Shared helpers for the integration test suites.
//!
//! Each test binary compiles its own copy, so helpers unused by one suite
//! are expected.
#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use std::path::{Path, PathBuf};

pub const DEMO: &str = include_str!("../fixtures/demo.moo");

pub fn demo_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/demo.moo")
}

/// Whitespace-normalize one line: runs of spaces/tabs collapse to a single
/// space and trailing whitespace is dropped.
pub fn normalize_line(line: &str) -> String {
    let mut out = String::new();
    let mut pending_ws = false;
    for ch in line.chars() {
        if ch == ' ' || ch == '\t' {
            pending_ws = true;
        } else {
            if pending_ws {
                out.push(' ');
                pending_ws = false;
            }
            out.push(ch);
        }
    }
    out
}

/// Normalized line list of a text block, with trailing empty lines removed.
pub fn normalize(text: &str) -> Vec<String> {
    let mut lines: Vec<String> = text.lines().map(normalize_line).collect();
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    lines
}

/// Token-exact comparison under whitespace normalization.
pub fn assert_normalized_eq(actual: &str, expected: &str, what: &str) {
    let actual = normalize(actual);
    let expected = normalize(expected);
    assert_eq!(actual, expected, "{what}: normalized output differs");
}

/// Assert that the normalized `expected` lines appear as one contiguous run
/// inside the normalized `actual` text.
pub fn assert_contains_block(actual: &str, expected: &str, what: &str) {
    let actual = normalize(actual);
    let expected = normalize(expected);
    assert!(!expected.is_empty(), "{what}: empty expectation");
    let found = actual
        .windows(expected.len())
        .any(|w| w == expected.as_slice());
    assert!(
        found,
        "{what}: expected block not found.\nexpected:\n{}\nactual:\n{}",
        expected.join("\n"),
        actual.join("\n")
    );
}
