//! Invocation point detection and aggregation.
//!
//! An invocation point is a call site whose target class differs from the
//! enclosing class. Same-class calls are excluded whether they go through
//! `this` or another instance of the same class, and object creations are
//! not calls. A receiver that names nothing in scope (such as `Console`) is
//! treated as a static call on a class of that name and classified as not
//! user-defined.

use crate::semantic::{is_user_defined, ProgramModel, ReceiverType};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvocationPoint {
    pub line: u32,
    pub call_text: String,
    pub target_class: String,
    pub user_defined: bool,
    /// Target appears in the configured builtin/platform class list.
    pub builtin: bool,
    pub enclosing_class: String,
    pub enclosing_method: String,
    pub receiver_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodInvocationStats {
    pub method: String,
    pub total: usize,
    pub user_defined: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInvocationStats {
    pub class: String,
    pub total: usize,
    pub user_defined: usize,
    /// Non-constructor methods in declaration order, zero counts included.
    pub methods: Vec<MethodInvocationStats>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvocationSummary {
    pub classes: Vec<ClassInvocationStats>,
}

/// All cross-class call sites, per class in declaration order and in source
/// order within a class.
pub fn find_invocation_points(model: &ProgramModel, builtin_classes: &[String]) -> Vec<InvocationPoint> {
    let mut points = Vec::new();
    for class in model.classes() {
        for member in class.members_in_source_order() {
            for raw in &member.invocations {
                let target = match &raw.receiver_type {
                    ReceiverType::Enclosing => class.name.clone(),
                    ReceiverType::Declared(ty) => ty.clone(),
                    ReceiverType::Unresolved => raw.receiver_text.clone(),
                };
                if target == class.name {
                    continue;
                }
                points.push(InvocationPoint {
                    line: raw.line,
                    call_text: raw.call_text.clone(),
                    user_defined: is_user_defined(&target, model),
                    builtin: builtin_classes.contains(&target),
                    target_class: target,
                    enclosing_class: class.name.clone(),
                    enclosing_method: member.name.clone(),
                    receiver_text: raw.receiver_text.clone(),
                });
            }
        }
    }
    points
}

/// Per-class totals and per-method breakdown. Constructor points count
/// toward the class total; the breakdown lists ordinary methods only.
pub fn summarize(points: &[InvocationPoint], model: &ProgramModel) -> InvocationSummary {
    let classes = model
        .classes()
        .iter()
        .map(|class| {
            let class_points: Vec<&InvocationPoint> =
                points.iter().filter(|p| p.enclosing_class == class.name).collect();
            let methods = class
                .methods
                .iter()
                .map(|m| {
                    let mine: Vec<&&InvocationPoint> =
                        class_points.iter().filter(|p| p.enclosing_method == m.name).collect();
                    MethodInvocationStats {
                        method: m.name.clone(),
                        total: mine.len(),
                        user_defined: mine.iter().filter(|p| p.user_defined).count(),
                    }
                })
                .collect();
            ClassInvocationStats {
                class: class.name.clone(),
                total: class_points.len(),
                user_defined: class_points.iter().filter(|p| p.user_defined).count(),
                methods,
            }
        })
        .collect();
    InvocationSummary { classes }
}
