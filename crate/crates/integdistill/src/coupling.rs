//! Parameter-coupling detection and per-class integration analytics.
//!
//! A coupling method is a method (or constructor) with at least one
//! parameter whose type is a user-defined class. Analytics cover method and
//! constructor counts, parameter maxima, coupling degree, base types, and
//! which class the rest of the program leans on most.

use std::collections::BTreeSet;

use crate::semantic::{is_user_defined, MethodInfo, ProgramModel};

#[derive(Debug, Clone)]
pub struct CouplingMethod {
    pub class: String,
    pub method_name: String,
    pub signature: String,
    pub is_constructor: bool,
    /// `(parameter name, class name)` pairs, in parameter order.
    pub coupling_params: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMetrics {
    pub class: String,
    pub method_count: usize,
    pub constructor_count: usize,
    pub max_params_over_methods: usize,
    pub coupling_degree: usize,
    pub base_names: Vec<String>,
    pub base_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassUsage {
    pub class: String,
    pub times_as_method_parameter: usize,
    pub times_as_variable_type: usize,
}

#[derive(Debug, Clone)]
pub struct UsageStats {
    pub per_class: Vec<ClassUsage>,
    pub most_used: Option<String>,
}

fn coupling_params(method: &MethodInfo, model: &ProgramModel) -> Vec<(String, String)> {
    method
        .params
        .iter()
        .filter(|p| is_user_defined(&p.type_name, model))
        .map(|p| (p.name.clone(), p.type_name.clone()))
        .collect()
}

fn to_coupling(method: &MethodInfo, model: &ProgramModel) -> Option<CouplingMethod> {
    let params = coupling_params(method, model);
    if params.is_empty() {
        return None;
    }
    Some(CouplingMethod {
        class: method.owner.clone(),
        method_name: method.name.clone(),
        signature: method.signature.clone(),
        is_constructor: method.is_constructor,
        coupling_params: params,
    })
}

/// Ordinary methods with at least one user-defined-class parameter, in
/// class-then-method declaration order. Visibility is ignored and a
/// parameter of the method's own class counts (self-coupling).
pub fn find_coupling_methods(model: &ProgramModel) -> Vec<CouplingMethod> {
    model
        .classes()
        .iter()
        .flat_map(|c| c.methods.iter())
        .filter_map(|m| to_coupling(m, model))
        .collect()
}

/// Constructors with at least one user-defined-class parameter.
pub fn find_coupling_constructors(model: &ProgramModel) -> Vec<CouplingMethod> {
    model
        .classes()
        .iter()
        .flat_map(|c| c.constructors.iter())
        .filter_map(|m| to_coupling(m, model))
        .collect()
}

/// Metrics for one class. Constructor parameters count toward both the
/// parameter maximum and the coupling degree.
pub fn class_metrics(model: &ProgramModel, class_name: &str) -> Option<ClassMetrics> {
    let class = model.class(class_name)?;
    let callables = || class.constructors.iter().chain(class.methods.iter());
    let mut coupled: BTreeSet<&str> = BTreeSet::new();
    for m in callables() {
        for p in &m.params {
            if p.type_name != class.name && is_user_defined(&p.type_name, model) {
                coupled.insert(&p.type_name);
            }
        }
    }
    Some(ClassMetrics {
        class: class.name.clone(),
        method_count: class.methods.len(),
        constructor_count: class.constructors.len(),
        max_params_over_methods: callables().map(|m| m.params.len()).max().unwrap_or(0),
        coupling_degree: coupled.len(),
        base_names: class.base.clone().into_iter().collect(),
        base_count: class.base.iter().count(),
    })
}

/// Per-class usage counts and the most-used class. Ties break by
/// variable-type count, then class declaration order.
pub fn usage_stats(model: &ProgramModel) -> UsageStats {
    let mut per_class: Vec<ClassUsage> = model
        .classes()
        .iter()
        .map(|c| ClassUsage {
            class: c.name.clone(),
            times_as_method_parameter: 0,
            times_as_variable_type: 0,
        })
        .collect();

    for class in model.classes() {
        for m in class.constructors.iter().chain(class.methods.iter()) {
            for p in &m.params {
                if let Some(u) = per_class.iter_mut().find(|u| u.class == p.type_name) {
                    u.times_as_method_parameter += 1;
                }
            }
            for ty in &m.local_class_types {
                if let Some(u) = per_class.iter_mut().find(|u| u.class == *ty) {
                    u.times_as_variable_type += 1;
                }
            }
        }
    }

    let most_used = per_class
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            (a.times_as_method_parameter, a.times_as_variable_type, std::cmp::Reverse(*ia)).cmp(&(
                b.times_as_method_parameter,
                b.times_as_variable_type,
                std::cmp::Reverse(*ib),
            ))
        })
        .map(|(_, u)| u.class.clone());

    UsageStats { per_class, most_used }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::semantic::build_model;

    const DEMO: &str = include_str!("../tests/fixtures/demo.moo");

    fn demo_model() -> ProgramModel {
        build_model(&[parse(DEMO, "demo.moo").unwrap()]).unwrap()
    }

    #[test]
    fn demo_coupling_methods_in_order() {
        let model = demo_model();
        let found = find_coupling_methods(&model);
        let sigs: Vec<_> = found.iter().map(|c| format!("{}.{}", c.class, c.signature)).collect();
        assert_eq!(
            sigs,
            vec![
                "B.BM1(int test,A a)",
                "B.BM2(int test,A a, int x1, int x2, int x3)",
                "C.CM7(B b, A a)",
            ]
        );
        assert_eq!(found[2].coupling_params, vec![("b".into(), "B".into()), ("a".into(), "A".into())]);
    }

    #[test]
    fn demo_coupling_constructors() {
        let model = demo_model();
        let found = find_coupling_constructors(&model);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].class, "C");
        assert_eq!(found[0].signature, "C(B b)");
        assert!(found[0].is_constructor);
    }

    #[test]
    fn int_only_params_never_couple() {
        let model = demo_model();
        // B's constructors take only ints.
        assert!(find_coupling_constructors(&model).iter().all(|c| c.class != "B"));
        let src = "class A { void m(int a, string b) {} }";
        let model = build_model(&[parse(src, "a.moo").unwrap()]).unwrap();
        assert!(find_coupling_methods(&model).is_empty());
        assert!(find_coupling_constructors(&model).is_empty());
    }

    #[test]
    fn own_class_parameter_is_self_coupling() {
        let src = "class A { void m(A other) {} }";
        let model = build_model(&[parse(src, "a.moo").unwrap()]).unwrap();
        let found = find_coupling_methods(&model);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].coupling_params, vec![("other".into(), "A".into())]);
        // Self-coupling does not raise the coupling degree.
        assert_eq!(class_metrics(&model, "A").unwrap().coupling_degree, 0);
    }

    #[test]
    fn demo_metrics_for_b() {
        let m = class_metrics(&demo_model(), "B").unwrap();
        assert_eq!(m.method_count, 3);
        assert_eq!(m.constructor_count, 2);
        assert_eq!(m.max_params_over_methods, 5);
        assert_eq!(m.coupling_degree, 1);
        assert_eq!(m.base_names, vec!["A"]);
        assert_eq!(m.base_count, 1);
    }

    #[test]
    fn demo_metrics_for_a_and_c() {
        let model = demo_model();
        let a = class_metrics(&model, "A").unwrap();
        assert_eq!((a.method_count, a.constructor_count, a.coupling_degree), (0, 0, 0));
        assert_eq!(a.max_params_over_methods, 0);
        assert_eq!(a.base_count, 0);
        let c = class_metrics(&model, "C").unwrap();
        assert_eq!(c.method_count, 7);
        assert_eq!(c.constructor_count, 1);
        assert_eq!(c.max_params_over_methods, 2);
        assert_eq!(c.coupling_degree, 2); // A and B
        assert_eq!(c.base_count, 0);
    }

    #[test]
    fn demo_usage_counts() {
        let stats = usage_stats(&demo_model());
        let a = stats.per_class.iter().find(|u| u.class == "A").unwrap();
        assert_eq!((a.times_as_method_parameter, a.times_as_variable_type), (3, 0));
        let b = stats.per_class.iter().find(|u| u.class == "B").unwrap();
        // CM7 and C's constructor take a B; CM6 declares `B b1`.
        assert_eq!((b.times_as_method_parameter, b.times_as_variable_type), (2, 1));
        assert_eq!(stats.most_used.as_deref(), Some("A"));
    }

    #[test]
    fn single_class_program_is_its_own_most_used() {
        let model = build_model(&[parse("class Solo { void m() {} }", "s.moo").unwrap()]).unwrap();
        let stats = usage_stats(&model);
        assert_eq!(stats.most_used.as_deref(), Some("Solo"));
        assert_eq!(stats.per_class[0].times_as_method_parameter, 0);
        assert_eq!(stats.per_class[0].times_as_variable_type, 0);
    }

    #[test]
    fn most_used_tie_breaks_by_declaration_order() {
        let src = "class A {}\nclass B {}\nclass U { void m(B b, A a) {} }";
        let model = build_model(&[parse(src, "t.moo").unwrap()]).unwrap();
        let stats = usage_stats(&model);
        assert_eq!(stats.most_used.as_deref(), Some("A"));
    }
}
