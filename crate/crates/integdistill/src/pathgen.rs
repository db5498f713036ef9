//! Test path generation.
//!
//! For each coupling method a tree is grown: the children of a node are the
//! same-class methods that define a field the node uses. Expansion at a node
//! iterates its used fields by declaration index and, per field, the
//! definers in method declaration order. A candidate already on the current
//! root path is skipped (cycle avoidance) and a method already attached to
//! the node is not attached twice: the first triggering field wins and is
//! the only one logged. Each accepted (parent, field, child) link appends
//! one def-use edge, so the log order follows tree discovery. Root-to-leaf
//! walks of the tree are the test paths; execution runs them leaf first.

use thiserror::Error;

use crate::coupling::CouplingMethod;
use crate::semantic::{is_user_defined, ClassInfo, MethodInfo, ProgramModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefUseEdge {
    pub class: String,
    pub from_method: String,
    pub field: String,
    pub to_method: String,
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub method_name: String,
    pub signature: String,
    pub children: Vec<usize>,
}

/// Tree of same-class methods rooted at a coupling method. Node 0 is the
/// root; child ids index into `nodes`.
#[derive(Debug, Clone)]
pub struct PathTree {
    pub class: String,
    nodes: Vec<TreeNode>,
}

impl PathTree {
    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    Method,
    Constructor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathNode {
    pub class: String,
    pub signature: String,
}

#[derive(Debug, Clone)]
pub struct TestPath {
    /// 1-based id, numbered globally across all trees.
    pub id: usize,
    pub kind: PathKind,
    /// Root-to-leaf method signatures; execution order is the reverse.
    pub nodes: Vec<PathNode>,
    pub length: usize,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PathGenError {
    #[error("no constructor chain can instantiate class `{class}`")]
    UnconstructibleDependency { class: String },
}

/// Non-constructor methods of `class` that define `field_name`, in method
/// declaration order. Constructors define fields too but are excluded here;
/// constructor coupling is reported as separate single-node paths.
pub fn definers_of<'m>(field_name: &str, class: &'m ClassInfo) -> Vec<&'m MethodInfo> {
    class.methods.iter().filter(|m| m.defines(field_name)).collect()
}

/// Grow the def-use tree for one coupling method and collect the edge log.
pub fn build_tree(coupling: &CouplingMethod, model: &ProgramModel) -> (PathTree, Vec<DefUseEdge>) {
    let class = model.class(&coupling.class).expect("coupling method owner is in the model");
    let root_info = class
        .methods
        .iter()
        .find(|m| m.signature == coupling.signature)
        .expect("coupling method is declared in its owner");

    let mut nodes = vec![TreeNode {
        method_name: root_info.name.clone(),
        signature: root_info.signature.clone(),
        children: Vec::new(),
    }];
    let mut infos: Vec<&MethodInfo> = vec![root_info];
    let mut edges = Vec::new();
    let mut path = vec![root_info.name.clone()];
    expand(0, &mut nodes, &mut infos, &mut edges, &mut path, class);

    (PathTree { class: class.name.clone(), nodes }, edges)
}

fn expand<'m>(
    node_id: usize,
    nodes: &mut Vec<TreeNode>,
    infos: &mut Vec<&'m MethodInfo>,
    edges: &mut Vec<DefUseEdge>,
    path: &mut Vec<String>,
    class: &'m ClassInfo,
) {
    // Attach all children of this node first, logging each accepted link,
    // then descend; this keeps the edge log grouped per parent.
    let uses = infos[node_id].uses.clone();
    for access in &uses {
        for definer in definers_of(&access.field.name, class) {
            if path.contains(&definer.name) {
                continue;
            }
            let already_child = nodes[node_id]
                .children
                .iter()
                .any(|&c| nodes[c].method_name == definer.name);
            if already_child {
                continue;
            }
            let child_id = nodes.len();
            nodes.push(TreeNode {
                method_name: definer.name.clone(),
                signature: definer.signature.clone(),
                children: Vec::new(),
            });
            infos.push(definer);
            nodes[node_id].children.push(child_id);
            edges.push(DefUseEdge {
                class: class.name.clone(),
                from_method: nodes[node_id].method_name.clone(),
                field: access.field.name.clone(),
                to_method: definer.name.clone(),
            });
        }
    }

    let children = nodes[node_id].children.clone();
    for child in children {
        path.push(nodes[child].method_name.clone());
        expand(child, nodes, infos, edges, path, class);
        path.pop();
    }
}

/// Enumerate root-to-leaf test paths over all trees in order, then append
/// one single-node path per coupling constructor. Ids run 1..N globally.
pub fn enumerate_paths(trees: &[PathTree], constructors: &[CouplingMethod]) -> Vec<TestPath> {
    let mut paths = Vec::new();
    for tree in trees {
        let mut stack = Vec::new();
        collect_paths(tree, tree.root(), &mut stack, &mut paths);
    }
    let mut out: Vec<TestPath> = paths
        .into_iter()
        .enumerate()
        .map(|(i, nodes)| TestPath { id: i + 1, kind: PathKind::Method, length: nodes.len(), nodes })
        .collect();
    for ctor in constructors {
        out.push(TestPath {
            id: out.len() + 1,
            kind: PathKind::Constructor,
            nodes: vec![PathNode { class: ctor.class.clone(), signature: ctor.signature.clone() }],
            length: 1,
        });
    }
    out
}

fn collect_paths(tree: &PathTree, node: usize, stack: &mut Vec<PathNode>, out: &mut Vec<Vec<PathNode>>) {
    stack.push(PathNode { class: tree.class.clone(), signature: tree.node(node).signature.clone() });
    if tree.node(node).children.is_empty() {
        out.push(stack.clone());
    } else {
        for &child in &tree.node(node).children {
            collect_paths(tree, child, stack, out);
        }
    }
    stack.pop();
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExecStep {
    /// `Class var = new Class(args);`
    Instantiate { var: String, class: String, args: Vec<String> },
    /// `receiver.method(...)`
    Call { receiver_var: String, method: String },
}

impl ExecStep {
    pub fn render(&self) -> String {
        match self {
            ExecStep::Instantiate { var, class, args } => {
                format!("{class} {var} = new {class}({})", args.join(", "))
            }
            ExecStep::Call { receiver_var, method } => format!("{receiver_var}.{method}()"),
        }
    }
}

/// Concrete call sequence for a path: instantiate the owner, instantiate one
/// fresh object per user-defined-class parameter of the coupling method,
/// then call the path methods leaf first. Instantiation uses a class's
/// parameterless constructor when one exists (classes without declared
/// constructors have an implicit one), otherwise its first declared
/// constructor with its own parameters satisfied recursively.
pub fn execution_order(path: &TestPath, model: &ProgramModel) -> Result<Vec<ExecStep>, PathGenError> {
    let mut steps = Vec::new();
    let mut namer = VarNamer::default();
    let root = &path.nodes[0];
    let class = model
        .class(&root.class)
        .ok_or_else(|| PathGenError::UnconstructibleDependency { class: root.class.clone() })?;

    if path.kind == PathKind::Constructor {
        let ctor = class
            .constructors
            .iter()
            .find(|c| c.signature == root.signature)
            .expect("coupling constructor is declared in its owner");
        let mut args = Vec::new();
        for p in &ctor.params {
            args.push(argument_for(&p.type_name, Some(&p.name), model, &mut steps, &mut namer, &mut Vec::new())?);
        }
        let var = namer.fresh(&root.class);
        steps.push(ExecStep::Instantiate { var, class: root.class.clone(), args });
        return Ok(steps);
    }

    let coupling_method = class
        .methods
        .iter()
        .find(|m| m.signature == root.signature)
        .expect("coupling method is declared in its owner");
    let owner_var = construct(&root.class, model, &mut steps, &mut namer, &mut Vec::new())?;
    for p in &coupling_method.params {
        if is_user_defined(&p.type_name, model) {
            argument_for(&p.type_name, Some(&p.name), model, &mut steps, &mut namer, &mut Vec::new())?;
        }
    }
    for node in path.nodes.iter().rev() {
        let method = node.signature.split('(').next().unwrap_or(&node.signature).to_string();
        steps.push(ExecStep::Call { receiver_var: owner_var.clone(), method });
    }
    Ok(steps)
}

#[derive(Default)]
struct VarNamer {
    used: Vec<String>,
}

impl VarNamer {
    fn fresh(&mut self, class: &str) -> String {
        let base: String = class.chars().take(1).flat_map(char::to_lowercase).collect();
        let base = if base.is_empty() { "v".to_string() } else { base };
        let mut candidate = base.clone();
        let mut n = 1;
        while self.used.contains(&candidate) {
            n += 1;
            candidate = format!("{base}{n}");
        }
        self.used.push(candidate.clone());
        candidate
    }

    fn claim(&mut self, name: &str) -> Option<String> {
        if self.used.iter().any(|u| u == name) {
            return None;
        }
        self.used.push(name.to_string());
        Some(name.to_string())
    }
}

fn argument_for(
    type_name: &str,
    preferred_var: Option<&str>,
    model: &ProgramModel,
    steps: &mut Vec<ExecStep>,
    namer: &mut VarNamer,
    in_progress: &mut Vec<String>,
) -> Result<String, PathGenError> {
    match type_name {
        "int" => Ok("0".to_string()),
        "string" => Ok("\"\"".to_string()),
        class if model.class(class).is_some() => {
            construct_named(class, preferred_var, model, steps, namer, in_progress)
        }
        class => Err(PathGenError::UnconstructibleDependency { class: class.to_string() }),
    }
}

fn construct(
    class_name: &str,
    model: &ProgramModel,
    steps: &mut Vec<ExecStep>,
    namer: &mut VarNamer,
    in_progress: &mut Vec<String>,
) -> Result<String, PathGenError> {
    construct_named(class_name, None, model, steps, namer, in_progress)
}

fn construct_named(
    class_name: &str,
    preferred_var: Option<&str>,
    model: &ProgramModel,
    steps: &mut Vec<ExecStep>,
    namer: &mut VarNamer,
    in_progress: &mut Vec<String>,
) -> Result<String, PathGenError> {
    let class = model
        .class(class_name)
        .ok_or_else(|| PathGenError::UnconstructibleDependency { class: class_name.to_string() })?;
    if in_progress.iter().any(|c| c == class_name) {
        return Err(PathGenError::UnconstructibleDependency { class: class_name.to_string() });
    }
    in_progress.push(class_name.to_string());

    let parameterless = class.constructors.is_empty()
        || class.constructors.iter().any(|c| c.params.is_empty());
    let mut args = Vec::new();
    if !parameterless {
        let ctor = &class.constructors[0];
        for p in &ctor.params {
            args.push(argument_for(&p.type_name, None, model, steps, namer, in_progress)?);
        }
    }

    in_progress.pop();
    let var = preferred_var
        .and_then(|p| namer.claim(p))
        .unwrap_or_else(|| namer.fresh(class_name));
    steps.push(ExecStep::Instantiate { var: var.clone(), class: class_name.to_string(), args });
    Ok(var)
}
