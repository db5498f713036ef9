//! Resolved program model: class table with inheritance, effective field
//! sets, and per-method def/use sets over class fields plus raw invocation
//! lists.
//!
//! Def/use is flow-insensitive: a field identifier that is the target of an
//! assignment or increment is a def, any other read occurrence is a use, and
//! a field can be both (`x = x + j`). Locals and parameters shadow fields of
//! the same name; `this.f` always resolves to the field.

use std::collections::HashMap;

use thiserror::Error;

use crate::ast::{ClassDecl, Expr, MethodDecl, Param, Span, Stmt, SyntaxTree};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SemanticError {
    #[error("duplicate class `{name}` (first declared in {first}, again in {second})")]
    DuplicateClass { name: String, first: String, second: String },
    #[error("inheritance cycle involving class `{name}`")]
    InheritanceCycle { name: String },
    #[error("field `{field}` in class `{class}` shadows an inherited field")]
    FieldShadowing { class: String, field: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldInfo {
    pub name: String,
    pub type_name: String,
    pub declaring_class: String,
    /// Position in the owning class's effective field list; drives every
    /// deterministic iteration over fields.
    pub declaration_index: usize,
}

/// A field together with the lines where the occurrence happens.
#[derive(Debug, Clone)]
pub struct FieldAccess {
    pub field: FieldInfo,
    pub lines: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReceiverType {
    /// `this` or an implicit receiver; the target is the enclosing class.
    Enclosing,
    /// A variable whose declared type is known.
    Declared(String),
    /// Receiver names nothing in scope (e.g. `Console`); treated as a static
    /// call on a class of that name.
    Unresolved,
}

#[derive(Debug, Clone)]
pub struct RawInvocation {
    pub line: u32,
    /// Source text of the receiver; `this` for explicit or implicit self.
    pub receiver_text: String,
    pub callee: String,
    pub arg_count: usize,
    pub call_text: String,
    pub receiver_type: ReceiverType,
}

#[derive(Debug, Clone)]
pub struct MethodInfo {
    pub owner: String,
    pub name: String,
    pub signature: String,
    pub params: Vec<Param>,
    pub is_constructor: bool,
    /// Fields this method assigns, ordered by declaration index.
    pub defs: Vec<FieldAccess>,
    /// Fields this method reads, ordered by declaration index.
    pub uses: Vec<FieldAccess>,
    pub invocations: Vec<RawInvocation>,
    /// Class-typed local declarations in the body, for usage analytics.
    pub local_class_types: Vec<String>,
    pub span: Span,
}

impl MethodInfo {
    pub fn defines(&self, field_name: &str) -> bool {
        self.defs.iter().any(|a| a.field.name == field_name)
    }
}

#[derive(Debug, Clone)]
pub struct ClassInfo {
    pub name: String,
    pub base: Option<String>,
    /// False when the named base is not declared in the analyzed sources.
    pub base_resolved: bool,
    pub own_fields: Vec<FieldInfo>,
    /// Inherited fields first, then own, indexed 0..n.
    pub effective_fields: Vec<FieldInfo>,
    pub constructors: Vec<MethodInfo>,
    pub methods: Vec<MethodInfo>,
    pub span: Span,
}

impl ClassInfo {
    /// Constructors and methods interleaved in source order.
    pub fn members_in_source_order(&self) -> Vec<&MethodInfo> {
        let mut members: Vec<&MethodInfo> = self.constructors.iter().chain(self.methods.iter()).collect();
        members.sort_by_key(|m| m.span.start_line);
        members
    }
}

#[derive(Debug, Clone)]
pub struct ProgramModel {
    classes: Vec<ClassInfo>,
    index: HashMap<String, usize>,
}

impl ProgramModel {
    pub fn class(&self, name: &str) -> Option<&ClassInfo> {
        self.index.get(name).map(|&i| &self.classes[i])
    }

    /// Classes in declaration order (file order, then textual order).
    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn declaration_order(&self) -> impl Iterator<Item = &str> {
        self.classes.iter().map(|c| c.name.as_str())
    }
}

/// True iff `type_name` is a class declared in the analyzed sources.
pub fn is_user_defined(type_name: &str, model: &ProgramModel) -> bool {
    !type_name.is_empty() && model.class(type_name).is_some()
}

/// Build the resolved model from parsed trees. Fails on duplicate class
/// names, inheritance cycles, and field shadowing.
pub fn build_model(trees: &[SyntaxTree]) -> Result<ProgramModel, SemanticError> {
    let mut decls: Vec<(&ClassDecl, &str)> = Vec::new();
    let mut seen: HashMap<&str, &str> = HashMap::new();
    for tree in trees {
        for class in &tree.classes {
            if let Some(first) = seen.get(class.name.as_str()) {
                return Err(SemanticError::DuplicateClass {
                    name: class.name.clone(),
                    first: first.to_string(),
                    second: tree.source_path.clone(),
                });
            }
            seen.insert(&class.name, &tree.source_path);
            decls.push((class, &tree.source_path));
        }
    }

    let by_name: HashMap<&str, &ClassDecl> = decls.iter().map(|(c, _)| (c.name.as_str(), *c)).collect();

    // Effective fields per class, bases resolved outside-in.
    let mut effective: HashMap<String, Vec<FieldInfo>> = HashMap::new();
    for (class, _) in &decls {
        compute_effective_fields(class, &by_name, &mut effective, &mut Vec::new())?;
    }

    let mut classes = Vec::new();
    let mut index = HashMap::new();
    for (class, _) in &decls {
        let fields = effective[&class.name].clone();
        let base = class.base_names.first().cloned();
        let base_resolved = base.as_deref().map(|b| by_name.contains_key(b)).unwrap_or(true);
        let constructors: Vec<MethodInfo> =
            class.constructors.iter().map(|m| extract_method(m, &class.name, &fields)).collect();
        let methods: Vec<MethodInfo> =
            class.methods.iter().map(|m| extract_method(m, &class.name, &fields)).collect();
        index.insert(class.name.clone(), classes.len());
        classes.push(ClassInfo {
            name: class.name.clone(),
            base,
            base_resolved,
            own_fields: fields.iter().filter(|f| f.declaring_class == class.name).cloned().collect(),
            effective_fields: fields,
            constructors,
            methods,
            span: class.span,
        });
    }

    Ok(ProgramModel { classes, index })
}

fn compute_effective_fields(
    class: &ClassDecl,
    by_name: &HashMap<&str, &ClassDecl>,
    memo: &mut HashMap<String, Vec<FieldInfo>>,
    in_progress: &mut Vec<String>,
) -> Result<Vec<FieldInfo>, SemanticError> {
    if let Some(done) = memo.get(&class.name) {
        return Ok(done.clone());
    }
    if in_progress.contains(&class.name) {
        return Err(SemanticError::InheritanceCycle { name: class.name.clone() });
    }
    in_progress.push(class.name.clone());

    let mut fields =
        if let Some(base) = class.base_names.first().and_then(|b| by_name.get(b.as_str())) {
            compute_effective_fields(base, by_name, memo, in_progress)?
        } else {
            Vec::new()
        };
    for decl in &class.field_decls {
        if fields.iter().any(|f| f.name == decl.name) {
            return Err(SemanticError::FieldShadowing {
                class: class.name.clone(),
                field: decl.name.clone(),
            });
        }
        fields.push(FieldInfo {
            name: decl.name.clone(),
            type_name: decl.type_name.clone(),
            declaring_class: class.name.clone(),
            declaration_index: 0,
        });
    }
    for (i, f) in fields.iter_mut().enumerate() {
        f.declaration_index = i;
    }

    in_progress.pop();
    memo.insert(class.name.clone(), fields.clone());
    Ok(fields)
}

/// Compute def/use sets and raw invocations for one method body.
pub fn extract_method(decl: &MethodDecl, owner: &str, fields: &[FieldInfo]) -> MethodInfo {
    let mut scanner = BodyScanner::new(fields);
    scanner.push_scope();
    for p in &decl.params {
        scanner.declare(&p.name, &p.type_name);
    }
    for stmt in &decl.body {
        scanner.walk_stmt(stmt);
    }
    let invocations = std::mem::take(&mut scanner.invocations);
    let local_class_types = std::mem::take(&mut scanner.local_class_types);
    let (defs, uses) = scanner.finish_sets();
    MethodInfo {
        owner: owner.to_string(),
        name: decl.name.clone(),
        signature: decl.signature(),
        params: decl.params.clone(),
        is_constructor: decl.is_constructor,
        defs,
        uses,
        invocations,
        local_class_types,
        span: decl.span,
    }
}

struct BodyScanner<'a> {
    fields: &'a [FieldInfo],
    field_index: HashMap<&'a str, usize>,
    scopes: Vec<HashMap<String, String>>,
    def_lines: HashMap<usize, Vec<u32>>,
    use_lines: HashMap<usize, Vec<u32>>,
    invocations: Vec<RawInvocation>,
    local_class_types: Vec<String>,
}

impl<'a> BodyScanner<'a> {
    fn new(fields: &'a [FieldInfo]) -> Self {
        let field_index = fields.iter().enumerate().map(|(i, f)| (f.name.as_str(), i)).collect();
        BodyScanner {
            fields,
            field_index,
            scopes: Vec::new(),
            def_lines: HashMap::new(),
            use_lines: HashMap::new(),
            invocations: Vec::new(),
            local_class_types: Vec::new(),
        }
    }

    fn push_scope(&mut self) {
        self.scopes.push(HashMap::new());
    }

    fn pop_scope(&mut self) {
        self.scopes.pop();
    }

    fn declare(&mut self, name: &str, type_name: &str) {
        if let Some(scope) = self.scopes.last_mut() {
            scope.insert(name.to_string(), type_name.to_string());
        }
    }

    fn lookup_var(&self, name: &str) -> Option<&str> {
        self.scopes.iter().rev().find_map(|s| s.get(name).map(String::as_str))
    }

    /// Field index for a bare identifier, honoring local/param shadowing.
    fn field_for_ident(&self, name: &str) -> Option<usize> {
        if self.lookup_var(name).is_some() {
            return None;
        }
        self.field_index.get(name).copied()
    }

    /// Field index for an explicit `this.name` access; shadowing does not apply.
    fn field_for_this_member(&self, name: &str) -> Option<usize> {
        self.field_index.get(name).copied()
    }

    fn record_def(&mut self, idx: usize, line: u32) {
        self.def_lines.entry(idx).or_default().push(line);
    }

    fn record_use(&mut self, idx: usize, line: u32) {
        self.use_lines.entry(idx).or_default().push(line);
    }

    fn walk_stmt(&mut self, stmt: &Stmt) {
        match stmt {
            Stmt::LocalDecl { type_name, name, init, .. } => {
                if let Some(init) = init {
                    self.walk_expr(init);
                }
                self.declare(name, type_name);
                if type_name != "int" && type_name != "string" {
                    self.local_class_types.push(type_name.clone());
                }
            }
            Stmt::Assign { target, value, .. } => {
                self.walk_assign_target(target);
                self.walk_expr(value);
            }
            Stmt::ExprStmt { expr, .. } => self.walk_expr(expr),
            Stmt::Return { value, .. } => {
                if let Some(v) = value {
                    self.walk_expr(v);
                }
            }
            Stmt::Block { stmts, .. } => {
                self.push_scope();
                for s in stmts {
                    self.walk_stmt(s);
                }
                self.pop_scope();
            }
            Stmt::If { cond, then_branch, else_branch, .. } => {
                self.walk_expr(cond);
                self.walk_stmt(then_branch);
                if let Some(e) = else_branch {
                    self.walk_stmt(e);
                }
            }
            Stmt::While { cond, body, .. } => {
                self.walk_expr(cond);
                self.walk_stmt(body);
            }
            Stmt::IncDec { target, .. } => {
                // An increment both stores and reads its target.
                match target {
                    Expr::Ident { name, line } => {
                        if let Some(idx) = self.field_for_ident(name) {
                            self.record_def(idx, *line);
                            self.record_use(idx, *line);
                        }
                    }
                    Expr::Member { receiver, name, line } => {
                        if matches!(**receiver, Expr::This { .. }) {
                            if let Some(idx) = self.field_for_this_member(name) {
                                self.record_def(idx, *line);
                                self.record_use(idx, *line);
                            }
                        } else {
                            self.walk_expr(receiver);
                        }
                    }
                    other => self.walk_expr(other),
                }
            }
        }
    }

    fn walk_assign_target(&mut self, target: &Expr) {
        match target {
            Expr::Ident { name, line } => {
                if let Some(idx) = self.field_for_ident(name) {
                    self.record_def(idx, *line);
                }
            }
            Expr::Member { receiver, name, line } => {
                if matches!(**receiver, Expr::This { .. }) {
                    if let Some(idx) = self.field_for_this_member(name) {
                        self.record_def(idx, *line);
                    }
                } else {
                    // Writing through another object only reads the receiver.
                    self.walk_expr(receiver);
                }
            }
            other => self.walk_expr(other),
        }
    }

    fn walk_expr(&mut self, expr: &Expr) {
        match expr {
            Expr::Ident { name, line } => {
                if let Some(idx) = self.field_for_ident(name) {
                    self.record_use(idx, *line);
                }
            }
            Expr::This { .. } | Expr::IntLit { .. } | Expr::StrLit { .. } => {}
            Expr::Member { receiver, name, line } => {
                if matches!(**receiver, Expr::This { .. }) {
                    if let Some(idx) = self.field_for_this_member(name) {
                        self.record_use(idx, *line);
                    }
                } else {
                    self.walk_expr(receiver);
                }
            }
            Expr::Call { receiver, callee, args, line, text } => {
                self.record_invocation(receiver.as_deref(), callee, args.len(), *line, text);
                if let Some(r) = receiver {
                    self.walk_expr(r);
                }
                for a in args {
                    self.walk_expr(a);
                }
            }
            Expr::New { args, .. } => {
                for a in args {
                    self.walk_expr(a);
                }
            }
            Expr::Binary { lhs, rhs, .. } => {
                self.walk_expr(lhs);
                self.walk_expr(rhs);
            }
            Expr::Unary { operand, .. } => self.walk_expr(operand),
        }
    }

    fn record_invocation(
        &mut self,
        receiver: Option<&Expr>,
        callee: &str,
        arg_count: usize,
        line: u32,
        text: &str,
    ) {
        let (receiver_text, receiver_type) = match receiver {
            None | Some(Expr::This { .. }) => ("this".to_string(), ReceiverType::Enclosing),
            Some(Expr::Ident { name, .. }) => {
                let ty = self
                    .lookup_var(name)
                    .map(str::to_string)
                    .or_else(|| self.field_index.get(name.as_str()).map(|&i| self.fields[i].type_name.clone()));
                match ty {
                    Some(t) => (name.clone(), ReceiverType::Declared(t)),
                    None => (name.clone(), ReceiverType::Unresolved),
                }
            }
            Some(Expr::New { class_name, text, .. }) => {
                (text.clone(), ReceiverType::Declared(class_name.clone()))
            }
            Some(other) => (other.text(), ReceiverType::Unresolved),
        };
        self.invocations.push(RawInvocation {
            line,
            receiver_text,
            callee: callee.to_string(),
            arg_count,
            call_text: text.to_string(),
            receiver_type,
        });
    }

    fn finish_sets(self) -> (Vec<FieldAccess>, Vec<FieldAccess>) {
        let collect = |map: HashMap<usize, Vec<u32>>, fields: &[FieldInfo]| {
            let mut entries: Vec<(usize, Vec<u32>)> = map.into_iter().collect();
            entries.sort_by_key(|(idx, _)| *idx);
            entries
                .into_iter()
                .map(|(idx, mut lines)| {
                    lines.sort_unstable();
                    lines.dedup();
                    FieldAccess { field: fields[idx].clone(), lines }
                })
                .collect::<Vec<_>>()
        };
        let defs = collect(self.def_lines, self.fields);
        let uses = collect(self.use_lines, self.fields);
        (defs, uses)
    }
}
