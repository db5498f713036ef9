//! Span-annotated syntax trees for MiniOO.
//!
//! Every node records the 1-based source lines it covers. The tree also
//! keeps the full token stream so [`crate::parser::emit`] can reproduce the
//! original text byte for byte.

use crate::lexer::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start_line: u32,
    pub end_line: u32,
}

impl Span {
    pub fn new(start_line: u32, end_line: u32) -> Self {
        Span { start_line, end_line }
    }

    pub fn contains_line(&self, line: u32) -> bool {
        self.start_line <= line && line <= self.end_line
    }
}

#[derive(Debug, Clone)]
pub struct SyntaxTree {
    pub source_path: String,
    pub classes: Vec<ClassDecl>,
    /// Full token stream including trivia; used for lossless emit.
    pub tokens: Vec<Token>,
}

#[derive(Debug, Clone)]
pub struct ClassDecl {
    pub name: String,
    /// Zero or one base class names (single inheritance).
    pub base_names: Vec<String>,
    pub field_decls: Vec<FieldDecl>,
    pub constructors: Vec<MethodDecl>,
    pub methods: Vec<MethodDecl>,
    pub span: Span,
}

/// One declarator of a field declaration line. A multi-declarator line like
/// `private int var1, var2, var3;` yields three entries in textual order.
#[derive(Debug, Clone)]
pub struct FieldDecl {
    pub name: String,
    pub type_name: String,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<Param>,
    /// Exact source text between the parameter parentheses.
    pub params_text: String,
    pub body: Vec<Stmt>,
    pub is_constructor: bool,
    pub span: Span,
    /// Span of the braced body; statements live strictly inside it.
    pub body_span: Span,
}

impl MethodDecl {
    /// Signature as printed in reports, e.g. `CM7(B b, A a)`. The parameter
    /// list keeps its source spelling.
    pub fn signature(&self) -> String {
        format!("{}({})", self.name, self.params_text)
    }
}

#[derive(Debug, Clone)]
pub struct Param {
    pub name: String,
    pub type_name: String,
}

#[derive(Debug, Clone)]
pub enum Stmt {
    LocalDecl { type_name: String, name: String, init: Option<Expr>, span: Span },
    Assign { target: Expr, value: Expr, span: Span },
    ExprStmt { expr: Expr, span: Span },
    Return { value: Option<Expr>, span: Span },
    Block { stmts: Vec<Stmt>, span: Span },
    If { cond: Expr, then_branch: Box<Stmt>, else_branch: Option<Box<Stmt>>, span: Span },
    While { cond: Expr, body: Box<Stmt>, span: Span },
    IncDec { target: Expr, increment: bool, prefix: bool, span: Span },
}

impl Stmt {
    pub fn span(&self) -> Span {
        match self {
            Stmt::LocalDecl { span, .. }
            | Stmt::Assign { span, .. }
            | Stmt::ExprStmt { span, .. }
            | Stmt::Return { span, .. }
            | Stmt::Block { span, .. }
            | Stmt::If { span, .. }
            | Stmt::While { span, .. }
            | Stmt::IncDec { span, .. } => *span,
        }
    }

    pub fn line(&self) -> u32 {
        self.span().start_line
    }
}

#[derive(Debug, Clone)]
pub enum Expr {
    Ident { name: String, line: u32 },
    This { line: u32 },
    /// `receiver.name` where the member is read or written, not called.
    Member { receiver: Box<Expr>, name: String, line: u32 },
    /// A call. `receiver` is `None` for bare calls like `CM5()`.
    Call { receiver: Option<Box<Expr>>, callee: String, args: Vec<Expr>, line: u32, text: String },
    New { class_name: String, args: Vec<Expr>, line: u32, text: String },
    Binary { op: String, lhs: Box<Expr>, rhs: Box<Expr>, line: u32 },
    Unary { op: String, operand: Box<Expr>, line: u32 },
    IntLit { text: String, line: u32 },
    StrLit { text: String, line: u32 },
}

impl Expr {
    pub fn line(&self) -> u32 {
        match self {
            Expr::Ident { line, .. }
            | Expr::This { line }
            | Expr::Member { line, .. }
            | Expr::Call { line, .. }
            | Expr::New { line, .. }
            | Expr::Binary { line, .. }
            | Expr::Unary { line, .. }
            | Expr::IntLit { line, .. }
            | Expr::StrLit { line, .. } => *line,
        }
    }

    /// Source text of the expression as written, used for receiver and call
    /// text in reports.
    pub fn text(&self) -> String {
        match self {
            Expr::Ident { name, .. } => name.clone(),
            Expr::This { .. } => "this".to_string(),
            Expr::Member { receiver, name, .. } => format!("{}.{}", receiver.text(), name),
            Expr::Call { text, .. } => text.clone(),
            Expr::New { text, .. } => text.clone(),
            Expr::Binary { op, lhs, rhs, .. } => format!("{} {} {}", lhs.text(), op, rhs.text()),
            Expr::Unary { op, operand, .. } => format!("{}{}", op, operand.text()),
            Expr::IntLit { text, .. } => text.clone(),
            Expr::StrLit { text, .. } => text.clone(),
        }
    }
}
