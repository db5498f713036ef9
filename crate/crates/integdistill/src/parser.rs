//! Recursive descent parser for MiniOO and the matching lossless emitter.
//!
//! Parsing stops at the first error. `emit(&parse(s)?) == s` for every
//! parseable `s` because the tree keeps the original token stream.

use thiserror::Error;

use crate::ast::{ClassDecl, Expr, FieldDecl, MethodDecl, Param, Span, Stmt, SyntaxTree};
use crate::lexer::{self, Token, TokenKind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub message: String,
    pub line: u32,
    pub column: u32,
}

impl From<lexer::LexError> for ParseError {
    fn from(e: lexer::LexError) -> Self {
        ParseError { message: e.message, line: e.line, column: e.column }
    }
}

/// Parse MiniOO source into a syntax tree. `path` is recorded for messages
/// and reports only; it is not read.
pub fn parse(source: &str, path: &str) -> Result<SyntaxTree, ParseError> {
    let tokens = lexer::tokenize(source)?;
    let mut p = Parser { tokens: &tokens, pos: 0 };
    let mut classes = Vec::new();
    while !p.at_eof() {
        classes.push(p.parse_class()?);
    }
    Ok(SyntaxTree { source_path: path.to_string(), classes, tokens })
}

/// Emit the tree back to source text, byte-identical for unmodified trees.
pub fn emit(tree: &SyntaxTree) -> String {
    lexer::reassemble(&tree.tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_ahead(&self, n: usize) -> &Token {
        let idx = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[idx]
    }

    fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError { message: message.into(), line: t.line, column: t.column })
    }

    fn describe(&self) -> String {
        let t = self.peek();
        if t.kind == TokenKind::Eof {
            "end of file".to_string()
        } else {
            format!("`{}`", t.lexeme)
        }
    }

    fn expect(&mut self, lexeme: &str) -> Result<&Token, ParseError> {
        if self.peek().is(lexeme) {
            Ok(self.bump())
        } else {
            let found = self.describe();
            self.error(format!("expected `{lexeme}`, found {found}"))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, u32), ParseError> {
        if self.peek().kind == TokenKind::Ident {
            let t = self.bump();
            Ok((t.lexeme.clone(), t.line))
        } else {
            let found = self.describe();
            self.error(format!("expected identifier, found {found}"))
        }
    }

    /// Exact source text of tokens `start..=end`, excluding the leading
    /// trivia of the first token.
    fn slice_text(&self, start: usize, end: usize) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens[start..=end].iter().enumerate() {
            if i > 0 {
                out.push_str(&t.leading);
            }
            out.push_str(&t.lexeme);
        }
        out
    }

    fn skip_modifiers(&mut self) {
        while self.peek().is("public") || self.peek().is("private") {
            self.bump();
        }
    }

    fn parse_class(&mut self) -> Result<ClassDecl, ParseError> {
        self.skip_modifiers();
        let start_line = self.peek().line;
        self.expect("class")?;
        let (name, _) = self.expect_ident()?;
        let mut base_names = Vec::new();
        if self.peek().is(":") {
            self.bump();
            base_names.push(self.expect_ident()?.0);
        }
        self.expect("{")?;
        let mut field_decls = Vec::new();
        let mut constructors = Vec::new();
        let mut methods = Vec::new();
        while !self.peek().is("}") {
            if self.at_eof() {
                return self.error("expected `}` before end of file");
            }
            self.parse_member(&name, &mut field_decls, &mut constructors, &mut methods)?;
        }
        let end = self.bump();
        let span = Span::new(start_line, end.line);
        Ok(ClassDecl { name, base_names, field_decls, constructors, methods, span })
    }

    fn parse_member(
        &mut self,
        class_name: &str,
        fields: &mut Vec<FieldDecl>,
        constructors: &mut Vec<MethodDecl>,
        methods: &mut Vec<MethodDecl>,
    ) -> Result<(), ParseError> {
        let start_line = self.peek().line;
        self.skip_modifiers();

        // Constructor: the class's own name followed by `(`.
        if self.peek().kind == TokenKind::Ident
            && self.peek().lexeme == class_name
            && self.peek_ahead(1).is("(")
        {
            let (name, _) = self.expect_ident()?;
            constructors.push(self.parse_callable(name, true, start_line)?);
            return Ok(());
        }

        let type_name = self.parse_type_or_void()?;
        let (name, name_line) = self.expect_ident()?;
        if self.peek().is("(") {
            methods.push(self.parse_callable(name, false, start_line)?);
            return Ok(());
        }
        if type_name == "void" {
            return self.error("expected `(` after method name");
        }
        // Field declaration, possibly with several declarators.
        fields.push(FieldDecl {
            name,
            type_name: type_name.clone(),
            span: Span::new(name_line, name_line),
        });
        while self.peek().is(",") {
            self.bump();
            let (next, line) = self.expect_ident()?;
            fields.push(FieldDecl { name: next, type_name: type_name.clone(), span: Span::new(line, line) });
        }
        self.expect(";")?;
        Ok(())
    }

    fn parse_type_or_void(&mut self) -> Result<String, ParseError> {
        let t = self.peek();
        if t.is("void") || t.is("int") || t.is("string") || t.kind == TokenKind::Ident {
            Ok(self.bump().lexeme.clone())
        } else {
            let found = self.describe();
            self.error(format!("expected type, found {found}"))
        }
    }

    fn parse_type(&mut self) -> Result<String, ParseError> {
        let t = self.peek();
        if t.is("int") || t.is("string") || t.kind == TokenKind::Ident {
            Ok(self.bump().lexeme.clone())
        } else {
            let found = self.describe();
            self.error(format!("expected type, found {found}"))
        }
    }

    fn parse_callable(
        &mut self,
        name: String,
        is_constructor: bool,
        start_line: u32,
    ) -> Result<MethodDecl, ParseError> {
        self.expect("(")?;
        let params_start = self.pos;
        let mut params = Vec::new();
        if !self.peek().is(")") {
            loop {
                let type_name = self.parse_type()?;
                let (pname, _) = self.expect_ident()?;
                params.push(Param { name: pname, type_name });
                if self.peek().is(",") {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        let params_text = if self.pos > params_start {
            self.slice_text(params_start, self.pos - 1)
        } else {
            String::new()
        };
        self.expect(")")?;
        let body_start_line = self.peek().line;
        let (body, body_end_line) = self.parse_block_body()?;
        Ok(MethodDecl {
            name,
            params,
            params_text,
            body,
            is_constructor,
            span: Span::new(start_line, body_end_line),
            body_span: Span::new(body_start_line, body_end_line),
        })
    }

    /// Parse `{ stmt* }`, returning the statements and the closing-brace line.
    fn parse_block_body(&mut self) -> Result<(Vec<Stmt>, u32), ParseError> {
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.peek().is("}") {
            if self.at_eof() {
                return self.error("expected `}` before end of file");
            }
            stmts.push(self.parse_stmt()?);
        }
        let end = self.bump();
        Ok((stmts, end.line))
    }

    fn parse_stmt(&mut self) -> Result<Stmt, ParseError> {
        let t = self.peek();
        let start_line = t.line;

        if t.is("{") {
            let (stmts, end_line) = self.parse_block_body()?;
            return Ok(Stmt::Block { stmts, span: Span::new(start_line, end_line) });
        }
        if t.is("return") {
            self.bump();
            let value = if self.peek().is(";") { None } else { Some(self.parse_expr()?) };
            let end = self.expect(";")?.line;
            return Ok(Stmt::Return { value, span: Span::new(start_line, end) });
        }
        if t.is("if") {
            self.bump();
            self.expect("(")?;
            let cond = self.parse_expr()?;
            self.expect(")")?;
            let then_branch = Box::new(self.parse_stmt()?);
            let mut end_line = then_branch.span().end_line;
            let else_branch = if self.peek().is("else") {
                self.bump();
                let e = Box::new(self.parse_stmt()?);
                end_line = e.span().end_line;
                Some(e)
            } else {
                None
            };
            return Ok(Stmt::If { cond, then_branch, else_branch, span: Span::new(start_line, end_line) });
        }
        if t.is("while") {
            self.bump();
            self.expect("(")?;
            let cond = self.parse_expr()?;
            self.expect(")")?;
            let body = Box::new(self.parse_stmt()?);
            let end_line = body.span().end_line;
            return Ok(Stmt::While { cond, body, span: Span::new(start_line, end_line) });
        }
        if t.is("++") || t.is("--") {
            let increment = t.is("++");
            self.bump();
            let target = self.parse_postfix_expr()?;
            self.require_lvalue(&target)?;
            let end = self.expect(";")?.line;
            return Ok(Stmt::IncDec { target, increment, prefix: true, span: Span::new(start_line, end) });
        }
        if t.is("int") || t.is("string") || (t.kind == TokenKind::Ident && self.peek_ahead(1).kind == TokenKind::Ident) {
            let type_name = self.parse_type()?;
            let (name, _) = self.expect_ident()?;
            let init = if self.peek().is("=") {
                self.bump();
                Some(self.parse_expr()?)
            } else {
                None
            };
            let end = self.expect(";")?.line;
            return Ok(Stmt::LocalDecl { type_name, name, init, span: Span::new(start_line, end) });
        }

        // Expression-leading statement: assignment, inc/dec, or a call.
        let expr = self.parse_postfix_expr()?;
        if self.peek().is("=") {
            self.require_lvalue(&expr)?;
            self.bump();
            let value = self.parse_expr()?;
            let end = self.expect(";")?.line;
            return Ok(Stmt::Assign { target: expr, value, span: Span::new(start_line, end) });
        }
        if self.peek().is("++") || self.peek().is("--") {
            let increment = self.peek().is("++");
            self.bump();
            self.require_lvalue(&expr)?;
            let end = self.expect(";")?.line;
            return Ok(Stmt::IncDec { target: expr, increment, prefix: false, span: Span::new(start_line, end) });
        }
        let end = self.expect(";")?.line;
        Ok(Stmt::ExprStmt { expr, span: Span::new(start_line, end) })
    }

    fn require_lvalue(&self, expr: &Expr) -> Result<(), ParseError> {
        match expr {
            Expr::Ident { .. } | Expr::Member { .. } => Ok(()),
            other => Err(ParseError {
                message: "expected assignable target".to_string(),
                line: other.line(),
                column: 0,
            }),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        self.parse_binary(0)
    }

    fn parse_binary(&mut self, level: usize) -> Result<Expr, ParseError> {
        const LEVELS: &[&[&str]] = &[
            &["||"],
            &["&&"],
            &["==", "!="],
            &["<", ">", "<=", ">="],
            &["+", "-"],
            &["*", "/", "%"],
        ];
        if level >= LEVELS.len() {
            return self.parse_unary();
        }
        let mut lhs = self.parse_binary(level + 1)?;
        while LEVELS[level].iter().any(|op| self.peek().is(op)) {
            let op = self.bump().lexeme.clone();
            let line = lhs.line();
            let rhs = self.parse_binary(level + 1)?;
            lhs = Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs), line };
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek();
        if t.is("!") || t.is("-") {
            let line = t.line;
            let op = self.bump().lexeme.clone();
            let operand = self.parse_unary()?;
            return Ok(Expr::Unary { op, operand: Box::new(operand), line });
        }
        self.parse_postfix_expr()
    }

    fn parse_postfix_expr(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let mut expr = self.parse_primary(start)?;
        loop {
            if self.peek().is(".") {
                self.bump();
                let (name, line) = self.expect_ident()?;
                if self.peek().is("(") {
                    let args = self.parse_args()?;
                    let text = self.slice_text(start, self.pos - 1);
                    expr = Expr::Call {
                        receiver: Some(Box::new(expr)),
                        callee: name,
                        args,
                        line,
                        text,
                    };
                } else {
                    expr = Expr::Member { receiver: Box::new(expr), name, line };
                }
            } else {
                return Ok(expr);
            }
        }
    }

    fn parse_primary(&mut self, start: usize) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::IntLit => {
                self.bump();
                Ok(Expr::IntLit { text: t.lexeme, line: t.line })
            }
            TokenKind::StrLit => {
                self.bump();
                Ok(Expr::StrLit { text: t.lexeme, line: t.line })
            }
            TokenKind::Keyword if t.is("this") => {
                self.bump();
                Ok(Expr::This { line: t.line })
            }
            TokenKind::Keyword if t.is("new") => {
                self.bump();
                let (class_name, line) = self.expect_ident()?;
                self.expect("(")?;
                let mut args = Vec::new();
                if !self.peek().is(")") {
                    loop {
                        args.push(self.parse_expr()?);
                        if self.peek().is(",") {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(")")?;
                let text = self.slice_text(start, self.pos - 1);
                Ok(Expr::New { class_name, args, line, text })
            }
            TokenKind::Ident => {
                self.bump();
                if self.peek().is("(") {
                    let args = self.parse_args()?;
                    let text = self.slice_text(start, self.pos - 1);
                    Ok(Expr::Call { receiver: None, callee: t.lexeme, args, line: t.line, text })
                } else {
                    Ok(Expr::Ident { name: t.lexeme, line: t.line })
                }
            }
            TokenKind::Punct if t.is("(") => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(")")?;
                Ok(inner)
            }
            _ => {
                let found = self.describe();
                self.error(format!("expected expression, found {found}"))
            }
        }
    }

    fn parse_args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect("(")?;
        let mut args = Vec::new();
        if !self.peek().is(")") {
            loop {
                args.push(self.parse_expr()?);
                if self.peek().is(",") {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(")")?;
        Ok(args)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEMO: &str = include_str!("../tests/fixtures/demo.moo");

    #[test]
    fn demo_class_order_and_structure() {
        let tree = parse(DEMO, "demo.moo").unwrap();
        let names: Vec<_> = tree.classes.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["A", "B", "C"]);
        assert_eq!(tree.classes[1].base_names, vec!["A"]);
        let c = &tree.classes[2];
        let fields: Vec<_> = c.field_decls.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(fields, vec!["var1", "var2", "var3", "var4", "var5"]);
        assert_eq!(c.constructors.len(), 1);
        assert_eq!(c.constructors[0].signature(), "C(B b)");
        let methods: Vec<_> = c.methods.iter().map(|m| m.name.as_str()).collect();
        assert_eq!(methods, vec!["CM1", "CM2", "CM3", "CM4", "CM5", "CM6", "CM7"]);
    }

    #[test]
    fn signatures_keep_source_spelling() {
        let tree = parse(DEMO, "demo.moo").unwrap();
        let b = &tree.classes[1];
        assert_eq!(b.methods[1].signature(), "BM1(int test,A a)");
        assert_eq!(b.methods[2].signature(), "BM2(int test,A a, int x1, int x2, int x3)");
    }

    #[test]
    fn empty_file_parses_to_zero_classes() {
        let tree = parse("", "empty.moo").unwrap();
        assert!(tree.classes.is_empty());
        let tree = parse("  \n// only a comment\n", "empty.moo").unwrap();
        assert!(tree.classes.is_empty());
    }

    #[test]
    fn missing_field_name_is_an_error() {
        let err = parse("class X { int ; }", "x.moo").unwrap_err();
        assert!(err.message.contains("expected identifier"), "{}", err.message);
    }

    #[test]
    fn first_error_stops_parsing() {
        let err = parse("class X { int a; int ; int b; }", "x.moo").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn emit_round_trips_demo() {
        let tree = parse(DEMO, "demo.moo").unwrap();
        assert_eq!(emit(&tree), DEMO);
    }

    #[test]
    fn emit_preserves_comments() {
        let src = "// header\nclass A\n{\n\tpublic int x; // field\n\t/* block */\n\tvoid m()\n\t{\n\t\tx = 1;\n\t}\n}\n";
        let tree = parse(src, "a.moo").unwrap();
        assert_eq!(emit(&tree), src);
    }

    #[test]
    fn statement_lines_match_first_token() {
        let tree = parse(DEMO, "demo.moo").unwrap();
        let c = &tree.classes[2];
        let cm6 = &c.methods[5];
        let lines: Vec<_> = cm6.body.iter().map(|s| s.line()).collect();
        assert_eq!(lines, vec![56, 57, 58, 59, 60, 61, 62, 63, 64, 65]);
    }

    #[test]
    fn call_expressions_record_site_and_text() {
        let tree = parse(DEMO, "demo.moo").unwrap();
        let cm6 = &tree.classes[2].methods[5];
        let Stmt::Assign { value, .. } = &cm6.body[2] else { panic!("expected assignment") };
        let Expr::Call { text, line, callee, .. } = value else { panic!("expected call") };
        assert_eq!(text, "b1.Add(2)");
        assert_eq!(*line, 58);
        assert_eq!(callee, "Add");
    }

    #[test]
    fn control_flow_and_nesting_parse() {
        let src = "class A\n{\n\tint x;\n\tvoid m(int a)\n\t{\n\t\tif (a > 0) {\n\t\t\twhile (x < 10) {\n\t\t\t\tx = x + 1;\n\t\t\t}\n\t\t} else {\n\t\t\tx--;\n\t\t}\n\t}\n}\n";
        let tree = parse(src, "a.moo").unwrap();
        assert_eq!(emit(&tree), src);
        let m = &tree.classes[0].methods[0];
        assert!(matches!(m.body[0], Stmt::If { .. }));
    }
}
