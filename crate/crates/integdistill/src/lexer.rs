//! Lexer for MiniOO source files.
//!
//! Tokens carry their exact source lexeme plus the whitespace and comments
//! that precede them (leading trivia), so concatenating trivia and lexemes
//! reproduces the input byte for byte. A trailing EOF token holds whatever
//! trivia follows the last real token.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Ident,
    IntLit,
    StrLit,
    Op,
    Punct,
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Whitespace and comments between the previous token and this one.
    pub leading: String,
    /// 1-based line of the first lexeme character.
    pub line: u32,
    /// 1-based column of the first lexeme character.
    pub column: u32,
}

impl Token {
    pub fn is(&self, lexeme: &str) -> bool {
        self.lexeme == lexeme && self.kind != TokenKind::StrLit
    }
}

pub const KEYWORDS: &[&str] = &[
    "class", "public", "private", "void", "int", "string", "new", "this", "return", "if", "else",
    "while",
];

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct LexError {
    pub message: String,
    pub line: u32,
    pub column: u32,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    column: u32,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line: 1, column: 1 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.pos + 1).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eof(&self) -> bool {
        self.pos >= self.chars.len()
    }
}

/// Lex `source` into a full token stream, ending with an EOF token that
/// carries the trailing trivia. LF and CRLF both count as one newline.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor::new(source);
    let mut tokens = Vec::new();

    loop {
        let trivia = scan_trivia(&mut cur)?;
        if cur.eof() {
            tokens.push(Token {
                kind: TokenKind::Eof,
                lexeme: String::new(),
                leading: trivia,
                line: cur.line,
                column: cur.column,
            });
            return Ok(tokens);
        }
        let line = cur.line;
        let column = cur.column;
        let c = cur.peek().unwrap();

        let (kind, lexeme) = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(ch) = cur.peek() {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    s.push(ch);
                    cur.bump();
                } else {
                    break;
                }
            }
            let kind = if KEYWORDS.contains(&s.as_str()) { TokenKind::Keyword } else { TokenKind::Ident };
            (kind, s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(ch) = cur.peek() {
                if ch.is_ascii_digit() {
                    s.push(ch);
                    cur.bump();
                } else {
                    break;
                }
            }
            (TokenKind::IntLit, s)
        } else if c == '"' {
            (TokenKind::StrLit, scan_string(&mut cur)?)
        } else {
            match scan_operator(&mut cur) {
                Some((kind, s)) => (kind, s),
                None => {
                    return Err(LexError {
                        message: format!("illegal character `{c}`"),
                        line,
                        column,
                    })
                }
            }
        };

        tokens.push(Token { kind, lexeme, leading: trivia, line, column });
    }
}

fn scan_trivia(cur: &mut Cursor) -> Result<String, LexError> {
    let mut out = String::new();
    loop {
        match cur.peek() {
            Some(c) if c.is_whitespace() => {
                out.push(c);
                cur.bump();
            }
            Some('/') if cur.peek2() == Some('/') => {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    out.push(c);
                    cur.bump();
                }
            }
            Some('/') if cur.peek2() == Some('*') => {
                let line = cur.line;
                let column = cur.column;
                out.push(cur.bump().unwrap());
                out.push(cur.bump().unwrap());
                let mut closed = false;
                while let Some(c) = cur.peek() {
                    if c == '*' && cur.peek2() == Some('/') {
                        out.push(cur.bump().unwrap());
                        out.push(cur.bump().unwrap());
                        closed = true;
                        break;
                    }
                    out.push(c);
                    cur.bump();
                }
                if !closed {
                    return Err(LexError { message: "unterminated block comment".into(), line, column });
                }
            }
            _ => return Ok(out),
        }
    }
}

fn scan_string(cur: &mut Cursor) -> Result<String, LexError> {
    let line = cur.line;
    let column = cur.column;
    let mut s = String::new();
    s.push(cur.bump().unwrap()); // opening quote
    loop {
        match cur.peek() {
            None | Some('\n') => {
                return Err(LexError { message: "unterminated string literal".into(), line, column })
            }
            Some('\\') => {
                s.push(cur.bump().unwrap());
                if let Some(esc) = cur.peek() {
                    if esc != '\n' {
                        s.push(cur.bump().unwrap());
                    }
                }
            }
            Some('"') => {
                s.push(cur.bump().unwrap());
                return Ok(s);
            }
            Some(c) => {
                s.push(c);
                cur.bump();
            }
        }
    }
}

fn scan_operator(cur: &mut Cursor) -> Option<(TokenKind, String)> {
    let c = cur.peek()?;
    let two = cur.peek2().map(|n| {
        let mut s = String::new();
        s.push(c);
        s.push(n);
        s
    });
    const TWO_CHAR: &[&str] = &["==", "!=", "<=", ">=", "&&", "||", "++", "--"];
    if let Some(t) = two {
        if TWO_CHAR.contains(&t.as_str()) {
            cur.bump();
            cur.bump();
            return Some((TokenKind::Op, t));
        }
    }
    let (kind, ok) = match c {
        ';' | ',' | '(' | ')' | '{' | '}' | '.' => (TokenKind::Punct, true),
        '=' | '+' | '-' | '*' | '/' | '%' | '<' | '>' | '!' | ':' => (TokenKind::Op, true),
        _ => (TokenKind::Op, false),
    };
    if !ok {
        return None;
    }
    cur.bump();
    Some((kind, c.to_string()))
}

/// Reassemble the exact source text from a token stream.
pub fn reassemble(tokens: &[Token]) -> String {
    let mut out = String::new();
    for t in tokens {
        out.push_str(&t.leading);
        out.push_str(&t.lexeme);
    }
    out
}
