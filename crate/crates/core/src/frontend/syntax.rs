//! Lexer and parser for `.dhp` problem files.
//!
//! ```text
//! file   := (decl ".")* (query ".")*
//! decl   := "sort" ID | "fun" ID ":" type | "var" ID ":" type
//! query  := ["name" ID] ("unify" term "=?" term | "match" term "<=?" term | "dhp" term)
//! type   := atype ("->" type)?
//! atype  := ID | "(" type ("," type)* ")"
//! term   := "\" binder+ "." term | atom+
//! binder := ID [":" atype ("->" type)?]
//! atom   := ID | "(" term ")"
//! ```
//!
//! `#` and `%` start line comments.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Lambda,
    Dot,
    Colon,
    Comma,
    LParen,
    RParen,
    Arrow,
    UnifyOp,
    MatchOp,
    MapsTo,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::UnifyOp => f.write_str("`=?`"),
            Tok::MatchOp => f.write_str("`<=?`"),
            Tok::MapsTo => f.write_str("`|->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: &[&str] = &["sort", "fun", "var", "name", "unify", "match", "dhp"];

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1, 1);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            _ if c.is_whitespace() => {
                bump!();
            }
            '#' | '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '\\' | 'λ' => {
                bump!();
                out.push((Tok::Lambda, pos));
            }
            '.' => {
                bump!();
                out.push((Tok::Dot, pos));
            }
            ':' => {
                bump!();
                out.push((Tok::Colon, pos));
            }
            ',' => {
                bump!();
                out.push((Tok::Comma, pos));
            }
            '(' => {
                bump!();
                out.push((Tok::LParen, pos));
            }
            ')' => {
                bump!();
                out.push((Tok::RParen, pos));
            }
            '-' | '=' | '<' | '|' => {
                let expect: &str = match c {
                    '-' => "->",
                    '=' => "=?",
                    '<' => "<=?",
                    _ => "|->",
                };
                for want in expect.chars() {
                    if bump!() != Some(want) {
                        return Err(ParseError {
                            pos,
                            message: format!("expected `{expect}`"),
                        });
                    }
                }
                let tok = match c {
                    '-' => Tok::Arrow,
                    '=' => Tok::UnifyOp,
                    '<' => Tok::MatchOp,
                    _ => Tok::MapsTo,
                };
                out.push((tok, pos));
            }
            _ if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    s.push(c);
                    bump!();
                }
                out.push((Tok::Ident(s), pos));
            }
            _ => {
                return Err(ParseError {
                    pos,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawType {
    Name(String, Pos),
    /// `(args) -> result`, before flattening.
    Arrow(Vec<RawType>, Box<RawType>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawBinder {
    pub name: String,
    pub ty: Option<RawType>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawTerm {
    Ident(String, Pos),
    Lam(Vec<RawBinder>, Box<RawTerm>, Pos),
    /// Head applied to at least one argument.
    App(Box<RawTerm>, Vec<RawTerm>, Pos),
}

impl RawTerm {
    pub fn pos(&self) -> Pos {
        match self {
            RawTerm::Ident(_, p) | RawTerm::Lam(_, _, p) | RawTerm::App(_, _, p) => *p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Sort(String),
    Fun(String, RawType),
    Var(String, RawType),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawQueryKind {
    Unify(RawTerm, RawTerm),
    Match(RawTerm, RawTerm),
    Dhp(RawTerm),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawQuery {
    pub name: Option<String>,
    pub kind: RawQueryKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawFile {
    pub decls: Vec<(Decl, Pos)>,
    pub queries: Vec<RawQuery>,
}

pub struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            message: format!("expected {expected}, found {}", self.peek()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.error(&tok.to_string())
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                let p = self.bump().1;
                Ok((s, p))
            }
            _ => self.error("an identifier"),
        }
    }

    pub fn parse_type(&mut self) -> Result<RawType, ParseError> {
        let start = self.pos();
        let args = if *self.peek() == Tok::LParen {
            self.bump();
            let mut items = vec![self.parse_type()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                items.push(self.parse_type()?);
            }
            self.expect(Tok::RParen)?;
            items
        } else {
            let (name, pos) = self.ident()?;
            vec![RawType::Name(name, pos)]
        };
        if *self.peek() == Tok::Arrow {
            self.bump();
            let result = self.parse_type()?;
            return Ok(RawType::Arrow(args, Box::new(result)));
        }
        match <[RawType; 1]>::try_from(args) {
            Ok([single]) => Ok(single),
            Err(_) => Err(ParseError {
                pos: start,
                message: "a parenthesised type list must be followed by `->`".into(),
            }),
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()),
            Tok::LParen => true,
            _ => false,
        }
    }

    pub fn parse_term(&mut self) -> Result<RawTerm, ParseError> {
        if *self.peek() == Tok::Lambda {
            let pos = self.bump().1;
            let mut binders = Vec::new();
            loop {
                let (name, bpos) = self.ident()?;
                let ty = if *self.peek() == Tok::Colon {
                    self.bump();
                    Some(self.parse_type()?)
                } else {
                    None
                };
                binders.push(RawBinder { name, ty, pos: bpos });
                if *self.peek() == Tok::Dot {
                    break;
                }
                if !matches!(self.peek(), Tok::Ident(_)) {
                    return self.error("a binder or `.`");
                }
            }
            self.expect(Tok::Dot)?;
            let body = self.parse_term()?;
            return Ok(RawTerm::Lam(binders, Box::new(body), pos));
        }
        let pos = self.pos();
        let head = self.parse_atom()?;
        let mut args = Vec::new();
        loop {
            if self.starts_atom() {
                args.push(self.parse_atom()?);
            } else if *self.peek() == Tok::Lambda {
                // A trailing abstraction extends as far as possible.
                args.push(self.parse_term()?);
                break;
            } else {
                break;
            }
        }
        if args.is_empty() {
            return Ok(head);
        }
        Ok(match head {
            RawTerm::App(h, mut inner, _) => {
                inner.extend(args);
                RawTerm::App(h, inner, pos)
            }
            h => RawTerm::App(Box::new(h), args, pos),
        })
    }

    fn parse_atom(&mut self) -> Result<RawTerm, ParseError> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let t = self.parse_term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => {
                let (name, pos) = self.ident()?;
                Ok(RawTerm::Ident(name, pos))
            }
        }
    }

    fn parse_decl(&mut self) -> Result<Option<(Decl, Pos)>, ParseError> {
        let pos = self.pos();
        let decl = if self.is_keyword("sort") {
            self.bump();
            Decl::Sort(self.ident()?.0)
        } else if self.is_keyword("fun") || self.is_keyword("var") {
            let is_fun = self.is_keyword("fun");
            self.bump();
            let name = self.ident()?.0;
            self.expect(Tok::Colon)?;
            let ty = self.parse_type()?;
            if is_fun {
                Decl::Fun(name, ty)
            } else {
                Decl::Var(name, ty)
            }
        } else {
            return Ok(None);
        };
        self.expect(Tok::Dot)?;
        Ok(Some((decl, pos)))
    }

    fn parse_query(&mut self) -> Result<RawQuery, ParseError> {
        let pos = self.pos();
        let name = if self.is_keyword("name") {
            self.bump();
            Some(self.ident()?.0)
        } else {
            None
        };
        let kind = if self.is_keyword("unify") {
            self.bump();
            let l = self.parse_term()?;
            self.expect(Tok::UnifyOp)?;
            RawQueryKind::Unify(l, self.parse_term()?)
        } else if self.is_keyword("match") {
            self.bump();
            let l = self.parse_term()?;
            self.expect(Tok::MatchOp)?;
            RawQueryKind::Match(l, self.parse_term()?)
        } else if self.is_keyword("dhp") {
            self.bump();
            RawQueryKind::Dhp(self.parse_term()?)
        } else {
            return self.error("a declaration or query");
        };
        self.expect(Tok::Dot)?;
        Ok(RawQuery { name, kind, pos })
    }

    pub fn parse_file(&mut self) -> Result<RawFile, ParseError> {
        let mut file = RawFile::default();
        while let Some(d) = self.parse_decl()? {
            file.decls.push(d);
        }
        while !self.at_eof() {
            if self.is_keyword("sort") || self.is_keyword("fun") || self.is_keyword("var") {
                return self.error("a query (declarations must precede queries)");
            }
            file.queries.push(self.parse_query()?);
        }
        Ok(file)
    }

    /// `ID |-> term (, ID |-> term)*`, or `{}` for the empty substitution.
    pub fn parse_bindings(&mut self) -> Result<Vec<(String, Pos, RawTerm)>, ParseError> {
        let mut out = Vec::new();
        if self.at_eof() {
            return Ok(out);
        }
        loop {
            let (name, pos) = self.ident()?;
            self.expect(Tok::MapsTo)?;
            let t = self.parse_term()?;
            out.push((name, pos, t));
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        if !self.at_eof() {
            return self.error("`,` or end of input");
        }
        Ok(out)
    }
}

pub fn parse_raw(src: &str) -> Result<RawFile, ParseError> {
    Parser::new(src)?.parse_file()
}
