use super::ast::Span;
use super::error::{FrontendError, FrontendErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase-initial identifier: functor or predicate name.
    Name(String),
    /// Uppercase- or underscore-initial identifier.
    Var(String),
    /// Integer literal; treated as a 0-arity functor.
    Int(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Neck,
    QueryStart,
    Deconstruct,
    Construct,
    Assign,
    Test,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Name(s) => format!("name `{s}`"),
            Tok::Var(s) => format!("variable `{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Neck => "`:-`".into(),
            Tok::QueryStart => "`?-`".into(),
            Tok::Deconstruct => "`=>`".into(),
            Tok::Construct => "`<=`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Test => "`==`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, FrontendError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);

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
        let span = Span::new(line, col);
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump!();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    bump!();
                } else {
                    break;
                }
            }
            let tok = if c.is_ascii_lowercase() {
                Tok::Name(s)
            } else {
                Tok::Var(s)
            };
            out.push(Token { tok, span });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    bump!();
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Int(s),
                span,
            });
            continue;
        }
        bump!();
        let next = chars.peek().copied();
        let tok = match (c, next) {
            ('(', _) => Tok::LParen,
            (')', _) => Tok::RParen,
            (',', _) => Tok::Comma,
            ('.', _) => Tok::Dot,
            (':', Some('-')) => {
                bump!();
                Tok::Neck
            }
            (':', Some('=')) => {
                bump!();
                Tok::Assign
            }
            ('?', Some('-')) => {
                bump!();
                Tok::QueryStart
            }
            ('=', Some('>')) => {
                bump!();
                Tok::Deconstruct
            }
            ('=', Some('=')) => {
                bump!();
                Tok::Test
            }
            ('<', Some('=')) => {
                bump!();
                Tok::Construct
            }
            _ => {
                return Err(FrontendError::new(
                    FrontendErrorKind::Lex(format!("unexpected character `{c}`")),
                    span,
                ))
            }
        };
        out.push(Token { tok, span });
    }
    Ok(out)
}
