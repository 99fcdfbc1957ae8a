//! Concrete syntax for formulas.
//!
//! ```text
//! iff     := impl ("<->" impl)*
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := since ("&" since)*
//! since   := unary ("S" since)?            -- right associative
//! unary   := ("!" | "Y" | "H" | "P") unary | atom
//! atom    := "true" | "false" | "bos" | symbol | "(" iff ")"
//! ```
//!
//! Symbols are bare identifiers over `[A-Za-z0-9_.]`. Sugar (`|`, `->`,
//! `<->`, `P`, `true`, `false`) is expanded during parsing, so the result
//! uses only the seven core connectives.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::alphabet::Alphabet;
use super::ast::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '!' => {
                i += 1;
                Tok::Bang
            }
            '&' => {
                i += 1;
                Tok::Amp
            }
            '|' => {
                i += 1;
                Tok::Pipe
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Tok::Arrow
                } else {
                    return Err(ParseError {
                        offset: i,
                        message: "expected `->`".to_string(),
                    });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    i += 3;
                    Tok::DArrow
                } else {
                    return Err(ParseError {
                        offset: i,
                        message: "expected `<->`".to_string(),
                    });
                }
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_alphanumeric() || c == '_' || c == '.' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                Tok::Ident(text[start..i].to_string())
            }
            other => {
                return Err(ParseError {
                    offset: i,
                    message: alloc::format!("unexpected character `{}`", other),
                })
            }
        };
        tokens.push((start, tok));
    }
    Ok(tokens)
}

struct Parser<'a> {
    alphabet: &'a Alphabet,
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.to_string(),
        })
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.peek() == Some(&Tok::DArrow) {
            self.bump();
            let rhs = self.implication()?;
            lhs = lhs.iff(&rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.implication()?;
            Ok(lhs.implies(&rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = lhs.or(&rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.since()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            let rhs = self.since()?;
            lhs = lhs.and(&rhs);
        }
        Ok(lhs)
    }

    fn since(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if let Some(Tok::Ident(id)) = self.peek() {
            if id == "S" {
                self.bump();
                let rhs = self.since()?;
                return Ok(lhs.since(&rhs));
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Some(Tok::Ident(id)) if id == "Y" => {
                self.bump();
                Ok(self.unary()?.y())
            }
            Some(Tok::Ident(id)) if id == "H" => {
                self.bump();
                Ok(self.unary()?.h())
            }
            Some(Tok::Ident(id)) if id == "P" => {
                self.bump();
                Ok(self.unary()?.previously())
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.iff()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.pos = self.pos.saturating_sub(1);
                        self.err("expected `)`")
                    }
                }
            }
            Some(Tok::Ident(id)) => match id.as_str() {
                "true" => Ok(Formula::tru(self.alphabet)),
                "false" => Ok(Formula::fls(self.alphabet)),
                "bos" => Ok(Formula::bos(self.alphabet)),
                "S" => Err(ParseError {
                    offset,
                    message: "`S` is an operator, not a symbol".to_string(),
                }),
                sym => Formula::sym(self.alphabet, sym).map_err(|_| ParseError {
                    offset,
                    message: alloc::format!("unknown symbol `{}`", sym),
                }),
            },
            Some(_) => Err(ParseError {
                offset,
                message: "expected a formula".to_string(),
            }),
            None => Err(ParseError {
                offset: self.end,
                message: "unexpected end of input".to_string(),
            }),
        }
    }
}

/// Parses `text` into a desugared formula over `alphabet`.
pub fn parse_formula(text: &str, alphabet: &Alphabet) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        alphabet,
        tokens,
        pos: 0,
        end: text.len(),
    };
    let formula = parser.iff()?;
    if parser.pos != parser.tokens.len() {
        return parser.err("trailing input after formula");
    }
    Ok(formula)
}
