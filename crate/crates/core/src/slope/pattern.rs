//! Pattern syntax.
//!
//! ```text
//! alt  := cat ('|' cat)*
//! cat  := rep+
//! rep  := atom ('*' | '?')?
//! atom := 'P' | 'N' | 'Z' | '+' | '-' | '0' | '(' alt ')'
//! ```
//!
//! There is no Kleene plus: `+` is the rising-slope literal. Write `PP*`.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Literal(Symbol),
    /// Two or more parts matched in sequence.
    Concat(Vec<Pattern>),
    /// Two or more alternatives.
    Alt(Vec<Pattern>),
    Star(Box<Pattern>),
    Optional(Box<Pattern>),
}

impl Pattern {
    pub fn star(inner: Pattern) -> Self {
        Pattern::Star(Box::new(inner))
    }

    pub fn optional(inner: Pattern) -> Self {
        Pattern::Optional(Box::new(inner))
    }

    /// Height of the tree; a literal has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Pattern::Literal(_) => 1,
            Pattern::Concat(parts) | Pattern::Alt(parts) => {
                1 + parts.iter().map(Pattern::depth).max().unwrap_or(0)
            }
            Pattern::Star(inner) | Pattern::Optional(inner) => 1 + inner.depth(),
        }
    }

    /// Whether the empty string is in the language.
    pub fn is_nullable(&self) -> bool {
        match self {
            Pattern::Literal(_) => false,
            Pattern::Concat(parts) => parts.iter().all(Pattern::is_nullable),
            Pattern::Alt(parts) => parts.iter().any(Pattern::is_nullable),
            Pattern::Star(_) | Pattern::Optional(_) => true,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, parenthesize: bool) -> fmt::Result {
        if parenthesize {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Prints canonical pattern text that parses back to an equivalent pattern.
impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Literal(s) => write!(f, "{s}"),
            Pattern::Concat(parts) => parts
                .iter()
                .try_for_each(|p| p.write_child(f, matches!(p, Pattern::Alt(_)))),
            Pattern::Alt(parts) => {
                for (k, p) in parts.iter().enumerate() {
                    if k > 0 {
                        f.write_str("|")?;
                    }
                    p.write_child(f, false)?;
                }
                Ok(())
            }
            Pattern::Star(inner) | Pattern::Optional(inner) => {
                inner.write_child(f, !matches!(**inner, Pattern::Literal(_)))?;
                f.write_str(if matches!(self, Pattern::Star(_)) {
                    "*"
                } else {
                    "?"
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct PatternError {
    pub offset: usize,
    pub message: String,
}

impl core::str::FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pattern(s)
    }
}

pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    if text.is_empty() {
        return Err(parser.error("empty pattern"));
    }
    let pattern = parser.alt()?;
    if parser.pos < parser.bytes.len() {
        let msg = match parser.peek() {
            Some(b')') => String::from("unbalanced `)`"),
            _ => alloc::format!("unexpected `{}`", parser.current_char()),
        };
        return Err(parser.error(&msg));
    }
    Ok(pattern)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn current_char(&self) -> char {
        // error text only; fall back to U+FFFD for non-ASCII bytes
        self.peek()
            .filter(u8::is_ascii)
            .map(char::from)
            .unwrap_or(char::REPLACEMENT_CHARACTER)
    }

    fn error(&self, message: &str) -> PatternError {
        PatternError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn alt(&mut self) -> Result<Pattern, PatternError> {
        let mut branches = Vec::from([self.cat()?]);
        while self.peek() == Some(b'|') {
            self.pos += 1;
            branches.push(self.cat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Pattern::Alt(branches)
        })
    }

    fn cat(&mut self) -> Result<Pattern, PatternError> {
        let mut parts = Vec::from([self.rep()?]);
        while matches!(self.peek(), Some(b) if b == b'(' || Symbol::from_char(b as char).is_some())
        {
            parts.push(self.rep()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Pattern::Concat(parts)
        })
    }

    fn rep(&mut self) -> Result<Pattern, PatternError> {
        let atom = self.atom()?;
        Ok(match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                Pattern::star(atom)
            }
            Some(b'?') => {
                self.pos += 1;
                Pattern::optional(atom)
            }
            _ => atom,
        })
    }

    fn atom(&mut self) -> Result<Pattern, PatternError> {
        match self.peek() {
            None => Err(self.error("unexpected end of pattern, expected a symbol or `(`")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.alt()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b) => match Symbol::from_char(b as char) {
                Some(sym) => {
                    self.pos += 1;
                    Ok(Pattern::Literal(sym))
                }
                None => Err(self.error(&alloc::format!(
                    "unexpected `{}`, expected a symbol or `(`",
                    self.current_char()
                ))),
            },
        }
    }
}
