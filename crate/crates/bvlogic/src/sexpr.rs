//! Minimal S-expression reader/writer shared by the on-disk formats.
//!
//! Atoms are maximal runs of non-whitespace, non-parenthesis characters.
//! The canonical rendering uses a single space between list items and no
//! trailing newline, so serialized values are byte-stable.

use std::fmt;
use thiserror::Error;

/// An S-expression: a bare atom or a parenthesized list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Error)]
pub enum SexpError {
    #[error("line {line}, column {col}: unexpected `)`")]
    UnexpectedClose { line: usize, col: usize },
    #[error("line {line}, column {col}: unclosed `(`")]
    Unclosed { line: usize, col: usize },
    #[error("expected exactly one expression, found {found}")]
    ExpectedSingle { found: usize },
}

impl Sexp {
    pub fn atom(s: impl Into<String>) -> Sexp {
        Sexp::Atom(s.into())
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp::List(items)
    }

    /// Parses exactly one expression (surrounding whitespace allowed).
    pub fn parse(input: &str) -> Result<Sexp, SexpError> {
        let many = Sexp::parse_many(input)?;
        match <[Sexp; 1]>::try_from(many) {
            Ok([single]) => Ok(single),
            Err(many) => Err(SexpError::ExpectedSingle { found: many.len() }),
        }
    }

    /// Parses a whitespace-separated sequence of expressions.
    pub fn parse_many(input: &str) -> Result<Vec<Sexp>, SexpError> {
        let mut done = Vec::new();
        // Each open paren remembers where it started for error reporting.
        let mut stack: Vec<(usize, usize, Vec<Sexp>)> = Vec::new();
        let mut atom = String::new();
        let mut line = 1;
        let mut col = 0;

        let push =
            |stack: &mut Vec<(usize, usize, Vec<Sexp>)>, done: &mut Vec<Sexp>, item: Sexp| {
                match stack.last_mut() {
                    Some((_, _, items)) => items.push(item),
                    None => done.push(item),
                }
            };

        for ch in input.chars() {
            if ch == '\n' {
                line += 1;
                col = 0;
            } else {
                col += 1;
            }
            if ch == '(' || ch == ')' || ch.is_whitespace() {
                if !atom.is_empty() {
                    push(&mut stack, &mut done, Sexp::Atom(std::mem::take(&mut atom)));
                }
                if ch == '(' {
                    stack.push((line, col, Vec::new()));
                } else if ch == ')' {
                    match stack.pop() {
                        Some((_, _, items)) => push(&mut stack, &mut done, Sexp::List(items)),
                        None => return Err(SexpError::UnexpectedClose { line, col }),
                    }
                }
            } else {
                atom.push(ch);
            }
        }
        if !atom.is_empty() {
            push(&mut stack, &mut done, Sexp::Atom(atom));
        }
        if let Some((line, col, _)) = stack.pop() {
            return Err(SexpError::Unclosed { line, col });
        }
        Ok(done)
    }

    /// The list items if this is a list whose head is the atom `head`.
    pub fn as_tagged(&self, head: &str) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items) => match items.split_first() {
                Some((Sexp::Atom(tag), rest)) if tag == head => Some(rest),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            Sexp::List(_) => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}
