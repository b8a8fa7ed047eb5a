//! Named-variable surface syntax for the set-theory corpus.
//!
//! The corpus fixes one first-order language ([`set_language`]): a binary
//! membership relation `in` together with five definable function symbols
//! that make the axioms pleasant to state — `empty` (the empty set),
//! `pair(x, y)` (ordered pairing), `omega` (the natural numbers), `P(x)`
//! (power set) and `U(x)` (union).
//!
//! On top of the de Bruijn core this module provides:
//!
//! * a surface AST with named variables ([`NamedFormula`], [`NamedTerm`]),
//! * a parser with line/column diagnostics ([`parse_formula_text`]),
//! * a definition table (`subset`, `leq`, `Ord`, …) expanded during
//!   elaboration ([`expand_definitions`]),
//! * elaboration to de Bruijn form ([`elaborate`], [`read_formula`]),
//! * a printer inverting elaboration ([`print_formula`]), and
//! * the axiom corpus itself ([`zfc_axioms`], [`collection_instance`],
//!   [`ch_sentence`]).
//!
//! # Surface grammar
//!
//! ```text
//! formula    := imp
//! imp        := or [ "->" imp ]                      (right associative)
//! or         := and { "or" and }                     (left associative)
//! and        := unary { "and" unary }                (left associative)
//! unary      := "not" unary | quantifier | atom
//! quantifier := ("forall" | "exists") ident+ [ "in" term ] "." imp
//! atom       := "false" | "(" formula ")"
//!             | ident "(" term { "," term } ")"      (defined relation)
//!             | term ("=" | "in") term
//! term       := ident [ "(" term { "," term } ")" ]
//! ```
//!
//! `--` starts a comment running to the end of the line. A quantifier body
//! extends as far right as possible, so a quantifier needs parentheses
//! unless it is the last thing in its enclosing formula. Bounded quantifiers
//! abbreviate relativization: `forall x in t. f` elaborates to
//! `forall x. x in t -> f` and `exists x in t. f` to
//! `exists x. x in t and f` (the bound `t` is read outside the new binder).
//! A multi-name binder `forall x y in t. f` nests: each name gets its own
//! quantifier with the same bound.
//!
//! # Names
//!
//! Binders may use any identifier not starting with an underscore or digit;
//! shadowing is allowed and the innermost binding wins. Identifiers of the
//! shape `u0, u1, …` that are *not* bound denote free variables: `u{k}`
//! elaborates to de Bruijn index `depth + k`. The printer synthesizes the
//! name `v{j}` for the binder at depth `j` and `u{k}` for free variables, so
//! printing followed by parsing and elaboration is the identity on formulas.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::syntax::{Formula, Language, Preformula, Preterm, SyntaxError, Term};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("unknown symbol `{name}` applied to {arity} argument(s)")]
    UnknownApplication { name: String, arity: usize },
    #[error("formula uses {found} free variables, allowed at most {allowed}")]
    TooManyFree { allowed: usize, found: usize },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

type Result<T> = std::result::Result<T, CorpusError>;

/// The fixed language of the set-theory corpus: the membership relation
/// `in/2` plus function symbols `empty/0`, `pair/2`, `omega/0`, `P/1`, `U/1`.
pub fn set_language() -> &'static Language {
    static LANG: OnceLock<Language> = OnceLock::new();
    LANG.get_or_init(|| {
        Language::new(
            vec![("empty", 0), ("pair", 2), ("omega", 0), ("P", 1), ("U", 1)],
            vec![("in", 2)],
        )
        .expect("the corpus language is well formed")
    })
}

/// `a in b` over the corpus language.
pub fn member(a: Term, b: Term) -> Formula {
    let sym = set_language()
        .relation("in")
        .expect("the corpus language has a membership relation");
    Formula::rel_app(sym, vec![a, b]).expect("membership relation is binary")
}

/// Applies a function symbol of the corpus language by name.
pub fn set_term(name: &str, args: Vec<Term>) -> Result<Term> {
    let arity = args.len();
    let sym = set_language()
        .function(name)
        .filter(|sym| sym.arity() == arity)
        .ok_or_else(|| CorpusError::UnknownApplication {
            name: name.to_string(),
            arity,
        })?;
    Ok(Term::apply(sym, args)?)
}

// ---------------------------------------------------------------------------
// Surface AST
// ---------------------------------------------------------------------------

/// A term with named variables; names resolve during elaboration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedTerm {
    /// A variable, free-variable name `u{k}`, or arity-0 function symbol.
    Name(String),
    /// A function application `f(t1, …, tn)`.
    App(String, Vec<NamedTerm>),
}

/// A formula with named variables, prior to elaboration.
///
/// Quantifiers carry an optional bound: `Forall(x, Some(t), f)` is the
/// relativized “for all x in t”.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedFormula {
    False,
    Equal(NamedTerm, NamedTerm),
    Mem(NamedTerm, NamedTerm),
    /// A named relation or definition applied to arguments, e.g.
    /// `subset(x, y)`; resolved against the definition table and the
    /// language during elaboration.
    Apply(String, Vec<NamedTerm>),
    Not(Box<NamedFormula>),
    And(Box<NamedFormula>, Box<NamedFormula>),
    Or(Box<NamedFormula>, Box<NamedFormula>),
    Imp(Box<NamedFormula>, Box<NamedFormula>),
    Forall(String, Option<NamedTerm>, Box<NamedFormula>),
    Exists(String, Option<NamedTerm>, Box<NamedFormula>),
}

impl NamedFormula {
    fn not(self) -> NamedFormula {
        NamedFormula::Not(Box::new(self))
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    In,
    And,
    Or,
    Not,
    False,
    Arrow,
    Eq,
    Dot,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(name) => write!(f, "identifier `{name}`"),
            Tok::Forall => write!(f, "`forall`"),
            Tok::Exists => write!(f, "`exists`"),
            Tok::In => write!(f, "`in`"),
            Tok::And => write!(f, "`and`"),
            Tok::Or => write!(f, "`or`"),
            Tok::Not => write!(f, "`not`"),
            Tok::False => write!(f, "`false`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
        }
    }
}

struct Located {
    tok: Tok,
    line: usize,
    column: usize,
}

fn parse_err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(CorpusError::Parse {
        line,
        column,
        message: message.into(),
    })
}

/// Tokenizes surface text; positions are 1-based.
fn lex(text: &str) -> Result<(Vec<Located>, usize, usize)> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let (start_line, start_col) = (line, column);
        if c == '-' {
            chars.next();
            column += 1;
            match chars.peek() {
                Some('>') => {
                    chars.next();
                    column += 1;
                    toks.push(Located {
                        tok: Tok::Arrow,
                        line: start_line,
                        column: start_col,
                    });
                }
                Some('-') => {
                    // Comment: skip to end of line.
                    for c in chars.by_ref() {
                        if c == '\n' {
                            line += 1;
                            column = 1;
                            break;
                        }
                        column += 1;
                    }
                }
                _ => return parse_err(start_line, start_col, "expected `->` or a `--` comment"),
            }
            continue;
        }
        let simple = match c {
            '=' => Some(Tok::Eq),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            column += 1;
            toks.push(Located {
                tok,
                line: start_line,
                column: start_col,
            });
            continue;
        }
        if c == '_' {
            return parse_err(
                start_line,
                start_col,
                "identifiers cannot start with an underscore",
            );
        }
        if c.is_ascii_alphabetic() {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "in" => Tok::In,
                "and" => Tok::And,
                "or" => Tok::Or,
                "not" => Tok::Not,
                "false" => Tok::False,
                _ => Tok::Ident(word),
            };
            toks.push(Located {
                tok,
                line: start_line,
                column: start_col,
            });
            continue;
        }
        return parse_err(start_line, start_col, format!("unexpected character `{c}`"));
    }
    Ok((toks, line, column))
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<Located>,
    pos: usize,
    end_line: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(l) => (l.line, l.column),
            None => (self.end_line, self.end_column),
        }
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        let (line, column) = self.here();
        let found = match self.peek() {
            Some(tok) => format!("found {tok}"),
            None => "found end of input".to_string(),
        };
        parse_err(line, column, format!("expected {expected}, {found}"))
    }

    fn advance(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.pos).map(|l| l.tok.clone());
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.fail(expected)
        }
    }

    fn formula(&mut self) -> Result<NamedFormula> {
        self.imp()
    }

    fn imp(&mut self) -> Result<NamedFormula> {
        let left = self.or()?;
        if self.eat(&Tok::Arrow) {
            let right = self.imp()?;
            Ok(NamedFormula::Imp(Box::new(left), Box::new(right)))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<NamedFormula> {
        let mut acc = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            acc = NamedFormula::Or(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<NamedFormula> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            acc = NamedFormula::And(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<NamedFormula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some(Tok::Forall) => {
                self.pos += 1;
                self.quantifier(true)
            }
            Some(Tok::Exists) => {
                self.pos += 1;
                self.quantifier(false)
            }
            _ => self.atom(),
        }
    }

    fn quantifier(&mut self, universal: bool) -> Result<NamedFormula> {
        let mut names = Vec::new();
        while let Some(Tok::Ident(name)) = self.peek() {
            names.push(name.clone());
            self.pos += 1;
        }
        if names.is_empty() {
            return self.fail("a variable name after the quantifier");
        }
        let bound = if self.eat(&Tok::In) {
            Some(self.term()?)
        } else {
            None
        };
        self.expect(Tok::Dot, "`in` or `.` after the quantifier binders")?;
        let mut f = self.imp()?;
        for name in names.into_iter().rev() {
            f = if universal {
                NamedFormula::Forall(name, bound.clone(), Box::new(f))
            } else {
                NamedFormula::Exists(name, bound.clone(), Box::new(f))
            };
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<NamedFormula> {
        match self.peek() {
            Some(Tok::False) => {
                self.pos += 1;
                Ok(NamedFormula::False)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(_)) => {
                let t = self.term()?;
                match self.peek() {
                    Some(Tok::Eq) => {
                        self.pos += 1;
                        let rhs = self.term()?;
                        Ok(NamedFormula::Equal(t, rhs))
                    }
                    Some(Tok::In) => {
                        self.pos += 1;
                        let rhs = self.term()?;
                        Ok(NamedFormula::Mem(t, rhs))
                    }
                    _ => match t {
                        NamedTerm::App(name, args) => Ok(NamedFormula::Apply(name, args)),
                        NamedTerm::Name(_) => self.fail("`=` or `in` after a term"),
                    },
                }
            }
            _ => self.fail("a formula"),
        }
    }

    fn term(&mut self) -> Result<NamedTerm> {
        let name = match self.advance() {
            Some(Tok::Ident(name)) => name,
            Some(tok) => {
                self.pos -= 1;
                let (line, column) = self.here();
                return parse_err(line, column, format!("expected a term, found {tok}"));
            }
            None => return self.fail("a term"),
        };
        if self.eat(&Tok::LParen) {
            let mut args = vec![self.term()?];
            while self.eat(&Tok::Comma) {
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, "`)` or `,` in the argument list")?;
            Ok(NamedTerm::App(name, args))
        } else {
            Ok(NamedTerm::Name(name))
        }
    }
}

/// Parses surface text into a named formula; errors carry 1-based
/// line/column positions.
pub fn parse_formula_text(text: &str) -> Result<NamedFormula> {
    let (toks, end_line, end_column) = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end_line,
        end_column,
    };
    let f = parser.formula()?;
    if parser.peek().is_some() {
        return parser.fail("end of input");
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Definition table
// ---------------------------------------------------------------------------

/// Surface-level definitions expanded during elaboration. `leq(x, y)` says
/// that some set of ordered pairs is (the graph of) a surjection from a
/// subset of `y` onto `x`; `Ord` is the ordinal predicate built from
/// epsilon-trichotomy, epsilon-well-foundedness and epsilon-transitivity.
const DEFINITION_SOURCES: &[(&str, &[&str], &str)] = &[
    ("subset", &["a", "b"], "forall w. w in a -> w in b"),
    (
        "leq",
        &["x", "y"],
        "exists f. (forall p in f. exists b in y. exists a in x. p = pair(b, a)) \
         and (forall b a1 a2. pair(b, a1) in f and pair(b, a2) in f -> a1 = a2) \
         and (forall a in x. exists b in y. pair(b, a) in f)",
    ),
    (
        "epsilon_transitive",
        &["z"],
        "forall x. x in z -> subset(x, z)",
    ),
    (
        "epsilon_trichotomy",
        &["z"],
        "forall x y in z. x = y or x in y or y in x",
    ),
    (
        "epsilon_wellfounded",
        &["z"],
        "forall x. subset(x, z) -> not (x = empty) -> exists y in x. forall w in x. not (w in y)",
    ),
    (
        "Ord",
        &["z"],
        "epsilon_trichotomy(z) and epsilon_wellfounded(z) and epsilon_transitive(z)",
    ),
];

struct Definition {
    params: Vec<String>,
    body: NamedFormula,
}

fn definition_table() -> &'static HashMap<&'static str, Definition> {
    static TABLE: OnceLock<HashMap<&'static str, Definition>> = OnceLock::new();
    TABLE.get_or_init(|| {
        DEFINITION_SOURCES
            .iter()
            .map(|(name, params, src)| {
                let body = parse_formula_text(src).expect("definition bodies parse");
                let def = Definition {
                    params: params.iter().map(|p| p.to_string()).collect(),
                    body,
                };
                (*name, def)
            })
            .collect()
    })
}

/// Replaces every definition application (`subset(x, y)`, `Ord(z)`, …) by its
/// body, recursively. Binders inside definition bodies are renamed to
/// reserved `_d{n}` names — which the lexer never produces — so argument
/// terms can never be captured. Formulas without definition applications are
/// returned unchanged, so expanding twice equals expanding once.
pub fn expand_definitions(f: &NamedFormula) -> NamedFormula {
    let mut counter = 0usize;
    expand_rec(f, &mut counter)
}

fn expand_rec(f: &NamedFormula, counter: &mut usize) -> NamedFormula {
    match f {
        NamedFormula::Apply(name, args) => {
            if let Some(def) = definition_table().get(name.as_str()) {
                if def.params.len() == args.len() {
                    let env: HashMap<String, NamedTerm> = def
                        .params
                        .iter()
                        .cloned()
                        .zip(args.iter().cloned())
                        .collect();
                    let body = instantiate(&def.body, &env, counter);
                    // The body may mention further definitions.
                    return expand_rec(&body, counter);
                }
            }
            f.clone()
        }
        NamedFormula::False | NamedFormula::Equal(..) | NamedFormula::Mem(..) => f.clone(),
        NamedFormula::Not(inner) => expand_rec(inner, counter).not(),
        NamedFormula::And(l, r) => NamedFormula::And(
            Box::new(expand_rec(l, counter)),
            Box::new(expand_rec(r, counter)),
        ),
        NamedFormula::Or(l, r) => NamedFormula::Or(
            Box::new(expand_rec(l, counter)),
            Box::new(expand_rec(r, counter)),
        ),
        NamedFormula::Imp(l, r) => NamedFormula::Imp(
            Box::new(expand_rec(l, counter)),
            Box::new(expand_rec(r, counter)),
        ),
        NamedFormula::Forall(x, bound, body) => NamedFormula::Forall(
            x.clone(),
            bound.clone(),
            Box::new(expand_rec(body, counter)),
        ),
        NamedFormula::Exists(x, bound, body) => NamedFormula::Exists(
            x.clone(),
            bound.clone(),
            Box::new(expand_rec(body, counter)),
        ),
    }
}

/// Substitutes `env` into a definition body, renaming every binder to a
/// fresh `_d{n}` name.
fn instantiate(
    body: &NamedFormula,
    env: &HashMap<String, NamedTerm>,
    counter: &mut usize,
) -> NamedFormula {
    match body {
        NamedFormula::False => NamedFormula::False,
        NamedFormula::Equal(a, b) => {
            NamedFormula::Equal(instantiate_term(a, env), instantiate_term(b, env))
        }
        NamedFormula::Mem(a, b) => {
            NamedFormula::Mem(instantiate_term(a, env), instantiate_term(b, env))
        }
        NamedFormula::Apply(name, args) => NamedFormula::Apply(
            name.clone(),
            args.iter().map(|a| instantiate_term(a, env)).collect(),
        ),
        NamedFormula::Not(inner) => instantiate(inner, env, counter).not(),
        NamedFormula::And(l, r) => NamedFormula::And(
            Box::new(instantiate(l, env, counter)),
            Box::new(instantiate(r, env, counter)),
        ),
        NamedFormula::Or(l, r) => NamedFormula::Or(
            Box::new(instantiate(l, env, counter)),
            Box::new(instantiate(r, env, counter)),
        ),
        NamedFormula::Imp(l, r) => NamedFormula::Imp(
            Box::new(instantiate(l, env, counter)),
            Box::new(instantiate(r, env, counter)),
        ),
        NamedFormula::Forall(x, bound, inner) => {
            // The bound is read outside the binder, so substitute first.
            let bound = bound.as_ref().map(|b| instantiate_term(b, env));
            let (fresh, env) = rebind(x, env, counter);
            NamedFormula::Forall(fresh, bound, Box::new(instantiate(inner, &env, counter)))
        }
        NamedFormula::Exists(x, bound, inner) => {
            let bound = bound.as_ref().map(|b| instantiate_term(b, env));
            let (fresh, env) = rebind(x, env, counter);
            NamedFormula::Exists(fresh, bound, Box::new(instantiate(inner, &env, counter)))
        }
    }
}

fn rebind(
    name: &str,
    env: &HashMap<String, NamedTerm>,
    counter: &mut usize,
) -> (String, HashMap<String, NamedTerm>) {
    let fresh = format!("_d{}", *counter);
    *counter += 1;
    let mut env = env.clone();
    env.insert(name.to_string(), NamedTerm::Name(fresh.clone()));
    (fresh, env)
}

fn instantiate_term(t: &NamedTerm, env: &HashMap<String, NamedTerm>) -> NamedTerm {
    match t {
        NamedTerm::Name(n) => match env.get(n) {
            Some(replacement) => replacement.clone(),
            None => t.clone(),
        },
        NamedTerm::App(f, args) => NamedTerm::App(
            f.clone(),
            args.iter().map(|a| instantiate_term(a, env)).collect(),
        ),
    }
}

// ---------------------------------------------------------------------------
// Elaboration
// ---------------------------------------------------------------------------

/// Elaborates a surface formula over the corpus language: definitions are
/// expanded, bounded quantifiers relativized, and names resolved to de
/// Bruijn indices (innermost binding wins; unbound `u{k}` becomes the free
/// variable `depth + k`).
pub fn elaborate(f: &NamedFormula) -> Result<Formula> {
    let expanded = expand_definitions(f);
    let mut scope = Vec::new();
    elab_formula(&expanded, &mut scope)
}

/// Parses and elaborates in one step; the inverse of [`print_formula`].
pub fn read_formula(text: &str) -> Result<Formula> {
    elaborate(&parse_formula_text(text)?)
}

/// The index `k` when `name` is of the canonical free-variable form `u{k}`.
fn free_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('u')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn resolve_name(name: &str, scope: &[String]) -> Result<Term> {
    if let Some(pos) = scope.iter().rposition(|n| n == name) {
        return Ok(Term::var(scope.len() - 1 - pos));
    }
    if let Some(k) = free_index(name) {
        return Ok(Term::var(scope.len() + k));
    }
    if let Some(sym) = set_language().function(name) {
        if sym.arity() == 0 {
            return Ok(Term::constant(sym)?);
        }
    }
    Err(CorpusError::UnboundName(name.to_string()))
}

fn elab_term(t: &NamedTerm, scope: &[String]) -> Result<Term> {
    match t {
        NamedTerm::Name(name) => resolve_name(name, scope),
        NamedTerm::App(name, args) => {
            let sym = set_language()
                .function(name)
                .filter(|sym| sym.arity() == args.len())
                .ok_or_else(|| CorpusError::UnknownApplication {
                    name: name.clone(),
                    arity: args.len(),
                })?;
            let args = args
                .iter()
                .map(|a| elab_term(a, scope))
                .collect::<Result<Vec<_>>>()?;
            Ok(Term::apply(sym, args)?)
        }
    }
}

fn elab_formula(f: &NamedFormula, scope: &mut Vec<String>) -> Result<Formula> {
    match f {
        NamedFormula::False => Ok(Formula::falsum()),
        NamedFormula::Equal(a, b) => Ok(Formula::equal(elab_term(a, scope)?, elab_term(b, scope)?)),
        NamedFormula::Mem(a, b) => Ok(member(elab_term(a, scope)?, elab_term(b, scope)?)),
        NamedFormula::Apply(name, args) => {
            // Definitions were expanded before elaboration, so any surviving
            // application must be a relation of the language itself.
            let sym = set_language()
                .relation(name)
                .filter(|sym| sym.arity() == args.len())
                .ok_or_else(|| CorpusError::UnknownApplication {
                    name: name.clone(),
                    arity: args.len(),
                })?;
            let args = args
                .iter()
                .map(|a| elab_term(a, scope))
                .collect::<Result<Vec<_>>>()?;
            Ok(Formula::rel_app(sym, args)?)
        }
        NamedFormula::Not(inner) => Ok(elab_formula(inner, scope)?.not()),
        NamedFormula::And(l, r) => Ok(elab_formula(l, scope)?.and(elab_formula(r, scope)?)),
        NamedFormula::Or(l, r) => Ok(elab_formula(l, scope)?.or(elab_formula(r, scope)?)),
        NamedFormula::Imp(l, r) => Ok(Formula::imp(
            elab_formula(l, scope)?,
            elab_formula(r, scope)?,
        )),
        NamedFormula::Forall(x, bound, body) => {
            let bound = bound
                .as_ref()
                .map(|t| elab_term(t, scope))
                .transpose()?
                .map(|t| t.lift(1, 0));
            scope.push(x.clone());
            let body = elab_formula(body, scope);
            scope.pop();
            let body = body?;
            Ok(match bound {
                Some(t) => Formula::all(Formula::imp(member(Term::var(0), t), body)),
                None => Formula::all(body),
            })
        }
        NamedFormula::Exists(x, bound, body) => {
            let bound = bound
                .as_ref()
                .map(|t| elab_term(t, scope))
                .transpose()?
                .map(|t| t.lift(1, 0));
            scope.push(x.clone());
            let body = elab_formula(body, scope);
            scope.pop();
            let body = body?;
            Ok(match bound {
                Some(t) => member(Term::var(0), t).and(body).ex(),
                None => body.ex(),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Surface recovery and printing
// ---------------------------------------------------------------------------

fn match_not(f: &Preformula) -> Option<&Preformula> {
    if let Preformula::Imp(a, b) = f {
        if matches!(b.as_preformula(), Preformula::Falsum) {
            return Some(a.as_preformula());
        }
    }
    None
}

/// `f or g` is encoded as `(f -> false) -> g`.
fn match_or(f: &Preformula) -> Option<(&Preformula, &Preformula)> {
    if let Preformula::Imp(l, r) = f {
        if let Some(a) = match_not(l.as_preformula()) {
            return Some((a, r.as_preformula()));
        }
    }
    None
}

/// `f and g` is encoded as `not (not f or not g)`.
fn match_and(f: &Preformula) -> Option<(&Preformula, &Preformula)> {
    let inner = match_not(f)?;
    let (not_l, not_r) = match_or(inner)?;
    Some((match_not(not_l)?, match_not(not_r)?))
}

/// `exists f` is encoded as `not (forall (not f))`.
fn match_ex(f: &Preformula) -> Option<&Preformula> {
    let inner = match_not(f)?;
    if let Preformula::All(body) = inner {
        match_not(body.as_preformula())
    } else {
        None
    }
}

/// Collects a relation-application spine `AppRel(…(Rel(sym), t1)…, tn)`.
fn match_rel_spine(f: &Preformula) -> Option<(crate::syntax::RelSym, Vec<&Term>)> {
    let mut args = Vec::new();
    let mut head = f;
    loop {
        match head {
            Preformula::AppRel(inner, arg) => {
                args.push(arg);
                head = inner;
            }
            Preformula::Rel(sym) => {
                args.reverse();
                return Some((*sym, args));
            }
            _ => return None,
        }
    }
}

/// `var 0 in t` with `t` not using variable 0 — the shape left by a bounded
/// quantifier. Returns the bound with its indices shifted down by one.
fn match_bound(f: &Preformula) -> Option<Term> {
    let (sym, args) = match_rel_spine(f)?;
    if set_language().relation_name(sym) != "in" || args.len() != 2 {
        return None;
    }
    if args[0].as_preterm() != &Preterm::Var(0) || term_uses_var0(args[1].as_preterm()) {
        return None;
    }
    // No variable 0 occurs, so this only renumbers k+1 -> k.
    Some(args[1].subst(&Term::var(0), 0))
}

fn term_uses_var0(t: &Preterm) -> bool {
    match t {
        Preterm::Var(i) => *i == 0,
        Preterm::Func(_) => false,
        Preterm::App(head, arg) => term_uses_var0(head) || term_uses_var0(arg.as_preterm()),
    }
}

fn binder_name(depth: usize) -> String {
    format!("v{depth}")
}

/// Reconstructs a surface formula from de Bruijn form, undoing the derived
/// connectives and bounded quantifiers. The binder at depth `j` is named
/// `v{j}`; free variable `k` is named `u{k}`.
pub fn surface(f: &Formula) -> NamedFormula {
    surface_at(f.as_preformula(), 0)
}

fn surface_at(f: &Preformula, depth: usize) -> NamedFormula {
    if let Some(body) = match_ex(f) {
        let name = binder_name(depth);
        if let Some((l, r)) = match_and(body) {
            if let Some(bound) = match_bound(l) {
                return NamedFormula::Exists(
                    name,
                    Some(surface_term(bound.as_preterm(), depth)),
                    Box::new(surface_at(r, depth + 1)),
                );
            }
        }
        return NamedFormula::Exists(name, None, Box::new(surface_at(body, depth + 1)));
    }
    if let Some((l, r)) = match_and(f) {
        return NamedFormula::And(
            Box::new(surface_at(l, depth)),
            Box::new(surface_at(r, depth)),
        );
    }
    if let Some((l, r)) = match_or(f) {
        return NamedFormula::Or(
            Box::new(surface_at(l, depth)),
            Box::new(surface_at(r, depth)),
        );
    }
    if let Some(inner) = match_not(f) {
        return surface_at(inner, depth).not();
    }
    match f {
        Preformula::Falsum => NamedFormula::False,
        Preformula::Equal(a, b) => NamedFormula::Equal(
            surface_term(a.as_preterm(), depth),
            surface_term(b.as_preterm(), depth),
        ),
        Preformula::Rel(_) | Preformula::AppRel(..) => {
            let (sym, args) = match_rel_spine(f).expect("relation spine is well formed");
            let args: Vec<NamedTerm> = args
                .iter()
                .map(|t| surface_term(t.as_preterm(), depth))
                .collect();
            let name = set_language().relation_name(sym);
            if name == "in" && args.len() == 2 {
                let mut it = args.into_iter();
                let a = it.next().expect("two arguments");
                let b = it.next().expect("two arguments");
                NamedFormula::Mem(a, b)
            } else {
                NamedFormula::Apply(name.to_string(), args)
            }
        }
        Preformula::Imp(a, b) => NamedFormula::Imp(
            Box::new(surface_at(a.as_preformula(), depth)),
            Box::new(surface_at(b.as_preformula(), depth)),
        ),
        Preformula::All(body) => {
            let name = binder_name(depth);
            // Prefer `forall x in t. f` when the body is `x in t -> f` with
            // f ≠ false; `x in t -> false` reads better as `not (x in t)`.
            if let Preformula::Imp(l, r) = body.as_preformula() {
                if !matches!(r.as_preformula(), Preformula::Falsum) {
                    if let Some(bound) = match_bound(l.as_preformula()) {
                        return NamedFormula::Forall(
                            name,
                            Some(surface_term(bound.as_preterm(), depth)),
                            Box::new(surface_at(r.as_preformula(), depth + 1)),
                        );
                    }
                }
            }
            NamedFormula::Forall(
                name,
                None,
                Box::new(surface_at(body.as_preformula(), depth + 1)),
            )
        }
    }
}

fn surface_term(t: &Preterm, depth: usize) -> NamedTerm {
    match t {
        Preterm::Var(i) => {
            if *i < depth {
                NamedTerm::Name(binder_name(depth - 1 - i))
            } else {
                NamedTerm::Name(format!("u{}", i - depth))
            }
        }
        Preterm::Func(_) | Preterm::App(..) => {
            let mut args = Vec::new();
            let mut head = t;
            loop {
                match head {
                    Preterm::App(inner, arg) => {
                        args.push(surface_term(arg.as_preterm(), depth));
                        head = inner;
                    }
                    Preterm::Func(sym) => {
                        args.reverse();
                        let name = set_language().function_name(*sym).to_string();
                        return if args.is_empty() {
                            NamedTerm::Name(name)
                        } else {
                            NamedTerm::App(name, args)
                        };
                    }
                    Preterm::Var(_) => unreachable!("a variable cannot head an application"),
                }
            }
        }
    }
}

impl fmt::Display for NamedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedTerm::Name(n) => f.write_str(n),
            NamedTerm::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Precedence levels for rendering: implication 0, `or` 1, `and` 2, unary 3.
/// `min` is the lowest level allowed at this position without parentheses;
/// `tail` says whether the position extends to the end of the enclosing
/// formula, which is what an unparenthesized quantifier body requires.
fn render(f: &NamedFormula, min: u8, tail: bool, out: &mut String) {
    match f {
        NamedFormula::False => out.push_str("false"),
        NamedFormula::Equal(a, b) => {
            out.push_str(&format!("{a} = {b}"));
        }
        NamedFormula::Mem(a, b) => {
            out.push_str(&format!("{a} in {b}"));
        }
        NamedFormula::Apply(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&arg.to_string());
            }
            out.push(')');
        }
        NamedFormula::Not(inner) => {
            out.push_str("not ");
            render(inner, 3, tail, out);
        }
        NamedFormula::And(l, r) => {
            if min > 2 {
                parenthesize(f, out);
            } else {
                render(l, 2, false, out);
                out.push_str(" and ");
                render(r, 3, tail, out);
            }
        }
        NamedFormula::Or(l, r) => {
            if min > 1 {
                parenthesize(f, out);
            } else {
                render(l, 1, false, out);
                out.push_str(" or ");
                render(r, 2, tail, out);
            }
        }
        NamedFormula::Imp(l, r) => {
            if min > 0 {
                parenthesize(f, out);
            } else {
                render(l, 1, false, out);
                out.push_str(" -> ");
                render(r, 0, tail, out);
            }
        }
        NamedFormula::Forall(x, bound, body) | NamedFormula::Exists(x, bound, body) => {
            if !tail {
                parenthesize(f, out);
            } else {
                out.push_str(if matches!(f, NamedFormula::Forall(..)) {
                    "forall "
                } else {
                    "exists "
                });
                out.push_str(x);
                if let Some(t) = bound {
                    out.push_str(" in ");
                    out.push_str(&t.to_string());
                }
                out.push_str(". ");
                render(body, 0, true, out);
            }
        }
    }
}

fn parenthesize(f: &NamedFormula, out: &mut String) {
    out.push('(');
    render(f, 0, true, out);
    out.push(')');
}

impl fmt::Display for NamedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        render(self, 0, true, &mut out);
        f.write_str(&out)
    }
}

/// Renders a de Bruijn formula as surface text.
pub fn print_formula(f: &Formula) -> String {
    surface(f).to_string()
}

/// Renders a de Bruijn term as surface text (free variable `k` prints as
/// `u{k}`).
pub fn print_term(t: &Term) -> String {
    surface_term(t.as_preterm(), 0).to_string()
}

// ---------------------------------------------------------------------------
// The axiom corpus
// ---------------------------------------------------------------------------

/// Surface sources of the closed set-theory axioms, in canonical order.
/// Biconditionals are spelled as conjunctions of two implications. In the
/// final clause of `zorns_lemma` the maximal element ranges over `z` (the
/// nonempty, chain-closed set under discussion).
const AXIOM_SOURCES: &[(&str, &str)] = &[
    ("emptyset", "forall x. not (x in empty)"),
    (
        "ordered_pairs",
        "forall x y z w. (pair(x, y) = pair(z, w) -> x = z and y = w) \
         and (x = z and y = w -> pair(x, y) = pair(z, w))",
    ),
    (
        "extensionality",
        "forall x y. (forall z. (z in x -> z in y) and (z in y -> z in x)) -> x = y",
    ),
    (
        "union",
        "forall u x. (x in U(u) -> exists y in u. x in y) \
         and ((exists y in u. x in y) -> x in U(u))",
    ),
    (
        "powerset",
        "forall z y. (y in P(z) -> forall x in y. x in z) \
         and ((forall x in y. x in z) -> y in P(z))",
    ),
    (
        "infinity",
        "empty in omega \
         and (forall x in omega. exists y in omega. x in y) \
         and (exists a. Ord(a) and omega = a) \
         and (forall a. Ord(a) -> (empty in a and (forall x in a. exists y in a. x in y)) \
              -> subset(omega, a))",
    ),
    (
        "regularity",
        "forall x. not (x = empty) -> exists y in x. forall z in x. not (z in y)",
    ),
    (
        "zorns_lemma",
        "forall z. not (z = empty) \
         -> (forall y. (subset(y, z) and (forall x1 x2 in y. subset(x1, x2) or subset(x2, x1))) \
             -> U(y) in z) \
         -> exists m in z. forall x in z. subset(m, x) -> m = x",
    ),
];

/// Builds an instance of the collection scheme for `phi`.
///
/// `phi` follows a fixed free-variable convention: index 0 is the witness
/// `y`, index 1 is the element `x`, and index `2 + i` is the i-th extra
/// parameter, so `phi` may use at most `n_params + 2` free variables. The
/// instance universally quantifies the parameters and a set `A`, and states
/// that if every `x` in `A` has a witness `y` with `phi`, then some set `B`
/// collects witnesses both ways: every `x` in `A` has its `y` in `B`, and
/// every `y` in `B` serves some `x` in `A`.
pub fn collection_instance(phi: &Formula, n_params: usize) -> Result<Formula> {
    let bound = phi.free_bound();
    if bound > n_params + 2 {
        return Err(CorpusError::TooManyFree {
            allowed: n_params + 2,
            found: bound,
        });
    }
    let n = n_params;
    // Free variables are renumbered per occurrence site; the parameters sit
    // outermost, so the i-th parameter (contract index 2 + i) lands at
    // `site depth - 2 - i` in each case.
    let phi_hyp = phi.remap_free(&|m| match m {
        0 => 0,
        1 => 1,
        m => n + 4 - m,
    });
    let phi_forward = phi.remap_free(&|m| match m {
        0 => 0,
        1 => 1,
        m => n + 5 - m,
    });
    let phi_backward = phi.remap_free(&|m| match m {
        0 => 1,
        1 => 0,
        m => n + 5 - m,
    });
    let var = Term::var;
    // Binders inside: hypothesis under [params…, A, x, y];
    // forward clause under [params…, A, B, x, y];
    // backward clause under [params…, A, B, y, x].
    let hyp = Formula::all(Formula::imp(member(var(0), var(1)), phi_hyp.ex()));
    let forward = Formula::all(Formula::imp(
        member(var(0), var(2)),
        member(var(0), var(2)).and(phi_forward).ex(),
    ));
    let backward = Formula::all(Formula::imp(
        member(var(0), var(1)),
        member(var(0), var(3)).and(phi_backward).ex(),
    ));
    let mut f = Formula::all(Formula::imp(hyp, forward.and(backward).ex()));
    for _ in 0..n {
        f = Formula::all(f);
    }
    Ok(f)
}

/// The axiom corpus: eight closed axioms plus two instances of the
/// collection scheme (`phi := y = x` and `phi := y in p` for a parameter
/// `p`), keyed by name, in canonical order.
pub fn zfc_axioms() -> Vec<(&'static str, Formula)> {
    let mut axioms: Vec<(&'static str, Formula)> = AXIOM_SOURCES
        .iter()
        .map(|(name, src)| {
            let f = read_formula(src).expect("corpus axioms elaborate");
            (*name, f)
        })
        .collect();
    let eq_phi = Formula::equal(Term::var(0), Term::var(1));
    axioms.push((
        "collection_eq",
        collection_instance(&eq_phi, 0).expect("collection instance for y = x"),
    ));
    let mem_phi = member(Term::var(0), Term::var(2));
    axioms.push((
        "collection_mem",
        collection_instance(&mem_phi, 1).expect("collection instance for y in p"),
    ));
    axioms
}

/// Looks up one axiom of [`zfc_axioms`] by name.
pub fn zfc_axiom(name: &str) -> Option<Formula> {
    zfc_axioms()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| f)
}

/// The continuum-hypothesis sentence: every ordinal is dominated by `omega`
/// or dominates `P(omega)`, where `leq(x, y)` means some set of ordered
/// pairs is a surjection from a subset of `y` onto `x`.
pub fn ch_sentence() -> Formula {
    read_formula("forall x. Ord(x) -> leq(x, omega) or leq(P(omega), x)")
        .expect("the continuum-hypothesis sentence elaborates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::FinCBA;
    use crate::semantics::BStructure;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn mem(a: usize, b: usize) -> Formula {
        member(Term::var(a), Term::var(b))
    }

    fn eq(a: usize, b: usize) -> Formula {
        Formula::equal(Term::var(a), Term::var(b))
    }

    fn constant(name: &str) -> Term {
        set_term(name, vec![]).unwrap()
    }

    #[test]
    fn language_has_the_fixed_signature() {
        let lang = set_language();
        for (name, arity) in [("empty", 0), ("pair", 2), ("omega", 0), ("P", 1), ("U", 1)] {
            let sym = lang.function(name).unwrap();
            assert_eq!(sym.arity(), arity, "arity of {name}");
        }
        assert_eq!(lang.relation("in").unwrap().arity(), 2);
        assert_eq!(lang.function_symbols().len(), 5);
        assert_eq!(lang.relation_symbols().len(), 1);
    }

    #[test]
    fn elaborates_the_identity_formula() {
        let f = read_formula("forall x. x = x").unwrap();
        assert_eq!(f, Formula::all(eq(0, 0)));
    }

    #[test]
    fn elaborates_the_emptyset_axiom_to_its_de_bruijn_form() {
        let f = read_formula("forall x. not (x in empty)").unwrap();
        let expected = Formula::all(member(Term::var(0), constant("empty")).not());
        assert_eq!(f, expected);
    }

    #[test]
    fn print_uses_canonical_names() {
        assert_eq!(print_formula(&Formula::falsum()), "false");
        assert_eq!(print_formula(&Formula::all(eq(0, 0))), "forall v0. v0 = v0");
    }

    #[test]
    fn pair_swap_formula_round_trips() {
        let src = "forall x y. pair(x, y) = pair(y, x) -> x = y";
        let f = read_formula(src).unwrap();
        let printed = print_formula(&f);
        assert_eq!(
            printed,
            "forall v0. forall v1. pair(v0, v1) = pair(v1, v0) -> v0 = v1"
        );
        assert_eq!(read_formula(&printed).unwrap(), f);
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let err = parse_formula_text("forall x.\n  x ~ y").unwrap_err();
        match err {
            CorpusError::Parse { line, column, .. } => {
                assert_eq!((line, column), (2, 5));
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
        let err = parse_formula_text("forall x").unwrap_err();
        match err {
            CorpusError::Parse {
                line,
                column,
                message,
            } => {
                assert_eq!((line, column), (1, 9));
                assert!(message.contains("expected"), "message: {message}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn unbound_names_are_rejected() {
        match read_formula("forall x. x = yy").unwrap_err() {
            CorpusError::UnboundName(name) => assert_eq!(name, "yy"),
            other => panic!("expected an unbound-name error, got {other:?}"),
        }
        match read_formula("forall x. wide(x, x)").unwrap_err() {
            CorpusError::UnknownApplication { name, arity } => {
                assert_eq!((name.as_str(), arity), ("wide", 2));
            }
            other => panic!("expected an unknown-application error, got {other:?}"),
        }
    }

    #[test]
    fn free_variable_names_follow_the_u_convention() {
        assert_eq!(read_formula("u0 in u1").unwrap(), mem(0, 1));
        assert_eq!(print_formula(&mem(0, 1)), "u0 in u1");
        // Under one binder, free variable 1 is u0.
        let f = Formula::all(mem(1, 0));
        assert_eq!(print_formula(&f), "forall v0. u0 in v0");
        assert_eq!(read_formula("forall v0. u0 in v0").unwrap(), f);
    }

    #[test]
    fn shadowing_resolves_to_the_innermost_binder() {
        let f = read_formula("forall x. forall x. x = x").unwrap();
        assert_eq!(f, Formula::all(Formula::all(eq(0, 0))));
        // A binder named u0 shadows the free-variable convention.
        let g = read_formula("forall u0. u0 = u0").unwrap();
        assert_eq!(g, Formula::all(eq(0, 0)));
    }

    #[test]
    fn bounded_quantifiers_relativize() {
        let f = read_formula("forall x in u0. x in x").unwrap();
        assert_eq!(f, Formula::all(Formula::imp(mem(0, 1), mem(0, 0))));
        let g = read_formula("exists y in u0. y = y").unwrap();
        assert_eq!(g, mem(0, 1).and(eq(0, 0)).ex());
    }

    #[test]
    fn multi_name_binders_share_the_bound() {
        let f = read_formula("forall a b in u0. a in b").unwrap();
        let expected = Formula::all(Formula::imp(
            mem(0, 1),
            Formula::all(Formula::imp(mem(0, 2), mem(1, 0))),
        ));
        assert_eq!(f, expected);
    }

    #[test]
    fn subset_definition_unfolds() {
        let f = read_formula("subset(u0, u1)").unwrap();
        assert_eq!(f, Formula::all(Formula::imp(mem(0, 1), mem(0, 2))));
    }

    #[test]
    fn definition_expansion_is_idempotent() {
        for src in ["Ord(u0)", "leq(u0, P(u1))", "subset(empty, omega)"] {
            let nf = parse_formula_text(src).unwrap();
            let once = expand_definitions(&nf);
            let twice = expand_definitions(&once);
            assert_eq!(once, twice, "expanding {src} twice changed the result");
            assert_eq!(
                elaborate(&nf).unwrap(),
                elaborate(&once).unwrap(),
                "expansion changed the meaning of {src}"
            );
        }
    }

    #[test]
    fn definition_arguments_are_not_captured() {
        // The body of subset binds w; passing w as an argument must still
        // refer to the outer binder.
        let f = read_formula("forall w. subset(w, w)").unwrap();
        let expected = Formula::all(Formula::all(Formula::imp(mem(0, 1), mem(0, 1))));
        assert_eq!(f, expected);
    }

    #[test]
    fn axioms_are_closed_and_in_canonical_order() {
        let axioms = zfc_axioms();
        let names: Vec<&str> = axioms.iter().map(|(n, _)| *n).collect();
        assert_eq!(
            names,
            [
                "emptyset",
                "ordered_pairs",
                "extensionality",
                "union",
                "powerset",
                "infinity",
                "regularity",
                "zorns_lemma",
                "collection_eq",
                "collection_mem",
            ]
        );
        for (name, f) in &axioms {
            assert!(f.is_closed(), "axiom {name} has free variables");
        }
        assert!(ch_sentence().is_closed());
        assert!(zfc_axiom("powerset").is_some());
        assert!(zfc_axiom("choice").is_none());
    }

    #[test]
    fn axioms_round_trip_through_print_and_parse() {
        for (name, f) in zfc_axioms() {
            let printed = print_formula(&f);
            let back = read_formula(&printed)
                .unwrap_or_else(|e| panic!("printed {name} failed to parse: {e}\n{printed}"));
            assert_eq!(back, f, "axiom {name} changed over a round trip");
        }
        let ch = ch_sentence();
        assert_eq!(read_formula(&print_formula(&ch)).unwrap(), ch);
    }

    #[test]
    fn collection_instance_for_equality_matches_the_hand_expansion() {
        let phi = eq(0, 1); // y = x
        let instance = collection_instance(&phi, 0).unwrap();
        let hyp = Formula::all(Formula::imp(mem(0, 1), eq(0, 1).ex()));
        let forward = Formula::all(Formula::imp(mem(0, 2), mem(0, 2).and(eq(0, 1)).ex()));
        let backward = Formula::all(Formula::imp(mem(0, 1), mem(0, 3).and(eq(1, 0)).ex()));
        let expected = Formula::all(Formula::imp(hyp, forward.and(backward).ex()));
        assert_eq!(instance, expected);
        assert!(instance.is_closed());
    }

    #[test]
    fn collection_instance_with_parameter_matches_the_hand_expansion() {
        let phi = mem(0, 2); // y in p
        let instance = collection_instance(&phi, 1).unwrap();
        let hyp = Formula::all(Formula::imp(mem(0, 1), mem(0, 3).ex()));
        let forward = Formula::all(Formula::imp(mem(0, 2), mem(0, 2).and(mem(0, 4)).ex()));
        let backward = Formula::all(Formula::imp(mem(0, 1), mem(0, 3).and(mem(1, 4)).ex()));
        let expected = Formula::all(Formula::all(Formula::imp(hyp, forward.and(backward).ex())));
        assert_eq!(instance, expected);
        assert!(instance.is_closed());
    }

    #[test]
    fn collection_instance_rejects_excess_free_variables() {
        let phi = mem(0, 4);
        match collection_instance(&phi, 1).unwrap_err() {
            CorpusError::TooManyFree { allowed, found } => {
                assert_eq!((allowed, found), (3, 5));
            }
            other => panic!("expected a free-variable bound error, got {other:?}"),
        }
    }

    #[test]
    fn ch_sentence_is_a_guarded_disjunction_over_ordinals() {
        let ch = ch_sentence();
        let Preformula::All(body) = ch.as_preformula() else {
            panic!("expected a universal quantifier at the top");
        };
        let Preformula::Imp(_, conclusion) = body.as_preformula() else {
            panic!("expected a guarded implication under the quantifier");
        };
        assert!(
            match_or(conclusion.as_preformula()).is_some(),
            "expected a disjunction conclusion"
        );
    }

    #[test]
    fn printer_respects_precedence() {
        let a = eq(0, 0);
        let b = eq(1, 1);
        let c = eq(2, 2);
        assert_eq!(
            print_formula(&a.clone().and(b.clone()).or(c.clone())),
            "u0 = u0 and u1 = u1 or u2 = u2"
        );
        assert_eq!(
            print_formula(&a.clone().and(b.clone().or(c.clone()))),
            "u0 = u0 and (u1 = u1 or u2 = u2)"
        );
        assert_eq!(
            print_formula(&Formula::imp(Formula::imp(a.clone(), b.clone()), c.clone())),
            "(u0 = u0 -> u1 = u1) -> u2 = u2"
        );
        assert_eq!(
            print_formula(&Formula::imp(a.clone(), Formula::imp(b.clone(), c.clone()))),
            "u0 = u0 -> u1 = u1 -> u2 = u2"
        );
        // A quantifier needs parentheses except in tail position.
        assert_eq!(
            print_formula(&a.clone().and(Formula::all(eq(0, 0)))),
            "u0 = u0 and forall v0. v0 = v0"
        );
        assert_eq!(
            print_formula(&Formula::all(eq(0, 0)).and(a.clone())),
            "(forall v0. v0 = v0) and u0 = u0"
        );
        // `not X -> b` is the encoding of `X or b`, so it prints as one.
        assert_eq!(
            print_formula(&Formula::imp(Formula::all(eq(0, 0)).not(), b.clone())),
            "(forall v0. v0 = v0) or u1 = u1"
        );
        assert_eq!(
            print_formula(&Formula::all(eq(0, 0)).not().or(b.clone())),
            "not (forall v0. v0 = v0) or u1 = u1"
        );
        assert_eq!(print_formula(&a.clone().not()), "not u0 = u0");
    }

    #[test]
    fn derived_connectives_are_recovered() {
        assert_eq!(print_formula(&eq(0, 0).ex()), "exists v0. v0 = v0");
        let bounded = Formula::all(Formula::imp(mem(0, 1), eq(0, 0)));
        assert_eq!(print_formula(&bounded), "forall v0 in u0. v0 = v0");
        // A bound that mentions the binder itself cannot be recovered.
        let self_bound = Formula::all(Formula::imp(mem(0, 0), eq(0, 0)));
        assert_eq!(print_formula(&self_bound), "forall v0. v0 in v0 -> v0 = v0");
        // The negated-membership reading wins over an empty bounded body.
        let emptyset = zfc_axiom("emptyset").unwrap();
        assert_eq!(print_formula(&emptyset), "forall v0. not v0 in empty");
        let bounded_ex = mem(0, 1).and(eq(0, 0)).ex();
        assert_eq!(print_formula(&bounded_ex), "exists v0 in u0. v0 = v0");
    }

    #[test]
    fn core_axioms_hold_in_the_two_element_membership_model() {
        // Carrier {0: the empty set, 1: the set containing only 0}, with
        // two-valued (classical) truth values.
        let alg = Arc::new(FinCBA::powerset(1).unwrap());
        let bot = alg.bot();
        let top = alg.top();
        let mut s = BStructure::new(set_language().clone(), Arc::clone(&alg), 2).unwrap();
        let b = |v: crate::boolalg::Elt| v.index();
        s.set_relation("in", vec![b(bot), b(top), b(bot), b(bot)])
            .unwrap();
        s.set_function("empty", vec![0]).unwrap();
        s.set_function("omega", vec![0]).unwrap();
        s.set_function("pair", vec![0, 0, 0, 0]).unwrap();
        // P(0) = {0} = 1; P(1) is not in the carrier, any filler works for
        // the axioms exercised here.
        s.set_function("P", vec![1, 1]).unwrap();
        s.set_function("U", vec![0, 0]).unwrap();
        s.validate().unwrap();
        for name in ["emptyset", "extensionality", "regularity"] {
            let axiom = zfc_axiom(name).unwrap();
            let value = s.realize_sentence(&axiom).unwrap();
            assert_eq!(value, top, "axiom {name} does not hold in the model");
        }
    }

    fn formula_strategy() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::falsum()),
            (0usize..4, 0usize..4).prop_map(|(a, b)| eq(a, b)),
            (0usize..4, 0usize..4).prop_map(|(a, b)| mem(a, b)),
            (0usize..4).prop_map(|a| member(Term::var(a), constant("omega"))),
            (0usize..4, 0usize..4).prop_map(|(a, b)| {
                Formula::equal(
                    set_term("pair", vec![Term::var(a), Term::var(b)]).unwrap(),
                    constant("empty"),
                )
            }),
        ];
        leaf.prop_recursive(5, 64, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
                inner.clone().prop_map(|a| a.not()),
                inner.clone().prop_map(Formula::all),
                inner.clone().prop_map(|a| a.ex()),
                (inner.clone(), 0usize..4).prop_map(|(a, t)| Formula::all(Formula::imp(
                    member(Term::var(0), Term::var(t + 1)),
                    a
                ))),
            ]
        })
    }

    proptest! {
        #[test]
        fn printing_then_reading_is_the_identity(f in formula_strategy()) {
            let printed = print_formula(&f);
            let back = read_formula(&printed);
            prop_assert!(back.is_ok(), "printed form failed to parse: {}", printed);
            prop_assert_eq!(back.unwrap(), f, "round trip changed the formula: {}", printed);
        }
    }
}
