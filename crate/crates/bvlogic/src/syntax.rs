//! Deep embedding of first-order logic with de Bruijn variables.
//!
//! Terms and formulas are *arity-indexed*: a `Preterm` of arity `n` still
//! expects `n` more arguments, and a [`Term`] is a preterm of arity 0.
//! Likewise a [`Formula`] is a [`Preformula`] of arity 0. Partial
//! application is explicit (`app`/`apprel` nodes), so a binary symbol `f`
//! applied to `s, t` is `app(app(f, s), t)`.
//!
//! Bound variables are de Bruijn indices: `var 0` refers to the innermost
//! quantifier, and an occurrence of `var m` under `k` quantifiers is bound
//! iff `m < k`. The only primitive connectives are `falsum`, `=`, relation
//! application, `imp` and `all`; everything else is derived.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::sexpr::{Sexp, SexpError};

#[derive(Debug, Error)]
pub enum SyntaxError {
    #[error("duplicate symbol name `{0}` in language")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("cannot apply a term of arity 0")]
    HeadNotApplicable,
    #[error("expected arity {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("expected a term/formula of arity 0, found arity {0}")]
    NotSaturated(usize),
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error(transparent)]
    Sexp(#[from] SexpError),
}

type Result<T> = std::result::Result<T, SyntaxError>;

/// A finite first-order language: function and relation symbols with
/// fixed arities. Symbol names are unique across the whole language.
///
/// Terms and formulas reference symbols by `(arity, position)` pairs, so
/// their values are independent of the symbol names; names only matter
/// for parsing and printing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    functions: BTreeMap<usize, Vec<String>>,
    relations: BTreeMap<usize, Vec<String>>,
}

/// Reference to a function symbol: its arity and position within that arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncSym {
    arity: usize,
    index: usize,
}

/// Reference to a relation symbol: its arity and position within that arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelSym {
    arity: usize,
    index: usize,
}

impl FuncSym {
    pub fn arity(&self) -> usize {
        self.arity
    }
    pub fn index(&self) -> usize {
        self.index
    }
}

impl RelSym {
    pub fn arity(&self) -> usize {
        self.arity
    }
    pub fn index(&self) -> usize {
        self.index
    }
}

impl Language {
    /// Builds a language from `(name, arity)` lists. Within one arity,
    /// symbols keep their declaration order.
    pub fn new(functions: Vec<(&str, usize)>, relations: Vec<(&str, usize)>) -> Result<Language> {
        let mut seen = std::collections::BTreeSet::new();
        let mut fns: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        let mut rels: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (name, arity) in functions {
            if !seen.insert(name.to_string()) {
                return Err(SyntaxError::DuplicateSymbol(name.to_string()));
            }
            fns.entry(arity).or_default().push(name.to_string());
        }
        for (name, arity) in relations {
            if !seen.insert(name.to_string()) {
                return Err(SyntaxError::DuplicateSymbol(name.to_string()));
            }
            rels.entry(arity).or_default().push(name.to_string());
        }
        Ok(Language {
            functions: fns,
            relations: rels,
        })
    }

    pub fn function(&self, name: &str) -> Option<FuncSym> {
        self.functions.iter().find_map(|(&arity, names)| {
            names
                .iter()
                .position(|n| n == name)
                .map(|index| FuncSym { arity, index })
        })
    }

    pub fn relation(&self, name: &str) -> Option<RelSym> {
        self.relations.iter().find_map(|(&arity, names)| {
            names
                .iter()
                .position(|n| n == name)
                .map(|index| RelSym { arity, index })
        })
    }

    pub fn function_name(&self, sym: FuncSym) -> &str {
        &self.functions[&sym.arity][sym.index]
    }

    pub fn relation_name(&self, sym: RelSym) -> &str {
        &self.relations[&sym.arity][sym.index]
    }

    /// All function symbols, ordered by (arity, position).
    pub fn function_symbols(&self) -> Vec<FuncSym> {
        self.functions
            .iter()
            .flat_map(|(&arity, names)| (0..names.len()).map(move |index| FuncSym { arity, index }))
            .collect()
    }

    /// All relation symbols, ordered by (arity, position).
    pub fn relation_symbols(&self) -> Vec<RelSym> {
        self.relations
            .iter()
            .flat_map(|(&arity, names)| (0..names.len()).map(move |index| RelSym { arity, index }))
            .collect()
    }

    /// Line-oriented rendering: one `function NAME ARITY` or
    /// `relation NAME ARITY` per line, arity ascending.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (&arity, names) in &self.functions {
            for name in names {
                out.push_str(&format!("function {name} {arity}\n"));
            }
        }
        for (&arity, names) in &self.relations {
            for name in names {
                out.push_str(&format!("relation {name} {arity}\n"));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Language> {
        let mut functions = Vec::new();
        let mut relations = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("--") {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [kind, name, arity] = fields[..] else {
                return Err(SyntaxError::Malformed(format!("language line `{line}`")));
            };
            let arity: usize = arity
                .parse()
                .map_err(|_| SyntaxError::Malformed(format!("arity in `{line}`")))?;
            match kind {
                "function" => functions.push((name.to_string(), arity)),
                "relation" => relations.push((name.to_string(), arity)),
                _ => return Err(SyntaxError::Malformed(format!("language line `{line}`"))),
            }
        }
        Language::new(
            functions.iter().map(|(n, a)| (n.as_str(), *a)).collect(),
            relations.iter().map(|(n, a)| (n.as_str(), *a)).collect(),
        )
    }
}

/// A term that may still expect arguments; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Preterm {
    Var(usize),
    Func(FuncSym),
    App(Box<Preterm>, Box<Term>),
}

/// A fully applied term (arity 0).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(Preterm);

impl Preterm {
    pub fn var(index: usize) -> Preterm {
        Preterm::Var(index)
    }

    pub fn func(sym: FuncSym) -> Preterm {
        Preterm::Func(sym)
    }

    /// Applies one argument; fails if this preterm is already saturated.
    pub fn app(self, arg: Term) -> Result<Preterm> {
        if self.arity() == 0 {
            return Err(SyntaxError::HeadNotApplicable);
        }
        Ok(Preterm::App(Box::new(self), Box::new(arg)))
    }

    /// Remaining argument count: variables are saturated, a function symbol
    /// expects its arity, and each application consumes one argument.
    pub fn arity(&self) -> usize {
        match self {
            Preterm::Var(_) => 0,
            Preterm::Func(f) => f.arity(),
            Preterm::App(head, _) => head.arity() - 1,
        }
    }

    pub fn into_term(self) -> Result<Term> {
        match self.arity() {
            0 => Ok(Term(self)),
            n => Err(SyntaxError::NotSaturated(n)),
        }
    }

    /// `lift(n, m)`: adds `n` to every variable whose index is at least `m`.
    pub fn lift(&self, n: usize, m: usize) -> Preterm {
        match self {
            Preterm::Var(i) if *i >= m => Preterm::Var(i + n),
            Preterm::Var(i) => Preterm::Var(*i),
            Preterm::Func(f) => Preterm::Func(*f),
            Preterm::App(head, arg) => {
                Preterm::App(Box::new(head.lift(n, m)), Box::new(arg.lift(n, m)))
            }
        }
    }

    /// Substitution `t[s // n]`: under `k` quantifiers, `var (n+k)` becomes
    /// `lift(s, n+k, 0)` and any `var m` with `m > n+k` becomes `var (m-1)`.
    /// Within a term no quantifiers occur, so the cutoff is `n` itself.
    pub fn subst(&self, s: &Term, n: usize) -> Preterm {
        match self {
            Preterm::Var(m) if *m == n => s.lift(n, 0).0,
            Preterm::Var(m) if *m > n => Preterm::Var(m - 1),
            Preterm::Var(m) => Preterm::Var(*m),
            Preterm::Func(f) => Preterm::Func(*f),
            Preterm::App(head, arg) => {
                Preterm::App(Box::new(head.subst(s, n)), Box::new(arg.subst(s, n)))
            }
        }
    }

    /// True when every variable under `k` quantifiers has index below `k + l`;
    /// terms introduce no quantifiers, so: every index is below `l`.
    pub fn bounded_by(&self, l: usize) -> bool {
        match self {
            Preterm::Var(m) => *m < l,
            Preterm::Func(_) => true,
            Preterm::App(head, arg) => head.bounded_by(l) && arg.bounded_by(l),
        }
    }

    /// Renumbers free variables: an occurrence of free variable `i` becomes
    /// free variable `map(i)`. Bound variables are untouched.
    pub fn remap_free(&self, map: &dyn Fn(usize) -> usize) -> Preterm {
        match self {
            Preterm::Var(m) => Preterm::Var(map(*m)),
            Preterm::Func(f) => Preterm::Func(*f),
            Preterm::App(head, arg) => Preterm::App(
                Box::new(head.remap_free(map)),
                Box::new(Term(arg.0.remap_free(map))),
            ),
        }
    }

    /// Number of constructors in the tree.
    pub fn size(&self) -> usize {
        match self {
            Preterm::Var(_) | Preterm::Func(_) => 1,
            Preterm::App(head, arg) => 1 + head.size() + arg.size(),
        }
    }
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term(Preterm::Var(index))
    }

    /// Fully applies a function symbol to exactly `arity` arguments.
    pub fn apply(sym: FuncSym, args: Vec<Term>) -> Result<Term> {
        if args.len() != sym.arity() {
            return Err(SyntaxError::ArityMismatch {
                expected: sym.arity(),
                found: args.len(),
            });
        }
        let mut head = Preterm::Func(sym);
        for arg in args {
            head = head.app(arg)?;
        }
        head.into_term()
    }

    /// A constant (0-ary function symbol).
    pub fn constant(sym: FuncSym) -> Result<Term> {
        Term::apply(sym, Vec::new())
    }

    pub fn as_preterm(&self) -> &Preterm {
        &self.0
    }

    pub fn lift(&self, n: usize, m: usize) -> Term {
        Term(self.0.lift(n, m))
    }

    pub fn subst(&self, s: &Term, n: usize) -> Term {
        Term(self.0.subst(s, n))
    }

    pub fn bounded_by(&self, l: usize) -> bool {
        self.0.bounded_by(l)
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }
}

/// A formula that may still expect term arguments; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Preformula {
    Falsum,
    Equal(Term, Term),
    Rel(RelSym),
    AppRel(Box<Preformula>, Term),
    Imp(Box<Formula>, Box<Formula>),
    All(Box<Formula>),
}

/// A fully applied formula (arity 0).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula(Preformula);

impl Preformula {
    pub fn arity(&self) -> usize {
        match self {
            Preformula::Falsum | Preformula::Equal(_, _) => 0,
            Preformula::Rel(r) => r.arity(),
            Preformula::AppRel(head, _) => head.arity() - 1,
            Preformula::Imp(_, _) | Preformula::All(_) => 0,
        }
    }

    pub fn apprel(self, arg: Term) -> Result<Preformula> {
        if self.arity() == 0 {
            return Err(SyntaxError::HeadNotApplicable);
        }
        Ok(Preformula::AppRel(Box::new(self), arg))
    }

    pub fn into_formula(self) -> Result<Formula> {
        match self.arity() {
            0 => Ok(Formula(self)),
            n => Err(SyntaxError::NotSaturated(n)),
        }
    }

    pub fn lift(&self, n: usize, m: usize) -> Preformula {
        match self {
            Preformula::Falsum => Preformula::Falsum,
            Preformula::Equal(t1, t2) => Preformula::Equal(t1.lift(n, m), t2.lift(n, m)),
            Preformula::Rel(r) => Preformula::Rel(*r),
            Preformula::AppRel(head, arg) => {
                Preformula::AppRel(Box::new(head.lift(n, m)), arg.lift(n, m))
            }
            Preformula::Imp(a, b) => Preformula::Imp(
                Box::new(Formula(a.0.lift(n, m))),
                Box::new(Formula(b.0.lift(n, m))),
            ),
            Preformula::All(body) => Preformula::All(Box::new(Formula(body.0.lift(n, m + 1)))),
        }
    }

    pub fn subst(&self, s: &Term, n: usize) -> Preformula {
        match self {
            Preformula::Falsum => Preformula::Falsum,
            Preformula::Equal(t1, t2) => Preformula::Equal(t1.subst(s, n), t2.subst(s, n)),
            Preformula::Rel(r) => Preformula::Rel(*r),
            Preformula::AppRel(head, arg) => {
                Preformula::AppRel(Box::new(head.subst(s, n)), arg.subst(s, n))
            }
            Preformula::Imp(a, b) => Preformula::Imp(
                Box::new(Formula(a.0.subst(s, n))),
                Box::new(Formula(b.0.subst(s, n))),
            ),
            Preformula::All(body) => Preformula::All(Box::new(Formula(body.0.subst(s, n + 1)))),
        }
    }

    pub fn bounded_by(&self, l: usize) -> bool {
        match self {
            Preformula::Falsum => true,
            Preformula::Equal(t1, t2) => t1.bounded_by(l) && t2.bounded_by(l),
            Preformula::Rel(_) => true,
            Preformula::AppRel(head, arg) => head.bounded_by(l) && arg.bounded_by(l),
            Preformula::Imp(a, b) => a.0.bounded_by(l) && b.0.bounded_by(l),
            Preformula::All(body) => body.0.bounded_by(l + 1),
        }
    }

    pub fn remap_free(&self, map: &dyn Fn(usize) -> usize) -> Preformula {
        self.remap_free_at(map, 0)
    }

    fn remap_free_at(&self, map: &dyn Fn(usize) -> usize, depth: usize) -> Preformula {
        let term_map = |t: &Term| {
            Term(t.0.remap_free(&|m| {
                if m >= depth {
                    map(m - depth) + depth
                } else {
                    m
                }
            }))
        };
        match self {
            Preformula::Falsum => Preformula::Falsum,
            Preformula::Equal(t1, t2) => Preformula::Equal(term_map(t1), term_map(t2)),
            Preformula::Rel(r) => Preformula::Rel(*r),
            Preformula::AppRel(head, arg) => {
                Preformula::AppRel(Box::new(head.remap_free_at(map, depth)), term_map(arg))
            }
            Preformula::Imp(a, b) => Preformula::Imp(
                Box::new(Formula(a.0.remap_free_at(map, depth))),
                Box::new(Formula(b.0.remap_free_at(map, depth))),
            ),
            Preformula::All(body) => {
                Preformula::All(Box::new(Formula(body.0.remap_free_at(map, depth + 1))))
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Preformula::Falsum | Preformula::Rel(_) => 1,
            Preformula::Equal(t1, t2) => 1 + t1.size() + t2.size(),
            Preformula::AppRel(head, arg) => 1 + head.size() + arg.size(),
            Preformula::Imp(a, b) => 1 + a.0.size() + b.0.size(),
            Preformula::All(body) => 1 + body.0.size(),
        }
    }

    /// Smallest `l` such that `bounded_by(l)` holds.
    pub fn free_bound(&self) -> usize {
        fn term_bound(t: &Preterm, depth: usize) -> usize {
            match t {
                Preterm::Var(m) => (*m + 1).saturating_sub(depth),
                Preterm::Func(_) => 0,
                Preterm::App(head, arg) => term_bound(head, depth).max(term_bound(&arg.0, depth)),
            }
        }
        fn walk(f: &Preformula, depth: usize) -> usize {
            match f {
                Preformula::Falsum | Preformula::Rel(_) => 0,
                Preformula::Equal(t1, t2) => term_bound(&t1.0, depth).max(term_bound(&t2.0, depth)),
                Preformula::AppRel(head, arg) => walk(head, depth).max(term_bound(&arg.0, depth)),
                Preformula::Imp(a, b) => walk(&a.0, depth).max(walk(&b.0, depth)),
                Preformula::All(body) => walk(&body.0, depth + 1),
            }
        }
        walk(self, 0)
    }
}

impl Formula {
    pub fn falsum() -> Formula {
        Formula(Preformula::Falsum)
    }

    pub fn equal(t1: Term, t2: Term) -> Formula {
        Formula(Preformula::Equal(t1, t2))
    }

    /// Fully applies a relation symbol to exactly `arity` arguments.
    pub fn rel_app(sym: RelSym, args: Vec<Term>) -> Result<Formula> {
        if args.len() != sym.arity() {
            return Err(SyntaxError::ArityMismatch {
                expected: sym.arity(),
                found: args.len(),
            });
        }
        let mut head = Preformula::Rel(sym);
        for arg in args {
            head = head.apprel(arg)?;
        }
        head.into_formula()
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula(Preformula::Imp(Box::new(a), Box::new(b)))
    }

    pub fn all(body: Formula) -> Formula {
        Formula(Preformula::All(Box::new(body)))
    }

    /// `not f := f -> falsum`
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::imp(self, Formula::falsum())
    }

    /// `f or g := (not f) -> g`
    pub fn or(self, g: Formula) -> Formula {
        Formula::imp(self.not(), g)
    }

    /// `f and g := not (not f or not g)`
    pub fn and(self, g: Formula) -> Formula {
        self.not().or(g.not()).not()
    }

    /// `f iff g := (f -> g) and (g -> f)`
    pub fn iff(self, g: Formula) -> Formula {
        Formula::imp(self.clone(), g.clone()).and(Formula::imp(g, self))
    }

    /// `ex f := not (all (not f))`
    pub fn ex(self) -> Formula {
        Formula::all(self.not()).not()
    }

    pub fn as_preformula(&self) -> &Preformula {
        &self.0
    }

    pub fn lift(&self, n: usize, m: usize) -> Formula {
        Formula(self.0.lift(n, m))
    }

    pub fn subst(&self, s: &Term, n: usize) -> Formula {
        Formula(self.0.subst(s, n))
    }

    pub fn bounded_by(&self, l: usize) -> bool {
        self.0.bounded_by(l)
    }

    pub fn is_closed(&self) -> bool {
        self.0.bounded_by(0)
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn free_bound(&self) -> usize {
        self.0.free_bound()
    }

    /// Renumbers the free variables of this formula; see
    /// [`Preformula::remap_free`]. Arity 0 is preserved.
    pub fn remap_free(&self, map: &dyn Fn(usize) -> usize) -> Formula {
        Formula(self.0.remap_free(map))
    }
}

// ---------------------------------------------------------------------------
// S-expression serialization.
//
// term    ::= (var N) | (func NAME) | (app term term)
// formula ::= falsum | (eq term term) | (rel NAME) | (apprel formula term)
//           | (imp formula formula) | (all formula)

pub fn preterm_to_sexp(t: &Preterm, lang: &Language) -> Sexp {
    match t {
        Preterm::Var(i) => Sexp::list(vec![Sexp::atom("var"), Sexp::atom(i.to_string())]),
        Preterm::Func(f) => {
            Sexp::list(vec![Sexp::atom("func"), Sexp::atom(lang.function_name(*f))])
        }
        Preterm::App(head, arg) => Sexp::list(vec![
            Sexp::atom("app"),
            preterm_to_sexp(head, lang),
            preterm_to_sexp(arg.as_preterm(), lang),
        ]),
    }
}

pub fn term_to_sexp(t: &Term, lang: &Language) -> Sexp {
    preterm_to_sexp(t.as_preterm(), lang)
}

pub fn preterm_from_sexp(s: &Sexp, lang: &Language) -> Result<Preterm> {
    if let Some(rest) = s.as_tagged("var") {
        let [idx] = rest else {
            return Err(SyntaxError::Malformed(format!("var node `{s}`")));
        };
        let idx: usize = idx
            .as_atom()
            .and_then(|a| a.parse().ok())
            .ok_or_else(|| SyntaxError::Malformed(format!("var index in `{s}`")))?;
        return Ok(Preterm::Var(idx));
    }
    if let Some(rest) = s.as_tagged("func") {
        let [name] = rest else {
            return Err(SyntaxError::Malformed(format!("func node `{s}`")));
        };
        let name = name
            .as_atom()
            .ok_or_else(|| SyntaxError::Malformed(format!("func name in `{s}`")))?;
        let sym = lang
            .function(name)
            .ok_or_else(|| SyntaxError::UnknownSymbol(name.to_string()))?;
        return Ok(Preterm::Func(sym));
    }
    if let Some(rest) = s.as_tagged("app") {
        let [head, arg] = rest else {
            return Err(SyntaxError::Malformed(format!("app node `{s}`")));
        };
        let head = preterm_from_sexp(head, lang)?;
        let arg = preterm_from_sexp(arg, lang)?.into_term()?;
        return head.app(arg);
    }
    Err(SyntaxError::Malformed(format!("term `{s}`")))
}

pub fn term_from_sexp(s: &Sexp, lang: &Language) -> Result<Term> {
    preterm_from_sexp(s, lang)?.into_term()
}

pub fn preformula_to_sexp(f: &Preformula, lang: &Language) -> Sexp {
    match f {
        Preformula::Falsum => Sexp::atom("falsum"),
        Preformula::Equal(t1, t2) => Sexp::list(vec![
            Sexp::atom("eq"),
            term_to_sexp(t1, lang),
            term_to_sexp(t2, lang),
        ]),
        Preformula::Rel(r) => {
            Sexp::list(vec![Sexp::atom("rel"), Sexp::atom(lang.relation_name(*r))])
        }
        Preformula::AppRel(head, arg) => Sexp::list(vec![
            Sexp::atom("apprel"),
            preformula_to_sexp(head, lang),
            term_to_sexp(arg, lang),
        ]),
        Preformula::Imp(a, b) => Sexp::list(vec![
            Sexp::atom("imp"),
            formula_to_sexp(a, lang),
            formula_to_sexp(b, lang),
        ]),
        Preformula::All(body) => Sexp::list(vec![Sexp::atom("all"), formula_to_sexp(body, lang)]),
    }
}

pub fn formula_to_sexp(f: &Formula, lang: &Language) -> Sexp {
    preformula_to_sexp(f.as_preformula(), lang)
}

pub fn preformula_from_sexp(s: &Sexp, lang: &Language) -> Result<Preformula> {
    if s.as_atom() == Some("falsum") {
        return Ok(Preformula::Falsum);
    }
    if let Some(rest) = s.as_tagged("eq") {
        let [t1, t2] = rest else {
            return Err(SyntaxError::Malformed(format!("eq node `{s}`")));
        };
        return Ok(Preformula::Equal(
            term_from_sexp(t1, lang)?,
            term_from_sexp(t2, lang)?,
        ));
    }
    if let Some(rest) = s.as_tagged("rel") {
        let [name] = rest else {
            return Err(SyntaxError::Malformed(format!("rel node `{s}`")));
        };
        let name = name
            .as_atom()
            .ok_or_else(|| SyntaxError::Malformed(format!("rel name in `{s}`")))?;
        let sym = lang
            .relation(name)
            .ok_or_else(|| SyntaxError::UnknownSymbol(name.to_string()))?;
        return Ok(Preformula::Rel(sym));
    }
    if let Some(rest) = s.as_tagged("apprel") {
        let [head, arg] = rest else {
            return Err(SyntaxError::Malformed(format!("apprel node `{s}`")));
        };
        let head = preformula_from_sexp(head, lang)?;
        let arg = term_from_sexp(arg, lang)?;
        return head.apprel(arg);
    }
    if let Some(rest) = s.as_tagged("imp") {
        let [a, b] = rest else {
            return Err(SyntaxError::Malformed(format!("imp node `{s}`")));
        };
        return Ok(Preformula::Imp(
            Box::new(formula_from_sexp(a, lang)?),
            Box::new(formula_from_sexp(b, lang)?),
        ));
    }
    if let Some(rest) = s.as_tagged("all") {
        let [body] = rest else {
            return Err(SyntaxError::Malformed(format!("all node `{s}`")));
        };
        return Ok(Preformula::All(Box::new(formula_from_sexp(body, lang)?)));
    }
    Err(SyntaxError::Malformed(format!("formula `{s}`")))
}

pub fn formula_from_sexp(s: &Sexp, lang: &Language) -> Result<Formula> {
    preformula_from_sexp(s, lang)?.into_formula()
}

/// Canonical single-line rendering (no trailing newline).
pub fn formula_to_string(f: &Formula, lang: &Language) -> String {
    formula_to_sexp(f, lang).to_string()
}

pub fn formula_from_str(text: &str, lang: &Language) -> Result<Formula> {
    formula_from_sexp(&Sexp::parse(text)?, lang)
}

pub fn term_to_string(t: &Term, lang: &Language) -> String {
    term_to_sexp(t, lang).to_string()
}

pub fn term_from_str(text: &str, lang: &Language) -> Result<Term> {
    term_from_sexp(&Sexp::parse(text)?, lang)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang() -> Language {
        Language::new(vec![("k", 0), ("s", 1)], vec![("R", 1), ("Q", 2)]).unwrap()
    }

    #[test]
    fn language_rejects_duplicates() {
        assert!(Language::new(vec![("f", 1), ("f", 2)], vec![]).is_err());
        assert!(Language::new(vec![("f", 1)], vec![("f", 0)]).is_err());
    }

    #[test]
    fn language_text_roundtrip() {
        let l = lang();
        let text = l.to_text();
        assert_eq!(Language::from_text(&text).unwrap(), l);
    }

    #[test]
    fn app_checks_arity() {
        let l = lang();
        let s = l.function("s").unwrap();
        let k = l.function("k").unwrap();
        assert!(Preterm::func(k).app(Term::var(0)).is_err());
        let st = Term::apply(s, vec![Term::var(0)]).unwrap();
        assert_eq!(st.size(), 3);
        assert!(Term::apply(s, vec![]).is_err());
        let q = l.relation("Q").unwrap();
        assert!(Formula::rel_app(q, vec![Term::var(0)]).is_err());
        assert_eq!(Preformula::Rel(q).apprel(Term::var(0)).unwrap().arity(), 1);
    }

    #[test]
    fn lift_worked_examples() {
        // lift(all(var0 = var1), 2, 0) = all(var0 = var3): the bound
        // variable is untouched, the free one moves up by 2.
        let f = Formula::all(Formula::equal(Term::var(0), Term::var(1)));
        let lifted = f.lift(2, 0);
        let expected = Formula::all(Formula::equal(Term::var(0), Term::var(3)));
        assert_eq!(lifted, expected);
        // Cutoff: variables below m stay put.
        let t = Term::var(0);
        assert_eq!(t.lift(5, 1), Term::var(0));
        assert_eq!(Term::var(1).lift(5, 1), Term::var(6));
    }

    #[test]
    fn subst_worked_examples() {
        let l = lang();
        let k = Term::constant(l.function("k").unwrap()).unwrap();
        // subst(var 3, s, 1) = var 2: indices above the target shift down.
        assert_eq!(Term::var(3).subst(&k, 1), Term::var(2));
        // subst(var 0, s, 0) = s.
        assert_eq!(Term::var(0).subst(&k, 0), k);
        // Below the target: untouched.
        assert_eq!(Term::var(0).subst(&k, 2), Term::var(0));
        // Under a binder the replacement is lifted.
        let f = Formula::all(Formula::equal(Term::var(0), Term::var(1)));
        let s = Term::var(0);
        let expected = Formula::all(Formula::equal(Term::var(0), s.lift(1, 0)));
        assert_eq!(f.subst(&s, 0), expected);
    }

    #[test]
    fn bounded_by_tracks_depth() {
        let f = Formula::all(Formula::equal(Term::var(0), Term::var(1)));
        assert!(!f.bounded_by(0));
        assert!(f.bounded_by(1));
        assert!(!f.is_closed());
        assert_eq!(f.free_bound(), 1);
        let closed = Formula::all(f);
        assert!(closed.is_closed());
        assert_eq!(closed.free_bound(), 0);
    }

    #[test]
    fn derived_connectives_unfold_exactly() {
        let f = Formula::falsum();
        let not_f = f.clone().not();
        assert_eq!(not_f, Formula::imp(Formula::falsum(), Formula::falsum()));
        // or(f, g) = (f -> falsum) -> g
        let or = Formula::falsum().or(Formula::falsum());
        assert_eq!(
            or,
            Formula::imp(
                Formula::imp(Formula::falsum(), Formula::falsum()),
                Formula::falsum()
            )
        );
        // Hand-unfolded and(falsum, falsum), pinned.
        let l = lang();
        let and = Formula::falsum().and(Formula::falsum());
        assert_eq!(
            formula_to_string(&and, &l),
            "(imp (imp (imp (imp falsum falsum) falsum) (imp falsum falsum)) falsum)"
        );
        // ex f = not (all (not f))
        let ex = Formula::falsum().ex();
        assert_eq!(ex, Formula::all(Formula::falsum().not()).not());
    }

    #[test]
    fn sexp_roundtrip() {
        let l = lang();
        let r = l.relation("R").unwrap();
        let f = Formula::all(Formula::rel_app(r, vec![Term::var(0)]).unwrap().not());
        let text = formula_to_string(&f, &l);
        assert_eq!(text, "(all (imp (apprel (rel R) (var 0)) falsum))");
        let back = formula_from_str(&text, &l).unwrap();
        assert_eq!(back, f);
        // Whitespace-insensitive reading.
        let spaced = "(all\n  (imp (apprel (rel R) (var 0))\n       falsum))";
        assert_eq!(formula_from_str(spaced, &l).unwrap(), f);
    }

    #[test]
    fn sexp_rejects_malformed() {
        let l = lang();
        assert!(formula_from_str("(eq (var 0))", &l).is_err());
        assert!(formula_from_str("(rel Nope)", &l).is_err());
        assert!(formula_from_str("(rel R)", &l).is_err()); // arity 1, not saturated
        assert!(term_from_str("(app (func k) (var 0))", &l).is_err());
    }

    #[test]
    fn remap_free_respects_binders() {
        // all(Q(var0, var1)) with free 0 mapped to 4 becomes all(Q(var0, var5)).
        let l = lang();
        let q = l.relation("Q").unwrap();
        let f = Formula::all(Formula::rel_app(q, vec![Term::var(0), Term::var(1)]).unwrap());
        let mapped = f.remap_free(&|i| i + 4);
        let expected = Formula::all(Formula::rel_app(q, vec![Term::var(0), Term::var(5)]).unwrap());
        assert_eq!(mapped, expected);
    }
}
