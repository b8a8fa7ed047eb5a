//! Boolean-valued structures and formula realization.
//!
//! A [`BStructure`] interprets a [`Language`] over a finite carrier
//! `0..carrier`, assigning truth values in a [`FinCBA`] instead of plain
//! booleans: relations and the equality symbol map argument tuples to
//! algebra elements, functions stay ordinary (carrier-valued). When the
//! algebra is the two-element one, realization coincides with classical
//! Tarski semantics.
//!
//! Equality is structural only up to the algebra: the interpretation must
//! be reflexive (`top` on the diagonal), symmetric, transitive in the
//! `meet`/`le` sense, and a congruence for every function and relation.
//! [`BStructure::validate`] checks all of that and reports the first
//! failing instance.
//!
//! Realization maps a closed [`Formula`] to an algebra element: `falsum`
//! to `bot`, implication through `neg`/`join`, universal quantification to
//! an `inf` over the carrier. A condition `gamma` *forces* a sentence when
//! `gamma <= value`, which is what [`BStructure::forces`] decides.

use std::sync::Arc;

use thiserror::Error;

use crate::boolalg::{AlgebraError, Elt, FinCBA, FinTopSpace};
use crate::proof::{self, Context, ProofTree};
use crate::syntax::{Formula, FuncSym, Language, Preformula, Preterm, RelSym, Term};

/// Largest carrier accepted at construction.
pub const MAX_CARRIER: usize = 1024;
/// Largest carrier for which [`BStructure::validate`] will run.
pub const MAX_VALIDATE_CARRIER: usize = 32;
/// Largest algebra for which [`BStructure::validate`] will run.
pub const MAX_VALIDATE_ALGEBRA: usize = 256;
/// Cap on `carrier^(2 * arity)` tuple pairs per congruence check.
pub const MAX_CONGRUENCE_PAIRS: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error("size guard: {what} limited to {limit}, got {got}")]
    Guard {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("interpretation table for {what}: expected {expected} entries, got {got}")]
    TableLength {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("interpretation table for {what}: entry {entry} out of range (< {bound})")]
    TableEntry {
        what: String,
        entry: usize,
        bound: usize,
    },
    #[error("equality law `{law}` fails at {witness}")]
    Congruence { law: &'static str, witness: String },
    #[error("variable {index} unbound at quantifier depth {depth}")]
    UnboundVariable { index: usize, depth: usize },
    #[error("sentence expected, found {free} free variable(s)")]
    NotASentence { free: usize },
    #[error("proof rejected: {0}")]
    ProofRejected(String),
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Syntax(#[from] crate::syntax::SyntaxError),
}

type Result<T> = std::result::Result<T, SemanticsError>;

/// A Boolean-valued interpretation of a language; see the module docs.
#[derive(Debug, Clone)]
pub struct BStructure {
    language: Language,
    algebra: Arc<FinCBA>,
    carrier: usize,
    fn_interp: std::collections::BTreeMap<FuncSym, Vec<usize>>,
    rel_interp: std::collections::BTreeMap<RelSym, Vec<Elt>>,
    eq_interp: Vec<Elt>,
}

/// Row-major index of an argument tuple; the first argument varies slowest.
fn tuple_index(args: &[usize], carrier: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * carrier + a)
}

fn table_len(carrier: usize, arity: usize) -> Result<usize> {
    carrier
        .checked_pow(arity as u32)
        .filter(|&l| l <= 1 << 22)
        .ok_or(SemanticsError::Guard {
            what: "interpretation table length",
            limit: 1 << 22,
            got: usize::MAX,
        })
}

impl BStructure {
    /// A structure with default interpretations: every function is
    /// constantly 0, every relation is constantly `bot`, and equality is
    /// discrete (`top` on the diagonal, `bot` elsewhere).
    pub fn new(language: Language, algebra: Arc<FinCBA>, carrier: usize) -> Result<BStructure> {
        if carrier == 0 || carrier > MAX_CARRIER {
            return Err(SemanticsError::Guard {
                what: "carrier",
                limit: MAX_CARRIER,
                got: carrier,
            });
        }
        let mut fn_interp = std::collections::BTreeMap::new();
        for sym in language.function_symbols() {
            fn_interp.insert(sym, vec![0usize; table_len(carrier, sym.arity())?]);
        }
        let mut rel_interp = std::collections::BTreeMap::new();
        for sym in language.relation_symbols() {
            rel_interp.insert(sym, vec![algebra.bot(); table_len(carrier, sym.arity())?]);
        }
        let mut eq_interp = vec![algebra.bot(); carrier * carrier];
        for a in 0..carrier {
            eq_interp[a * carrier + a] = algebra.top();
        }
        Ok(BStructure {
            language,
            algebra,
            carrier,
            fn_interp,
            rel_interp,
            eq_interp,
        })
    }

    pub fn language(&self) -> &Language {
        &self.language
    }

    pub fn algebra(&self) -> &FinCBA {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> Arc<FinCBA> {
        Arc::clone(&self.algebra)
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    /// Replaces a function table; entries are carrier elements, indexed
    /// row-major with the first argument varying slowest.
    pub fn set_function(&mut self, name: &str, table: Vec<usize>) -> Result<()> {
        let sym = self
            .language
            .function(name)
            .ok_or_else(|| SemanticsError::UnknownSymbol(name.to_string()))?;
        let expected = table_len(self.carrier, sym.arity())?;
        if table.len() != expected {
            return Err(SemanticsError::TableLength {
                what: format!("function `{name}`"),
                expected,
                got: table.len(),
            });
        }
        if let Some(&entry) = table.iter().find(|&&v| v >= self.carrier) {
            return Err(SemanticsError::TableEntry {
                what: format!("function `{name}`"),
                entry,
                bound: self.carrier,
            });
        }
        self.fn_interp.insert(sym, table);
        Ok(())
    }

    /// Replaces a relation table; entries are algebra element indices.
    pub fn set_relation(&mut self, name: &str, table: Vec<usize>) -> Result<()> {
        let sym = self
            .language
            .relation(name)
            .ok_or_else(|| SemanticsError::UnknownSymbol(name.to_string()))?;
        let expected = table_len(self.carrier, sym.arity())?;
        let elts = self.to_elts(&format!("relation `{name}`"), table, expected)?;
        self.rel_interp.insert(sym, elts);
        Ok(())
    }

    /// Replaces the equality table (`carrier * carrier` algebra indices).
    pub fn set_equality(&mut self, table: Vec<usize>) -> Result<()> {
        let expected = self.carrier * self.carrier;
        self.eq_interp = self.to_elts("equality", table, expected)?;
        Ok(())
    }

    fn to_elts(&self, what: &str, table: Vec<usize>, expected: usize) -> Result<Vec<Elt>> {
        if table.len() != expected {
            return Err(SemanticsError::TableLength {
                what: what.to_string(),
                expected,
                got: table.len(),
            });
        }
        table
            .into_iter()
            .map(|v| {
                self.algebra.element(v).ok_or(SemanticsError::TableEntry {
                    what: what.to_string(),
                    entry: v,
                    bound: self.algebra.carrier_size(),
                })
            })
            .collect()
    }

    pub fn fn_value(&self, sym: FuncSym, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), sym.arity());
        self.fn_interp[&sym][tuple_index(args, self.carrier)]
    }

    pub fn rel_value(&self, sym: RelSym, args: &[usize]) -> Elt {
        debug_assert_eq!(args.len(), sym.arity());
        self.rel_interp[&sym][tuple_index(args, self.carrier)]
    }

    pub fn eq_value(&self, a: usize, b: usize) -> Elt {
        self.eq_interp[a * self.carrier + b]
    }

    // -- equality-law validation ---------------------------------------------

    /// Checks the equality laws: reflexivity, symmetry, transitivity, and
    /// congruence for every function and relation symbol. Returns the
    /// first failing instance.
    pub fn validate(&self) -> Result<()> {
        if self.carrier > MAX_VALIDATE_CARRIER {
            return Err(SemanticsError::Guard {
                what: "validation carrier",
                limit: MAX_VALIDATE_CARRIER,
                got: self.carrier,
            });
        }
        if self.algebra.carrier_size() > MAX_VALIDATE_ALGEBRA {
            return Err(SemanticsError::Guard {
                what: "validation algebra",
                limit: MAX_VALIDATE_ALGEBRA,
                got: self.algebra.carrier_size(),
            });
        }
        let alg = &*self.algebra;
        for a in 0..self.carrier {
            if self.eq_value(a, a) != alg.top() {
                return Err(SemanticsError::Congruence {
                    law: "reflexivity",
                    witness: format!("a={a}"),
                });
            }
            for b in 0..self.carrier {
                if self.eq_value(a, b) != self.eq_value(b, a) {
                    return Err(SemanticsError::Congruence {
                        law: "symmetry",
                        witness: format!("a={a}, b={b}"),
                    });
                }
                for c in 0..self.carrier {
                    let lhs = alg.meet(self.eq_value(a, b), self.eq_value(b, c));
                    if !alg.le(lhs, self.eq_value(a, c)) {
                        return Err(SemanticsError::Congruence {
                            law: "transitivity",
                            witness: format!("a={a}, b={b}, c={c}"),
                        });
                    }
                }
            }
        }
        for (&sym, table) in &self.fn_interp {
            self.guard_congruence(sym.arity())?;
            self.check_congruence(sym.arity(), |xs, ys, agree| {
                let fx = table[tuple_index(xs, self.carrier)];
                let fy = table[tuple_index(ys, self.carrier)];
                alg.le(agree, self.eq_value(fx, fy))
            })
            .map_err(|w| self.congruence_failure("function congruence", w))?;
        }
        for (&sym, table) in &self.rel_interp {
            self.guard_congruence(sym.arity())?;
            self.check_congruence(sym.arity(), |xs, ys, agree| {
                let rx = table[tuple_index(xs, self.carrier)];
                let ry = table[tuple_index(ys, self.carrier)];
                alg.le(alg.meet(agree, rx), ry)
            })
            .map_err(|w| self.congruence_failure("relation congruence", w))?;
        }
        Ok(())
    }

    fn guard_congruence(&self, arity: usize) -> Result<()> {
        match self.carrier.checked_pow(2 * arity as u32) {
            Some(pairs) if pairs <= MAX_CONGRUENCE_PAIRS => Ok(()),
            other => Err(SemanticsError::Guard {
                what: "congruence tuple pairs",
                limit: MAX_CONGRUENCE_PAIRS,
                got: other.unwrap_or(usize::MAX),
            }),
        }
    }

    fn congruence_failure(
        &self,
        law: &'static str,
        witness: (Vec<usize>, Vec<usize>),
    ) -> SemanticsError {
        SemanticsError::Congruence {
            law,
            witness: format!("args {:?} ~ {:?}", witness.0, witness.1),
        }
    }

    /// Runs `ok(xs, ys, agree)` over all pairs of argument tuples where
    /// `agree = meet_i eq(xs[i], ys[i])`; returns the first failing pair.
    fn check_congruence(
        &self,
        arity: usize,
        ok: impl Fn(&[usize], &[usize], Elt) -> bool,
    ) -> std::result::Result<(), (Vec<usize>, Vec<usize>)> {
        let alg = &*self.algebra;
        let mut xs = vec![0usize; arity];
        let mut ys = vec![0usize; arity];
        loop {
            let agree = alg.inf((0..arity).map(|i| self.eq_value(xs[i], ys[i])));
            if !ok(&xs, &ys, agree) {
                return Err((xs, ys));
            }
            if !next_tuple(&mut ys, self.carrier) && !next_tuple(&mut xs, self.carrier) {
                return Ok(());
            }
        }
    }

    // -- realization ----------------------------------------------------------

    /// Evaluates a term under an environment: de Bruijn variable `m` reads
    /// `env[m]`, so `env[0]` is the innermost binder.
    pub fn realize_term(&self, t: &Term, env: &[usize]) -> Result<usize> {
        self.realize_preterm(t.as_preterm(), env, &mut Vec::new())
    }

    fn realize_preterm(&self, t: &Preterm, env: &[usize], args: &mut Vec<usize>) -> Result<usize> {
        match t {
            Preterm::Var(m) => env.get(*m).copied().ok_or(SemanticsError::UnboundVariable {
                index: *m,
                depth: env.len(),
            }),
            Preterm::Func(sym) => Ok(self.fn_value(*sym, args)),
            Preterm::App(head, arg) => {
                let v = self.realize_preterm(arg.as_preterm(), env, &mut Vec::new())?;
                args.insert(0, v);
                self.realize_preterm(head, env, args)
            }
        }
    }

    /// Evaluates a formula under an environment, yielding an algebra
    /// element. Universal quantification takes the `inf` over the carrier
    /// with the bound value prepended to the environment.
    pub fn realize_formula(&self, f: &Formula, env: &[usize]) -> Result<Elt> {
        self.realize_preformula(f.as_preformula(), env, &mut Vec::new())
    }

    fn realize_preformula(
        &self,
        f: &Preformula,
        env: &[usize],
        args: &mut Vec<usize>,
    ) -> Result<Elt> {
        let alg = &*self.algebra;
        match f {
            Preformula::Falsum => Ok(alg.bot()),
            Preformula::Equal(t1, t2) => {
                let a = self.realize_term(t1, env)?;
                let b = self.realize_term(t2, env)?;
                Ok(self.eq_value(a, b))
            }
            Preformula::Rel(sym) => Ok(self.rel_value(*sym, args)),
            Preformula::AppRel(head, arg) => {
                let v = self.realize_term(arg, env)?;
                args.insert(0, v);
                self.realize_preformula(head, env, args)
            }
            Preformula::Imp(a, b) => {
                let va = self.realize_formula(a, env)?;
                let vb = self.realize_formula(b, env)?;
                Ok(alg.imp(va, vb))
            }
            Preformula::All(body) => {
                let mut acc = alg.top();
                for i in 0..self.carrier {
                    let mut inner = Vec::with_capacity(env.len() + 1);
                    inner.push(i);
                    inner.extend_from_slice(env);
                    acc = alg.meet(acc, self.realize_formula(body, &inner)?);
                }
                Ok(acc)
            }
        }
    }

    /// Evaluates a closed formula; rejects open ones.
    pub fn realize_sentence(&self, f: &Formula) -> Result<Elt> {
        if !f.is_closed() {
            return Err(SemanticsError::NotASentence {
                free: f.free_bound(),
            });
        }
        self.realize_formula(f, &[])
    }

    /// Does the condition `gamma` force the sentence, i.e. is
    /// `gamma <= value(f)`?
    pub fn forces(&self, gamma: Elt, f: &Formula) -> Result<bool> {
        let v = self.realize_sentence(f)?;
        Ok(self.algebra.le(gamma, v))
    }

    /// Checks a proof against this structure: if the proof is valid for
    /// `ctx |- goal` (else an error) and all formulas are sentences (else
    /// an error), reports whether `inf(ctx) <= value(goal)` — which a
    /// sound calculus always makes true.
    pub fn validate_soundness(
        &self,
        tree: &ProofTree,
        ctx: &Context,
        goal: &Formula,
    ) -> Result<bool> {
        if let Err(failure) = proof::diagnose(tree, ctx, goal) {
            return Err(SemanticsError::ProofRejected(failure.to_string()));
        }
        let mut gamma = self.algebra.top();
        for hyp in ctx {
            gamma = self.algebra.meet(gamma, self.realize_sentence(hyp)?);
        }
        let value = self.realize_sentence(goal)?;
        Ok(self.algebra.le(gamma, value))
    }
}

/// Advances a mixed-radix tuple; false when it wraps to all zeros.
fn next_tuple(tuple: &mut [usize], base: usize) -> bool {
    for d in tuple.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

// ---------------------------------------------------------------------------
// Text formats.

/// Builds an algebra from its text form, dispatching on the first
/// non-comment line:
///
/// - `powerset N` — the powerset algebra of an `N`-point set;
/// - `points N` — a topology (see [`FinTopSpace::from_text`]), giving its
///   regular-open algebra;
/// - `carrier N` — explicit tables in the [`FinCBA::dump`] format.
pub fn algebra_from_text(text: &str) -> Result<FinCBA> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with("--"))
        .unwrap_or("");
    let word = first.split_whitespace().next().unwrap_or("");
    match word {
        "powerset" => {
            let n: usize = first
                .split_whitespace()
                .nth(1)
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| SemanticsError::Malformed {
                    what: "algebra file",
                    detail: format!("bad header `{first}`"),
                })?;
            Ok(FinCBA::powerset(n)?)
        }
        "points" => Ok(FinCBA::regular_open(FinTopSpace::from_text(text)?)?),
        "carrier" => Ok(FinCBA::parse_dump(text)?),
        _ => Err(SemanticsError::Malformed {
            what: "algebra file",
            detail: format!("expected `powerset`, `points`, or `carrier`, found `{first}`"),
        }),
    }
}

/// Parses a structure description. The format is line-oriented:
///
/// ```text
/// language lang.txt      -- path, loaded through `resolve`
/// algebra alg.txt        -- path, loaded through `resolve`
/// carrier 2
/// eq 1 0 0 1             -- carrier^2 algebra indices, row-major
/// fn s 1 0               -- function name, then carrier^arity entries
/// rel R 0 1              -- relation name, then carrier^arity algebra indices
/// ```
///
/// `resolve` maps the `language`/`algebra` path strings to file contents,
/// so callers control how paths are rooted. Equality defaults to discrete
/// when no `eq` line is given. The structure is validated before return.
pub fn structure_from_text(
    text: &str,
    mut resolve: impl FnMut(&str) -> std::io::Result<String>,
) -> Result<BStructure> {
    let malformed = |detail: String| SemanticsError::Malformed {
        what: "structure file",
        detail,
    };
    let mut language = None;
    let mut algebra = None;
    let mut carrier = None;
    let mut eq: Option<Vec<usize>> = None;
    let mut fns: Vec<(String, Vec<usize>)> = Vec::new();
    let mut rels: Vec<(String, Vec<usize>)> = Vec::new();
    let parse_ints = |words: &[&str]| -> std::result::Result<Vec<usize>, String> {
        words
            .iter()
            .map(|w| w.parse::<usize>().map_err(|_| format!("bad number `{w}`")))
            .collect()
    };
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("--") {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "language" => {
                let path = line["language".len()..].trim();
                let contents = resolve(path).map_err(|e| malformed(format!("{path}: {e}")))?;
                language = Some(Language::from_text(&contents)?);
            }
            "algebra" => {
                let path = line["algebra".len()..].trim();
                let contents = resolve(path).map_err(|e| malformed(format!("{path}: {e}")))?;
                algebra = Some(algebra_from_text(&contents)?);
            }
            "carrier" => {
                carrier = Some(
                    words
                        .get(1)
                        .and_then(|w| w.parse::<usize>().ok())
                        .ok_or_else(|| malformed(format!("carrier line `{line}`")))?,
                );
            }
            "eq" => eq = Some(parse_ints(&words[1..]).map_err(malformed)?),
            "fn" => {
                let name = words
                    .get(1)
                    .ok_or_else(|| malformed("fn line missing name".into()))?;
                fns.push((
                    name.to_string(),
                    parse_ints(&words[2..]).map_err(malformed)?,
                ));
            }
            "rel" => {
                let name = words
                    .get(1)
                    .ok_or_else(|| malformed("rel line missing name".into()))?;
                rels.push((
                    name.to_string(),
                    parse_ints(&words[2..]).map_err(malformed)?,
                ));
            }
            other => return Err(malformed(format!("unknown line `{other}`"))),
        }
    }
    let language = language.ok_or_else(|| malformed("missing `language` line".into()))?;
    let algebra = algebra.ok_or_else(|| malformed("missing `algebra` line".into()))?;
    let carrier = carrier.ok_or_else(|| malformed("missing `carrier` line".into()))?;
    let mut structure = BStructure::new(language, Arc::new(algebra), carrier)?;
    if let Some(eq) = eq {
        structure.set_equality(eq)?;
    }
    for (name, table) in fns {
        structure.set_function(&name, table)?;
    }
    for (name, table) in rels {
        structure.set_relation(&name, table)?;
    }
    structure.validate()?;
    Ok(structure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Formula as F;
    use crate::syntax::Term as T;

    fn two_point_language() -> Language {
        Language::new(vec![("k", 0), ("s", 1)], vec![("R", 1)]).unwrap()
    }

    /// Carrier {0,1} over the two-element algebra: s is negation,
    /// R holds exactly at 1, k = 0.
    fn classical_structure() -> BStructure {
        let alg = Arc::new(FinCBA::powerset(1).unwrap());
        let mut s = BStructure::new(two_point_language(), alg, 2).unwrap();
        s.set_function("s", vec![1, 0]).unwrap();
        s.set_relation("R", vec![0, 1]).unwrap();
        s.validate().unwrap();
        s
    }

    fn rel_app(s: &BStructure, name: &str, t: T) -> F {
        F::rel_app(s.language().relation(name).unwrap(), vec![t]).unwrap()
    }

    fn fn_app(s: &BStructure, name: &str, args: Vec<T>) -> T {
        T::apply(s.language().function(name).unwrap(), args).unwrap()
    }

    #[test]
    fn classical_evaluation() {
        let s = classical_structure();
        let alg = s.algebra();
        let k = fn_app(&s, "k", vec![]);
        let sk = fn_app(&s, "s", vec![k.clone()]);
        assert_eq!(s.realize_term(&k, &[]).unwrap(), 0);
        assert_eq!(s.realize_term(&sk, &[]).unwrap(), 1);
        let ssk = fn_app(&s, "s", vec![sk.clone()]);
        assert_eq!(s.realize_term(&ssk, &[]).unwrap(), 0);

        assert_eq!(s.realize_sentence(&rel_app(&s, "R", k)).unwrap(), alg.bot());
        assert_eq!(
            s.realize_sentence(&rel_app(&s, "R", sk)).unwrap(),
            alg.top()
        );
        // all x. R(x) fails; ex x. R(x) holds; excluded middle holds.
        let rx = rel_app(&s, "R", T::var(0));
        assert_eq!(s.realize_sentence(&F::all(rx.clone())).unwrap(), alg.bot());
        assert_eq!(s.realize_sentence(&rx.clone().ex()).unwrap(), alg.top());
        let lem = F::all(rx.clone().or(rx.not()));
        assert_eq!(s.realize_sentence(&lem).unwrap(), alg.top());
    }

    #[test]
    fn boolean_valued_quantifiers() {
        let alg = Arc::new(FinCBA::powerset(2).unwrap());
        let mut s = BStructure::new(two_point_language(), Arc::clone(&alg), 2).unwrap();
        // R(0) = {0}, R(1) = {1}: disjoint nonzero truth values.
        let e0 = alg.element_from_mask(0b01).unwrap();
        let e1 = alg.element_from_mask(0b10).unwrap();
        s.set_relation("R", vec![e0.index(), e1.index()]).unwrap();
        s.validate().unwrap();
        let rx = rel_app(&s, "R", T::var(0));
        assert_eq!(s.realize_sentence(&F::all(rx.clone())).unwrap(), alg.bot());
        assert_eq!(s.realize_sentence(&rx.clone().ex()).unwrap(), alg.top());
        // Forcing: {0} forces R(k), top does not.
        let rk = rel_app(&s, "R", fn_app(&s, "k", vec![]));
        assert!(s.forces(e0, &rk).unwrap());
        assert!(!s.forces(alg.top(), &rk).unwrap());
        assert!(s.forces(alg.bot(), &rk).unwrap());
    }

    #[test]
    fn nondiscrete_equality_validates_and_realizes() {
        let alg = Arc::new(FinCBA::powerset(2).unwrap());
        let mut s = BStructure::new(two_point_language(), Arc::clone(&alg), 2).unwrap();
        let e = alg.element_from_mask(0b01).unwrap(); // eq(0,1)
        let top = alg.top();
        s.set_equality(vec![top.index(), e.index(), e.index(), top.index()])
            .unwrap();
        // R must respect the partial identification: R(0) ⊇ e ⊓ R(1).
        let r0 = alg.element_from_mask(0b01).unwrap();
        let r1 = alg.top();
        s.set_relation("R", vec![r0.index(), r1.index()]).unwrap();
        // s(x) = x keeps function congruence trivial.
        s.set_function("s", vec![0, 1]).unwrap();
        s.validate().unwrap();
        // value(v0 = v1) under env [0, 1] is e.
        let eq01 = F::equal(T::var(0), T::var(1));
        assert_eq!(s.realize_formula(&eq01, &[0, 1]).unwrap(), e);
        // all x. all y. x = y collapses to e.
        let sent = F::all(F::all(eq01));
        assert_eq!(s.realize_sentence(&sent).unwrap(), e);
    }

    #[test]
    fn relation_congruence_violation_is_reported() {
        let alg = Arc::new(FinCBA::powerset(1).unwrap());
        let mut s = BStructure::new(two_point_language(), Arc::clone(&alg), 2).unwrap();
        // Collapse 0 and 1 but keep R distinguishing them.
        let top = alg.top().index();
        s.set_equality(vec![top, top, top, top]).unwrap();
        s.set_relation("R", vec![0, top]).unwrap();
        let err = s.validate().unwrap_err();
        assert!(matches!(
            err,
            SemanticsError::Congruence {
                law: "relation congruence",
                ..
            }
        ));
    }

    #[test]
    fn function_congruence_violation_is_reported() {
        // Carrier {0,1,2} with 0 and 1 identified; s maps the identified
        // pair to distinguishable values.
        let alg = Arc::new(FinCBA::powerset(1).unwrap());
        let mut s = BStructure::new(two_point_language(), Arc::clone(&alg), 3).unwrap();
        s.set_equality(vec![1, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap();
        s.set_function("s", vec![0, 2, 2]).unwrap();
        let err = s.validate().unwrap_err();
        assert!(matches!(
            err,
            SemanticsError::Congruence {
                law: "function congruence",
                ..
            }
        ));
        // Repairing s to respect the identification validates.
        s.set_function("s", vec![2, 2, 0]).unwrap();
        s.validate().unwrap();
    }

    #[test]
    fn equality_law_failures_are_reported() {
        let alg = Arc::new(FinCBA::powerset(1).unwrap());
        let mut s = BStructure::new(two_point_language(), Arc::clone(&alg), 2).unwrap();
        s.set_equality(vec![0, 0, 0, 0]).unwrap();
        assert!(matches!(
            s.validate().unwrap_err(),
            SemanticsError::Congruence {
                law: "reflexivity",
                ..
            }
        ));
        s.set_equality(vec![1, 1, 0, 1]).unwrap();
        assert!(matches!(
            s.validate().unwrap_err(),
            SemanticsError::Congruence {
                law: "symmetry",
                ..
            }
        ));
    }

    #[test]
    fn big_endian_function_tables() {
        let lang = Language::new(vec![("f", 2), ("k", 0), ("s", 1)], vec![]).unwrap();
        let alg = Arc::new(FinCBA::powerset(1).unwrap());
        let mut s = BStructure::new(lang, alg, 2).unwrap();
        // f = first projection: rows are f(0,·), then f(1,·).
        s.set_function("f", vec![0, 0, 1, 1]).unwrap();
        s.set_function("s", vec![1, 0]).unwrap();
        s.validate().unwrap();
        let k = T::apply(s.language().function("k").unwrap(), vec![]).unwrap();
        let sk = T::apply(s.language().function("s").unwrap(), vec![k.clone()]).unwrap();
        let f = s.language().function("f").unwrap();
        let t = T::apply(f, vec![sk.clone(), k.clone()]).unwrap();
        assert_eq!(s.realize_term(&t, &[]).unwrap(), 1);
        let t = T::apply(f, vec![k, sk]).unwrap();
        assert_eq!(s.realize_term(&t, &[]).unwrap(), 0);
    }

    #[test]
    fn open_formulas_are_rejected_as_sentences() {
        let s = classical_structure();
        let rx = rel_app(&s, "R", T::var(0));
        assert!(matches!(
            s.realize_sentence(&rx),
            Err(SemanticsError::NotASentence { free: 1 })
        ));
        assert!(matches!(
            s.realize_term(&T::var(2), &[0, 1]),
            Err(SemanticsError::UnboundVariable { index: 2, depth: 2 })
        ));
    }

    #[test]
    fn environment_prepends_under_quantifiers() {
        let s = classical_structure();
        // all x. x = v0 under env [c]: only carrier 1 would make this top.
        let f = F::all(F::equal(T::var(0), T::var(1)));
        let v = s.realize_formula(&f, &[0]).unwrap();
        assert_eq!(v, s.algebra().bot());
        // all x. x = x is top regardless.
        let refl = F::all(F::equal(T::var(0), T::var(0)));
        assert_eq!(s.realize_formula(&refl, &[0]).unwrap(), s.algebra().top());
    }

    #[test]
    fn soundness_validation() {
        let s = classical_structure();
        let rk = rel_app(&s, "R", fn_app(&s, "k", vec![]));
        let goal = F::imp(rk.clone(), rk.clone());
        let tree = ProofTree::imp_i(rk.clone(), ProofTree::axm(rk.clone()));
        let ctx = Context::new();
        assert!(s.validate_soundness(&tree, &ctx, &goal).unwrap());
        // A rejected proof is an error, not a verdict.
        let bad = ProofTree::axm(rk.clone());
        assert!(matches!(
            s.validate_soundness(&bad, &ctx, &goal),
            Err(SemanticsError::ProofRejected(_))
        ));
    }

    #[test]
    fn hypotheses_bound_the_conclusion_value() {
        // In a Boolean-valued structure, inf(ctx) <= value(goal) for any
        // checked proof; spot-check with a nontrivial context.
        let alg = Arc::new(FinCBA::powerset(2).unwrap());
        let mut s = BStructure::new(two_point_language(), Arc::clone(&alg), 2).unwrap();
        let e0 = alg.element_from_mask(0b01).unwrap();
        s.set_relation("R", vec![e0.index(), e0.index()]).unwrap();
        s.validate().unwrap();
        let rk = rel_app(&s, "R", fn_app(&s, "k", vec![]));
        let ctx: Context = [rk.clone()].into_iter().collect();
        let tree = ProofTree::axm(rk.clone());
        assert!(s.validate_soundness(&tree, &ctx, &rk).unwrap());
    }

    #[test]
    fn structure_text_parsing() {
        let lang_text = "function k 0\nfunction s 1\nrelation R 1\n";
        let alg_text = "powerset 1\n";
        let text = "\
-- two points, R holds at 1
language lang.txt
algebra alg.txt
carrier 2
eq 1 0 0 1
fn s 1 0
fn k 0
rel R 0 1
";
        let s = structure_from_text(text, |path| match path {
            "lang.txt" => Ok(lang_text.to_string()),
            "alg.txt" => Ok(alg_text.to_string()),
            other => Err(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                other.to_string(),
            )),
        })
        .unwrap();
        assert_eq!(s.carrier(), 2);
        let rx = rel_app(&s, "R", T::var(0));
        assert_eq!(s.realize_sentence(&rx.ex()).unwrap(), s.algebra().top());
        // Unknown path surfaces as a malformed-file error.
        let err = structure_from_text(text, |_| {
            Err(std::io::Error::new(std::io::ErrorKind::NotFound, "nope"))
        })
        .unwrap_err();
        assert!(matches!(err, SemanticsError::Malformed { .. }));
    }

    #[test]
    fn algebra_text_dispatch() {
        assert_eq!(algebra_from_text("powerset 3").unwrap().carrier_size(), 8);
        let ro = algebra_from_text("points 3\n{}\n{0}\n{1}\n{0,1}\n{0,1,2}\n").unwrap();
        assert_eq!(ro.carrier_size(), 4);
        let dump = FinCBA::powerset(2).unwrap().dump().unwrap();
        assert_eq!(algebra_from_text(&dump).unwrap().carrier_size(), 4);
        assert!(algebra_from_text("nonsense 2").is_err());
    }
}
