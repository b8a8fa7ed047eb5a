//! Pre-sets and Boolean-valued sets.
//!
//! A [`PSet`] is a finite well-founded tree: a set given by the multiset
//! of its children. Extensional equivalence ([`PSet::equiv`]) ignores
//! order and repetition, so `{∅, ∅}` and `{∅}` are equivalent; membership
//! and subset tests quotient by that equivalence.
//!
//! A [`BSet`] softens membership: each child carries a truth value from a
//! [`FinCBA`], and equality/membership/subset between two such sets are
//! themselves algebra elements ([`bv_eq`], [`bv_mem`], [`bv_subset`]),
//! computed by the usual mutual recursion
//!
//! ```text
//! [x = y] = ⋀_{a∈x} (x(a) ⇒ ⋁_{b∈y} y(b) ⊓ [a = b])  ⊓  (symmetrically)
//! [x ∈ y] = ⋁_{b∈y} y(b) ⊓ [x = b]
//! ```
//!
//! Plain sets embed via [`BSet::from_pset`] (every weight `top`), and the
//! embedded equality is definite: `top` when the pre-sets are equivalent,
//! `bot` otherwise. [`mixture`] glues sets along pairwise-disjoint
//! weights, [`comprehension`] reweights a set by a predicate (which must
//! respect equality), and [`bv_powerset`] builds the canonical power set
//! from all weight assignments to the children.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::boolalg::{AlgebraError, Elt, FinCBA};
use crate::sexpr::{Sexp, SexpError};

/// Largest von Neumann ordinal constructed by [`PSet::ordinal`].
pub const MAX_ORDINAL: usize = 8;
/// Largest child count accepted by [`bv_powerset`].
pub const MAX_POWERSET_ENTRIES: usize = 4;
/// Largest algebra carrier accepted by [`bv_powerset`].
pub const MAX_POWERSET_CARRIER: usize = 16;

#[derive(Debug, Error)]
pub enum SetsError {
    #[error("size guard: {what} limited to {limit}, got {got}")]
    Guard {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("operands live in different algebras")]
    AlgebraMismatch,
    #[error("weights are not extensional: entries {i} and {j} are equal with excess but get incompatible weights")]
    NotExtensional { i: usize, j: usize },
    #[error("mixture weights {i} and {j} overlap")]
    OverlappingWeights { i: usize, j: usize },
    #[error("expected {expected} weights, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

type Result<T> = std::result::Result<T, SetsError>;

// ---------------------------------------------------------------------------
// Pre-sets.

/// A finite well-founded tree standing for a hereditarily finite set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PSet {
    children: Vec<PSet>,
}

impl PSet {
    pub fn empty() -> PSet {
        PSet {
            children: Vec::new(),
        }
    }

    pub fn new(children: Vec<PSet>) -> PSet {
        PSet { children }
    }

    pub fn children(&self) -> &[PSet] {
        &self.children
    }

    /// Total number of tree nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(PSet::size).sum::<usize>()
    }

    /// Height of the tree: 0 for the empty set.
    pub fn rank(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.rank() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Extensional equivalence: each child of one side has an equivalent
    /// child on the other.
    pub fn equiv(&self, other: &PSet) -> bool {
        self.children
            .iter()
            .all(|a| other.children.iter().any(|b| a.equiv(b)))
            && other
                .children
                .iter()
                .all(|b| self.children.iter().any(|a| a.equiv(b)))
    }

    /// Membership up to equivalence.
    pub fn mem(&self, other: &PSet) -> bool {
        other.children.iter().any(|b| self.equiv(b))
    }

    /// Subset up to equivalence.
    pub fn subset(&self, other: &PSet) -> bool {
        self.children.iter().all(|a| a.mem(other))
    }

    /// The von Neumann ordinal `n = {0, 1, .., n-1}`.
    pub fn ordinal(n: usize) -> Result<PSet> {
        if n > MAX_ORDINAL {
            return Err(SetsError::Guard {
                what: "ordinal",
                limit: MAX_ORDINAL,
                got: n,
            });
        }
        let mut stages: Vec<PSet> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            stages.push(PSet::new(stages[..k].to_vec()));
        }
        Ok(stages.pop().expect("at least the empty set"))
    }

    pub fn to_sexp(&self) -> Sexp {
        let mut items = vec![Sexp::Atom("pset".into())];
        items.extend(self.children.iter().map(PSet::to_sexp));
        Sexp::List(items)
    }

    pub fn from_sexp(sexp: &Sexp) -> Result<PSet> {
        let items = sexp.as_tagged("pset").ok_or_else(|| SetsError::Malformed {
            what: "pset",
            detail: format!("expected (pset ...), found {sexp}"),
        })?;
        let children = items.iter().map(PSet::from_sexp).collect::<Result<_>>()?;
        Ok(PSet::new(children))
    }

    pub fn from_str_sexp(text: &str) -> Result<PSet> {
        PSet::from_sexp(&Sexp::parse(text)?)
    }
}

impl std::fmt::Display for PSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

// ---------------------------------------------------------------------------
// Boolean-valued sets.

/// A set whose members carry truth values from a shared algebra.
///
/// Comparisons (`==`, `Ord`) look at the entry structure only and assume
/// both operands live in the same algebra; collections of [`BSet`]s
/// should be built over a single shared [`FinCBA`].
#[derive(Debug, Clone)]
pub struct BSet {
    algebra: Arc<FinCBA>,
    entries: Vec<(BSet, Elt)>,
}

impl PartialEq for BSet {
    fn eq(&self, other: &BSet) -> bool {
        self.entries == other.entries
    }
}

impl Eq for BSet {}

impl PartialOrd for BSet {
    fn partial_cmp(&self, other: &BSet) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BSet {
    fn cmp(&self, other: &BSet) -> std::cmp::Ordering {
        self.entries.cmp(&other.entries)
    }
}

impl BSet {
    pub fn empty(algebra: Arc<FinCBA>) -> BSet {
        BSet {
            algebra,
            entries: Vec::new(),
        }
    }

    /// Builds a set from `(child, weight)` entries; every child must live
    /// in the same algebra.
    pub fn new(algebra: Arc<FinCBA>, entries: Vec<(BSet, Elt)>) -> Result<BSet> {
        for (child, weight) in &entries {
            if !same_algebra(&algebra, &child.algebra) {
                return Err(SetsError::AlgebraMismatch);
            }
            if weight.index() >= algebra.carrier_size() {
                return Err(SetsError::Malformed {
                    what: "bset",
                    detail: format!("weight index {} out of range", weight.index()),
                });
            }
        }
        Ok(BSet { algebra, entries })
    }

    pub fn algebra(&self) -> &FinCBA {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> Arc<FinCBA> {
        Arc::clone(&self.algebra)
    }

    pub fn entries(&self) -> &[(BSet, Elt)] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        1 + self.entries.iter().map(|(c, _)| c.size()).sum::<usize>()
    }

    pub fn rank(&self) -> usize {
        self.entries
            .iter()
            .map(|(c, _)| c.rank() + 1)
            .max()
            .unwrap_or(0)
    }

    /// The canonical embedding of a plain set: every weight is `top`.
    pub fn from_pset(algebra: &Arc<FinCBA>, p: &PSet) -> BSet {
        let entries = p
            .children()
            .iter()
            .map(|c| (BSet::from_pset(algebra, c), algebra.top()))
            .collect();
        BSet {
            algebra: Arc::clone(algebra),
            entries,
        }
    }

    /// `(bset (entry WEIGHT child) ...)` with weights as element indices.
    pub fn to_sexp(&self) -> Sexp {
        let mut items = vec![Sexp::Atom("bset".into())];
        for (child, weight) in &self.entries {
            items.push(Sexp::List(vec![
                Sexp::Atom("entry".into()),
                Sexp::Atom(weight.index().to_string()),
                child.to_sexp(),
            ]));
        }
        Sexp::List(items)
    }

    pub fn from_sexp(algebra: &Arc<FinCBA>, sexp: &Sexp) -> Result<BSet> {
        let items = sexp.as_tagged("bset").ok_or_else(|| SetsError::Malformed {
            what: "bset",
            detail: format!("expected (bset ...), found {sexp}"),
        })?;
        let mut entries = Vec::new();
        for item in items {
            let fail = || SetsError::Malformed {
                what: "bset",
                detail: format!("expected (entry WEIGHT child), found {item}"),
            };
            let parts = item.as_tagged("entry").ok_or_else(fail)?;
            let [weight, child] = parts else {
                return Err(fail());
            };
            let index: usize = weight
                .as_atom()
                .and_then(|a| a.parse().ok())
                .ok_or_else(fail)?;
            let weight = algebra.element(index).ok_or_else(|| SetsError::Malformed {
                what: "bset",
                detail: format!("weight index {index} out of range"),
            })?;
            entries.push((BSet::from_sexp(algebra, child)?, weight));
        }
        BSet::new(Arc::clone(algebra), entries)
    }

    pub fn from_str_sexp(algebra: &Arc<FinCBA>, text: &str) -> Result<BSet> {
        BSet::from_sexp(algebra, &Sexp::parse(text)?)
    }
}

impl std::fmt::Display for BSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

fn same_algebra(a: &Arc<FinCBA>, b: &Arc<FinCBA>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn require_same_algebra(x: &BSet, y: &BSet) -> Result<()> {
    if same_algebra(&x.algebra, &y.algebra) {
        Ok(())
    } else {
        Err(SetsError::AlgebraMismatch)
    }
}

type EqMemo = HashMap<(usize, usize), Elt>;

fn node_key(x: &BSet, y: &BSet) -> (usize, usize) {
    (x as *const BSet as usize, y as *const BSet as usize)
}

fn eq_rec(x: &BSet, y: &BSet, memo: &mut EqMemo) -> Elt {
    let key = node_key(x, y);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let alg = &*x.algebra;
    let mut value = alg.top();
    for (cx, wx) in &x.entries {
        let mut found = alg.bot();
        for (cy, wy) in &y.entries {
            found = alg.join(found, alg.meet(*wy, eq_rec(cx, cy, memo)));
        }
        value = alg.meet(value, alg.imp(*wx, found));
    }
    for (cy, wy) in &y.entries {
        let mut found = alg.bot();
        for (cx, wx) in &x.entries {
            found = alg.join(found, alg.meet(*wx, eq_rec(cx, cy, memo)));
        }
        value = alg.meet(value, alg.imp(*wy, found));
    }
    memo.insert(key, value);
    value
}

fn mem_rec(x: &BSet, y: &BSet, memo: &mut EqMemo) -> Elt {
    let alg = &*x.algebra;
    let mut found = alg.bot();
    for (cy, wy) in &y.entries {
        found = alg.join(found, alg.meet(*wy, eq_rec(x, cy, memo)));
    }
    found
}

fn subset_rec(x: &BSet, y: &BSet, memo: &mut EqMemo) -> Elt {
    let alg = &*x.algebra;
    let mut value = alg.top();
    for (cx, wx) in &x.entries {
        value = alg.meet(value, alg.imp(*wx, mem_rec(cx, y, memo)));
    }
    value
}

/// The truth value of `x = y`.
pub fn bv_eq(x: &BSet, y: &BSet) -> Result<Elt> {
    require_same_algebra(x, y)?;
    Ok(eq_rec(x, y, &mut EqMemo::new()))
}

/// The truth value of `x ∈ y`.
pub fn bv_mem(x: &BSet, y: &BSet) -> Result<Elt> {
    require_same_algebra(x, y)?;
    Ok(mem_rec(x, y, &mut EqMemo::new()))
}

/// The truth value of `x ⊆ y`.
pub fn bv_subset(x: &BSet, y: &BSet) -> Result<Elt> {
    require_same_algebra(x, y)?;
    Ok(subset_rec(x, y, &mut EqMemo::new()))
}

/// Checks that a weight vector respects equality between the entries of
/// `x`: whenever two children are equal with some excess, their weights
/// may not be pulled apart — `w[i] ⊓ [ch_i = ch_j] <= w[j]` for all
/// `i, j`. Returns the first violating pair.
pub fn b_ext_check(x: &BSet, weights: &[Elt]) -> Result<()> {
    if weights.len() != x.entries.len() {
        return Err(SetsError::LengthMismatch {
            expected: x.entries.len(),
            got: weights.len(),
        });
    }
    let alg = &*x.algebra;
    let mut memo = EqMemo::new();
    for (i, (ci, _)) in x.entries.iter().enumerate() {
        for (j, (cj, _)) in x.entries.iter().enumerate() {
            let eq = eq_rec(ci, cj, &mut memo);
            if !alg.le(alg.meet(weights[i], eq), weights[j]) {
                return Err(SetsError::NotExtensional { i, j });
            }
        }
    }
    Ok(())
}

/// Reweights `x` by a predicate given as one truth value per entry: the
/// result keeps child `c` with weight `x(c) ⊓ phi(c)`. The predicate must
/// pass [`b_ext_check`]; the construction then provably satisfies
/// `[c ∈ result] = [c ∈ x] ⊓ phi(c)` for every child, which is asserted.
pub fn comprehension(x: &BSet, phi: &[Elt]) -> Result<BSet> {
    b_ext_check(x, phi)?;
    let alg = &*x.algebra;
    let entries: Vec<(BSet, Elt)> = x
        .entries
        .iter()
        .zip(phi)
        .map(|((c, w), &p)| (c.clone(), alg.meet(*w, p)))
        .collect();
    let result = BSet {
        algebra: x.algebra_arc(),
        entries,
    };
    for (i, (c, _)) in x.entries.iter().enumerate() {
        let mut memo = EqMemo::new();
        let got = mem_rec(c, &result, &mut memo);
        let want = alg.meet(mem_rec(c, x, &mut memo), phi[i]);
        assert_eq!(got, want, "comprehension violates the membership law");
    }
    Ok(result)
}

/// Glues `sets[i]` together along pairwise-disjoint `weights[i]`: the
/// result takes each entry `(c, w)` of `sets[i]` with weight
/// `weights[i] ⊓ w`. Disjointness makes the result equal to `sets[i]`
/// with value at least `weights[i]`, which is asserted.
pub fn mixture(weights: &[Elt], sets: &[BSet]) -> Result<BSet> {
    if weights.len() != sets.len() {
        return Err(SetsError::LengthMismatch {
            expected: sets.len(),
            got: weights.len(),
        });
    }
    let [first, rest @ ..] = sets else {
        return Err(SetsError::Malformed {
            what: "mixture",
            detail: "at least one set is required".into(),
        });
    };
    for s in rest {
        require_same_algebra(first, s)?;
    }
    let alg = &*first.algebra;
    for i in 0..weights.len() {
        for j in i + 1..weights.len() {
            if alg.meet(weights[i], weights[j]) != alg.bot() {
                return Err(SetsError::OverlappingWeights { i, j });
            }
        }
    }
    let mut entries = Vec::new();
    for (u, s) in weights.iter().zip(sets) {
        for (c, w) in &s.entries {
            entries.push((c.clone(), alg.meet(*u, *w)));
        }
    }
    let result = BSet {
        algebra: first.algebra_arc(),
        entries,
    };
    for (u, s) in weights.iter().zip(sets) {
        let value = eq_rec(&result, s, &mut EqMemo::new());
        assert!(
            alg.le(*u, value),
            "mixture violates the gluing law at weight {}",
            alg.element_label(*u)
        );
    }
    Ok(result)
}

/// The canonical power set: one entry per assignment `chi` of an algebra
/// element to each child of `x` — the subset keeping child `c` with
/// weight `chi(c)` — weighted by `[chi-subset ⊆ x]`.
///
/// Assignments are enumerated lexicographically: the first child is the
/// most significant digit and element indices count up from 0, so the
/// layout is deterministic. Guarded to [`MAX_POWERSET_ENTRIES`] children
/// and [`MAX_POWERSET_CARRIER`] algebra elements.
pub fn bv_powerset(x: &BSet) -> Result<BSet> {
    let n = x.entries.len();
    if n > MAX_POWERSET_ENTRIES {
        return Err(SetsError::Guard {
            what: "powerset entries",
            limit: MAX_POWERSET_ENTRIES,
            got: n,
        });
    }
    let carrier = x.algebra.carrier_size();
    if carrier > MAX_POWERSET_CARRIER {
        return Err(SetsError::Guard {
            what: "powerset algebra carrier",
            limit: MAX_POWERSET_CARRIER,
            got: carrier,
        });
    }
    let count = carrier.pow(n as u32);
    let mut entries = Vec::with_capacity(count);
    for k in 0..count {
        let chi: Vec<Elt> = (0..n)
            .map(|i| {
                let digit = (k / carrier.pow((n - 1 - i) as u32)) % carrier;
                x.algebra.element(digit).expect("digit below carrier")
            })
            .collect();
        let subset = BSet {
            algebra: x.algebra_arc(),
            entries: x
                .entries
                .iter()
                .zip(&chi)
                .map(|((c, _), &w)| (c.clone(), w))
                .collect(),
        };
        let weight = subset_rec(&subset, x, &mut EqMemo::new());
        entries.push((subset, weight));
    }
    Ok(BSet {
        algebra: x.algebra_arc(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> Arc<FinCBA> {
        Arc::new(FinCBA::powerset(1).unwrap())
    }

    fn four() -> Arc<FinCBA> {
        Arc::new(FinCBA::powerset(2).unwrap())
    }

    #[test]
    fn pset_equiv_ignores_order_and_repetition() {
        let e = PSet::empty();
        let one = PSet::new(vec![e.clone()]);
        let one_dup = PSet::new(vec![e.clone(), e.clone()]);
        assert!(one.equiv(&one_dup));
        assert!(!one.equiv(&e));
        let two_a = PSet::new(vec![e.clone(), one.clone()]);
        let two_b = PSet::new(vec![one.clone(), e.clone()]);
        assert!(two_a.equiv(&two_b));
        assert!(e.mem(&one));
        assert!(!one.mem(&one));
        assert!(one.subset(&two_a));
        assert!(!two_a.subset(&one));
    }

    #[test]
    fn ordinals() {
        let v3 = PSet::ordinal(3).unwrap();
        assert_eq!(v3.children().len(), 3);
        assert_eq!(v3.rank(), 3);
        let v2 = PSet::ordinal(2).unwrap();
        assert!(v2.mem(&v3));
        assert!(!v3.mem(&v3));
        assert!(v2.subset(&v3));
        assert!(PSet::ordinal(9).is_err());
        assert_eq!(PSet::ordinal(0).unwrap(), PSet::empty());
    }

    #[test]
    fn pset_sexp_roundtrip() {
        let v2 = PSet::ordinal(2).unwrap();
        let text = v2.to_string();
        assert_eq!(text, "(pset (pset) (pset (pset)))");
        assert_eq!(PSet::from_str_sexp(&text).unwrap(), v2);
        assert!(PSet::from_str_sexp("(nope)").is_err());
    }

    #[test]
    fn embedded_equality_is_definite() {
        let alg = four();
        let psets = [
            PSet::empty(),
            PSet::ordinal(1).unwrap(),
            PSet::ordinal(2).unwrap(),
            PSet::new(vec![PSet::empty(), PSet::empty()]),
            PSet::new(vec![PSet::ordinal(1).unwrap()]),
        ];
        for x in &psets {
            for y in &psets {
                let bx = BSet::from_pset(&alg, x);
                let by = BSet::from_pset(&alg, y);
                let expect_eq = if x.equiv(y) { alg.top() } else { alg.bot() };
                assert_eq!(bv_eq(&bx, &by).unwrap(), expect_eq, "{x} = {y}");
                let expect_mem = if x.mem(y) { alg.top() } else { alg.bot() };
                assert_eq!(bv_mem(&bx, &by).unwrap(), expect_mem, "{x} in {y}");
                let expect_sub = if x.subset(y) { alg.top() } else { alg.bot() };
                assert_eq!(bv_subset(&bx, &by).unwrap(), expect_sub, "{x} sub {y}");
            }
        }
    }

    #[test]
    fn weighted_membership() {
        let alg = four();
        let u = alg.element_from_mask(0b01).unwrap();
        let empty = BSet::empty(Arc::clone(&alg));
        // x = {∅ with weight u}
        let x = BSet::new(Arc::clone(&alg), vec![(empty.clone(), u)]).unwrap();
        assert_eq!(bv_mem(&empty, &x).unwrap(), u);
        // [x = ∅] = ¬u: x is empty exactly where its only member is absent.
        assert_eq!(bv_eq(&x, &empty).unwrap(), alg.neg(u));
        assert_eq!(bv_subset(&x, &empty).unwrap(), alg.neg(u));
        assert_eq!(bv_subset(&empty, &x).unwrap(), alg.top());
        // Reflexivity stays top despite the intermediate weight.
        assert_eq!(bv_eq(&x, &x).unwrap(), alg.top());
    }

    #[test]
    fn algebra_mismatch_and_structural_match() {
        let a = two();
        let b = four();
        let x = BSet::empty(Arc::clone(&a));
        let y = BSet::empty(Arc::clone(&b));
        assert!(matches!(bv_eq(&x, &y), Err(SetsError::AlgebraMismatch)));
        // Structurally equal algebras behind distinct Arcs are accepted.
        let a2 = two();
        let z = BSet::empty(Arc::clone(&a2));
        assert_eq!(bv_eq(&x, &z).unwrap(), a.top());
        assert!(BSet::new(Arc::clone(&a), vec![(y, a.top())]).is_err());
    }

    #[test]
    fn mixture_glues_along_disjoint_weights() {
        let alg = four();
        let u = alg.element_from_mask(0b01).unwrap();
        let e = BSet::from_pset(&alg, &PSet::empty());
        let one = BSet::from_pset(&alg, &PSet::ordinal(1).unwrap());
        let mix = mixture(&[u, alg.neg(u)], &[e.clone(), one.clone()]).unwrap();
        assert!(alg.le(u, bv_eq(&mix, &e).unwrap()));
        assert!(alg.le(alg.neg(u), bv_eq(&mix, &one).unwrap()));
        // [∅ ∈ mix] = ¬u: the membership comes only from the `one` part.
        assert_eq!(bv_mem(&e, &mix).unwrap(), alg.neg(u));
        // Overlapping weights are rejected.
        assert!(matches!(
            mixture(&[u, u], &[e.clone(), one]),
            Err(SetsError::OverlappingWeights { i: 0, j: 1 })
        ));
        assert!(matches!(
            mixture(&[u], &[e.clone(), e.clone()]),
            Err(SetsError::LengthMismatch { .. })
        ));
        assert!(matches!(
            mixture(&[], &[]),
            Err(SetsError::Malformed { .. })
        ));
    }

    #[test]
    fn comprehension_respects_membership_law() {
        let alg = four();
        let e = BSet::from_pset(&alg, &PSet::empty());
        let one = BSet::from_pset(&alg, &PSet::ordinal(1).unwrap());
        let x = BSet::new(
            Arc::clone(&alg),
            vec![(e.clone(), alg.top()), (one.clone(), alg.top())],
        )
        .unwrap();
        // Keep only the empty set.
        let r = comprehension(&x, &[alg.top(), alg.bot()]).unwrap();
        assert_eq!(bv_mem(&e, &r).unwrap(), alg.top());
        assert_eq!(bv_mem(&one, &r).unwrap(), alg.bot());
        // A predicate that splits equal children is refused.
        let dup = BSet::new(
            Arc::clone(&alg),
            vec![(e.clone(), alg.top()), (e.clone(), alg.top())],
        )
        .unwrap();
        assert!(matches!(
            comprehension(&dup, &[alg.top(), alg.bot()]),
            Err(SetsError::NotExtensional { i: 0, j: 1 })
        ));
        // Intermediate weights are fine when extensional.
        let u = alg.element_from_mask(0b10).unwrap();
        let r = comprehension(&x, &[u, u]).unwrap();
        assert_eq!(bv_mem(&e, &r).unwrap(), u);
    }

    #[test]
    fn powerset_of_empty_and_singleton() {
        let alg = two();
        let e = BSet::empty(Arc::clone(&alg));
        let pe = bv_powerset(&e).unwrap();
        assert_eq!(pe.entries().len(), 1);
        assert_eq!(bv_mem(&e, &pe).unwrap(), alg.top());

        let one = BSet::new(Arc::clone(&alg), vec![(e.clone(), alg.top())]).unwrap();
        let pone = bv_powerset(&one).unwrap();
        // chi in {bot, top} per child: two candidate subsets, all valued top.
        assert_eq!(pone.entries().len(), 2);
        assert_eq!(bv_mem(&e, &pone).unwrap(), alg.top());
        assert_eq!(bv_mem(&one, &pone).unwrap(), alg.top());
        for (_, w) in pone.entries() {
            assert_eq!(*w, alg.top());
        }
    }

    #[test]
    fn powerset_weighs_subsets_by_containment() {
        let alg = four();
        let u = alg.element_from_mask(0b01).unwrap();
        let e = BSet::empty(Arc::clone(&alg));
        // x = {∅ with weight u}: the subset keeping ∅ with weight w gets
        // powerset weight [w-subset ⊆ x] = w ⟹ u.
        let x = BSet::new(Arc::clone(&alg), vec![(e.clone(), u)]).unwrap();
        let p = bv_powerset(&x).unwrap();
        assert_eq!(p.entries().len(), 4);
        for (subset, weight) in p.entries() {
            let w = subset.entries()[0].1;
            assert_eq!(*weight, alg.imp(w, u));
        }
        // x itself belongs to its power set outright.
        assert_eq!(bv_mem(&x, &p).unwrap(), alg.top());
    }

    #[test]
    fn powerset_guards() {
        let alg = two();
        let e = BSet::empty(Arc::clone(&alg));
        let five = BSet::new(
            Arc::clone(&alg),
            (0..5).map(|_| (e.clone(), alg.top())).collect(),
        )
        .unwrap();
        assert!(matches!(
            bv_powerset(&five),
            Err(SetsError::Guard {
                what: "powerset entries",
                ..
            })
        ));
        let big = Arc::new(FinCBA::powerset(5).unwrap());
        let eb = BSet::empty(Arc::clone(&big));
        let one = BSet::new(Arc::clone(&big), vec![(eb, big.top())]).unwrap();
        assert!(matches!(
            bv_powerset(&one),
            Err(SetsError::Guard {
                what: "powerset algebra carrier",
                ..
            })
        ));
    }

    #[test]
    fn bset_sexp_roundtrip() {
        let alg = four();
        let u = alg.element_from_mask(0b01).unwrap();
        let e = BSet::empty(Arc::clone(&alg));
        let x = BSet::new(
            Arc::clone(&alg),
            vec![
                (e.clone(), u),
                (
                    BSet::new(Arc::clone(&alg), vec![(e.clone(), alg.top())]).unwrap(),
                    alg.neg(u),
                ),
            ],
        )
        .unwrap();
        let text = x.to_string();
        assert_eq!(
            text,
            "(bset (entry 1 (bset)) (entry 2 (bset (entry 3 (bset)))))"
        );
        let back = BSet::from_str_sexp(&alg, &text).unwrap();
        assert_eq!(back, x);
        // Out-of-range weight index is rejected.
        assert!(BSet::from_str_sexp(&alg, "(bset (entry 9 (bset)))").is_err());
    }

    #[test]
    fn ordinal_embedding_scales() {
        // Pointer-keyed memoization keeps the quadratic pair bound; the
        // rank-8 ordinal has 256 nodes and must stay quick.
        let alg = two();
        let v8 = BSet::from_pset(&alg, &PSet::ordinal(8).unwrap());
        assert_eq!(bv_eq(&v8, &v8).unwrap(), alg.top());
        let v7 = BSet::from_pset(&alg, &PSet::ordinal(7).unwrap());
        assert_eq!(bv_mem(&v7, &v8).unwrap(), alg.top());
        assert_eq!(bv_mem(&v8, &v7).unwrap(), alg.bot());
    }
}
