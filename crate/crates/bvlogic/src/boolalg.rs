//! Finite complete Boolean algebras and regular-open algebras.
//!
//! A [`FinCBA`] is immutable after construction and validates the Boolean
//! algebra axioms when built: exhaustively for carriers of at most 64
//! elements, by seeded random spot checks (1000 triples) above that.
//! Elements are opaque handles ([`Elt`]); the concrete encoding — subset
//! bitmasks for powerset algebras, open-set indices for regular-open
//! algebras, plain tables otherwise — lives behind the handle.
//!
//! Every finite Boolean algebra is complete, so `inf`/`sup` over arbitrary
//! carrier subsets are folds of `meet`/`join`. It is also trivially
//! σ-closed: any countable descending chain stabilizes after finitely many
//! steps; [`FinCBA::is_sigma_closed`] records that fact.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Carrier-size limit for a powerset algebra ground set.
pub const MAX_POWERSET_GROUND: usize = 16;
/// Point-count limit for topological spaces and regular-open algebras.
pub const MAX_TOPOLOGY_POINTS: usize = 12;
/// Largest carrier validated exhaustively at construction.
pub const MAX_EXHAUSTIVE_CARRIER: usize = 64;
/// Largest carrier for which the exact antichain search runs.
pub const MAX_EXACT_ANTICHAIN_CARRIER: usize = 256;
/// Largest carrier accepted by the table dump format.
pub const MAX_DUMP_CARRIER: usize = 64;
/// Atom-name limit for lattice tautology checking.
pub const MAX_TAUTOLOGY_ATOMS: usize = 8;

const SPOT_CHECK_SEED: u64 = 0xB001_A15E;
const SPOT_CHECK_TRIPLES: usize = 1000;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("size guard: {what} limited to {limit}, got {got}")]
    Guard {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("Boolean algebra axiom `{law}` fails at {witness}")]
    AxiomViolation { law: &'static str, witness: String },
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error("operation requires a subset-backed algebra")]
    NoMasks,
    #[error("invalid topology: {0}")]
    Topology(String),
}

type Result<T> = std::result::Result<T, AlgebraError>;

/// Opaque handle to a carrier element of a [`FinCBA`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elt(u32);

impl Elt {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite topological space on points `0..points`; subsets are bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinTopSpace {
    points: usize,
    opens: Vec<u32>,
}

impl FinTopSpace {
    /// Validates that `opens` contains the empty and full sets and is
    /// closed under pairwise union and intersection.
    pub fn new(points: usize, opens: Vec<u32>) -> Result<FinTopSpace> {
        if points > MAX_TOPOLOGY_POINTS {
            return Err(AlgebraError::Guard {
                what: "topology points",
                limit: MAX_TOPOLOGY_POINTS,
                got: points,
            });
        }
        let full = full_mask(points);
        let mut sorted: Vec<u32> = opens;
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|&u| u & !full != 0) {
            return Err(AlgebraError::Topology(
                "an open set mentions a point outside the space".into(),
            ));
        }
        if !sorted.contains(&0) || !sorted.contains(&full) {
            return Err(AlgebraError::Topology(
                "opens must contain the empty and full sets".into(),
            ));
        }
        let set: BTreeSet<u32> = sorted.iter().copied().collect();
        for &u in &sorted {
            for &v in &sorted {
                if !set.contains(&(u | v)) {
                    return Err(AlgebraError::Topology(format!(
                        "not closed under union: {} | {}",
                        format_point_set(u),
                        format_point_set(v)
                    )));
                }
                if !set.contains(&(u & v)) {
                    return Err(AlgebraError::Topology(format!(
                        "not closed under intersection: {} & {}",
                        format_point_set(u),
                        format_point_set(v)
                    )));
                }
            }
        }
        Ok(FinTopSpace {
            points,
            opens: sorted,
        })
    }

    /// The discrete topology: every subset is open.
    pub fn discrete(points: usize) -> Result<FinTopSpace> {
        if points > MAX_TOPOLOGY_POINTS {
            return Err(AlgebraError::Guard {
                what: "topology points",
                limit: MAX_TOPOLOGY_POINTS,
                got: points,
            });
        }
        let full = full_mask(points);
        FinTopSpace::new(points, (0..=full).collect())
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn opens(&self) -> &[u32] {
        &self.opens
    }

    pub fn full(&self) -> u32 {
        full_mask(self.points)
    }

    pub fn is_open(&self, mask: u32) -> bool {
        self.opens.binary_search(&mask).is_ok()
    }

    /// Largest open subset of `mask`: the union of all opens inside it.
    pub fn interior(&self, mask: u32) -> u32 {
        let mut out = 0;
        for &u in &self.opens {
            if u & !mask == 0 {
                out |= u;
            }
        }
        out
    }

    /// Smallest closed superset of `mask`.
    pub fn closure(&self, mask: u32) -> u32 {
        self.full() & !self.interior(self.full() & !mask)
    }

    /// The open complement `X \ closure(mask)`, i.e. `int(X \ mask)`.
    pub fn perp(&self, mask: u32) -> u32 {
        self.interior(self.full() & !mask)
    }

    /// Opens `U` with `perp(perp(U)) == U`, ascending as bitmasks.
    pub fn regular_opens(&self) -> Vec<u32> {
        self.opens
            .iter()
            .copied()
            .filter(|&u| self.perp(self.perp(u)) == u)
            .collect()
    }

    /// Canonical rendering: a `points N` header, then one open per line as
    /// a sorted point list.
    pub fn to_text(&self) -> String {
        let mut out = format!("points {}\n", self.points);
        for &u in &self.opens {
            out.push_str(&format_point_set(u));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<FinTopSpace> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with("--"));
        let header = lines.next().ok_or_else(|| AlgebraError::Malformed {
            what: "topology",
            detail: "missing `points N` header".into(),
        })?;
        let points: usize = header
            .strip_prefix("points")
            .map(str::trim)
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| AlgebraError::Malformed {
                what: "topology",
                detail: format!("bad header `{header}`"),
            })?;
        let mut opens = Vec::new();
        for line in lines {
            opens.push(
                parse_point_set(line).map_err(|detail| AlgebraError::Malformed {
                    what: "topology",
                    detail,
                })?,
            );
        }
        FinTopSpace::new(points, opens)
    }
}

fn full_mask(points: usize) -> u32 {
    if points == 0 {
        0
    } else {
        (1u32 << points) - 1
    }
}

/// Renders a bitmask as `{0,2,5}`; the empty set is `{}`.
pub fn format_point_set(mask: u32) -> String {
    let points: Vec<String> = (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", points.join(","))
}

/// Parses `{0, 2,5}` (whitespace tolerated) into a bitmask.
pub fn parse_point_set(text: &str) -> std::result::Result<u32, String> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| format!("point set `{text}` must be brace-delimited"))?;
    let mut mask = 0u32;
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let p: u32 = part
            .parse()
            .map_err(|_| format!("bad point `{part}` in `{text}`"))?;
        if p >= 32 {
            return Err(format!("point {p} out of range"));
        }
        mask |= 1 << p;
    }
    Ok(mask)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Backend {
    /// Powerset of `0..ground`; element index == subset bitmask.
    Bits { ground: usize },
    /// Explicit operation tables, row-major `n * n`.
    Table {
        n: usize,
        meet: Vec<u32>,
        join: Vec<u32>,
        neg: Vec<u32>,
        bot: u32,
        top: u32,
        labels: Vec<String>,
        /// Point-set encodings when the carrier consists of subsets.
        masks: Option<Vec<u32>>,
    },
    /// Regular opens of a space, computed on demand (large carriers).
    Regular { space: FinTopSpace, masks: Vec<u32> },
}

/// A finite complete Boolean algebra; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCBA {
    backend: Backend,
    atoms: Vec<Elt>,
}

impl FinCBA {
    /// The powerset algebra of `{0, .., n-1}`: elements are the `2^n`
    /// subset bitmasks, meet/join/neg are the set operations.
    pub fn powerset(n: usize) -> Result<FinCBA> {
        if n > MAX_POWERSET_GROUND {
            return Err(AlgebraError::Guard {
                what: "powerset ground set",
                limit: MAX_POWERSET_GROUND,
                got: n,
            });
        }
        let backend = Backend::Bits { ground: n };
        let atoms = (0..n).map(|i| Elt(1 << i)).collect();
        let algebra = FinCBA { backend, atoms };
        algebra.validate_axioms()?;
        Ok(algebra)
    }

    /// The regular-open algebra of a finite space: carrier is the regular
    /// opens, `meet` is intersection, `join u v = perp(perp(u | v))`,
    /// `neg = perp`. Small carriers are materialized as tables.
    pub fn regular_open(space: FinTopSpace) -> Result<FinCBA> {
        let masks = space.regular_opens();
        let n = masks.len();
        let index = |m: u32| masks.binary_search(&m).expect("regular open") as u32;
        let backend = if n <= MAX_EXHAUSTIVE_CARRIER {
            let mut meet = vec![0u32; n * n];
            let mut join = vec![0u32; n * n];
            let mut neg = vec![0u32; n];
            for i in 0..n {
                neg[i] = index(space.perp(masks[i]));
                for j in 0..n {
                    meet[i * n + j] = index(masks[i] & masks[j]);
                    join[i * n + j] = index(space.perp(space.perp(masks[i] | masks[j])));
                }
            }
            Backend::Table {
                n,
                meet,
                join,
                neg,
                bot: index(0),
                top: index(space.full()),
                labels: masks.iter().map(|&m| format_point_set(m)).collect(),
                masks: Some(masks),
            }
        } else {
            Backend::Regular { space, masks }
        };
        let mut algebra = FinCBA {
            backend,
            atoms: Vec::new(),
        };
        algebra.atoms = algebra.compute_atoms();
        algebra.validate_axioms()?;
        Ok(algebra)
    }

    /// Builds an algebra from explicit tables; validates the axioms.
    pub fn from_tables(
        labels: Vec<String>,
        bot: usize,
        top: usize,
        neg: Vec<usize>,
        meet: Vec<Vec<usize>>,
        join: Vec<Vec<usize>>,
    ) -> Result<FinCBA> {
        let n = labels.len();
        if n > 4096 {
            return Err(AlgebraError::Guard {
                what: "table carrier",
                limit: 4096,
                got: n,
            });
        }
        let check_idx = |i: usize| -> Result<u32> {
            if i < n {
                Ok(i as u32)
            } else {
                Err(AlgebraError::Malformed {
                    what: "algebra table",
                    detail: format!("element index {i} out of range (carrier {n})"),
                })
            }
        };
        let flatten = |rows: &[Vec<usize>]| -> Result<Vec<u32>> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(AlgebraError::Malformed {
                    what: "algebra table",
                    detail: format!("expected {n} rows of {n} entries"),
                });
            }
            rows.iter().flatten().map(|&i| check_idx(i)).collect()
        };
        if neg.len() != n {
            return Err(AlgebraError::Malformed {
                what: "algebra table",
                detail: format!("neg table must have {n} entries"),
            });
        }
        let backend = Backend::Table {
            n,
            meet: flatten(&meet)?,
            join: flatten(&join)?,
            neg: neg.into_iter().map(check_idx).collect::<Result<_>>()?,
            bot: check_idx(bot)?,
            top: check_idx(top)?,
            labels,
            masks: None,
        };
        let mut algebra = FinCBA {
            backend,
            atoms: Vec::new(),
        };
        algebra.atoms = algebra.compute_atoms();
        algebra.validate_axioms()?;
        Ok(algebra)
    }

    pub fn carrier_size(&self) -> usize {
        match &self.backend {
            Backend::Bits { ground } => 1usize << ground,
            Backend::Table { n, .. } => *n,
            Backend::Regular { masks, .. } => masks.len(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        (0..self.carrier_size() as u32).map(Elt)
    }

    pub fn element(&self, index: usize) -> Option<Elt> {
        (index < self.carrier_size()).then_some(Elt(index as u32))
    }

    pub fn bot(&self) -> Elt {
        match &self.backend {
            Backend::Bits { .. } => Elt(0),
            Backend::Table { bot, .. } => Elt(*bot),
            Backend::Regular { masks, .. } => {
                Elt(masks.binary_search(&0).expect("empty set is regular") as u32)
            }
        }
    }

    pub fn top(&self) -> Elt {
        match &self.backend {
            Backend::Bits { ground } => Elt(full_mask(*ground)),
            Backend::Table { top, .. } => Elt(*top),
            Backend::Regular { space, masks } => Elt(masks
                .binary_search(&space.full())
                .expect("full set is regular")
                as u32),
        }
    }

    pub fn meet(&self, a: Elt, b: Elt) -> Elt {
        match &self.backend {
            Backend::Bits { .. } => Elt(a.0 & b.0),
            Backend::Table { n, meet, .. } => Elt(meet[a.index() * n + b.index()]),
            Backend::Regular { masks, .. } => {
                let m = masks[a.index()] & masks[b.index()];
                Elt(masks.binary_search(&m).expect("meet of regular opens") as u32)
            }
        }
    }

    pub fn join(&self, a: Elt, b: Elt) -> Elt {
        match &self.backend {
            Backend::Bits { .. } => Elt(a.0 | b.0),
            Backend::Table { n, join, .. } => Elt(join[a.index() * n + b.index()]),
            Backend::Regular { space, masks } => {
                let m = space.perp(space.perp(masks[a.index()] | masks[b.index()]));
                Elt(masks.binary_search(&m).expect("join of regular opens") as u32)
            }
        }
    }

    pub fn neg(&self, a: Elt) -> Elt {
        match &self.backend {
            Backend::Bits { ground } => Elt(!a.0 & full_mask(*ground)),
            Backend::Table { neg, .. } => Elt(neg[a.index()]),
            Backend::Regular { space, masks } => {
                let m = space.perp(masks[a.index()]);
                Elt(masks.binary_search(&m).expect("perp of a regular open") as u32)
            }
        }
    }

    /// Material implication `neg(a) join b`.
    pub fn imp(&self, a: Elt, b: Elt) -> Elt {
        self.join(self.neg(a), b)
    }

    /// The lattice order, derived from meet: `a <= b` iff `meet(a,b) == a`.
    pub fn le(&self, a: Elt, b: Elt) -> bool {
        self.meet(a, b) == a
    }

    pub fn lt(&self, a: Elt, b: Elt) -> bool {
        a != b && self.le(a, b)
    }

    /// Greatest lower bound of any finite family; `top` for the empty one.
    pub fn inf(&self, elts: impl IntoIterator<Item = Elt>) -> Elt {
        elts.into_iter()
            .fold(self.top(), |acc, e| self.meet(acc, e))
    }

    /// Least upper bound of any finite family; `bot` for the empty one.
    pub fn sup(&self, elts: impl IntoIterator<Item = Elt>) -> Elt {
        elts.into_iter()
            .fold(self.bot(), |acc, e| self.join(acc, e))
    }

    /// The minimal nonzero elements, ascending by handle.
    pub fn atoms(&self) -> &[Elt] {
        &self.atoms
    }

    pub fn is_atom(&self, a: Elt) -> bool {
        self.atoms.binary_search(&a).is_ok()
    }

    /// Finite algebras are σ-closed: a countable descending chain takes
    /// only finitely many values, so it stabilizes and its limit is its
    /// minimum. Nothing to compute.
    pub fn is_sigma_closed(&self) -> bool {
        true
    }

    /// Human-readable element label: the subset notation when the carrier
    /// consists of subsets, otherwise `#index`.
    pub fn element_label(&self, e: Elt) -> String {
        match &self.backend {
            Backend::Bits { .. } => format_point_set(e.0),
            Backend::Table { labels, .. } => labels[e.index()].clone(),
            Backend::Regular { masks, .. } => format_point_set(masks[e.index()]),
        }
    }

    /// The subset bitmask behind an element, for subset-backed algebras.
    pub fn element_mask(&self, e: Elt) -> Result<u32> {
        match &self.backend {
            Backend::Bits { .. } => Ok(e.0),
            Backend::Table {
                masks: Some(masks), ..
            } => Ok(masks[e.index()]),
            Backend::Table { masks: None, .. } => Err(AlgebraError::NoMasks),
            Backend::Regular { masks, .. } => Ok(masks[e.index()]),
        }
    }

    /// The element with a given subset bitmask, for subset-backed algebras.
    pub fn element_from_mask(&self, mask: u32) -> Result<Elt> {
        let fail = || AlgebraError::Malformed {
            what: "element mask",
            detail: format!("{} is not in the carrier", format_point_set(mask)),
        };
        match &self.backend {
            Backend::Bits { ground } => {
                if mask & !full_mask(*ground) == 0 {
                    Ok(Elt(mask))
                } else {
                    Err(fail())
                }
            }
            Backend::Table {
                masks: Some(masks), ..
            } => masks
                .iter()
                .position(|&m| m == mask)
                .map(|i| Elt(i as u32))
                .ok_or_else(fail),
            Backend::Table { masks: None, .. } => Err(AlgebraError::NoMasks),
            Backend::Regular { masks, .. } => masks
                .binary_search(&mask)
                .map(|i| Elt(i as u32))
                .map_err(|_| fail()),
        }
    }

    fn compute_atoms(&self) -> Vec<Elt> {
        let bot = self.bot();
        let mut atoms = Vec::new();
        for a in self.elements() {
            if a == bot {
                continue;
            }
            let minimal = self
                .elements()
                .all(|b| b == bot || b == a || !self.lt(b, a));
            if minimal {
                atoms.push(a);
            }
        }
        atoms
    }

    // -- construction-time axiom battery ------------------------------------

    fn validate_axioms(&self) -> Result<()> {
        let n = self.carrier_size();
        if n == 0 {
            return Err(AlgebraError::Malformed {
                what: "algebra",
                detail: "empty carrier".into(),
            });
        }
        // Unary laws are cheap; always check the full carrier.
        for a in self.elements() {
            self.check_unary(a)?;
        }
        if n <= MAX_EXHAUSTIVE_CARRIER {
            for a in self.elements() {
                for b in self.elements() {
                    self.check_pair(a, b)?;
                    for c in self.elements() {
                        self.check_triple(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(SPOT_CHECK_SEED);
            for _ in 0..SPOT_CHECK_TRIPLES {
                let a = Elt(rng.gen_range(0..n as u32));
                let b = Elt(rng.gen_range(0..n as u32));
                let c = Elt(rng.gen_range(0..n as u32));
                self.check_pair(a, b)?;
                self.check_triple(a, b, c)?;
            }
        }
        Ok(())
    }

    fn violation(&self, law: &'static str, elts: &[Elt]) -> AlgebraError {
        let witness = elts
            .iter()
            .map(|&e| self.element_label(e))
            .collect::<Vec<_>>()
            .join(", ");
        AlgebraError::AxiomViolation { law, witness }
    }

    fn check_unary(&self, a: Elt) -> Result<()> {
        if self.meet(a, self.top()) != a {
            return Err(self.violation("meet identity", &[a]));
        }
        if self.join(a, self.bot()) != a {
            return Err(self.violation("join identity", &[a]));
        }
        if self.meet(a, self.neg(a)) != self.bot() {
            return Err(self.violation("complement meet", &[a]));
        }
        if self.join(a, self.neg(a)) != self.top() {
            return Err(self.violation("complement join", &[a]));
        }
        Ok(())
    }

    fn check_pair(&self, a: Elt, b: Elt) -> Result<()> {
        if self.meet(a, b) != self.meet(b, a) {
            return Err(self.violation("meet commutativity", &[a, b]));
        }
        if self.join(a, b) != self.join(b, a) {
            return Err(self.violation("join commutativity", &[a, b]));
        }
        if self.meet(a, self.join(a, b)) != a {
            return Err(self.violation("absorption (meet over join)", &[a, b]));
        }
        if self.join(a, self.meet(a, b)) != a {
            return Err(self.violation("absorption (join over meet)", &[a, b]));
        }
        Ok(())
    }

    fn check_triple(&self, a: Elt, b: Elt, c: Elt) -> Result<()> {
        if self.meet(a, self.meet(b, c)) != self.meet(self.meet(a, b), c) {
            return Err(self.violation("meet associativity", &[a, b, c]));
        }
        if self.join(a, self.join(b, c)) != self.join(self.join(a, b), c) {
            return Err(self.violation("join associativity", &[a, b, c]));
        }
        if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
            return Err(self.violation("meet-over-join distributivity", &[a, b, c]));
        }
        if self.join(a, self.meet(b, c)) != self.meet(self.join(a, b), self.join(a, c)) {
            return Err(self.violation("join-over-meet distributivity", &[a, b, c]));
        }
        Ok(())
    }

    // -- decision procedures -------------------------------------------------

    /// Order comparison through quantification over the carrier:
    /// `a <= b` iff every element below `a` is below `b`.
    pub fn yoneda_le(&self, a: Elt, b: Elt) -> bool {
        self.elements().all(|g| !self.le(g, a) || self.le(g, b))
    }

    /// Checks that `sub` is a dense suborder of the nonzero part of the
    /// algebra: every member is nonzero, and below every nonzero element
    /// of the carrier lies some member.
    pub fn is_dense_suborder(&self, sub: &[Elt]) -> bool {
        let bot = self.bot();
        if sub.contains(&bot) {
            return false;
        }
        self.elements()
            .filter(|&b| b != bot)
            .all(|b| sub.iter().any(|&p| self.le(p, b)))
    }

    /// A maximum-size antichain: pairwise-disjoint nonzero elements.
    ///
    /// The atoms always form one; for carriers of at most
    /// [`MAX_EXACT_ANTICHAIN_CARRIER`] elements a branch-and-bound search
    /// additionally certifies maximality (`exact` is set).
    pub fn max_antichain(&self) -> AntichainReport {
        let witness: Vec<Elt> = self.atoms.clone();
        let exact = self.carrier_size() <= MAX_EXACT_ANTICHAIN_CARRIER;
        let size = if exact {
            let mut best = witness.len();
            let nonzero: Vec<Elt> = self.elements().filter(|&e| e != self.bot()).collect();
            self.antichain_search(&nonzero, 0, self.bot(), 0, &mut best);
            best
        } else {
            witness.len()
        };
        debug_assert_eq!(size, witness.len());
        AntichainReport {
            size,
            witness,
            exact,
        }
    }

    fn antichain_search(
        &self,
        nonzero: &[Elt],
        from: usize,
        sup: Elt,
        count: usize,
        best: &mut usize,
    ) {
        if count > *best {
            *best = count;
        }
        // Any further pick is disjoint from everything chosen, hence lies
        // below neg(sup); each consumes at least one atom there.
        let capacity = {
            let room = self.neg(sup);
            self.atoms.iter().filter(|&&a| self.le(a, room)).count()
        };
        if count + capacity <= *best {
            return;
        }
        for i in from..nonzero.len() {
            let c = nonzero[i];
            if self.meet(c, sup) == self.bot() {
                self.antichain_search(nonzero, i + 1, self.join(sup, c), count + 1, best);
            }
        }
    }
}

/// Result of [`FinCBA::max_antichain`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntichainReport {
    pub size: usize,
    pub witness: Vec<Elt>,
    /// True when exhaustive search certified maximality.
    pub exact: bool,
}

// ---------------------------------------------------------------------------
// Lattice expressions and tautology checking.

/// A lattice expression over named atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeExpr {
    Atom(String),
    Top,
    Bot,
    Not(Box<LatticeExpr>),
    Meet(Box<LatticeExpr>, Box<LatticeExpr>),
    Join(Box<LatticeExpr>, Box<LatticeExpr>),
    Imp(Box<LatticeExpr>, Box<LatticeExpr>),
}

impl LatticeExpr {
    pub fn atom(name: impl Into<String>) -> LatticeExpr {
        LatticeExpr::Atom(name.into())
    }
    pub fn top() -> LatticeExpr {
        LatticeExpr::Top
    }
    pub fn bot() -> LatticeExpr {
        LatticeExpr::Bot
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> LatticeExpr {
        LatticeExpr::Not(Box::new(self))
    }
    pub fn meet(self, other: LatticeExpr) -> LatticeExpr {
        LatticeExpr::Meet(Box::new(self), Box::new(other))
    }
    pub fn join(self, other: LatticeExpr) -> LatticeExpr {
        LatticeExpr::Join(Box::new(self), Box::new(other))
    }
    pub fn imp(self, other: LatticeExpr) -> LatticeExpr {
        LatticeExpr::Imp(Box::new(self), Box::new(other))
    }

    fn collect_atoms(&self, into: &mut BTreeSet<String>) {
        match self {
            LatticeExpr::Atom(name) => {
                into.insert(name.clone());
            }
            LatticeExpr::Top | LatticeExpr::Bot => {}
            LatticeExpr::Not(e) => e.collect_atoms(into),
            LatticeExpr::Meet(l, r) | LatticeExpr::Join(l, r) | LatticeExpr::Imp(l, r) => {
                l.collect_atoms(into);
                r.collect_atoms(into);
            }
        }
    }

    pub fn eval(&self, algebra: &FinCBA, env: &BTreeMap<String, Elt>) -> Elt {
        match self {
            LatticeExpr::Atom(name) => env[name],
            LatticeExpr::Top => algebra.top(),
            LatticeExpr::Bot => algebra.bot(),
            LatticeExpr::Not(e) => algebra.neg(e.eval(algebra, env)),
            LatticeExpr::Meet(l, r) => algebra.meet(l.eval(algebra, env), r.eval(algebra, env)),
            LatticeExpr::Join(l, r) => algebra.join(l.eval(algebra, env), r.eval(algebra, env)),
            LatticeExpr::Imp(l, r) => algebra.imp(l.eval(algebra, env), r.eval(algebra, env)),
        }
    }
}

/// Verdict of [`tautology_le`] with a failing assignment when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TautologyOutcome {
    pub holds: bool,
    pub counterexample: Option<BTreeMap<String, Elt>>,
}

const MAX_TAUTOLOGY_ASSIGNMENTS: usize = 1 << 20;

/// Decides whether `lhs <= rhs` under **every** assignment of carrier
/// elements to the named atoms.
///
/// Two routes run: enumeration over `{bot, top}` assignments (always), and
/// enumeration over the full carrier when `carrier^atoms` stays within a
/// fixed budget. The two-valued route already decides the question — a
/// finite Boolean algebra embeds into a power of the two-element algebra,
/// where every inequality is checked coordinatewise — and the full route
/// must agree wherever it runs.
pub fn tautology_le(
    algebra: &FinCBA,
    lhs: &LatticeExpr,
    rhs: &LatticeExpr,
) -> Result<TautologyOutcome> {
    let mut names = BTreeSet::new();
    lhs.collect_atoms(&mut names);
    rhs.collect_atoms(&mut names);
    let names: Vec<String> = names.into_iter().collect();
    if names.len() > MAX_TAUTOLOGY_ATOMS {
        return Err(AlgebraError::Guard {
            what: "tautology atoms",
            limit: MAX_TAUTOLOGY_ATOMS,
            got: names.len(),
        });
    }

    let failing = |choices: &dyn Fn(usize) -> Elt, width: usize| -> Option<BTreeMap<String, Elt>> {
        // Odometer over `width` element choices per atom, lexicographic in
        // (atom, choice index) order.
        let k = names.len();
        let mut digits = vec![0usize; k];
        loop {
            let env: BTreeMap<String, Elt> = names
                .iter()
                .zip(&digits)
                .map(|(n, &d)| (n.clone(), choices(d)))
                .collect();
            if !algebra.le(lhs.eval(algebra, &env), rhs.eval(algebra, &env)) {
                return Some(env);
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < width {
                    break;
                }
                digits[i] = 0;
            }
        }
    };

    let two: [Elt; 2] = [algebra.bot(), algebra.top()];
    let two_failure = failing(&|d| two[d], 2);

    let carrier = algebra.carrier_size();
    let full_count = carrier.checked_pow(names.len() as u32);
    let full_failure = match full_count {
        Some(count) if count <= MAX_TAUTOLOGY_ASSIGNMENTS => {
            let failure = failing(&|d| Elt(d as u32), carrier);
            assert_eq!(
                failure.is_none(),
                two_failure.is_none(),
                "two-valued and full-carrier tautology routes disagree"
            );
            Some(failure)
        }
        _ => None,
    };

    let counterexample = match full_failure {
        Some(f) => f,
        None => two_failure,
    };
    Ok(TautologyOutcome {
        holds: counterexample.is_none(),
        counterexample,
    })
}

// ---------------------------------------------------------------------------
// Table dump format.

impl FinCBA {
    /// Line-oriented dump: carrier size, bot/top, atoms, labels, the neg
    /// table, then one `meet`/`join` line per row. Bit-exact and parseable
    /// by [`FinCBA::parse_dump`]. Guarded to small carriers.
    pub fn dump(&self) -> Result<String> {
        let n = self.carrier_size();
        if n > MAX_DUMP_CARRIER {
            return Err(AlgebraError::Guard {
                what: "dump carrier",
                limit: MAX_DUMP_CARRIER,
                got: n,
            });
        }
        let mut out = format!("carrier {n}\n");
        out.push_str(&format!("bot {}\n", self.bot().index()));
        out.push_str(&format!("top {}\n", self.top().index()));
        let atom_list = self
            .atoms
            .iter()
            .map(|a| a.index().to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("atoms {atom_list}\n"));
        for e in self.elements() {
            out.push_str(&format!("label {} {}\n", e.index(), self.element_label(e)));
        }
        let neg_list = self
            .elements()
            .map(|e| self.neg(e).index().to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("neg {neg_list}\n"));
        for op in ["meet", "join"] {
            for a in self.elements() {
                let row = self
                    .elements()
                    .map(|b| {
                        let v = if op == "meet" {
                            self.meet(a, b)
                        } else {
                            self.join(a, b)
                        };
                        v.index().to_string()
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push_str(&format!("{op} {row}\n"));
            }
        }
        Ok(out)
    }

    /// Parses the [`FinCBA::dump`] format and re-validates the axioms.
    pub fn parse_dump(text: &str) -> Result<FinCBA> {
        let malformed = |detail: String| AlgebraError::Malformed {
            what: "algebra dump",
            detail,
        };
        let mut carrier = None;
        let mut bot = None;
        let mut top = None;
        let mut labels: BTreeMap<usize, String> = BTreeMap::new();
        let mut neg = None;
        let mut meet: Vec<Vec<usize>> = Vec::new();
        let mut join: Vec<Vec<usize>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("--") {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let ints = || -> std::result::Result<Vec<usize>, String> {
                rest.split_whitespace()
                    .map(|w| w.parse::<usize>().map_err(|_| format!("bad number `{w}`")))
                    .collect()
            };
            match key {
                "carrier" => carrier = Some(ints().map_err(malformed)?),
                "bot" => bot = Some(ints().map_err(malformed)?),
                "top" => top = Some(ints().map_err(malformed)?),
                "atoms" => {} // informative; recomputed on load
                "label" => {
                    let (idx, label) = rest
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| malformed(format!("label line `{line}`")))?;
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| malformed(format!("label index `{idx}`")))?;
                    labels.insert(idx, label.trim().to_string());
                }
                "neg" => neg = Some(ints().map_err(malformed)?),
                "meet" => meet.push(ints().map_err(malformed)?),
                "join" => join.push(ints().map_err(malformed)?),
                _ => return Err(malformed(format!("unknown line `{line}`"))),
            }
        }
        let one = |v: Option<Vec<usize>>, what: &str| -> Result<usize> {
            match v.as_deref() {
                Some([x]) => Ok(*x),
                _ => Err(malformed(format!("expected exactly one value for {what}"))),
            }
        };
        let n = one(carrier, "carrier")?;
        let labels = (0..n)
            .map(|i| labels.get(&i).cloned().unwrap_or_else(|| format!("#{i}")))
            .collect();
        FinCBA::from_tables(
            labels,
            one(bot, "bot")?,
            one(top, "top")?,
            neg.ok_or_else(|| malformed("missing neg table".into()))?,
            meet,
            join,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powerset_basics() {
        let b = FinCBA::powerset(3).unwrap();
        assert_eq!(b.carrier_size(), 8);
        assert_eq!(b.atoms().len(), 3);
        let a = b.element_from_mask(0b011).unwrap();
        let c = b.element_from_mask(0b110).unwrap();
        assert_eq!(b.element_mask(b.meet(a, c)).unwrap(), 0b010);
        assert_eq!(b.element_mask(b.join(a, c)).unwrap(), 0b111);
        assert_eq!(b.element_mask(b.neg(a)).unwrap(), 0b100);
        assert!(b.le(b.bot(), a) && b.le(a, b.top()));
        assert!(b.is_sigma_closed());
        assert_eq!(b.element_label(a), "{0,1}");
    }

    #[test]
    fn powerset_guard() {
        assert!(FinCBA::powerset(17).is_err());
        assert!(FinCBA::powerset(16).is_ok());
    }

    #[test]
    fn trivial_algebra_has_collapsed_bounds() {
        let b = FinCBA::powerset(0).unwrap();
        assert_eq!(b.carrier_size(), 1);
        assert_eq!(b.bot(), b.top());
        assert!(b.atoms().is_empty());
    }

    #[test]
    fn inf_sup_fold() {
        let b = FinCBA::powerset(3).unwrap();
        let xs: Vec<Elt> = vec![
            b.element_from_mask(0b011).unwrap(),
            b.element_from_mask(0b110).unwrap(),
        ];
        assert_eq!(b.element_mask(b.inf(xs.clone())).unwrap(), 0b010);
        assert_eq!(b.element_mask(b.sup(xs)).unwrap(), 0b111);
        assert_eq!(b.inf([]), b.top());
        assert_eq!(b.sup([]), b.bot());
    }

    #[test]
    fn de_morgan_holds() {
        let b = FinCBA::powerset(3).unwrap();
        for x in b.elements() {
            for y in b.elements() {
                assert_eq!(b.neg(b.meet(x, y)), b.join(b.neg(x), b.neg(y)));
                assert_eq!(b.neg(b.join(x, y)), b.meet(b.neg(x), b.neg(y)));
            }
        }
    }

    #[test]
    fn from_tables_rejects_broken_algebra() {
        // Two elements with a self-complement: neg(bot) = bot.
        let labels = vec!["0".to_string(), "1".to_string()];
        let meet = vec![vec![0, 0], vec![0, 1]];
        let join = vec![vec![0, 1], vec![1, 1]];
        let bad_neg = vec![0, 0];
        let err = FinCBA::from_tables(labels.clone(), 0, 1, bad_neg, meet.clone(), join.clone())
            .unwrap_err();
        assert!(matches!(err, AlgebraError::AxiomViolation { .. }));
        let good = FinCBA::from_tables(labels, 0, 1, vec![1, 0], meet, join).unwrap();
        assert_eq!(good.carrier_size(), 2);
    }

    #[test]
    fn topology_validation() {
        // opens on {0,1,2}: {}, {0}, {1}, {0,1}, X
        let space = FinTopSpace::new(3, vec![0b000, 0b001, 0b010, 0b011, 0b111]).unwrap();
        assert!(space.is_open(0b001));
        assert!(!space.is_open(0b100));
        // Missing full set.
        assert!(FinTopSpace::new(2, vec![0b00, 0b01]).is_err());
        // Not closed under union.
        assert!(FinTopSpace::new(2, vec![0b00, 0b01, 0b10]).is_err());
        assert!(FinTopSpace::new(13, vec![0]).is_err());
    }

    #[test]
    fn interior_closure_perp() {
        let space = FinTopSpace::new(3, vec![0b000, 0b001, 0b010, 0b011, 0b111]).unwrap();
        // interior({0,2}) = {0}; closure({0}) = {0,2}; perp({0}) = {1}.
        assert_eq!(space.interior(0b101), 0b001);
        assert_eq!(space.closure(0b001), 0b101);
        assert_eq!(space.perp(0b001), 0b010);
        // perp is interior of the complement even for non-open inputs.
        assert_eq!(space.perp(0b100), 0b011);
    }

    #[test]
    fn regular_open_algebra_of_three_point_space() {
        let space = FinTopSpace::new(3, vec![0b000, 0b001, 0b010, 0b011, 0b111]).unwrap();
        // {0,1} is not regular: perp(perp({0,1})) = X.
        let b = FinCBA::regular_open(space).unwrap();
        assert_eq!(b.carrier_size(), 4);
        let masks: Vec<u32> = b.elements().map(|e| b.element_mask(e).unwrap()).collect();
        assert_eq!(masks, vec![0b000, 0b001, 0b010, 0b111]);
        // join({0}, {1}) = perp(perp({0,1})) = X, strictly above the union.
        let u0 = b.element_from_mask(0b001).unwrap();
        let u1 = b.element_from_mask(0b010).unwrap();
        assert_eq!(b.element_mask(b.join(u0, u1)).unwrap(), 0b111);
        assert_eq!(b.atoms().len(), 2);
    }

    #[test]
    fn regular_open_of_discrete_space_is_powerset() {
        let b = FinCBA::regular_open(FinTopSpace::discrete(3).unwrap()).unwrap();
        assert_eq!(b.carrier_size(), 8);
        let p = FinCBA::powerset(3).unwrap();
        for x in b.elements() {
            for y in b.elements() {
                let (mx, my) = (b.element_mask(x).unwrap(), b.element_mask(y).unwrap());
                let (px, py) = (
                    p.element_from_mask(mx).unwrap(),
                    p.element_from_mask(my).unwrap(),
                );
                assert_eq!(
                    b.element_mask(b.meet(x, y)).unwrap(),
                    p.element_mask(p.meet(px, py)).unwrap()
                );
                assert_eq!(
                    b.element_mask(b.join(x, y)).unwrap(),
                    p.element_mask(p.join(px, py)).unwrap()
                );
            }
        }
    }

    #[test]
    fn large_regular_open_uses_computed_backend() {
        // Discrete space on 7 points: 128 regular opens, above the table
        // threshold; operations still behave like set operations.
        let b = FinCBA::regular_open(FinTopSpace::discrete(7).unwrap()).unwrap();
        assert_eq!(b.carrier_size(), 128);
        let x = b.element_from_mask(0b0101).unwrap();
        let y = b.element_from_mask(0b0110).unwrap();
        assert_eq!(b.element_mask(b.meet(x, y)).unwrap(), 0b0100);
        assert_eq!(b.element_mask(b.join(x, y)).unwrap(), 0b0111);
        assert_eq!(b.atoms().len(), 7);
    }

    #[test]
    fn topology_text_roundtrip() {
        let space = FinTopSpace::new(3, vec![0b000, 0b001, 0b010, 0b011, 0b111]).unwrap();
        let text = space.to_text();
        assert_eq!(text, "points 3\n{}\n{0}\n{1}\n{0,1}\n{0,1,2}\n");
        assert_eq!(FinTopSpace::from_text(&text).unwrap(), space);
    }

    #[test]
    fn dump_roundtrip() {
        let b = FinCBA::powerset(2).unwrap();
        let dump = b.dump().unwrap();
        let back = FinCBA::parse_dump(&dump).unwrap();
        assert_eq!(back.carrier_size(), 4);
        assert_eq!(back.dump().unwrap(), dump);
    }

    #[test]
    fn yoneda_agrees_with_le() {
        let b = FinCBA::powerset(3).unwrap();
        for a in b.elements() {
            for c in b.elements() {
                assert_eq!(b.yoneda_le(a, c), b.le(a, c));
            }
        }
    }

    #[test]
    fn yoneda_meet_context_example() {
        // (d ⊓ e) ⊓ (f ⊓ g ⊓ ((b ⊓ a) ⊓ c)) <= a for concrete elements.
        let alg = FinCBA::powerset(3).unwrap();
        let m = |mask: u32| alg.element_from_mask(mask).unwrap();
        let (a, b, c, d, e, f, g) = (
            m(0b111),
            m(0b011),
            m(0b110),
            m(0b101),
            m(0b111),
            m(0b011),
            m(0b111),
        );
        let lhs = alg.meet(
            alg.meet(d, e),
            alg.meet(f, alg.meet(g, alg.meet(alg.meet(b, a), c))),
        );
        assert!(alg.yoneda_le(lhs, a));
    }

    #[test]
    fn dense_suborder() {
        let b = FinCBA::powerset(2).unwrap();
        let atoms: Vec<Elt> = b.atoms().to_vec();
        assert!(b.is_dense_suborder(&atoms));
        // A single atom misses elements below the other atom.
        assert!(!b.is_dense_suborder(&atoms[..1]));
        // Containing bot disqualifies.
        let mut with_bot = atoms.clone();
        with_bot.push(b.bot());
        assert!(!b.is_dense_suborder(&with_bot));
        // The whole nonzero carrier is dense.
        let nonzero: Vec<Elt> = b.elements().filter(|&e| e != b.bot()).collect();
        assert!(b.is_dense_suborder(&nonzero));
    }

    #[test]
    fn antichain_of_powerset_is_atoms() {
        let b = FinCBA::powerset(3).unwrap();
        let report = b.max_antichain();
        assert_eq!(report.size, 3);
        assert!(report.exact);
        assert_eq!(report.witness, b.atoms().to_vec());
        // Witness is pairwise disjoint and nonzero.
        for (i, &x) in report.witness.iter().enumerate() {
            assert!(x != b.bot());
            for &y in &report.witness[i + 1..] {
                assert_eq!(b.meet(x, y), b.bot());
            }
        }
    }

    #[test]
    fn antichain_above_exact_threshold_is_greedy() {
        let b = FinCBA::powerset(10).unwrap();
        let report = b.max_antichain();
        assert_eq!(report.size, 10);
        assert!(!report.exact);
    }

    #[test]
    fn tautology_examples() {
        let alg = FinCBA::powerset(2).unwrap();
        let a = || LatticeExpr::atom("a");
        let b = || LatticeExpr::atom("b");
        let c = || LatticeExpr::atom("c");
        // (a -> b) meet (b -> c) <= a -> c
        let lhs = a().imp(b()).meet(b().imp(c()));
        let rhs = a().imp(c());
        let outcome = tautology_le(&alg, &lhs, &rhs).unwrap();
        assert!(outcome.holds);
        assert!(outcome.counterexample.is_none());
        // a join b <= a fails, with a witness assignment.
        let outcome = tautology_le(&alg, &a().join(b()), &a()).unwrap();
        assert!(!outcome.holds);
        let witness = outcome.counterexample.unwrap();
        let lv = a().join(b()).eval(&alg, &witness);
        let rv = a().eval(&alg, &witness);
        assert!(!alg.le(lv, rv));
    }

    #[test]
    fn tautology_guard() {
        let alg = FinCBA::powerset(1).unwrap();
        let mut e = LatticeExpr::atom("x0");
        for i in 1..=8 {
            e = e.meet(LatticeExpr::atom(format!("x{i}")));
        }
        assert!(matches!(
            tautology_le(&alg, &e, &LatticeExpr::top()),
            Err(AlgebraError::Guard { .. })
        ));
    }

    #[test]
    fn regular_open_join_dominates_union() {
        let space = FinTopSpace::new(3, vec![0b000, 0b001, 0b010, 0b011, 0b111]).unwrap();
        let b = FinCBA::regular_open(space.clone()).unwrap();
        for x in b.elements() {
            for y in b.elements() {
                let (mx, my) = (b.element_mask(x).unwrap(), b.element_mask(y).unwrap());
                let mj = b.element_mask(b.join(x, y)).unwrap();
                // join contains the union, and the union is dense in it.
                assert_eq!(mj & (mx | my), mx | my);
                assert_eq!(space.closure(mx | my) & mj, mj);
            }
        }
    }
}
