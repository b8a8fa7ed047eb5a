//! Forcing conditions and delta systems at finite scale.
//!
//! A [`CohenCondition`] is a finite partial 0/1 assignment on cells
//! `(row, col)`: `ins` are the cells pinned to 1, `out` those pinned to 0.
//! Over a finite [`CohenGround`] of cells, a condition denotes the family
//! of total assignments extending it ([`iota`]); two conditions are
//! compatible exactly when neither pins a cell the other pins the opposite
//! way, and then the denotations intersect in the denotation of the union.
//! [`density_check`] verifies that the image of `iota` is dense in the
//! powerset algebra of assignments — every nonzero family sits above some
//! condition's denotation.
//!
//! A [`SetFamily`] is a list of finite sets of naturals. [`delta_extract`]
//! searches for a delta system (sunflower): a subfamily whose pairwise
//! intersections all equal one common root. The classical recursion is
//! used — take a maximal disjoint subfamily, or recurse on the sets
//! through the most popular element — which succeeds whenever the family
//! holds more than `k! * (t-1)^k` *distinct* sets of size at most `k`
//! ([`sunflower_bound`]); with duplicated sets no such guarantee exists.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::boolalg::{AlgebraError, Elt, FinCBA};

/// Largest number of ground cells (assignment space `2^g`).
pub const MAX_GROUND_CELLS: usize = 12;
/// Largest ground for full condition enumeration (`3^g` conditions).
pub const MAX_DENSITY_GROUND: usize = 8;
/// Largest ground whose assignment powerset fits a [`FinCBA`].
pub const MAX_ALGEBRA_GROUND: usize = 4;
/// Largest set family accepted by [`delta_extract`].
pub const MAX_FAMILY: usize = 4096;

#[derive(Debug, Error)]
pub enum CombinatoricsError {
    #[error("size guard: {what} limited to {limit}, got {got}")]
    Guard {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("cell ({0}, {1}) is pinned both ways")]
    Overlap(u32, u32),
    #[error("cell ({0}, {1}) is outside the ground")]
    OutsideGround(u32, u32),
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

type Result<T> = std::result::Result<T, CombinatoricsError>;

// ---------------------------------------------------------------------------
// Conditions.

/// A finite partial 0/1 assignment on cells; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CohenCondition {
    ins: BTreeSet<(u32, u32)>,
    out: BTreeSet<(u32, u32)>,
}

impl CohenCondition {
    pub fn empty() -> CohenCondition {
        CohenCondition {
            ins: BTreeSet::new(),
            out: BTreeSet::new(),
        }
    }

    /// Builds a condition; the two parts must not overlap.
    pub fn new(ins: BTreeSet<(u32, u32)>, out: BTreeSet<(u32, u32)>) -> Result<CohenCondition> {
        if let Some(&(r, c)) = ins.intersection(&out).next() {
            return Err(CombinatoricsError::Overlap(r, c));
        }
        Ok(CohenCondition { ins, out })
    }

    pub fn ins(&self) -> &BTreeSet<(u32, u32)> {
        &self.ins
    }

    pub fn out(&self) -> &BTreeSet<(u32, u32)> {
        &self.out
    }

    pub fn is_empty(&self) -> bool {
        self.ins.is_empty() && self.out.is_empty()
    }

    /// Cells mentioned either way.
    pub fn domain(&self) -> BTreeSet<(u32, u32)> {
        self.ins.union(&self.out).copied().collect()
    }

    /// Compatible when no cell is pinned to 1 by one side and 0 by the
    /// other; exactly then do the two conditions have a common extension.
    pub fn is_compatible(&self, other: &CohenCondition) -> bool {
        self.ins.is_disjoint(&other.out) && self.out.is_disjoint(&other.ins)
    }

    /// The least common extension, when compatible.
    pub fn union(&self, other: &CohenCondition) -> Option<CohenCondition> {
        if !self.is_compatible(other) {
            return None;
        }
        Some(CohenCondition {
            ins: self.ins.union(&other.ins).copied().collect(),
            out: self.out.union(&other.out).copied().collect(),
        })
    }

    /// Does `self` extend (strengthen) `other`?
    pub fn extends(&self, other: &CohenCondition) -> bool {
        other.ins.is_subset(&self.ins) && other.out.is_subset(&self.out)
    }

    /// One-line rendering: `+r,c` for pinned-to-1 cells, `-r,c` for
    /// pinned-to-0, each part in ascending order; the empty condition is
    /// the word `empty`.
    pub fn to_line(&self) -> String {
        if self.is_empty() {
            return "empty".to_string();
        }
        let mut words: Vec<String> = self.ins.iter().map(|(r, c)| format!("+{r},{c}")).collect();
        words.extend(self.out.iter().map(|(r, c)| format!("-{r},{c}")));
        words.join(" ")
    }

    pub fn parse_line(line: &str) -> Result<CohenCondition> {
        let malformed = |detail: String| CombinatoricsError::Malformed {
            what: "condition",
            detail,
        };
        let mut ins = BTreeSet::new();
        let mut out = BTreeSet::new();
        for word in line.split_whitespace() {
            if word == "empty" {
                continue;
            }
            let (positive, cell) = match (word.strip_prefix('+'), word.strip_prefix('-')) {
                (Some(cell), _) => (true, cell),
                (_, Some(cell)) => (false, cell),
                _ => return Err(malformed(format!("token `{word}` must start with + or -"))),
            };
            let (r, c) = cell
                .split_once(',')
                .and_then(|(r, c)| Some((r.parse::<u32>().ok()?, c.parse::<u32>().ok()?)))
                .ok_or_else(|| malformed(format!("cell `{word}`")))?;
            if positive {
                ins.insert((r, c));
            } else {
                out.insert((r, c));
            }
        }
        CohenCondition::new(ins, out)
    }
}

impl std::fmt::Display for CohenCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_line())
    }
}

/// Parses one condition per line; blank and `--` lines are skipped.
pub fn conditions_from_text(text: &str) -> Result<Vec<CohenCondition>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with("--"))
        .map(CohenCondition::parse_line)
        .collect()
}

// ---------------------------------------------------------------------------
// Grounds and denotations.

/// An ordered finite set of cells; total assignments are bitmasks over
/// cell positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohenGround {
    cells: Vec<(u32, u32)>,
}

impl CohenGround {
    pub fn new(mut cells: Vec<(u32, u32)>) -> Result<CohenGround> {
        cells.sort_unstable();
        cells.dedup();
        if cells.len() > MAX_GROUND_CELLS {
            return Err(CombinatoricsError::Guard {
                what: "ground cells",
                limit: MAX_GROUND_CELLS,
                got: cells.len(),
            });
        }
        Ok(CohenGround { cells })
    }

    /// The ground of cells `(0,0) .. (0,n-1)`.
    pub fn line(n: usize) -> Result<CohenGround> {
        CohenGround::new((0..n as u32).map(|c| (0, c)).collect())
    }

    pub fn cells(&self) -> &[(u32, u32)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn position(&self, cell: (u32, u32)) -> Option<usize> {
        self.cells.binary_search(&cell).ok()
    }

    /// Number of total assignments, `2^len`.
    pub fn assignments(&self) -> usize {
        1 << self.cells.len()
    }

    /// All `3^len` conditions over this ground, in a fixed order: each
    /// cell is unset/pinned-1/pinned-0, the first cell varying slowest.
    pub fn all_conditions(&self) -> Result<Vec<CohenCondition>> {
        if self.cells.len() > MAX_DENSITY_GROUND {
            return Err(CombinatoricsError::Guard {
                what: "condition enumeration ground",
                limit: MAX_DENSITY_GROUND,
                got: self.cells.len(),
            });
        }
        let g = self.cells.len();
        let count = 3usize.pow(g as u32);
        let mut conditions = Vec::with_capacity(count);
        for k in 0..count {
            let mut ins = BTreeSet::new();
            let mut out = BTreeSet::new();
            for (i, &cell) in self.cells.iter().enumerate() {
                match (k / 3usize.pow((g - 1 - i) as u32)) % 3 {
                    0 => {}
                    1 => {
                        ins.insert(cell);
                    }
                    _ => {
                        out.insert(cell);
                    }
                }
            }
            conditions.push(CohenCondition { ins, out });
        }
        Ok(conditions)
    }
}

/// A set of total assignments over a ground, as a bitset indexed by
/// assignment mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    ground: usize,
    bits: Vec<u64>,
}

impl SubsetFamily {
    pub fn empty(ground: usize) -> SubsetFamily {
        let words = (1usize << ground).div_ceil(64);
        SubsetFamily {
            ground,
            bits: vec![0; words.max(1)],
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn insert(&mut self, assignment: u32) {
        let i = assignment as usize;
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, assignment: u32) -> bool {
        let i = assignment as usize;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn intersect(&self, other: &SubsetFamily) -> SubsetFamily {
        assert_eq!(self.ground, other.ground, "grounds differ");
        SubsetFamily {
            ground: self.ground,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &SubsetFamily) -> bool {
        self.intersect(other).is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..1u32 << self.ground).filter(move |&a| self.contains(a))
    }

    /// The corresponding element of the powerset algebra over the
    /// assignment set; requires `algebra = powerset(2^ground)`.
    pub fn to_algebra_elt(&self, algebra: &FinCBA) -> Result<Elt> {
        if self.ground > MAX_ALGEBRA_GROUND {
            return Err(CombinatoricsError::Guard {
                what: "algebra embedding ground",
                limit: MAX_ALGEBRA_GROUND,
                got: self.ground,
            });
        }
        let mut mask = 0u32;
        for a in self.iter() {
            mask |= 1 << a;
        }
        Ok(algebra.element_from_mask(mask)?)
    }
}

/// The denotation of a condition: all total assignments extending it.
/// Every cell the condition mentions must lie in the ground.
pub fn iota(ground: &CohenGround, p: &CohenCondition) -> Result<SubsetFamily> {
    let mut ins_mask = 0u32;
    for &cell in &p.ins {
        let pos = ground
            .position(cell)
            .ok_or(CombinatoricsError::OutsideGround(cell.0, cell.1))?;
        ins_mask |= 1 << pos;
    }
    let mut out_mask = 0u32;
    for &cell in &p.out {
        let pos = ground
            .position(cell)
            .ok_or(CombinatoricsError::OutsideGround(cell.0, cell.1))?;
        out_mask |= 1 << pos;
    }
    let mut family = SubsetFamily::empty(ground.len());
    for a in 0..ground.assignments() as u32 {
        if a & ins_mask == ins_mask && a & out_mask == 0 {
            family.insert(a);
        }
    }
    Ok(family)
}

/// Outcome of [`density_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub ground: usize,
    pub conditions: usize,
    /// Every condition denotes a nonempty assignment family.
    pub all_nonzero: bool,
    /// Every single-assignment family is the denotation of some condition.
    pub atoms_covered: bool,
    /// The image of `iota` is dense in the powerset of assignments.
    pub dense: bool,
    /// Independent verdict through [`FinCBA::is_dense_suborder`], when the
    /// assignment powerset fits an algebra.
    pub algebra_cross_check: Option<bool>,
}

/// Checks that the conditions' denotations are dense in the powerset of
/// total assignments.
///
/// Density reduces exactly to two finite facts: every condition denotes a
/// nonempty family, and every singleton family is hit (it is the
/// denotation of the total condition pinning every cell). Any nonempty
/// family then contains a singleton, hence sits above a denotation. For
/// small grounds the generic dense-suborder decision procedure reruns the
/// question inside a [`FinCBA`] and must agree.
pub fn density_check(ground: &CohenGround) -> Result<DensityReport> {
    let conditions = ground.all_conditions()?;
    let mut all_nonzero = true;
    let mut image: Vec<SubsetFamily> = Vec::with_capacity(conditions.len());
    for p in &conditions {
        let fam = iota(ground, p)?;
        if fam.is_empty() {
            all_nonzero = false;
        }
        image.push(fam);
    }
    let atoms_covered = (0..ground.assignments() as u32)
        .all(|a| image.iter().any(|fam| fam.count() == 1 && fam.contains(a)));
    let dense = all_nonzero && atoms_covered;
    let algebra_cross_check = if ground.len() <= MAX_ALGEBRA_GROUND {
        let algebra = FinCBA::powerset(ground.assignments())?;
        let elts: Vec<Elt> = image
            .iter()
            .map(|fam| fam.to_algebra_elt(&algebra))
            .collect::<Result<_>>()?;
        let verdict = algebra.is_dense_suborder(&elts);
        assert_eq!(
            verdict, dense,
            "algebra dense-suborder check disagrees with the finite reduction"
        );
        Some(verdict)
    } else {
        None
    };
    Ok(DensityReport {
        ground: ground.len(),
        conditions: conditions.len(),
        all_nonzero,
        atoms_covered,
        dense,
        algebra_cross_check,
    })
}

// ---------------------------------------------------------------------------
// Delta systems.

/// A list of finite sets of naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    sets: Vec<BTreeSet<u32>>,
}

impl SetFamily {
    pub fn new(sets: Vec<BTreeSet<u32>>) -> SetFamily {
        SetFamily { sets }
    }

    pub fn sets(&self) -> &[BTreeSet<u32>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// One set per line as ascending space-separated naturals. An empty
    /// line (other than comments starting with `--`) is the empty set, so
    /// files are written without trailing blank lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for set in &self.sets {
            let words: Vec<String> = set.iter().map(u32::to_string).collect();
            out.push_str(&words.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SetFamily> {
        let mut sets = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.starts_with("--") {
                continue;
            }
            let set: BTreeSet<u32> = line
                .split_whitespace()
                .map(|w| {
                    w.parse::<u32>().map_err(|_| CombinatoricsError::Malformed {
                        what: "set family",
                        detail: format!("bad element `{w}`"),
                    })
                })
                .collect::<Result<_>>()?;
            sets.push(set);
        }
        Ok(SetFamily::new(sets))
    }
}

/// A delta system found inside a family: indices into the original family
/// whose sets pairwise intersect in exactly `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSystem {
    pub indices: Vec<usize>,
    pub root: BTreeSet<u32>,
}

/// The guarantee threshold: any family of **more than** `k! * (t-1)^k`
/// distinct sets, each of size at most `k`, contains a delta system of
/// size `t`. `None` on overflow.
pub fn sunflower_bound(k: usize, t: usize) -> Option<usize> {
    if t == 0 {
        return Some(0);
    }
    let mut bound = 1usize;
    for i in 1..=k {
        bound = bound.checked_mul(i)?;
    }
    for _ in 0..k {
        bound = bound.checked_mul(t - 1)?;
    }
    Some(bound)
}

/// Verifies a delta-system claim: all pairwise intersections of the
/// selected sets equal one root, returned. Fewer than two sets are
/// vacuously a delta system with empty root.
pub fn is_delta_system(family: &SetFamily, indices: &[usize]) -> Option<BTreeSet<u32>> {
    if indices.len() < 2 {
        return Some(BTreeSet::new());
    }
    let sets = family.sets();
    let root: BTreeSet<u32> = sets[indices[0]]
        .intersection(&sets[indices[1]])
        .copied()
        .collect();
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a + 1..] {
            let inter: BTreeSet<u32> = sets[i].intersection(&sets[j]).copied().collect();
            if inter != root {
                return None;
            }
        }
    }
    Some(root)
}

/// Searches for a delta system of `target` sets.
///
/// The classical recursion runs first: a maximal pairwise-disjoint
/// subfamily (in index order) either reaches the target with empty root,
/// or every set meets its union, and the search recurses through the
/// most frequent element (ties to the smallest), which joins the root.
/// Success down that path is guaranteed for more than
/// [`sunflower_bound`]`(k, target)` distinct sets of size at most `k`;
/// duplicates void the guarantee.
///
/// Below the guarantee the recursion can miss sparse systems, so when it
/// comes up empty and the number of candidate subfamilies is small, a
/// complete backtracking search settles the answer. `None` is therefore
/// definitive whenever `C(len, target)` stays within a fixed budget (all
/// families of at most a few hundred sets for small targets); past the
/// budget it only means the extraction heuristic failed.
pub fn delta_extract(family: &SetFamily, target: usize) -> Result<Option<DeltaSystem>> {
    if family.len() > MAX_FAMILY {
        return Err(CombinatoricsError::Guard {
            what: "set family",
            limit: MAX_FAMILY,
            got: family.len(),
        });
    }
    if target == 0 {
        return Ok(Some(DeltaSystem {
            indices: Vec::new(),
            root: BTreeSet::new(),
        }));
    }
    let indices: Vec<usize> = (0..family.len()).collect();
    let sets: Vec<BTreeSet<u32>> = family.sets().to_vec();
    let found = extract_rec(&indices, &sets, target).or_else(|| {
        if subsets_within_budget(sets.len(), target, MAX_EXHAUSTIVE_SUBSETS) {
            exhaustive_extract(&sets, target)
        } else {
            None
        }
    });
    if let Some(system) = &found {
        let root = is_delta_system(family, &system.indices)
            .expect("extracted subfamily is a delta system");
        assert!(
            system.indices.len() < 2 || root == system.root,
            "extracted root disagrees with pairwise intersections"
        );
    }
    Ok(found)
}

const MAX_EXHAUSTIVE_SUBSETS: u128 = 1_000_000;

/// Whether `C(n, t) <= budget`, without overflowing on the way.
fn subsets_within_budget(n: usize, t: usize, budget: u128) -> bool {
    if t > n {
        return true; // zero subsets
    }
    let k = t.min(n - t);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return false,
        };
        if acc > budget {
            return false;
        }
    }
    true
}

/// Complete search: grows an index-increasing selection, pruning as soon
/// as a new set breaks the shared pairwise intersection.
fn exhaustive_extract(sets: &[BTreeSet<u32>], target: usize) -> Option<DeltaSystem> {
    fn grow(sets: &[BTreeSet<u32>], start: usize, chosen: &mut Vec<usize>, target: usize) -> bool {
        if chosen.len() == target {
            return true;
        }
        if sets.len() - start < target - chosen.len() {
            return false;
        }
        for i in start..sets.len() {
            let consistent = if chosen.len() < 2 {
                true
            } else {
                let root: BTreeSet<u32> = sets[chosen[0]]
                    .intersection(&sets[chosen[1]])
                    .copied()
                    .collect();
                chosen.iter().all(|&j| {
                    sets[j]
                        .intersection(&sets[i])
                        .copied()
                        .collect::<BTreeSet<u32>>()
                        == root
                })
            };
            // A two-element selection is always consistent: the root is,
            // by definition, whatever the first pair intersects in.
            if consistent {
                chosen.push(i);
                if grow(sets, i + 1, chosen, target) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::new();
    if grow(sets, 0, &mut chosen, target) {
        let root = if chosen.len() < 2 {
            BTreeSet::new()
        } else {
            sets[chosen[0]]
                .intersection(&sets[chosen[1]])
                .copied()
                .collect()
        };
        Some(DeltaSystem {
            indices: chosen,
            root,
        })
    } else {
        None
    }
}

fn extract_rec(indices: &[usize], sets: &[BTreeSet<u32>], target: usize) -> Option<DeltaSystem> {
    // Maximal disjoint subfamily, greedily in index order.
    let mut chosen: Vec<usize> = Vec::new();
    let mut used: BTreeSet<u32> = BTreeSet::new();
    for &i in indices {
        if sets[i].is_disjoint(&used) {
            chosen.push(i);
            used.extend(sets[i].iter().copied());
        }
    }
    if chosen.len() >= target {
        chosen.truncate(target);
        return Some(DeltaSystem {
            indices: chosen,
            root: BTreeSet::new(),
        });
    }
    // Every set meets `used`; recurse through the most frequent element.
    let mut best: Option<(usize, u32)> = None; // (count, element)
    for &x in &used {
        let count = indices.iter().filter(|&&i| sets[i].contains(&x)).count();
        let better = match best {
            None => true,
            Some((c, e)) => count > c || (count == c && x < e),
        };
        if better {
            best = Some((count, x));
        }
    }
    let (_, x) = best?;
    let containing: Vec<usize> = indices
        .iter()
        .copied()
        .filter(|&i| sets[i].contains(&x))
        .collect();
    let mut reduced = sets.to_vec();
    for &i in &containing {
        reduced[i].remove(&x);
    }
    let mut system = extract_rec(&containing, &reduced, target)?;
    system.root.insert(x);
    Some(system)
}
