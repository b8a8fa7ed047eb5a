//! Bounded exhaustive enumeration of terms, formulas and finite sets.
//!
//! These generators back the test harnesses: exhaustive small universes make
//! good oracles because a property checked over *every* object of size ≤ n
//! needs no sampling argument. Sizes count de Bruijn constructors (the
//! [`crate::syntax::Term::size`] convention), so budgets translate directly
//! into term depth.

use std::collections::HashMap;
use std::sync::Arc;

use crate::boolalg::FinCBA;
use crate::sets::{BSet, PSet, SetsError};
use crate::syntax::{Formula, Language, Term};

/// All terms over `lang` of size at most `max_size` whose free variables are
/// below `free_bound`, in increasing size order.
pub fn terms(lang: &Language, free_bound: usize, max_size: usize) -> Vec<Term> {
    let mut memo = HashMap::new();
    let mut out = Vec::new();
    for size in 1..=max_size {
        out.extend_from_slice(terms_exact(lang, free_bound, size, &mut memo));
    }
    out
}

type TermMemo = HashMap<(usize, usize), Vec<Term>>;

fn terms_exact<'a>(
    lang: &Language,
    free: usize,
    size: usize,
    memo: &'a mut TermMemo,
) -> &'a [Term] {
    if !memo.contains_key(&(free, size)) {
        let mut out = Vec::new();
        if size == 1 {
            for i in 0..free {
                out.push(Term::var(i));
            }
            for sym in lang.function_symbols() {
                if sym.arity() == 0 {
                    out.push(Term::constant(sym).expect("arity-0 symbol"));
                }
            }
        } else {
            // An application of an arity-k symbol costs 1 for the head plus
            // (1 + size of the argument) per argument.
            for sym in lang.function_symbols() {
                let k = sym.arity();
                if k == 0 {
                    continue;
                }
                let budget = match size.checked_sub(1 + k) {
                    Some(b) if b >= k => b,
                    _ => continue,
                };
                for split in compositions(budget, k) {
                    let mut arg_lists: Vec<Vec<Term>> = Vec::with_capacity(k);
                    for &s in &split {
                        arg_lists.push(terms_exact(lang, free, s, memo).to_vec());
                    }
                    product_visit(&arg_lists, &mut |args| {
                        out.push(Term::apply(sym, args.to_vec()).expect("arity checked"));
                    });
                }
            }
        }
        memo.insert((free, size), out);
    }
    &memo[&(free, size)]
}

/// All formulas over `lang` of size at most `max_size` whose free variables
/// are below `free_bound`, in increasing size order. Quantified subformulas
/// get one extra variable, so requesting `free_bound = 0` enumerates
/// sentences (closed by construction).
pub fn formulas(lang: &Language, free_bound: usize, max_size: usize) -> Vec<Formula> {
    let mut term_memo = HashMap::new();
    let mut memo = HashMap::new();
    let mut out = Vec::new();
    for size in 1..=max_size {
        out.extend_from_slice(formulas_exact(
            lang,
            free_bound,
            size,
            &mut memo,
            &mut term_memo,
        ));
    }
    out
}

type FormulaMemo = HashMap<(usize, usize), Vec<Formula>>;

fn formulas_exact<'a>(
    lang: &Language,
    free: usize,
    size: usize,
    memo: &'a mut FormulaMemo,
    term_memo: &mut TermMemo,
) -> &'a [Formula] {
    if !memo.contains_key(&(free, size)) {
        let mut out = Vec::new();
        if size == 1 {
            out.push(Formula::falsum());
            for sym in lang.relation_symbols() {
                if sym.arity() == 0 {
                    out.push(Formula::rel_app(sym, vec![]).expect("arity-0 symbol"));
                }
            }
        }
        // Equalities: 1 + |t1| + |t2|.
        if let Some(budget) = size.checked_sub(3) {
            for split in compositions(budget + 2, 2) {
                let lefts = terms_exact(lang, free, split[0], term_memo).to_vec();
                let rights = terms_exact(lang, free, split[1], term_memo).to_vec();
                for l in &lefts {
                    for r in &rights {
                        out.push(Formula::equal(l.clone(), r.clone()));
                    }
                }
            }
        }
        // Relation applications: 1 for the head plus (1 + |arg|) each.
        for sym in lang.relation_symbols() {
            let k = sym.arity();
            if k == 0 {
                continue;
            }
            let budget = match size.checked_sub(1 + k) {
                Some(b) if b >= k => b,
                _ => continue,
            };
            for split in compositions(budget, k) {
                let mut arg_lists: Vec<Vec<Term>> = Vec::with_capacity(k);
                for &s in &split {
                    arg_lists.push(terms_exact(lang, free, s, term_memo).to_vec());
                }
                product_visit(&arg_lists, &mut |args| {
                    out.push(Formula::rel_app(sym, args.to_vec()).expect("arity checked"));
                });
            }
        }
        // Implications: 1 + |a| + |b|.
        if let Some(budget) = size.checked_sub(3) {
            for split in compositions(budget + 2, 2) {
                let lefts = formulas_exact(lang, free, split[0], memo, term_memo).to_vec();
                let rights = formulas_exact(lang, free, split[1], memo, term_memo).to_vec();
                for l in &lefts {
                    for r in &rights {
                        out.push(Formula::imp(l.clone(), r.clone()));
                    }
                }
            }
        }
        // Quantifiers: 1 + |body|, with one more variable in scope.
        if size >= 2 {
            let bodies = formulas_exact(lang, free + 1, size - 1, memo, term_memo).to_vec();
            for body in bodies {
                out.push(Formula::all(body));
            }
        }
        memo.insert((free, size), out);
    }
    &memo[&(free, size)]
}

/// All ways to write `total` as an ordered sum of `parts` positive numbers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut current = vec![0usize; parts];
    fn rec(total: usize, index: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let parts = current.len();
        if index == parts - 1 {
            if total >= 1 {
                current[index] = total;
                out.push(current.clone());
            }
            return;
        }
        let remaining_min = parts - index - 1;
        for value in 1..=total.saturating_sub(remaining_min) {
            current[index] = value;
            rec(total - value, index + 1, current, out);
        }
    }
    rec(total, 0, &mut current, &mut out);
    out
}

/// Visits the cartesian product of the given lists.
fn product_visit<T: Clone>(lists: &[Vec<T>], visit: &mut impl FnMut(&[T])) {
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let mut indices = vec![0usize; lists.len()];
    loop {
        let row: Vec<T> = indices
            .iter()
            .zip(lists)
            .map(|(&i, list)| list[i].clone())
            .collect();
        visit(&row);
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < lists[pos].len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}

/// All hereditarily finite sets of rank at most `rank` in which every node
/// has at most `width` children, canonically ordered and duplicate-free.
/// The universe at each rank contains all lower ranks.
pub fn psets(rank: usize, width: usize) -> Vec<PSet> {
    let mut universe = vec![PSet::empty()];
    for _ in 0..rank {
        universe = subsets_up_to(&universe, width)
            .into_iter()
            .map(PSet::new)
            .collect();
    }
    universe
}

/// All algebra-valued sets of rank at most `rank` with at most `width`
/// entries per node; entry lists are strictly increasing in `(child,
/// weight)` order, so every structural value appears exactly once. Weights
/// range over the whole algebra, including bottom.
pub fn bsets(algebra: &Arc<FinCBA>, rank: usize, width: usize) -> Result<Vec<BSet>, SetsError> {
    let mut universe = vec![BSet::empty(Arc::clone(algebra))];
    for _ in 0..rank {
        let mut candidates: Vec<(BSet, crate::boolalg::Elt)> = Vec::new();
        for child in &universe {
            for w in algebra.elements() {
                candidates.push((child.clone(), w));
            }
        }
        candidates.sort();
        let mut next = Vec::new();
        for entries in subsets_up_to(&candidates, width) {
            next.push(BSet::new(Arc::clone(algebra), entries)?);
        }
        universe = next;
    }
    Ok(universe)
}

/// All topologies on `n` labeled points, for `n ≤ 4`. A topology is a
/// family of subsets containing the empty set and the whole space, closed
/// under pairwise union and intersection (finite case). The counts are the
/// classical ones: 1, 1, 4, 29, 355 for n = 0..4.
pub fn topologies(n: usize) -> Vec<crate::boolalg::FinTopSpace> {
    assert!(n <= 4, "topology enumeration is exponential in 2^n");
    let subsets = 1u32 << n;
    let full: u32 = subsets - 1;
    let mut out = Vec::new();
    // A family of subsets is a bitmask over the 2^n candidate opens.
    for family in 0u64..(1u64 << subsets) {
        if family & 1 == 0 || family & (1u64 << full) == 0 {
            continue; // must contain the empty set and the whole space
        }
        let members: Vec<u32> = (0..subsets)
            .filter(|&s| family & (1u64 << s) != 0)
            .collect();
        let closed = members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| family & (1u64 << (a | b)) != 0 && family & (1u64 << (a & b)) != 0)
        });
        if closed {
            out.push(
                crate::boolalg::FinTopSpace::new(n, members)
                    .expect("closure was checked explicitly"),
            );
        }
    }
    out
}

/// All subsets of `items` (kept in order) with at most `width` elements.
fn subsets_up_to<T: Clone>(items: &[T], width: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..width {
        let mut next_frontier = Vec::new();
        for chosen in &frontier {
            let start = chosen.last().map_or(0, |&i| i + 1);
            for i in start..items.len() {
                let mut extended = chosen.clone();
                extended.push(i);
                out.push(extended.iter().map(|&j| items[j].clone()).collect());
                next_frontier.push(extended);
            }
        }
        frontier = next_frontier;
    }
    out
}
