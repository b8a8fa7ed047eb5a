//! Reusable demo and fuzzing harnesses.
//!
//! This module bundles the fixtures shared by the command-line tool, the
//! examples and the integration tests: a small mixed-arity language, a
//! twelve-case derivation suite, a canonical roster of truth-value algebras,
//! seeded generators for valid boolean-valued structures and set families,
//! and the soundness fuzzer that ties them together.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::boolalg::{Elt, FinCBA, FinTopSpace};
use crate::combinatorics::SetFamily;
use crate::corpus;
use crate::proof::{Context, ProofTree};
use crate::semantics::BStructure;
use crate::syntax::{Formula, Language, Term};

/// The language used by the fuzzing harnesses: propositional letters
/// `a, b, c`, a unary relation `R`, a constant `k` and a unary function `s`.
pub fn fuzz_language() -> &'static Language {
    static LANG: OnceLock<Language> = OnceLock::new();
    LANG.get_or_init(|| {
        Language::new(
            vec![("k", 0), ("s", 1)],
            vec![("a", 0), ("b", 0), ("c", 0), ("R", 1)],
        )
        .expect("the fuzzing language is well formed")
    })
}

fn prop(name: &str) -> Formula {
    let sym = fuzz_language()
        .relation(name)
        .expect("propositional letter exists");
    Formula::rel_app(sym, vec![]).expect("arity 0")
}

fn r_of(t: Term) -> Formula {
    let sym = fuzz_language()
        .relation("R")
        .expect("unary relation exists");
    Formula::rel_app(sym, vec![t]).expect("arity 1")
}

fn k_const() -> Term {
    Term::constant(fuzz_language().function("k").expect("constant exists")).expect("arity 0")
}

fn s_of(t: Term) -> Term {
    Term::apply(
        fuzz_language()
            .function("s")
            .expect("unary function exists"),
        vec![t],
    )
    .expect("arity 1")
}

/// A named derivation together with its context and goal.
#[derive(Debug, Clone)]
pub struct ProofCase {
    pub name: &'static str,
    pub context: Context,
    pub goal: Formula,
    pub tree: ProofTree,
}

/// Twelve valid derivations exercising every rule of the kernel: the
/// propositional combinators, the hypothetical syllogism, classical
/// double-negation elimination, quantifier introduction/elimination,
/// reflexivity and rewriting of equality, and the encoded connectives.
pub fn proof_suite() -> Vec<ProofCase> {
    let (a, b, c) = (prop("a"), prop("b"), prop("c"));
    let ctx =
        |formulas: &[&Formula]| -> Context { formulas.iter().map(|f| (*f).clone()).collect() };
    let mut cases = Vec::new();

    cases.push(ProofCase {
        name: "identity",
        context: Context::new(),
        goal: Formula::imp(a.clone(), a.clone()),
        tree: ProofTree::imp_i(a.clone(), ProofTree::axm(a.clone())),
    });

    cases.push(ProofCase {
        name: "weakened_axiom",
        context: ctx(&[&a, &b]),
        goal: a.clone(),
        tree: ProofTree::axm(a.clone()),
    });

    cases.push(ProofCase {
        name: "const_k",
        context: Context::new(),
        goal: Formula::imp(a.clone(), Formula::imp(b.clone(), a.clone())),
        tree: ProofTree::imp_i(
            a.clone(),
            ProofTree::imp_i(b.clone(), ProofTree::axm(a.clone())),
        ),
    });

    {
        let abc = Formula::imp(a.clone(), Formula::imp(b.clone(), c.clone()));
        let ab = Formula::imp(a.clone(), b.clone());
        let bc_proof = ProofTree::imp_e(
            a.clone(),
            ProofTree::axm(abc.clone()),
            ProofTree::axm(a.clone()),
        );
        let b_proof = ProofTree::imp_e(
            a.clone(),
            ProofTree::axm(ab.clone()),
            ProofTree::axm(a.clone()),
        );
        let inner = ProofTree::imp_e(b.clone(), bc_proof, b_proof);
        cases.push(ProofCase {
            name: "subst_s",
            context: Context::new(),
            goal: Formula::imp(
                abc.clone(),
                Formula::imp(ab.clone(), Formula::imp(a.clone(), c.clone())),
            ),
            tree: ProofTree::imp_i(
                abc,
                ProofTree::imp_i(ab, ProofTree::imp_i(a.clone(), inner)),
            ),
        });
    }

    {
        let ab = Formula::imp(a.clone(), b.clone());
        let bc = Formula::imp(b.clone(), c.clone());
        cases.push(ProofCase {
            name: "syllogism",
            context: ctx(&[&ab, &bc]),
            goal: Formula::imp(a.clone(), c.clone()),
            tree: ProofTree::imp_i(
                a.clone(),
                ProofTree::imp_e(
                    b.clone(),
                    ProofTree::axm(bc.clone()),
                    ProofTree::imp_e(
                        a.clone(),
                        ProofTree::axm(ab.clone()),
                        ProofTree::axm(a.clone()),
                    ),
                ),
            ),
        });
    }

    {
        let not_a = a.clone().not();
        let nn_a = not_a.clone().not();
        cases.push(ProofCase {
            name: "double_negation",
            context: ctx(&[&nn_a]),
            goal: a.clone(),
            tree: ProofTree::falsum_e(
                a.clone(),
                ProofTree::imp_e(
                    not_a.clone(),
                    ProofTree::axm(nn_a.clone()),
                    ProofTree::axm(not_a.clone()),
                ),
            ),
        });
    }

    cases.push(ProofCase {
        name: "universal_reflexivity",
        context: Context::new(),
        goal: Formula::all(Formula::equal(Term::var(0), Term::var(0))),
        tree: ProofTree::all_i(ProofTree::ref_(Term::var(0))),
    });

    {
        let body = r_of(Term::var(0));
        let all_r = Formula::all(body.clone());
        cases.push(ProofCase {
            name: "instantiation",
            context: ctx(&[&all_r]),
            goal: r_of(k_const()),
            tree: ProofTree::all_e(body, k_const(), ProofTree::axm(all_r.clone())),
        });
    }

    {
        let eq = Formula::equal(k_const(), s_of(k_const()));
        let rk = r_of(k_const());
        cases.push(ProofCase {
            name: "equality_rewrite",
            context: ctx(&[&eq, &rk]),
            goal: r_of(s_of(k_const())),
            tree: ProofTree::subst2(
                k_const(),
                s_of(k_const()),
                r_of(Term::var(0)),
                ProofTree::axm(eq.clone()),
                ProofTree::axm(rk.clone()),
            ),
        });
    }

    {
        // exists x. x = x, encoded as not (forall x. not (x = x)).
        let refl = Formula::equal(Term::var(0), Term::var(0));
        let all_not = Formula::all(refl.clone().not());
        let k_eq = Formula::equal(k_const(), k_const());
        cases.push(ProofCase {
            name: "existential_reflexivity",
            context: Context::new(),
            goal: refl.ex(),
            tree: ProofTree::imp_i(
                all_not.clone(),
                ProofTree::imp_e(
                    k_eq.clone(),
                    ProofTree::all_e(
                        Formula::equal(Term::var(0), Term::var(0)).not(),
                        k_const(),
                        ProofTree::axm(all_not),
                    ),
                    ProofTree::ref_(k_const()),
                ),
            ),
        });
    }

    {
        // a, b ⊢ a and b; the conjunction unfolds to
        // (not (not a) -> not b) -> false.
        let not_a = a.clone().not();
        let nn_a = not_a.clone().not();
        let not_b = b.clone().not();
        let premise = Formula::imp(nn_a.clone(), not_b.clone());
        let nn_a_proof = ProofTree::imp_i(
            not_a.clone(),
            ProofTree::imp_e(
                a.clone(),
                ProofTree::axm(not_a.clone()),
                ProofTree::axm(a.clone()),
            ),
        );
        cases.push(ProofCase {
            name: "conjunction_intro",
            context: ctx(&[&a, &b]),
            goal: a.clone().and(b.clone()),
            tree: ProofTree::imp_i(
                premise.clone(),
                ProofTree::imp_e(
                    b.clone(),
                    ProofTree::imp_e(nn_a, ProofTree::axm(premise), nn_a_proof),
                    ProofTree::axm(b.clone()),
                ),
            ),
        });
    }

    {
        // a ⊢ a or b, i.e. not a -> b.
        let not_a = a.clone().not();
        cases.push(ProofCase {
            name: "disjunction_intro_left",
            context: ctx(&[&a]),
            goal: a.clone().or(b.clone()),
            tree: ProofTree::imp_i(
                not_a.clone(),
                ProofTree::falsum_e(
                    b.clone(),
                    ProofTree::imp_e(a.clone(), ProofTree::axm(not_a), ProofTree::axm(a.clone())),
                ),
            ),
        });
    }

    cases
}

/// The canonical truth-value algebras used by the fuzzer and the demos:
/// three powerset algebras and two regular-open algebras — a three-point
/// space whose only nontrivial join glues two opens, and a four-point space
/// partitioned into clopen blocks.
pub fn algebra_suite() -> Vec<(String, Arc<FinCBA>)> {
    let mut suite = Vec::new();
    for n in 1..=3 {
        suite.push((
            format!("powerset_{n}"),
            Arc::new(FinCBA::powerset(n).expect("small powerset algebra")),
        ));
    }
    let glued = FinTopSpace::new(3, vec![0b000, 0b001, 0b010, 0b011, 0b111])
        .expect("three-point space is a topology");
    suite.push((
        "ro_three_point".to_string(),
        Arc::new(FinCBA::regular_open(glued).expect("regular-open algebra")),
    ));
    let blocks = [0b0001u32, 0b0010, 0b1100];
    let opens: Vec<u32> = (0u32..8)
        .map(|mask| {
            (0..3)
                .filter(|i| mask & (1 << i) != 0)
                .fold(0u32, |acc, i| acc | blocks[i])
        })
        .collect();
    let clopen = FinTopSpace::new(4, opens).expect("clopen-block space is a topology");
    suite.push((
        "ro_four_point_blocks".to_string(),
        Arc::new(FinCBA::regular_open(clopen).expect("regular-open algebra")),
    ));
    suite
}

/// How a random structure chooses its boolean-valued equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureRecipe {
    /// Two-valued equality (top on the diagonal, bottom elsewhere); any
    /// function and relation tables are congruent.
    DiscreteEquality,
    /// One uniform off-diagonal value `e`; relation tables are closed under
    /// the congruence law by blending in `e ⊓ (join of the base table)`.
    UniformEquality,
}

/// Builds a random structure that is valid by construction: its equality
/// laws and congruence properties hold for the chosen recipe.
pub fn random_structure(
    language: &Language,
    algebra: &Arc<FinCBA>,
    carrier: usize,
    recipe: StructureRecipe,
    rng: &mut ChaCha8Rng,
) -> BStructure {
    let mut structure = BStructure::new(language.clone(), Arc::clone(algebra), carrier)
        .expect("carrier within bounds");
    let size = algebra.carrier_size();
    for sym in language.function_symbols() {
        let len = carrier.pow(sym.arity() as u32);
        let table: Vec<usize> = (0..len).map(|_| rng.gen_range(0..carrier)).collect();
        structure
            .set_function(language.function_name(sym), table)
            .expect("table matches arity");
    }
    let uniform = match recipe {
        StructureRecipe::DiscreteEquality => None,
        StructureRecipe::UniformEquality => {
            let e = algebra
                .element(rng.gen_range(0..size))
                .expect("index in range");
            let mut eq_table = Vec::with_capacity(carrier * carrier);
            for x in 0..carrier {
                for y in 0..carrier {
                    let v = if x == y { algebra.top() } else { e };
                    eq_table.push(v.index());
                }
            }
            structure
                .set_equality(eq_table)
                .expect("table matches carrier");
            Some(e)
        }
    };
    for sym in language.relation_symbols() {
        let len = carrier.pow(sym.arity() as u32);
        let base: Vec<Elt> = (0..len)
            .map(|_| {
                algebra
                    .element(rng.gen_range(0..size))
                    .expect("index in range")
            })
            .collect();
        let table: Vec<usize> = match uniform {
            None => base.iter().map(|v| v.index()).collect(),
            Some(e) => {
                // Closing under congruence: e ⊓ R(x̄) must not exceed R(ȳ),
                // so blend the same slack e ⊓ ⨆ base into every entry.
                let sup = algebra.sup(base.iter().copied());
                let slack = algebra.meet(e, sup);
                base.iter()
                    .map(|v| algebra.join(*v, slack).index())
                    .collect()
            }
        };
        structure
            .set_relation(language.relation_name(sym), table)
            .expect("table matches arity");
    }
    structure
}

/// The two-element true-membership structure: carrier `{0, 1}` standing for
/// the empty set and the set containing only it, two-valued truth values,
/// honest `in` and `empty`, and best-effort fillers for the remaining
/// function symbols.
pub fn sanity_membership_structure() -> BStructure {
    let algebra = Arc::new(FinCBA::powerset(1).expect("two-element algebra"));
    let bot = algebra.bot().index();
    let top = algebra.top().index();
    let mut s =
        BStructure::new(corpus::set_language().clone(), algebra, 2).expect("carrier within bounds");
    // in(x, y) = top exactly for (0, 1): the empty set is a member of {∅}.
    s.set_relation("in", vec![bot, top, bot, bot])
        .expect("binary relation");
    s.set_function("empty", vec![0]).expect("constant");
    s.set_function("omega", vec![0]).expect("constant");
    s.set_function("pair", vec![0, 0, 0, 0])
        .expect("binary function");
    // P(∅) = {∅}; P({∅}) escapes the carrier, so it is clamped.
    s.set_function("P", vec![1, 1]).expect("unary function");
    s.set_function("U", vec![0, 0]).expect("unary function");
    s.validate().expect("the sanity structure is congruent");
    s
}

/// Result of a soundness fuzzing run; displays as the canonical one-line
/// summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub seed: u64,
    pub trials: usize,
    /// Total (structure, derivation) soundness checks performed.
    pub checked: usize,
    /// Checks where a valid derivation was not forced by its context.
    pub violations: usize,
    /// Names of the violating checks, if any.
    pub failures: Vec<String>,
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seed={} trials={} checked={} violations={}",
            self.seed, self.trials, self.checked, self.violations
        )
    }
}

/// Runs `trials` random soundness experiments: each trial draws an algebra
/// from [`algebra_suite`], a carrier size 1–3 and a recipe, builds a valid
/// structure, validates it, and checks the inf of every proof context
/// against its goal for all twelve derivations of [`proof_suite`].
///
/// The report is fully determined by `seed` and `trials`.
pub fn fuzz_soundness(seed: u64, trials: usize) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suite = algebra_suite();
    let cases = proof_suite();
    let language = fuzz_language();
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let (label, algebra) = &suite[rng.gen_range(0..suite.len())];
        let carrier = rng.gen_range(1..=3usize);
        let recipe = if rng.gen_bool(0.5) {
            StructureRecipe::DiscreteEquality
        } else {
            StructureRecipe::UniformEquality
        };
        let structure = random_structure(language, algebra, carrier, recipe, &mut rng);
        if let Err(e) = structure.validate() {
            failures.push(format!("trial {trial} ({label}): invalid structure: {e}"));
            continue;
        }
        for case in &cases {
            checked += 1;
            match structure.validate_soundness(&case.tree, &case.context, &case.goal) {
                Ok(true) => {}
                Ok(false) => failures.push(format!(
                    "trial {trial} ({label}, carrier {carrier}): context does not force {}",
                    case.name
                )),
                Err(e) => failures.push(format!(
                    "trial {trial} ({label}, carrier {carrier}): {} rejected: {e}",
                    case.name
                )),
            }
        }
    }
    FuzzReport {
        seed,
        trials,
        checked,
        violations: failures.len(),
        failures,
    }
}

/// Draws `count` distinct nonempty sets, each with at most `max_size`
/// elements from `0..universe`. Distinctness keeps the sunflower-extraction
/// guarantee applicable.
pub fn random_set_family(
    rng: &mut ChaCha8Rng,
    count: usize,
    universe: u32,
    max_size: usize,
) -> SetFamily {
    assert!(universe as usize >= max_size.max(1));
    // Refuse unsatisfiable requests instead of spinning: there are only
    // sum of (universe choose s) distinct nonempty sets of size <= max_size.
    let mut available: usize = 0;
    let mut choose: u128 = 1;
    for s in 1..=max_size {
        choose = choose * (universe as u128 - s as u128 + 1) / s as u128;
        available = available.saturating_add(choose.min(usize::MAX as u128) as usize);
        if available >= count {
            break;
        }
    }
    assert!(
        available >= count,
        "only {available} distinct sets of size <= {max_size} exist over {universe} points"
    );
    let mut sets: Vec<std::collections::BTreeSet<u32>> = Vec::with_capacity(count);
    let mut seen = std::collections::BTreeSet::new();
    while sets.len() < count {
        let size = rng.gen_range(1..=max_size);
        let mut set = std::collections::BTreeSet::new();
        while set.len() < size {
            set.insert(rng.gen_range(0..universe));
        }
        if seen.insert(set.clone()) {
            sets.push(set);
        }
    }
    SetFamily::new(sets)
}
