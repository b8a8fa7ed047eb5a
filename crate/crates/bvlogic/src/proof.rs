//! Natural-deduction proof trees and a syntax-directed checker.
//!
//! Trees carry enough annotations that checking is deterministic: each
//! rule either matches the stated goal or fails, no unification needed.
//! [`check`] answers yes/no; [`diagnose`] additionally reports the path to
//! the first failing node. [`provable_search`] is a bounded backward
//! search that returns trees which pass the checker.

use std::collections::BTreeSet;
use std::fmt;

use crate::sexpr::Sexp;
use crate::syntax::{
    formula_from_sexp, formula_to_sexp, term_from_sexp, term_to_sexp, Formula, Language,
    Preformula, SyntaxError, Term,
};

/// A finite set of hypotheses.
pub type Context = BTreeSet<Formula>;

/// Annotated natural-deduction proof tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofTree {
    /// Concludes a hypothesis.
    Axm { formula: Formula },
    /// From `ctx ∪ {antecedent} ⊢ b`, concludes `antecedent -> b`.
    ImpI {
        antecedent: Formula,
        sub: Box<ProofTree>,
    },
    /// From `ctx ⊢ antecedent -> goal` and `ctx ⊢ antecedent`, concludes `goal`.
    ImpE {
        antecedent: Formula,
        imp: Box<ProofTree>,
        arg: Box<ProofTree>,
    },
    /// From `ctx ∪ {not conclusion} ⊢ falsum`, concludes `conclusion`.
    FalsumE {
        conclusion: Formula,
        sub: Box<ProofTree>,
    },
    /// From the lifted context proving the body, concludes `all body`.
    AllI { sub: Box<ProofTree> },
    /// From `ctx ⊢ all body`, concludes `body[witness // 0]`.
    AllE {
        body: Formula,
        witness: Term,
        sub: Box<ProofTree>,
    },
    /// Concludes `term = term`.
    Ref { term: Term },
    /// From `ctx ⊢ from = to` and `ctx ⊢ motive[from // 0]`,
    /// concludes `motive[to // 0]`.
    Subst2 {
        from: Term,
        to: Term,
        motive: Formula,
        eq: Box<ProofTree>,
        sub: Box<ProofTree>,
    },
}

impl ProofTree {
    pub fn axm(formula: Formula) -> ProofTree {
        ProofTree::Axm { formula }
    }
    pub fn imp_i(antecedent: Formula, sub: ProofTree) -> ProofTree {
        ProofTree::ImpI {
            antecedent,
            sub: Box::new(sub),
        }
    }
    pub fn imp_e(antecedent: Formula, imp: ProofTree, arg: ProofTree) -> ProofTree {
        ProofTree::ImpE {
            antecedent,
            imp: Box::new(imp),
            arg: Box::new(arg),
        }
    }
    pub fn falsum_e(conclusion: Formula, sub: ProofTree) -> ProofTree {
        ProofTree::FalsumE {
            conclusion,
            sub: Box::new(sub),
        }
    }
    pub fn all_i(sub: ProofTree) -> ProofTree {
        ProofTree::AllI { sub: Box::new(sub) }
    }
    pub fn all_e(body: Formula, witness: Term, sub: ProofTree) -> ProofTree {
        ProofTree::AllE {
            body,
            witness,
            sub: Box::new(sub),
        }
    }
    pub fn ref_(term: Term) -> ProofTree {
        ProofTree::Ref { term }
    }
    pub fn subst2(
        from: Term,
        to: Term,
        motive: Formula,
        eq: ProofTree,
        sub: ProofTree,
    ) -> ProofTree {
        ProofTree::Subst2 {
            from,
            to,
            motive,
            eq: Box::new(eq),
            sub: Box::new(sub),
        }
    }

    fn rule_name(&self) -> &'static str {
        match self {
            ProofTree::Axm { .. } => "axm",
            ProofTree::ImpI { .. } => "impI",
            ProofTree::ImpE { .. } => "impE",
            ProofTree::FalsumE { .. } => "falsumE",
            ProofTree::AllI { .. } => "allI",
            ProofTree::AllE { .. } => "allE",
            ProofTree::Ref { .. } => "ref",
            ProofTree::Subst2 { .. } => "subst2",
        }
    }
}

/// Location and reason of the first failing rule application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    /// Rule names from the root down to the failing node.
    pub path: Vec<&'static str>,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.path.join(">"), self.reason)
    }
}

impl std::error::Error for CheckFailure {}

/// True iff `tree` is a correct derivation of `ctx ⊢ goal`.
pub fn check(tree: &ProofTree, ctx: &Context, goal: &Formula) -> bool {
    diagnose(tree, ctx, goal).is_ok()
}

/// Like [`check`] but reports the path to the first failure.
pub fn diagnose(tree: &ProofTree, ctx: &Context, goal: &Formula) -> Result<(), CheckFailure> {
    let mut path = Vec::new();
    diagnose_at(tree, ctx, goal, &mut path)
}

fn fail(path: &[&'static str], reason: String) -> Result<(), CheckFailure> {
    Err(CheckFailure {
        path: path.to_vec(),
        reason,
    })
}

fn lift_context(ctx: &Context) -> Context {
    ctx.iter().map(|f| f.lift(1, 0)).collect()
}

fn diagnose_at(
    tree: &ProofTree,
    ctx: &Context,
    goal: &Formula,
    path: &mut Vec<&'static str>,
) -> Result<(), CheckFailure> {
    path.push(tree.rule_name());
    let result = match tree {
        ProofTree::Axm { formula } => {
            if formula != goal {
                fail(path, "axiom annotation differs from the goal".into())
            } else if !ctx.contains(goal) {
                fail(path, "goal is not a hypothesis".into())
            } else {
                Ok(())
            }
        }
        ProofTree::ImpI { antecedent, sub } => match goal.as_preformula() {
            Preformula::Imp(a, b) => {
                if antecedent != a.as_ref() {
                    fail(path, "annotation differs from the goal's antecedent".into())
                } else {
                    let mut extended = ctx.clone();
                    extended.insert(a.as_ref().clone());
                    diagnose_at(sub, &extended, b, path)
                }
            }
            _ => fail(path, "goal is not an implication".into()),
        },
        ProofTree::ImpE {
            antecedent,
            imp,
            arg,
        } => {
            let imp_goal = Formula::imp(antecedent.clone(), goal.clone());
            diagnose_at(imp, ctx, &imp_goal, path)?;
            diagnose_at(arg, ctx, antecedent, path)
        }
        ProofTree::FalsumE { conclusion, sub } => {
            if conclusion != goal {
                fail(path, "annotation differs from the goal".into())
            } else {
                let mut extended = ctx.clone();
                extended.insert(goal.clone().not());
                diagnose_at(sub, &extended, &Formula::falsum(), path)
            }
        }
        ProofTree::AllI { sub } => match goal.as_preformula() {
            Preformula::All(body) => diagnose_at(sub, &lift_context(ctx), body, path),
            _ => fail(path, "goal is not universally quantified".into()),
        },
        ProofTree::AllE { body, witness, sub } => {
            let instance = body.subst(witness, 0);
            if &instance != goal {
                fail(path, "instantiated body differs from the goal".into())
            } else {
                diagnose_at(sub, ctx, &Formula::all(body.clone()), path)
            }
        }
        ProofTree::Ref { term } => {
            if goal == &Formula::equal(term.clone(), term.clone()) {
                Ok(())
            } else {
                fail(path, "goal is not reflexivity at the annotated term".into())
            }
        }
        ProofTree::Subst2 {
            from,
            to,
            motive,
            eq,
            sub,
        } => {
            if &motive.subst(to, 0) != goal {
                fail(
                    path,
                    "motive at the target term differs from the goal".into(),
                )
            } else {
                diagnose_at(eq, ctx, &Formula::equal(from.clone(), to.clone()), path)?;
                diagnose_at(sub, ctx, &motive.subst(from, 0), path)
            }
        }
    };
    if result.is_ok() {
        path.pop();
    }
    result
}

/// Maximum depth accepted by [`provable_search`].
pub const MAX_SEARCH_DEPTH: usize = 12;

/// Bounded backward proof search. Returns a tree that passes [`check`],
/// or `None` when no proof was found within `depth` rule applications —
/// absence is a search failure, not a refutation.
///
/// Panics if `depth > MAX_SEARCH_DEPTH`.
pub fn provable_search(ctx: &Context, goal: &Formula, depth: usize) -> Option<ProofTree> {
    assert!(
        depth <= MAX_SEARCH_DEPTH,
        "search depth {depth} exceeds {MAX_SEARCH_DEPTH}"
    );
    search(ctx, goal, depth)
}

fn search(ctx: &Context, goal: &Formula, depth: usize) -> Option<ProofTree> {
    if depth == 0 {
        return None;
    }
    if ctx.contains(goal) {
        return Some(ProofTree::axm(goal.clone()));
    }
    if let Preformula::Equal(t1, t2) = goal.as_preformula() {
        if t1 == t2 {
            return Some(ProofTree::ref_(t1.clone()));
        }
    }
    if let Preformula::Imp(a, b) = goal.as_preformula() {
        let mut extended = ctx.clone();
        extended.insert(a.as_ref().clone());
        if let Some(sub) = search(&extended, b, depth - 1) {
            return Some(ProofTree::imp_i(a.as_ref().clone(), sub));
        }
    }
    if let Preformula::All(body) = goal.as_preformula() {
        if let Some(sub) = search(&lift_context(ctx), body, depth - 1) {
            return Some(ProofTree::all_i(sub));
        }
    }
    // Modus ponens driven by context implications whose conclusion is the goal.
    for hyp in ctx {
        if let Preformula::Imp(a, b) = hyp.as_preformula() {
            if b.as_ref() == goal {
                if let Some(arg) = search(ctx, a, depth - 1) {
                    return Some(ProofTree::imp_e(
                        a.as_ref().clone(),
                        ProofTree::axm(hyp.clone()),
                        arg,
                    ));
                }
            }
        }
    }
    // Proof by contradiction, except when the goal is already falsum.
    if goal.as_preformula() != &Preformula::Falsum {
        let negated = goal.clone().not();
        if !ctx.contains(&negated) {
            let mut extended = ctx.clone();
            extended.insert(negated);
            if let Some(sub) = search(&extended, &Formula::falsum(), depth - 1) {
                return Some(ProofTree::falsum_e(goal.clone(), sub));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// S-expression serialization.
//
// proof ::= (axm formula) | (impI formula proof) | (impE formula proof proof)
//         | (falsumE formula proof) | (allI proof) | (allE formula term proof)
//         | (ref term) | (subst2 term term formula proof proof)

pub fn proof_to_sexp(tree: &ProofTree, lang: &Language) -> Sexp {
    match tree {
        ProofTree::Axm { formula } => {
            Sexp::list(vec![Sexp::atom("axm"), formula_to_sexp(formula, lang)])
        }
        ProofTree::ImpI { antecedent, sub } => Sexp::list(vec![
            Sexp::atom("impI"),
            formula_to_sexp(antecedent, lang),
            proof_to_sexp(sub, lang),
        ]),
        ProofTree::ImpE {
            antecedent,
            imp,
            arg,
        } => Sexp::list(vec![
            Sexp::atom("impE"),
            formula_to_sexp(antecedent, lang),
            proof_to_sexp(imp, lang),
            proof_to_sexp(arg, lang),
        ]),
        ProofTree::FalsumE { conclusion, sub } => Sexp::list(vec![
            Sexp::atom("falsumE"),
            formula_to_sexp(conclusion, lang),
            proof_to_sexp(sub, lang),
        ]),
        ProofTree::AllI { sub } => Sexp::list(vec![Sexp::atom("allI"), proof_to_sexp(sub, lang)]),
        ProofTree::AllE { body, witness, sub } => Sexp::list(vec![
            Sexp::atom("allE"),
            formula_to_sexp(body, lang),
            term_to_sexp(witness, lang),
            proof_to_sexp(sub, lang),
        ]),
        ProofTree::Ref { term } => Sexp::list(vec![Sexp::atom("ref"), term_to_sexp(term, lang)]),
        ProofTree::Subst2 {
            from,
            to,
            motive,
            eq,
            sub,
        } => Sexp::list(vec![
            Sexp::atom("subst2"),
            term_to_sexp(from, lang),
            term_to_sexp(to, lang),
            formula_to_sexp(motive, lang),
            proof_to_sexp(eq, lang),
            proof_to_sexp(sub, lang),
        ]),
    }
}

pub fn proof_from_sexp(s: &Sexp, lang: &Language) -> Result<ProofTree, SyntaxError> {
    let malformed = || SyntaxError::Malformed(format!("proof node `{s}`"));
    if let Some(rest) = s.as_tagged("axm") {
        let [f] = rest else { return Err(malformed()) };
        return Ok(ProofTree::axm(formula_from_sexp(f, lang)?));
    }
    if let Some(rest) = s.as_tagged("impI") {
        let [f, sub] = rest else {
            return Err(malformed());
        };
        return Ok(ProofTree::imp_i(
            formula_from_sexp(f, lang)?,
            proof_from_sexp(sub, lang)?,
        ));
    }
    if let Some(rest) = s.as_tagged("impE") {
        let [f, imp, arg] = rest else {
            return Err(malformed());
        };
        return Ok(ProofTree::imp_e(
            formula_from_sexp(f, lang)?,
            proof_from_sexp(imp, lang)?,
            proof_from_sexp(arg, lang)?,
        ));
    }
    if let Some(rest) = s.as_tagged("falsumE") {
        let [f, sub] = rest else {
            return Err(malformed());
        };
        return Ok(ProofTree::falsum_e(
            formula_from_sexp(f, lang)?,
            proof_from_sexp(sub, lang)?,
        ));
    }
    if let Some(rest) = s.as_tagged("allI") {
        let [sub] = rest else { return Err(malformed()) };
        return Ok(ProofTree::all_i(proof_from_sexp(sub, lang)?));
    }
    if let Some(rest) = s.as_tagged("allE") {
        let [f, t, sub] = rest else {
            return Err(malformed());
        };
        return Ok(ProofTree::all_e(
            formula_from_sexp(f, lang)?,
            term_from_sexp(t, lang)?,
            proof_from_sexp(sub, lang)?,
        ));
    }
    if let Some(rest) = s.as_tagged("ref") {
        let [t] = rest else { return Err(malformed()) };
        return Ok(ProofTree::ref_(term_from_sexp(t, lang)?));
    }
    if let Some(rest) = s.as_tagged("subst2") {
        let [from, to, motive, eq, sub] = rest else {
            return Err(malformed());
        };
        return Ok(ProofTree::subst2(
            term_from_sexp(from, lang)?,
            term_from_sexp(to, lang)?,
            formula_from_sexp(motive, lang)?,
            proof_from_sexp(eq, lang)?,
            proof_from_sexp(sub, lang)?,
        ));
    }
    Err(malformed())
}

pub fn proof_to_string(tree: &ProofTree, lang: &Language) -> String {
    proof_to_sexp(tree, lang).to_string()
}

pub fn proof_from_str(text: &str, lang: &Language) -> Result<ProofTree, SyntaxError> {
    proof_from_sexp(&Sexp::parse(text)?, lang)
}
