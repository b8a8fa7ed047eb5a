//! Build natural-deduction derivations, check them against a context and
//! a goal, diagnose a broken derivation, and let the bounded search find
//! small proofs on its own.
//!
//! Run with `cargo run --example proof_checking`.

use bvlogic::corpus::{print_formula, read_formula, set_language};
use bvlogic::proof::{self, Context, ProofTree};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lang = set_language();

    // K combinator shape: a -> (b -> a), from an empty context.
    let a = read_formula("empty = empty")?;
    let b = read_formula("omega = omega")?;
    let goal = read_formula("empty = empty -> omega = omega -> empty = empty")?;
    let tree = ProofTree::imp_i(
        a.clone(),
        ProofTree::imp_i(b.clone(), ProofTree::axm(a.clone())),
    );
    let ctx = Context::new();
    println!("goal    : {}", print_formula(&goal));
    println!("checks  : {}", proof::check(&tree, &ctx, &goal));
    println!();

    // The checker pinpoints where a bad derivation goes wrong: here the
    // inner axiom claims `b`, which is not among the open assumptions.
    let broken = ProofTree::imp_i(a.clone(), ProofTree::axm(b.clone()));
    let bad_goal = read_formula("empty = empty -> omega = omega")?;
    match proof::diagnose(&broken, &ctx, &bad_goal) {
        Ok(()) => unreachable!("the broken tree must be rejected"),
        Err(failure) => println!("rejected: {failure}"),
    }
    println!();

    // Modus ponens from hypotheses.
    let mut hyps = Context::new();
    hyps.insert(read_formula("empty in omega")?);
    hyps.insert(read_formula("empty in omega -> omega in P(omega)")?);
    let conclusion = read_formula("omega in P(omega)")?;
    let mp = ProofTree::imp_e(
        read_formula("empty in omega")?,
        ProofTree::axm(read_formula("empty in omega -> omega in P(omega)")?),
        ProofTree::axm(read_formula("empty in omega")?),
    );
    println!("mp      : {}", proof::check(&mp, &hyps, &conclusion));

    // The bounded search discovers this proof by itself.
    let found = proof::provable_search(&hyps, &conclusion, 4).expect("searchable");
    println!("search  : {}", proof::check(&found, &hyps, &conclusion));
    println!();

    // Derivations serialize to s-expressions, so they can live in files
    // and be re-checked later (see the `check-proof` subcommand).
    let text = proof::proof_to_string(&tree, lang);
    println!("stored  : {text}");
    let reloaded = proof::proof_from_str(&text, lang)?;
    assert_eq!(tree, reloaded);
    println!("reload  : exact");
    Ok(())
}
