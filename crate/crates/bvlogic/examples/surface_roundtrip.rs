//! Parse human-readable formulas over the set-theory language, inspect
//! their de Bruijn internals, and print them back.
//!
//! Run with `cargo run --example surface_roundtrip`.

use bvlogic::corpus::{self, print_formula, read_formula};
use bvlogic::syntax::{formula_to_string, Term};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lang = corpus::set_language();

    // Named binders desugar to nameless indices. Bounded quantifiers
    // (`forall x in t`) are sugar for a guarded quantifier.
    let source = "forall x y in omega. x in y or y in x or x = y";
    let formula = read_formula(source)?;
    println!("source     : {source}");
    println!("de Bruijn  : {}", formula_to_string(&formula, lang));
    println!("size       : {}", formula.size());
    println!("closed     : {}", formula.is_closed());
    println!("printed    : {}", print_formula(&formula));
    println!();

    // `print_formula` inverts `read_formula`: reading the printed text
    // reproduces the formula node for node.
    let reprinted = read_formula(&print_formula(&formula))?;
    assert_eq!(formula, reprinted);
    println!("round trip : exact");
    println!();

    // Defined predicates (`subset`, `leq`, `Ord`, …) expand during
    // elaboration, so the core formula only mentions `=`, `in`, and the
    // five set-theory function symbols.
    let defined = read_formula("forall a b. subset(a, b) -> a in P(b)")?;
    println!("expanded   : {}", print_formula(&defined));
    println!();

    // Free names become free indices: `u0` is the innermost free slot.
    let open = read_formula("u0 in omega")?;
    println!("open       : {}", print_formula(&open));
    println!("free slots : {}", open.free_bound());

    // Substitution plugs a term into a free slot and renumbers the rest.
    let omega = Term::constant(lang.function("omega").expect("omega"))?;
    let plugged = open.subst(&omega, 0);
    println!("plugged    : {}", print_formula(&plugged));
    assert!(plugged.is_closed());
    Ok(())
}
