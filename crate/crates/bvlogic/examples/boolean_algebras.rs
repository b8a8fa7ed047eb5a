//! Finite complete Boolean algebras three ways: powersets, regular-open
//! algebras of finite topologies, and raw operation tables — plus the
//! antichain finder and the two-route inequality oracle.
//!
//! Run with `cargo run --example boolean_algebras`.

use bvlogic::boolalg::{tautology_le, FinCBA, FinTopSpace, LatticeExpr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Powerset algebra of a 3-element set: 8 elements, 3 atoms.
    let pow = FinCBA::powerset(3)?;
    println!("powerset(3): {} elements", pow.carrier_size());
    println!(
        "atoms      : {}",
        pow.atoms()
            .iter()
            .map(|a| pow.element_label(*a))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let report = pow.max_antichain();
    println!(
        "antichain  : {} elements (exact: {})",
        report.size, report.exact
    );
    println!();

    // The open sets of a topology rarely form a Boolean algebra, but the
    // regular opens (interior of closure fixpoints) always do. On the
    // Sierpinski-like space below, 5 opens collapse to 4 regular opens.
    let space = FinTopSpace::new(3, vec![0b000, 0b001, 0b010, 0b011, 0b111])?;
    println!("topology   : {} opens on 3 points", space.opens().len());
    let ro = FinCBA::regular_open(space)?;
    println!("reg. opens : {} elements", ro.carrier_size());
    for elt in ro.elements() {
        println!("  {}", ro.element_label(elt));
    }
    println!();

    // Negation in the regular-open algebra is the interior of the
    // complement, so double negation can strictly grow an open set —
    // yet on regular opens it is the identity, as the axioms demand.
    let one = ro
        .elements()
        .find(|e| ro.element_label(*e) == "{0}")
        .expect("the open {0} is regular");
    println!(
        "~{} = {}",
        ro.element_label(one),
        ro.element_label(ro.neg(one))
    );
    println!(
        "~~{} = {}",
        ro.element_label(one),
        ro.element_label(ro.neg(ro.neg(one)))
    );
    println!();

    // The inequality oracle decides lattice entailments symbolically.
    // Distribution of meet over join holds in every Boolean algebra…
    let a = || LatticeExpr::atom("a");
    let b = || LatticeExpr::atom("b");
    let c = || LatticeExpr::atom("c");
    let lhs = a().meet(b().join(c()));
    let rhs = a().meet(b()).join(a().meet(c()));
    let outcome = tautology_le(&ro, &lhs, &rhs)?;
    println!("a & (b | c) <= (a & b) | (a & c): {}", outcome.holds);

    // …while `a <= a & b` fails, and the oracle hands back a witness.
    let outcome = tautology_le(&ro, &a(), &a().meet(b()))?;
    println!("a <= a & b                      : {}", outcome.holds);
    if let Some(witness) = outcome.counterexample {
        let parts: Vec<String> = witness
            .iter()
            .map(|(name, elt)| format!("{name}={}", ro.element_label(*elt)))
            .collect();
        println!("counterexample                  : {}", parts.join(" "));
    }
    Ok(())
}
