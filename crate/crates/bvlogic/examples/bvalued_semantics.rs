//! Interpret a first-order language in a structure whose truth values
//! live in a finite complete Boolean algebra, and watch provability
//! transfer: anything derivable from forced hypotheses is forced.
//!
//! Run with `cargo run --example bvalued_semantics`.

use std::sync::Arc;

use bvlogic::boolalg::FinCBA;
use bvlogic::proof::{Context, ProofTree};
use bvlogic::semantics::BStructure;
use bvlogic::syntax::{Formula, Language, Term};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // One unary function, one unary relation, two constants.
    let lang = Language::new(vec![("zero", 0), ("succ", 1)], vec![("small", 1)])?;
    let algebra = Arc::new(FinCBA::powerset(2)?);

    // Carrier {0, 1}; `succ` swaps the two points; `small` holds of point
    // 0 with value {0,1} (top) and of point 1 with value {0} only.
    let mut structure = BStructure::new(lang.clone(), Arc::clone(&algebra), 2)?;
    structure.set_function("succ", vec![1, 0])?;
    structure.set_relation("small", vec![3, 1])?;
    structure.validate()?;

    let zero = Term::constant(lang.function("zero").expect("zero"))?;
    let small = lang.relation("small").expect("small");
    let succ = lang.function("succ").expect("succ");

    // ‖small(zero) and small(succ(zero))‖ = top ⊓ {0} = {0}: a truth
    // value strictly between false and true.
    let succ_zero = Term::apply(succ, vec![zero.clone()])?;
    let sentence =
        Formula::rel_app(small, vec![zero.clone()])?.and(Formula::rel_app(small, vec![succ_zero])?);
    let value = structure.realize_sentence(&sentence)?;
    println!(
        "truth value: {} (element {})",
        structure.algebra().element_label(value),
        value.index()
    );

    // `gamma forces phi` means gamma <= ‖phi‖.
    for gamma in algebra.elements() {
        println!(
            "  {} forces it: {}",
            algebra.element_label(gamma),
            structure.forces(gamma, &sentence)?
        );
    }
    println!();

    // Soundness transfer: derive `exists x. small(x)` from the forced
    // hypothesis `small(zero)`; its truth value must dominate the
    // hypothesis' value.
    let hyp = Formula::rel_app(small, vec![zero.clone()])?;
    let goal = Formula::rel_app(small, vec![Term::var(0)])?.ex();
    // exists-introduction unfolds to: from small(zero), refute
    // `forall x. not small(x)` by instantiating at zero.
    let body = Formula::rel_app(small, vec![Term::var(0)])?.not();
    let tree = ProofTree::imp_i(
        Formula::all(body.clone()),
        ProofTree::imp_e(
            hyp.clone(),
            ProofTree::all_e(
                body,
                zero,
                ProofTree::axm(Formula::all(
                    Formula::rel_app(small, vec![Term::var(0)])?.not(),
                )),
            ),
            ProofTree::axm(hyp.clone()),
        ),
    );
    let mut ctx = Context::new();
    ctx.insert(hyp.clone());
    let sound = structure.validate_soundness(&tree, &ctx, &goal)?;
    println!(
        "‖small(zero)‖        = {}",
        structure
            .algebra()
            .element_label(structure.realize_sentence(&hyp)?)
    );
    println!(
        "‖exists x. small(x)‖ = {}",
        structure
            .algebra()
            .element_label(structure.realize_sentence(&goal)?)
    );
    println!("inf(hyps) <= goal    : {sound}");
    Ok(())
}
