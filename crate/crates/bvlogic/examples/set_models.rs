//! Hereditary finite sets, their Boolean-valued counterparts, and the
//! graded membership/equality calculus: names, mixtures, comprehension
//! and the internal powerset.
//!
//! Run with `cargo run --example set_models`.

use std::sync::Arc;

use bvlogic::boolalg::FinCBA;
use bvlogic::sets::{bv_eq, bv_mem, bv_powerset, bv_subset, comprehension, mixture, BSet, PSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Plain hereditary sets first: von Neumann numerals.
    let two = PSet::ordinal(2)?;
    let three = PSet::ordinal(3)?;
    println!("2 = {}", two.to_sexp());
    println!("2 in 3: {}   3 in 2: {}", two.mem(&three), three.mem(&two));
    println!("2 subset 3: {}", two.subset(&three));

    // Extensional equivalence ignores duplicates and order.
    let doubled = PSet::new(vec![PSet::empty(), PSet::empty(), PSet::ordinal(1)?]);
    println!("{{0,0,1}} equiv 2: {}", doubled.equiv(&two));
    println!();

    // A Boolean-valued set assigns each child a truth value from a fixed
    // algebra. Checked names (`from_pset`) embed plain sets with weight
    // top everywhere; equality and membership then collapse to the
    // classical answers.
    let algebra = Arc::new(FinCBA::powerset(2)?);
    let two_name = BSet::from_pset(&algebra, &two);
    let three_name = BSet::from_pset(&algebra, &three);
    println!(
        "[[2 = 3]] = {}",
        algebra.element_label(bv_eq(&two_name, &three_name)?)
    );
    println!(
        "[[2 in 3]] = {}",
        algebra.element_label(bv_mem(&two_name, &three_name)?)
    );
    println!();

    // A genuinely fuzzy set: it contains the name of 0 with value {0}
    // and the name of 1 with value {1} — two incompatible "opinions".
    let zero_name = BSet::from_pset(&algebra, &PSet::ordinal(0)?);
    let one_name = BSet::from_pset(&algebra, &PSet::ordinal(1)?);
    let p = algebra.element(1).expect("atom {0}");
    let q = algebra.element(2).expect("atom {1}");
    let fuzzy = BSet::new(
        Arc::clone(&algebra),
        vec![(zero_name.clone(), p), (one_name.clone(), q)],
    )?;
    println!(
        "[[0 in F]] = {}",
        algebra.element_label(bv_mem(&zero_name, &fuzzy)?)
    );
    println!(
        "[[1 in F]] = {}",
        algebra.element_label(bv_mem(&one_name, &fuzzy)?)
    );
    let two_name_again = BSet::from_pset(&algebra, &two);
    println!(
        "[[F subset 2-name]] = {}",
        algebra.element_label(bv_subset(&fuzzy, &two_name_again)?)
    );
    println!();

    // Mixtures glue sets along an antichain: below p the mixture is the
    // 0-name, below q it is the 1-name.
    let mixed = mixture(&[p, q], &[zero_name.clone(), one_name.clone()])?;
    println!(
        "mixture agrees with 0-name at weight p: {}",
        algebra.element_label(algebra.meet(p, bv_eq(&mixed, &zero_name)?))
            == algebra.element_label(p)
    );

    // Comprehension carves out a subset by a per-child predicate.
    let carved = comprehension(&fuzzy, &[p, algebra.bot()])?;
    println!(
        "[[0 in {{x in F : phi}}]] = {}",
        algebra.element_label(bv_mem(&zero_name, &carved)?)
    );

    // The internal powerset of the 1-name has the empty name and the
    // 1-name itself as its fully-weighted members.
    let pow = bv_powerset(&one_name)?;
    println!("powerset of 1-name has {} candidate entries", pow.size());
    println!(
        "[[emptyname in P(1)]] = {}",
        algebra.element_label(bv_mem(&BSet::empty(Arc::clone(&algebra)), &pow)?)
    );
    Ok(())
}
