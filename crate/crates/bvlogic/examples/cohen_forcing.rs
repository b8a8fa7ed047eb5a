//! Finite slices of the forcing poset that adds a subset of a line of
//! cells: conditions as partial 0/1-assignments, their embedding into a
//! powerset algebra, incompatibility, and density of the image.
//!
//! Run with `cargo run --example cohen_forcing`.

use bvlogic::combinatorics::{density_check, iota, CohenCondition, CohenGround};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Three cells, so 2^3 = 8 total assignments and 3^3 = 27 conditions
    // (each cell pinned in, pinned out, or left free).
    let ground = CohenGround::line(3)?;
    println!("cells       : {}", ground.len());
    println!("assignments : {}", ground.assignments());
    println!("conditions  : {}", ground.all_conditions()?.len());
    println!();

    // A condition denotes the set of total assignments extending it; the
    // embedding iota sends it to exactly that subset.
    let p = CohenCondition::parse_line("+0,0 -0,1")?;
    let q = CohenCondition::parse_line("+0,1")?;
    let r = CohenCondition::parse_line("+0,2")?;
    for (name, cond) in [("p", &p), ("q", &q), ("r", &r)] {
        let image = iota(&ground, cond)?;
        println!(
            "iota({name}) covers {} of 8 assignments  ({})",
            image.count(),
            cond.to_line()
        );
    }
    println!();

    // p pins cell (0,1) out while q pins it in: no common extension, and
    // the embedded images are disjoint. p and r are compatible.
    println!(
        "p, q incompatible: {}",
        iota(&ground, &p)?.is_disjoint(&iota(&ground, &q)?)
    );
    println!(
        "p, r incompatible: {}",
        iota(&ground, &p)?.is_disjoint(&iota(&ground, &r)?)
    );
    println!();

    // Density: below any nonzero subset of assignments sits the image of
    // some condition. The report also cross-checks against the powerset
    // algebra's own machinery on grounds this small.
    let report = density_check(&ground)?;
    println!("all images nonzero : {}", report.all_nonzero);
    println!("atoms covered      : {}", report.atoms_covered);
    println!("image dense        : {}", report.dense);
    println!(
        "algebra cross-check: {}",
        report
            .algebra_cross_check
            .map_or("skipped".to_string(), |b| b.to_string())
    );
    Ok(())
}
