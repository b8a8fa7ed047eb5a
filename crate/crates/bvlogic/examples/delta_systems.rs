//! Delta systems (sunflowers): families of sets that pairwise intersect
//! in one common root. Above a size threshold depending only on the set
//! size and the target, such a subfamily always exists.
//!
//! Run with `cargo run --example delta_systems`.

use bvlogic::combinatorics::{delta_extract, is_delta_system, sunflower_bound, SetFamily};
use bvlogic::harness::random_set_family;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // For sets of size at most 3 and target 3, k!(t-1)^k = 48 sets
    // guarantee a delta system of 3; we take a margin above the bound.
    let k = 3;
    let target = 3;
    let bound = sunflower_bound(k, target).expect("small parameters");
    println!("guarantee threshold: more than {bound} distinct sets of size <= {k}");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let family = random_set_family(&mut rng, bound + 1, 30, k);
    println!("family size        : {}", family.len());

    let system = delta_extract(&family, target)?.expect("above the bound");
    println!("indices            : {:?}", system.indices);
    println!(
        "root               : {{{}}}",
        system
            .root
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    for &i in &system.indices {
        let set: Vec<String> = family.sets()[i].iter().map(|x| x.to_string()).collect();
        println!("  set {i}: {{{}}}", set.join(","));
    }

    // Independent re-validation: every pairwise intersection must equal
    // the root exactly.
    let revalidated = is_delta_system(&family, &system.indices);
    println!("revalidated root   : {:?}", revalidated.is_some());
    println!();

    // Small families may simply lack a delta system of the target size.
    let tiny = SetFamily::new(vec![
        [1u32, 2].into_iter().collect(),
        [2u32, 3].into_iter().collect(),
        [3u32, 1].into_iter().collect(),
    ]);
    println!(
        "3 pairwise-skew sets, target 3: {:?}",
        delta_extract(&tiny, 3)?.map(|s| s.indices)
    );
    Ok(())
}
