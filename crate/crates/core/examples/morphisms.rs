//! Strict, lax and oplax morphism checks, kernels, and restriction along an
//! oplax map.
//!
//! ```text
//! cargo run --example morphisms
//! ```

use apartness::bisim::{relation_is_uncertain_bisimulation, uncertain_bisimilarity};
use apartness::fixtures;
use apartness::format::render_mealy;
use apartness::morphisms::{check_morphism, kernel, restrict_along, MorphismKind, StateMap};

fn main() -> apartness::Result<()> {
    let chain = fixtures::lax_chain();
    for (name, src, dst, h) in
        [("g", &chain.tree, &chain.middle, &chain.g), ("h", &chain.middle, &chain.black_box, &chain.h)]
    {
        for kind in [MorphismKind::Strict, MorphismKind::Lax, MorphismKind::Oplax] {
            let report = check_morphism(src, dst, h, kind)?;
            let lines: Vec<String> = report.violations.iter().map(|v| v.describe(src)).collect();
            println!("{name} {kind}: {}", if lines.is_empty() { "ok".into() } else { lines.join(", ") });
        }
        let k = kernel(h);
        assert!(relation_is_uncertain_bisimulation(src, &k)?);
        assert!(k.is_subset(&uncertain_bisimilarity(src)));
    }

    let s = fixtures::suspension_pair();
    for kind in [MorphismKind::Lax, MorphismKind::Oplax] {
        let report = check_morphism(&s.source, &s.target, &s.h, kind)?;
        let lines: Vec<String> = report.violations.iter().map(|v| v.describe(&s.source)).collect();
        println!("suspension h {kind}: {}", if lines.is_empty() { "ok".into() } else { lines.join(", ") });
    }

    // Tp -> T sending p2 to the leaf q1 is oplax; restricting Tp makes it strict.
    let back = StateMap::from_names(&chain.middle, &chain.tree, &[("p0", "q0"), ("p1", "q1"), ("p2", "q1")])?;
    let restricted = restrict_along(&chain.middle, &chain.tree, &back)?;
    assert!(check_morphism(&restricted, &chain.tree, &back, MorphismKind::Strict)?.is_ok());
    println!();
    print!("{}", render_mealy(&restricted));
    Ok(())
}
