//! Uncertain bisimilarity and shortest apartness witnesses on the four
//! machines `p, q, r, s`.
//!
//! ```text
//! cargo run --example apartness_witness
//! ```

use apartness::bisim::{apartness_witness, semantic_oracle_uncertain, uncertain_bisimilarity};
use apartness::fixtures;
use apartness::systems::disjoint_union_all;

fn main() -> apartness::Result<()> {
    let machines = fixtures::four_machines();
    let (u, _) = disjoint_union_all(&machines.iter().collect::<Vec<_>>())?;
    let roots: Vec<usize> = ["p.p0", "q.q0", "r.r0", "s.s0"]
        .iter()
        .map(|s| u.state_index(s))
        .collect::<apartness::Result<_>>()?;
    let ub = uncertain_bisimilarity(&u);
    for (k, &x) in roots.iter().enumerate() {
        for &y in &roots[k + 1..] {
            let (a, b) = (u.states().name(x), u.states().name(y));
            match apartness_witness(&u, x, y)? {
                Some(w) => println!("{a} # {b}: {}", w.display(&u)),
                None => println!("{a} ~ {b}"),
            }
            let oracle = semantic_oracle_uncertain(&u, x, y, 10_000)?;
            assert_eq!(oracle.compatible, ub.contains(x, y));
        }
    }
    println!("transitive: {}", ub.is_transitive());
    Ok(())
}
