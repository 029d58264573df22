//! Identifying two states by the least lax quotient. On the tree
//! counterexample `p` and `q` are uncertain bisimilar, yet merging them
//! forces a conflict.
//!
//! ```text
//! cargo run --example identify
//! ```

use apartness::bisim::uncertain_bisimilarity;
use apartness::fixtures;
use apartness::format::render_mealy;
use apartness::morphisms::{lax_identify, Identification};

fn main() -> apartness::Result<()> {
    let m = fixtures::tree_counterexample();
    let (p, q) = (m.state_index("p")?, m.state_index("q")?);
    println!("p ~ q: {}", uncertain_bisimilarity(&m).contains(p, q));
    let id = lax_identify(&m, p, q)?;
    for line in id.report_lines(&m) {
        println!("  {line}");
    }

    let fig = fixtures::four_machines();
    let (u, _) = apartness::systems::disjoint_union(&fig[0], &fig[1])?;
    let id = lax_identify(&u, u.state_index("p.p0")?, u.state_index("q.q0")?)?;
    if let Identification::Quotient { quotient, .. } = &id {
        println!();
        print!("{}", render_mealy(quotient));
    }
    Ok(())
}
