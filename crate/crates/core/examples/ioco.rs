//! ioco compatibility of suspension automata, its failure of transitivity,
//! and a joint conforming state for two compatible states.
//!
//! ```text
//! cargo run --example ioco
//! ```

use apartness::bisim::ioco_compatibility;
use apartness::fixtures;
use apartness::format::{render_relation, render_sa};
use apartness::simulation::sa_joint_simulator;

fn main() -> apartness::Result<()> {
    let pair = fixtures::suspension_pair();
    let c = &pair.source;
    print!("{}", render_relation("compat", (c.name(), c.states()), None, &ioco_compatibility(c)));

    let k = fixtures::ioco_chain();
    let compat = ioco_compatibility(&k);
    let (x, y, z) = (k.state_index("x")?, k.state_index("y")?, k.state_index("z")?);
    println!();
    println!("x~y {}, y~z {}, x~z {}", compat.contains(x, y), compat.contains(y, z), compat.contains(x, z));

    if let Some(j) = sa_joint_simulator(&k, x, y)? {
        println!();
        print!("{}", render_sa(&j.automaton));
    }
    assert!(sa_joint_simulator(&k, x, z)?.is_none());
    Ok(())
}
