//! Joint simulators: a state simulating two uncertain bisimilar states,
//! with both simulations checked in Hughes–Jacobs and open-map style.
//!
//! ```text
//! cargo run --example join
//! ```

use apartness::fixtures;
use apartness::format::render_mealy;
use apartness::simulation::{check_simulation, hj_to_openmap, joint_simulator, JointOutcome, SpanStyle};
use apartness::Machine;

fn main() -> apartness::Result<()> {
    let m = fixtures::tree_counterexample();
    let (p, q) = (m.state_index("p")?, m.state_index("q")?);
    let JointOutcome::Joint(j) = joint_simulator(&m, p, q)? else {
        unreachable!("p and q are uncertain bisimilar")
    };
    print!("{}", render_mealy(&j.machine));
    let (mm, mj) = (Machine::Mealy(m.clone()), Machine::Mealy(j.machine.clone()));
    for (side, w) in [("left", &j.left), ("right", &j.right)] {
        let hj = check_simulation(&w.relation, &mm, &mj, SpanStyle::HughesJacobs)?;
        let open = check_simulation(&w.relation, &mm, &mj, SpanStyle::OpenMap)?;
        let converted = hj_to_openmap(w, &mm, &mj)?.verify(&mm, &mj)?;
        println!("{side}: hj {hj}, openmap {open}, converted span {converted}");
    }

    let (x, z) = (m.state_index("x")?, m.state_index("z")?);
    if let JointOutcome::Apart(w) = joint_simulator(&m, x, z)? {
        println!("x and z: apart by {}", w.display(&m));
    }
    Ok(())
}
