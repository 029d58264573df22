//! An observation tree filled by output queries to a hidden machine, its
//! apartness frontier, and the lax morphism from the tree into the hidden
//! machine.
//!
//! ```text
//! cargo run --example learning
//! ```

use apartness::fixtures;
use apartness::format::render_mealy;
use apartness::learning::{find_lax_morphism_from_tree, tree_apartness_frontier, ObservationTree, Teacher};
use apartness::TotalMealy;

fn main() -> apartness::Result<()> {
    let r = fixtures::four_machines().remove(2);
    let hidden = TotalMealy::totalize(&r, "a")?;
    let mut teacher = Teacher::new(hidden.clone(), "r0")?;
    let mut tree = ObservationTree::new("tree", hidden.inputs().clone(), hidden.outputs().clone());
    for w in [&["i"][..], &["j", "j"], &["j", "i", "i"]] {
        let word = hidden.as_partial().word(w)?;
        let outs = tree.query(&mut teacher, &word)?;
        let names: Vec<&str> = outs.iter().map(|&o| hidden.outputs().name(o)).collect();
        println!("{} -> {}", w.join(" "), names.join(" "));
    }
    println!("{} queries", teacher.query_count());
    print!("{}", render_mealy(tree.machine()));

    let frontier = tree_apartness_frontier(&tree);
    let t = tree.machine();
    for (a, b) in frontier.pairs().filter(|(a, b)| a < b) {
        println!("apart: {} {}", t.states().name(a), t.states().name(b));
    }

    let h =
        find_lax_morphism_from_tree(&tree, hidden.as_partial(), 0)?.expect("the tree records the machine");
    for x in 0..t.state_count() {
        println!("{} -> {}", t.states().name(x), hidden.as_partial().states().name(h.apply(x)));
    }
    Ok(())
}
