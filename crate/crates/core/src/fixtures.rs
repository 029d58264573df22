//! Small hand-written systems used by the tests, the examples and the
//! bundled fixture files under `fixtures/`.

use crate::morphisms::StateMap;
use crate::systems::{PartialMealy, SuspensionAutomaton};

/// Four machines over inputs `{i, j}` and outputs `{a, b}`, in the order
/// `p, q, r, s`:
///
/// ```text
/// p0 -i/a-> p1, p0 -j/a-> p2      q0 -i/a-> q1
/// r0 -i/a-> r1, r0 -j/b-> r2      s0 -j/b-> s1
/// ```
pub fn four_machines() -> Vec<PartialMealy> {
    let io = (["i", "j"], ["a", "b"]);
    let build = |name: &str, states: &[&str], trans: &[(&str, &str, &str, &str)]| {
        PartialMealy::from_names(name, &io.0, &io.1, states, trans).expect("fixture is valid")
    };
    vec![
        build("p", &["p0", "p1", "p2"], &[("p0", "i", "a", "p1"), ("p0", "j", "a", "p2")]),
        build("q", &["q0", "q1"], &[("q0", "i", "a", "q1")]),
        build("r", &["r0", "r1", "r2"], &[("r0", "i", "a", "r1"), ("r0", "j", "b", "r2")]),
        build("s", &["s0", "s1"], &[("s0", "j", "b", "s1")]),
    ]
}

/// Three machines over inputs `{i, j}` and the single output `o`, connected
/// by two lax morphisms `g: T → Tp` and `h: Tp → B`.
pub struct LaxChain {
    pub tree: PartialMealy,
    pub middle: PartialMealy,
    pub black_box: PartialMealy,
    pub g: StateMap,
    pub h: StateMap,
}

pub fn lax_chain() -> LaxChain {
    let build = |name: &str, states: &[&str], trans: &[(&str, &str, &str, &str)]| {
        PartialMealy::from_names(name, &["i", "j"], &["o"], states, trans).expect("fixture is valid")
    };
    let tree = build("T", &["q0", "q1"], &[("q0", "i", "o", "q1")]);
    let middle = build("Tp", &["p0", "p1", "p2"], &[("p0", "i", "o", "p1"), ("p0", "j", "o", "p2")]);
    let black_box = build("B", &["r0", "r1"], &[("r0", "i", "o", "r1"), ("r0", "j", "o", "r0")]);
    let g = StateMap::from_names(&tree, &middle, &[("q0", "p0"), ("q1", "p1")]).expect("fixture is valid");
    let h = StateMap::from_names(&middle, &black_box, &[("p0", "r0"), ("p1", "r1"), ("p2", "r0")])
        .expect("fixture is valid");
    LaxChain { tree, middle, black_box, g, h }
}

/// Two suspension automata over input `a` and outputs `{w, x, y, z}` with a
/// lax morphism `h` that merges `2, 3` and `4, 5`.
pub struct SuspensionPair {
    pub source: SuspensionAutomaton,
    pub target: SuspensionAutomaton,
    pub h: StateMap,
}

pub fn suspension_pair() -> SuspensionPair {
    let outputs = ["w", "x", "y", "z"];
    let source = SuspensionAutomaton::from_names(
        "C",
        &["a"],
        &outputs,
        &["1", "2", "3", "4", "5", "6"],
        &[("1", "a", "3"), ("3", "a", "4"), ("2", "a", "5")],
        &[
            ("1", "x", "2"),
            ("3", "w", "6"),
            ("2", "w", "6"),
            ("4", "x", "6"),
            ("4", "y", "6"),
            ("5", "y", "6"),
            ("6", "z", "6"),
        ],
    )
    .expect("fixture is valid");
    let target = SuspensionAutomaton::from_names(
        "D",
        &["a"],
        &outputs,
        &["1'", "2'", "5'", "6'"],
        &[("1'", "a", "2'"), ("2'", "a", "5'"), ("5'", "a", "6'"), ("6'", "a", "1'")],
        &[("1'", "x", "2'"), ("2'", "w", "6'"), ("5'", "y", "6'"), ("6'", "z", "6'")],
    )
    .expect("fixture is valid");
    let h = StateMap::from_names(
        &source,
        &target,
        &[("1", "1'"), ("2", "2'"), ("3", "2'"), ("4", "5'"), ("5", "5'"), ("6", "6'")],
    )
    .expect("fixture is valid");
    SuspensionPair { source, target, h }
}

/// A tree-shaped machine over inputs `{v, w, i}` and outputs `{a, b, o}` in
/// which `p` and `q` are uncertain bisimilar but cannot be merged by any lax
/// morphism:
///
/// ```text
/// p -w/o-> x -i/a-> x'
/// p -v/o-> q -w/o-> y
/// q -v/o-> q' -w/o-> z -i/b-> z'
/// ```
pub fn tree_counterexample() -> PartialMealy {
    PartialMealy::from_names(
        "m",
        &["v", "w", "i"],
        &["a", "b", "o"],
        &["p", "x", "x'", "q", "y", "q'", "z", "z'"],
        &[
            ("p", "w", "o", "x"),
            ("q", "w", "o", "y"),
            ("p", "v", "o", "q"),
            ("q", "v", "o", "q'"),
            ("q'", "w", "o", "z"),
            ("x", "i", "a", "x'"),
            ("z", "i", "b", "z'"),
        ],
    )
    .expect("fixture is valid")
}

/// A suspension automaton in which ioco compatibility is not transitive:
/// `x` and `z` are each compatible with `y`, which refuses input `a`, but
/// after `a` they offer disjoint outputs.
///
/// ```text
/// x -!q-> x, x -?a-> u -!c-> u
/// y -!q-> y
/// z -!q-> z, z -?a-> v -!d-> v
/// ```
pub fn ioco_chain() -> SuspensionAutomaton {
    SuspensionAutomaton::from_names(
        "k",
        &["a"],
        &["q", "c", "d"],
        &["x", "y", "z", "u", "v"],
        &[("x", "a", "u"), ("z", "a", "v")],
        &[("x", "q", "x"), ("y", "q", "y"), ("z", "q", "z"), ("u", "c", "u"), ("v", "d", "v")],
    )
    .expect("fixture is valid")
}

/// Text of the bundled fixture files, keyed by file name.
pub const FILES: &[(&str, &str)] = &[
    ("four_machines.fsm", include_str!("../fixtures/four_machines.fsm")),
    ("lax_chain.fsm", include_str!("../fixtures/lax_chain.fsm")),
    ("suspension.fsm", include_str!("../fixtures/suspension.fsm")),
    ("tree_counterexample.fsm", include_str!("../fixtures/tree_counterexample.fsm")),
    ("ioco_chain.fsm", include_str!("../fixtures/ioco_chain.fsm")),
];
