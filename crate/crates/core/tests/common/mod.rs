//! Test-side oracles. Nothing here calls the algorithms under test; they
//! only use the plain accessors of machines and relations.

#![allow(dead_code)]

pub mod laws;

use std::collections::{BTreeSet, VecDeque};

use apartness::fixtures;
use apartness::generate::{random_sa, random_small_mealy};
use apartness::systems::disjoint_union_all;
use apartness::{PartialMealy, Relation, SuspensionAutomaton};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p ⊎ q ⊎ r ⊎ s` with states `p.p0, ..`.
pub fn union_of_four() -> PartialMealy {
    let fig = fixtures::four_machines();
    disjoint_union_all(&fig.iter().collect::<Vec<_>>()).unwrap().0
}

pub fn state(m: &PartialMealy, name: &str) -> usize {
    m.state_index(name).unwrap()
}

/// Machines with at most 6 states and at most 3 inputs and outputs.
pub fn mealy_corpus(seed: u64, count: usize) -> Vec<PartialMealy> {
    let mut r = rng(seed);
    (0..count).map(|_| random_small_mealy(&mut r, 6, 3, 3)).collect()
}

pub fn sa_corpus(seed: u64, count: usize, max_states: usize) -> Vec<SuspensionAutomaton> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(1..=max_states);
            let i = r.gen_range(1..=2);
            let o = r.gen_range(1..=3);
            let d = r.gen_range(0.2..0.9);
            random_sa(&mut r, n, i, o, d)
        })
        .collect()
}

/// Output of the last symbol of `word` from `s`, `None` if some step is
/// undefined. Words are given by symbol names.
pub fn eval_names(m: &PartialMealy, s: &str, word: &[&str]) -> Option<String> {
    let mut q = state(m, s);
    let mut last = None;
    for sym in word {
        let t = m.transition(q, m.input_index(sym).unwrap())?;
        last = Some(m.outputs().name(t.output).to_string());
        q = t.target;
    }
    last
}

/// Searches the graph of pairs reachable by commonly defined inputs for an
/// input with two different outputs.
pub fn product_apart(m: &PartialMealy, x: usize, y: usize) -> bool {
    let mut seen = BTreeSet::from([(x, y)]);
    let mut queue = VecDeque::from([(x, y)]);
    while let Some((u, v)) = queue.pop_front() {
        for i in 0..m.inputs().len() {
            if let (Some(a), Some(b)) = (m.transition(u, i), m.transition(v, i)) {
                if a.output != b.output {
                    return true;
                }
                if seen.insert((a.target, b.target)) {
                    queue.push_back((a.target, b.target));
                }
            }
        }
    }
    false
}

/// Shortest words on which `x` and `y` produce different outputs, by
/// enumerating all words of increasing length up to `max_len` in
/// lexicographic order of input indices.
pub fn shortest_distinguishing(m: &PartialMealy, x: usize, y: usize, max_len: usize) -> Option<Vec<usize>> {
    let k = m.inputs().len();
    for len in 1..=max_len {
        let total = k.pow(len as u32);
        for code in 0..total {
            let mut word = vec![0; len];
            let mut c = code;
            for pos in (0..len).rev() {
                word[pos] = c % k;
                c /= k;
            }
            let (mut u, mut v) = (x, y);
            for (pos, &i) in word.iter().enumerate() {
                match (m.transition(u, i), m.transition(v, i)) {
                    (Some(a), Some(b)) => {
                        if pos + 1 == len && a.output != b.output {
                            return Some(word);
                        }
                        if a.output != b.output {
                            break;
                        }
                        u = a.target;
                        v = b.target;
                    }
                    _ => {
                        break;
                    }
                }
            }
        }
    }
    None
}

/// Checks the two ioco compatibility clauses for every pair of `r`.
pub fn is_ioco_relation(a: &SuspensionAutomaton, r: &Relation) -> bool {
    r.pairs().all(|(x, y)| {
        let inputs_ok = (0..a.inputs().len()).all(|i| match (a.input_step(x, i), a.input_step(y, i)) {
            (Some(u), Some(v)) => r.contains(u, v),
            _ => true,
        });
        let output_ok = (0..a.outputs().len()).any(|o| match (a.output_step(x, o), a.output_step(y, o)) {
            (Some(u), Some(v)) => r.contains(u, v),
            _ => false,
        });
        inputs_ok && output_ok
    })
}

/// Union of all ioco compatibility relations, by enumerating every
/// relation on the states. Only for automata with at most 4 states.
pub fn brute_ioco(a: &SuspensionAutomaton) -> Relation {
    let n = a.state_count();
    assert!(n <= 4, "brute force is exponential in n²");
    let mut best = Relation::on(n);
    for bits in 0u32..1 << (n * n) {
        let r =
            Relation::from_pairs(n, n, (0..n * n).filter(|k| bits & (1 << k) != 0).map(|k| (k / n, k % n)))
                .unwrap();
        if is_ioco_relation(a, &r) {
            best = best.union(&r).unwrap();
        }
    }
    best
}

/// Laxness checked directly on transitions: every transition of `src`
/// reappears at the image.
pub fn is_lax(src: &PartialMealy, dst: &PartialMealy, h: &[usize]) -> bool {
    src.transitions().all(|(x, i, t)| {
        dst.transition(h[x], i).is_some_and(|d| d.output == t.output && d.target == h[t.target])
    })
}

/// Every map `src → dst` with `h(root) = root_target` that is lax.
pub fn all_lax_maps(
    src: &PartialMealy,
    dst: &PartialMealy,
    root: usize,
    root_target: usize,
) -> Vec<Vec<usize>> {
    let (n, k) = (src.state_count(), dst.state_count());
    let mut out = Vec::new();
    for code in 0..k.pow(n as u32) {
        let mut h = vec![0; n];
        let mut c = code;
        for slot in h.iter_mut() {
            *slot = c % k;
            c /= k;
        }
        if h[root] == root_target && is_lax(src, dst, &h) {
            out.push(h);
        }
    }
    out
}

/// `(?, ?)`-style rendering of a pair of single-entry Mealy structures.
pub fn unit_pair(t: &apartness::Successor, s: &apartness::Successor, names: &[&str]) -> (String, String) {
    let show = |x: &apartness::Successor| match x {
        apartness::Successor::Mealy(v) => match v[0] {
            None => "?".to_string(),
            Some((_, y)) => names[y].to_string(),
        },
        _ => unreachable!(),
    };
    (show(t), show(s))
}

/// The rows of the semantics table of the tree counterexample: word,
/// output from `p`, output from `q`.
pub const SEMANTICS_TABLE: &[(&str, Option<&str>, Option<&str>)] = &[
    ("w", Some("o"), Some("o")),
    ("wi", Some("a"), None),
    ("v", Some("o"), Some("o")),
    ("vw", Some("o"), Some("o")),
    ("vv", Some("o"), None),
    ("vvw", Some("o"), None),
    ("vvwi", Some("b"), None),
    ("vwi", None, Some("b")),
];
