//! Greatest-fixpoint decision procedures: bisimilarity, uncertain
//! bisimilarity, apartness witnesses and ioco compatibility.
//!
//! Uncertain bisimilarity is not transitive, so everything here works on
//! pairs of states rather than on partitions.

use std::collections::VecDeque;
use std::fmt;

use crate::error::Result;
use crate::lifting::{in_lifting, in_uncertain_lifting};
use crate::relation::Relation;
use crate::systems::{Coalgebra, PartialMealy, SuspensionAutomaton};

/// Boolean matrix over `left × right`, used as the fixpoint iterate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PairSet {
    right: usize,
    bits: Vec<bool>,
}

impl PairSet {
    pub(crate) fn full(left: usize, right: usize) -> Self {
        PairSet { right, bits: vec![true; left * right] }
    }

    pub(crate) fn get(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.right + y]
    }

    fn clear(&mut self, x: usize, y: usize) {
        self.bits[x * self.right + y] = false;
    }

    pub(crate) fn to_relation(&self, left: usize) -> Relation {
        let pairs =
            (0..left).flat_map(|x| (0..self.right).map(move |y| (x, y))).filter(|&(x, y)| self.get(x, y));
        Relation::from_pairs(left, self.right, pairs).expect("pairs lie in the carrier")
    }
}

/// Naive greatest fixpoint: start from all pairs and, in rounds, drop every
/// pair whose clause fails against the previous round. Returns every round's
/// iterate, the last one being the fixpoint.
pub(crate) fn gfp_rounds(
    left: usize,
    right: usize,
    keep: impl Fn(&PairSet, usize, usize) -> bool,
) -> Vec<PairSet> {
    let mut current = PairSet::full(left, right);
    let mut rounds = vec![current.clone()];
    loop {
        let mut next = current.clone();
        let mut removed = false;
        for x in 0..left {
            for y in 0..right {
                if current.get(x, y) && !keep(&current, x, y) {
                    next.clear(x, y);
                    removed = true;
                }
            }
        }
        if !removed {
            return rounds;
        }
        rounds.push(next.clone());
        current = next;
    }
}

/// Worklist greatest fixpoint: after removing a pair, only pairs that have it
/// as a successor pair (`succ`) are rechecked.
pub(crate) fn gfp_worklist(
    left: usize,
    right: usize,
    keep: impl Fn(&PairSet, usize, usize) -> bool,
    succ: impl Fn(usize, usize) -> Vec<(usize, usize)>,
) -> PairSet {
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); left * right];
    for x in 0..left {
        for y in 0..right {
            for (a, b) in succ(x, y) {
                preds[a * right + b].push((x, y));
            }
        }
    }
    let mut current = PairSet::full(left, right);
    let mut queued = vec![true; left * right];
    let mut work: VecDeque<(usize, usize)> =
        (0..left).flat_map(|x| (0..right).map(move |y| (x, y))).collect();
    while let Some((x, y)) = work.pop_front() {
        queued[x * right + y] = false;
        if current.get(x, y) && !keep(&current, x, y) {
            current.clear(x, y);
            for &(p, q) in &preds[x * right + y] {
                if current.get(p, q) && !queued[p * right + q] {
                    queued[p * right + q] = true;
                    work.push_back((p, q));
                }
            }
        }
    }
    current
}

/// Successor pairs of `(x, y)` under commonly defined inputs.
fn mealy_common_successors(m: &PartialMealy, x: usize, y: usize) -> Vec<(usize, usize)> {
    (0..m.inputs().len())
        .filter_map(|i| match (m.transition(x, i), m.transition(y, i)) {
            (Some(a), Some(b)) => Some((a.target, b.target)),
            _ => None,
        })
        .collect()
}

fn uncertain_clause(m: &PartialMealy, r: &PairSet, x: usize, y: usize) -> bool {
    (0..m.inputs().len()).all(|i| match (m.transition(x, i), m.transition(y, i)) {
        (Some(a), Some(b)) => a.output == b.output && r.get(a.target, b.target),
        _ => true,
    })
}

fn bisim_clause(m: &PartialMealy, r: &PairSet, x: usize, y: usize) -> bool {
    (0..m.inputs().len()).all(|i| match (m.transition(x, i), m.transition(y, i)) {
        (Some(a), Some(b)) => a.output == b.output && r.get(a.target, b.target),
        (None, None) => true,
        _ => false,
    })
}

/// The greatest relation `R` on the states of `m` such that whenever
/// `(x, y) ∈ R` and both `x -i/o-> x'` and `y -i/o'-> y'` exist, then `o = o'`
/// and `(x', y') ∈ R`.
pub fn uncertain_bisimilarity(m: &PartialMealy) -> Relation {
    let n = m.state_count();
    gfp_worklist(n, n, |r, x, y| uncertain_clause(m, r, x, y), |x, y| mealy_common_successors(m, x, y))
        .to_relation(n)
}

/// The iterates of the naive round-based computation of
/// [`uncertain_bisimilarity`]; the last element is the fixpoint.
pub fn uncertain_bisimilarity_rounds(m: &PartialMealy) -> Vec<Relation> {
    let n = m.state_count();
    gfp_rounds(n, n, |r, x, y| uncertain_clause(m, r, x, y)).iter().map(|p| p.to_relation(n)).collect()
}

/// Ordinary bisimilarity: related states are defined on the same inputs,
/// with equal outputs and related successors.
pub fn bisimilarity(m: &PartialMealy) -> Relation {
    let n = m.state_count();
    gfp_worklist(n, n, |r, x, y| bisim_clause(m, r, x, y), |x, y| mealy_common_successors(m, x, y))
        .to_relation(n)
}

pub fn bisimilarity_rounds(m: &PartialMealy) -> Vec<Relation> {
    let n = m.state_count();
    gfp_rounds(n, n, |r, x, y| bisim_clause(m, r, x, y)).iter().map(|p| p.to_relation(n)).collect()
}

fn sa_successor_pairs(a: &SuspensionAutomaton, x: usize, y: usize) -> Vec<(usize, usize)> {
    let ins = (0..a.inputs().len()).filter_map(|i| Some((a.input_step(x, i)?, a.input_step(y, i)?)));
    let outs = (0..a.outputs().len()).filter_map(|o| Some((a.output_step(x, o)?, a.output_step(y, o)?)));
    ins.chain(outs).collect()
}

fn ioco_clause(a: &SuspensionAutomaton, r: &PairSet, x: usize, y: usize) -> bool {
    let inputs_ok = (0..a.inputs().len()).all(|i| match (a.input_step(x, i), a.input_step(y, i)) {
        (Some(p), Some(q)) => r.get(p, q),
        _ => true,
    });
    inputs_ok
        && (0..a.outputs().len()).any(|o| match (a.output_step(x, o), a.output_step(y, o)) {
            (Some(p), Some(q)) => r.get(p, q),
            _ => false,
        })
}

/// The greatest ioco compatibility relation: related states agree on the
/// futures of their common inputs and share some output with related
/// successors. The existential output clause is evaluated against the
/// current iterate in every round.
pub fn ioco_compatibility(a: &SuspensionAutomaton) -> Relation {
    let n = a.state_count();
    gfp_worklist(n, n, |r, x, y| ioco_clause(a, r, x, y), |x, y| sa_successor_pairs(a, x, y)).to_relation(n)
}

pub fn ioco_compatibility_rounds(a: &SuspensionAutomaton) -> Vec<Relation> {
    let n = a.state_count();
    gfp_rounds(n, n, |r, x, y| ioco_clause(a, r, x, y)).iter().map(|p| p.to_relation(n)).collect()
}

/// Checks the two compatibility clauses for every pair of `r` (which need
/// not be the greatest such relation).
pub fn is_ioco_compatibility_relation(a: &SuspensionAutomaton, r: &Relation) -> bool {
    let n = a.state_count();
    if r.left_size() != n || r.right_size() != n {
        return false;
    }
    let mut set = PairSet::full(n, n);
    for x in 0..n {
        for y in 0..n {
            if !r.contains(x, y) {
                set.clear(x, y);
            }
        }
    }
    r.pairs().all(|(x, y)| ioco_clause(a, &set, x, y))
}

/// `R ⊆ (c × c)⁻¹(F̂⊑(R))`: every related pair has one-step behaviours in
/// the uncertain lifting of `R`, i.e. a witness structure over `R` exists.
pub fn relation_is_uncertain_bisimulation<C: Coalgebra>(c: &C, r: &Relation) -> Result<bool> {
    for (x, y) in r.pairs() {
        if !in_uncertain_lifting(r, &c.structure(x), &c.structure(y))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `R ⊆ (c × c)⁻¹(F̂(R))`
pub fn relation_is_bisimulation<C: Coalgebra>(c: &C, r: &Relation) -> Result<bool> {
    for (x, y) in r.pairs() {
        if !in_lifting(r, &c.structure(x), &c.structure(y))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A non-empty input word on which both states produce an output and the
/// outputs differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApartnessWitness {
    pub word: Vec<usize>,
    pub left_output: usize,
    pub right_output: usize,
}

impl ApartnessWitness {
    /// `word left right` with input symbols joined by `.`.
    pub fn display<'a>(&'a self, m: &'a PartialMealy) -> impl fmt::Display + 'a {
        WitnessDisplay { w: self, m }
    }
}

struct WitnessDisplay<'a> {
    w: &'a ApartnessWitness,
    m: &'a PartialMealy,
}

impl fmt::Display for WitnessDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.m.word_names(&self.w.word).join("."),
            self.m.outputs().name(self.w.left_output),
            self.m.outputs().name(self.w.right_output)
        )
    }
}

/// A shortest separating word for `x` and `y`, or `None` if they are
/// uncertain bisimilar.
///
/// Breadth-first search over the pairs reachable by commonly defined inputs,
/// exploring inputs in declaration order; among the shortest witnesses the
/// returned one is the least in that order.
pub fn apartness_witness(m: &PartialMealy, x: usize, y: usize) -> Result<Option<ApartnessWitness>> {
    m.run(x, &[])?;
    m.run(y, &[])?;
    let n = m.state_count();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n * n];
    let mut seen = vec![false; n * n];
    seen[x * n + y] = true;
    let mut queue = VecDeque::from([(x, y)]);
    let path_to = |parent: &[Option<(usize, usize)>], mut u: usize, mut v: usize| {
        let mut word = Vec::new();
        while let Some((p, i)) = parent[u * n + v] {
            word.push(i);
            u = p / n;
            v = p % n;
        }
        word.reverse();
        word
    };
    while let Some((u, v)) = queue.pop_front() {
        for i in 0..m.inputs().len() {
            let (Some(a), Some(b)) = (m.transition(u, i), m.transition(v, i)) else {
                continue;
            };
            if a.output != b.output {
                let mut word = path_to(&parent, u, v);
                word.push(i);
                return Ok(Some(ApartnessWitness { word, left_output: a.output, right_output: b.output }));
            }
            let k = a.target * n + b.target;
            if !seen[k] {
                seen[k] = true;
                parent[k] = Some((u * n + v, i));
                queue.push_back((a.target, b.target));
            }
        }
    }
    Ok(None)
}

/// Default number of words the semantic oracle may enumerate before it
/// falls back to product reachability.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 2_000_000;

/// Environment variable overriding [`DEFAULT_ENUMERATION_BUDGET`].
pub const BUDGET_ENV: &str = "APARTNESS_ENUM_BUDGET";

pub fn enumeration_budget() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_ENUMERATION_BUDGET)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    /// Every word up to the length bound on which both runs are defined was
    /// evaluated.
    Enumeration { words: u64 },
    /// The budget was exhausted; the answer comes from a breadth-first search
    /// of the commonly defined product graph.
    ProductReachability,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    /// No word has two defined, different outputs.
    pub compatible: bool,
    pub method: OracleMethod,
}

/// Brute-force semantic check: `⟦x⟧(w) = ⟦y⟧(w)` for every non-empty word of
/// length at most `|C|²` on which both sides are defined.
///
/// Words are enumerated depth-first, skipping extensions of words on which
/// either run is already undefined (their semantics is undefined too). If
/// more than `budget` words would be visited, the search is abandoned and the
/// answer is computed by product reachability instead, as reported in
/// [`OracleVerdict::method`].
pub fn semantic_oracle_uncertain(m: &PartialMealy, x: usize, y: usize, budget: u64) -> Result<OracleVerdict> {
    m.run(x, &[])?;
    m.run(y, &[])?;
    let n = m.state_count();
    let max_len = n * n;
    let mut visited: u64 = 0;
    // (state of x, state of y, length of the word leading here)
    let mut stack = vec![(x, y, 0usize)];
    while let Some((u, v, len)) = stack.pop() {
        for i in (0..m.inputs().len()).rev() {
            let (Some(a), Some(b)) = (m.transition(u, i), m.transition(v, i)) else {
                continue;
            };
            visited += 1;
            if visited > budget {
                return Ok(OracleVerdict {
                    compatible: product_reachability_compatible(m, x, y),
                    method: OracleMethod::ProductReachability,
                });
            }
            if a.output != b.output {
                return Ok(OracleVerdict {
                    compatible: false,
                    method: OracleMethod::Enumeration { words: visited },
                });
            }
            if len + 1 < max_len {
                stack.push((a.target, b.target, len + 1));
            }
        }
    }
    Ok(OracleVerdict { compatible: true, method: OracleMethod::Enumeration { words: visited } })
}

fn product_reachability_compatible(m: &PartialMealy, x: usize, y: usize) -> bool {
    let n = m.state_count();
    let mut seen = vec![false; n * n];
    seen[x * n + y] = true;
    let mut stack = vec![(x, y)];
    while let Some((u, v)) = stack.pop() {
        for i in 0..m.inputs().len() {
            if let (Some(a), Some(b)) = (m.transition(u, i), m.transition(v, i)) {
                if a.output != b.output {
                    return false;
                }
                if !std::mem::replace(&mut seen[a.target * n + b.target], true) {
                    stack.push((a.target, b.target));
                }
            }
        }
    }
    true
}
