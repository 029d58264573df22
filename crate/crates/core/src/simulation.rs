//! Simulations in the Hughes–Jacobs and open-map styles, span structures
//! for uncertain bisimulations, and joint simulators.
//!
//! A span witness is a relation `R ⊆ C × D` together with a structure
//! `r: R → F R`. It is materialized as a machine whose states are the pairs
//! of `R`, named `(<left>|<right>)`, and checked through its projections.

use std::collections::{BTreeMap, VecDeque};

use crate::bisim::{apartness_witness, ioco_compatibility, uncertain_bisimilarity, ApartnessWitness};
use crate::error::{contract, Error, Result};
use crate::morphisms::{check_morphism, MorphismKind, StateMap};
use crate::relation::Relation;
use crate::systems::{
    Alphabet, Coalgebra, Machine, PartialMealy, Successor, SuspensionAutomaton, Transition,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpanStyle {
    /// `π1` oplax, `π2` lax.
    HughesJacobs,
    /// `π1` strict, `π2` lax.
    OpenMap,
    /// `π1` and `π2` oplax: the span form of an uncertain bisimulation.
    Uncertain,
}

impl SpanStyle {
    fn projections(self) -> (MorphismKind, MorphismKind) {
        match self {
            SpanStyle::HughesJacobs => (MorphismKind::Oplax, MorphismKind::Lax),
            SpanStyle::OpenMap => (MorphismKind::Strict, MorphismKind::Lax),
            SpanStyle::Uncertain => (MorphismKind::Oplax, MorphismKind::Oplax),
        }
    }
}

impl std::str::FromStr for SpanStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hj" | "hughes-jacobs" => Ok(SpanStyle::HughesJacobs),
            "openmap" | "open-map" => Ok(SpanStyle::OpenMap),
            "uncertain" => Ok(SpanStyle::Uncertain),
            _ => Err(contract(format!("unknown simulation style `{s}`"))),
        }
    }
}

/// A relation with an optional span structure. `structure[k]` is the
/// behaviour of the `k`-th pair of `relation` (in its iteration order), over
/// the carrier of pair indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationWitness {
    pub relation: Relation,
    pub structure: Option<Vec<Successor>>,
    pub style: SpanStyle,
}

fn pair_index(r: &Relation) -> BTreeMap<(usize, usize), usize> {
    r.pairs().enumerate().map(|(k, p)| (p, k)).collect()
}

fn pair_names(r: &Relation, left: &Alphabet, right: &Alphabet) -> Result<Alphabet> {
    Alphabet::new(r.pairs().map(|(x, y)| format!("({}|{})", left.name(x), right.name(y))))
}

fn check_kinds(src: &Machine, dst: &Machine, r: &Relation) -> Result<()> {
    let same = match (src, dst) {
        (Machine::Mealy(a), Machine::Mealy(b)) => a.alphabets() == b.alphabets(),
        (Machine::Sa(a), Machine::Sa(b)) => a.alphabets() == b.alphabets(),
        _ => return Err(contract("simulation between systems of different kinds")),
    };
    if !same {
        return Err(contract("simulation between systems with different alphabets"));
    }
    if r.left_size() != src.states().len() || r.right_size() != dst.states().len() {
        return Err(contract("relation does not fit the two systems"));
    }
    Ok(())
}

impl SimulationWitness {
    /// The span middle as a machine, with the projections `π1`, `π2`.
    pub fn span(&self, src: &Machine, dst: &Machine) -> Result<(Machine, StateMap, StateMap)> {
        check_kinds(src, dst, &self.relation)?;
        let structure = self.structure.as_ref().ok_or_else(|| contract("witness has no structure"))?;
        if structure.len() != self.relation.len() {
            return Err(contract("one structure per related pair is required"));
        }
        let names = pair_names(&self.relation, src.states(), dst.states())?;
        let n = names.len();
        if structure.iter().any(|s| s.elements().iter().any(|&k| k >= n)) {
            return Err(contract("structure refers to a pair outside the relation"));
        }
        let span = match (src, dst) {
            (Machine::Mealy(a), _) => {
                let mut m = PartialMealy::new("span", a.inputs().clone(), a.outputs().clone(), names);
                for (k, s) in structure.iter().enumerate() {
                    let Successor::Mealy(entries) = s else {
                        return Err(contract("structure of the wrong kind"));
                    };
                    if entries.len() != a.inputs().len() {
                        return Err(contract("structure of the wrong width"));
                    }
                    for (i, e) in entries.iter().enumerate() {
                        let t = e.map(|(output, target)| Transition { output, target });
                        m.set_transition(k, i, t);
                    }
                }
                Machine::Mealy(m)
            }
            (Machine::Sa(a), _) => {
                let mut it = Vec::new();
                let mut ot = Vec::new();
                for (k, s) in structure.iter().enumerate() {
                    let Successor::Sa { inputs, outputs } = s else {
                        return Err(contract("structure of the wrong kind"));
                    };
                    if inputs.len() != a.inputs().len() || outputs.len() != a.outputs().len() {
                        return Err(contract("structure of the wrong width"));
                    }
                    it.extend(inputs.iter().enumerate().filter_map(|(l, t)| t.map(|t| (k, l, t))));
                    ot.extend(outputs.iter().enumerate().filter_map(|(l, t)| t.map(|t| (k, l, t))));
                }
                Machine::Sa(SuspensionAutomaton::from_parts(
                    "span",
                    a.inputs().clone(),
                    a.outputs().clone(),
                    names,
                    &it,
                    &ot,
                )?)
            }
        };
        let (p1, p2): (Vec<usize>, Vec<usize>) = self.relation.pairs().unzip();
        let (pi1, pi2) = match (&span, src, dst) {
            (Machine::Mealy(s), Machine::Mealy(a), Machine::Mealy(b)) => {
                (StateMap::new(s, a, p1)?, StateMap::new(s, b, p2)?)
            }
            (Machine::Sa(s), Machine::Sa(a), Machine::Sa(b)) => {
                (StateMap::new(s, a, p1)?, StateMap::new(s, b, p2)?)
            }
            _ => unreachable!("kinds checked"),
        };
        Ok((span, pi1, pi2))
    }

    /// Checks the projection conditions of the declared style. Without a
    /// structure, falls back to the relational check.
    pub fn verify(&self, src: &Machine, dst: &Machine) -> Result<bool> {
        if self.structure.is_none() {
            return check_simulation(&self.relation, src, dst, self.style);
        }
        let (span, pi1, pi2) = self.span(src, dst)?;
        let (k1, k2) = self.style.projections();
        let ok = match (&span, src, dst) {
            (Machine::Mealy(s), Machine::Mealy(a), Machine::Mealy(b)) => {
                check_morphism(s, a, &pi1, k1)?.is_ok() && check_morphism(s, b, &pi2, k2)?.is_ok()
            }
            (Machine::Sa(s), Machine::Sa(a), Machine::Sa(b)) => {
                check_morphism(s, a, &pi1, k1)?.is_ok() && check_morphism(s, b, &pi2, k2)?.is_ok()
            }
            _ => unreachable!("kinds checked"),
        };
        Ok(ok)
    }
}

/// Relational simulation check.
///
/// Mealy (both styles): every `x -i/o-> x'` with `(x, z) ∈ R` is matched by
/// `z -i/o-> z'` with `(x', z') ∈ R`.
///
/// Suspension automata, Hughes–Jacobs style: inputs of `x` are matched by
/// `z` as above, and every output `z -!o-> z'` is matched by `x -!o-> x'` with
/// `(x', z') ∈ R`. The open-map style additionally needs, for every output
/// `x -!o-> x'` that `z` lacks, some `w` with `(x', w) ∈ R`.
///
/// The `Uncertain` style is not a simulation style and is rejected.
pub fn check_simulation(r: &Relation, src: &Machine, dst: &Machine, style: SpanStyle) -> Result<bool> {
    check_kinds(src, dst, r)?;
    if style == SpanStyle::Uncertain {
        return Err(contract("`uncertain` is a span style, not a simulation style"));
    }
    Ok(match (src, dst) {
        (Machine::Mealy(a), Machine::Mealy(b)) => mealy_simulation(r, a, b),
        (Machine::Sa(a), Machine::Sa(b)) => sa_simulation(r, a, b, style),
        _ => unreachable!("kinds checked"),
    })
}

fn mealy_simulation(r: &Relation, a: &PartialMealy, b: &PartialMealy) -> bool {
    r.pairs().all(|(x, z)| {
        (0..a.inputs().len()).all(|i| match (a.transition(x, i), b.transition(z, i)) {
            (None, _) => true,
            (Some(s), Some(t)) => s.output == t.output && r.contains(s.target, t.target),
            (Some(_), None) => false,
        })
    })
}

fn sa_simulation(r: &Relation, a: &SuspensionAutomaton, b: &SuspensionAutomaton, style: SpanStyle) -> bool {
    r.pairs().all(|(x, z)| {
        let inputs = (0..a.inputs().len()).all(|i| match (a.input_step(x, i), b.input_step(z, i)) {
            (None, _) => true,
            (Some(s), Some(t)) => r.contains(s, t),
            (Some(_), None) => false,
        });
        let outputs = (0..a.outputs().len()).all(|o| match (a.output_step(x, o), b.output_step(z, o)) {
            (_, None) => true,
            (Some(s), Some(t)) => r.contains(s, t),
            (None, Some(_)) => false,
        });
        let open = style != SpanStyle::OpenMap
            || (0..a.outputs().len()).all(|o| match (a.output_step(x, o), b.output_step(z, o)) {
                (Some(s), None) => r.has_successor(s),
                _ => true,
            });
        inputs && outputs && open
    })
}

/// Builds a span structure witnessing `r` as a simulation of the given
/// style, or `None` if `r` is not one.
pub fn synthesize_simulation_structure(
    r: &Relation,
    src: &Machine,
    dst: &Machine,
    style: SpanStyle,
) -> Result<Option<SimulationWitness>> {
    if !check_simulation(r, src, dst, style)? {
        return Ok(None);
    }
    let idx = pair_index(r);
    let structure = r
        .pairs()
        .map(|(x, z)| match (src, dst) {
            (Machine::Mealy(a), Machine::Mealy(b)) => Successor::Mealy(
                (0..a.inputs().len())
                    .map(|i| {
                        let s = a.transition(x, i)?;
                        let t = b.transition(z, i).expect("simulation checked");
                        Some((s.output, idx[&(s.target, t.target)]))
                    })
                    .collect(),
            ),
            (Machine::Sa(a), Machine::Sa(b)) => {
                let inputs = (0..a.inputs().len())
                    .map(|i| Some(idx[&(a.input_step(x, i)?, b.input_step(z, i)?)]))
                    .collect();
                let outputs = (0..a.outputs().len())
                    .map(|o| match (a.output_step(x, o), b.output_step(z, o)) {
                        (Some(s), Some(t)) => Some(idx[&(s, t)]),
                        (Some(s), None) if style == SpanStyle::OpenMap => {
                            let w = r.pairs().find(|&(p, _)| p == s).expect("open clause checked");
                            Some(idx[&w])
                        }
                        _ => None,
                    })
                    .collect();
                Successor::Sa { inputs, outputs }
            }
            _ => unreachable!("kinds checked"),
        })
        .collect();
    Ok(Some(SimulationWitness { relation: r.clone(), structure: Some(structure), style }))
}

/// Turns a Hughes–Jacobs witness between Mealy machines into an open-map
/// one by restricting its structure along `π1`: entries undefined at the
/// left state are deleted.
pub fn hj_to_openmap(w: &SimulationWitness, src: &Machine, dst: &Machine) -> Result<SimulationWitness> {
    let Machine::Mealy(a) = src else {
        return Err(Error::Unsupported(
            "conversion to open-map style is only available for Mealy machines".into(),
        ));
    };
    if w.style != SpanStyle::HughesJacobs {
        return Err(contract("expected a Hughes–Jacobs witness"));
    }
    if !w.verify(src, dst)? {
        return Err(contract("witness is not a valid Hughes–Jacobs simulation"));
    }
    let structure = w.structure.as_ref().expect("verified witnesses with structure");
    let restricted = w
        .relation
        .pairs()
        .zip(structure)
        .map(|((x, _), s)| match s {
            Successor::Mealy(entries) => Successor::Mealy(
                entries.iter().enumerate().map(|(i, e)| a.transition(x, i).and(*e)).collect(),
            ),
            other => other.clone(),
        })
        .collect();
    Ok(SimulationWitness {
        relation: w.relation.clone(),
        structure: Some(restricted),
        style: SpanStyle::OpenMap,
    })
}

/// Why [`synthesize_span_structure`] failed at a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanFailure {
    pub pair: (usize, usize),
    pub input: usize,
    /// Outputs differ (`true`) or the successors are unrelated (`false`).
    pub output_mismatch: bool,
}

/// Builds the join structure over a reflexive relation `r` on the states of
/// `m`: for `(x, y) ∈ r` and input `i`,
///
/// * both defined, `x -i/o-> x'` and `y -i/o-> y'`: `(o, (x', y'))`,
/// * one side defined, `u -i/o-> u'`: `(o, (u', u'))`,
/// * neither: undefined.
///
/// The result witnesses `r` as an uncertain bisimulation (both projections
/// oplax). Fails at the first pair where the both-defined case breaks.
pub fn synthesize_span_structure(
    m: &PartialMealy,
    r: &Relation,
) -> Result<std::result::Result<SimulationWitness, SpanFailure>> {
    if r.left_size() != m.state_count() || !r.is_reflexive() {
        return Err(contract("span synthesis needs a reflexive relation on the machine"));
    }
    let idx = pair_index(r);
    let mut structure = Vec::with_capacity(r.len());
    for (x, y) in r.pairs() {
        let both = |i| Some((m.transition(x, i)?, m.transition(y, i)?));
        let ni = m.inputs().len();
        // Output clashes are reported before unrelated successors.
        let clash = (0..ni).find(|&i| both(i).is_some_and(|(a, b)| a.output != b.output));
        let unrelated = (0..ni).find(|&i| both(i).is_some_and(|(a, b)| !r.contains(a.target, b.target)));
        if let Some(input) = clash.or(unrelated) {
            return Ok(Err(SpanFailure { pair: (x, y), input, output_mismatch: clash.is_some() }));
        }
        let mut entries = Vec::with_capacity(ni);
        for i in 0..ni {
            let e = match (m.transition(x, i), m.transition(y, i)) {
                (Some(a), Some(b)) => Some((a.output, idx[&(a.target, b.target)])),
                (Some(a), None) | (None, Some(a)) => Some((a.output, idx[&(a.target, a.target)])),
                (None, None) => None,
            };
            entries.push(e);
        }
        structure.push(Successor::Mealy(entries));
    }
    Ok(Ok(SimulationWitness { relation: r.clone(), structure: Some(structure), style: SpanStyle::Uncertain }))
}

/// A machine with a state simulating both given states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointSimulator {
    /// States are pairs `(u|v)` of the original machine.
    pub machine: PartialMealy,
    /// `pairs[k]` is the pair underlying state `k` of `machine`.
    pub pairs: Vec<(usize, usize)>,
    /// The state `(x|y)`.
    pub start: usize,
    /// `{(u, (u|v))}` with a Hughes–Jacobs structure.
    pub left: SimulationWitness,
    /// `{(v, (u|v))}` with a Hughes–Jacobs structure.
    pub right: SimulationWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JointOutcome {
    Joint(JointSimulator),
    Apart(ApartnessWitness),
}

/// Pairs reachable from `(x, y)` under the join case table, plus extra
/// pairs requested by `extra` (e.g. diagonals), in BFS order.
fn reachable_pairs(
    start: (usize, usize),
    mut step: impl FnMut((usize, usize)) -> Vec<(usize, usize)>,
) -> Vec<(usize, usize)> {
    let mut seen = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for q in step(p) {
            if !seen.contains(&q) {
                seen.push(q);
                queue.push_back(q);
            }
        }
    }
    seen
}

fn join_mealy_entry(m: &PartialMealy, (u, v): (usize, usize), i: usize) -> Option<(usize, (usize, usize))> {
    match (m.transition(u, i), m.transition(v, i)) {
        (Some(a), Some(b)) => Some((a.output, (a.target, b.target))),
        (Some(a), None) | (None, Some(a)) => Some((a.output, (a.target, a.target))),
        (None, None) => None,
    }
}

/// A joint simulator for `x` and `y`, or an apartness witness.
///
/// The join machine has as states the pairs reachable from `(x, y)` under
/// the case table of [`synthesize_span_structure`]. The state `(x|y)`
/// simulates both `x` and `y`; the two simulations are returned with
/// Hughes–Jacobs structures in which `π2` is strict.
pub fn joint_simulator(m: &PartialMealy, x: usize, y: usize) -> Result<JointOutcome> {
    if let Some(w) = apartness_witness(m, x, y)? {
        return Ok(JointOutcome::Apart(w));
    }
    let ni = m.inputs().len();
    let pairs = reachable_pairs((x, y), |p| {
        (0..ni).filter_map(|i| join_mealy_entry(m, p, i).map(|(_, q)| q)).collect()
    });
    let names = Alphabet::new(
        pairs.iter().map(|&(u, v)| format!("({}|{})", m.states().name(u), m.states().name(v))),
    )?;
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut join =
        PartialMealy::new(format!("{}-join", m.name()), m.inputs().clone(), m.outputs().clone(), names);
    for (k, &p) in pairs.iter().enumerate() {
        for i in 0..ni {
            if let Some((o, q)) = join_mealy_entry(m, p, i) {
                join.set_transition(k, i, Some(Transition { output: o, target: index[&q] }));
            }
        }
    }
    let left = joint_witness(m, &join, &pairs, |(u, _)| u)?;
    let right = joint_witness(m, &join, &pairs, |(_, v)| v)?;
    Ok(JointOutcome::Joint(JointSimulator { machine: join, pairs, start: 0, left, right }))
}

/// `S = {(side(p), p)}` with structure `r(s, p)(i) = (o, (side(p'), p'))`
/// for every transition `p -i/o-> p'` of the join machine.
fn joint_witness(
    m: &PartialMealy,
    join: &PartialMealy,
    pairs: &[(usize, usize)],
    side: impl Fn((usize, usize)) -> usize,
) -> Result<SimulationWitness> {
    let relation = Relation::from_pairs(
        m.state_count(),
        join.state_count(),
        pairs.iter().enumerate().map(|(k, &p)| (side(p), k)),
    )?;
    let idx = pair_index(&relation);
    let structure = relation
        .pairs()
        .map(|(_, k)| {
            Successor::Mealy(
                (0..m.inputs().len())
                    .map(|i| {
                        join.transition(k, i).map(|t| (t.output, idx[&(side(pairs[t.target]), t.target)]))
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(SimulationWitness { relation, structure: Some(structure), style: SpanStyle::HughesJacobs })
}

/// The suspension-automaton counterpart of [`JointSimulator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaJointSimulator {
    pub automaton: SuspensionAutomaton,
    pub pairs: Vec<(usize, usize)>,
    pub start: usize,
    /// `{(u, (u|v))}`
    pub left: Relation,
    /// `{(v, (u|v))}`
    pub right: Relation,
}

/// Joint conforming state for ioco-compatible `x` and `y`, or `None` if
/// they are not compatible.
///
/// A pair state has the union of the input transitions (diagonal successor
/// when only one side has the input) and the common outputs whose successor
/// pair is itself compatible. For every output that one side has and the
/// pair state lacks, the diagonal pair of its successor is added to the
/// carrier so that the open-map clause can be met.
pub fn sa_joint_simulator(a: &SuspensionAutomaton, x: usize, y: usize) -> Result<Option<SaJointSimulator>> {
    a.state_index(a.states().name(x))?;
    a.state_index(a.states().name(y))?;
    let compat = ioco_compatibility(a);
    if !compat.contains(x, y) {
        return Ok(None);
    }
    let ni = a.inputs().len();
    let no = a.outputs().len();
    let input_entry = |(u, v): (usize, usize), i| match (a.input_step(u, i), a.input_step(v, i)) {
        (Some(p), Some(q)) => Some((p, q)),
        (Some(p), None) | (None, Some(p)) => Some((p, p)),
        (None, None) => None,
    };
    let output_entry = |(u, v): (usize, usize), o| match (a.output_step(u, o), a.output_step(v, o)) {
        (Some(p), Some(q)) if compat.contains(p, q) => Some((p, q)),
        _ => None,
    };
    let pairs = reachable_pairs((x, y), |p| {
        let mut next: Vec<(usize, usize)> = (0..ni).filter_map(|i| input_entry(p, i)).collect();
        next.extend((0..no).filter_map(|o| output_entry(p, o)));
        for o in 0..no {
            if output_entry(p, o).is_none() {
                for s in [a.output_step(p.0, o), a.output_step(p.1, o)].into_iter().flatten() {
                    next.push((s, s));
                }
            }
        }
        next
    });
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut it = Vec::new();
    let mut ot = Vec::new();
    for (k, &p) in pairs.iter().enumerate() {
        it.extend((0..ni).filter_map(|i| input_entry(p, i).map(|q| (k, i, index[&q]))));
        ot.extend((0..no).filter_map(|o| output_entry(p, o).map(|q| (k, o, index[&q]))));
    }
    let names = Alphabet::new(
        pairs.iter().map(|&(u, v)| format!("({}|{})", a.states().name(u), a.states().name(v))),
    )?;
    let automaton = SuspensionAutomaton::from_parts(
        format!("{}-join", a.name()),
        a.inputs().clone(),
        a.outputs().clone(),
        names,
        &it,
        &ot,
    )?;
    let side = |f: fn((usize, usize)) -> usize| {
        Relation::from_pairs(a.state_count(), pairs.len(), pairs.iter().enumerate().map(|(k, &p)| (f(p), k)))
    };
    Ok(Some(SaJointSimulator { automaton, start: 0, left: side(|p| p.0)?, right: side(|p| p.1)?, pairs }))
}

/// Every pair of `uncertain_bisimilarity(m)` together with its joint
/// simulator; convenience for exhaustive checks.
pub fn all_joint_simulators(m: &PartialMealy) -> Result<Vec<((usize, usize), JointSimulator)>> {
    let ub = uncertain_bisimilarity(m);
    let mut out = Vec::new();
    for (x, y) in ub.pairs() {
        match joint_simulator(m, x, y)? {
            JointOutcome::Joint(j) => out.push(((x, y), j)),
            JointOutcome::Apart(_) => return Err(contract("fixpoint and witness search disagree")),
        }
    }
    Ok(out)
}
