//! Strict, lax and oplax coalgebra morphisms, kernels, restriction along an
//! oplax map, and the lax-identifiability procedure.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{contract, Error, Result};
use crate::relation::Relation;
use crate::systems::{Alphabet, Coalgebra, Entry, Machine, PartialMealy, Successor, Transition};

/// A total map from the states of one system to the states of another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMap {
    source: String,
    target: String,
    mapping: Vec<usize>,
    target_size: usize,
}

impl StateMap {
    pub fn new<C: Coalgebra + ?Sized, D: Coalgebra + ?Sized>(
        src: &C,
        dst: &D,
        mapping: Vec<usize>,
    ) -> Result<Self> {
        if mapping.len() != src.state_count() {
            return Err(contract(format!(
                "map from `{}` must assign all {} states",
                src.name(),
                src.state_count()
            )));
        }
        if mapping.iter().any(|&y| y >= dst.state_count()) {
            return Err(contract(format!("map leaves the states of `{}`", dst.name())));
        }
        Ok(StateMap {
            source: src.name().to_string(),
            target: dst.name().to_string(),
            mapping,
            target_size: dst.state_count(),
        })
    }

    /// Builds a map from `(source state, target state)` name pairs; every
    /// source state must occur exactly once.
    pub fn from_names<C: Coalgebra + ?Sized, D: Coalgebra + ?Sized>(
        src: &C,
        dst: &D,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut mapping: Vec<Option<usize>> = vec![None; src.state_count()];
        for &(a, b) in pairs {
            let x = src.states().index_of(a).ok_or_else(|| Error::UnknownState(a.to_string()))?;
            let y = dst.states().index_of(b).ok_or_else(|| Error::UnknownState(b.to_string()))?;
            if mapping[x].replace(y).is_some() {
                return Err(contract(format!("state `{a}` is mapped twice")));
            }
        }
        let mapping = mapping
            .iter()
            .enumerate()
            .map(|(x, y)| {
                y.ok_or_else(|| contract(format!("state `{}` is not mapped", src.states().name(x))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(src, dst, mapping)
    }

    pub fn identity<C: Coalgebra + ?Sized>(c: &C) -> Self {
        StateMap {
            source: c.name().to_string(),
            target: c.name().to_string(),
            mapping: (0..c.state_count()).collect(),
            target_size: c.state_count(),
        }
    }

    pub fn source_name(&self) -> &str {
        &self.source
    }

    pub fn target_name(&self) -> &str {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.mapping[x]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    /// `other ∘ self`
    pub fn then(&self, other: &StateMap) -> Result<StateMap> {
        if self.target_size != other.mapping.len() {
            return Err(contract("composition of maps with mismatched carriers"));
        }
        Ok(StateMap {
            source: self.source.clone(),
            target: other.target.clone(),
            mapping: self.mapping.iter().map(|&y| other.mapping[y]).collect(),
            target_size: other.target_size,
        })
    }

    /// The map as a relation (its graph).
    pub fn graph(&self) -> Relation {
        Relation::graph(&self.mapping, self.target_size).expect("map is in range")
    }

    fn check_systems<C: Coalgebra + ?Sized>(&self, src: &C, dst: &C) -> Result<()> {
        if src.state_count() != self.mapping.len() || dst.state_count() != self.target_size {
            return Err(contract(format!(
                "map `{} → {}` does not fit `{}` and `{}`",
                self.source,
                self.target,
                src.name(),
                dst.name()
            )));
        }
        if src.shape() != dst.shape() || src.alphabets() != dst.alphabets() {
            return Err(contract(format!("`{}` and `{}` have different alphabets", src.name(), dst.name())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MorphismKind {
    Strict,
    Lax,
    Oplax,
}

impl MorphismKind {
    pub fn name(self) -> &'static str {
        match self {
            MorphismKind::Strict => "strict",
            MorphismKind::Lax => "lax",
            MorphismKind::Oplax => "oplax",
        }
    }

    fn wants_lax(self) -> bool {
        matches!(self, MorphismKind::Strict | MorphismKind::Lax)
    }

    fn wants_oplax(self) -> bool {
        matches!(self, MorphismKind::Strict | MorphismKind::Oplax)
    }
}

impl std::str::FromStr for MorphismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(MorphismKind::Strict),
            "lax" => Ok(MorphismKind::Lax),
            "oplax" => Ok(MorphismKind::Oplax),
            _ => Err(contract(format!("unknown morphism kind `{s}`"))),
        }
    }
}

/// How `Fh(c(x))` and `d(h(x))` differ at one entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// Defined in the image of the source only.
    SourceOnly,
    /// Defined in the target only.
    TargetOnly,
    /// Defined on both sides with different values.
    Conflict,
}

/// A failed comparison at source state `state`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub state: usize,
    pub entry: Entry,
    pub kind: ViolationKind,
}

impl Violation {
    /// `<state> <label> <kind>`, e.g. `5 ?a target-only`.
    pub fn describe<C: Coalgebra + ?Sized>(&self, src: &C) -> String {
        let kind = match self.kind {
            ViolationKind::SourceOnly => "source-only",
            ViolationKind::TargetOnly => "target-only",
            ViolationKind::Conflict => "conflict",
        };
        format!("{} {} {}", src.states().name(self.state), src.label(self.entry), kind)
    }
}

/// Result of [`check_morphism`]: every violation, in state then entry order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MorphismReport {
    pub violations: Vec<Violation>,
}

impl MorphismReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn at(&self, state: usize) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.state == state)
    }
}

/// Compares the entries of `image = Fh(c(x))` and `target = d(h(x))`.
///
/// `covariant` entries must satisfy `image ⊑ target` for lax maps;
/// contravariant ones (suspension outputs) the reverse.
fn compare_entries<T: PartialEq + Copy>(
    image: &[Option<T>],
    target: &[Option<T>],
    covariant: bool,
    kind: MorphismKind,
    mut emit: impl FnMut(usize, ViolationKind),
) {
    // The side that must be below for a lax map.
    let (lax_lo, lax_hi, lo_only) = if covariant {
        (image, target, ViolationKind::SourceOnly)
    } else {
        (target, image, ViolationKind::TargetOnly)
    };
    let hi_only = match lo_only {
        ViolationKind::SourceOnly => ViolationKind::TargetOnly,
        _ => ViolationKind::SourceOnly,
    };
    for k in 0..image.len() {
        match (lax_lo[k], lax_hi[k]) {
            (Some(a), Some(b)) if a != b => {
                emit(k, ViolationKind::Conflict);
            }
            (Some(_), None) if kind.wants_lax() => emit(k, lo_only),
            (None, Some(_)) if kind.wants_oplax() => emit(k, hi_only),
            _ => {}
        }
    }
}

/// Checks `h: (C, c) → (D, d)` against the requested kind: lax means
/// `Fh(c(x)) ⊑ d(h(x))` for every `x`, oplax the reverse, strict both.
pub fn check_morphism<C: Coalgebra + ?Sized>(
    src: &C,
    dst: &C,
    h: &StateMap,
    kind: MorphismKind,
) -> Result<MorphismReport> {
    h.check_systems(src, dst)?;
    let mut violations = Vec::new();
    for x in 0..src.state_count() {
        let image = src.structure(x).map(&h.mapping);
        let target = dst.structure(h.apply(x));
        let mut push = |entry, kind| violations.push(Violation { state: x, entry, kind });
        match (&image, &target) {
            (Successor::Mealy(a), Successor::Mealy(b)) => {
                compare_entries(a, b, true, kind, |k, v| push(Entry::Input(k), v));
            }
            (Successor::Sa { inputs: ai, outputs: ao }, Successor::Sa { inputs: bi, outputs: bo }) => {
                compare_entries(ai, bi, true, kind, |k, v| push(Entry::Input(k), v));
                compare_entries(ao, bo, false, kind, |k, v| push(Entry::Output(k), v));
            }
            (Successor::Pow(a), Successor::Pow(b)) => {
                if kind.wants_lax() {
                    for &y in a.difference(b) {
                        push(Entry::Element(y), ViolationKind::SourceOnly);
                    }
                }
                if kind.wants_oplax() {
                    for &y in b.difference(a) {
                        push(Entry::Element(y), ViolationKind::TargetOnly);
                    }
                }
            }
            _ => unreachable!("shapes checked"),
        }
    }
    Ok(MorphismReport { violations })
}

/// `ker h`
pub fn kernel(h: &StateMap) -> Relation {
    Relation::kernel(&h.mapping)
}

/// Restricts the source along an oplax map: `c'(x)(i)` is undefined
/// whenever `d(h(x))(i)` is, and `c(x)(i)` otherwise. The map is then strict
/// from the restricted machine.
pub fn restrict_along(src: &PartialMealy, dst: &PartialMealy, h: &StateMap) -> Result<PartialMealy> {
    let report = check_morphism(src, dst, h, MorphismKind::Oplax)?;
    if let Some(v) = report.first() {
        return Err(contract(format!(
            "map is not oplax at state `{}` ({})",
            src.states().name(v.state),
            v.describe(src)
        )));
    }
    let mut out = src.clone();
    for x in 0..src.state_count() {
        for i in 0..src.inputs().len() {
            if dst.transition(h.apply(x), i).is_none() {
                out.set_transition(x, i, None);
            }
        }
    }
    Ok(out)
}

/// [`restrict_along`] for either kind of system. Suspension automata are
/// refused: their order is not known to be restricting.
pub fn restrict_machine_along(src: &Machine, dst: &Machine, h: &StateMap) -> Result<Machine> {
    match (src, dst) {
        (Machine::Mealy(a), Machine::Mealy(b)) => Ok(Machine::Mealy(restrict_along(a, b, h)?)),
        (Machine::Sa(_), Machine::Sa(_)) => {
            Err(Error::Unsupported("restriction is only available for Mealy machines".into()))
        }
        _ => Err(contract("source and target are of different kinds")),
    }
}

/// Outcome of [`lax_identify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identification {
    /// The least closed equivalence is consistent. `projection` maps `m`
    /// onto `quotient` and is a lax morphism identifying the two states.
    Quotient { quotient: PartialMealy, projection: StateMap, chain: Vec<(usize, usize)> },
    /// Some forced class holds two states with a common input but different
    /// outputs. `chain` lists the merges performed, in order, the last one
    /// being the merge that exposed the conflict.
    Conflict {
        chain: Vec<(usize, usize)>,
        states: (usize, usize),
        input: usize,
        left_output: usize,
        right_output: usize,
    },
}

impl Identification {
    pub fn chain(&self) -> &[(usize, usize)] {
        match self {
            Identification::Quotient { chain, .. } | Identification::Conflict { chain, .. } => chain,
        }
    }

    pub fn is_conflict(&self) -> bool {
        matches!(self, Identification::Conflict { .. })
    }

    /// Line-oriented report: `merge a b` lines, then `conflict i o o'` for
    /// conflicts.
    pub fn report_lines(&self, m: &PartialMealy) -> Vec<String> {
        let st = |x: usize| m.states().name(x);
        let mut lines: Vec<String> =
            self.chain().iter().map(|&(a, b)| format!("merge {} {}", st(a), st(b))).collect();
        if let Identification::Conflict { input, left_output, right_output, .. } = self {
            lines.push(format!(
                "conflict {} {} {}",
                m.inputs().name(*input),
                m.outputs().name(*left_output),
                m.outputs().name(*right_output)
            ));
        }
        lines
    }
}

impl fmt::Display for MorphismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            y = std::mem::replace(&mut self.parent[y], r);
        }
        r
    }
}

/// Decides whether some lax morphism out of `m` identifies `x` and `y`.
///
/// Computes the least equivalence containing `(x, y)` and closed under
/// successors along commonly defined inputs. Pairs are processed
/// breadth-first, inputs in declaration order. Each class keeps one
/// transition per input (the first one seen); merging two classes compares
/// these tables, so a class in which two members disagree on an output is
/// detected as soon as it forms.
pub fn lax_identify(m: &PartialMealy, x: usize, y: usize) -> Result<Identification> {
    m.run(x, &[])?;
    m.run(y, &[])?;
    let n = m.state_count();
    let ni = m.inputs().len();
    let mut uf = UnionFind::new(n);
    // Per class root: input -> (transition, owning state).
    let mut table: Vec<Vec<Option<(Transition, usize)>>> =
        (0..n).map(|q| (0..ni).map(|i| m.transition(q, i).map(|t| (t, q))).collect()).collect();
    let mut chain = Vec::new();
    let mut queue = VecDeque::from([(x, y)]);
    while let Some((u, v)) = queue.pop_front() {
        let (ru, rv) = (uf.find(u), uf.find(v));
        if ru == rv {
            continue;
        }
        chain.push((u, v));
        for i in 0..ni {
            if let (Some(a), Some(b)) = (m.transition(u, i), m.transition(v, i)) {
                if a.output != b.output {
                    return Ok(Identification::Conflict {
                        chain,
                        states: (u, v),
                        input: i,
                        left_output: a.output,
                        right_output: b.output,
                    });
                }
                queue.push_back((a.target, b.target));
            }
        }
        let (keep, drop) = (ru.min(rv), ru.max(rv));
        for i in 0..ni {
            match (table[keep][i], table[drop][i]) {
                (Some((a, p)), Some((b, q))) => {
                    if a.output != b.output {
                        let (left, right) =
                            if uf.find(p) == ru { ((a, p), (b, q)) } else { ((b, q), (a, p)) };
                        return Ok(Identification::Conflict {
                            chain,
                            states: (left.1, right.1),
                            input: i,
                            left_output: left.0.output,
                            right_output: right.0.output,
                        });
                    }
                    queue.push_back((a.target, b.target));
                }
                (None, Some(e)) => table[keep][i] = Some(e),
                _ => {}
            }
        }
        uf.parent[drop] = keep;
    }
    let roots: Vec<usize> = (0..n).map(|q| uf.find(q)).collect();
    let quotient_states = QuotientNames::new(m.states(), &roots);
    let mut quotient = PartialMealy::new(
        format!("{}/~", m.name()),
        m.inputs().clone(),
        m.outputs().clone(),
        quotient_states.names.clone(),
    );
    for (k, &root) in quotient_states.roots.iter().enumerate() {
        for i in 0..ni {
            if let Some((t, _)) = table[root][i] {
                quotient.set_transition(
                    k,
                    i,
                    Some(Transition { output: t.output, target: quotient_states.class_of[t.target] }),
                );
            }
        }
    }
    let projection = StateMap::new(m, &quotient, quotient_states.class_of.clone())?;
    Ok(Identification::Quotient { quotient, projection, chain })
}

/// Names for the classes of a partition: classes are ordered by their
/// first member; a singleton keeps its member's name and a larger class is
/// written `{a,b,..}` with members in declaration order.
struct QuotientNames {
    names: Alphabet,
    roots: Vec<usize>,
    class_of: Vec<usize>,
}

impl QuotientNames {
    fn new(states: &Alphabet, roots: &[usize]) -> Self {
        let mut order: Vec<usize> = Vec::new();
        let mut class_of = vec![0; roots.len()];
        for (q, &r) in roots.iter().enumerate() {
            let k = match order.iter().position(|&x| x == r) {
                Some(k) => k,
                None => {
                    order.push(r);
                    order.len() - 1
                }
            };
            class_of[q] = k;
        }
        let names: Vec<String> = (0..order.len())
            .map(|k| {
                let members: Vec<&str> =
                    (0..roots.len()).filter(|&q| class_of[q] == k).map(|q| states.name(q)).collect();
                if members.len() == 1 {
                    members[0].to_string()
                } else {
                    format!("{{{}}}", members.join(","))
                }
            })
            .collect();
        QuotientNames {
            names: Alphabet::new(names).expect("class names are distinct"),
            roots: order,
            class_of,
        }
    }
}
