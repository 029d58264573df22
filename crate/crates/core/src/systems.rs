//! Finite systems for the three supported behaviour types: partial Mealy
//! machines, suspension automata and finite powerset systems.
//!
//! States and alphabet symbols are stored by index. Names are kept in
//! declaration order and every traversal in this crate follows that order, so
//! all results (witnesses, chains, emitted machines) are deterministic.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{contract, Error, Result};

/// An ordered list of unique names (alphabet symbols or state identifiers).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (k, n) in names.iter().enumerate() {
            if names[..k].contains(n) {
                return Err(contract(format!("duplicate name `{n}`")));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

/// A defined Mealy transition `q -i/o-> target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub output: usize,
    pub target: usize,
}

/// A Mealy machine whose transition map may be undefined on some
/// `(state, input)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMealy {
    name: String,
    inputs: Alphabet,
    outputs: Alphabet,
    states: Alphabet,
    delta: Vec<Vec<Option<Transition>>>,
}

impl PartialMealy {
    /// A machine without transitions.
    pub fn new(name: impl Into<String>, inputs: Alphabet, outputs: Alphabet, states: Alphabet) -> Self {
        let delta = vec![vec![None; inputs.len()]; states.len()];
        PartialMealy { name: name.into(), inputs, outputs, states, delta }
    }

    /// Convenience constructor from names; `transitions` are
    /// `(source, input, output, target)` tuples.
    pub fn from_names(
        name: &str,
        inputs: &[&str],
        outputs: &[&str],
        states: &[&str],
        transitions: &[(&str, &str, &str, &str)],
    ) -> Result<Self> {
        let mut m = PartialMealy::new(
            name,
            Alphabet::new(inputs.iter().copied())?,
            Alphabet::new(outputs.iter().copied())?,
            Alphabet::new(states.iter().copied())?,
        );
        for &(src, i, o, dst) in transitions {
            m.add_transition(src, i, o, dst)?;
        }
        Ok(m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn states(&self) -> &Alphabet {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states.index_of(name).ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn input_index(&self, name: &str) -> Result<usize> {
        self.inputs.index_of(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn output_index(&self, name: &str) -> Result<usize> {
        self.outputs.index_of(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Translates input names into a word of input indices.
    pub fn word<S: AsRef<str>>(&self, symbols: &[S]) -> Result<Vec<usize>> {
        symbols.iter().map(|s| self.input_index(s.as_ref())).collect()
    }

    pub fn word_names(&self, word: &[usize]) -> Vec<&str> {
        word.iter().map(|&i| self.inputs.name(i)).collect()
    }

    pub fn transition(&self, state: usize, input: usize) -> Option<Transition> {
        self.delta[state][input]
    }

    /// All defined transitions as `(source, input, transition)` in
    /// declaration order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, Transition)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().enumerate().filter_map(move |(i, t)| t.map(|t| (q, i, t))))
    }

    pub fn transition_count(&self) -> usize {
        self.transitions().count()
    }

    /// Defines or overwrites a transition by index.
    pub fn set_transition(&mut self, state: usize, input: usize, t: Option<Transition>) {
        self.delta[state][input] = t;
    }

    /// Adds a transition by names; a second transition for the same
    /// `(source, input)` is rejected.
    pub fn add_transition(&mut self, src: &str, input: &str, output: &str, dst: &str) -> Result<()> {
        let q = self.state_index(src)?;
        let i = self.input_index(input)?;
        let o = self.output_index(output)?;
        let t = self.state_index(dst)?;
        if self.delta[q][i].is_some() {
            return Err(contract(format!("duplicate transition for ({src}, {input})")));
        }
        self.delta[q][i] = Some(Transition { output: o, target: t });
        Ok(())
    }

    /// Appends a fresh state without transitions and returns its index.
    pub fn add_state(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.states.index_of(&name).is_some() {
            return Err(contract(format!("duplicate state `{name}`")));
        }
        self.states.names.push(name);
        self.delta.push(vec![None; self.inputs.len()]);
        Ok(self.states.len() - 1)
    }

    fn check_state(&self, state: usize) -> Result<()> {
        if state < self.states.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{state}")))
        }
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&i| i >= self.inputs.len()) {
            Some(i) => Err(Error::UnknownSymbol(format!("#{i}"))),
            None => Ok(()),
        }
    }

    /// The state reached from `state` along `word`, or `None` when some
    /// transition on the way is undefined.
    pub fn run(&self, state: usize, word: &[usize]) -> Result<Option<usize>> {
        self.check_state(state)?;
        self.check_word(word)?;
        Ok(self.run_unchecked(state, word))
    }

    pub(crate) fn run_unchecked(&self, state: usize, word: &[usize]) -> Option<usize> {
        word.iter().try_fold(state, |q, &i| self.delta[q][i].map(|t| t.target))
    }

    /// `⟦state⟧(word)`: the output of the last transition along `word`, or
    /// `None` when the run is not fully defined.
    pub fn eval(&self, state: usize, word: &[usize]) -> Result<Option<usize>> {
        let (&last, prefix) =
            word.split_last().ok_or_else(|| contract("semantics is only defined on non-empty words"))?;
        self.check_state(state)?;
        self.check_word(word)?;
        Ok(self.run_unchecked(state, prefix).and_then(|q| self.delta[q][last]).map(|t| t.output))
    }

    /// The full output sequence along `word`, if defined.
    pub fn outputs_along(&self, state: usize, word: &[usize]) -> Result<Option<Vec<usize>>> {
        self.check_state(state)?;
        self.check_word(word)?;
        let mut q = state;
        let mut out = Vec::with_capacity(word.len());
        for &i in word {
            match self.delta[q][i] {
                Some(t) => {
                    out.push(t.output);
                    q = t.target;
                }
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    pub fn is_total(&self) -> bool {
        self.delta.iter().all(|row| row.iter().all(Option::is_some))
    }

    /// States reachable from `from`, in breadth-first discovery order.
    pub fn reachable(&self, from: usize) -> Vec<usize> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![from];
        seen[from] = true;
        let mut k = 0;
        while k < order.len() {
            let q = order[k];
            k += 1;
            for t in self.delta[q].iter().flatten() {
                if !seen[t.target] {
                    seen[t.target] = true;
                    order.push(t.target);
                }
            }
        }
        order
    }
}

/// A partial Mealy machine whose transition map is defined everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalMealy(PartialMealy);

impl TotalMealy {
    /// Completes `m` by sending every undefined transition to a fresh sink
    /// state (named `sink`, primed until unique) that loops on all inputs with
    /// `sink_output`.
    pub fn totalize(m: &PartialMealy, sink_output: &str) -> Result<TotalMealy> {
        if m.is_total() {
            return Ok(TotalMealy(m.clone()));
        }
        let o = m.output_index(sink_output)?;
        let mut total = m.clone();
        let mut name = String::from("sink");
        while total.states.index_of(&name).is_some() {
            name.push('\'');
        }
        let sink = total.add_state(name)?;
        for row in &mut total.delta {
            for t in row.iter_mut().filter(|t| t.is_none()) {
                *t = Some(Transition { output: o, target: sink });
            }
        }
        Ok(TotalMealy(total))
    }

    pub fn as_partial(&self) -> &PartialMealy {
        &self.0
    }

    pub fn into_partial(self) -> PartialMealy {
        self.0
    }
}

impl TryFrom<PartialMealy> for TotalMealy {
    type Error = Error;

    fn try_from(m: PartialMealy) -> Result<Self> {
        for (q, row) in m.delta.iter().enumerate() {
            if let Some(i) = row.iter().position(Option::is_none) {
                return Err(contract(format!(
                    "machine `{}` is not total: no transition for ({}, {})",
                    m.name,
                    m.states.name(q),
                    m.inputs.name(i)
                )));
            }
        }
        Ok(TotalMealy(m))
    }
}

impl std::ops::Deref for TotalMealy {
    type Target = PartialMealy;

    fn deref(&self) -> &PartialMealy {
        &self.0
    }
}

/// A deterministic LTS whose labels are split into inputs (`?a`) and outputs
/// (`!o`); every state enables at least one output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuspensionAutomaton {
    name: String,
    inputs: Alphabet,
    outputs: Alphabet,
    states: Alphabet,
    din: Vec<Vec<Option<usize>>>,
    dout: Vec<Vec<Option<usize>>>,
}

impl SuspensionAutomaton {
    /// Builds and validates an automaton. `input_trans` and `output_trans`
    /// hold `(source, label, target)` index triples.
    pub fn from_parts(
        name: impl Into<String>,
        inputs: Alphabet,
        outputs: Alphabet,
        states: Alphabet,
        input_trans: &[(usize, usize, usize)],
        output_trans: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let name = name.into();
        let n = states.len();
        let mut din = vec![vec![None; inputs.len()]; n];
        let mut dout = vec![vec![None; outputs.len()]; n];
        for (table, trans, width) in
            [(&mut din, input_trans, inputs.len()), (&mut dout, output_trans, outputs.len())]
        {
            for &(q, a, t) in trans {
                if q >= n || t >= n || a >= width {
                    return Err(contract("transition refers to an unknown state or label"));
                }
                if table[q][a].replace(t).is_some() {
                    return Err(contract(format!("duplicate transition for state `{}`", states.name(q))));
                }
            }
        }
        let sa = SuspensionAutomaton { name, inputs, outputs, states, din, dout };
        if let Some(q) = sa.blocking_state() {
            return Err(contract(format!(
                "state `{}` of `{}` has no output transition",
                sa.states.name(q),
                sa.name
            )));
        }
        Ok(sa)
    }

    /// Name-based constructor; transitions are `(source, label, target)`.
    pub fn from_names(
        name: &str,
        inputs: &[&str],
        outputs: &[&str],
        states: &[&str],
        input_trans: &[(&str, &str, &str)],
        output_trans: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let inputs = Alphabet::new(inputs.iter().copied())?;
        let outputs = Alphabet::new(outputs.iter().copied())?;
        let states = Alphabet::new(states.iter().copied())?;
        let resolve = |labels: &Alphabet, trans: &[(&str, &str, &str)]| {
            trans
                .iter()
                .map(|&(q, a, t)| {
                    let st = |s: &str| states.index_of(s).ok_or_else(|| Error::UnknownState(s.to_string()));
                    let l = labels.index_of(a).ok_or_else(|| Error::UnknownSymbol(a.to_string()))?;
                    Ok((st(q)?, l, st(t)?))
                })
                .collect::<Result<Vec<_>>>()
        };
        let it = resolve(&inputs, input_trans)?;
        let ot = resolve(&outputs, output_trans)?;
        Self::from_parts(name, inputs, outputs, states, &it, &ot)
    }

    fn blocking_state(&self) -> Option<usize> {
        (0..self.states.len()).find(|&q| self.dout[q].iter().all(Option::is_none))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn states(&self) -> &Alphabet {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states.index_of(name).ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    /// `x -?a-> target`
    pub fn input_step(&self, state: usize, input: usize) -> Option<usize> {
        self.din[state][input]
    }

    /// `x -!o-> target`
    pub fn output_step(&self, state: usize, output: usize) -> Option<usize> {
        self.dout[state][output]
    }

    pub fn input_transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        triples(&self.din)
    }

    pub fn output_transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        triples(&self.dout)
    }
}

fn triples(table: &[Vec<Option<usize>>]) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
    table
        .iter()
        .enumerate()
        .flat_map(|(q, row)| row.iter().enumerate().filter_map(move |(a, t)| t.map(|t| (q, a, t))))
}

/// A finitely branching nondeterministic system `succ: C → P(C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowersetSystem {
    name: String,
    states: Alphabet,
    succ: Vec<BTreeSet<usize>>,
}

impl PowersetSystem {
    pub fn new(name: impl Into<String>, states: Alphabet, succ: Vec<BTreeSet<usize>>) -> Result<Self> {
        if succ.len() != states.len() {
            return Err(contract("one successor set per state is required"));
        }
        if succ.iter().flatten().any(|&t| t >= states.len()) {
            return Err(contract("successor outside the state set"));
        }
        Ok(PowersetSystem { name: name.into(), states, succ })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &Alphabet {
        &self.states
    }

    pub fn successors(&self, state: usize) -> &BTreeSet<usize> {
        &self.succ[state]
    }
}

/// Which behaviour functor a successor structure belongs to, together with
/// its alphabet sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// `I ⇀ O × X`
    Mealy { inputs: usize, outputs: usize },
    /// `(I ⇀ X) × (O ⇀≠∅ X)`
    Sa { inputs: usize, outputs: usize },
    /// finite subsets of `X`
    Pow,
}

/// One-step behaviour of a state: an element of `F X` for one of the three
/// functors, over an arbitrary carrier `X = {0, .., n-1}`.
///
/// Undefined entries are explicit `None`s, so the maps are total over their
/// alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Successor {
    Mealy(Vec<Option<(usize, usize)>>),
    Sa { inputs: Vec<Option<usize>>, outputs: Vec<Option<usize>> },
    Pow(BTreeSet<usize>),
}

impl Successor {
    /// The structure with every entry undefined (the empty set for `Pow`).
    ///
    /// For `Sa` this has no outputs, so it lies outside the functor proper;
    /// it is still a valid argument to the order and the liftings.
    pub fn undefined(shape: Shape) -> Successor {
        match shape {
            Shape::Mealy { inputs, .. } => Successor::Mealy(vec![None; inputs]),
            Shape::Sa { inputs, outputs } => {
                Successor::Sa { inputs: vec![None; inputs], outputs: vec![None; outputs] }
            }
            Shape::Pow => Successor::Pow(BTreeSet::new()),
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Successor::Mealy(_) => "mealy",
            Successor::Sa { .. } => "sa",
            Successor::Pow(_) => "pow",
        }
    }

    /// Carrier elements mentioned by this structure.
    pub fn elements(&self) -> Vec<usize> {
        match self {
            Successor::Mealy(m) => m.iter().flatten().map(|&(_, x)| x).collect(),
            Successor::Sa { inputs, outputs } => inputs.iter().chain(outputs).flatten().copied().collect(),
            Successor::Pow(s) => s.iter().copied().collect(),
        }
    }

    /// The largest carrier element mentioned, if any.
    pub fn max_element(&self) -> Option<usize> {
        match self {
            Successor::Mealy(m) => m.iter().flatten().map(|&(_, x)| x).max(),
            Successor::Sa { inputs, outputs } => inputs.iter().chain(outputs).flatten().copied().max(),
            Successor::Pow(s) => s.last().copied(),
        }
    }

    /// Functor action `Ff` for `f` given as an index table.
    pub fn map(&self, f: &[usize]) -> Successor {
        match self {
            Successor::Mealy(m) => Successor::Mealy(m.iter().map(|e| e.map(|(o, x)| (o, f[x]))).collect()),
            Successor::Sa { inputs, outputs } => Successor::Sa {
                inputs: inputs.iter().map(|e| e.map(|x| f[x])).collect(),
                outputs: outputs.iter().map(|e| e.map(|x| f[x])).collect(),
            },
            Successor::Pow(s) => Successor::Pow(s.iter().map(|&x| f[x]).collect()),
        }
    }

    pub(crate) fn same_layout(&self, other: &Successor) -> bool {
        match (self, other) {
            (Successor::Mealy(a), Successor::Mealy(b)) => a.len() == b.len(),
            (Successor::Sa { inputs: ai, outputs: ao }, Successor::Sa { inputs: bi, outputs: bo }) => {
                ai.len() == bi.len() && ao.len() == bo.len()
            }
            (Successor::Pow(_), Successor::Pow(_)) => true,
            _ => false,
        }
    }

    pub(crate) fn check_layout(&self, other: &Successor) -> Result<()> {
        if self.same_layout(other) {
            Ok(())
        } else {
            Err(contract(format!(
                "successor structures of different kinds or alphabets ({} vs {})",
                self.variant_name(),
                other.variant_name()
            )))
        }
    }
}

/// Pointwise order on partial maps: every defined entry of `t` equals the
/// entry of `s`.
fn partial_leq<T: PartialEq>(t: &[Option<T>], s: &[Option<T>]) -> bool {
    t.iter().zip(s).all(|(a, b)| a.is_none() || a == b)
}

/// The information order `t ⊑ s` on successor structures.
///
/// * Mealy: `t` is a sub-map of `s`.
/// * SA: the inputs of `t` are a sub-map of those of `s` and the outputs of
///   `s` are a sub-map of those of `t` (inputs may be added, outputs removed).
/// * Pow: subset inclusion.
pub fn order_leq(t: &Successor, s: &Successor) -> Result<bool> {
    t.check_layout(s)?;
    Ok(match (t, s) {
        (Successor::Mealy(a), Successor::Mealy(b)) => partial_leq(a, b),
        (Successor::Sa { inputs: ti, outputs: to }, Successor::Sa { inputs: si, outputs: so }) => {
            partial_leq(ti, si) && partial_leq(so, to)
        }
        (Successor::Pow(a), Successor::Pow(b)) => a.is_subset(b),
        _ => unreachable!("layout checked"),
    })
}

/// A system viewed as a coalgebra `c: C → F C`.
pub trait Coalgebra {
    fn name(&self) -> &str;
    fn states(&self) -> &Alphabet;
    fn shape(&self) -> Shape;
    fn structure(&self, state: usize) -> Successor;

    fn state_count(&self) -> usize {
        self.states().len()
    }

    /// Human-readable label for an entry of the structure (input `k` or
    /// output `k`, depending on the functor).
    fn label(&self, entry: Entry) -> String;

    /// Input and output alphabets, if the functor has any.
    fn alphabets(&self) -> Option<(&Alphabet, &Alphabet)> {
        None
    }
}

/// Addresses one entry of a successor structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Input(usize),
    Output(usize),
    Element(usize),
}

impl Coalgebra for PartialMealy {
    fn alphabets(&self) -> Option<(&Alphabet, &Alphabet)> {
        Some((&self.inputs, &self.outputs))
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn states(&self) -> &Alphabet {
        &self.states
    }

    fn shape(&self) -> Shape {
        Shape::Mealy { inputs: self.inputs.len(), outputs: self.outputs.len() }
    }

    fn structure(&self, state: usize) -> Successor {
        Successor::Mealy(self.delta[state].iter().map(|t| t.map(|t| (t.output, t.target))).collect())
    }

    fn label(&self, entry: Entry) -> String {
        match entry {
            Entry::Input(i) => self.inputs.name(i).to_string(),
            Entry::Output(o) => self.outputs.name(o).to_string(),
            Entry::Element(x) => self.states.name(x).to_string(),
        }
    }
}

impl Coalgebra for SuspensionAutomaton {
    fn alphabets(&self) -> Option<(&Alphabet, &Alphabet)> {
        Some((&self.inputs, &self.outputs))
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn states(&self) -> &Alphabet {
        &self.states
    }

    fn shape(&self) -> Shape {
        Shape::Sa { inputs: self.inputs.len(), outputs: self.outputs.len() }
    }

    fn structure(&self, state: usize) -> Successor {
        Successor::Sa { inputs: self.din[state].clone(), outputs: self.dout[state].clone() }
    }

    fn label(&self, entry: Entry) -> String {
        match entry {
            Entry::Input(i) => format!("?{}", self.inputs.name(i)),
            Entry::Output(o) => format!("!{}", self.outputs.name(o)),
            Entry::Element(x) => self.states.name(x).to_string(),
        }
    }
}

impl Coalgebra for PowersetSystem {
    fn name(&self) -> &str {
        &self.name
    }

    fn states(&self) -> &Alphabet {
        &self.states
    }

    fn shape(&self) -> Shape {
        Shape::Pow
    }

    fn structure(&self, state: usize) -> Successor {
        Successor::Pow(self.succ[state].clone())
    }

    fn label(&self, entry: Entry) -> String {
        match entry {
            Entry::Element(x) => self.states.name(x).to_string(),
            Entry::Input(k) | Entry::Output(k) => format!("#{k}"),
        }
    }
}

/// Injection of each component's states into a disjoint union:
/// `renames[k][q]` is the index of state `q` of component `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Renaming {
    pub renames: Vec<Vec<usize>>,
}

fn union_prefixes(names: &[&str]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(names.len());
    for &n in names {
        let mut p = n.to_string();
        while out.contains(&p) {
            p.push('\'');
        }
        out.push(p);
    }
    out
}

fn same_alphabets(a: (&Alphabet, &Alphabet), b: (&Alphabet, &Alphabet)) -> Result<()> {
    if a.0 == b.0 && a.1 == b.1 {
        Ok(())
    } else {
        Err(contract("disjoint union requires identical input and output alphabets"))
    }
}

/// Coproduct of several partial Mealy machines. States are renamed to
/// `<machine>.<state>`; repeated machine names are primed.
pub fn disjoint_union_all(machines: &[&PartialMealy]) -> Result<(PartialMealy, Renaming)> {
    let first = machines.first().ok_or_else(|| contract("disjoint union of no machines"))?;
    for m in &machines[1..] {
        same_alphabets((&first.inputs, &first.outputs), (&m.inputs, &m.outputs))?;
    }
    let prefixes = union_prefixes(&machines.iter().map(|m| m.name()).collect::<Vec<_>>());
    let mut names = Vec::new();
    let mut renames = Vec::new();
    for (m, p) in machines.iter().zip(&prefixes) {
        renames.push((names.len()..names.len() + m.state_count()).collect::<Vec<_>>());
        names.extend(m.states.iter().map(|s| format!("{p}.{s}")));
    }
    let mut union = PartialMealy::new(
        prefixes.join("+"),
        first.inputs.clone(),
        first.outputs.clone(),
        Alphabet::new(names)?,
    );
    for (m, ren) in machines.iter().zip(&renames) {
        for (q, i, t) in m.transitions() {
            union.delta[ren[q]][i] = Some(Transition { output: t.output, target: ren[t.target] });
        }
    }
    Ok((union, Renaming { renames }))
}

/// Binary coproduct; see [`disjoint_union_all`].
pub fn disjoint_union(a: &PartialMealy, b: &PartialMealy) -> Result<(PartialMealy, Renaming)> {
    disjoint_union_all(&[a, b])
}

/// Coproduct of suspension automata, with the same naming scheme as
/// [`disjoint_union_all`].
pub fn sa_disjoint_union_all(automata: &[&SuspensionAutomaton]) -> Result<(SuspensionAutomaton, Renaming)> {
    let first = automata.first().ok_or_else(|| contract("disjoint union of no automata"))?;
    for a in &automata[1..] {
        same_alphabets((&first.inputs, &first.outputs), (&a.inputs, &a.outputs))?;
    }
    let prefixes = union_prefixes(&automata.iter().map(|a| a.name()).collect::<Vec<_>>());
    let mut names = Vec::new();
    let mut renames = Vec::new();
    let mut it = Vec::new();
    let mut ot = Vec::new();
    for (a, p) in automata.iter().zip(&prefixes) {
        let ren: Vec<usize> = (names.len()..names.len() + a.state_count()).collect();
        names.extend(a.states.iter().map(|s| format!("{p}.{s}")));
        it.extend(a.input_transitions().map(|(q, l, t)| (ren[q], l, ren[t])));
        ot.extend(a.output_transitions().map(|(q, l, t)| (ren[q], l, ren[t])));
        renames.push(ren);
    }
    let sa = SuspensionAutomaton::from_parts(
        prefixes.join("+"),
        first.inputs.clone(),
        first.outputs.clone(),
        Alphabet::new(names)?,
        &it,
        &ot,
    )?;
    Ok((sa, Renaming { renames }))
}

pub fn sa_disjoint_union(
    a: &SuspensionAutomaton,
    b: &SuspensionAutomaton,
) -> Result<(SuspensionAutomaton, Renaming)> {
    sa_disjoint_union_all(&[a, b])
}

/// A named system of either supported kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Machine {
    Mealy(PartialMealy),
    Sa(SuspensionAutomaton),
}

impl Machine {
    pub fn name(&self) -> &str {
        match self {
            Machine::Mealy(m) => m.name(),
            Machine::Sa(a) => a.name(),
        }
    }

    pub fn states(&self) -> &Alphabet {
        match self {
            Machine::Mealy(m) => m.states(),
            Machine::Sa(a) => a.states(),
        }
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states().index_of(name).ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn as_mealy(&self) -> Option<&PartialMealy> {
        match self {
            Machine::Mealy(m) => Some(m),
            Machine::Sa(_) => None,
        }
    }

    pub fn as_sa(&self) -> Option<&SuspensionAutomaton> {
        match self {
            Machine::Sa(a) => Some(a),
            Machine::Mealy(_) => None,
        }
    }
}

impl fmt::Display for Successor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn opt<T: fmt::Debug>(e: &Option<T>) -> String {
            e.as_ref().map_or("?".to_string(), |v| format!("{v:?}"))
        }
        match self {
            Successor::Mealy(m) => {
                let parts: Vec<String> = m.iter().map(opt).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            Successor::Sa { inputs, outputs } => {
                let i: Vec<String> = inputs.iter().map(opt).collect();
                let o: Vec<String> = outputs.iter().map(opt).collect();
                write!(f, "([{}], [{}])", i.join(", "), o.join(", "))
            }
            Successor::Pow(s) => write!(f, "{s:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn run_follows_transitions() {
        let m = fixtures::tree_counterexample();
        let p = m.state_index("p").unwrap();
        let vv = m.word(&["v", "v"]).unwrap();
        assert_eq!(m.run(p, &vv).unwrap(), Some(m.state_index("q'").unwrap()));
        assert_eq!(m.run(p, &[]).unwrap(), Some(p));
    }

    #[test]
    fn run_undefined_is_not_an_error() {
        let fig = fixtures::four_machines();
        let q = &fig[1];
        let j = q.word(&["j"]).unwrap();
        assert_eq!(q.run(q.state_index("q0").unwrap(), &j).unwrap(), None);
    }

    #[test]
    fn validation_errors_are_distinct_from_undefined() {
        let m = fixtures::tree_counterexample();
        assert!(matches!(m.run(99, &[]), Err(Error::UnknownState(_))));
        assert!(matches!(m.run(0, &[7]), Err(Error::UnknownSymbol(_))));
        assert!(matches!(m.word(&["zz"]), Err(Error::UnknownSymbol(_))));
        assert!(matches!(m.eval(0, &[]), Err(Error::Contract(_))));
    }

    #[test]
    fn eval_matches_semantics_table() {
        let m = fixtures::tree_counterexample();
        let ev = |s: &str, w: &[&str]| {
            m.eval(m.state_index(s).unwrap(), &m.word(w).unwrap())
                .unwrap()
                .map(|o| m.outputs().name(o).to_string())
        };
        assert_eq!(ev("p", &["w", "i"]).as_deref(), Some("a"));
        assert_eq!(ev("q", &["w", "i"]), None);
        assert_eq!(ev("p", &["v", "v", "w", "i"]).as_deref(), Some("b"));
    }

    #[test]
    fn order_examples() {
        let bottom = Successor::Mealy(vec![None, None]);
        let s = Successor::Mealy(vec![Some((0, 1)), None]);
        assert!(order_leq(&bottom, &s).unwrap());
        assert!(!order_leq(&s, &bottom).unwrap());

        let t = Successor::Mealy(vec![Some((0, 1))]);
        let s = Successor::Mealy(vec![Some((1, 1))]);
        assert!(!order_leq(&t, &s).unwrap());

        // inputs {a}, outputs {w, x, y, z}; state 6 is carrier element 5
        let left = Successor::Sa { inputs: vec![None], outputs: vec![None, Some(5), Some(5), None] };
        let right = Successor::Sa { inputs: vec![Some(5)], outputs: vec![None, None, Some(5), None] };
        assert!(order_leq(&left, &right).unwrap());
        assert!(!order_leq(&right, &left).unwrap());

        let a = Successor::Pow([1].into());
        let b = Successor::Pow([0, 1].into());
        assert!(order_leq(&a, &b).unwrap());
        assert!(!order_leq(&b, &a).unwrap());
    }

    #[test]
    fn order_rejects_mixed_variants() {
        let a = Successor::Mealy(vec![None]);
        let b = Successor::Pow(BTreeSet::new());
        assert!(matches!(order_leq(&a, &b), Err(Error::Contract(_))));
        let c = Successor::Mealy(vec![None, None]);
        assert!(order_leq(&a, &c).is_err());
    }

    #[test]
    fn union_of_two_machines() {
        let fig = fixtures::four_machines();
        let (u, ren) = disjoint_union(&fig[1], &fig[3]).unwrap();
        assert_eq!(u.state_count(), 4);
        assert_eq!(u.states().names(), ["q.q0", "q.q1", "s.s0", "s.s1"]);
        let q0 = ren.renames[0][0];
        let s0 = ren.renames[1][0];
        let i = u.input_index("i").unwrap();
        let j = u.input_index("j").unwrap();
        assert_eq!(u.transition(q0, i), Some(Transition { output: 0, target: ren.renames[0][1] }));
        assert_eq!(u.transition(s0, j), Some(Transition { output: 1, target: ren.renames[1][1] }));
        assert_eq!(u.transition_count(), 2);
    }

    #[test]
    fn union_with_empty_machine_is_a_copy() {
        let fig = fixtures::four_machines();
        let empty =
            PartialMealy::new("e", fig[0].inputs().clone(), fig[0].outputs().clone(), Alphabet::default());
        let (u, ren) = disjoint_union(&fig[0], &empty).unwrap();
        assert_eq!(u.state_count(), fig[0].state_count());
        assert_eq!(ren.renames[0], vec![0, 1, 2]);
        assert!(ren.renames[1].is_empty());
        for (q, i, t) in fig[0].transitions() {
            assert_eq!(u.transition(q, i), Some(t));
        }
    }

    #[test]
    fn self_union_has_two_copies() {
        let q = &fixtures::four_machines()[1];
        let (u, ren) = disjoint_union(q, q).unwrap();
        assert_eq!(u.state_count(), 4);
        assert_eq!(u.transition_count(), 2);
        assert_eq!(u.states().names(), ["q.q0", "q.q1", "q'.q0", "q'.q1"]);
        assert_ne!(ren.renames[0], ren.renames[1]);
    }

    #[test]
    fn union_rejects_different_alphabets() {
        let fig = fixtures::four_machines();
        let other = PartialMealy::from_names("o", &["i"], &["a", "b"], &["z"], &[]).unwrap();
        assert!(disjoint_union(&fig[0], &other).is_err());
    }

    #[test]
    fn totalize_adds_sink() {
        let r = &fixtures::four_machines()[2];
        let t = TotalMealy::totalize(r, "a").unwrap();
        assert!(t.is_total());
        assert_eq!(t.state_count(), r.state_count() + 1);
        assert!(TotalMealy::try_from(r.clone()).is_err());
        assert!(TotalMealy::try_from(t.as_partial().clone()).is_ok());
    }

    #[test]
    fn blocking_suspension_state_is_rejected() {
        let err = SuspensionAutomaton::from_names("a", &["a"], &["x"], &["s", "t"], &[], &[("s", "x", "t")]);
        assert!(matches!(err, Err(Error::Contract(_))));
    }
}
