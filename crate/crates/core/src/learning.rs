//! Observation trees and black-box teachers, the data substrate of active
//! automata learning.

use std::collections::VecDeque;

use crate::bisim::uncertain_bisimilarity;
use crate::error::{contract, Error, Result};
use crate::morphisms::StateMap;
use crate::relation::Relation;
use crate::systems::{Alphabet, PartialMealy, TotalMealy, Transition};

/// Name of the root state of an observation tree.
pub const ROOT: &str = "ε";

/// Answers output queries on a hidden total Mealy machine.
///
/// Every query starts from the initial state.
#[derive(Debug, Clone)]
pub struct Teacher {
    hidden: TotalMealy,
    initial: usize,
    queries: u64,
}

impl Teacher {
    pub fn new(hidden: TotalMealy, initial: &str) -> Result<Self> {
        let initial = hidden.state_index(initial)?;
        Ok(Teacher { hidden, initial, queries: 0 })
    }

    pub fn inputs(&self) -> &Alphabet {
        self.hidden.inputs()
    }

    pub fn outputs(&self) -> &Alphabet {
        self.hidden.outputs()
    }

    /// Outputs along `word`, one per input symbol.
    pub fn output_query(&mut self, word: &[usize]) -> Result<Vec<usize>> {
        if word.is_empty() {
            return Err(contract("output queries need a non-empty word"));
        }
        let outs =
            self.hidden.outputs_along(self.initial, word)?.expect("total machines are defined on every word");
        self.queries += 1;
        Ok(outs)
    }

    /// [`Teacher::output_query`] on symbol names.
    pub fn output_query_names<S: AsRef<str>>(&mut self, word: &[S]) -> Result<Vec<String>> {
        let w = self.hidden.word(word)?;
        let outs = self.output_query(&w)?;
        Ok(outs.into_iter().map(|o| self.hidden.outputs().name(o).to_string()).collect())
    }

    pub fn query_count(&self) -> u64 {
        self.queries
    }

    #[cfg(feature = "test-util")]
    pub fn hidden(&self) -> &TotalMealy {
        &self.hidden
    }

    #[cfg(feature = "test-util")]
    pub fn initial(&self) -> usize {
        self.initial
    }
}

/// A tree-shaped partial Mealy machine whose states are the access words
/// leading to them from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationTree {
    machine: PartialMealy,
    access: Vec<Vec<usize>>,
}

fn access_name(inputs: &Alphabet, word: &[usize]) -> String {
    if word.is_empty() {
        ROOT.to_string()
    } else {
        word.iter().map(|&i| inputs.name(i)).collect::<Vec<_>>().join(".")
    }
}

impl ObservationTree {
    /// The tree with only the root.
    pub fn new(name: &str, inputs: Alphabet, outputs: Alphabet) -> Self {
        let states = Alphabet::new([ROOT]).expect("single name");
        ObservationTree {
            machine: PartialMealy::new(name, inputs, outputs, states),
            access: vec![Vec::new()],
        }
    }

    /// Reads a tree-shaped machine rooted at `root`: every state must be
    /// reachable from `root` along exactly one path. States are renamed to
    /// their access words.
    pub fn from_machine(m: &PartialMealy, root: usize) -> Result<Self> {
        let mut incoming = vec![0usize; m.state_count()];
        for (_, _, t) in m.transitions() {
            incoming[t.target] += 1;
        }
        if incoming[root] != 0 || incoming.iter().enumerate().any(|(q, &k)| q != root && k != 1) {
            return Err(contract(format!(
                "`{}` is not a tree rooted at `{}`",
                m.name(),
                m.states().name(root)
            )));
        }
        if m.reachable(root).len() != m.state_count() {
            return Err(contract(format!("`{}` has states unreachable from the root", m.name())));
        }
        let mut tree = ObservationTree::new(m.name(), m.inputs().clone(), m.outputs().clone());
        let mut queue = VecDeque::from([(root, 0usize)]);
        while let Some((q, node)) = queue.pop_front() {
            for i in 0..m.inputs().len() {
                if let Some(t) = m.transition(q, i) {
                    let child = tree.add_child(node, i, t.output);
                    queue.push_back((t.target, child));
                }
            }
        }
        Ok(tree)
    }

    fn add_child(&mut self, node: usize, input: usize, output: usize) -> usize {
        let mut word = self.access[node].clone();
        word.push(input);
        let child = self
            .machine
            .add_state(access_name(self.machine.inputs(), &word))
            .expect("access words are unique");
        self.machine.set_transition(node, input, Some(Transition { output, target: child }));
        self.access.push(word);
        child
    }

    pub fn machine(&self) -> &PartialMealy {
        &self.machine
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn access_word(&self, state: usize) -> &[usize] {
        &self.access[state]
    }

    pub fn state_of(&self, word: &[usize]) -> Option<usize> {
        self.machine.run_unchecked(0, word)
    }

    pub fn state_count(&self) -> usize {
        self.machine.state_count()
    }

    /// Adds the path for `word` labelled with `outputs`. An existing edge
    /// with a different output is an inconsistency; the tree is then left
    /// unchanged.
    pub fn record_observation(&mut self, word: &[usize], outputs: &[usize]) -> Result<()> {
        if word.len() != outputs.len() {
            return Err(contract("word and outputs differ in length"));
        }
        if outputs.iter().any(|&o| o >= self.machine.outputs().len()) {
            return Err(contract("output outside the alphabet"));
        }
        self.machine.run(0, word)?;
        let mut node = 0;
        for (k, (&i, &o)) in word.iter().zip(outputs).enumerate() {
            match self.machine.transition(node, i) {
                Some(t) if t.output != o => {
                    return Err(Error::Inconsistent {
                        prefix: access_name(self.machine.inputs(), &word[..=k]),
                    })
                }
                Some(t) => node = t.target,
                None => break,
            }
        }
        let mut node = 0;
        for (&i, &o) in word.iter().zip(outputs) {
            node = match self.machine.transition(node, i) {
                Some(t) => t.target,
                None => self.add_child(node, i, o),
            };
        }
        Ok(())
    }

    /// Asks `teacher` for `word` and records the answer.
    pub fn query(&mut self, teacher: &mut Teacher, word: &[usize]) -> Result<Vec<usize>> {
        if teacher.inputs() != self.machine.inputs() || teacher.outputs() != self.machine.outputs() {
            return Err(contract("teacher and tree use different alphabets"));
        }
        let outs = teacher.output_query(word)?;
        self.record_observation(word, &outs)?;
        Ok(outs)
    }
}

/// Pairs of tree states that are apart.
pub fn tree_apartness_frontier(tree: &ObservationTree) -> Relation {
    uncertain_bisimilarity(tree.machine()).complement()
}

/// Where [`find_lax_morphism_from_tree`] got stuck: the tree edge into
/// `access` has no matching transition in the hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeConflict {
    pub access: Vec<usize>,
}

/// The unique lax morphism from `tree` into `hypothesis` sending the root to
/// `root_target`, if it exists.
///
/// Edges are followed breadth-first; the first edge whose input is missing
/// at the image, or present with a different output, is reported.
pub fn find_lax_morphism_from_tree(
    tree: &ObservationTree,
    hypothesis: &PartialMealy,
    root_target: usize,
) -> Result<std::result::Result<StateMap, TreeConflict>> {
    let t = tree.machine();
    if t.inputs() != hypothesis.inputs() || t.outputs() != hypothesis.outputs() {
        return Err(contract("tree and hypothesis use different alphabets"));
    }
    hypothesis.run(root_target, &[])?;
    let mut image = vec![usize::MAX; t.state_count()];
    image[0] = root_target;
    let mut queue = VecDeque::from([0usize]);
    while let Some(node) = queue.pop_front() {
        for i in 0..t.inputs().len() {
            let Some(edge) = t.transition(node, i) else { continue };
            match hypothesis.transition(image[node], i) {
                Some(h) if h.output == edge.output => {
                    image[edge.target] = h.target;
                    queue.push_back(edge.target);
                }
                _ => return Ok(Err(TreeConflict { access: tree.access_word(edge.target).to_vec() })),
            }
        }
    }
    Ok(Ok(StateMap::new(t, hypothesis, image)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn teacher_answers_and_counts() {
        let c = fixtures::lax_chain();
        let hidden = TotalMealy::totalize(&c.black_box, "o").unwrap();
        let mut t = Teacher::new(hidden, "r0").unwrap();
        let outs = t.output_query_names(&["j", "j", "i"]).unwrap();
        assert_eq!(outs, ["o", "o", "o"]);
        assert_eq!(t.query_count(), 1);
        assert!(t.output_query(&[]).is_err());
        assert!(t.output_query_names(&["k"]).is_err());
        assert_eq!(t.query_count(), 1);
    }

    #[test]
    fn recording() {
        let ab = |v: &[&str]| Alphabet::new(v.iter().copied()).unwrap();
        let mut tree = ObservationTree::new("t", ab(&["i", "j"]), ab(&["a", "b"]));
        tree.record_observation(&[0, 1], &[0, 1]).unwrap();
        assert_eq!(tree.state_count(), 3);
        let names: Vec<_> = tree.machine().states().iter().collect();
        assert_eq!(names, ["ε", "i", "i.j"]);
        let before = tree.clone();
        assert_eq!(tree.record_observation(&[0], &[1]), Err(Error::Inconsistent { prefix: "i".into() }));
        assert_eq!(tree, before);
        tree.record_observation(&[0], &[0]).unwrap();
        assert_eq!(tree, before);
    }

    #[test]
    fn lax_map_from_tree() {
        let c = fixtures::lax_chain();
        let tree = ObservationTree::from_machine(&c.tree, 0).unwrap();
        let g = find_lax_morphism_from_tree(&tree, &c.middle, 0).unwrap().unwrap();
        assert_eq!(g.mapping(), c.g.mapping());
    }

    #[test]
    fn single_edge_conflict() {
        let m =
            PartialMealy::from_names("t", &["i"], &["a", "b"], &["r", "s"], &[("r", "i", "a", "s")]).unwrap();
        let h = PartialMealy::from_names("h", &["i"], &["a", "b"], &["u"], &[("u", "i", "b", "u")]).unwrap();
        let tree = ObservationTree::from_machine(&m, 0).unwrap();
        let c = find_lax_morphism_from_tree(&tree, &h, 0).unwrap().unwrap_err();
        assert_eq!(c.access, vec![0]);
    }

    #[test]
    fn non_trees_are_rejected() {
        let c = fixtures::lax_chain();
        assert!(ObservationTree::from_machine(&c.black_box, 0).is_err());
    }
}
