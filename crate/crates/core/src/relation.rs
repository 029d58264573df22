//! Finite binary relations between two index carriers, with the usual
//! relation-algebra helpers.

use std::collections::BTreeSet;

use crate::error::{contract, Result};

/// A set of pairs `R ⊆ X × Y` with `X = {0..left}` and `Y = {0..right}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    left: usize,
    right: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn empty(left: usize, right: usize) -> Self {
        Relation { left, right, pairs: BTreeSet::new() }
    }

    /// The empty relation on a single carrier of size `n`.
    pub fn on(n: usize) -> Self {
        Self::empty(n, n)
    }

    pub fn from_pairs(
        left: usize,
        right: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut r = Self::empty(left, right);
        for (x, y) in pairs {
            r.insert(x, y)?;
        }
        Ok(r)
    }

    /// `Eq_X`
    pub fn equality(n: usize) -> Self {
        Relation { left: n, right: n, pairs: (0..n).map(|x| (x, x)).collect() }
    }

    pub fn full(left: usize, right: usize) -> Self {
        Relation { left, right, pairs: (0..left).flat_map(|x| (0..right).map(move |y| (x, y))).collect() }
    }

    /// `{(x, f(x))}`
    pub fn graph(f: &[usize], right: usize) -> Result<Self> {
        Self::from_pairs(f.len(), right, f.iter().copied().enumerate())
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn insert(&mut self, x: usize, y: usize) -> Result<bool> {
        if x >= self.left || y >= self.right {
            return Err(contract(format!("pair ({x}, {y}) outside carriers {}x{}", self.left, self.right)));
        }
        Ok(self.pairs.insert((x, y)))
    }

    pub fn remove(&mut self, x: usize, y: usize) -> bool {
        self.pairs.remove(&(x, y))
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Some `y` with `(x, y) ∈ R`.
    pub fn has_successor(&self, x: usize) -> bool {
        self.pairs.range((x, 0)..(x + 1, 0)).next().is_some()
    }

    /// Some `x` with `(x, y) ∈ R`.
    pub fn has_predecessor(&self, y: usize) -> bool {
        self.pairs.iter().any(|&(_, b)| b == y)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// `R^op`
    pub fn converse(&self) -> Relation {
        Relation {
            left: self.right,
            right: self.left,
            pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }

    /// `R ∘ S = {(x, z) | ∃y. (x, y) ∈ R, (y, z) ∈ S}`
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        if self.right != other.left {
            return Err(contract("composition of relations with mismatched carriers"));
        }
        let mut out = Relation::empty(self.left, other.right);
        for &(x, y) in &self.pairs {
            for &(_, z) in other.pairs.range((y, 0)..(y + 1, 0)) {
                out.pairs.insert((x, z));
            }
        }
        Ok(out)
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        if (self.left, self.right) != (other.left, other.right) {
            return Err(contract("union of relations with mismatched carriers"));
        }
        let mut out = self.clone();
        out.pairs.extend(other.pairs.iter().copied());
        Ok(out)
    }

    /// All pairs of `X × Y` not in `R`.
    pub fn complement(&self) -> Relation {
        let full = Relation::full(self.left, self.right);
        Relation {
            left: self.left,
            right: self.right,
            pairs: full.pairs.difference(&self.pairs).copied().collect(),
        }
    }

    /// `(f × g)^{-1}(R) = {(x, x') | (f(x), g(x')) ∈ R}`
    pub fn inverse_image_pair(&self, f: &[usize], g: &[usize]) -> Result<Relation> {
        if f.iter().any(|&v| v >= self.left) || g.iter().any(|&v| v >= self.right) {
            return Err(contract("map lands outside the relation's carrier"));
        }
        let mut out = Relation::empty(f.len(), g.len());
        for (x, &fx) in f.iter().enumerate() {
            for (y, &gy) in g.iter().enumerate() {
                if self.contains(fx, gy) {
                    out.pairs.insert((x, y));
                }
            }
        }
        Ok(out)
    }

    /// `(f × f)^{-1}(R)`
    pub fn inverse_image(&self, f: &[usize]) -> Result<Relation> {
        self.inverse_image_pair(f, f)
    }

    /// `{(f(x), g(y)) | (x, y) ∈ R}`
    pub fn image(&self, f: &[usize], g: &[usize], left: usize, right: usize) -> Result<Relation> {
        Relation::from_pairs(left, right, self.pairs.iter().map(|&(x, y)| (f[x], g[y])))
    }

    /// `ker f = {(x, x') | f(x) = f(x')}`
    pub fn kernel(f: &[usize]) -> Relation {
        let n = f.len();
        Relation {
            left: n,
            right: n,
            pairs: (0..n).flat_map(|x| (0..n).filter(move |&y| f[x] == f[y]).map(move |y| (x, y))).collect(),
        }
    }

    pub fn is_reflexive(&self) -> bool {
        self.left == self.right && (0..self.left).all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|&(x, y)| self.contains(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        match self.compose(self) {
            Ok(c) => c.is_subset(self),
            Err(_) => false,
        }
    }

    /// Smallest reflexive relation containing `R`.
    pub fn reflexive_closure(&self) -> Result<Relation> {
        if self.left != self.right {
            return Err(contract("reflexive closure needs a relation on one carrier"));
        }
        self.union(&Relation::equality(self.left))
    }
}

impl FromIterator<(usize, usize)> for Relation {
    /// Collects pairs, sizing both carriers to fit.
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        let pairs: BTreeSet<_> = iter.into_iter().collect();
        let left = pairs.iter().map(|&(x, _)| x + 1).max().unwrap_or(0);
        let right = pairs.iter().map(|&(_, y)| y + 1).max().unwrap_or(0);
        Relation { left, right, pairs }
    }
}
