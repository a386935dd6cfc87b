//! Finite lattices with materialized join and meet tables.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Bound, Error, Result};
use crate::poset::{Chain, IntervalKind, Poset};

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    poset: Poset,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
    height: usize,
}

/// The three chain families: chains through `0̂` (A), through `1̂` (B), or
/// through both (Z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainFamilyKind {
    A,
    B,
    Z,
}

impl Lattice {
    /// Computes join and meet tables, failing on the first pair without a
    /// unique least upper bound or greatest lower bound.
    pub fn from_poset(poset: Poset) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let lub = least(
                    &poset,
                    (0..n).filter(|&u| poset.leq(x, u) && poset.leq(y, u)),
                )
                .ok_or_else(|| not_a_lattice(&poset, x, y, Bound::Join))?;
                let glb = greatest(
                    &poset,
                    (0..n).filter(|&l| poset.leq(l, x) && poset.leq(l, y)),
                )
                .ok_or_else(|| not_a_lattice(&poset, x, y, Bound::Meet))?;
                join[x * n + y] = lub;
                join[y * n + x] = lub;
                meet[x * n + y] = glb;
                meet[y * n + x] = glb;
            }
        }
        let bottom = least(&poset, 0..n).ok_or(Error::EmptyLattice)?;
        let top = greatest(&poset, 0..n).ok_or(Error::EmptyLattice)?;
        let height = poset.height().unwrap_or(0);
        Ok(Self {
            poset,
            join,
            meet,
            bottom,
            top,
            height,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    /// Always false: lattices have a least element.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, x: usize) -> &str {
        self.poset.name(x)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.poset.index_of(label)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.poset.lt(x, y)
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Maximal length of a chain (number of members minus one).
    pub fn height(&self) -> usize {
        self.height
    }

    /// Join of an arbitrary subset; the empty join is `0̂`.
    pub fn join_all(&self, subset: impl IntoIterator<Item = usize>) -> usize {
        subset
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of an arbitrary subset; the empty meet is `1̂`.
    pub fn meet_all(&self, subset: impl IntoIterator<Item = usize>) -> usize {
        subset
            .into_iter()
            .fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn mobius(&self, x: usize, y: usize) -> Result<i64> {
        self.poset.mobius(x, y)
    }

    /// Reverses the order; joins become meets and `0̂` trades places with `1̂`.
    pub fn opposite(&self) -> Lattice {
        Lattice {
            poset: self.poset.opposite(),
            join: self.meet.clone(),
            meet: self.join.clone(),
            bottom: self.top,
            top: self.bottom,
            height: self.height,
        }
    }

    /// Chains of the given family, optionally restricted to `n + 1` members.
    pub fn chain_family(&self, kind: ChainFamilyKind, n: Option<usize>) -> Vec<Chain> {
        let must: &[usize] = match kind {
            ChainFamilyKind::A => &[self.bottom],
            ChainFamilyKind::B => &[self.top],
            ChainFamilyKind::Z => &[self.bottom, self.top],
        };
        self.poset.enumerate_chains(n.map(|n| n + 1), must)
    }

    pub fn is_in_family(&self, chain: &Chain, kind: ChainFamilyKind) -> bool {
        let has_bottom = chain.first() == Some(self.bottom);
        let has_top = chain.last() == Some(self.top);
        match kind {
            ChainFamilyKind::A => has_bottom,
            ChainFamilyKind::B => has_top,
            ChainFamilyKind::Z => has_bottom && has_top,
        }
    }

    /// Whether `[x, y]` is complemented: every `z` in it has some `w` in it
    /// with `z ∨ w = y` and `z ∧ w = x`.
    pub fn is_complemented_interval(&self, x: usize, y: usize) -> Result<bool> {
        if !self.leq(x, y) {
            return Err(Error::NotComparable(
                self.name(x).to_owned(),
                self.name(y).to_owned(),
            ));
        }
        let span: Vec<usize> = (0..self.len())
            .filter(|&z| self.leq(x, z) && self.leq(z, y))
            .collect();
        Ok(span.iter().all(|&z| {
            span.iter()
                .any(|&w| self.join(z, w) == y && self.meet(z, w) == x)
        }))
    }

    /// Elements with exactly one lower cover, in index order.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.poset.covers().iter().filter(|&&(_, y)| y == j).count() == 1)
            .collect()
    }

    pub fn interval_poset(&self, x: usize, y: usize, kind: IntervalKind) -> Result<Poset> {
        self.poset.interval(x, y, kind)
    }

    /// Hex digest of the canonical element and cover lists.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for name in self.poset.names() {
            hasher.update(name.as_bytes());
            hasher.update([0u8]);
        }
        hasher.update([1u8]);
        for &(x, y) in self.poset.covers() {
            hasher.update(self.name(x).as_bytes());
            hasher.update([0u8]);
            hasher.update(self.name(y).as_bytes());
            hasher.update([0u8]);
        }
        hex::encode(&hasher.finalize()[..16])
    }

    /// Overrides one Möbius value of the underlying poset (fault injection).
    #[doc(hidden)]
    pub fn corrupt_mobius(&mut self, x: usize, y: usize, value: i64) {
        self.poset.corrupt_mobius(x, y, value);
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("poset", &self.poset)
            .field("bottom", &self.name(self.bottom))
            .field("top", &self.name(self.top))
            .finish()
    }
}

fn least(poset: &Poset, candidates: impl Iterator<Item = usize>) -> Option<usize> {
    let mut mask = vec![false; poset.len()];
    candidates.for_each(|v| mask[v] = true);
    let first = poset
        .linear_extension()
        .iter()
        .copied()
        .find(|&u| mask[u])?;
    (0..poset.len())
        .all(|v| !mask[v] || poset.leq(first, v))
        .then_some(first)
}

fn greatest(poset: &Poset, candidates: impl Iterator<Item = usize>) -> Option<usize> {
    let mut mask = vec![false; poset.len()];
    candidates.for_each(|v| mask[v] = true);
    let last = poset
        .linear_extension()
        .iter()
        .rev()
        .copied()
        .find(|&u| mask[u])?;
    (0..poset.len())
        .all(|v| !mask[v] || poset.leq(v, last))
        .then_some(last)
}

fn not_a_lattice(poset: &Poset, x: usize, y: usize, which: Bound) -> Error {
    Error::NotALattice {
        x: poset.name(x).to_owned(),
        y: poset.name(y).to_owned(),
        which,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Lattice {
        let p = Poset::from_covers(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap();
        Lattice::from_poset(p).unwrap()
    }

    fn chain3() -> Lattice {
        let p = Poset::from_covers(&["0", "m", "1"], &[("0", "m"), ("m", "1")]).unwrap();
        Lattice::from_poset(p).unwrap()
    }

    #[test]
    fn diamond_tables() {
        let d = diamond();
        assert_eq!((d.bottom(), d.top()), (0, 3));
        assert_eq!(d.join(1, 2), 3);
        assert_eq!(d.meet(1, 2), 0);
        assert_eq!(d.height(), 2);
    }

    #[test]
    fn antichain_is_not_a_lattice() {
        let p = Poset::from_covers::<_, &str, &str>(&["a", "b"], &[]).unwrap();
        let err = Lattice::from_poset(p).unwrap_err();
        assert_eq!(
            err,
            Error::NotALattice {
                x: "a".into(),
                y: "b".into(),
                which: Bound::Join
            }
        );
    }

    #[test]
    fn total_order_join_is_max() {
        let c = chain3();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(c.join(x, y), x.max(y));
                assert_eq!(c.meet(x, y), x.min(y));
            }
        }
    }

    #[test]
    fn join_all_conventions() {
        let d = diamond();
        assert_eq!(d.join_all([]), 0);
        assert_eq!(d.join_all([2]), 2);
        assert_eq!(d.join_all([1, 2]), 3);
        assert_eq!(d.meet_all([]), 3);
    }

    #[test]
    fn opposite_is_an_involution() {
        let d = diamond();
        let op = d.opposite();
        assert_eq!((op.bottom(), op.top()), (3, 0));
        assert_eq!(op.join(1, 2), 0);
        assert_eq!(op.opposite(), d);
    }

    #[test]
    fn families() {
        let d = diamond();
        let z: Vec<Vec<usize>> = d
            .chain_family(ChainFamilyKind::Z, None)
            .iter()
            .map(|c| c.members().to_vec())
            .collect();
        assert_eq!(z, vec![vec![0, 3], vec![0, 1, 3], vec![0, 2, 3]]);
        let b1: Vec<Vec<usize>> = d
            .chain_family(ChainFamilyKind::B, Some(1))
            .iter()
            .map(|c| c.members().to_vec())
            .collect();
        assert_eq!(b1, vec![vec![0, 3], vec![1, 3], vec![2, 3]]);

        let one =
            Lattice::from_poset(Poset::from_covers::<_, &str, &str>(&["x"], &[]).unwrap()).unwrap();
        let z = one.chain_family(ChainFamilyKind::Z, None);
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].members(), &[0]);
    }

    #[test]
    fn complemented_intervals() {
        let d = diamond();
        assert!(d.is_complemented_interval(0, 1).unwrap());
        assert!(d.is_complemented_interval(0, 3).unwrap());
        assert!(!chain3().is_complemented_interval(0, 2).unwrap());
        assert!(d.is_complemented_interval(1, 2).is_err());
    }

    #[test]
    fn irreducibles() {
        assert_eq!(diamond().join_irreducibles(), vec![1, 2]);
        assert_eq!(chain3().join_irreducibles(), vec![1, 2]);
    }
}
