//! Finite posets stored as dense order tables.
//!
//! Elements are identified by their index `0..len`; labels are kept only for
//! display and parsing. The order relation is materialized once, the cover
//! relation is its transitive reduction, and Möbius values are memoized row by
//! row the first time they are requested.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A finite partially ordered set.
#[derive(Clone)]
pub struct Poset {
    names: Vec<String>,
    leq: Vec<bool>,
    covers: Vec<(usize, usize)>,
    linear: Vec<usize>,
    mobius_rows: Vec<OnceLock<Vec<i64>>>,
    mobius_faults: Vec<(usize, usize, i64)>,
}

/// Whether an interval keeps or drops its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    Closed,
    Open,
}

impl Poset {
    /// Builds a poset from labels and a (possibly redundant) list of cover pairs.
    ///
    /// The order is the reflexive-transitive closure of the pairs; the stored
    /// cover relation is re-derived from it.
    pub fn from_covers<S, A, B>(names: &[S], covers: &[(A, B)]) -> Result<Self>
    where
        S: AsRef<str>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(name.clone()));
            }
        }
        let n = names.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in covers {
            let lookup = |s: &str| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::UnknownLabel(s.to_owned()))
            };
            let (x, y) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            leq[x * n + y] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_table(names, leq)
    }

    /// Builds a poset from labels and an order predicate, which must already be
    /// reflexive, antisymmetric and transitive.
    pub fn from_relation<F>(names: Vec<String>, leq: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        let n = names.len();
        let mut table = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = leq(i, j);
            }
        }
        {
            let mut seen = std::collections::HashSet::with_capacity(n);
            for name in &names {
                if !seen.insert(name.as_str()) {
                    return Err(Error::DuplicateLabel(name.clone()));
                }
            }
        }
        for i in 0..n {
            if !table[i * n + i] {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("relation is not reflexive at `{}`", names[i]),
                });
            }
            for j in 0..n {
                if !table[i * n + j] {
                    continue;
                }
                for k in 0..n {
                    if table[j * n + k] && !table[i * n + k] {
                        return Err(Error::Parse {
                            line: 0,
                            message: format!(
                                "relation is not transitive at `{}`, `{}`, `{}`",
                                names[i], names[j], names[k]
                            ),
                        });
                    }
                }
            }
        }
        Self::from_table(names, table)
    }

    fn from_table(names: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = names.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::CycleDetected(names[i].clone(), names[j].clone()));
                }
            }
        }
        let lt = |a: usize, b: usize| a != b && leq[a * n + b];
        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if lt(x, y) && !(0..n).any(|z| lt(x, z) && lt(z, y)) {
                    covers.push((x, y));
                }
            }
        }
        let mut linear: Vec<usize> = (0..n).collect();
        let downset = |x: usize| (0..n).filter(|&z| leq[z * n + x]).count();
        linear.sort_by_key(|&x| (downset(x), x));
        Ok(Self {
            names,
            leq,
            covers,
            linear,
            mobius_rows: (0..n).map(|_| OnceLock::new()).collect(),
            mobius_faults: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Cover pairs `(x, y)` with `x ⋖ y`, sorted by `(x, y)`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements in an order compatible with `≤` (smaller elements first).
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    /// The same elements with the order reversed.
    pub fn opposite(&self) -> Poset {
        let n = self.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = self.leq(j, i);
            }
        }
        Self::from_table(self.names.clone(), leq).expect("opposite of a poset is a poset")
    }

    fn require_leq(&self, x: usize, y: usize) -> Result<()> {
        if self.leq(x, y) {
            Ok(())
        } else {
            Err(Error::NotComparable(
                self.names[x].clone(),
                self.names[y].clone(),
            ))
        }
    }

    /// Möbius function `μ(x, y)` from the recursion `Σ_{x≤z≤y} μ(x,z) = δ(x,y)`.
    pub fn mobius(&self, x: usize, y: usize) -> Result<i64> {
        self.require_leq(x, y)?;
        if let Some(&(_, _, v)) = self
            .mobius_faults
            .iter()
            .find(|&&(a, b, _)| a == x && b == y)
        {
            return Ok(v);
        }
        Ok(self.mobius_rows[x].get_or_init(|| self.mobius_row(x))[y])
    }

    fn mobius_row(&self, x: usize) -> Vec<i64> {
        let mut row = vec![0i64; self.len()];
        for &y in &self.linear {
            if !self.leq(x, y) {
                continue;
            }
            row[y] = if y == x {
                1
            } else {
                let below: i64 = self
                    .linear
                    .iter()
                    .filter(|&&z| self.leq(x, z) && self.lt(z, y))
                    .map(|&z| row[z])
                    .sum();
                -below
            };
        }
        row
    }

    /// Overrides one memoized Möbius value. Only meant for fault-injection tests.
    #[doc(hidden)]
    pub fn corrupt_mobius(&mut self, x: usize, y: usize, value: i64) {
        self.mobius_faults.retain(|&(a, b, _)| (a, b) != (x, y));
        self.mobius_faults.push((x, y, value));
    }

    /// Möbius function by Philip Hall's alternating count of chains from `x` to `y`.
    pub fn mobius_hall(&self, x: usize, y: usize) -> Result<i64> {
        self.require_leq(x, y)?;
        Ok(alternating_sum(&hall_chain_counts(self, x, y)))
    }

    /// All chains, optionally of a given size and containing given elements,
    /// in canonical order (shorter first, then lexicographic on members).
    pub fn enumerate_chains(&self, size: Option<usize>, must_contain: &[usize]) -> Vec<Chain> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.extend_chains(&mut current, size, must_contain, &mut out);
        out.sort();
        out
    }

    fn extend_chains(
        &self,
        current: &mut Vec<usize>,
        size: Option<usize>,
        must_contain: &[usize],
        out: &mut Vec<Chain>,
    ) {
        if size.is_none_or(|s| s == current.len())
            && must_contain.iter().all(|m| current.contains(m))
        {
            out.push(Chain {
                members: current.clone(),
            });
        }
        if size.is_some_and(|s| current.len() >= s) {
            return;
        }
        for &z in &self.linear {
            if current.last().is_none_or(|&top| self.lt(top, z)) {
                current.push(z);
                self.extend_chains(current, size, must_contain, out);
                current.pop();
            }
        }
    }

    /// Induced subposet on `[x, y]` or `]x, y[`.
    pub fn interval(&self, x: usize, y: usize, kind: IntervalKind) -> Result<Poset> {
        self.require_leq(x, y)?;
        let keep: Vec<usize> = (0..self.len())
            .filter(|&z| self.leq(x, z) && self.leq(z, y))
            .filter(|&z| kind == IntervalKind::Closed || (z != x && z != y))
            .collect();
        Ok(self.induced(&keep))
    }

    /// Induced subposet on `keep`, in the given order.
    pub fn induced(&self, keep: &[usize]) -> Poset {
        let m = keep.len();
        let mut leq = vec![false; m * m];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                leq[i * m + j] = self.leq(a, b);
            }
        }
        let names = keep.iter().map(|&z| self.names[z].clone()).collect();
        Self::from_table(names, leq).expect("induced subposet")
    }

    /// Length (number of steps) of the longest chain, or `None` when empty.
    pub fn height(&self) -> Option<usize> {
        let mut depth = vec![0usize; self.len()];
        for &y in &self.linear {
            depth[y] = self
                .linear
                .iter()
                .filter(|&&z| self.lt(z, y))
                .map(|&z| depth[z] + 1)
                .max()
                .unwrap_or(0);
        }
        depth.into_iter().max()
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.leq == other.leq
            && self.mobius_faults == other.mobius_faults
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<_> = self
            .covers
            .iter()
            .map(|&(x, y)| format!("{}<{}", self.names[x], self.names[y]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.names)
            .field("covers", &covers)
            .finish()
    }
}

/// A strictly increasing sequence of elements of some poset.
///
/// Chains compare shortlex: by size first, then lexicographically on members.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    members: Vec<usize>,
}

impl Chain {
    /// Sorts `members` along the order of `poset`, rejecting repeated or
    /// incomparable elements.
    pub fn new(poset: &Poset, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if members.iter().any(|&m| m >= poset.len()) {
            return Err(Error::NotAChain);
        }
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if a == b || !poset.comparable(a, b) {
                    return Err(Error::NotAChain);
                }
            }
        }
        members.sort_by(|&a, &b| {
            if a == b {
                Ordering::Equal
            } else if poset.leq(a, b) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        });
        Ok(Self { members })
    }

    /// Parses labels into a chain.
    pub fn from_labels<S: AsRef<str>>(poset: &Poset, labels: &[S]) -> Result<Self> {
        let members = labels
            .iter()
            .map(|l| poset.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(poset, members)
    }

    #[cfg(test)]
    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        Self { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Number of members, `n + 1` for a chain of length `n`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.members.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.members.last().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(&x)
    }

    pub fn labels<'a>(&self, poset: &'a Poset) -> Vec<&'a str> {
        self.members.iter().map(|&m| poset.name(m)).collect()
    }

    /// `{a,b,c}` using the labels of `poset`.
    pub fn display(&self, poset: &Poset) -> String {
        format!("{{{}}}", self.labels(poset).join(","))
    }
}

impl Ord for Chain {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members
            .len()
            .cmp(&other.members.len())
            .then_with(|| self.members.cmp(&other.members))
    }
}

impl PartialOrd for Chain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite order given implicitly, for chain counting over posets too large
/// to tabulate.
pub trait FiniteOrder {
    fn size(&self) -> usize;

    fn less(&self, a: usize, b: usize) -> bool;

    /// All elements, smaller ones first.
    fn linear_extension(&self) -> Vec<usize>;

    /// Elements `w` with `lower ≤ w < b`.
    fn strictly_below_from(&self, lower: usize, b: usize) -> Vec<usize> {
        (0..self.size())
            .filter(|&w| (w == lower || self.less(lower, w)) && self.less(w, b))
            .collect()
    }
}

impl FiniteOrder for Poset {
    fn size(&self) -> usize {
        self.len()
    }

    fn less(&self, a: usize, b: usize) -> bool {
        self.lt(a, b)
    }

    fn linear_extension(&self) -> Vec<usize> {
        self.linear.clone()
    }
}

/// `c[i]` = number of chains `x = z_0 < z_1 < … < z_i = y`.
pub fn hall_chain_counts<O: FiniteOrder + ?Sized>(order: &O, x: usize, y: usize) -> Vec<u128> {
    if x == y {
        return vec![1];
    }
    if !order.less(x, y) {
        return Vec::new();
    }
    // counts[z][i]: chains from x to z with i steps.
    let mut counts: HashMap<usize, Vec<u128>> = HashMap::new();
    counts.insert(x, vec![1]);
    for z in order.linear_extension() {
        if z == x || !order.less(x, z) || !(z == y || order.less(z, y)) {
            continue;
        }
        let mut acc: Vec<u128> = Vec::new();
        for w in order.strictly_below_from(x, z) {
            if let Some(cw) = counts.get(&w) {
                if acc.len() < cw.len() + 1 {
                    acc.resize(cw.len() + 1, 0);
                }
                for (i, &c) in cw.iter().enumerate() {
                    acc[i + 1] = acc[i + 1].checked_add(c).expect("chain count overflow");
                }
            }
        }
        counts.insert(z, acc);
    }
    counts.remove(&y).unwrap_or_default()
}

/// `Σ_i (−1)^i c[i]`.
pub fn alternating_sum(counts: &[u128]) -> i64 {
    let total: i128 = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let c = i128::try_from(c).expect("chain count overflow");
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .sum();
    i64::try_from(total).expect("Möbius value overflow")
}
