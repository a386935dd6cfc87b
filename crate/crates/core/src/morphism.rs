//! Join-morphisms between finite lattices and the canonical maps built from
//! chains: `α_B`, `π^B` and the sections `j_A^B`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::generate::Descriptor;
use crate::lattice::{ChainFamilyKind, Lattice};
use crate::poset::Chain;

/// A join-preserving map, stored as its full value table.
#[derive(Clone)]
pub struct JoinMap {
    source: Arc<Lattice>,
    target: Arc<Lattice>,
    values: Vec<usize>,
}

pub(crate) fn same_lattice(a: &Arc<Lattice>, b: &Arc<Lattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl JoinMap {
    /// Validates `values` as a join-morphism `source → target`.
    ///
    /// Checking `φ(0̂) = 0̂` and every binary join is enough: arbitrary finite
    /// joins follow by induction.
    pub fn new(source: Arc<Lattice>, target: Arc<Lattice>, values: Vec<usize>) -> Result<Self> {
        if values.len() != source.len() {
            return Err(Error::TableLength {
                expected: source.len(),
                got: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|&&v| v >= target.len()) {
            return Err(Error::ValueOutOfRange(v));
        }
        if values[source.bottom()] != target.bottom() {
            return Err(Error::BottomNotPreserved(
                target.name(values[source.bottom()]).to_owned(),
            ));
        }
        if let Some((x, y)) = first_join_violation(&source, &target, &values) {
            return Err(Error::NotJoinMorphism(
                source.name(x).to_owned(),
                source.name(y).to_owned(),
            ));
        }
        Ok(Self {
            source,
            target,
            values,
        })
    }

    pub(crate) fn new_unchecked(
        source: Arc<Lattice>,
        target: Arc<Lattice>,
        values: Vec<usize>,
    ) -> Self {
        debug_assert!(
            values.len() == source.len()
                && values[source.bottom()] == target.bottom()
                && first_join_violation(&source, &target, &values).is_none()
        );
        Self {
            source,
            target,
            values,
        }
    }

    pub fn identity(lattice: &Arc<Lattice>) -> Self {
        Self::new_unchecked(
            lattice.clone(),
            lattice.clone(),
            (0..lattice.len()).collect(),
        )
    }

    /// The map sending everything to `0̂`.
    pub fn zero(source: &Arc<Lattice>, target: &Arc<Lattice>) -> Self {
        Self::new_unchecked(
            source.clone(),
            target.clone(),
            vec![target.bottom(); source.len()],
        )
    }

    pub fn source(&self) -> &Arc<Lattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Lattice> {
        &self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &JoinMap) -> Result<JoinMap> {
        compose(self, f)
    }

    /// The image as a chain, if it is totally ordered.
    pub fn image_chain(&self) -> Option<Chain> {
        let mut image = self.values.clone();
        image.sort_unstable();
        image.dedup();
        Chain::new(self.target.poset(), image).ok()
    }

    pub fn has_total_image(&self) -> bool {
        self.image_chain().is_some()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        self.values.iter().for_each(|&v| hit[v] = true);
        hit.into_iter().all(|h| h)
    }

    /// Pointwise `self(x) ≥ x`, for endomorphisms.
    pub fn is_extensive(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(x, &v)| self.target.leq(x, v))
    }

    /// The opposite map `T'^op → T^op`, `t' ↦ ⋁{t : φ(t) ≤ t'}`.
    pub fn opposite(&self) -> JoinMap {
        let (s, t) = (&self.source, &self.target);
        let values = (0..t.len())
            .map(|y| s.join_all((0..s.len()).filter(|&x| t.leq(self.values[x], y))))
            .collect();
        JoinMap::new_unchecked(Arc::new(t.opposite()), Arc::new(s.opposite()), values)
    }

    /// `sup{t : φ(t) = t'}` for each `t'`; agrees with [`JoinMap::opposite`]
    /// when the map is surjective.
    pub fn fibre_sups(&self) -> Vec<usize> {
        let s = &self.source;
        (0..self.target.len())
            .map(|y| s.join_all((0..s.len()).filter(|&x| self.values[x] == y)))
            .collect()
    }

    /// `x ↦ y` pairs using labels.
    pub fn labelled(&self) -> Vec<(&str, &str)> {
        self.values
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.source.name(x), self.target.name(y)))
            .collect()
    }
}

fn first_join_violation(
    source: &Lattice,
    target: &Lattice,
    values: &[usize],
) -> Option<(usize, usize)> {
    let n = source.len();
    (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .find(|&(x, y)| values[source.join(x, y)] != target.join(values[x], values[y]))
}

impl PartialEq for JoinMap {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
            && same_lattice(&self.source, &other.source)
            && same_lattice(&self.target, &other.target)
    }
}

impl Eq for JoinMap {}

impl Hash for JoinMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

impl fmt::Debug for JoinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .labelled()
            .into_iter()
            .map(|(x, y)| format!("{x}↦{y}"))
            .collect();
        write!(f, "JoinMap[{}]", pairs.join(", "))
    }
}

/// `g ∘ f`.
pub fn compose(g: &JoinMap, f: &JoinMap) -> Result<JoinMap> {
    if !same_lattice(&f.target, &g.source) {
        return Err(Error::SourceTargetMismatch);
    }
    let values = f.values.iter().map(|&x| g.values[x]).collect();
    Ok(JoinMap::new_unchecked(
        f.source.clone(),
        g.target.clone(),
        values,
    ))
}

/// `α_B(t) = min{b ∈ B : b ≥ t}` for a chain `B` through `0̂` and `1̂`.
pub fn alpha_of_chain(lattice: &Arc<Lattice>, chain: &Chain) -> Result<JoinMap> {
    if !lattice.is_in_family(chain, ChainFamilyKind::Z) {
        return Err(Error::ChainNotInZ);
    }
    let values = (0..lattice.len())
        .map(|t| {
            chain
                .members()
                .iter()
                .copied()
                .find(|&b| lattice.leq(t, b))
                .expect("1̂ bounds every element")
        })
        .collect();
    Ok(JoinMap::new_unchecked(
        lattice.clone(),
        lattice.clone(),
        values,
    ))
}

/// The total order `0 < 1 < … < n`, shared across calls.
pub fn index_chain(n: usize) -> Arc<Lattice> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Lattice>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("index chain cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            Arc::new(
                Descriptor::Chain(n)
                    .generate()
                    .expect("total orders are lattices"),
            )
        })
        .clone()
}

/// The surjection `π^B : T → P` onto a total order with `|B|` elements,
/// `t ↦ min{p : t ≤ b_p}`.
pub fn pi_of_chain(lattice: &Arc<Lattice>, chain: &Chain) -> Result<JoinMap> {
    if !lattice.is_in_family(chain, ChainFamilyKind::B) {
        return Err(Error::ChainNotInB);
    }
    let index = index_chain(chain.len() - 1);
    let values = (0..lattice.len())
        .map(|t| {
            chain
                .members()
                .iter()
                .position(|&b| lattice.leq(t, b))
                .expect("1̂ bounds every element")
        })
        .collect();
    Ok(JoinMap::new_unchecked(lattice.clone(), index, values))
}

/// A choice `a_p ∈ [b_{p-1}, b_p]` for every position `p ≥ 1` of a chain
/// `b_0 < … < b_n = 1̂`; position 0 is implicitly sent to `0̂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyOverChain {
    chain: Chain,
    picks: Vec<usize>,
}

impl FamilyOverChain {
    pub fn new(lattice: &Lattice, chain: Chain, picks: Vec<usize>) -> Result<Self> {
        if !lattice.is_in_family(&chain, ChainFamilyKind::B) {
            return Err(Error::ChainNotInB);
        }
        let b = chain.members();
        let fits = picks.len() + 1 == b.len()
            && picks.iter().enumerate().all(|(k, &a)| {
                a < lattice.len() && lattice.leq(b[k], a) && lattice.leq(a, b[k + 1])
            });
        if !fits {
            return Err(Error::InvalidFamily);
        }
        Ok(Self { chain, picks })
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    /// `picks()[k]` is `a_{k+1}`.
    pub fn picks(&self) -> &[usize] {
        &self.picks
    }
}

/// Every family over `chain`, in lexicographic order of picks (earliest
/// position most significant, each interval in index order).
pub fn families_over_chain(lattice: &Lattice, chain: &Chain) -> Result<Vec<FamilyOverChain>> {
    if !lattice.is_in_family(chain, ChainFamilyKind::B) {
        return Err(Error::ChainNotInB);
    }
    let b = chain.members();
    let ranges: Vec<Vec<usize>> = b
        .windows(2)
        .map(|w| {
            (0..lattice.len())
                .filter(|&a| lattice.leq(w[0], a) && lattice.leq(a, w[1]))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut picks = Vec::with_capacity(ranges.len());
    fn product(
        ranges: &[Vec<usize>],
        picks: &mut Vec<usize>,
        chain: &Chain,
        out: &mut Vec<FamilyOverChain>,
    ) {
        match ranges.split_first() {
            None => out.push(FamilyOverChain {
                chain: chain.clone(),
                picks: picks.clone(),
            }),
            Some((first, rest)) => {
                for &a in first {
                    picks.push(a);
                    product(rest, picks, chain, out);
                    picks.pop();
                }
            }
        }
    }
    product(&ranges, &mut picks, chain, &mut out);
    Ok(out)
}

/// `j_A^B : P → T`, `0 ↦ 0̂`, `p ↦ a_p`.
pub fn j_of_family(lattice: &Arc<Lattice>, family: &FamilyOverChain) -> Result<JoinMap> {
    let index = index_chain(family.picks.len());
    let mut values = Vec::with_capacity(family.picks.len() + 1);
    values.push(lattice.bottom());
    values.extend_from_slice(&family.picks);
    JoinMap::new(index, lattice.clone(), values)
}

/// Extends an assignment on the join-irreducibles of `source` to
/// `t ↦ ⋁{f(j) : j ≤ t}` and keeps it only if that is a join-morphism
/// agreeing with the assignment, so each map arises from exactly one assignment.
pub fn extend_from_irreducibles(
    source: &Arc<Lattice>,
    target: &Arc<Lattice>,
    irreducibles: &[usize],
    assignment: &[usize],
) -> Option<JoinMap> {
    let values: Vec<usize> = (0..source.len())
        .map(|t| {
            target.join_all(
                irreducibles
                    .iter()
                    .zip(assignment)
                    .filter(|&(&j, _)| source.leq(j, t))
                    .map(|(_, &v)| v),
            )
        })
        .collect();
    if irreducibles
        .iter()
        .zip(assignment)
        .any(|(&j, &v)| values[j] != v)
    {
        return None;
    }
    JoinMap::new(source.clone(), target.clone(), values).ok()
}

/// Iterator over all join-morphisms `source → target`, in lexicographic
/// order of the values assigned to the join-irreducibles of `source`.
pub struct JoinMaps {
    source: Arc<Lattice>,
    target: Arc<Lattice>,
    irreducibles: Vec<usize>,
    assignment: Vec<usize>,
    done: bool,
    tot_only: bool,
}

impl JoinMaps {
    /// Number of raw assignments the iterator walks through.
    pub fn assignment_count(&self) -> Option<u64> {
        (self.target.len() as u64).checked_pow(self.irreducibles.len() as u32)
    }

    fn advance(&mut self) {
        for slot in self.assignment.iter_mut().rev() {
            *slot += 1;
            if *slot < self.target.len() {
                return;
            }
            *slot = 0;
        }
        self.done = true;
    }
}

impl Iterator for JoinMaps {
    type Item = JoinMap;

    fn next(&mut self) -> Option<JoinMap> {
        while !self.done {
            let found = extend_from_irreducibles(
                &self.source,
                &self.target,
                &self.irreducibles,
                &self.assignment,
            );
            self.advance();
            match found {
                Some(map) if !self.tot_only || map.has_total_image() => return Some(map),
                _ => {}
            }
        }
        None
    }
}

pub fn enumerate_join_maps(source: &Arc<Lattice>, target: &Arc<Lattice>) -> JoinMaps {
    let irreducibles = source.join_irreducibles();
    JoinMaps {
        source: source.clone(),
        target: target.clone(),
        assignment: vec![0; irreducibles.len()],
        irreducibles,
        done: false,
        tot_only: false,
    }
}

/// All join-endomorphisms, or only those with totally ordered image.
pub fn enumerate_join_endomorphisms(lattice: &Arc<Lattice>, tot_only: bool) -> JoinMaps {
    let mut maps = enumerate_join_maps(lattice, lattice);
    maps.tot_only = tot_only;
    maps
}
