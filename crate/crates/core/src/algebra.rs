//! Formal linear combinations of join-morphisms with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::morphism::{same_lattice, JoinMap};
use crate::ring::{Coeff, RingSpec};

/// An element of `Hom_{kℒ}(S, T)`: a finite combination of join-morphisms,
/// keyed by value table, with no zero coefficients stored.
#[derive(Clone)]
pub struct FormalSum {
    ring: RingSpec,
    source: Arc<Lattice>,
    target: Arc<Lattice>,
    terms: BTreeMap<Vec<usize>, Coeff>,
}

impl FormalSum {
    pub fn zero(ring: RingSpec, source: &Arc<Lattice>, target: &Arc<Lattice>) -> Self {
        Self {
            ring,
            source: source.clone(),
            target: target.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// A single map with coefficient 1.
    pub fn from_map(ring: RingSpec, map: &JoinMap) -> Self {
        let mut sum = Self::zero(ring, map.source(), map.target());
        sum.add_term(map.values().to_vec(), ring.one());
        sum
    }

    /// The unit `Id_T` of the endomorphism algebra.
    pub fn identity(ring: RingSpec, lattice: &Arc<Lattice>) -> Self {
        Self::from_map(ring, &JoinMap::identity(lattice))
    }

    /// Adds `coeff · map`; `coeff` must already be a ring element.
    pub fn add_scaled(&mut self, map: &JoinMap, coeff: &Coeff) -> Result<()> {
        if !same_lattice(map.source(), &self.source) || !same_lattice(map.target(), &self.target) {
            return Err(Error::SignatureMismatch);
        }
        self.add_term(map.values().to_vec(), self.ring.normalize(coeff.clone()));
        Ok(())
    }

    pub(crate) fn add_term(&mut self, values: Vec<usize>, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        let ring = self.ring;
        match self.terms.entry(values) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = ring.add(slot.get(), &coeff);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn source(&self) -> &Arc<Lattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Lattice> {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(value table, coefficient)` in canonical table order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Coeff)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Terms with their maps materialized.
    pub fn maps(&self) -> impl Iterator<Item = (JoinMap, &Coeff)> + '_ {
        self.terms.iter().map(|(k, v)| {
            (
                JoinMap::new_unchecked(self.source.clone(), self.target.clone(), k.clone()),
                v,
            )
        })
    }

    pub fn coefficient(&self, map: &JoinMap) -> Coeff {
        self.coefficient_of(map.values())
    }

    pub fn coefficient_of(&self, values: &[usize]) -> Coeff {
        self.terms.get(values).cloned().unwrap_or_else(Coeff::zero)
    }

    fn check_same_signature(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring
            || !same_lattice(&self.source, &other.source)
            || !same_lattice(&self.target, &other.target)
        {
            return Err(Error::SignatureMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_signature(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.ring, &self.source, &self.target);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), self.ring.neg(v));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `c · self`; `c` is coerced into the ring first.
    pub fn scale(&self, c: &Coeff) -> Result<Self> {
        let c = self.ring.coerce(c)?;
        let mut out = Self::zero(self.ring, &self.source, &self.target);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), self.ring.mul(&c, v));
        }
        Ok(out)
    }

    /// `self · f`, the bilinear extension of `self ∘ f`.
    pub fn mul(&self, f: &FormalSum) -> Result<Self> {
        if self.ring != f.ring || !same_lattice(&f.target, &self.source) {
            return Err(Error::SignatureMismatch);
        }
        let mut out = Self::zero(self.ring, &f.source, &self.target);
        for (fv, fc) in &f.terms {
            for (gv, gc) in &self.terms {
                let composite = fv.iter().map(|&x| gv[x]).collect();
                out.add_term(composite, self.ring.mul(gc, fc));
            }
        }
        Ok(out)
    }

    /// The same combination with coefficients mapped into another ring.
    pub fn change_ring(&self, ring: RingSpec) -> Result<Self> {
        let mut out = Self::zero(ring, &self.source, &self.target);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), ring.coerce(v)?);
        }
        Ok(out)
    }

    /// First table on which two sums disagree, with both coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(Vec<usize>, Coeff, Coeff)> {
        let mut keys: Vec<&Vec<usize>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|k| {
            let (a, b) = (self.coefficient_of(k), other.coefficient_of(k));
            (a != b).then(|| (k.clone(), a, b))
        })
    }
}

impl PartialEq for FormalSum {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.terms == other.terms
            && same_lattice(&self.source, &other.source)
            && same_lattice(&self.target, &other.target)
    }
}

impl Eq for FormalSum {}

impl fmt::Debug for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .maps()
            .map(|(m, c)| format!("{}·{:?}", RingSpec::format(c), m))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
