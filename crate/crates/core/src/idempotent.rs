//! The central idempotent attached to the totally ordered part of
//! `End_{kℒ}(T)`, built two ways.
//!
//! * [`idempotent_direct`]: `−Σ_{B ∈ 𝒵_T} μ(B, ∞) α_B`.
//! * [`idempotent_original`]: `Σ_n Σ_{B ∈ ℬ_{T,n}} f_B` with
//!   `f_B = j^B π^B` and `j^B = (−1)^n Σ_{A ∈ 𝔉_B} μ(B⁻, A) j_A^B`.
//!
//! `μ(A, ∞)` is the Möbius value from a chain `A ∋ 0̂` to a top adjoined to
//! the poset of such chains ordered by inclusion. [`mu_chain_infinity`]
//! evaluates it as a signed product of interval Möbius values;
//! [`mu_chain_infinity_oracle`] counts chains in the chain poset instead.

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::FormalSum;
use crate::error::{Error, Result};
use crate::lattice::{ChainFamilyKind, Lattice};
use crate::morphism::{
    alpha_of_chain, families_over_chain, index_chain, j_of_family, pi_of_chain, FamilyOverChain,
};
use crate::poset::{alternating_sum, hall_chain_counts, Chain, FiniteOrder};
use crate::ring::RingSpec;

/// Default bound on the number of chains strictly above `A` that the oracle
/// is willing to tabulate.
pub const DEFAULT_CHAIN_POSET_LIMIT: usize = 100_000;

fn sign(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `μ(A, ∞) = (−1)^{n+1} Π_k μ(a_{k−1}, a_k)`, or 0 when `max A < 1̂`.
pub fn mu_chain_infinity(lattice: &Lattice, chain: &Chain) -> Result<i64> {
    if !lattice.is_in_family(chain, ChainFamilyKind::A) {
        return Err(Error::ChainNotInA);
    }
    if chain.last() != Some(lattice.top()) {
        return Ok(0);
    }
    let n = chain.len() - 1;
    let mut product = sign(n + 1);
    for step in chain.members().windows(2) {
        let mu = lattice.mobius(step[0], step[1])?;
        product = product.checked_mul(mu).expect("Möbius product overflow");
    }
    Ok(product)
}

/// The poset `{C ∈ 𝒜_T : C ⊇ A} ∪ {∞}` under inclusion, chains held as
/// bitmasks. Index 0 is `A`, the last index is `∞`.
struct ChainPoset {
    masks: Vec<u128>,
}

impl ChainPoset {
    fn infinity(&self) -> usize {
        self.masks.len()
    }
}

impl FiniteOrder for ChainPoset {
    fn size(&self) -> usize {
        self.masks.len() + 1
    }

    fn less(&self, a: usize, b: usize) -> bool {
        let inf = self.infinity();
        if b == inf {
            return a != inf;
        }
        if a == inf {
            return false;
        }
        let (x, y) = (self.masks[a], self.masks[b]);
        x != y && x & y == x
    }

    fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.masks.len()).collect();
        order.sort_by_key(|&i| (self.masks[i].count_ones(), i));
        order.push(self.infinity());
        order
    }
}

/// `μ(A, ∞)` by Hall's chain count in the poset of chains containing `A`.
///
/// Works for every `A ∈ 𝒜_T` without using the Möbius function of `T`.
/// Fails with [`Error::FeasibilityLimit`] when more than `limit` chains lie
/// strictly above `A`.
pub fn mu_chain_infinity_oracle(lattice: &Lattice, chain: &Chain, limit: usize) -> Result<i64> {
    if !lattice.is_in_family(chain, ChainFamilyKind::A) {
        return Err(Error::ChainNotInA);
    }
    if lattice.len() > 128 {
        return Err(Error::FeasibilityLimit(format!(
            "chain poset oracle supports at most 128 lattice elements, got {}",
            lattice.len()
        )));
    }
    let above = lattice.poset().enumerate_chains(None, chain.members());
    if above.len() - 1 > limit {
        return Err(Error::FeasibilityLimit(format!(
            "{} chains above {}, limit {limit}",
            above.len() - 1,
            chain.display(lattice.poset())
        )));
    }
    let mask = |c: &Chain| c.members().iter().fold(0u128, |m, &x| m | 1 << x);
    let base = mask(chain);
    let mut masks = vec![base];
    masks.extend(above.iter().map(mask).filter(|&m| m != base));
    let poset = ChainPoset { masks };
    Ok(alternating_sum(&hall_chain_counts(
        &poset,
        0,
        poset.infinity(),
    )))
}

/// Whether every step interval `[b_{k−1}, b_k]` of the chain is complemented.
pub fn has_complemented_steps(lattice: &Lattice, chain: &Chain) -> bool {
    chain.members().windows(2).all(|w| {
        lattice
            .is_complemented_interval(w[0], w[1])
            .expect("chain steps are comparable")
    })
}

/// Chains of `𝒵_T` that the complemented-interval filter drops.
pub fn crapo_skipped_chains(lattice: &Lattice) -> Vec<Chain> {
    lattice
        .chain_family(ChainFamilyKind::Z, None)
        .into_iter()
        .filter(|b| !has_complemented_steps(lattice, b))
        .collect()
}

/// `e = −Σ_{B ∈ 𝒵_T} μ(B, ∞) α_B`, optionally skipping chains with a
/// non-complemented step.
pub fn idempotent_direct(lattice: &Arc<Lattice>, ring: RingSpec, crapo_filter: bool) -> FormalSum {
    let mut sum = FormalSum::zero(ring, lattice, lattice);
    for chain in lattice.chain_family(ChainFamilyKind::Z, None) {
        if crapo_filter && !has_complemented_steps(lattice, &chain) {
            continue;
        }
        let mu = mu_chain_infinity(lattice, &chain).expect("𝒵 chains lie in 𝒜");
        if mu == 0 {
            continue;
        }
        let alpha = alpha_of_chain(lattice, &chain).expect("𝒵 chain");
        sum.add_term(alpha.values().to_vec(), ring.from_integer(-mu));
    }
    sum
}

/// `μ(B⁻, A) = Π_p μ(b_{r(p)}, a_p)`.
pub fn mu_family(lattice: &Lattice, family: &FamilyOverChain) -> i64 {
    let b = family.chain().members();
    family
        .picks()
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            lattice
                .mobius(b[k], a)
                .expect("family picks lie above b_{r(p)}")
        })
        .try_fold(1i64, |acc, mu| acc.checked_mul(mu))
        .expect("Möbius product overflow")
}

/// `j^B = (−1)^n Σ_{A ∈ 𝔉_B} μ(B⁻, A) j_A^B ∈ Hom(P, T)`.
pub fn j_upper(lattice: &Arc<Lattice>, chain: &Chain, ring: RingSpec) -> Result<FormalSum> {
    let families = families_over_chain(lattice, chain)?;
    let n = chain.len() - 1;
    let mut sum = FormalSum::zero(ring, &index_chain(n), lattice);
    for family in &families {
        let mu = mu_family(lattice, family);
        if mu == 0 {
            continue;
        }
        let j = j_of_family(lattice, family)?;
        let coeff = sign(n).checked_mul(mu).expect("coefficient overflow");
        sum.add_term(j.values().to_vec(), ring.from_integer(coeff));
    }
    Ok(sum)
}

/// `f_B = j^B π^B ∈ End(T)`.
pub fn f_of_chain(lattice: &Arc<Lattice>, chain: &Chain, ring: RingSpec) -> Result<FormalSum> {
    let pi = pi_of_chain(lattice, chain)?;
    j_upper(lattice, chain, ring)?.mul(&FormalSum::from_map(ring, &pi))
}

/// All chains of `ℬ_T`, shortest first.
pub fn b_chains(lattice: &Lattice) -> Vec<Chain> {
    lattice.chain_family(ChainFamilyKind::B, None)
}

/// `Σ_{n=0}^{N} Σ_{B ∈ ℬ_{T,n}} f_B`.
pub fn idempotent_original(lattice: &Arc<Lattice>, ring: RingSpec) -> FormalSum {
    let zero = || FormalSum::zero(ring, lattice, lattice);
    b_chains(lattice)
        .par_iter()
        .map(|b| f_of_chain(lattice, b, ring).expect("ℬ chain"))
        .reduce(zero, |x, y| x.add(&y).expect("same signature"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate;
    use crate::morphism::JoinMap;
    use num_rational::BigRational;

    fn lattice(s: &str) -> Arc<Lattice> {
        Arc::new(generate(s).unwrap())
    }

    fn chain(l: &Lattice, labels: &[&str]) -> Chain {
        Chain::from_labels(l.poset(), labels).unwrap()
    }

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn mu_infinity_examples() {
        let d = lattice("boolean:2");
        assert_eq!(mu_chain_infinity(&d, &chain(&d, &["0", "1"])).unwrap(), 1);
        assert_eq!(mu_chain_infinity(&d, &chain(&d, &["0", "a"])).unwrap(), 0);
        assert_eq!(
            mu_chain_infinity(&d, &chain(&d, &["0", "a", "1"])).unwrap(),
            -1
        );
        assert_eq!(
            mu_chain_infinity(&d, &chain(&d, &["a", "1"])).unwrap_err(),
            Error::ChainNotInA
        );
        let c3 = lattice("chain:3");
        let maximal = chain(&c3, &["0", "1", "2", "3"]);
        assert_eq!(mu_chain_infinity(&c3, &maximal).unwrap(), -1);
    }

    #[test]
    fn oracle_examples() {
        let d = lattice("boolean:2");
        let lim = DEFAULT_CHAIN_POSET_LIMIT;
        assert_eq!(
            mu_chain_infinity_oracle(&d, &chain(&d, &["0", "1"]), lim).unwrap(),
            1
        );
        assert_eq!(
            mu_chain_infinity_oracle(&d, &chain(&d, &["0", "a"]), lim).unwrap(),
            0
        );
        assert_eq!(
            mu_chain_infinity_oracle(&d, &chain(&d, &["0", "a", "1"]), lim).unwrap(),
            -1
        );
        assert!(matches!(
            mu_chain_infinity_oracle(&d, &chain(&d, &["0"]), 2),
            Err(Error::FeasibilityLimit(_))
        ));
    }

    #[test]
    fn diamond_idempotent() {
        let d = lattice("boolean:2");
        let e = idempotent_direct(&d, RingSpec::Integers, false);
        assert_eq!(e.len(), 3);
        let alpha = |labels: &[&str]| alpha_of_chain(&d, &chain(&d, labels)).unwrap();
        assert_eq!(e.coefficient(&alpha(&["0", "1"])), int(-1));
        assert_eq!(e.coefficient(&alpha(&["0", "a", "1"])), int(1));
        assert_eq!(e.coefficient(&alpha(&["0", "b", "1"])), int(1));
    }

    #[test]
    fn trivial_lattices() {
        let one = lattice("chain:0");
        let id = FormalSum::identity(RingSpec::Integers, &one);
        assert_eq!(idempotent_direct(&one, RingSpec::Integers, false), id);
        assert_eq!(idempotent_original(&one, RingSpec::Integers), id);
        let c1 = lattice("chain:1");
        let id = FormalSum::identity(RingSpec::Integers, &c1);
        assert_eq!(idempotent_direct(&c1, RingSpec::Integers, false), id);
        assert_eq!(idempotent_original(&c1, RingSpec::Integers), id);
    }

    #[test]
    fn mu_family_examples() {
        let c1 = lattice("chain:1");
        let fams = families_over_chain(&c1, &chain(&c1, &["0", "1"])).unwrap();
        assert_eq!(mu_family(&c1, &fams[0]), 1);
        assert_eq!(mu_family(&c1, &fams[1]), -1);
        let b3 = lattice("boolean:3");
        let maximal = chain(&b3, &["0", "a", "ab", "1"]);
        let fams = families_over_chain(&b3, &maximal).unwrap();
        let top = fams.iter().find(|f| f.picks() == [1, 3, 7]).unwrap();
        assert_eq!(mu_family(&b3, top), -1);
        let low = fams.iter().find(|f| f.picks() == [0, 1, 3]).unwrap();
        assert_eq!(mu_family(&b3, low), 1);
    }

    #[test]
    fn j_and_f_on_two_element_chain() {
        let c1 = lattice("chain:1");
        let ring = RingSpec::Integers;
        let j0 = j_upper(&c1, &chain(&c1, &["1"]), ring).unwrap();
        assert_eq!(j0.len(), 1);
        assert_eq!(j0.terms().next().unwrap().0, &[0]);

        let j1 = j_upper(&c1, &chain(&c1, &["0", "1"]), ring).unwrap();
        assert_eq!(j1.coefficient_of(&[0, 0]), int(-1));
        assert_eq!(j1.coefficient_of(&[0, 1]), int(1));

        let zero_map = FormalSum::from_map(ring, &JoinMap::zero(&c1, &c1));
        let id = FormalSum::identity(ring, &c1);
        let f0 = f_of_chain(&c1, &chain(&c1, &["1"]), ring).unwrap();
        let f1 = f_of_chain(&c1, &chain(&c1, &["0", "1"]), ring).unwrap();
        assert_eq!(f0, zero_map);
        assert_eq!(f1, id.sub(&zero_map).unwrap());
        assert!(f0.mul(&f1).unwrap().is_zero());
        assert!(f1.mul(&f0).unwrap().is_zero());
        assert_eq!(f0.add(&f1).unwrap(), id);
    }

    #[test]
    fn direct_equals_original_on_small_lattices() {
        for s in [
            "boolean:2",
            "pentagon",
            "diamond:3",
            "chain:3",
            "divisor:12",
        ] {
            let l = lattice(s);
            assert_eq!(
                idempotent_direct(&l, RingSpec::Integers, false),
                idempotent_original(&l, RingSpec::Integers),
                "{s}"
            );
        }
    }
}
