//! Library results against brute-force computations written from the
//! definitions alone.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use latidem::idempotent::b_chains;
use latidem::{
    alpha_of_chain, compose, enumerate_join_endomorphisms, generate, idempotent_direct,
    mu_chain_infinity, pi_of_chain, Chain, ChainFamilyKind, FormalSum, JoinMap, Lattice, RingSpec,
};
use num_traits::ToPrimitive;

const CORPUS: [&str; 13] = [
    "chain:0",
    "chain:1",
    "chain:2",
    "chain:3",
    "chain:4",
    "boolean:1",
    "boolean:2",
    "boolean:3",
    "diamond:3",
    "pentagon",
    "divisor:12",
    "partition:3",
    "product:boolean:2,chain:1",
];

fn lattice(name: &str) -> Arc<Lattice> {
    Arc::new(generate(name).unwrap())
}

/// μ over an explicit order relation, by the defining recursion.
fn mobius_table(n: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<Vec<i64>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&y| (0..n).filter(|&z| leq(z, y)).count());
    let mut mu = vec![vec![0i64; n]; n];
    for x in 0..n {
        for &y in &order {
            if x == y {
                mu[x][y] = 1;
            } else if leq(x, y) {
                mu[x][y] = -(0..n)
                    .filter(|&z| z != y && leq(x, z) && leq(z, y))
                    .map(|z| mu[x][z])
                    .sum::<i64>();
            }
        }
    }
    mu
}

fn subsets_that_are_chains(l: &Lattice) -> Vec<u32> {
    (0u32..1 << l.len())
        .filter(|&s| {
            let m: Vec<usize> = (0..l.len()).filter(|&i| s >> i & 1 == 1).collect();
            m.iter()
                .all(|&x| m.iter().all(|&y| l.leq(x, y) || l.leq(y, x)))
        })
        .collect()
}

/// μ(A,∞) in the poset of chains containing 0̂, ordered by inclusion, with a
/// top ∞ adjoined.
fn mu_infinity_brute(l: &Lattice, a: &Chain) -> i64 {
    let a_mask: u32 = a.members().iter().map(|&x| 1 << x).sum();
    let mut nodes: Vec<u32> = subsets_that_are_chains(l)
        .into_iter()
        .filter(|&s| s & a_mask == a_mask)
        .collect();
    let infinity = nodes.len();
    nodes.push(u32::MAX);
    let mu = mobius_table(nodes.len(), |i, j| {
        j == infinity || (i != infinity && nodes[i] & nodes[j] == nodes[i])
    });
    let start = nodes.iter().position(|&s| s == a_mask).unwrap();
    mu[start][infinity]
}

fn alpha_brute(l: &Lattice, b: &Chain) -> Vec<usize> {
    (0..l.len())
        .map(|t| {
            let above: Vec<usize> = b
                .members()
                .iter()
                .copied()
                .filter(|&x| l.leq(t, x))
                .collect();
            *above
                .iter()
                .find(|&&x| above.iter().all(|&y| l.leq(x, y)))
                .unwrap()
        })
        .collect()
}

fn is_join_map(l: &Lattice, f: &[usize]) -> bool {
    f[l.bottom()] == l.bottom()
        && (0..l.len()).all(|x| (0..l.len()).all(|y| f[l.join(x, y)] == l.join(f[x], f[y])))
}

fn all_tables(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let v = code % n;
                code /= n;
                v
            })
            .collect()
    })
}

type Sum = BTreeMap<Vec<usize>, i64>;

fn mul_sums(g: &Sum, f: &Sum) -> Sum {
    let mut out = Sum::new();
    for (fv, fc) in f {
        for (gv, gc) in g {
            let key: Vec<usize> = fv.iter().map(|&x| gv[x]).collect();
            *out.entry(key).or_default() += gc * fc;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn to_int_sum(s: &FormalSum) -> Sum {
    s.terms()
        .map(|(k, c)| (k.to_vec(), c.to_integer().to_i64().unwrap()))
        .collect()
}

fn e_brute(l: &Lattice) -> Sum {
    let mut e = Sum::new();
    for s in subsets_that_are_chains(l) {
        if s >> l.bottom() & 1 == 0 || s >> l.top() & 1 == 0 {
            continue;
        }
        let b = Chain::new(l.poset(), (0..l.len()).filter(|&i| s >> i & 1 == 1)).unwrap();
        *e.entry(alpha_brute(l, &b)).or_default() -= mu_infinity_brute(l, &b);
    }
    e.retain(|_, c| *c != 0);
    e
}

#[test]
fn mobius_matches_recursion_and_hall() {
    for name in CORPUS {
        let l = lattice(name);
        let mu = mobius_table(l.len(), |x, y| l.leq(x, y));
        for x in 0..l.len() {
            for y in 0..l.len() {
                if l.leq(x, y) {
                    assert_eq!(l.mobius(x, y).unwrap(), mu[x][y], "{name} μ({x},{y})");
                    assert_eq!(l.poset().mobius_hall(x, y).unwrap(), mu[x][y]);
                }
            }
        }
    }
}

#[test]
fn mu_infinity_matches_explicit_chain_poset() {
    for name in CORPUS
        .iter()
        .filter(|n| !n.contains("product") && **n != "boolean:3")
    {
        let l = lattice(name);
        for a in l.chain_family(ChainFamilyKind::A, None) {
            assert_eq!(
                mu_chain_infinity(&l, &a).unwrap(),
                mu_infinity_brute(&l, &a),
                "{name} {}",
                a.display(l.poset())
            );
        }
    }
}

#[test]
fn diamond_idempotent_coefficients() {
    let d = lattice("boolean:2");
    let e = idempotent_direct(&d, RingSpec::Integers, false);
    let alpha = |labels: &[&str]| alpha_brute(&d, &Chain::from_labels(d.poset(), labels).unwrap());
    let expected: Sum = [
        (alpha(&["0", "1"]), -1),
        (alpha(&["0", "a", "1"]), 1),
        (alpha(&["0", "b", "1"]), 1),
    ]
    .into_iter()
    .collect();
    assert_eq!(to_int_sum(&e), expected);
}

#[test]
fn idempotent_matches_brute_force_formula() {
    for name in CORPUS
        .iter()
        .filter(|n| !n.contains("product") && **n != "boolean:3")
    {
        let l = lattice(name);
        let brute = e_brute(&l);
        assert_eq!(
            to_int_sum(&idempotent_direct(&l, RingSpec::Integers, false)),
            brute,
            "{name}"
        );
        assert_eq!(mul_sums(&brute, &brute), brute, "{name}");
    }
}

#[test]
fn total_orders_give_identity() {
    for n in 0..=6 {
        let l = lattice(&format!("chain:{n}"));
        let e = idempotent_direct(&l, RingSpec::Integers, false);
        let id: Sum = [((0..=n).collect(), 1)].into_iter().collect();
        assert_eq!(to_int_sum(&e), id, "chain:{n}");
    }
}

#[test]
fn enumeration_matches_raw_tables() {
    for name in CORPUS {
        let l = lattice(name);
        if l.len() > 5 {
            continue;
        }
        let raw: BTreeSet<Vec<usize>> =
            all_tables(l.len()).filter(|f| is_join_map(&l, f)).collect();
        let listed: Vec<Vec<usize>> = enumerate_join_endomorphisms(&l, false)
            .map(|m| m.values().to_vec())
            .collect();
        assert_eq!(listed.len(), raw.len(), "{name}");
        assert_eq!(listed.into_iter().collect::<BTreeSet<_>>(), raw, "{name}");
    }
}

#[test]
fn alpha_properties() {
    for name in CORPUS {
        let l = lattice(name);
        let mut seen = HashSet::new();
        for b in l.chain_family(ChainFamilyKind::Z, None) {
            let a = alpha_of_chain(&l, &b).unwrap();
            assert_eq!(a.values(), alpha_brute(&l, &b));
            assert!((0..l.len()).all(|t| l.leq(t, a.apply(t))));
            assert_eq!(compose(&a, &a).unwrap(), a);
            assert_eq!(a.image_chain().unwrap(), b);
            assert!(seen.insert(a.values().to_vec()), "α maps must be distinct");
        }
    }
}

#[test]
fn extensive_idempotents_with_chain_image_are_alphas() {
    for name in CORPUS {
        let l = lattice(name);
        for m in enumerate_join_endomorphisms(&l, true) {
            if m.is_extensive() && compose(&m, &m).unwrap() == m {
                let image = m.image_chain().unwrap();
                assert_eq!(alpha_of_chain(&l, &image).unwrap(), m, "{name}");
            }
        }
    }
}

#[test]
fn pi_opposite_recovers_chain() {
    for name in CORPUS {
        let l = lattice(name);
        for b in b_chains(&l) {
            let pi = pi_of_chain(&l, &b).unwrap();
            assert!(pi.is_surjective());
            assert_eq!(pi.opposite().values(), b.members());
        }
    }
}

#[test]
fn opposite_is_adjoint() {
    // φ(t) ≤ t' in T iff t ≤ φ^op(t') in T, read in the source order.
    for name in ["boolean:2", "pentagon", "chain:3", "divisor:12"] {
        let l = lattice(name);
        for phi in enumerate_join_endomorphisms(&l, false) {
            let op = phi.opposite();
            for t in 0..l.len() {
                for u in 0..l.len() {
                    assert_eq!(l.leq(phi.apply(t), u), l.leq(t, op.apply(u)));
                }
            }
        }
    }
}

#[test]
fn lattice_axioms() {
    for name in CORPUS {
        let l = lattice(name);
        for x in 0..l.len() {
            for y in 0..l.len() {
                assert_eq!(l.join(x, l.meet(x, y)), x);
                assert_eq!(l.meet(x, l.join(x, y)), x);
                let below: Vec<usize> = (0..l.len())
                    .filter(|&a| l.leq(a, x) && l.leq(a, y))
                    .collect();
                assert_eq!(l.meet(x, y), l.join_all(below));
            }
        }
    }
}

#[test]
fn chain_families() {
    for name in CORPUS {
        let l = lattice(name);
        for n in 0..=l.height() {
            let a = l.chain_family(ChainFamilyKind::A, Some(n));
            let b = l.chain_family(ChainFamilyKind::B, Some(n));
            let z: BTreeSet<Chain> = l
                .chain_family(ChainFamilyKind::Z, Some(n))
                .into_iter()
                .collect();
            assert_eq!(a.len(), b.len(), "{name} n={n}");
            let both: BTreeSet<Chain> = a.into_iter().filter(|c| b.contains(c)).collect();
            assert_eq!(both, z);
        }
    }
}

#[test]
fn identity_is_neutral() {
    let l = lattice("pentagon");
    let id = JoinMap::identity(&l);
    for m in enumerate_join_endomorphisms(&l, false) {
        assert_eq!(compose(&id, &m).unwrap(), m);
        assert_eq!(compose(&m, &id).unwrap(), m);
    }
}
