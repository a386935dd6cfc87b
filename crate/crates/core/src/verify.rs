//! Exact property checks over a corpus of lattices.
//!
//! Each check produces a [`CheckReport`]. A failing report always carries a
//! [`Witness`] that [`reproduce`] can re-evaluate from scratch.

use std::collections::BTreeMap;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::FormalSum;
use crate::error::{Error, Result};
use crate::generate::Descriptor;
use crate::idempotent::{
    b_chains, crapo_skipped_chains, f_of_chain, idempotent_direct, idempotent_original,
    mu_chain_infinity, mu_chain_infinity_oracle, DEFAULT_CHAIN_POSET_LIMIT,
};
use crate::lattice::{ChainFamilyKind, Lattice};
use crate::morphism::{
    compose, enumerate_join_endomorphisms, extend_from_irreducibles, pi_of_chain, JoinMap,
};
use crate::poset::Chain;
use crate::ring::RingSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Idempotent,
    IdentityOnTot,
    Central,
    FormulaEquivalence,
    FFamily,
    MobiusLemmas,
    Crapo,
    Dimension,
    OppositeInvolution,
    Decomposition,
    IdealClosure,
    RingFunctoriality,
}

impl CheckKind {
    pub const ALL: [CheckKind; 12] = [
        CheckKind::Idempotent,
        CheckKind::IdentityOnTot,
        CheckKind::Central,
        CheckKind::FormulaEquivalence,
        CheckKind::FFamily,
        CheckKind::MobiusLemmas,
        CheckKind::Crapo,
        CheckKind::Dimension,
        CheckKind::OppositeInvolution,
        CheckKind::Decomposition,
        CheckKind::IdealClosure,
        CheckKind::RingFunctoriality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Idempotent => "idempotent",
            CheckKind::IdentityOnTot => "identity-on-tot",
            CheckKind::Central => "central",
            CheckKind::FormulaEquivalence => "formula-equivalence",
            CheckKind::FFamily => "f-family",
            CheckKind::MobiusLemmas => "mobius-lemmas",
            CheckKind::Crapo => "crapo",
            CheckKind::Dimension => "dimension",
            CheckKind::OppositeInvolution => "opposite-involution",
            CheckKind::Decomposition => "decomposition",
            CheckKind::IdealClosure => "ideal-closure",
            CheckKind::RingFunctoriality => "ring-functoriality",
        }
    }

    /// Whether the outcome depends on the coefficient ring.
    pub fn ring_dependent(self) -> bool {
        !matches!(
            self,
            CheckKind::MobiusLemmas
                | CheckKind::Dimension
                | CheckKind::OppositeInvolution
                | CheckKind::IdealClosure
        )
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        CheckKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    /// Random join-irreducible assignments, invalid extensions rejected.
    Sampled {
        seed: u64,
        count: usize,
    },
    /// Exhaustive except for instances beyond a feasibility limit.
    Restricted {
        skipped: u64,
    },
}

/// Named formal sums a [`Witness::SumMismatch`] can refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumExpr {
    /// `e` from the chain formula.
    Direct,
    /// `e` with the complemented-step filter.
    DirectFiltered,
    /// `e · e`.
    DirectSquared,
    /// `Σ f_B`.
    Original,
    /// `Id − e`.
    Complement,
    ComplementSquared,
    DirectTimesComplement,
    ComplementTimesDirect,
    Zero,
    /// `e` computed over the integers, then mapped into the ring.
    IntegerDirectMapped,
    /// `Σ f_B` computed over the integers, then mapped into the ring.
    IntegerOriginalMapped,
}

impl SumExpr {
    pub fn evaluate(self, lattice: &Arc<Lattice>, ring: RingSpec) -> FormalSum {
        let e = || idempotent_direct(lattice, ring, false);
        let complement = || {
            FormalSum::identity(ring, lattice)
                .sub(&e())
                .expect("same signature")
        };
        let mul = |a: FormalSum, b: FormalSum| a.mul(&b).expect("same signature");
        match self {
            SumExpr::Direct => e(),
            SumExpr::DirectFiltered => idempotent_direct(lattice, ring, true),
            SumExpr::DirectSquared => mul(e(), e()),
            SumExpr::Original => idempotent_original(lattice, ring),
            SumExpr::Complement => complement(),
            SumExpr::ComplementSquared => mul(complement(), complement()),
            SumExpr::DirectTimesComplement => mul(e(), complement()),
            SumExpr::ComplementTimesDirect => mul(complement(), e()),
            SumExpr::Zero => FormalSum::zero(ring, lattice, lattice),
            SumExpr::IntegerDirectMapped => idempotent_direct(lattice, RingSpec::Integers, false)
                .change_ring(ring)
                .expect("integers map into every ring"),
            SumExpr::IntegerOriginalMapped => idempotent_original(lattice, RingSpec::Integers)
                .change_ring(ring)
                .expect("integers map into every ring"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A concrete instance on which a check failed. Maps are recorded as the
/// list of image labels in source index order; chains as member labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    SumMismatch {
        left: SumExpr,
        right: SumExpr,
        map: Vec<String>,
        left_coefficient: String,
        right_coefficient: String,
    },
    /// `e·φ ≠ φ·e`.
    NotCommuting {
        map: Vec<String>,
    },
    /// `e·ψ ≠ ψ` (left) or `ψ·e ≠ ψ` (right).
    NotFixed {
        map: Vec<String>,
        side: Side,
    },
    MobiusMismatch {
        chain: Vec<String>,
        product: i64,
        oracle: i64,
    },
    /// A chain dropped by the complemented-step filter with `μ(B,∞) ≠ 0`.
    NonzeroSkipped {
        chain: Vec<String>,
        mu: i64,
    },
    FNotIdempotent {
        chain: Vec<String>,
    },
    FNotOrthogonal {
        first: Vec<String>,
        second: Vec<String>,
    },
    CountMismatch {
        what: String,
        left: u64,
        right: u64,
    },
    /// `(φ^op)^op ≠ φ`, or the fibre-supremum formula fails for a surjection.
    OppositeMismatch {
        map: Vec<String>,
        involution: bool,
    },
    /// A product of a total-image map with another map whose image is not a chain.
    IdealEscape {
        total: Vec<String>,
        other: Vec<String>,
        side: Side,
    },
    Internal {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: CheckKind,
    pub lattice: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ring: Option<RingSpec>,
    pub status: Status,
    pub mode: Mode,
    pub counts: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub details: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Witness>,
    /// Wall time, only recorded when requested so reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    fn new(check: CheckKind, target: &Target, ring: Option<RingSpec>) -> Self {
        Self {
            check,
            lattice: target.name.clone(),
            ring,
            status: Status::Pass,
            mode: Mode::Exhaustive,
            counts: BTreeMap::new(),
            details: None,
            notes: Vec::new(),
            counterexample: None,
            elapsed_ms: None,
        }
    }

    fn fail(&mut self, witness: Witness) {
        self.status = Status::Fail;
        self.counterexample = Some(witness);
    }

    fn skip(&mut self, reason: impl Into<String>) {
        self.status = Status::Skipped(reason.into());
    }

    fn count(&mut self, key: &str, value: usize) {
        self.counts.insert(key.to_owned(), value as u64);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Feasibility limits for exhaustive sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_irreducibles: usize,
    /// Bound on `|T|^{|J(T)|}` raw assignments.
    pub max_assignments: u64,
    /// Bound on the chains strictly above `A` in the Möbius oracle.
    pub max_chain_poset: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_irreducibles: 7,
            max_assignments: 10_000_000,
            max_chain_poset: DEFAULT_CHAIN_POSET_LIMIT,
        }
    }
}

impl Limits {
    /// Defaults overridden by `LATIDEM_MAX_IRREDUCIBLES`, `LATIDEM_MAX_ENDOS`
    /// and `LATIDEM_MAX_CHAIN_POSET` when set.
    pub fn from_env() -> Self {
        fn var<T: FromStr>(name: &str) -> Option<T> {
            std::env::var(name).ok()?.trim().parse().ok()
        }
        let d = Self::default();
        Self {
            max_irreducibles: var("LATIDEM_MAX_IRREDUCIBLES").unwrap_or(d.max_irreducibles),
            max_assignments: var("LATIDEM_MAX_ENDOS").unwrap_or(d.max_assignments),
            max_chain_poset: var("LATIDEM_MAX_CHAIN_POSET").unwrap_or(d.max_chain_poset),
        }
    }

    pub fn enumeration_feasible(&self, lattice: &Lattice) -> bool {
        let irr = lattice.join_irreducibles().len();
        irr <= self.max_irreducibles
            && (lattice.len() as u64)
                .checked_pow(irr as u32)
                .is_some_and(|n| n <= self.max_assignments)
    }

    fn infeasible_reason(&self, lattice: &Lattice) -> String {
        format!(
            "{} elements with {} join-irreducibles exceeds the enumeration limit \
             ({} irreducibles, {} assignments)",
            lattice.len(),
            lattice.join_irreducibles().len(),
            self.max_irreducibles,
            self.max_assignments
        )
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub limits: Limits,
    pub seed: u64,
    /// Endomorphisms drawn when a sweep falls back to sampling.
    pub sample_count: usize,
    pub record_timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            limits: Limits::default(),
            seed: 1,
            sample_count: 500,
            record_timings: false,
        }
    }
}

/// A lattice under test together with the name reports use for it.
#[derive(Debug, Clone)]
pub struct Target {
    pub name: String,
    pub lattice: Arc<Lattice>,
}

impl Target {
    pub fn new(name: impl Into<String>, lattice: Lattice) -> Self {
        Self {
            name: name.into(),
            lattice: Arc::new(lattice),
        }
    }

    pub fn from_descriptor(descriptor: &Descriptor) -> Result<Self> {
        Ok(Self::new(descriptor.to_string(), descriptor.generate()?))
    }
}

/// `chain(0..4)`, `boolean(1..3)`, `M_3`, `N_5`, `divisor(12)`,
/// `partition(3)` and `boolean(2) × chain(1)`.
pub fn default_corpus() -> Vec<Descriptor> {
    let mut corpus: Vec<Descriptor> = (0..=4).map(Descriptor::Chain).collect();
    corpus.extend((1..=3).map(Descriptor::Boolean));
    corpus.extend([
        Descriptor::Diamond(3),
        Descriptor::Pentagon,
        Descriptor::Divisor(12),
        Descriptor::Partition(3),
        Descriptor::Product(
            Box::new(Descriptor::Boolean(2)),
            Box::new(Descriptor::Chain(1)),
        ),
    ]);
    corpus
}

fn labels_of_map(map: &JoinMap) -> Vec<String> {
    map.values()
        .iter()
        .map(|&v| map.target().name(v).to_owned())
        .collect()
}

fn labels_of_table(lattice: &Lattice, values: &[usize]) -> Vec<String> {
    values.iter().map(|&v| lattice.name(v).to_owned()).collect()
}

fn labels_of_chain(lattice: &Lattice, chain: &Chain) -> Vec<String> {
    chain
        .labels(lattice.poset())
        .into_iter()
        .map(str::to_owned)
        .collect()
}

fn map_from_labels(lattice: &Arc<Lattice>, labels: &[String]) -> Result<JoinMap> {
    let values = labels
        .iter()
        .map(|l| lattice.index_of(l))
        .collect::<Result<Vec<_>>>()?;
    JoinMap::new(lattice.clone(), lattice.clone(), values)
}

fn compare_sums(
    report: &mut CheckReport,
    lattice: &Lattice,
    left: (SumExpr, &FormalSum),
    right: (SumExpr, &FormalSum),
) -> bool {
    match left.1.first_difference(right.1) {
        None => true,
        Some((values, a, b)) => {
            report.fail(Witness::SumMismatch {
                left: left.0,
                right: right.0,
                map: labels_of_table(lattice, &values),
                left_coefficient: RingSpec::format(&a),
                right_coefficient: RingSpec::format(&b),
            });
            false
        }
    }
}

fn sample_endomorphisms(lattice: &Arc<Lattice>, seed: u64, count: usize) -> (Vec<JoinMap>, u64) {
    let irreducibles = lattice.join_irreducibles();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut draws = 0u64;
    let max_draws = (count as u64).saturating_mul(100_000).max(1);
    while out.len() < count && draws < max_draws {
        draws += 1;
        let assignment: Vec<usize> = irreducibles
            .iter()
            .map(|_| rng.random_range(0..lattice.len()))
            .collect();
        if let Some(map) = extend_from_irreducibles(lattice, lattice, &irreducibles, &assignment) {
            out.push(map);
        }
    }
    (out, draws)
}

pub fn check_idempotent(target: &Target, ring: RingSpec) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::Idempotent, target, Some(ring));
    let l = &target.lattice;
    let e = idempotent_direct(l, ring, false);
    let square = e.mul(&e).expect("endomorphisms");
    report.count("terms", e.len());
    compare_sums(
        &mut report,
        l,
        (SumExpr::DirectSquared, &square),
        (SumExpr::Direct, &e),
    );
    report
}

pub fn check_identity_on_tot(
    target: &Target,
    ring: RingSpec,
    options: &SuiteOptions,
) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::IdentityOnTot, target, Some(ring));
    let l = &target.lattice;
    if !options.limits.enumeration_feasible(l) {
        report.skip(options.limits.infeasible_reason(l));
        return report;
    }
    let e = idempotent_direct(l, ring, false);
    let mut seen = 0;
    for psi in enumerate_join_endomorphisms(l, true) {
        seen += 1;
        let p = FormalSum::from_map(ring, &psi);
        for (side, product) in [(Side::Left, e.mul(&p)), (Side::Right, p.mul(&e))] {
            if product.expect("endomorphisms") != p {
                report.fail(Witness::NotFixed {
                    map: labels_of_map(&psi),
                    side,
                });
                report.count("tot_endomorphisms", seen);
                return report;
            }
        }
    }
    report.count("tot_endomorphisms", seen);
    report
}

pub fn check_central(target: &Target, ring: RingSpec, options: &SuiteOptions) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::Central, target, Some(ring));
    let l = &target.lattice;
    let maps: Box<dyn Iterator<Item = JoinMap>> = if options.limits.enumeration_feasible(l) {
        Box::new(enumerate_join_endomorphisms(l, false))
    } else {
        let (maps, draws) = sample_endomorphisms(l, options.seed, options.sample_count);
        report.mode = Mode::Sampled {
            seed: options.seed,
            count: options.sample_count,
        };
        report.count("draws", draws as usize);
        report.notes.push(options.limits.infeasible_reason(l));
        if maps.len() < options.sample_count {
            report.notes.push(format!(
                "only {} valid endomorphisms found in {draws} draws",
                maps.len()
            ));
        }
        Box::new(maps.into_iter())
    };
    let e = idempotent_direct(l, ring, false);
    let mut seen = 0;
    for phi in maps {
        seen += 1;
        let p = FormalSum::from_map(ring, &phi);
        if e.mul(&p).expect("endomorphisms") != p.mul(&e).expect("endomorphisms") {
            report.fail(Witness::NotCommuting {
                map: labels_of_map(&phi),
            });
            break;
        }
    }
    report.count("endomorphisms", seen);
    if matches!(report.mode, Mode::Sampled { .. }) && seen < options.sample_count && report.passed()
    {
        report.fail(Witness::CountMismatch {
            what: "sampled endomorphisms".into(),
            left: seen as u64,
            right: options.sample_count as u64,
        });
    }
    report
}

pub fn check_formula_equivalence(target: &Target, ring: RingSpec) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::FormulaEquivalence, target, Some(ring));
    let l = &target.lattice;
    let direct = idempotent_direct(l, ring, false);
    let original = idempotent_original(l, ring);
    report.count("terms", direct.len());
    report.count("b_chains", b_chains(l).len());
    compare_sums(
        &mut report,
        l,
        (SumExpr::Original, &original),
        (SumExpr::Direct, &direct),
    );
    report
}

pub fn check_f_family(target: &Target, ring: RingSpec) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::FFamily, target, Some(ring));
    let l = &target.lattice;
    let chains = b_chains(l);
    let fs: Vec<FormalSum> = chains
        .iter()
        .map(|b| f_of_chain(l, b, ring).expect("ℬ chain"))
        .collect();
    report.count("b_chains", chains.len());
    for (b, f) in chains.iter().zip(&fs) {
        if f.mul(f).expect("endomorphisms") != *f {
            report.fail(Witness::FNotIdempotent {
                chain: labels_of_chain(l, b),
            });
            return report;
        }
    }
    let mut pairs = 0;
    for (i, f) in fs.iter().enumerate() {
        for (j, g) in fs.iter().enumerate() {
            if i == j {
                continue;
            }
            pairs += 1;
            if !f.mul(g).expect("endomorphisms").is_zero() {
                report.fail(Witness::FNotOrthogonal {
                    first: labels_of_chain(l, &chains[i]),
                    second: labels_of_chain(l, &chains[j]),
                });
                report.count("ordered_pairs", pairs);
                return report;
            }
        }
    }
    report.count("ordered_pairs", pairs);
    let total = fs.iter().fold(FormalSum::zero(ring, l, l), |acc, f| {
        acc.add(f).expect("same signature")
    });
    let e = idempotent_direct(l, ring, false);
    compare_sums(
        &mut report,
        l,
        (SumExpr::Original, &total),
        (SumExpr::Direct, &e),
    );
    report
}

pub fn check_mobius_lemmas(target: &Target, options: &SuiteOptions) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::MobiusLemmas, target, None);
    let l = &target.lattice;
    let chains = l.chain_family(ChainFamilyKind::A, None);
    let (mut checked, mut vanishing, mut skipped) = (0, 0, 0u64);
    for a in &chains {
        let oracle = match mu_chain_infinity_oracle(l, a, options.limits.max_chain_poset) {
            Ok(v) => v,
            Err(Error::FeasibilityLimit(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => panic!("oracle failed: {e}"),
        };
        let product = mu_chain_infinity(l, a).expect("𝒜 chain");
        checked += 1;
        if a.last() != Some(l.top()) {
            vanishing += 1;
        }
        if product != oracle {
            report.fail(Witness::MobiusMismatch {
                chain: labels_of_chain(l, a),
                product,
                oracle,
            });
            break;
        }
    }
    report.count("chains", chains.len());
    report.count("checked", checked);
    report.count("vanishing_checked", vanishing);
    if skipped > 0 {
        report.mode = Mode::Restricted { skipped };
        report.notes.push(format!(
            "{skipped} chains exceed the chain-poset limit of {}",
            options.limits.max_chain_poset
        ));
    }
    report
}

pub fn check_crapo(target: &Target, ring: RingSpec) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::Crapo, target, Some(ring));
    let l = &target.lattice;
    let skipped = crapo_skipped_chains(l);
    report.count("z_chains", l.chain_family(ChainFamilyKind::Z, None).len());
    report.count("filtered_out", skipped.len());
    for b in &skipped {
        let mu = mu_chain_infinity(l, b).expect("𝒵 chain");
        if mu != 0 {
            report.fail(Witness::NonzeroSkipped {
                chain: labels_of_chain(l, b),
                mu,
            });
            return report;
        }
    }
    let filtered = idempotent_direct(l, ring, true);
    let full = idempotent_direct(l, ring, false);
    compare_sums(
        &mut report,
        l,
        (SumExpr::DirectFiltered, &filtered),
        (SumExpr::Direct, &full),
    );
    report
}

/// Counts relating `End^tot` to the chain families, per chain length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionEvidence {
    pub end_tot: u64,
    pub sum_z_squared: u64,
    pub sum_b_squared: u64,
    pub sum_a_squared: u64,
    pub a_sizes: Vec<u64>,
    pub b_sizes: Vec<u64>,
    pub z_sizes: Vec<u64>,
}

impl DimensionEvidence {
    /// `(|End^tot|, Σ|𝒵_n|², Σ|ℬ_n|², Σ|𝒜_n|²)`.
    pub fn tuple(&self) -> (u64, u64, u64, u64) {
        (
            self.end_tot,
            self.sum_z_squared,
            self.sum_b_squared,
            self.sum_a_squared,
        )
    }
}

pub fn dimension_evidence(lattice: &Arc<Lattice>, limits: &Limits) -> Result<DimensionEvidence> {
    if !limits.enumeration_feasible(lattice) {
        return Err(Error::FeasibilityLimit(limits.infeasible_reason(lattice)));
    }
    let sizes = |kind| {
        (0..=lattice.height())
            .map(|n| lattice.chain_family(kind, Some(n)).len() as u64)
            .collect::<Vec<_>>()
    };
    let (a, b, z) = (
        sizes(ChainFamilyKind::A),
        sizes(ChainFamilyKind::B),
        sizes(ChainFamilyKind::Z),
    );
    let squares = |v: &[u64]| v.iter().map(|x| x * x).sum();
    Ok(DimensionEvidence {
        end_tot: enumerate_join_endomorphisms(lattice, true).count() as u64,
        sum_z_squared: squares(&z),
        sum_b_squared: squares(&b),
        sum_a_squared: squares(&a),
        a_sizes: a,
        b_sizes: b,
        z_sizes: z,
    })
}

pub fn check_dimension(target: &Target, options: &SuiteOptions) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::Dimension, target, None);
    let evidence = match dimension_evidence(&target.lattice, &options.limits) {
        Ok(ev) => ev,
        Err(e) => {
            report.skip(e.to_string());
            return report;
        }
    };
    report.counts.insert("end_tot".into(), evidence.end_tot);
    report
        .counts
        .insert("sum_z_squared".into(), evidence.sum_z_squared);
    report
        .counts
        .insert("sum_b_squared".into(), evidence.sum_b_squared);
    report
        .counts
        .insert("sum_a_squared".into(), evidence.sum_a_squared);
    let (end_tot, z, b, a) = evidence.tuple();
    report.details = Some(serde_json::json!({
        "tuple": [end_tot, z, b, a],
        "matches_z": end_tot == z,
        "matches_b": end_tot == b,
        "matches_a": end_tot == a,
        "a_sizes": evidence.a_sizes,
        "b_sizes": evidence.b_sizes,
        "z_sizes": evidence.z_sizes,
    }));
    if end_tot != z {
        report.notes.push(format!(
            "|End^tot| = {end_tot} differs from the sum of squared 𝒵 family sizes {z}"
        ));
    }
    if let Some(n) =
        (0..evidence.a_sizes.len()).find(|&n| evidence.a_sizes[n] != evidence.b_sizes[n])
    {
        report.fail(Witness::CountMismatch {
            what: format!("|A_n| vs |B_n| at n = {n}"),
            left: evidence.a_sizes[n],
            right: evidence.b_sizes[n],
        });
    } else if end_tot != b {
        report.fail(Witness::CountMismatch {
            what: "|End^tot| vs sum of squared B family sizes".into(),
            left: end_tot,
            right: b,
        });
    }
    report
}

fn opposite_holds(phi: &JoinMap) -> std::result::Result<(), bool> {
    let op = phi.opposite();
    // Validates the join-morphism property between the opposite lattices.
    JoinMap::new(
        op.source().clone(),
        op.target().clone(),
        op.values().to_vec(),
    )
    .map_err(|_| true)?;
    if op.opposite() != *phi {
        return Err(true);
    }
    if phi.is_surjective() && op.values() != phi.fibre_sups() {
        return Err(false);
    }
    Ok(())
}

pub fn check_opposite_involution(target: &Target, options: &SuiteOptions) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::OppositeInvolution, target, None);
    let l = &target.lattice;
    let mut surjective_pi = 0;
    for b in b_chains(l) {
        let pi = pi_of_chain(l, &b).expect("ℬ chain");
        surjective_pi += 1;
        let ok = pi.is_surjective()
            && opposite_holds(&pi).is_ok()
            && pi.opposite().values() == b.members();
        if !ok {
            report.fail(Witness::OppositeMismatch {
                map: labels_of_map(&pi),
                involution: false,
            });
            return report;
        }
    }
    report.count("pi_maps", surjective_pi);
    if !options.limits.enumeration_feasible(l) {
        report.mode = Mode::Restricted { skipped: 1 };
        report.notes.push(options.limits.infeasible_reason(l));
        return report;
    }
    let (mut seen, mut surjective) = (0, 0);
    for phi in enumerate_join_endomorphisms(l, false) {
        seen += 1;
        surjective += usize::from(phi.is_surjective());
        if let Err(involution) = opposite_holds(&phi) {
            report.fail(Witness::OppositeMismatch {
                map: labels_of_map(&phi),
                involution,
            });
            break;
        }
    }
    report.count("endomorphisms", seen);
    report.count("surjective", surjective);
    report
}

pub fn check_decomposition(target: &Target, ring: RingSpec) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::Decomposition, target, Some(ring));
    let l = &target.lattice;
    let eval = |expr: SumExpr| expr.evaluate(l, ring);
    let complement = eval(SumExpr::Complement);
    let zero = eval(SumExpr::Zero);
    let checks = [
        (SumExpr::ComplementSquared, SumExpr::Complement, &complement),
        (SumExpr::DirectTimesComplement, SumExpr::Zero, &zero),
        (SumExpr::ComplementTimesDirect, SumExpr::Zero, &zero),
    ];
    for (lhs, rhs_name, rhs) in checks {
        if !compare_sums(&mut report, l, (lhs, &eval(lhs)), (rhs_name, rhs)) {
            break;
        }
    }
    report
}

pub fn check_ideal_closure(target: &Target, options: &SuiteOptions) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::IdealClosure, target, None);
    let l = &target.lattice;
    if !options.limits.enumeration_feasible(l) {
        report.skip(options.limits.infeasible_reason(l));
        return report;
    }
    let all: Vec<JoinMap> = enumerate_join_endomorphisms(l, false).collect();
    let tot: Vec<&JoinMap> = all.iter().filter(|m| m.has_total_image()).collect();
    report.count("endomorphisms", all.len());
    report.count("tot_endomorphisms", tot.len());
    for alpha in &tot {
        for phi in &all {
            for (side, product) in [
                (Side::Right, compose(alpha, phi)),
                (Side::Left, compose(phi, alpha)),
            ] {
                if !product.expect("endomorphisms").has_total_image() {
                    report.fail(Witness::IdealEscape {
                        total: labels_of_map(alpha),
                        other: labels_of_map(phi),
                        side,
                    });
                    return report;
                }
            }
        }
    }
    report
}

/// Compares computing in `ring` with computing over `ℤ` and mapping the
/// coefficients; for `ℤ` itself the comparison is against `ℚ`.
pub fn check_ring_functoriality(target: &Target, ring: RingSpec) -> CheckReport {
    let mut report = CheckReport::new(CheckKind::RingFunctoriality, target, Some(ring));
    let l = &target.lattice;
    if ring == RingSpec::Integers {
        let from_q = SumExpr::Direct.evaluate(l, RingSpec::Rationals);
        let mapped = SumExpr::Direct
            .evaluate(l, RingSpec::Integers)
            .change_ring(RingSpec::Rationals)
            .expect("integers embed in rationals");
        report.notes.push("compared against the rationals".into());
        compare_sums(
            &mut report,
            l,
            (SumExpr::IntegerDirectMapped, &mapped),
            (SumExpr::Direct, &from_q),
        );
        return report;
    }
    let pairs = [
        (SumExpr::IntegerDirectMapped, SumExpr::Direct),
        (SumExpr::IntegerOriginalMapped, SumExpr::Original),
    ];
    for (mapped, direct) in pairs {
        let (a, b) = (mapped.evaluate(l, ring), direct.evaluate(l, ring));
        if !compare_sums(&mut report, l, (mapped, &a), (direct, &b)) {
            break;
        }
    }
    report
}

/// Runs one check; panics inside the check become failing reports.
pub fn run_check(
    check: CheckKind,
    target: &Target,
    ring: RingSpec,
    options: &SuiteOptions,
) -> CheckReport {
    let start = Instant::now();
    let ring_opt = check.ring_dependent().then_some(ring);
    let outcome = catch_unwind(AssertUnwindSafe(|| match check {
        CheckKind::Idempotent => check_idempotent(target, ring),
        CheckKind::IdentityOnTot => check_identity_on_tot(target, ring, options),
        CheckKind::Central => check_central(target, ring, options),
        CheckKind::FormulaEquivalence => check_formula_equivalence(target, ring),
        CheckKind::FFamily => check_f_family(target, ring),
        CheckKind::MobiusLemmas => check_mobius_lemmas(target, options),
        CheckKind::Crapo => check_crapo(target, ring),
        CheckKind::Dimension => check_dimension(target, options),
        CheckKind::OppositeInvolution => check_opposite_involution(target, options),
        CheckKind::Decomposition => check_decomposition(target, ring),
        CheckKind::IdealClosure => check_ideal_closure(target, options),
        CheckKind::RingFunctoriality => check_ring_functoriality(target, ring),
    }));
    let mut report = outcome.unwrap_or_else(|panic| {
        let message = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "check panicked".into());
        let mut r = CheckReport::new(check, target, ring_opt);
        r.fail(Witness::Internal { message });
        r
    });
    if options.record_timings {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

/// Runs `checks` over every target and ring. Ring-independent checks run
/// once per target. Order: target, then check, then ring.
pub fn run_suite(
    targets: &[Target],
    rings: &[RingSpec],
    checks: &[CheckKind],
    options: &SuiteOptions,
) -> Vec<CheckReport> {
    let mut jobs = Vec::new();
    for target in targets {
        for &check in checks {
            if check.ring_dependent() {
                jobs.extend(rings.iter().map(|&r| (target, check, r)));
            } else {
                jobs.push((
                    target,
                    check,
                    rings.first().copied().unwrap_or(RingSpec::Integers),
                ));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(target, check, ring)| run_check(check, target, ring, options))
        .collect()
}

/// Re-evaluates a failing report's witness. Returns `Ok(true)` when the
/// failure reproduces on `lattice`.
pub fn reproduce(
    report: &CheckReport,
    lattice: &Arc<Lattice>,
    options: &SuiteOptions,
) -> Result<bool> {
    let Some(witness) = &report.counterexample else {
        return Ok(false);
    };
    let ring = report.ring.unwrap_or(RingSpec::Integers);
    let chain = |labels: &[String]| Chain::from_labels(lattice.poset(), labels);
    let e = || idempotent_direct(lattice, ring, false);
    Ok(match witness {
        Witness::SumMismatch {
            left, right, map, ..
        } => {
            let values = map
                .iter()
                .map(|l| lattice.index_of(l))
                .collect::<Result<Vec<_>>>()?;
            left.evaluate(lattice, ring).coefficient_of(&values)
                != right.evaluate(lattice, ring).coefficient_of(&values)
        }
        Witness::NotCommuting { map } => {
            let p = FormalSum::from_map(ring, &map_from_labels(lattice, map)?);
            e().mul(&p)? != p.mul(&e())?
        }
        Witness::NotFixed { map, side } => {
            let p = FormalSum::from_map(ring, &map_from_labels(lattice, map)?);
            let product = match side {
                Side::Left => e().mul(&p)?,
                Side::Right => p.mul(&e())?,
            };
            product != p
        }
        Witness::MobiusMismatch { chain: c, .. } => {
            let a = chain(c)?;
            mu_chain_infinity(lattice, &a)?
                != mu_chain_infinity_oracle(lattice, &a, options.limits.max_chain_poset)?
        }
        Witness::NonzeroSkipped { chain: c, .. } => {
            let b = chain(c)?;
            !crate::idempotent::has_complemented_steps(lattice, &b)
                && mu_chain_infinity(lattice, &b)? != 0
        }
        Witness::FNotIdempotent { chain: c } => {
            let f = f_of_chain(lattice, &chain(c)?, ring)?;
            f.mul(&f)? != f
        }
        Witness::FNotOrthogonal { first, second } => {
            let f = f_of_chain(lattice, &chain(first)?, ring)?;
            let g = f_of_chain(lattice, &chain(second)?, ring)?;
            !f.mul(&g)?.is_zero()
        }
        Witness::CountMismatch { .. } => match report.check {
            CheckKind::Dimension => {
                let ev = dimension_evidence(lattice, &options.limits)?;
                ev.a_sizes != ev.b_sizes || ev.end_tot != ev.sum_b_squared
            }
            _ => {
                let target = Target {
                    name: report.lattice.clone(),
                    lattice: lattice.clone(),
                };
                run_check(report.check, &target, ring, options).failed()
            }
        },
        Witness::OppositeMismatch { map, .. } => {
            let values = map
                .iter()
                .map(|l| lattice.index_of(l))
                .collect::<Result<Vec<_>>>()?;
            let phi = match JoinMap::new(lattice.clone(), lattice.clone(), values.clone()) {
                Ok(phi) => phi,
                // π^B maps land in an index chain, not in the lattice itself.
                Err(_) => {
                    let b = b_chains(lattice)
                        .into_iter()
                        .map(|b| pi_of_chain(lattice, &b).map(|pi| (b, pi)))
                        .collect::<Result<Vec<_>>>()?;
                    return Ok(b.iter().any(|(b, pi)| {
                        labels_of_map(pi) == *map
                            && (opposite_holds(pi).is_err()
                                || pi.opposite().values() != b.members())
                    }));
                }
            };
            opposite_holds(&phi).is_err()
        }
        Witness::IdealEscape { total, other, side } => {
            let alpha = map_from_labels(lattice, total)?;
            let phi = map_from_labels(lattice, other)?;
            let product = match side {
                Side::Right => compose(&alpha, &phi)?,
                Side::Left => compose(&phi, &alpha)?,
            };
            alpha.has_total_image() && !product.has_total_image()
        }
        Witness::Internal { .. } => {
            let target = Target {
                name: report.lattice.clone(),
                lattice: lattice.clone(),
            };
            run_check(report.check, &target, ring, options).failed()
        }
    })
}
