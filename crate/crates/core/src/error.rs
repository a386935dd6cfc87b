use thiserror::Error;

/// Which lattice operation failed to exist for a pair of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Join,
    Meet,
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Bound::Join => "join",
            Bound::Meet => "meet",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("order relation has a cycle through `{0}` and `{1}`")]
    CycleDetected(String, String),
    #[error("`{0}` is not below `{1}`")]
    NotComparable(String, String),
    #[error("the elements do not form a chain")]
    NotAChain,
    #[error("no unique {which} for `{x}` and `{y}`")]
    NotALattice { x: String, y: String, which: Bound },
    #[error("a lattice needs at least one element")]
    EmptyLattice,
    #[error("value table has {got} entries, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("value {0} is not an element of the target lattice")]
    ValueOutOfRange(usize),
    #[error("map sends the least element to `{0}`")]
    BottomNotPreserved(String),
    #[error("not a join-morphism: join of `{0}` and `{1}` is not preserved")]
    NotJoinMorphism(String, String),
    #[error("target of the first map is not the source of the second")]
    SourceTargetMismatch,
    #[error("chain does not contain both the least and the greatest element")]
    ChainNotInZ,
    #[error("chain does not have the greatest element as its top")]
    ChainNotInB,
    #[error("chain does not have the least element as its bottom")]
    ChainNotInA,
    #[error("family does not match its chain")]
    InvalidFamily,
    #[error("formal sums live in different rings or hom-sets")]
    SignatureMismatch,
    #[error("coefficient {0} is not an element of {1}")]
    NotInRing(String, String),
    #[error("unsupported ring `{0}`")]
    UnsupportedRing(String),
    #[error("unsupported lattice descriptor `{0}`")]
    UnsupportedSpec(String),
    #[error("feasibility limit exceeded: {0}")]
    FeasibilityLimit(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("fingerprint mismatch: document was written for lattice {expected}, got {got}")]
    FingerprintMismatch { expected: String, got: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
