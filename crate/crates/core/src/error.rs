use thiserror::Error;

use crate::tuplespace::Label;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // tuplespace
    #[error("ground set atoms are not strictly ascending or contain duplicates")]
    UnsortedGround,
    #[error("index labels are not strictly ascending")]
    UnsortedIndex,
    #[error("tuple has {values} values for {labels} index labels")]
    TupleLength { labels: usize, values: usize },
    #[error("tuple values are not pairwise distinct")]
    NotInjective,
    #[error("tuple values are not strictly increasing")]
    NotIncreasing,
    #[error("pairs do not form a partial injective function")]
    NotPartialInjective,
    #[error("lex product needs nonempty factors")]
    EmptyFactor,

    // families
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("kernel is the identity on the index set; the induced relation is reflexive")]
    IdentityKernel,
    #[error("kernel references label {0} outside the index set")]
    IndexMismatch(Label),

    // kernel analysis
    #[error("kernel is not order preserving: {0} < {1} but images are not increasing")]
    NotOrderPreserving(Label, Label),
    #[error("kernel has a non-increasing orbit at {0}")]
    NotIncreasingOrbits(Label),
    #[error("kernel is empty")]
    EmptyKernel,

    // chroma
    #[error("coloring does not cover vertex {0}")]
    MissingVertex(usize),
    #[error("solver exceeded its time budget; bounds [{lower}, {upper}]")]
    Timeout { lower: usize, upper: usize },
    #[error("ground set is not a set of equal-length binary strings")]
    NonBinaryGround,
    #[error("ground set of size {0} exceeds the 2^16 materialization guard")]
    TowerTooLarge(u128),
    #[error("graph was not built by the expected family: {0}")]
    WrongFamily(String),
    #[error("successor map contains a finite cycle through vertex {0}")]
    CycleDetected(usize),
    #[error("cover misses {0}")]
    CoverGap(String),
    #[error("internal construction invariant violated: {0}")]
    Invariant(String),

    // embed
    #[error("ground window of size {have} is too small; need at least {need}")]
    GroundTooSmall { have: usize, need: usize },
    #[error("k = {k} is below the minimal admissible value {min_k}")]
    KTooSmall { k: usize, min_k: usize },
    #[error("kernel has a finite cycle through {0}")]
    CycleInKernel(Label),
    #[error("input map is not a graph homomorphism")]
    NotAHomomorphism,
    #[error("canonization failed; largest window tried was {0}")]
    CanonizationFailed(usize),
    #[error("canonical coordinate set is empty, which contradicts the presence of edges")]
    AllEqualKernel,
    #[error("constructed map failed verification: {0}")]
    VerificationFailed(String),

    // canon
    #[error("relation is not an equivalence: {0}")]
    NotEquivalence(String),
    #[error("coordinate set is empty")]
    EmptyS,

    // io
    #[error("parse error: {0}")]
    Parse(String),
}
