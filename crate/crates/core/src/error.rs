use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("rational entry has a denominator divisible by {prime}")]
    BadReduction { prime: u64 },
    #[error("Laurent polynomials in {left} and {right} variables")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("{have} samples given, {need} needed")]
    InsufficientSamples { have: usize, need: usize },
    #[error("point count is not polynomial: at q = {prime} the fit predicts {predicted}, observed {observed}")]
    NonPolynomialCount { prime: u64, predicted: String, observed: String },
    #[error("bucket keys differ across primes (first mismatch at p = {prime}: {detail})")]
    KeyMismatch { prime: u64, detail: String },
    #[error("relation violated: {0}")]
    RelationViolation(String),
    #[error("algebra is not admissible or not finite-dimensional: {0}")]
    NotAdmissible(String),
    #[error("catalog exceeded the cap of {cap}; input is probably not representation-finite")]
    CatalogOverflow { cap: usize },
    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),
    #[error("extension class has both an extension and a co-extension component")]
    MixedClassUnsupported,
    #[error("F-image sequence is not exact: {0}")]
    ExactnessFailure(String),
    #[error("no coordinate functional makes the composition pairing nondegenerate")]
    DegeneratePairing,
    #[error("algebra is not self-injective: {0}")]
    NotSelfInjective(String),
    #[error("tilting object is not rigid: {0}")]
    NotRigid(String),
    #[error("tilting object is not basic: {0}")]
    NotBasic(String),
    #[error("invalid Frobenius setup: {0}")]
    Validation(String),
    #[error("add(T)-approximation failed: {0}")]
    ApproximationFailure(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("pair is not admissible: {0}")]
    InadmissiblePair(String),
}

pub type Result<T> = std::result::Result<T, Error>;
