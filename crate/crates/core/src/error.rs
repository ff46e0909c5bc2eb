use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid tolerance: {0}")]
    Tolerance(String),

    #[error("zero vector: {0}")]
    ZeroVector(String),

    #[error("prime too small: p = {prime} must exceed k*d = {bound}")]
    PrimeTooSmall { prime: u64, bound: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("incompatible polynomials: {0}")]
    Incompatible(String),

    #[error("macaulay bound exceeded: {0}")]
    OracleLimits(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("base case only automated for k=d")]
    BaseCaseUnsupported,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not in dH: leading coefficient {found} but expected {expected}")]
    NotInDH { found: String, expected: usize },

    #[error("not in the k-th monic secant: rank {rank} exceeds k = {k}")]
    RankTooLarge { rank: usize, k: usize },

    #[error("not in the second monic secant: sigma2 equation residual {0:e}")]
    NotInSigma2(f64),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("h(t)=0, normalization undefined")]
    NormalizationUndefined,

    #[error("exactly-one-zero obstruction: tensor is in the second monic secant closure only")]
    ExactlyOneZero,

    #[error("retry budget exhausted after {attempts} attempts at stage `{stage}`")]
    RetriesExhausted { stage: String, attempts: usize },

    #[error("root finder did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64, best: Vec<num_complex::Complex64> },

    #[error("certificate family mismatch: expected {expected}, found {found}")]
    FamilyMismatch { expected: String, found: String },

    #[error("k0 exceeds budget: no saturation up to k = {0}")]
    RankBudget(usize),
}
