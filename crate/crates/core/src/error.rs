use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation produced a non-finite value at x = {x} ({what})")]
    Evaluation { x: f64, what: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("unsupported profile: {0}")]
    UnsupportedProfile(String),

    #[error("grid is not symmetric about the origin ({0})")]
    AsymmetricGrid(String),

    #[error("zero mode: spinor reconstruction is undefined for eps = 0")]
    ZeroMode,

    #[error("branch {branch} rejected: Re(tau') = {re_tau_prime:.6} > 0")]
    BranchRejected { branch: &'static str, re_tau_prime: f64 },

    #[error("quantization relation is degenerate (zero coefficient on the energy)")]
    SingularQuantization,

    #[error("polynomial degree {n} exceeds the Rodrigues stability cap {cap}")]
    UnsupportedDegree { n: usize, cap: usize },

    #[error("grid too short: {n} points, need at least {need}")]
    GridTooShort { n: usize, need: usize },

    #[error("potential has not decayed at the boundary (|U| = {boundary:.3e} at |x| = {l}); enlarge the half-width")]
    DomainTooSmall { l: f64, boundary: f64 },

    #[error("matrix dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("eigensolver failed to converge (trailing index {index} after {sweeps} sweeps)")]
    NoConvergence { index: usize, sweeps: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("non-finite potential value at x = {x}")]
    NonFinitePotential { x: f64 },

    #[error(
        "printed-form and definitional effective potentials disagree at x = {x}: \
         printed {printed}, definitional {definitional}"
    )]
    TranscriptionMismatch {
        x: f64,
        printed: Complex64,
        definitional: Complex64,
    },

    #[error("velocity profile vanishes inside the grid near x = {0:?}")]
    SingularVelocity(Vec<f64>),
}
