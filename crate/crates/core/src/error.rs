use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid site pair ({i}, {j}) on a ring of {n} sites")]
    InvalidPair { i: usize, j: usize, n: usize },

    #[error("basis mismatch: expected {expected} sites, got {actual}")]
    BasisMismatch { expected: usize, actual: usize },

    #[error("symmetry undefined: {0}")]
    SymmetryUndefined(String),

    #[error("eigensolver did not converge after {iterations} iterations (dim {dim}, eps {eps:e})")]
    NumericalFailure { dim: usize, iterations: usize, eps: f64 },

    #[error("state vanishes after placing its terms")]
    DegenerateState,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("the one-particle-per-side sector is empty")]
    EmptySector,

    #[error("eigenstate {0} has no sharp quasimomentum")]
    NoSharpMomentum(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
