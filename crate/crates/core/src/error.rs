use crate::spectral::EigenPair;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("mean progeny matrix is not positive regular (no power up to {max_power} is entrywise positive)")]
    NotPositiveRegular { max_power: usize },

    #[error("kappa must be positive, got {0}")]
    InvalidKappa(f64),

    #[error("mean degree alpha = {alpha} must exceed 1")]
    SubCritical { alpha: f64 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("negative entry at ({i}, {j}): distance matrix is set where the path count is zero")]
    NegativeEntry { i: usize, j: usize },

    #[error("matrices are incompatible: {0}")]
    Incompatible(String),

    #[error("eigensolver converged {} of {requested} pairs after {matvecs} matvecs", converged.len())]
    NoConvergence {
        converged: Vec<EigenPair>,
        requested: usize,
        matvecs: usize,
    },

    #[error("operator has dimension zero")]
    DegenerateOperator,

    #[error("signal-to-noise ratio tau = {tau} is at or below the Kesten-Stigum threshold")]
    AtOrBelowThreshold { tau: f64 },

    #[error("cannot normalise the zero vector")]
    ZeroVector,

    #[error("eigengap must be positive, got {0}")]
    ZeroGap(f64),

    #[error("label {label} at vertex {vertex} is outside [0, {r})")]
    LabelOutOfRange { vertex: usize, label: usize, r: usize },

    #[error("overlap search over {0}! permutations is not supported (r <= 8)")]
    TooManyBlocks(usize),

    #[error("perturbation touches {affected} vertices but the budget is {budget}")]
    BudgetExceeded { affected: usize, budget: usize },

    #[error("inconsistent edit: {0}")]
    InconsistentEdit(String),

    #[error("greedy separation found only {achieved} of {requested} vertices")]
    GreedyExhausted { achieved: usize, requested: usize },

    #[error("epsilon must lie in (0, 1/4), got {0}")]
    InvalidEpsilon(f64),

    #[error("moment system is singular: mu^2 = {mu_sq} does not exceed alpha = {alpha}")]
    SingularSystem { mu_sq: f64, alpha: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
