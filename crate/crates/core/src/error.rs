use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e}, norm {norm:.3e})")]
    NonHermitianInput { defect: f64, norm: f64 },
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("invalid local dimension {0}; need d >= 2")]
    InvalidDimension(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not orthogonal (defect {0:.3e})")]
    NotOrthogonal(f64),
    #[error("basis is already extended to u(d)")]
    AlreadyExtended,
    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("keep set must not be empty")]
    EmptyKeepSet,
    #[error("invalid site subset: {0}")]
    InvalidSubset(String),
    #[error("need at least {needed} sites, got {got}")]
    TooFewSites { needed: usize, got: usize },
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("no su({d}) singlet of {n} sites: N must be a positive multiple of d")]
    SingletNonexistent { d: usize, n: usize },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("collective expectation vector is infeasible: |G|^2/N^2 = {norm2:.6} > {max:.6}")]
    InfeasibleGexp { norm2: f64, max: f64 },
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("state invariant violated: {quantity} ({detail})")]
    InvariantViolation { quantity: String, detail: String },
    #[error("could not build model: {0}")]
    ModelBuild(String),
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
