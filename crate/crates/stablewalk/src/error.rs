use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received a parameter outside its stated range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A candidate law failed one of the structural invariants.
    #[error("invalid lattice law: {0}")]
    InvalidLaw(String),

    /// Span computation on a single-site support.
    #[error("degenerate distribution: support has fewer than two sites")]
    DegenerateSupport,

    /// The norming equation has no root in the monotone region for this n.
    #[error("no norming root for n = {n}; the equation b^alpha = n*h(b) first has a root at n = {min_n}")]
    NoNormingRoot { n: u64, min_n: u64 },

    /// sup-of-h queried left of its domain.
    #[error("sup_h requires x >= 1/epsilon = {min_x}, got {x}")]
    SupDomain { x: f64, min_x: f64 },

    /// Adaptive quadrature ran out of subdivisions before reaching the tolerance.
    #[error("quadrature failed to converge: error estimate {estimate} above tolerance {tolerance} after {panels} panels")]
    QuadratureBudget {
        estimate: f64,
        tolerance: f64,
        panels: usize,
    },

    /// The convolution certificate cannot reach the requested tolerance
    /// within the memory budget.
    #[error("requested tolerance needs a window of {required} sites, budget is {budget}")]
    WindowTooLarge { required: u64, budget: u64 },

    /// An accumulated truncation certificate exceeded the requested tolerance.
    #[error("certificate failure: accumulated error bound {bound} exceeds tolerance {tolerance}")]
    CertificateFailure { bound: f64, tolerance: f64 },

    /// Operation preconditions on index pairs (m, n) were violated.
    #[error("invalid index range: {0}")]
    IndexRange(String),

    /// A regression or scan had too few usable points.
    #[error("too few usable points: need {need}, have {have}")]
    TooFewPoints { need: usize, have: usize },

    #[error("serialization: {0}")]
    Serde(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
