use thiserror::Error;

/// Errors produced by the geometry, cell and linkage layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate great circle: {0}")]
    DegenerateCircle(&'static str),

    #[error("lines are parallel (|d1 x d2| = {0:.3e})")]
    ParallelLines(f64),

    #[error("displacement has no finite screw axis (identity or pure translation)")]
    NoFiniteAxis,

    #[error("degenerate branch: transmission denominator {denominator:.3e} vanishes")]
    DegenerateBranch { denominator: f64 },

    #[error("closure check failed: {what} residual {residual:.3e}")]
    ClosureFailure { what: String, residual: f64 },

    #[error("pose is collapsed: {0}")]
    CollapsedPose(&'static str),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn closure(what: impl Into<String>, residual: f64) -> Self {
        Error::ClosureFailure { what: what.into(), residual }
    }

    /// Stable kebab-case name of the variant, for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateCircle(_) => "degenerate-circle",
            Error::ParallelLines(_) => "parallel-lines",
            Error::NoFiniteAxis => "no-finite-axis",
            Error::DegenerateBranch { .. } => "degenerate-branch",
            Error::ClosureFailure { .. } => "closure-failure",
            Error::CollapsedPose(_) => "collapsed-pose",
            Error::InvalidSpec(_) => "invalid-spec",
            Error::InvalidArgument(_) => "invalid-argument",
        }
    }

    pub(crate) fn spec(reason: impl Into<String>) -> Self {
        Error::InvalidSpec(reason.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
