use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function at {0}")]
    Pole(String),
    #[error("argument increment of {increment:.3} rad at path index {index} is too large")]
    BranchJump { index: usize, increment: f64 },
    #[error("series diverges: {0}")]
    Divergence(String),
    #[error("denominator parameter {0} is a non-positive integer")]
    DenominatorPole(usize),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("unbalanced gamma quotient: sum(a-b) = {ab:.3e}, sum(c-d) = {cd:.3e}")]
    Balance { ab: f64, cd: f64 },
    #[error("symbol vanishes on the contour at xi = {0}")]
    ZeroOnContour(f64),
    #[error("contour resolution too coarse near xi = {0}")]
    Resolution(f64),
    #[error("nonzero winding number {0}")]
    NonzeroWinding(i64),
    #[error("symbol vanishes in the strip near z = {0}")]
    ZeroInStrip(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("function evaluation failed: {0}")]
    Evaluation(String),
    #[error("sequence too short: need {needed}, got {got}")]
    Length { needed: usize, got: usize },
    #[error("matrix is numerically singular (|det| = {0:e})")]
    Singular(f64),
    #[error("truncation unstable: doubling changed the result by {0:e}")]
    Truncation(f64),
    #[error("parameters are not generic: {0}")]
    NonGeneric(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("contour Re s = {0} meets a pole ladder")]
    ContourPole(f64),
    #[error("moment matrix not positive definite at order {0}")]
    NotPositiveDefinite(usize),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("coefficients not summable: {0}")]
    NonSummable(String),
    #[error("principal value regularization failed: {0}")]
    Singularity(String),
    #[error("branch continuity check failed: {0}")]
    Branch(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True when the failure is a violated mathematical hypothesis rather
    /// than a numerical breakdown.
    pub fn is_hypothesis(&self) -> bool {
        matches!(
            self,
            Error::NonzeroWinding(_)
                | Error::ZeroInStrip(_)
                | Error::ZeroOnContour(_)
                | Error::Balance { .. }
                | Error::NonGeneric(_)
                | Error::Hypothesis(_)
                | Error::Pole(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
