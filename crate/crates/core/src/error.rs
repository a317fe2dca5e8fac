use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid size {0}: must be a power of two and at least 4")]
    InvalidGridSize(usize),

    #[error("Fourier mode {k} outside the representable band |k| <= {max}")]
    ModeOutOfBand { k: i64, max: usize },

    #[error("angle {0} outside [-pi, pi]")]
    AngleOutOfRange(f64),

    #[error("operator is not quasi-self-adjoint: <Im a> = {mean_im:e}")]
    NotQuasiSelfAdjoint { mean_im: f64 },

    #[error("insufficient coefficient band: need |k| <= {needed}, potential resolves |k| <= {available}")]
    InsufficientBand { needed: usize, available: usize },

    #[error("linear algebra failure: {0}")]
    Solver(String),

    #[error("adaptive quadrature did not converge (estimated error {error:e})")]
    QuadratureNonConvergence { error: f64 },

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    #[error("flux condition fails: {0}")]
    FluxConditionFailed(String),

    #[error("field support radius {support} exceeds R = {radius}")]
    SupportExceedsR { support: f64, radius: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("magnetic field is identically zero")]
    TrivialField,

    #[error("degenerate interval ({0}, {1})")]
    DegenerateInterval(f64, f64),

    #[error("radius {r} outside the sampled range [{lo}, {hi}]")]
    Extrapolation { r: f64, lo: f64, hi: f64 },

    #[error("vector potential is not transverse: max |x.A(x)| = {0:e}")]
    NotTransverse(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that mean a hypothesis of an inequality is not met,
    /// as opposed to bad input or numerical trouble.
    pub fn is_hypothesis_gate(&self) -> bool {
        matches!(
            self,
            Error::FluxConditionFailed(_)
                | Error::SupportExceedsR { .. }
                | Error::HypothesisViolated(_)
                | Error::TrivialField
        )
    }

    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Solver(_) | Error::QuadratureNonConvergence { .. } | Error::NonConvergence(_)
        )
    }
}
