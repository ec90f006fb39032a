use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no roots defined")]
    NoRoots,

    #[error("pole at evaluation point")]
    PoleAtEvaluation,

    #[error("denominator must not be identically zero")]
    ZeroDenominator,

    /// A configuration field failed validation. `field` uses the dotted
    /// config-file path, e.g. `controller.den`.
    #[error("{field}: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFiniteMatrix { row: usize, col: usize },

    #[error("certificate requires ε_max < 1 (got {0})")]
    CertificateHypothesis(f64),

    #[error("root bracketing failed: found {found} roots, expected {expected}")]
    RootBracketing { found: usize, expected: usize },

    #[error("response undefined at omega = {0}")]
    ResponseUndefined(f64),

    #[error("non-finite response at omega = {0}")]
    NonFiniteResponse(f64),

    #[error("closed-loop pole at the peak frequency")]
    ClosedLoopPoleAtPeak,

    #[error("zeta undefined: peak of the minimal block is {0}, not above 1")]
    ZetaUndefined(f64),

    #[error("identities require simple eigenvalues (min gap {0:e})")]
    DefectiveSpectrum(f64),

    #[error("open loop must be proper")]
    ImproperOpenLoop,

    #[error("dt = {dt} too large: require dt <= {required}")]
    StepTooLarge { dt: f64, required: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
