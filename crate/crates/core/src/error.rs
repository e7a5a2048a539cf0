use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("enumeration needs {candidates} row scans, budget is {budget}")]
    Oversize { candidates: f64, budget: f64 },

    #[error("basis matrix is singular or not finite")]
    SingularBasis,

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("at least {needed} points required, patch has {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("outer window does not strictly contain the inner window (margin {margin})")]
    Margin { margin: f64 },

    #[error("dominating comb has weight {weight} < 1 at a point of the inner model set")]
    Domination { weight: f64 },

    #[error("averaging box of radius {radius} is not inside the comb region")]
    RegionTooSmall { radius: f64 },

    #[error("inner radius {inner} exceeds half of the autocorrelation radius {radius}")]
    InnerTooLarge { inner: f64, radius: f64 },

    #[error("no analytic oracle for weight model `{0}`")]
    UnknownKind(String),

    #[error("candidate parts do not sum to the measure (max deviation {deviation:e})")]
    SumMismatch { deviation: f64 },

    #[error("frequency {frequency:?} violates the patch bound: deviation {deviation} > {eps}")]
    CertificationFailure {
        frequency: Vec<f64>,
        deviation: f64,
        eps: f64,
    },

    #[error("empty frequency set")]
    EmptySet,

    #[error("invalid van Hove sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
