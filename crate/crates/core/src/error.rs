use thiserror::Error;

/// Everything that can go wrong while validating inputs or running inference.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty; at least one serial number is required")]
    EmptySample,

    #[error("serial number {0} appears more than once (capture is without replacement)")]
    DuplicateSerial(u64),

    #[error("serial number {0} is not positive")]
    NonPositiveSerial(i64),

    #[error("falling factorial ({n})_{k} is zero because k > n")]
    DomainError { n: u64, k: u64 },

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("improper uniform prior needs at least 2 captures to give a proper posterior, got k = {k}")]
    InsufficientDataForImproperPrior { k: u64 },

    #[error("prior assigns zero mass to every population size >= {max_serial}")]
    EmptyPosterior { max_serial: u64 },

    #[error("posterior mean diverges for k = {k}; it needs k >= 3")]
    MeanDivergent { k: u64 },

    #[error("cannot capture {k} tanks from a population of {n}")]
    SampleExceedsPopulation { n: u64, k: u64 },

    #[error("sample space of {size} ordered tuples exceeds the enumeration cap {cap}")]
    EnumerationTooLarge { size: u128, cap: u128 },

    #[error("alpha must lie in [0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("high-mass subset extends past the evaluation horizon n = {horizon}")]
    HorizonExceeded { horizon: u64 },

    #[error("operation needs a finite-support mass function")]
    UnboundedSupport,

    #[error("invalid mass function: {0}")]
    InvalidMass(String),

    #[error("calibration needs at least one trial")]
    NoTrials,
}

impl Error {
    /// Stable machine-readable identifier, used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptySample => "EmptySample",
            Error::DuplicateSerial(_) => "DuplicateSerial",
            Error::NonPositiveSerial(_) => "NonPositiveSerial",
            Error::DomainError { .. } => "DomainError",
            Error::InvalidPrior(_) => "InvalidPrior",
            Error::InsufficientDataForImproperPrior { .. } => "InsufficientDataForImproperPrior",
            Error::EmptyPosterior { .. } => "EmptyPosterior",
            Error::MeanDivergent { .. } => "MeanDivergent",
            Error::SampleExceedsPopulation { .. } => "SampleExceedsPopulation",
            Error::EnumerationTooLarge { .. } => "EnumerationTooLarge",
            Error::InvalidAlpha(_) => "InvalidAlpha",
            Error::HorizonExceeded { .. } => "HorizonExceeded",
            Error::UnboundedSupport => "UnboundedSupport",
            Error::InvalidMass(_) => "InvalidMass",
            Error::NoTrials => "NoTrials",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
