use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("distribution has zero mean and cannot be size biased")]
    ZeroMean,
    #[error("support contains negative points; size bias needs a nonnegative variable")]
    NegativeSupport,
    #[error("density carries an atom at 0; use the discrete path")]
    AtomPresent,
    #[error("negative moment requested but an atom sits at 0")]
    NegativeMomentAtZero,
    #[error("no closed-form size bias for {0}")]
    NoClosedForm(String),
    #[error("scale factor must be positive, got {0}")]
    NonpositiveScale(f64),
    #[error("inverse size bias needs strictly positive support")]
    AtomAtZero,
    #[error("no pair satisfied the conditioning event")]
    NoSuccesses,
    #[error("tail mass {tail:e} beyond index {n} exceeds the truncation bound")]
    TailTooHeavy { n: usize, tail: f64 },
    #[error("term {0} has zero mean")]
    ZeroMeanTerm(usize),
    #[error("convolution support of {size} atoms exceeds the cap {cap}")]
    SupportOverflow { size: usize, cap: usize },
    #[error("product rule needs strictly positive factor supports")]
    ZeroInSupport,
    #[error("mixture component {0} has zero mean")]
    ZeroMeanComponent(usize),
    #[error("increment law has a support point at 0")]
    ZeroSupportPoint,
    #[error("jump size {0} is not a positive integer")]
    NonIntegerJump(f64),
    #[error("pmf vanishes at 0; the recursion cannot be inverted")]
    ZeroAtOrigin,
    #[error("support is not an initial segment of the integers (gap at {0})")]
    GapInSupport(usize),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("truncation too severe: {0}")]
    TruncationTooSevere(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("sample size {m} is invalid for a population of {n}")]
    BadSampleSize { m: usize, n: usize },
    #[error("subset has zero total x; ratio undefined")]
    ZeroDenominator,
    #[error("subset has {got} indices, expected {expected}")]
    BadSubsetSize { got: usize, expected: usize },
    #[error("population of {0} is too large to enumerate")]
    TooLargeToEnumerate(usize),
    #[error("horizon {horizon} is shorter than {min}")]
    HorizonTooShort { horizon: f64, min: f64 },
    #[error("input law is constant")]
    ConstantInput,
    #[error("input law has mean {0}, expected 0")]
    NonzeroMean(f64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
