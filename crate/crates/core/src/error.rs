use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("{num}/{den} is not in Z[1/{p}]")]
    NotInValueGroup { p: u32, num: i64, den: i64 },

    #[error("mixed primes: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("term count {count} exceeds cap {cap}")]
    TermCapExceeded { count: usize, cap: usize },

    #[error("element is not integral (valuation {0})")]
    NotIntegral(String),

    #[error("element indistinguishable from zero at precision t^{0}")]
    BelowPrecision(String),

    #[error("precision mismatch: {0}")]
    PrecisionMismatch(String),

    #[error("insufficient t-adic precision: need at least {need}, got {got}")]
    InsufficientPrecision { need: String, got: String },

    #[error("witt cache integrity: {0}")]
    WittCache(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("descriptor/ring mismatch: {0}")]
    DescriptorMismatch(String),

    #[error("seminorm point is not bounded: {0}")]
    BoundednessViolation(String),

    #[error("ring norm is not power-multiplicative: {0}")]
    NotPowerMultiplicative(String),

    #[error("candidate family does not attain the norm of {0}")]
    FamilyIncomplete(String),

    #[error("invalid fraction: {0}")]
    InvalidFraction(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("json error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Overflow(_) => "overflow",
            Error::NotInValueGroup { .. } => "not_in_value_group",
            Error::PrimeMismatch(..) => "prime_mismatch",
            Error::TermCapExceeded { .. } => "term_cap_exceeded",
            Error::NotIntegral(_) => "not_integral",
            Error::BelowPrecision(_) => "below_precision",
            Error::PrecisionMismatch(_) => "precision_mismatch",
            Error::InsufficientPrecision { .. } => "insufficient_precision",
            Error::WittCache(_) => "witt_cache",
            Error::CapExceeded(_) => "cap_exceeded",
            Error::Unsupported(_) => "unsupported",
            Error::DescriptorMismatch(_) => "descriptor_mismatch",
            Error::BoundednessViolation(_) => "boundedness_violation",
            Error::NotPowerMultiplicative(_) => "not_power_multiplicative",
            Error::FamilyIncomplete(_) => "family_incomplete",
            Error::InvalidFraction(_) => "invalid_fraction",
            Error::Invalid(_) => "invalid",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
