use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the range the model accepts.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("distance {distance_m} m is below the {reference_m} m reference distance")]
    BelowReferenceDistance { distance_m: f64, reference_m: f64 },

    #[error("empty distribution")]
    EmptyDistribution,

    #[error("unit mismatch: {left} vs {right}")]
    UnitMismatch { left: String, right: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    /// The calibration target lies outside what the search interval can reach.
    #[error(
        "calibration target {target_db} dB not bracketed: p={percentile} spans \
         [{low_value_db:.3}, {high_value_db:.3}] dB over tx power [{low_dbm}, {high_dbm}] dBm"
    )]
    NotBracketed {
        percentile: f64,
        target_db: f64,
        low_dbm: f64,
        high_dbm: f64,
        low_value_db: f64,
        high_value_db: f64,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
