use thiserror::Error;

/// Errors raised by the transforms, estimators and the study driver.
#[derive(Debug, Error)]
pub enum NkkError {
    #[error("unsupported wavelet filter `{0}` (expected haar, d4 or la8)")]
    UnsupportedFilter(String),

    #[error("filter table {name} violates {identity}: deviation {deviation:e}")]
    CorruptFilter {
        name: &'static str,
        identity: &'static str,
        deviation: f64,
    },

    #[error("series length {len} is not divisible by 2^{levels}")]
    InvalidLength { len: usize, levels: usize },

    #[error("series of length {len} is shorter than the filter length {filter_len}")]
    SeriesTooShort { len: usize, filter_len: usize },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("frequency index k = {k} is degenerate for n = {n} (need 1 <= k <= (n-1)/2)")]
    DegenerateFrequency { n: usize, k: usize },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("oracle limited to n <= {max}, got n = {n}")]
    OracleSize { n: usize, max: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("lag {lag} too large for {n} observations (need lag < n/2)")]
    LagTooLarge { lag: usize, n: usize },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("density at zero must be positive and finite, got {0}")]
    InvalidDensity(f64),

    #[error("largest eigenvalue is zero: the limit law is a point mass at zero")]
    PointMass,

    #[error("invalid model: {0}")]
    InvalidSpec(String),

    #[error("replication {index} failed: {source}")]
    Replication {
        index: usize,
        #[source]
        source: Box<NkkError>,
    },
}

pub type Result<T, E = NkkError> = std::result::Result<T, E>;
