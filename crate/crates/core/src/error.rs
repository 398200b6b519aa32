use thiserror::Error;

/// Errors shared by the counting and reduction routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("instance too large for oracle: n = {n} exceeds limit {limit}")]
    OracleLimit { n: usize, limit: usize },

    #[error("instance total {total} exceeds dynamic programming bound {bound}")]
    DpBound { total: u64, bound: u64 },

    #[error("element {value} does not fit in a machine word")]
    ElementTooLarge { value: String },

    #[error("index {index} out of range for instance of length {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid pair ({i}, {j}): need two distinct indices below {n}")]
    InvalidPair { i: usize, j: usize, n: usize },

    #[error("encoded product would need about {bits} bits, cap is {cap}")]
    ProductTooLarge { bits: u128, cap: u128 },

    #[error("quadrature result unreliable: residual {residual} >= 0.25")]
    UnreliableQuadrature { residual: f64 },

    #[error("quadrature guard: n = {n} exceeds float-reliability limit {limit}")]
    QuadratureGuard { n: usize, limit: usize },

    #[error("radix {radix} too small: reduction digits require radix >= 6")]
    RadixTooSmall { radix: u32 },

    #[error("subset-sum target {target} not strictly between 0 and twice the set sum {sum}")]
    InvalidTarget { target: String, sum: String },

    #[error("prime list must be nonempty and all entries >= 2")]
    BadPrimes,

    #[error("estimator requires the parsimonious reduction variant")]
    NeedParsimonious,

    #[error("precision_bits {bits} below minimum 16")]
    PrecisionTooLow { bits: u32 },

    #[error("empty instance: n must be >= 1")]
    EmptyInstance,

    #[error("zero element at position {index}: elements must be >= 1")]
    ZeroElement { index: usize },

    #[error("modulus must be >= 1")]
    BadModulus,

    #[error("invalid scan range: {0}")]
    BadScanRange(String),

    #[error("invalid instance file: {0}")]
    BadInstanceFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
