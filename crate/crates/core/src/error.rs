use thiserror::Error;

/// Errors raised by the certification engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrzError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series denominator has zero constant term and is not invertible")]
    NotInvertible,

    #[error("interval endpoint {endpoint} is a root of the polynomial")]
    EndpointDegenerate { endpoint: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("resource cap `{cap}` exceeded: requested {requested}, limit {limit} (use --force to override)")]
    ResourceCap {
        cap: &'static str,
        requested: String,
        limit: u64,
    },

    #[error("root isolation exceeded bisection depth {0}")]
    BisectionDepth(u32),
}

pub type Result<T> = std::result::Result<T, GrzError>;
