use thiserror::Error;

use crate::equation::Condition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. Payload integers are rendered as
/// decimal strings so the error type does not depend on the scalar type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radicand {0} must be a positive non-square integer")]
    BadRadicand(String),

    #[error("cannot combine elements of Z[sqrt({left})] and Z[sqrt({right})]")]
    RingMismatch { left: String, right: String },

    #[error("continued fraction of sqrt({tau}) did not close within {cap} period terms")]
    PeriodCap { tau: String, cap: usize },

    #[error("Pell solution index must be at least 1")]
    ZeroIndex,

    #[error("solution class index {0} is outside 0..=4")]
    ClassIndex(u32),

    #[error("leading coefficient must be positive, got {0}")]
    NonPositiveLeading(String),

    #[error("not an LA2-type equation: {}", describe(.0))]
    NotLa2(Vec<Condition>),

    #[error("equation reduces to u^2 - tau*v^2 = {j}; only j = 1 can be solved or counted")]
    UnsupportedClass { j: String },

    #[error("x = {x} is below the threshold {threshold}; the closed-form count is not applicable (use the brute-force oracle)")]
    BelowThreshold { x: String, threshold: String },

    #[error("region size {0} must be nonnegative")]
    NegativeRegion(String),

    #[error("oracle scan for x = {x} exceeds the cap {cap}")]
    OracleCap { x: String, cap: u64 },

    #[error("{what} did not terminate within {cap} iterations")]
    IterationCap { what: &'static str, cap: u64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

fn describe(conditions: &[Condition]) -> String {
    conditions
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
