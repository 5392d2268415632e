//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gram matrix is not symmetric (max relative asymmetry {max_asym:e})")]
    NotSymmetric { max_asym: f64 },

    #[error("gram matrix is not positive definite (Cholesky pivot {pivot} is {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("integer matrix does not have full column rank")]
    RankDeficient,

    #[error("sublattice is not saturated (elementary divisor {divisor} at index {index})")]
    NotSaturated { index: usize, divisor: i64 },

    #[error("quotient map is not surjective over the integers (elementary divisor {divisor})")]
    NotSurjective { divisor: i64 },

    #[error("enumeration aborted: at least {found} points exceed the cap {cap}")]
    CountCapExceeded { found: u64, cap: u64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("beta {beta} below the certified beta_min {beta_min} of this space")]
    BetaBelowCertified { beta: f64, beta_min: f64 },

    #[error("x {x} is not above the essential infimum {infimum} of the energy")]
    XBelowInfimum { x: f64, infimum: f64 },

    #[error("torus grid {grid} too coarse (need at least {min})")]
    GridTooCoarse { grid: usize, min: usize },

    #[error("energy grid of {cells} cells exceeds the DP limit {limit}")]
    GridOverflow { cells: usize, limit: usize },

    #[error("projective system not summable at available depth: {0}")]
    NotSummableAtDepth(String),

    #[error("inconsistent covering-radius bounds: lower {lower} > upper {upper}")]
    InconsistentBounds { lower: f64, upper: f64 },

    #[error("invariant violated: {0}")]
    ViolationDetected(String),
}

pub type Result<T> = std::result::Result<T, Error>;
