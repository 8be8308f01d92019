//! Error type shared by the simulation and estimation modules.
//!
//! Diagnostic payloads are stored as `f64` regardless of the scalar type the
//! computation ran at, so the error enum itself stays non-generic.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("initial spin not normalized: |alpha|^2 + |beta|^2 = {norm_sqr}")]
    UnnormalizedSpin { norm_sqr: f64 },

    #[error("{name} = {value} is outside the coin range [0, pi]")]
    AngleOutOfRange { name: &'static str, value: f64 },

    #[error("{name} = {value} must be at least {min}")]
    HalfwidthTooSmall { name: &'static str, value: i64, min: i64 },

    #[error("origin {origin} lies outside the lattice [-{halfwidth}, {halfwidth}]")]
    OriginOutsideLattice { origin: i64, halfwidth: i64 },

    #[error("state lattice halfwidth {state} does not match topology halfwidth {topology}")]
    LatticeMismatch { state: i64, topology: i64 },

    #[error(
        "stepping to t = {t} from origin {origin} would push the light cone past the \
         unbounded lattice halfwidth {halfwidth}"
    )]
    CapacityExceeded { t: usize, origin: i64, halfwidth: i64 },

    #[error("split-step walks are defined on unbounded lattices only")]
    SplitStepBounded,

    #[error("state not normalized: total probability = {norm_sqr}")]
    UnnormalizedState { norm_sqr: f64 },

    #[error("amplitude arrays of length {len} do not cover a lattice of {expected} sites")]
    AmplitudeLengthMismatch { len: usize, expected: usize },

    #[error("operation differentiates {expected}, but the tangent state tracks {actual}")]
    ParameterTagMismatch { expected: &'static str, actual: &'static str },

    #[error("finite-difference step h = {h} is outside the trusted range [{min}, {max}]")]
    FdStepOutOfRange { h: f64, min: f64, max: f64 },

    #[error("detector window is empty")]
    EmptyWindow,

    #[error("detector window site {site} lies outside the lattice [-{halfwidth}, {halfwidth}]")]
    WindowOutsideLattice { site: i64, halfwidth: i64 },

    #[error("probability {p} at site {site} is negative beyond tolerance")]
    NegativeProbability { site: i64, p: f64 },

    #[error("probability derivative sums to {sum}, expected 0")]
    DerivativeNotTraceless { sum: f64 },

    #[error("length mismatch: distribution has {dist} sites, derivative has {ddist}")]
    DistributionLengthMismatch { dist: usize, ddist: usize },

    #[error("Fisher information {f} carries no information; the variance bound is unbounded")]
    NoInformation { f: f64 },

    #[error("repetition count M must be positive")]
    ZeroRepetitions,

    #[error("simulation recipe is inconsistent: {reason}")]
    InvalidRecipe { reason: String },
}
