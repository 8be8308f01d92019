//! Discrete-time quantum walk simulation and coin-parameter estimation.
//!
//! The crate simulates one-dimensional discrete-time quantum walks (standard,
//! bounded, and split-step), co-propagates the exact derivative of the state
//! with respect to the coin angle, and computes the estimation-theoretic
//! quantities that quantify how well position measurements can recover that
//! angle: full and position-space quantum Fisher information, classical
//! Fisher information of (possibly detector-limited) position measurements,
//! Cramer-Rao bounds, and interference maps.
//!
//! Everything is generic over the floating-point scalar through
//! [`scalar::Scalar`]; the aliases below fix `f64`, which is what the
//! command-line driver and the test suites use.

pub mod error;
pub mod fisher;
pub mod interference;
pub mod report;
pub mod scalar;
pub mod tangent;
pub mod walk;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Complex amplitude at `f64` precision.
pub type C64 = num_complex::Complex<f64>;

pub type InitialSpin64 = walk::InitialSpin<f64>;
pub type CoinSpec64 = walk::CoinSpec<f64>;
pub type SplitStepSpec64 = walk::SplitStepSpec<f64>;
pub type WalkState64 = walk::WalkState<f64>;
pub type PositionDistribution64 = walk::PositionDistribution<f64>;
pub type TangentState64 = tangent::TangentState<f64>;
pub type SimRecipe64 = tangent::SimRecipe<f64>;
pub type PositionDensity64 = fisher::PositionDensity<f64>;
pub type InterferenceMap64 = interference::InterferenceMap<f64>;
pub type EstimationReport64 = report::EstimationReport<f64>;
pub type ReportSpec64 = report::ReportSpec<f64>;
