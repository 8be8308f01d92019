//! Degree of interference in the walker's position space.
//!
//! The coin-off-diagonal blocks of the pure-state density matrix have
//! position diagonals `rho_ud(x, x) = A(x) conj(B(x))` and its conjugate.
//! The degree of interference the time-`t` state produces at site `x` one
//! step later is
//!
//! ```text
//! mu(x, t+1) = | sin(theta) cos(theta) [rho_ud(x+1) - rho_ud(x-1)]
//!             + sin(theta) cos(theta) [rho_du(x+1) - rho_du(x-1)] |
//! ```
//!
//! which, since the two brackets are conjugates, equals
//! `|2 sin(theta) cos(theta) Re[A conj(B)(x+1) - A conj(B)(x-1)]|` (an
//! identity the test suite asserts against the verbatim form). Working from
//! amplitudes keeps a map row O(N); the density-matrix form exists only as a
//! test oracle.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tangent::{SimRecipe, WalkKind};
use crate::walk::WalkState;

/// Degree of interference generated at site `x` by the state at time `t`
/// (the field labeled `mu_{x, t+1}`). Out-of-lattice neighbors contribute
/// zero, consistent with vanishing amplitude beyond the walls.
pub fn mu_at<T: Scalar>(state: &WalkState<T>, theta: T, x: i64) -> T {
    let rho_ud = |x: i64| state.amp_up(x) * state.amp_down(x).conj();
    let bracket_ud = rho_ud(x + 1) - rho_ud(x - 1);
    let bracket_du = bracket_ud.conj();
    let sc = theta.sin() * theta.cos();
    ((bracket_ud + bracket_du) * sc).norm()
}

/// Time-position field of the degree of interference.
///
/// Row `t` holds the interference generated by the time-`t` state of the
/// run, i.e. the paper-time label of row `t` is `t + 1`. Indexing rows by
/// the source state keeps divergence times directly comparable with
/// divergence times of the position distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct InterferenceMap<T: Scalar> {
    theta: T,
    half: i64,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> InterferenceMap<T> {
    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn halfwidth(&self) -> i64 {
        self.half
    }

    /// Number of rows; row indices are source-state times `0..n_rows`.
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, t: usize) -> &[T] {
        &self.rows[t]
    }

    /// Value at source time `t` and site `x`; zero outside the lattice.
    pub fn value(&self, t: usize, x: i64) -> T {
        if x.abs() <= self.half {
            self.rows[t][(x + self.half) as usize]
        } else {
            T::zero()
        }
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        -self.half..=self.half
    }

    pub fn max_in_row(&self, t: usize) -> T {
        self.rows[t]
            .iter()
            .copied()
            .fold(T::zero(), |a, b| a.max(b))
    }
}

/// Runs the recipe and evaluates the interference field after every step.
///
/// Only standard (single-coin) recipes are accepted; the field is defined
/// through the single coin angle. The map has `t_max + 1` rows, one per
/// state the run visits.
pub fn mu_map<T: Scalar>(recipe: &SimRecipe<T>, t_max: usize) -> Result<InterferenceMap<T>> {
    let theta = match recipe.kind() {
        WalkKind::Standard { theta } => *theta,
        WalkKind::SplitStep { .. } => {
            return Err(Error::InvalidRecipe {
                reason: "interference maps are defined for standard walks only".into(),
            })
        }
    };
    let mut state = recipe.initial_state()?;
    let half = state.halfwidth();
    let mut rows = Vec::with_capacity(t_max + 1);
    rows.push(mu_row(&state, theta));
    for _ in 0..t_max {
        state = recipe.advance(&state)?;
        rows.push(mu_row(&state, theta));
    }
    Ok(InterferenceMap { theta, half, rows })
}

fn mu_row<T: Scalar>(state: &WalkState<T>, theta: T) -> Vec<T> {
    state.sites().map(|x| mu_at(state, theta, x)).collect()
}

/// First row index at which two maps differ by more than `tol` anywhere on
/// their common lattice, or `None` if they never do.
pub fn first_divergence<T: Scalar>(
    a: &InterferenceMap<T>,
    b: &InterferenceMap<T>,
    tol: T,
) -> Option<usize> {
    let half = a.half.min(b.half);
    let n = a.n_rows().min(b.n_rows());
    (0..n).find(|&t| (-half..=half).any(|x| (a.value(t, x) - b.value(t, x)).abs() > tol))
}
