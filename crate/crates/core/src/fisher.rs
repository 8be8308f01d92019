//! Fisher information and quantum Fisher information of the walker.
//!
//! For the pure joint (coin + position) state the quantum Fisher information
//! takes the closed form `H_f = 4 (<dpsi|dpsi> - |<psi|dpsi>|^2)`, which is
//! algebraically the same as `4 Tr[rho (drho)^2]` with `rho = |psi><psi|`
//! (the thing the matrix oracle in the test suite checks).
//!
//! Tracing out the coin leaves the mixed position state
//! `rho_w = |psi_up><psi_up| + |psi_down><psi_down|`, where `|psi_up>` and
//! `|psi_down>` are the coin-resolved position vectors. Two position-space
//! QFI values are computed side by side:
//!
//! * [`position_qfi_paper`] — the approximate closed form
//!   `4 Tr[(drho_w)^2 (I - rho_w)]`, reported as `H_w`;
//! * [`position_qfi_exact`] — the textbook spectral formula
//!   `sum_{ij} 2 |<i|drho_w|j>|^2 / (lambda_i + lambda_j)` over eigenpairs of
//!   `rho_w` with `lambda_i + lambda_j` above a cutoff. This is the
//!   independent oracle; inequality-style properties are stated against it.
//!
//! Classical Fisher information of position measurement uses the exact
//! sitewise derivative `dP` carried by the tangent state, never finite
//! differences, with the convention `0^2 / 0 = 0` for structurally empty
//! sites (enforced by a probability cutoff).

use std::collections::BTreeSet;

use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tangent::TangentState;
use crate::walk::PositionDistribution;

/// Default cutoff on `lambda_i + lambda_j` in the spectral QFI (`1e-12` at
/// f64 precision, rescaled for other scalars).
pub fn default_eigen_cutoff<T: Scalar>() -> T {
    T::spec_tol(1e-12)
}

/// Default cutoff below which a site's probability counts as structurally
/// zero in Fisher-information sums (`1e-15` at f64 precision).
pub fn default_probability_cutoff<T: Scalar>() -> T {
    T::spec_tol(1e-15)
}

/// Full QFI of the joint coin-plus-position pure state,
/// `H_f = 4 (<dpsi|dpsi> - |<psi|dpsi>|^2)`.
pub fn full_qfi<T: Scalar>(ts: &TangentState<T>) -> Result<T> {
    let norm_sqr = ts.base().norm_sqr();
    if (norm_sqr - T::one()).abs() > T::spec_tol(1e-10) {
        return Err(Error::UnnormalizedState {
            norm_sqr: norm_sqr.to_f64().unwrap_or(f64::NAN),
        });
    }
    let overlap = ts.overlap();
    Ok(T::from_f64(4.0) * (ts.derivative_norm_sqr() - overlap.norm_sqr()))
}

/// Position-space density matrix `rho_w` and its parameter derivative,
/// restricted to the light-cone support of the state.
///
/// Both matrices are Hermitian by construction; `rho` has trace one and is
/// positive semidefinite, `drho` is traceless. `x_lo` records which lattice
/// site row/column 0 corresponds to.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionDensity<T: Scalar> {
    rho: DMatrix<Complex<T>>,
    drho: DMatrix<Complex<T>>,
    t: usize,
    x_lo: i64,
}

impl<T: Scalar> PositionDensity<T> {
    /// Validated constructor for densities built outside [`reduce_position`]
    /// (oracle tests, hand-made examples). Checks shape, Hermiticity, and the
    /// two trace invariants; positive semidefiniteness is the caller's
    /// responsibility (see [`PositionDensity::validate`]).
    pub fn from_parts(
        rho: DMatrix<Complex<T>>,
        drho: DMatrix<Complex<T>>,
        t: usize,
        x_lo: i64,
    ) -> Result<Self> {
        let n = rho.nrows();
        if !rho.is_square() || !drho.is_square() || drho.nrows() != n {
            return Err(Error::AmplitudeLengthMismatch {
                len: drho.nrows(),
                expected: n,
            });
        }
        let pd = Self { rho, drho, t, x_lo };
        pd.check_hermitian()?;
        pd.check_traces()?;
        Ok(pd)
    }

    pub fn rho(&self) -> &DMatrix<Complex<T>> {
        &self.rho
    }

    pub fn drho(&self) -> &DMatrix<Complex<T>> {
        &self.drho
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// Lattice sites covered by the matrix rows, ascending.
    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        self.x_lo..self.x_lo + self.rho.nrows() as i64
    }

    fn check_hermitian(&self) -> Result<()> {
        let tol = T::spec_tol(1e-12);
        for (name, m) in [("rho", &self.rho), ("drho", &self.drho)] {
            for i in 0..m.nrows() {
                for j in i..m.ncols() {
                    if (m[(i, j)] - m[(j, i)].conj()).norm() > tol {
                        return Err(Error::InvalidRecipe {
                            reason: format!("{name} is not Hermitian at ({i}, {j})"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_traces(&self) -> Result<()> {
        let tr_rho: T = (0..self.rho.nrows()).map(|i| self.rho[(i, i)].re).sum();
        if (tr_rho - T::one()).abs() > T::spec_tol(1e-10) {
            return Err(Error::UnnormalizedState {
                norm_sqr: tr_rho.to_f64().unwrap_or(f64::NAN),
            });
        }
        let tr_drho: T = (0..self.drho.nrows()).map(|i| self.drho[(i, i)].re).sum();
        if tr_drho.abs() > T::spec_tol(1e-10) {
            return Err(Error::DerivativeNotTraceless {
                sum: tr_drho.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

impl<T: Scalar + RealField> PositionDensity<T> {
    /// Full invariant check including positive semidefiniteness
    /// (eigenvalues above `-1e-10`). Costs an eigendecomposition.
    pub fn validate(&self) -> Result<()> {
        self.check_hermitian()?;
        self.check_traces()?;
        let eig = self.rho.clone().symmetric_eigen();
        let min = eig
            .eigenvalues
            .iter()
            .copied()
            .fold(T::infinity(), |a, b| Float::min(a, b));
        if min < -T::spec_tol(1e-10) {
            return Err(Error::NegativeProbability {
                site: self.x_lo,
                p: min.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

/// Traces out the coin: builds `rho_w`, and its derivative from the tangent
/// field, on the light-cone support of the state.
///
/// `rho_w = u u^H + d d^H` and
/// `drho_w = du u^H + u du^H + dd d^H + d dd^H`, with `u`, `d` the up/down
/// position vectors and `du`, `dd` their propagated derivatives.
pub fn reduce_position<T: Scalar>(ts: &TangentState<T>) -> PositionDensity<T> {
    let base = ts.base();
    let half = base.halfwidth();
    let t = base.t() as i64;
    let x_lo = (-half).max(base.origin() - t);
    let x_hi = half.min(base.origin() + t);
    let lo = (x_lo + half) as usize;
    let n = (x_hi - x_lo + 1) as usize;

    let u = &base.up_amplitudes()[lo..lo + n];
    let d = &base.down_amplitudes()[lo..lo + n];
    let du = &ts.d_up_amplitudes()[lo..lo + n];
    let dd = &ts.d_down_amplitudes()[lo..lo + n];

    let rho = DMatrix::from_fn(n, n, |i, j| u[i] * u[j].conj() + d[i] * d[j].conj());
    let drho = DMatrix::from_fn(n, n, |i, j| {
        du[i] * u[j].conj() + u[i] * du[j].conj() + dd[i] * d[j].conj() + d[i] * dd[j].conj()
    });
    PositionDensity {
        rho,
        drho,
        t: base.t(),
        x_lo,
    }
}

/// Position-space QFI in the paper's approximate closed form,
/// `H_w = 4 Tr[(drho_w)^2 (I - rho_w)]`.
pub fn position_qfi_paper<T: Scalar + RealField>(pd: &PositionDensity<T>) -> T {
    let d2 = &pd.drho * &pd.drho;
    // Tr[D^2] = sum |D_ij|^2 and Tr[D^2 R] = <D^2, R>_F, both real for
    // Hermitian D, R.
    let mut tr_d2 = T::zero();
    for v in pd.drho.iter() {
        tr_d2 += v.norm_sqr();
    }
    let mut tr_d2r = T::zero();
    for (m, r) in d2.iter().zip(pd.rho.iter()) {
        tr_d2r += (m * r.conj()).re;
    }
    <T as Scalar>::from_f64(4.0) * (tr_d2 - tr_d2r)
}

/// Exact mixed-state QFI from the spectral form of the symmetric logarithmic
/// derivative: `sum 2 |<i|drho|j>|^2 / (lambda_i + lambda_j)` over eigenpairs
/// of `rho` with `lambda_i + lambda_j > eps`.
pub fn position_qfi_exact<T: Scalar + RealField>(pd: &PositionDensity<T>, eps: T) -> T {
    let eig = pd.rho.clone().symmetric_eigen();
    let m = eig.eigenvectors.adjoint() * (&pd.drho * &eig.eigenvectors);
    let n = pd.dim();
    let mut h = T::zero();
    for i in 0..n {
        for j in 0..n {
            let s = eig.eigenvalues[i] + eig.eigenvalues[j];
            if s > eps {
                h += <T as Scalar>::from_f64(2.0) * m[(i, j)].norm_sqr() / s;
            }
        }
    }
    h
}

/// Classical Fisher information of a full position measurement,
/// `F_x = sum_x (dP(x))^2 / P(x)` over sites with `P > p_cutoff`.
///
/// `ddist` must be the exact sitewise derivative carried by the tangent
/// state (see [`TangentState::probability_derivative`]); it has to sum to
/// zero, which is checked.
pub fn classical_fi<T: Scalar>(
    dist: &PositionDistribution<T>,
    ddist: &[T],
    p_cutoff: T,
) -> Result<T> {
    check_fi_inputs(dist, ddist)?;
    let mut f = T::zero();
    for (&p, &dp) in dist.probs().iter().zip(ddist.iter()) {
        if p > p_cutoff {
            f += dp * dp / p;
        }
    }
    Ok(f)
}

/// Set of lattice sites a position detector can resolve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectorWindow {
    sites: BTreeSet<i64>,
}

impl DetectorWindow {
    pub fn new<I: IntoIterator<Item = i64>>(sites: I) -> Result<Self> {
        let sites: BTreeSet<i64> = sites.into_iter().collect();
        if sites.is_empty() {
            return Err(Error::EmptyWindow);
        }
        Ok(Self { sites })
    }

    /// Contiguous window `[lo, hi]`.
    pub fn contiguous(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyWindow);
        }
        Self::new(lo..=hi)
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.sites.contains(&x)
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        self.sites.iter().copied()
    }

    pub fn min(&self) -> i64 {
        *self.sites.iter().next().expect("window is never empty")
    }

    pub fn max(&self) -> i64 {
        *self.sites.iter().next_back().expect("window is never empty")
    }
}

/// Fisher information of a detector that only sees the sites in `window`:
/// the same sum as [`classical_fi`] restricted to the window.
pub fn limited_fi<T: Scalar>(
    dist: &PositionDistribution<T>,
    ddist: &[T],
    window: &DetectorWindow,
    p_cutoff: T,
) -> Result<T> {
    check_fi_inputs(dist, ddist)?;
    let half = dist.halfwidth();
    let mut f = T::zero();
    for x in window.sites() {
        if x.abs() > half {
            return Err(Error::WindowOutsideLattice { site: x, halfwidth: half });
        }
        let i = (x + half) as usize;
        let p = dist.probs()[i];
        if p > p_cutoff {
            let dp = ddist[i];
            f += dp * dp / p;
        }
    }
    Ok(f)
}

fn check_fi_inputs<T: Scalar>(dist: &PositionDistribution<T>, ddist: &[T]) -> Result<()> {
    if ddist.len() != dist.n_sites() {
        return Err(Error::DistributionLengthMismatch {
            dist: dist.n_sites(),
            ddist: ddist.len(),
        });
    }
    for (x, &p) in dist.site_probs() {
        if p < -T::spec_tol(1e-12) {
            return Err(Error::NegativeProbability {
                site: x,
                p: p.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let sum: T = ddist.iter().copied().sum();
    if sum.abs() > T::spec_tol(1e-9) {
        return Err(Error::DerivativeNotTraceless {
            sum: sum.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Cramer-Rao variance lower bound `1 / (M F)` for `M` independent
/// repetitions of a measurement with Fisher information `F`.
///
/// `F <= 0` carries no information about the parameter; the bound is then
/// unbounded, signaled by [`Error::NoInformation`].
pub fn cramer_rao_bound<T: Scalar>(f: T, m: u64) -> Result<T> {
    if m == 0 {
        return Err(Error::ZeroRepetitions);
    }
    if f <= T::zero() {
        return Err(Error::NoInformation {
            f: f.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(T::one() / (T::from_f64(m as f64) * f))
}
