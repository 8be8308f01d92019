//! Brute-force operator-matrix oracle shared by the integration suites.
//!
//! Everything here builds explicit matrices on the full coin-tensor-position
//! Hilbert space (dimension `2N` for `N` sites, up block first) and applies
//! them to vectorized states. Small lattices only; the point is independence
//! from the fused sitewise updates in the library, not speed.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use qwalk_core::tangent::TangentState;
use qwalk_core::walk::WalkState;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// 2x2 coin block.
pub fn coin_block(theta: f64) -> [[C64; 2]; 2] {
    let (s, co) = theta.sin_cos();
    [
        [c(co, 0.0), c(0.0, -s)],
        [c(0.0, -s), c(co, 0.0)],
    ]
}

/// 2x2 coin derivative block.
pub fn dcoin_block(theta: f64) -> [[C64; 2]; 2] {
    let (s, co) = theta.sin_cos();
    [
        [c(-s, 0.0), c(0.0, -co)],
        [c(0.0, -co), c(-s, 0.0)],
    ]
}

/// Kronecker product `block (x) I_n` on the `2n`-dimensional space.
pub fn coin_full(block: [[C64; 2]; 2], n: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for ci in 0..2 {
        for cj in 0..2 {
            for i in 0..n {
                m[(ci * n + i, cj * n + i)] = block[ci][cj];
            }
        }
    }
    m
}

/// Full shift: up moves left, down moves right. `bounded` adds the
/// spin-flip wall terms; otherwise amplitude leaving the lattice is dropped
/// (exact whenever the light cone stays inside).
pub fn shift_standard_full(n: usize, bounded: bool) -> DMatrix<C64> {
    let one = c(1.0, 0.0);
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 1..n {
        m[(i - 1, i)] = one; // up at i -> up at i-1
    }
    for i in 0..n - 1 {
        m[(n + i + 1, n + i)] = one; // down at i -> down at i+1
    }
    if bounded {
        m[(n, 0)] = one; // up at the left wall -> down, same site
        m[(n - 1, 2 * n - 1)] = one; // down at the right wall -> up, same site
    }
    m
}

/// Half shift `S-`: up moves left, down stays.
pub fn shift_minus_full(n: usize) -> DMatrix<C64> {
    let one = c(1.0, 0.0);
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 1..n {
        m[(i - 1, i)] = one;
    }
    for i in 0..n {
        m[(n + i, n + i)] = one;
    }
    m
}

/// Half shift `S+`: up stays, down moves right.
pub fn shift_plus_full(n: usize) -> DMatrix<C64> {
    let one = c(1.0, 0.0);
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, i)] = one;
    }
    for i in 0..n - 1 {
        m[(n + i + 1, n + i)] = one;
    }
    m
}

/// One standard step as an explicit operator: shift times coin.
pub fn standard_step_matrix(theta: f64, n: usize, bounded: bool) -> DMatrix<C64> {
    shift_standard_full(n, bounded) * coin_full(coin_block(theta), n)
}

/// One split step as a product of the four explicit operators.
pub fn split_step_matrix(theta1: f64, theta2: f64, n: usize) -> DMatrix<C64> {
    shift_plus_full(n)
        * coin_full(coin_block(theta2), n)
        * shift_minus_full(n)
        * coin_full(coin_block(theta1), n)
}

/// Derivative of the standard step operator with respect to theta.
pub fn standard_step_derivative_matrix(theta: f64, n: usize, bounded: bool) -> DMatrix<C64> {
    shift_standard_full(n, bounded) * coin_full(dcoin_block(theta), n)
}

/// Derivative of the split-step operator with respect to theta1 or theta2.
pub fn split_step_derivative_matrix(
    theta1: f64,
    theta2: f64,
    n: usize,
    wrt_theta2: bool,
) -> DMatrix<C64> {
    if wrt_theta2 {
        shift_plus_full(n)
            * coin_full(dcoin_block(theta2), n)
            * shift_minus_full(n)
            * coin_full(coin_block(theta1), n)
    } else {
        shift_plus_full(n)
            * coin_full(coin_block(theta2), n)
            * shift_minus_full(n)
            * coin_full(dcoin_block(theta1), n)
    }
}

/// Vectorizes a walk state: up block then down block, sites ascending.
pub fn state_vector(w: &WalkState<f64>) -> DVector<C64> {
    let n = w.n_sites();
    let mut v = DVector::zeros(2 * n);
    for (i, (&u, &d)) in w
        .up_amplitudes()
        .iter()
        .zip(w.down_amplitudes().iter())
        .enumerate()
    {
        v[i] = u;
        v[n + i] = d;
    }
    v
}

/// Vectorizes the derivative field of a tangent state.
pub fn derivative_vector(ts: &TangentState<f64>) -> DVector<C64> {
    let n = ts.base().n_sites();
    let mut v = DVector::zeros(2 * n);
    for (i, (&u, &d)) in ts
        .d_up_amplitudes()
        .iter()
        .zip(ts.d_down_amplitudes().iter())
        .enumerate()
    {
        v[i] = u;
        v[n + i] = d;
    }
    v
}

pub fn max_norm_diff(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Full QFI from explicit density matrices:
/// `4 Tr[rho (drho)^2]` with `rho = psi psi^H`,
/// `drho = dpsi psi^H + psi dpsi^H`.
pub fn full_qfi_matrix_oracle(psi: &DVector<C64>, dpsi: &DVector<C64>) -> f64 {
    let n = psi.len();
    let rho = DMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj());
    let drho = DMatrix::from_fn(n, n, |i, j| dpsi[i] * psi[j].conj() + psi[i] * dpsi[j].conj());
    let m = &rho * (&drho * &drho);
    4.0 * (0..n).map(|i| m[(i, i)].re).sum::<f64>()
}

/// Degree of interference from the explicit full density matrix: reads the
/// coin-off-diagonal position diagonals out of `rho = Psi Psi^H`.
pub fn mu_matrix_oracle(w: &WalkState<f64>, theta: f64, x: i64) -> f64 {
    let n = w.n_sites();
    let psi = state_vector(w);
    let rho = DMatrix::from_fn(2 * n, 2 * n, |i, j| psi[i] * psi[j].conj());
    let half = w.halfwidth();
    // rho_ud(x, x) sits in the upper-right block at position offset.
    let idx = |x: i64| -> Option<usize> {
        if x.abs() <= half {
            Some((x + half) as usize)
        } else {
            None
        }
    };
    let rho_ud = |x: i64| idx(x).map_or(c(0.0, 0.0), |i| rho[(i, n + i)]);
    let rho_du = |x: i64| idx(x).map_or(c(0.0, 0.0), |i| rho[(n + i, i)]);
    let sc = theta.sin() * theta.cos();
    let total = (rho_ud(x + 1) - rho_ud(x - 1) + rho_du(x + 1) - rho_du(x - 1)) * sc;
    total.norm()
}
