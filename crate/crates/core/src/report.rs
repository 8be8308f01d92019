//! Assembly of the per-time-step estimation quantities into one report.
//!
//! A report runs a tangent propagation once and, at each requested time,
//! collects the full QFI, both position-space QFI forms, the classical
//! Fisher information of (optionally detector-limited) position
//! measurement, the distribution's standard deviation, and the ratios
//! between them. The `t^2` coefficient of the position QFI is fitted over
//! the last three quarters of the run.

use nalgebra::RealField;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fisher::{
    classical_fi, default_eigen_cutoff, default_probability_cutoff, full_qfi, limited_fi,
    position_qfi_exact, position_qfi_paper, reduce_position, DetectorWindow,
};
use crate::scalar::Scalar;
use crate::tangent::{SimRecipe, TangentState};

/// What to compute, on which recipe.
#[derive(Clone, Debug)]
pub struct ReportSpec<T: Scalar> {
    pub recipe: SimRecipe<T>,
    /// Detector window for the limited Fisher information column.
    pub window: Option<DetectorWindow>,
    /// Also evaluate the spectral (exact) position QFI. Costs an
    /// eigendecomposition per reported time step.
    pub exact_qfi: bool,
    /// Cutoff on eigenvalue-pair sums in the spectral QFI.
    pub eigen_cutoff: T,
    /// Probability below which a site is treated as structurally empty.
    pub p_cutoff: T,
    /// Times to report. `None` reports every step `0..=steps`.
    pub t_eval: Option<Vec<usize>>,
}

impl<T: Scalar> ReportSpec<T> {
    pub fn new(recipe: SimRecipe<T>) -> Self {
        Self {
            recipe,
            window: None,
            exact_qfi: false,
            eigen_cutoff: default_eigen_cutoff(),
            p_cutoff: default_probability_cutoff(),
            t_eval: None,
        }
    }

    pub fn with_window(mut self, window: DetectorWindow) -> Self {
        self.window = Some(window);
        self
    }

    pub fn with_exact_qfi(mut self, on: bool) -> Self {
        self.exact_qfi = on;
        self
    }

    pub fn with_t_eval(mut self, times: Vec<usize>) -> Self {
        self.t_eval = Some(times);
        self
    }
}

/// Scalar time series of the estimation quantities.
///
/// All Fisher-type columns are in inverse square radians; `sigma` is in
/// lattice sites. Ratio columns are zero wherever the denominator has not
/// yet grown past numerical noise (the first couple of steps). `kappa` is
/// the fitted coefficient of `H_w = kappa t^2` over the last three quarters
/// of the run, in rad^-2 per step^2.
#[derive(Clone, Debug)]
pub struct EstimationReport<T: Scalar> {
    pub times: Vec<usize>,
    pub h_f: Vec<T>,
    pub h_w_paper: Vec<T>,
    pub h_w_exact: Option<Vec<T>>,
    pub f_x: Vec<T>,
    pub f_xl: Option<Vec<T>>,
    pub sigma: Vec<T>,
    /// `H_w_paper / H_f`.
    pub ratio_hw_hf: Vec<T>,
    /// `F_x / H_f`.
    pub ratio_fx_hf: Vec<T>,
    /// `F_x / H_w_paper`.
    pub ratio_fx_hw: Vec<T>,
    pub kappa: T,
}

impl<T: Scalar> EstimationReport<T> {
    /// Index of time `t` in the report, if it was evaluated.
    pub fn index_of(&self, t: usize) -> Option<usize> {
        self.times.iter().position(|&u| u == t)
    }

    fn validate_nonnegative(&self) -> Result<()> {
        let floor = -T::spec_tol(1e-9);
        let columns: [(&str, &Vec<T>); 3] = [
            ("H_f", &self.h_f),
            ("H_w_paper", &self.h_w_paper),
            ("F_x", &self.f_x),
        ];
        for (name, col) in columns {
            if let Some(&bad) = col.iter().find(|&&v| v < floor) {
                return Err(Error::InvalidRecipe {
                    reason: format!("{name} = {bad:e} is negative beyond tolerance"),
                });
            }
        }
        Ok(())
    }
}

fn ratio_or_zero<T: Scalar>(num: T, den: T) -> T {
    if den > T::spec_tol(1e-12) {
        num / den
    } else {
        T::zero()
    }
}

/// Runs the recipe once and collects every requested quantity.
pub fn build_report<T: Scalar + RealField>(spec: &ReportSpec<T>) -> Result<EstimationReport<T>> {
    let steps = spec.recipe.steps();
    let times: Vec<usize> = match &spec.t_eval {
        Some(ts) => {
            let mut ts = ts.clone();
            ts.sort_unstable();
            ts.dedup();
            if ts.iter().any(|&t| t > steps) {
                return Err(Error::InvalidRecipe {
                    reason: format!("t_eval contains a time past the run length {steps}"),
                });
            }
            ts
        }
        None => (0..=steps).collect(),
    };

    let n = times.len();
    let mut report = EstimationReport {
        times: times.clone(),
        h_f: Vec::with_capacity(n),
        h_w_paper: Vec::with_capacity(n),
        h_w_exact: spec.exact_qfi.then(|| Vec::with_capacity(n)),
        f_x: Vec::with_capacity(n),
        f_xl: spec.window.as_ref().map(|_| Vec::with_capacity(n)),
        sigma: Vec::with_capacity(n),
        ratio_hw_hf: Vec::with_capacity(n),
        ratio_fx_hf: Vec::with_capacity(n),
        ratio_fx_hw: Vec::with_capacity(n),
        kappa: T::zero(),
    };

    let mut ts = TangentState::with_origin(
        spec.recipe.init(),
        spec.recipe.topology(),
        spec.recipe.origin(),
        spec.recipe.tag(),
    )?;
    let mut next = times.iter().peekable();
    for t in 0..=steps {
        if next.peek() == Some(&&t) {
            next.next();
            collect_row(spec, &ts, &mut report)?;
        }
        if t < steps {
            ts = spec.recipe.advance_tangent(&ts)?;
        }
        if next.peek().is_none() {
            break;
        }
    }

    report.validate_nonnegative()?;

    // kappa from the last three quarters of the reported times.
    let fit_from = steps / 4;
    let fit_pts: Vec<(usize, T)> = report
        .times
        .iter()
        .zip(report.h_w_paper.iter())
        .filter(|(&t, _)| t >= fit_from.max(1))
        .map(|(&t, &v)| (t, v))
        .collect();
    if !fit_pts.is_empty() {
        let times: Vec<usize> = fit_pts.iter().map(|&(t, _)| t).collect();
        let vals: Vec<T> = fit_pts.iter().map(|&(_, v)| v).collect();
        report.kappa = fit_t_squared(&times, &vals).kappa;
    }
    Ok(report)
}

fn collect_row<T: Scalar + RealField>(
    spec: &ReportSpec<T>,
    ts: &TangentState<T>,
    report: &mut EstimationReport<T>,
) -> Result<()> {
    let h_f = full_qfi(ts)?;
    let pd = reduce_position(ts);
    let h_w = position_qfi_paper(&pd);
    let dist = ts.base().position_distribution();
    let ddist = ts.probability_derivative();
    let f_x = classical_fi(&dist, &ddist, spec.p_cutoff)?;

    report.h_f.push(h_f);
    report.h_w_paper.push(h_w);
    if let Some(col) = report.h_w_exact.as_mut() {
        col.push(position_qfi_exact(&pd, spec.eigen_cutoff));
    }
    report.f_x.push(f_x);
    if let (Some(col), Some(window)) = (report.f_xl.as_mut(), spec.window.as_ref()) {
        col.push(limited_fi(&dist, &ddist, window, spec.p_cutoff)?);
    }
    report.sigma.push(dist.std_dev());
    report.ratio_hw_hf.push(ratio_or_zero(h_w, h_f));
    report.ratio_fx_hf.push(ratio_or_zero(f_x, h_f));
    report.ratio_fx_hw.push(ratio_or_zero(f_x, h_w));
    Ok(())
}

/// Least-squares fit of `v = kappa t^2` through the given points.
#[derive(Clone, Copy, Debug)]
pub struct TSquaredFit<T> {
    pub kappa: T,
    /// `max |kappa t^2 - v| / v` over points with `v > 0`.
    pub max_rel_residual: T,
}

pub fn fit_t_squared<T: Scalar>(times: &[usize], values: &[T]) -> TSquaredFit<T> {
    assert_eq!(times.len(), values.len(), "mismatched fit inputs");
    let mut num = T::zero();
    let mut den = T::zero();
    for (&t, &v) in times.iter().zip(values.iter()) {
        let t2 = T::from_usize(t * t);
        num += v * t2;
        den += t2 * t2;
    }
    let kappa = if den > T::zero() { num / den } else { T::zero() };
    let mut worst = T::zero();
    for (&t, &v) in times.iter().zip(values.iter()) {
        if v > T::zero() {
            let fitted = kappa * T::from_usize(t * t);
            worst = Float::max(worst, (fitted - v).abs() / v);
        }
    }
    TSquaredFit {
        kappa,
        max_rel_residual: worst,
    }
}
