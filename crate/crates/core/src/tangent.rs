//! Exact co-propagation of the derivative state alongside the walker.
//!
//! Differentiating the evolution `|psi(t)> = S C |psi(t-1)>` with respect to
//! the coin angle gives
//!
//! ```text
//! |dpsi(t)> = S C |dpsi(t-1)> + S (dC) |psi(t-1)>
//! ```
//!
//! with the coin derivative
//!
//! ```text
//! dC(theta) = | -sin(theta)   -i cos(theta) |
//!             | -i cos(theta)  -sin(theta)  |.
//! ```
//!
//! The derivative field rides through the same shift as the base walk (the
//! shift carries no angle dependence), so walls reflect it identically. For
//! split-step walks the product rule injects the `dC` term at whichever of
//! the two coins is being differentiated.
//!
//! The recursion is exact; finite differences appear only in [`fd_check`],
//! which reruns the full simulation at `theta +/- h` and reports the
//! max-norm discrepancy of the central difference against the propagated
//! derivative.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{neg_i, Scalar};
use crate::walk::{
    coin_rotate, shift_half_minus, shift_half_plus, shift_standard, CoinSpec, InitialSpin,
    SplitStepSpec, Topology, WalkState,
};

/// Which coin angle the derivative field tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamTag {
    /// The single angle of a standard walk.
    Theta,
    /// First coin of a split-step walk.
    Theta1,
    /// Second coin of a split-step walk.
    Theta2,
}

impl ParamTag {
    pub fn name(&self) -> &'static str {
        match self {
            ParamTag::Theta => "theta",
            ParamTag::Theta1 => "theta1",
            ParamTag::Theta2 => "theta2",
        }
    }
}

/// A walk state paired with its derivative amplitude field.
///
/// At `t = 0` the derivative field is identically zero (the initial state
/// does not depend on the coin angle). Differentiating `<psi|psi> = 1` gives
/// the standing invariant `Re <psi|dpsi> = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentState<T: Scalar> {
    base: WalkState<T>,
    d_up: Vec<Complex<T>>,
    d_down: Vec<Complex<T>>,
    tag: ParamTag,
}

impl<T: Scalar> TangentState<T> {
    /// Tangent state at `t = 0`: localized walker, zero derivative field.
    pub fn new(init: &InitialSpin<T>, topology: &Topology, tag: ParamTag) -> Self {
        Self::from_base(WalkState::new(init, topology), tag)
    }

    pub fn with_origin(
        init: &InitialSpin<T>,
        topology: &Topology,
        origin: i64,
        tag: ParamTag,
    ) -> Result<Self> {
        Ok(Self::from_base(
            WalkState::with_origin(init, topology, origin)?,
            tag,
        ))
    }

    /// Wraps an existing `t = 0` state with a zero derivative field.
    pub fn from_base(base: WalkState<T>, tag: ParamTag) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        let n = base.n_sites();
        Self {
            base,
            d_up: vec![zero; n],
            d_down: vec![zero; n],
            tag,
        }
    }

    pub fn base(&self) -> &WalkState<T> {
        &self.base
    }

    pub fn tag(&self) -> ParamTag {
        self.tag
    }

    pub fn t(&self) -> usize {
        self.base.t()
    }

    pub fn d_up_amplitudes(&self) -> &[Complex<T>] {
        &self.d_up
    }

    pub fn d_down_amplitudes(&self) -> &[Complex<T>] {
        &self.d_down
    }

    /// Derivative of the up amplitude at site `x`; zero outside the lattice.
    pub fn d_amp_up(&self, x: i64) -> Complex<T> {
        self.base
            .index_of(x)
            .map_or(Complex::new(T::zero(), T::zero()), |i| self.d_up[i])
    }

    /// Derivative of the down amplitude at site `x`; zero outside the lattice.
    pub fn d_amp_down(&self, x: i64) -> Complex<T> {
        self.base
            .index_of(x)
            .map_or(Complex::new(T::zero(), T::zero()), |i| self.d_down[i])
    }

    /// `<psi | dpsi>`.
    pub fn overlap(&self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (a, da) in self.base.up_amplitudes().iter().zip(&self.d_up) {
            acc = acc + a.conj() * da;
        }
        for (b, db) in self.base.down_amplitudes().iter().zip(&self.d_down) {
            acc = acc + b.conj() * db;
        }
        acc
    }

    /// `<dpsi | dpsi>`.
    pub fn derivative_norm_sqr(&self) -> T {
        self.d_up
            .iter()
            .chain(self.d_down.iter())
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Sitewise derivative of the position distribution,
    /// `dP(x) = 2 Re[conj(A) dA + conj(B) dB]`. Sums to zero.
    pub fn probability_derivative(&self) -> Vec<T> {
        let two = T::from_f64(2.0);
        self.base
            .up_amplitudes()
            .iter()
            .zip(&self.d_up)
            .zip(self.base.down_amplitudes().iter().zip(&self.d_down))
            .map(|((a, da), (b, db))| two * ((a.conj() * da).re + (b.conj() * db).re))
            .collect()
    }

    /// Checks base normalization and `Re <psi|dpsi> = 0` (within `1e-9`).
    pub fn validate(&self) -> Result<()> {
        let norm_sqr = self.base.norm_sqr();
        if (norm_sqr - T::one()).abs() > T::spec_tol(1e-12) {
            return Err(Error::UnnormalizedState {
                norm_sqr: norm_sqr.to_f64().unwrap_or(f64::NAN),
            });
        }
        let re = self.overlap().re;
        if re.abs() > T::spec_tol(1e-9) {
            return Err(Error::InvalidRecipe {
                reason: format!("Re<psi|dpsi> = {re:e} violates the differentiated normalization"),
            });
        }
        Ok(())
    }

    /// One standard step of both the base walk and the derivative field.
    pub fn step(&self, coin: &CoinSpec<T>, topology: &Topology) -> Result<TangentState<T>> {
        if self.tag != ParamTag::Theta {
            return Err(Error::ParameterTagMismatch {
                expected: ParamTag::Theta.name(),
                actual: self.tag.name(),
            });
        }
        self.step_raw(coin.theta(), topology, T::one())
    }

    /// One split step of both streams; the `dC` injection lands on the coin
    /// selected by the parameter tag.
    pub fn split_step(
        &self,
        spec: &SplitStepSpec<T>,
        topology: &Topology,
    ) -> Result<TangentState<T>> {
        if self.tag == ParamTag::Theta {
            return Err(Error::ParameterTagMismatch {
                expected: "theta1 or theta2",
                actual: self.tag.name(),
            });
        }
        self.split_step_raw(spec.theta1(), spec.theta2(), topology, T::one())
    }

    /// Standard step with the injected `(dC) psi` term scaled by
    /// `injection_scale`. Scale 1 is the true derivative; 0 propagates the
    /// incoming field untouched. Test hook for the linearity property.
    pub(crate) fn step_raw(
        &self,
        theta: T,
        topology: &Topology,
        injection_scale: T,
    ) -> Result<TangentState<T>> {
        let new_base = self.base.step_raw(theta, topology)?;
        let (mut dcu, mut dcd) = coin_rotate(&self.d_up, &self.d_down, theta);
        inject_dcoin(
            &mut dcu,
            &mut dcd,
            self.base.up_amplitudes(),
            self.base.down_amplitudes(),
            theta,
            injection_scale,
        );
        let (d_up, d_down) = shift_standard(&dcu, &dcd, topology.is_bounded());
        Ok(TangentState {
            base: new_base,
            d_up,
            d_down,
            tag: self.tag,
        })
    }

    pub(crate) fn split_step_raw(
        &self,
        theta1: T,
        theta2: T,
        topology: &Topology,
        injection_scale: T,
    ) -> Result<TangentState<T>> {
        // Base stream, kept at every stage because the injection needs the
        // amplitudes entering the differentiated coin.
        let new_base = self.base.split_step_raw(theta1, theta2, topology)?;

        let (bcu, bcd) = coin_rotate(
            self.base.up_amplitudes(),
            self.base.down_amplitudes(),
            theta1,
        );
        let (bsu, bsd) = shift_half_minus(&bcu, &bcd);

        // Derivative stream through the same four stages.
        let (mut dcu, mut dcd) = coin_rotate(&self.d_up, &self.d_down, theta1);
        if self.tag == ParamTag::Theta1 {
            inject_dcoin(
                &mut dcu,
                &mut dcd,
                self.base.up_amplitudes(),
                self.base.down_amplitudes(),
                theta1,
                injection_scale,
            );
        }
        let (dsu, dsd) = shift_half_minus(&dcu, &dcd);
        let (mut dcu2, mut dcd2) = coin_rotate(&dsu, &dsd, theta2);
        if self.tag == ParamTag::Theta2 {
            inject_dcoin(&mut dcu2, &mut dcd2, &bsu, &bsd, theta2, injection_scale);
        }
        let (d_up, d_down) = shift_half_plus(&dcu2, &dcd2);

        Ok(TangentState {
            base: new_base,
            d_up,
            d_down,
            tag: self.tag,
        })
    }
}

/// Adds `scale * dC(theta) (up, down)` into the accumulators:
/// `(-s u - i c d, -i c u - s d)` sitewise.
fn inject_dcoin<T: Scalar>(
    acc_up: &mut [Complex<T>],
    acc_down: &mut [Complex<T>],
    up: &[Complex<T>],
    down: &[Complex<T>],
    theta: T,
    scale: T,
) {
    let ms = -theta.sin() * scale;
    let mic = neg_i::<T>() * (theta.cos() * scale);
    for i in 0..up.len() {
        acc_up[i] = acc_up[i] + up[i] * ms + down[i] * mic;
        acc_down[i] = acc_down[i] + up[i] * mic + down[i] * ms;
    }
}

/// Kind of walk a simulation recipe runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WalkKind<T: Scalar> {
    Standard { theta: T },
    SplitStep { theta1: T, theta2: T },
}

/// A complete, repeatable description of one simulation: initial state,
/// lattice, walk kind, differentiated parameter, and step count.
///
/// Recipes are the unit both the estimation pipeline and the oracles work
/// with: the same recipe can be run as a plain walk, as a tangent
/// propagation, or re-run at a perturbed angle.
#[derive(Clone, Debug)]
pub struct SimRecipe<T: Scalar> {
    init: InitialSpin<T>,
    origin: i64,
    topology: Topology,
    kind: WalkKind<T>,
    tag: ParamTag,
    steps: usize,
}

impl<T: Scalar> SimRecipe<T> {
    /// Standard walk with coin angle `theta`, differentiating `theta`.
    pub fn standard(
        init: InitialSpin<T>,
        topology: Topology,
        theta: T,
        steps: usize,
    ) -> Result<Self> {
        CoinSpec::new(theta)?;
        Ok(Self {
            init,
            origin: 0,
            topology,
            kind: WalkKind::Standard { theta },
            tag: ParamTag::Theta,
            steps,
        })
    }

    /// Split-step walk, differentiating the coin selected by `tag`.
    pub fn split_step(
        init: InitialSpin<T>,
        topology: Topology,
        theta1: T,
        theta2: T,
        tag: ParamTag,
        steps: usize,
    ) -> Result<Self> {
        SplitStepSpec::new(theta1, theta2)?;
        if tag == ParamTag::Theta {
            return Err(Error::InvalidRecipe {
                reason: "split-step recipes differentiate theta1 or theta2".into(),
            });
        }
        if topology.is_bounded() {
            return Err(Error::SplitStepBounded);
        }
        Ok(Self {
            init,
            origin: 0,
            topology,
            kind: WalkKind::SplitStep { theta1, theta2 },
            tag,
            steps,
        })
    }

    pub fn with_origin(mut self, origin: i64) -> Result<Self> {
        if !self.topology.contains(origin) {
            return Err(Error::OriginOutsideLattice {
                origin,
                halfwidth: self.topology.halfwidth(),
            });
        }
        self.origin = origin;
        Ok(self)
    }

    pub fn init(&self) -> &InitialSpin<T> {
        &self.init
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn kind(&self) -> &WalkKind<T> {
        &self.kind
    }

    pub fn tag(&self) -> ParamTag {
        self.tag
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Value of the differentiated parameter.
    pub fn tagged_param(&self) -> T {
        match (self.kind, self.tag) {
            (WalkKind::Standard { theta }, _) => theta,
            (WalkKind::SplitStep { theta1, .. }, ParamTag::Theta1) => theta1,
            (WalkKind::SplitStep { theta2, .. }, ParamTag::Theta2) => theta2,
            // Constructors reject this combination.
            (WalkKind::SplitStep { .. }, ParamTag::Theta) => unreachable!(),
        }
    }

    fn with_tagged_param(&self, value: T) -> Self {
        let mut out = self.clone();
        out.kind = match (self.kind, self.tag) {
            (WalkKind::Standard { .. }, _) => WalkKind::Standard { theta: value },
            (WalkKind::SplitStep { theta2, .. }, ParamTag::Theta1) => WalkKind::SplitStep {
                theta1: value,
                theta2,
            },
            (WalkKind::SplitStep { theta1, .. }, ParamTag::Theta2) => WalkKind::SplitStep {
                theta1,
                theta2: value,
            },
            (WalkKind::SplitStep { .. }, ParamTag::Theta) => unreachable!(),
        };
        out
    }

    /// The walker at `t = 0`.
    pub fn initial_state(&self) -> Result<WalkState<T>> {
        WalkState::with_origin(&self.init, &self.topology, self.origin)
    }

    /// Advances a walk state by one step of this recipe's kind.
    pub fn advance(&self, state: &WalkState<T>) -> Result<WalkState<T>> {
        match self.kind {
            WalkKind::Standard { theta } => state.step_raw(theta, &self.topology),
            WalkKind::SplitStep { theta1, theta2 } => {
                state.split_step_raw(theta1, theta2, &self.topology)
            }
        }
    }

    /// Advances a tangent state by one step of this recipe's kind.
    pub fn advance_tangent(&self, ts: &TangentState<T>) -> Result<TangentState<T>> {
        match self.kind {
            WalkKind::Standard { theta } => ts.step_raw(theta, &self.topology, T::one()),
            WalkKind::SplitStep { theta1, theta2 } => {
                ts.split_step_raw(theta1, theta2, &self.topology, T::one())
            }
        }
    }

    /// Runs the base walk to `steps`.
    pub fn run_walk(&self) -> Result<WalkState<T>> {
        self.run_walk_at(self.tagged_param())
    }

    /// Runs the base walk with the tagged parameter replaced by `value`.
    /// No angle-range validation: the finite-difference oracle evaluates the
    /// coin just outside `[0, pi]`, where the rotation extends smoothly.
    pub(crate) fn run_walk_at(&self, value: T) -> Result<WalkState<T>> {
        let recipe = self.with_tagged_param(value);
        let mut state = recipe.initial_state()?;
        for _ in 0..recipe.steps {
            state = recipe.advance(&state)?;
        }
        Ok(state)
    }

    /// Runs the tangent propagation to `steps`.
    pub fn run_tangent(&self) -> Result<TangentState<T>> {
        let mut ts = TangentState::with_origin(&self.init, &self.topology, self.origin, self.tag)?;
        for _ in 0..self.steps {
            ts = self.advance_tangent(&ts)?;
        }
        Ok(ts)
    }
}

/// Central finite-difference check of the propagated derivative.
///
/// Runs the recipe's base walk at `theta +/- h`, forms
/// `(psi(theta+h) - psi(theta-h)) / 2h`, and returns the max-norm
/// discrepancy against the exactly propagated derivative field. `h` must lie
/// in `[1e-7, 1e-1]`; smaller steps lose the signal to cancellation.
pub fn fd_check<T: Scalar>(recipe: &SimRecipe<T>, h: T) -> Result<T> {
    let (h_min, h_max) = (1e-7, 1e-1);
    let hf = h.to_f64().unwrap_or(f64::NAN);
    if !(hf >= h_min && hf <= h_max) {
        return Err(Error::FdStepOutOfRange {
            h: hf,
            min: h_min,
            max: h_max,
        });
    }
    let theta = recipe.tagged_param();
    let tangent = recipe.run_tangent()?;
    let plus = recipe.run_walk_at(theta + h)?;
    let minus = recipe.run_walk_at(theta - h)?;
    let two_h = T::from_f64(2.0) * h;

    let mut worst = T::zero();
    for i in 0..plus.n_sites() {
        let fd_up = (plus.up_amplitudes()[i] - minus.up_amplitudes()[i]) / two_h;
        let fd_down = (plus.down_amplitudes()[i] - minus.down_amplitudes()[i]) / two_h;
        worst = worst.max((fd_up - tangent.d_up_amplitudes()[i]).norm());
        worst = worst.max((fd_down - tangent.d_down_amplitudes()[i]).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_c_close(actual: Complex64, expected: Complex64, tol: f64) {
        assert!(
            (actual - expected).norm() <= tol,
            "expected {expected}, got {actual}"
        );
    }

    fn plus_recipe(theta: f64, steps: usize, halfwidth: i64) -> SimRecipe<f64> {
        SimRecipe::standard(
            InitialSpin::plus(),
            Topology::unbounded(halfwidth).unwrap(),
            theta,
            steps,
        )
        .unwrap()
    }

    #[test]
    fn derivative_field_zero_at_t0() {
        let topo = Topology::unbounded(5).unwrap();
        let ts = TangentState::<f64>::new(&InitialSpin::plus(), &topo, ParamTag::Theta);
        assert!(ts.d_up_amplitudes().iter().all(|a| a.norm() == 0.0));
        assert!(ts.d_down_amplitudes().iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn first_step_injection_matches_hand_value() {
        // One application of the recursion with zero incoming derivative:
        // d_up(-1) = d_down(+1) = (-sin - i cos)/sqrt(2).
        let topo = Topology::unbounded(4).unwrap();
        for theta in [PI / 8.0, FRAC_PI_4, 1.0] {
            let coin = CoinSpec::new(theta).unwrap();
            let ts = TangentState::new(&InitialSpin::plus(), &topo, ParamTag::Theta)
                .step(&coin, &topo)
                .unwrap();
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let expected = c(-theta.sin(), -theta.cos()) * h;
            assert_c_close(ts.d_amp_up(-1), expected, 1e-15);
            assert_c_close(ts.d_amp_down(1), expected, 1e-15);
            assert_eq!(ts.d_amp_up(1), c(0.0, 0.0));
        }
    }

    #[test]
    fn global_phase_overlap_at_t1() {
        // |+> is a coin eigenvector, so at t = 1 the state is e^{-i theta}
        // times a theta-independent state: <psi|dpsi> = -i, <dpsi|dpsi> = 1.
        let topo = Topology::unbounded(4).unwrap();
        for theta in [0.3, FRAC_PI_4, 1.4] {
            let coin = CoinSpec::new(theta).unwrap();
            let ts = TangentState::new(&InitialSpin::plus(), &topo, ParamTag::Theta)
                .step(&coin, &topo)
                .unwrap();
            let ov = ts.overlap();
            assert_abs_diff_eq!(ov.re, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(ov.im, -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(ts.derivative_norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn overlap_stays_imaginary() {
        let recipe = plus_recipe(FRAC_PI_4, 50, 60);
        let ts = recipe.run_tangent().unwrap();
        assert!(ts.overlap().re.abs() < 1e-11);
        ts.validate().unwrap();
    }

    #[test]
    fn probability_derivative_is_traceless() {
        let recipe = plus_recipe(PI / 8.0, 40, 50);
        let ts = recipe.run_tangent().unwrap();
        let sum: f64 = ts.probability_derivative().iter().sum();
        assert_abs_diff_eq!(sum, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn tag_mismatch_is_rejected() {
        let topo = Topology::unbounded(4).unwrap();
        let coin = CoinSpec::new(0.5).unwrap();
        let spec = SplitStepSpec::new(0.5, 0.6).unwrap();
        let ts1 = TangentState::<f64>::new(&InitialSpin::plus(), &topo, ParamTag::Theta1);
        assert!(matches!(
            ts1.step(&coin, &topo),
            Err(Error::ParameterTagMismatch { .. })
        ));
        let ts = TangentState::<f64>::new(&InitialSpin::plus(), &topo, ParamTag::Theta);
        assert!(matches!(
            ts.split_step(&spec, &topo),
            Err(Error::ParameterTagMismatch { .. })
        ));
    }

    #[test]
    fn split_step_theta2_injection_at_identity_coin() {
        // With theta2 = 0 the injected term uses dC(0) = -i * offdiag(1, 1):
        // d_up(0) = -i b', d_down(0) = -i a' with (a', b') = C(theta1)(1, 0).
        let theta1 = PI / 5.0;
        let topo = Topology::unbounded(4).unwrap();
        let spec = SplitStepSpec::new(theta1, 0.0).unwrap();
        let ts = TangentState::new(&InitialSpin::up(), &topo, ParamTag::Theta2)
            .split_step(&spec, &topo)
            .unwrap();
        let a1 = c(theta1.cos(), 0.0);
        let b1 = c(0.0, -theta1.sin());
        assert_c_close(ts.d_amp_up(0), c(0.0, -1.0) * b1, 1e-15);
        assert_c_close(ts.d_amp_down(0), c(0.0, -1.0) * a1, 1e-15);
        assert_eq!(ts.d_amp_up(-1), c(0.0, 0.0));
        assert_eq!(ts.d_amp_down(1), c(0.0, 0.0));
    }

    #[test]
    fn fd_check_tight_at_t1() {
        let recipe = plus_recipe(FRAC_PI_4, 1, 4);
        let disc = fd_check(&recipe, 1e-5).unwrap();
        assert!(disc < 1e-9, "discrepancy {disc}");
    }

    #[test]
    fn fd_check_passes_at_theta_zero() {
        // The derivative is nonzero even though the coin is the identity at
        // theta = 0; the perturbed runs leave [0, pi] and must still work.
        let recipe = plus_recipe(0.0, 3, 6);
        let disc = fd_check(&recipe, 1e-5).unwrap();
        assert!(disc < 1e-8, "discrepancy {disc}");
        let ts = recipe.run_tangent().unwrap();
        assert!(ts.derivative_norm_sqr() > 0.1);
    }

    #[test]
    fn fd_check_rejects_bad_step() {
        let recipe = plus_recipe(FRAC_PI_4, 1, 4);
        assert!(matches!(
            fd_check(&recipe, 1e-9),
            Err(Error::FdStepOutOfRange { .. })
        ));
        assert!(matches!(
            fd_check(&recipe, 0.5),
            Err(Error::FdStepOutOfRange { .. })
        ));
    }

    #[test]
    fn fd_check_split_step_both_tags() {
        let topo = Topology::unbounded(25).unwrap();
        for tag in [ParamTag::Theta1, ParamTag::Theta2] {
            let recipe = SimRecipe::split_step(
                InitialSpin::plus(),
                topo,
                FRAC_PI_4,
                FRAC_PI_4,
                tag,
                20,
            )
            .unwrap();
            let disc = fd_check(&recipe, 1e-5).unwrap();
            assert!(disc < 1e-6, "tag {tag:?}: discrepancy {disc}");
        }
    }

    #[test]
    fn injection_is_linear_in_the_injected_term() {
        // Inject at one step with scale 0/1/2: the downstream difference of
        // scale-2 and scale-1 runs equals the pure propagated injection.
        let topo = Topology::unbounded(20).unwrap();
        let theta = 0.9;
        let base0 = TangentState::<f64>::new(&InitialSpin::plus(), &topo, ParamTag::Theta);
        let mut ts = base0;
        for _ in 0..5 {
            ts = ts.step_raw(theta, &topo, 1.0).unwrap();
        }
        let single = ts.step_raw(theta, &topo, 1.0).unwrap();
        let double = ts.step_raw(theta, &topo, 2.0).unwrap();
        // Propagate both five more steps with no further injection.
        let mut a = single.clone();
        let mut b = double.clone();
        let mut pure = TangentState {
            base: ts.base().clone(),
            d_up: vec![c(0.0, 0.0); ts.base().n_sites()],
            d_down: vec![c(0.0, 0.0); ts.base().n_sites()],
            tag: ParamTag::Theta,
        }
        .step_raw(theta, &topo, 1.0)
        .unwrap();
        for _ in 0..5 {
            a = a.step_raw(theta, &topo, 0.0).unwrap();
            b = b.step_raw(theta, &topo, 0.0).unwrap();
            pure = pure.step_raw(theta, &topo, 0.0).unwrap();
        }
        for x in -12..=12 {
            let diff_up = b.d_amp_up(x) - a.d_amp_up(x);
            let diff_down = b.d_amp_down(x) - a.d_amp_down(x);
            assert_c_close(diff_up, pure.d_amp_up(x), 1e-13);
            assert_c_close(diff_down, pure.d_amp_down(x), 1e-13);
        }
    }

    #[test]
    fn recipe_rejects_bad_combinations() {
        let bounded = Topology::bounded(5).unwrap();
        assert!(matches!(
            SimRecipe::split_step(
                InitialSpin::<f64>::plus(),
                bounded,
                0.3,
                0.4,
                ParamTag::Theta1,
                3
            ),
            Err(Error::SplitStepBounded)
        ));
        let topo = Topology::unbounded(5).unwrap();
        assert!(SimRecipe::split_step(
            InitialSpin::<f64>::plus(),
            topo,
            0.3,
            0.4,
            ParamTag::Theta,
            3
        )
        .is_err());
    }
}
