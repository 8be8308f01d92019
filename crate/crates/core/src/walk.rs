//! Walker states and one-step evolution for standard (bounded/unbounded) and
//! split-step discrete-time quantum walks.
//!
//! A walker lives on the integer lattice with a two-level coin. One standard
//! step applies the coin rotation
//!
//! ```text
//! C(theta) = | cos(theta)    -i sin(theta) |
//!            | -i sin(theta)  cos(theta)   |
//! ```
//!
//! to every site and then shifts the up component one site left and the down
//! component one site right. On a bounded lattice `[-a, a]` the shift reflects
//! with a spin flip: the up component at `-a` reappears as the down component
//! at `-a`, and the down component at `a` as the up component at `a`. A
//! split-step walk composes two coins with two half-shifts,
//! `S+ C(theta2) S- C(theta1)`, where `S-` moves only the up component left
//! and `S+` moves only the down component right.
//!
//! States are immutable values; every step returns a fresh state sized to the
//! lattice. Unbounded lattices are realized as a fixed array of `2L + 1` sites
//! which is exact as long as the light cone never touches the ends; stepping
//! past that capacity is an error rather than a silent truncation.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{neg_i, Scalar};

/// Normalized coin amplitudes `alpha |up> + beta |down>` of the initial state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialSpin<T: Scalar> {
    alpha: Complex<T>,
    beta: Complex<T>,
}

impl<T: Scalar> InitialSpin<T> {
    /// Requires `|alpha|^2 + |beta|^2 = 1` to within `1e-12` (f64 scale).
    pub fn new(alpha: Complex<T>, beta: Complex<T>) -> Result<Self> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sqr - T::one()).abs() > T::spec_tol(1e-12) {
            return Err(Error::UnnormalizedSpin {
                norm_sqr: norm_sqr.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { alpha, beta })
    }

    /// The balanced spin `(|up> + |down>)/sqrt(2)` used throughout the figures.
    pub fn plus() -> Self {
        let h = T::one() / T::SQRT_2();
        Self {
            alpha: Complex::new(h, T::zero()),
            beta: Complex::new(h, T::zero()),
        }
    }

    pub fn up() -> Self {
        Self {
            alpha: Complex::new(T::one(), T::zero()),
            beta: Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn down() -> Self {
        Self {
            alpha: Complex::new(T::zero(), T::zero()),
            beta: Complex::new(T::one(), T::zero()),
        }
    }

    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    pub fn beta(&self) -> Complex<T> {
        self.beta
    }
}

/// Single-parameter coin angle, restricted to `[0, pi]`.
///
/// The coin is pi-periodic up to a global sign, and every distribution-level
/// quantity mirrors about `pi/2`, so this interval covers all distinct walks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinSpec<T: Scalar> {
    theta: T,
}

impl<T: Scalar> CoinSpec<T> {
    pub fn new(theta: T) -> Result<Self> {
        check_angle("theta", theta)?;
        Ok(Self { theta })
    }

    pub fn theta(&self) -> T {
        self.theta
    }
}

/// Coin angles `(theta1, theta2)` of a split-step walk, each in `[0, pi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitStepSpec<T: Scalar> {
    theta1: T,
    theta2: T,
}

impl<T: Scalar> SplitStepSpec<T> {
    pub fn new(theta1: T, theta2: T) -> Result<Self> {
        check_angle("theta1", theta1)?;
        check_angle("theta2", theta2)?;
        Ok(Self { theta1, theta2 })
    }

    pub fn theta1(&self) -> T {
        self.theta1
    }

    pub fn theta2(&self) -> T {
        self.theta2
    }
}

fn check_angle<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if value < T::zero() || value > T::PI() || !value.is_finite() {
        return Err(Error::AngleOutOfRange {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Lattice geometry the walk runs on. Sites are integers in
/// `[-halfwidth, halfwidth]` either way; the variants differ in what happens
/// at the ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Effectively infinite line, stored as `2 * halfwidth + 1` sites. Exact
    /// while the light cone stays inside; see [`WalkState::step`].
    Unbounded { halfwidth: i64 },
    /// Interval `[-a, a]` with spin-flip reflection at both walls.
    Bounded { a: i64 },
}

impl Topology {
    pub fn unbounded(halfwidth: i64) -> Result<Self> {
        if halfwidth < 1 {
            return Err(Error::HalfwidthTooSmall {
                name: "halfwidth",
                value: halfwidth,
                min: 1,
            });
        }
        Ok(Topology::Unbounded { halfwidth })
    }

    pub fn bounded(a: i64) -> Result<Self> {
        if a < 1 {
            return Err(Error::HalfwidthTooSmall {
                name: "a",
                value: a,
                min: 1,
            });
        }
        Ok(Topology::Bounded { a })
    }

    pub fn halfwidth(&self) -> i64 {
        match *self {
            Topology::Unbounded { halfwidth } => halfwidth,
            Topology::Bounded { a } => a,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Topology::Bounded { .. })
    }

    pub fn n_sites(&self) -> usize {
        (2 * self.halfwidth() + 1) as usize
    }

    pub fn contains(&self, x: i64) -> bool {
        x.abs() <= self.halfwidth()
    }
}

/// Coin-resolved amplitude field of the walker at one time step.
///
/// `amp_up(x)` and `amp_down(x)` are the amplitudes of `|up>` and `|down>` at
/// site `x`; the state is always normalized, `sum |up|^2 + |down|^2 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState<T: Scalar> {
    t: usize,
    origin: i64,
    half: i64,
    up: Vec<Complex<T>>,
    down: Vec<Complex<T>>,
}

impl<T: Scalar> WalkState<T> {
    /// Walker localized at the origin with spin `init`, at `t = 0`.
    pub fn new(init: &InitialSpin<T>, topology: &Topology) -> Self {
        Self::with_origin(init, topology, 0).expect("origin 0 is always inside the lattice")
    }

    /// Walker localized at `origin` with spin `init`, at `t = 0`.
    ///
    /// Any lattice site is accepted, including the walls of a bounded
    /// lattice (the reflecting shift is well defined there).
    pub fn with_origin(init: &InitialSpin<T>, topology: &Topology, origin: i64) -> Result<Self> {
        let half = topology.halfwidth();
        if !topology.contains(origin) {
            return Err(Error::OriginOutsideLattice {
                origin,
                halfwidth: half,
            });
        }
        let n = topology.n_sites();
        let mut up = vec![Complex::new(T::zero(), T::zero()); n];
        let mut down = vec![Complex::new(T::zero(), T::zero()); n];
        let i = (origin + half) as usize;
        up[i] = init.alpha();
        down[i] = init.beta();
        Ok(Self {
            t: 0,
            origin,
            half,
            up,
            down,
        })
    }

    /// Builds a state from raw amplitude arrays, validating the lattice size
    /// and the normalization. This is the entry point for states that do not
    /// come out of the step operators (e.g. oracle comparisons).
    pub fn from_amplitudes(
        t: usize,
        origin: i64,
        topology: &Topology,
        up: Vec<Complex<T>>,
        down: Vec<Complex<T>>,
    ) -> Result<Self> {
        let n = topology.n_sites();
        if up.len() != n || down.len() != n {
            return Err(Error::AmplitudeLengthMismatch {
                len: up.len().min(down.len()),
                expected: n,
            });
        }
        if !topology.contains(origin) {
            return Err(Error::OriginOutsideLattice {
                origin,
                halfwidth: topology.halfwidth(),
            });
        }
        let state = Self {
            t,
            origin,
            half: topology.halfwidth(),
            up,
            down,
        };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - T::one()).abs() > T::spec_tol(1e-12) {
            return Err(Error::UnnormalizedState {
                norm_sqr: norm_sqr.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(state)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn halfwidth(&self) -> i64 {
        self.half
    }

    pub fn n_sites(&self) -> usize {
        self.up.len()
    }

    /// Lattice sites in ascending order.
    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        (-self.half..=self.half).into_iter()
    }

    #[inline]
    pub(crate) fn index_of(&self, x: i64) -> Option<usize> {
        if x.abs() <= self.half {
            Some((x + self.half) as usize)
        } else {
            None
        }
    }

    /// Amplitude of the up component at site `x`; zero outside the lattice.
    pub fn amp_up(&self, x: i64) -> Complex<T> {
        self.index_of(x)
            .map_or(Complex::new(T::zero(), T::zero()), |i| self.up[i])
    }

    /// Amplitude of the down component at site `x`; zero outside the lattice.
    pub fn amp_down(&self, x: i64) -> Complex<T> {
        self.index_of(x)
            .map_or(Complex::new(T::zero(), T::zero()), |i| self.down[i])
    }

    pub fn up_amplitudes(&self) -> &[Complex<T>] {
        &self.up
    }

    pub fn down_amplitudes(&self) -> &[Complex<T>] {
        &self.down
    }

    pub fn norm_sqr(&self) -> T {
        self.up
            .iter()
            .chain(self.down.iter())
            .map(|a| a.norm_sqr())
            .sum()
    }

    fn check_topology(&self, topology: &Topology) -> Result<()> {
        if topology.halfwidth() != self.half {
            return Err(Error::LatticeMismatch {
                state: self.half,
                topology: topology.halfwidth(),
            });
        }
        Ok(())
    }

    /// Errors when one more step would push the light cone past the ends of
    /// an unbounded lattice (which would silently truncate amplitude).
    pub(crate) fn check_capacity(&self, topology: &Topology) -> Result<()> {
        if let Topology::Unbounded { halfwidth } = topology {
            let reach = self.t as i64 + 1 + self.origin.abs();
            if reach > *halfwidth {
                return Err(Error::CapacityExceeded {
                    t: self.t + 1,
                    origin: self.origin,
                    halfwidth: *halfwidth,
                });
            }
        }
        Ok(())
    }

    /// One standard step: coin rotation followed by the topology's shift.
    pub fn step(&self, coin: &CoinSpec<T>, topology: &Topology) -> Result<WalkState<T>> {
        self.step_raw(coin.theta(), topology)
    }

    /// Like [`WalkState::step`] but without the `[0, pi]` angle validation.
    /// The rotation formula extends smoothly to any angle; the
    /// finite-difference oracle needs evaluations just outside the range.
    pub(crate) fn step_raw(&self, theta: T, topology: &Topology) -> Result<WalkState<T>> {
        self.check_topology(topology)?;
        self.check_capacity(topology)?;
        let (cu, cd) = coin_rotate(&self.up, &self.down, theta);
        let (up, down) = shift_standard(&cu, &cd, topology.is_bounded());
        Ok(WalkState {
            t: self.t + 1,
            origin: self.origin,
            half: self.half,
            up,
            down,
        })
    }

    /// One full split step `S+ C(theta2) S- C(theta1)`.
    ///
    /// Only unbounded lattices are supported: the reflecting wall rule is
    /// defined for the full shift, not for the half-shifts.
    pub fn split_step(&self, spec: &SplitStepSpec<T>, topology: &Topology) -> Result<WalkState<T>> {
        self.split_step_raw(spec.theta1(), spec.theta2(), topology)
    }

    pub(crate) fn split_step_raw(
        &self,
        theta1: T,
        theta2: T,
        topology: &Topology,
    ) -> Result<WalkState<T>> {
        self.check_topology(topology)?;
        if topology.is_bounded() {
            return Err(Error::SplitStepBounded);
        }
        self.check_capacity(topology)?;
        let (cu, cd) = coin_rotate(&self.up, &self.down, theta1);
        let (su, sd) = shift_half_minus(&cu, &cd);
        let (cu2, cd2) = coin_rotate(&su, &sd, theta2);
        let (up, down) = shift_half_plus(&cu2, &cd2);
        Ok(WalkState {
            t: self.t + 1,
            origin: self.origin,
            half: self.half,
            up,
            down,
        })
    }

    /// Position distribution `P(x) = |up(x)|^2 + |down(x)|^2`.
    pub fn position_distribution(&self) -> PositionDistribution<T> {
        let probs = self
            .up
            .iter()
            .zip(self.down.iter())
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect();
        PositionDistribution {
            t: self.t,
            half: self.half,
            probs,
        }
    }
}

/// Applies the coin rotation sitewise: `(u, d) -> (c u - i s d, -i s u + c d)`.
pub(crate) fn coin_rotate<T: Scalar>(
    up: &[Complex<T>],
    down: &[Complex<T>],
    theta: T,
) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
    let c = theta.cos();
    let mis = neg_i::<T>() * theta.sin(); // -i sin(theta)
    let cu = up
        .iter()
        .zip(down.iter())
        .map(|(u, d)| u * c + d * mis)
        .collect();
    let cd = up
        .iter()
        .zip(down.iter())
        .map(|(u, d)| u * mis + d * c)
        .collect();
    (cu, cd)
}

/// Full shift: up moves one site left, down one site right. With `bounded`,
/// the walls reflect with a spin flip instead of dropping amplitude.
pub(crate) fn shift_standard<T: Scalar>(
    cu: &[Complex<T>],
    cd: &[Complex<T>],
    bounded: bool,
) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
    let n = cu.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut up = vec![zero; n];
    let mut down = vec![zero; n];
    for i in 0..n - 1 {
        up[i] = cu[i + 1];
    }
    for i in 1..n {
        down[i] = cd[i - 1];
    }
    if bounded {
        up[n - 1] = cd[n - 1];
        down[0] = cu[0];
    }
    (up, down)
}

/// Half shift `S-`: up moves one site left, down stays.
pub(crate) fn shift_half_minus<T: Scalar>(
    cu: &[Complex<T>],
    cd: &[Complex<T>],
) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
    let n = cu.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut up = vec![zero; n];
    for i in 0..n - 1 {
        up[i] = cu[i + 1];
    }
    (up, cd.to_vec())
}

/// Half shift `S+`: down moves one site right, up stays.
pub(crate) fn shift_half_plus<T: Scalar>(
    cu: &[Complex<T>],
    cd: &[Complex<T>],
) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
    let n = cd.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut down = vec![zero; n];
    for i in 1..n {
        down[i] = cd[i - 1];
    }
    (cu.to_vec(), down)
}

/// Position distribution of a walk state at one time step.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionDistribution<T: Scalar> {
    t: usize,
    half: i64,
    probs: Vec<T>,
}

impl<T: Scalar> PositionDistribution<T> {
    /// Validated constructor for distributions built outside a walk state.
    pub fn from_probs(t: usize, topology: &Topology, probs: Vec<T>) -> Result<Self> {
        if probs.len() != topology.n_sites() {
            return Err(Error::AmplitudeLengthMismatch {
                len: probs.len(),
                expected: topology.n_sites(),
            });
        }
        let dist = Self {
            t,
            half: topology.halfwidth(),
            probs,
        };
        dist.validate()?;
        Ok(dist)
    }

    /// Checks non-negativity and normalization to within `1e-10` (f64 scale).
    pub fn validate(&self) -> Result<()> {
        for (x, &p) in self.site_probs() {
            if p < -T::spec_tol(1e-12) {
                return Err(Error::NegativeProbability {
                    site: x,
                    p: p.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let sum = self.sum();
        if (sum - T::one()).abs() > T::spec_tol(1e-10) {
            return Err(Error::UnnormalizedState {
                norm_sqr: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn halfwidth(&self) -> i64 {
        self.half
    }

    pub fn n_sites(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    /// Probability at site `x`; zero outside the lattice.
    pub fn prob(&self, x: i64) -> T {
        if x.abs() <= self.half {
            self.probs[(x + self.half) as usize]
        } else {
            T::zero()
        }
    }

    /// `(site, probability)` pairs in ascending site order.
    pub fn site_probs(&self) -> impl Iterator<Item = (i64, &T)> + '_ {
        (-self.half..=self.half).zip(self.probs.iter())
    }

    pub fn sum(&self) -> T {
        self.probs.iter().copied().sum()
    }

    pub fn mean(&self) -> T {
        self.site_probs()
            .map(|(x, &p)| T::from_i64(x) * p)
            .sum()
    }

    /// Standard deviation in lattice-site units,
    /// `sigma = sqrt(sum x^2 P - (sum x P)^2)`.
    pub fn std_dev(&self) -> T {
        let mean = self.mean();
        let second: T = self
            .site_probs()
            .map(|(x, &p)| {
                let xf = T::from_i64(x);
                xf * xf * p
            })
            .sum();
        (second - mean * mean).max(T::zero()).sqrt()
    }

    /// Number of sites carrying more than `threshold` probability.
    pub fn support_width(&self, threshold: T) -> usize {
        self.probs.iter().filter(|&&p| p > threshold).count()
    }
}
