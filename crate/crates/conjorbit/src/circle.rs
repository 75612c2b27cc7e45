//! Multiplication operators on the circle and their conjugate-orbit
//! membership.
//!
//! The coordinate multiplication `M f(θ) = e^{iθ}·f(θ)` on the sampled
//! circle plays the role of the bilateral shift in function form.  A
//! conjugation of the form `C f = √h · conj(f ∘ α)` — with `α` an angle
//! involution preserving the measure class and `h` the pushforward density
//! of Lebesgue measure under `α` — produces the orbit member
//! `C M C = multiplication by e^{−iα(θ)}`.  A candidate unimodular symbol
//! `φ` is an orbit member of `M` exactly when its angle action `α` (with
//! `φ = e^{−iα}` pointwise) satisfies
//!
//! (a) `α ∘ α = id` (sampled sup, 1e-6),
//! (b) the pushforward density `h` exists, is positive and has unit mass,
//! (c) `h · (h ∘ α) = 1` (sampled sup at the decision tolerance).
//!
//! Before (a)–(c) a *prescan* rejects symbols whose value map cannot carry
//! Lebesgue measure class at all: the sampled image must cover the circle
//! (finitely many atoms like a ±1-valued symbol fail here) and must not pile
//! unbounded mass onto small sets (excess-mass injectivity check).

use crate::error::{Error, Result};
use crate::numerics::{CVector, Complex64};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const PI: f64 = std::f64::consts::PI;

/// Oversampling factor of the density/prescan grids.
const OVERSAMPLE: usize = 64;
/// Half-width (in grid samples) of the collar left unassigned around piece
/// boundaries and their images.
const COLLAR_SAMPLES: i64 = 4;
/// Range-coverage prescan: fraction of bins that must be hit…
const COVERAGE_MIN: f64 = 0.99;
/// …and the longest permitted run of uncovered bins, as a fraction of the grid.
const COVERAGE_GAP_DIVISOR: usize = 256;
/// Injectivity prescan: cap on the excess-mass fraction (per-bucket counts
/// beyond 2 on the base grid).
const EXCESS_MASS_MAX: f64 = 0.10;

/// Map an angle to the fundamental window `[−π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TWO_PI) - PI;
    if y >= PI {
        -PI
    } else {
        y
    }
}

/// Signed circular difference `a − b`, wrapped to `[−π, π)`.
pub fn signed_angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

/// Grid point `θ_m = −π + 2πm/G`.
pub fn grid_theta(g: usize, m: usize) -> f64 {
    -PI + TWO_PI * m as f64 / g as f64
}

/// Piecewise-monotone angle map of the circle.
///
/// `piece_boundaries` splits `[−π, π)` into half-open pieces
/// `[b_i, b_{i+1})` (the first boundary must be `−π`); `forward` must be
/// continuous and monotone on each piece.  The derivative is optional: maps
/// carrying one get the analytic pushforward route, others the histogram
/// route.
pub struct CircleMap {
    forward: Box<dyn Fn(f64) -> f64>,
    derivative: Option<Box<dyn Fn(f64) -> f64>>,
    piece_boundaries: Vec<f64>,
}

impl std::fmt::Debug for CircleMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CircleMap")
            .field("piece_boundaries", &self.piece_boundaries)
            .field("has_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl CircleMap {
    pub fn new(
        forward: Box<dyn Fn(f64) -> f64>,
        derivative: Option<Box<dyn Fn(f64) -> f64>>,
        piece_boundaries: Vec<f64>,
    ) -> Result<CircleMap> {
        if piece_boundaries.is_empty() || piece_boundaries[0] != -PI {
            return Err(Error::Domain(
                "piece boundaries must start at −π and cover the circle".into(),
            ));
        }
        for w in piece_boundaries.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Domain(
                    "piece boundaries must be strictly increasing".into(),
                ));
            }
        }
        if *piece_boundaries.last().unwrap() >= PI {
            return Err(Error::Domain("piece boundaries must lie in [−π, π)".into()));
        }
        Ok(CircleMap {
            forward,
            derivative,
            piece_boundaries,
        })
    }

    /// Apply the map, wrapping both input and output to `[−π, π)`.
    pub fn apply(&self, theta: f64) -> f64 {
        wrap_angle((self.forward)(wrap_angle(theta)))
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn derivative_at(&self, theta: f64) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(wrap_angle(theta)))
    }

    /// The half-open pieces `[a, b)` covering `[−π, π)`.
    pub fn pieces(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.piece_boundaries.len());
        for (i, &a) in self.piece_boundaries.iter().enumerate() {
            let b = self
                .piece_boundaries
                .get(i + 1)
                .copied()
                .unwrap_or(PI);
            out.push((a, b));
        }
        out
    }

    /// The identity map.
    pub fn identity() -> CircleMap {
        CircleMap::new(Box::new(|t| t), Some(Box::new(|_| 1.0)), vec![-PI]).unwrap()
    }

    /// Reflection about the axis at angle `a`: `θ ↦ 2a − θ`.
    pub fn reflection(axis: f64) -> CircleMap {
        CircleMap::new(
            Box::new(move |t| 2.0 * axis - t),
            Some(Box::new(|_| -1.0)),
            vec![-PI],
        )
        .unwrap()
    }

    /// The antipodal rotation `θ ↦ θ + π` (multiplication of the point
    /// by −1); an involution with derivative +1.
    pub fn negation() -> CircleMap {
        CircleMap::new(Box::new(|t| t + PI), Some(Box::new(|_| 1.0)), vec![-PI]).unwrap()
    }

    /// The quadratic flip pairing the half-circles: `θ ↦ −θ²/π` on
    /// `[0, π)` and `θ ↦ √(−πθ)` on `[−π, 0)`.  An involution that is only
    /// measure-*class* preserving; its pushforward density is `2θ/π` on the
    /// upper half and `√π/(2√(−θ))` on the lower half.
    pub fn quadratic_flip() -> CircleMap {
        let fwd = |t: f64| {
            if t >= 0.0 {
                -t * t / PI
            } else {
                (-PI * t).sqrt()
            }
        };
        let der = |t: f64| {
            if t >= 0.0 {
                -2.0 * t / PI
            } else {
                -0.5 * (PI / -t).sqrt()
            }
        };
        CircleMap::new(Box::new(fwd), Some(Box::new(der)), vec![-PI, 0.0]).unwrap()
    }

    /// Strictly increasing power reparametrization
    /// `θ ↦ −π + 2π·((θ+π)/2π)^p`; a bijection of the circle that is *not*
    /// an involution for `p ≠ 1`.
    pub fn power_increasing(p: f64) -> Result<CircleMap> {
        if !(p > 0.0) {
            return Err(Error::Domain(format!(
                "power_increasing: exponent must be positive, got {p}"
            )));
        }
        let fwd = move |t: f64| -PI + TWO_PI * ((t + PI) / TWO_PI).powf(p);
        let der = move |t: f64| p * ((t + PI) / TWO_PI).powf(p - 1.0);
        CircleMap::new(Box::new(fwd), Some(Box::new(der)), vec![-PI])
    }

    /// Angle action of the half-circle ±1 symbol: `θ ↦ 0` on the right
    /// half-circle, `θ ↦ −π` on the left.  Piecewise constant, so no
    /// derivative is attached.
    pub fn halfcircle_action() -> CircleMap {
        let fwd = |t: f64| {
            if t > -PI / 2.0 && t < PI / 2.0 {
                0.0
            } else {
                -PI
            }
        };
        CircleMap::new(Box::new(fwd), None, vec![-PI, -PI / 2.0, PI / 2.0]).unwrap()
    }
}

/// Function sampled on the uniform grid `θ_m = −π + 2πm/G`, `G` a power of
/// two.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    samples: CVector,
}

impl SampledFunction {
    pub fn new(samples: CVector) -> Result<SampledFunction> {
        let g = samples.len();
        if g < 2 || !g.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "sample count {g} must be a power of two (≥ 2)"
            )));
        }
        Ok(SampledFunction { samples })
    }

    pub fn from_fn(g: usize, mut f: impl FnMut(f64) -> Complex64) -> Result<SampledFunction> {
        if g < 2 || !g.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "grid size {g} must be a power of two (≥ 2)"
            )));
        }
        Ok(SampledFunction {
            samples: (0..g).map(|m| f(grid_theta(g, m))).collect(),
        })
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn get(&self, m: usize) -> Complex64 {
        self.samples[m]
    }

    /// Evaluate at an arbitrary angle by periodic linear interpolation
    /// between the two neighboring samples.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let g = self.grid_size();
        let pos = (wrap_angle(theta) + PI) / TWO_PI * g as f64;
        let m0 = pos.floor() as usize % g;
        let t = pos - pos.floor();
        let m1 = (m0 + 1) % g;
        self.samples[m0] * (1.0 - t) + self.samples[m1] * t
    }

    /// Normalized inner product `(1/G)·Σ conj(f_m)·g_m` (the sampled
    /// `∫ conj(f)·g dθ/2π`).
    pub fn inner(&self, other: &SampledFunction) -> Complex64 {
        assert_eq!(self.grid_size(), other.grid_size());
        let g = self.grid_size() as f64;
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            / g
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    pub fn max_abs_diff(&self, other: &SampledFunction) -> f64 {
        assert_eq!(self.grid_size(), other.grid_size());
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Unimodular (or ±1-valued) symbol on the circle.
pub struct CircleSymbol {
    value: Box<dyn Fn(f64) -> Complex64>,
}

impl std::fmt::Debug for CircleSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("CircleSymbol")
    }
}

impl CircleSymbol {
    pub fn new(value: Box<dyn Fn(f64) -> Complex64>) -> CircleSymbol {
        CircleSymbol { value }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        (self.value)(wrap_angle(theta))
    }

    pub fn sample(&self, g: usize) -> Result<SampledFunction> {
        SampledFunction::from_fn(g, |t| self.eval(t))
    }

    /// The symbol `e^{−i·a(θ)}` realized from an explicit angle function.
    pub fn from_angle_fn(a: impl Fn(f64) -> f64 + 'static) -> CircleSymbol {
        CircleSymbol::new(Box::new(move |t| Complex64::from_polar(1.0, -a(t))))
    }

    /// The conjugate coordinate `ζ̄ = e^{−iθ}` (the adjoint's symbol).
    pub fn adjoint_coordinate() -> CircleSymbol {
        CircleSymbol::new(Box::new(|t| Complex64::from_polar(1.0, -t)))
    }

    /// The ±1 half-circle symbol: +1 on the right half-circle, −1 on the
    /// left (matching [`CircleMap::halfcircle_action`] pointwise).
    pub fn halfcircle() -> CircleSymbol {
        CircleSymbol::new(Box::new(|t| {
            if t > -PI / 2.0 && t < PI / 2.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        }))
    }

    /// Constant symbol +1.
    pub fn one() -> CircleSymbol {
        CircleSymbol::new(Box::new(|_| Complex64::new(1.0, 0.0)))
    }
}

/// Sup of the circular distance between `α(α(θ_m))` and `θ_m` over the grid.
pub fn involution_residual(alpha: &CircleMap, g: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for m in 0..g {
        let t = grid_theta(g, m);
        let d = signed_angle_diff(alpha.apply(alpha.apply(t)), t).abs();
        worst = worst.max(d);
    }
    worst
}

/// `true` when `α ∘ α = id` within `tol` (sup over the grid).
pub fn involution_check(alpha: &CircleMap, g: usize, tol: f64) -> bool {
    involution_residual(alpha, g) <= tol
}

/// Pushforward density of normalized Lebesgue measure under an angle map,
/// sampled on the grid.
///
/// Around each piece boundary and each boundary image a 4-sample collar is
/// flagged: values there come from the raw estimator and are not trusted
/// (densities may jump or blow up across those points).  `integral` is the
/// mass-corrected total: trapezoid of the off-collar values plus the exact
/// histogram mass inside the collar, so inverse-square-root boundary
/// singularities do not corrupt the unit-mass check.
#[derive(Debug, Clone)]
pub struct DensityEstimate {
    pub values: Vec<f64>,
    pub collar: Vec<bool>,
    pub integral: f64,
    pub from_derivative: bool,
}

impl DensityEstimate {
    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    /// Linearly interpolated density at an arbitrary angle; `None` when the
    /// interpolation bracket touches the collar.
    pub fn value_at(&self, theta: f64) -> Option<f64> {
        let g = self.grid_size();
        let pos = (wrap_angle(theta) + PI) / TWO_PI * g as f64;
        let m0 = pos.floor() as usize % g;
        let m1 = (m0 + 1) % g;
        if self.collar[m0] || self.collar[m1] {
            return None;
        }
        let t = pos - pos.floor();
        Some(self.values[m0] * (1.0 - t) + self.values[m1] * t)
    }

    /// Smallest off-collar density value.
    pub fn min_off_collar(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.collar)
            .filter(|(_, &c)| !c)
            .map(|(&v, _)| v)
            .fold(f64::INFINITY, f64::min)
    }
}

fn validate_grid(g: usize) -> Result<()> {
    if g < 4 || !g.is_power_of_two() {
        return Err(Error::Dimension(format!(
            "grid size {g} must be a power of two (≥ 4)"
        )));
    }
    Ok(())
}

/// Histogram of 64×-oversampled image values, as per-bin counts.
fn image_histogram(alpha: &CircleMap, g: usize) -> Vec<usize> {
    let s_total = OVERSAMPLE * g;
    let mut counts = vec![0usize; g];
    for s in 0..s_total {
        let theta = -PI + TWO_PI * (s as f64 + 0.5) / s_total as f64;
        let v = alpha.apply(theta);
        let bin = (((v + PI) / TWO_PI * g as f64).floor() as usize).min(g - 1);
        counts[bin] += 1;
    }
    counts
}

fn collar_mask(alpha: &CircleMap, g: usize) -> Vec<bool> {
    let eps = TWO_PI / (OVERSAMPLE * g) as f64 * 0.25;
    let mut special = Vec::new();
    for (a, b) in alpha.pieces() {
        special.push(a);
        special.push(alpha.apply(a + eps));
        special.push(alpha.apply(b - eps));
    }
    let mut mask = vec![false; g];
    for point in special {
        let center = (wrap_angle(point) + PI) / TWO_PI * g as f64;
        let c = center.round() as i64;
        for d in -COLLAR_SAMPLES..=COLLAR_SAMPLES {
            let idx = (c + d).rem_euclid(g as i64) as usize;
            mask[idx] = true;
        }
    }
    mask
}

/// Compute the pushforward density of normalized Lebesgue measure under
/// `α` on a `G`-point grid.
///
/// With a derivative available the analytic route is used: `α` is tabulated
/// 64×-oversampled per monotone piece, each grid value `v` is located in the
/// lifted (unwrapped) tabulation by binary search, and every preimage
/// contributes `1/|α′(θ*)|`.  A derivative sign change inside a piece is a
/// domain error.  Without a derivative, the normalized histogram of image
/// values (count/64 per bin) is returned.
pub fn pushforward_density(alpha: &CircleMap, g: usize) -> Result<DensityEstimate> {
    validate_grid(g)?;
    let collar = collar_mask(alpha, g);
    let counts = image_histogram(alpha, g);
    let from_derivative = alpha.has_derivative();

    let values = if from_derivative {
        let targets: Vec<f64> = (0..g).map(|m| grid_theta(g, m)).collect();
        analytic_density_at(alpha, g, &targets)?
    } else {
        counts
            .iter()
            .map(|&c| c as f64 / OVERSAMPLE as f64)
            .collect::<Vec<f64>>()
    };

    // Mass bookkeeping: off-collar trapezoid (grid mean) plus exact
    // histogram mass of the collar region.
    let s_total = (OVERSAMPLE * g) as f64;
    let mut integral = 0.0;
    for m in 0..g {
        if collar[m] {
            integral += counts[m] as f64 / s_total;
        } else {
            integral += values[m] / g as f64;
        }
    }

    Ok(DensityEstimate {
        values,
        collar,
        integral,
        from_derivative,
    })
}

/// Analytic pushforward density of a derivative-backed map at arbitrary
/// target angles: tabulated monotone inverse with `1/|α′|` weights.  `g`
/// fixes the oversampling resolution.  Use this instead of interpolating
/// [`DensityEstimate::value_at`] when evaluating at off-grid points (such
/// as image points `α(θ_m)` of a conjugation route): linear interpolation
/// near a boundary-singular density costs ~1e-3 at `g = 2^14`, analytic
/// evaluation ~1e-6.  Requires `alpha.has_derivative()`.
pub fn analytic_density_at(alpha: &CircleMap, g: usize, targets: &[f64]) -> Result<Vec<f64>> {
    if !alpha.has_derivative() {
        return Err(Error::Unsupported(
            "analytic_density_at requires a derivative-backed map".into(),
        ));
    }
    let mut h = vec![0.0; targets.len()];
    for (pa, pb) in alpha.pieces() {
        let span = pb - pa;
        let samples = ((OVERSAMPLE * g) as f64 * span / TWO_PI).ceil() as usize;
        let samples = samples.max(8);
        let step = span / samples as f64;
        let thetas: Vec<f64> = (0..samples)
            .map(|s| pa + (s as f64 + 0.5) * step)
            .collect();
        let wrapped: Vec<f64> = thetas.iter().map(|&t| alpha.apply(t)).collect();

        // Unwrap the piece image into a continuous lift.
        let mut lift = Vec::with_capacity(samples);
        lift.push(wrapped[0]);
        for s in 1..samples {
            let prev = lift[s - 1];
            lift.push(prev + signed_angle_diff(wrapped[s], wrapped[s - 1]));
        }
        let mut pos = 0usize;
        let mut neg = 0usize;
        for w in lift.windows(2) {
            let d = w[1] - w[0];
            if d > 0.0 {
                pos += 1;
            } else if d < 0.0 {
                neg += 1;
            }
        }
        if pos > 0 && neg > 0 {
            return Err(Error::Domain(format!(
                "non-invertible piece [{pa:.6}, {pb:.6}): derivative changes sign"
            )));
        }
        if pos == 0 && neg == 0 {
            return Err(Error::Domain(format!(
                "non-invertible piece [{pa:.6}, {pb:.6}): locally constant"
            )));
        }
        let increasing = pos > 0;
        // Normalize to an increasing tabulation for the binary search.
        let key = |s: usize| if increasing { lift[s] } else { -lift[s] };
        let lo = key(0);
        let hi = key(samples - 1);

        for (m, &target) in targets.iter().enumerate() {
            let v0 = wrap_angle(target);
            // All lifts v0 + 2πk that can fall inside the tabulated range.
            let kmin = ((lo - v0) / TWO_PI).floor() as i64 - 1;
            let kmax = ((hi - v0) / TWO_PI).ceil() as i64 + 1;
            for k in kmin..=kmax {
                let v = if increasing {
                    v0 + TWO_PI * k as f64
                } else {
                    -(v0 + TWO_PI * k as f64)
                };
                if v < lo || v > hi {
                    continue;
                }
                // Binary search for the bracketing tabulated pair.
                let (mut a, mut b) = (0usize, samples - 1);
                while b - a > 1 {
                    let mid = (a + b) / 2;
                    if key(mid) <= v {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                let ka = key(a);
                let kb = key(b);
                let t = if kb > ka { (v - ka) / (kb - ka) } else { 0.5 };
                let theta_star = thetas[a] + t * (thetas[b] - thetas[a]);
                let d = alpha
                    .derivative_at(theta_star)
                    .expect("analytic route requires derivative");
                if d.abs() < 1e-12 {
                    return Err(Error::Domain(format!(
                        "non-invertible piece [{pa:.6}, {pb:.6}): derivative ~0 at {theta_star:.6}"
                    )));
                }
                h[m] += 1.0 / d.abs();
            }
        }
    }
    Ok(h)
}

/// Full decision record for multiplication-symbol orbit membership.
///
/// Condition fields are `None` when the prescan already rejected the symbol
/// (the density machinery is then never consulted).
#[derive(Debug, Clone)]
pub struct MultOrbitDecision {
    pub member: bool,
    /// Sampled-image coverage fraction of the circle.
    pub range_coverage: f64,
    /// Longest run of uncovered bins.
    pub range_max_gap: usize,
    pub prescan_range_ok: bool,
    /// Excess-mass fraction (per-bucket base-grid counts beyond 2).
    pub injectivity_excess: f64,
    pub prescan_injectivity_ok: bool,
    /// Sup grid mismatch between the symbol and `e^{−iα}`.
    pub symbol_consistency: f64,
    pub involution_residual: Option<f64>,
    pub condition_a: Option<bool>,
    pub density_min: Option<f64>,
    pub density_integral: Option<f64>,
    pub condition_b: Option<bool>,
    pub pairing_residual: Option<f64>,
    pub condition_c: Option<bool>,
}

/// Decide whether multiplication by the unimodular symbol `φ` is a member
/// of the conjugate orbit of the coordinate multiplication.
///
/// `alpha` must implement the angle action of `conj(φ)`: the grid sup of
/// `|φ(θ) − e^{−iα(θ)}|` over 1e-9 is a domain error.  `tol` is the
/// tolerance of the density pairing condition (c); condition (a) is checked
/// at 1e-6 and condition (b) at min ≥ 1e-6, mass within 1e-3, as fixed by
/// the theory's numerical contract.
///
/// Angle maps without a derivative fall back to histogram densities, whose
/// ~2% bin noise makes a sharp condition (c) unattainable; attach a
/// derivative whenever a positive decision is expected.
pub fn mult_orbit_decision(
    phi: &CircleSymbol,
    alpha: &CircleMap,
    g: usize,
    tol: f64,
) -> Result<MultOrbitDecision> {
    validate_grid(g)?;
    let mut consistency: f64 = 0.0;
    for m in 0..g {
        let t = grid_theta(g, m);
        let d = (phi.eval(t) - Complex64::from_polar(1.0, -alpha.apply(t))).norm();
        consistency = consistency.max(d);
    }
    if consistency > 1e-9 {
        return Err(Error::Domain(format!(
            "angle map does not implement the symbol: grid mismatch {consistency:.3e} > 1e-9"
        )));
    }

    // --- Prescan: range coverage of the oversampled image. ---
    let counts = image_histogram(alpha, g);
    let covered = counts.iter().filter(|&&c| c > 0).count();
    let range_coverage = covered as f64 / g as f64;
    // Longest circular run of empty bins.
    let mut max_gap = 0usize;
    let mut run = 0usize;
    for m in 0..2 * g {
        if counts[m % g] == 0 {
            run += 1;
            if m >= g && run >= g {
                break; // fully empty; run == g
            }
            max_gap = max_gap.max(run.min(g));
        } else {
            run = 0;
        }
    }
    let prescan_range_ok = range_coverage >= COVERAGE_MIN && max_gap <= g / COVERAGE_GAP_DIVISOR;

    // --- Prescan: injectivity via excess mass on the base grid. ---
    let mut base_counts = vec![0usize; g];
    for m in 0..g {
        let v = alpha.apply(grid_theta(g, m));
        let bin = (((v + PI) / TWO_PI * g as f64).floor() as usize).min(g - 1);
        base_counts[bin] += 1;
    }
    let excess: usize = base_counts.iter().map(|&c| c.saturating_sub(2)).sum();
    let injectivity_excess = excess as f64 / g as f64;
    let prescan_injectivity_ok = injectivity_excess <= EXCESS_MASS_MAX;

    if !prescan_range_ok || !prescan_injectivity_ok {
        return Ok(MultOrbitDecision {
            member: false,
            range_coverage,
            range_max_gap: max_gap,
            prescan_range_ok,
            injectivity_excess,
            prescan_injectivity_ok,
            symbol_consistency: consistency,
            involution_residual: None,
            condition_a: None,
            density_min: None,
            density_integral: None,
            condition_b: None,
            pairing_residual: None,
            condition_c: None,
        });
    }

    // --- Condition (a): α an involution. ---
    let inv_resid = involution_residual(alpha, g);
    let cond_a = inv_resid <= 1e-6;

    // --- Condition (b): density positive with unit mass. ---
    let density = pushforward_density(alpha, g)?;
    let dmin = density.min_off_collar();
    let dint = density.integral;
    let cond_b = dmin >= 1e-6 && (dint - 1.0).abs() <= 1e-3;

    // --- Condition (c): h·(h∘α) = 1 off the collar. ---
    // With a derivative the density is evaluated analytically at the exact
    // image points `α(θ_m)` — linear interpolation of a boundary-singular
    // density would otherwise dominate the residual.  Image points whose
    // bin lies in the collar are skipped either way (the tabulated inverse
    // is unreliable within half an oversample of a piece-image edge).
    let images: Vec<f64> = (0..g).map(|m| alpha.apply(grid_theta(g, m))).collect();
    let h_at_image: Vec<Option<f64>> = if density.from_derivative {
        analytic_density_at(alpha, g, &images)?
            .into_iter()
            .zip(&images)
            .map(|(hv, &v)| {
                let bin = (((v + PI) / TWO_PI * g as f64).floor() as usize).min(g - 1);
                if density.collar[bin] {
                    None
                } else {
                    Some(hv)
                }
            })
            .collect()
    } else {
        images.iter().map(|&v| density.value_at(v)).collect()
    };
    let mut pairing: f64 = 0.0;
    for m in 0..g {
        if density.collar[m] {
            continue;
        }
        if let Some(ha) = h_at_image[m] {
            pairing = pairing.max((density.values[m] * ha - 1.0).abs());
        }
    }
    let cond_c = pairing <= tol;

    Ok(MultOrbitDecision {
        member: cond_a && cond_b && cond_c,
        range_coverage,
        range_max_gap: max_gap,
        prescan_range_ok,
        injectivity_excess,
        prescan_injectivity_ok,
        symbol_consistency: consistency,
        involution_residual: Some(inv_resid),
        condition_a: Some(cond_a),
        density_min: Some(dmin),
        density_integral: Some(dint),
        condition_b: Some(cond_b),
        pairing_residual: Some(pairing),
        condition_c: Some(cond_c),
    })
}

/// Apply the conjugation `C f = √h · conj(f ∘ α)` on the grid.
///
/// Negative density samples below −1e-12 are a domain error; tiny negatives
/// from roundoff are clamped to zero.
pub fn symbol_conjugation_apply(
    density: &DensityEstimate,
    alpha: &CircleMap,
    f: &SampledFunction,
) -> Result<SampledFunction> {
    let g = f.grid_size();
    if density.grid_size() != g {
        return Err(Error::Dimension(format!(
            "density grid {} vs function grid {g}",
            density.grid_size()
        )));
    }
    let mut out = Vec::with_capacity(g);
    for m in 0..g {
        let hm = density.values[m];
        if hm < -1e-12 {
            return Err(Error::Domain(format!(
                "negative density {hm:.3e} at sample {m}"
            )));
        }
        let w = hm.max(0.0).sqrt();
        let val = f.eval(alpha.apply(grid_theta(g, m))).conj() * w;
        out.push(val);
    }
    SampledFunction::new(out)
}

/// Orbit member of the coordinate multiplication under the conjugation
/// `C f = s·conj(f)∘α + i·t·β·conj(f)` (measure-preserving involution `α`,
/// ±1-valued `β` symmetric under `α`, `s² + t² = 1`):
///
/// `C M C f = (s²·e^{−iα} + t²·e^{−iθ})·f + i·s·t·β·(e^{−iθ} − e^{−iα})·(f∘α)`.
///
/// Validations: `|s² + t² − 1| ≤ 1e-12`; `α∘α = id` within 1e-6;
/// `|α′| = 1` up to 1e-6 (sampled pushforward density); `β` valued in {±1}
/// within 1e-9 on the grid; `β∘α = β` within 1e-9.
pub fn alpha_beta_member(
    alpha: &CircleMap,
    beta: &CircleSymbol,
    s: f64,
    t: f64,
    f: &SampledFunction,
) -> Result<SampledFunction> {
    let g = f.grid_size();
    validate_grid(g)?;
    let norm_dev = (s * s + t * t - 1.0).abs();
    if norm_dev > 1e-12 {
        return Err(Error::validation("s² + t² = 1", norm_dev, 1e-12));
    }
    let inv = involution_residual(alpha, g);
    if inv > 1e-6 {
        return Err(Error::validation("α involution", inv, 1e-6));
    }
    let density = pushforward_density(alpha, g)?;
    let mut measure_dev: f64 = 0.0;
    for m in 0..g {
        if !density.collar[m] {
            measure_dev = measure_dev.max((density.values[m] - 1.0).abs());
        }
    }
    if measure_dev > 1e-6 {
        return Err(Error::validation(
            "α measure preservation (h ≡ 1)",
            measure_dev,
            1e-6,
        ));
    }
    let mut beta_dev: f64 = 0.0;
    let mut beta_sym: f64 = 0.0;
    for m in 0..g {
        let th = grid_theta(g, m);
        let b = beta.eval(th);
        beta_dev = beta_dev.max(b.im.abs()).max((b.re.abs() - 1.0).abs());
        beta_sym = beta_sym.max((beta.eval(alpha.apply(th)) - b).norm());
    }
    if beta_dev > 1e-9 {
        return Err(Error::validation("β valued in {±1}", beta_dev, 1e-9));
    }
    if beta_sym > 1e-9 {
        return Err(Error::validation("β ∘ α = β", beta_sym, 1e-9));
    }

    let mut out = Vec::with_capacity(g);
    for m in 0..g {
        let th = grid_theta(g, m);
        let a = alpha.apply(th);
        let zbar = Complex64::from_polar(1.0, -th);
        let zbar_a = Complex64::from_polar(1.0, -a);
        let fa = f.eval(a);
        let b = beta.eval(th);
        let val = (zbar_a * s * s + zbar * t * t) * f.get(m)
            + Complex64::new(0.0, s * t) * b * (zbar - zbar_a) * fa;
        out.push(val);
    }
    SampledFunction::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: usize = 1 << 12;

    #[test]
    fn wrapping_behaves() {
        assert_eq!(wrap_angle(PI), -PI);
        assert_eq!(wrap_angle(-PI), -PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((signed_angle_diff(-PI + 0.01, PI - 0.01) - 0.02).abs() < 1e-12);
    }

    #[test]
    fn involution_catalog() {
        assert!(involution_check(&CircleMap::identity(), G, 1e-12));
        assert!(involution_check(&CircleMap::reflection(0.7), G, 1e-12));
        assert!(involution_check(&CircleMap::negation(), G, 1e-12));
        assert!(involution_check(&CircleMap::quadratic_flip(), G, 1e-9));
        let psi = CircleMap::power_increasing(2.0).unwrap();
        assert!(
            involution_residual(&psi, G) > 0.1,
            "increasing reparametrization must fail the involution check decisively"
        );
    }

    #[test]
    fn quadratic_flip_density_matches_hand_formula() {
        // Independent oracle: h(v) = 2v/π on (0, π), √π/(2√(−v)) on (−π, 0),
        // derived by inverting each monotone piece by hand.
        let alpha = CircleMap::quadratic_flip();
        let d = pushforward_density(&alpha, G).expect("density");
        assert!(d.from_derivative);
        let mut worst: f64 = 0.0;
        for m in 0..G {
            if d.collar[m] {
                continue;
            }
            let v = grid_theta(G, m);
            let expect = if v > 0.0 {
                2.0 * v / PI
            } else {
                (PI).sqrt() / (2.0 * (-v).sqrt())
            };
            worst = worst.max((d.values[m] - expect).abs());
        }
        assert!(worst < 1e-3, "analytic density deviates {worst}");
        // Frozen spot values at exact grid points: h(π/2) = 1,
        // h(−π/2) = √π/(2·√(π/2)) = √(π/2)/… = 1/√2·√π/√π·… = √(1/2)·√π/√(π) …
        let m_up = 3 * G / 4; // θ = π/2
        assert!((d.values[m_up] - 1.0).abs() < 1e-6);
        let m_dn = G / 4; // θ = −π/2
        let expect_dn = PI.sqrt() / (2.0 * (PI / 2.0).sqrt());
        assert!((d.values[m_dn] - expect_dn).abs() < 1e-6);
        assert!((expect_dn - 0.7071067811865476).abs() < 1e-12);
    }

    #[test]
    fn quadratic_flip_mass_is_unit_despite_singularity() {
        let alpha = CircleMap::quadratic_flip();
        let d = pushforward_density(&alpha, 1 << 14).expect("density");
        assert!(
            (d.integral - 1.0).abs() < 1e-3,
            "mass-corrected integral {} should be 1 ± 1e-3",
            d.integral
        );
    }

    #[test]
    fn histogram_route_approximates_the_same_density() {
        // Same map, derivative withheld: the histogram route must agree with
        // the hand formula away from the collar and the steep region.
        let alpha = CircleMap::new(
            Box::new(|t: f64| {
                if t >= 0.0 {
                    -t * t / PI
                } else {
                    (-PI * t).sqrt()
                }
            }),
            None,
            vec![-PI, 0.0],
        )
        .unwrap();
        let d = pushforward_density(&alpha, G).expect("density");
        assert!(!d.from_derivative);
        assert!((d.integral - 1.0).abs() < 1e-12, "histogram conserves mass");
        let mut worst: f64 = 0.0;
        for m in 0..G {
            if d.collar[m] {
                continue;
            }
            let v = grid_theta(G, m);
            let expect = if v > 0.0 {
                2.0 * v / PI
            } else {
                PI.sqrt() / (2.0 * (-v).sqrt())
            };
            if expect > 3.0 {
                continue; // binning lags where h is steep; collar covers the worst
            }
            worst = worst.max((d.values[m] - expect).abs());
        }
        assert!(worst < 5e-2, "histogram density deviates {worst}");
    }

    #[test]
    fn pushforward_rejects_fold_maps() {
        // θ ↦ θ²/π − π/2 folds the piece; derivative changes sign inside.
        let fold = CircleMap::new(
            Box::new(|t: f64| t * t / PI - PI / 2.0),
            Some(Box::new(|t: f64| 2.0 * t / PI)),
            vec![-PI],
        )
        .unwrap();
        assert!(matches!(
            pushforward_density(&fold, G),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn reflection_symbol_is_a_member() {
        let axis = 0.6;
        let alpha = CircleMap::reflection(axis);
        let phi = CircleSymbol::from_angle_fn(move |t| wrap_angle(2.0 * axis - t));
        let d = mult_orbit_decision(&phi, &alpha, G, 1e-3).expect("decision");
        assert!(d.prescan_range_ok && d.prescan_injectivity_ok);
        assert_eq!(d.condition_a, Some(true));
        assert_eq!(d.condition_b, Some(true));
        assert_eq!(d.condition_c, Some(true));
        assert!(d.member);
        assert!(d.involution_residual.unwrap() < 1e-9);
        assert!((d.density_integral.unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn adjoint_symbol_is_a_member_via_identity_map() {
        let phi = CircleSymbol::adjoint_coordinate();
        let alpha = CircleMap::identity();
        let d = mult_orbit_decision(&phi, &alpha, G, 1e-3).expect("decision");
        assert!(d.member, "the adjoint is always an orbit member");
        assert!(d.pairing_residual.unwrap() < 1e-9);
    }

    #[test]
    fn quadratic_flip_symbol_is_a_member() {
        let alpha = CircleMap::quadratic_flip();
        let phi = CircleSymbol::from_angle_fn(|t| {
            if t >= 0.0 {
                -t * t / PI
            } else {
                (-PI * t).sqrt()
            }
        });
        let d = mult_orbit_decision(&phi, &alpha, 1 << 14, 1e-3).expect("decision");
        assert!(d.prescan_range_ok, "coverage {} gap {}", d.range_coverage, d.range_max_gap);
        assert!(
            d.prescan_injectivity_ok,
            "excess mass {}",
            d.injectivity_excess
        );
        assert_eq!(d.condition_a, Some(true));
        assert_eq!(d.condition_b, Some(true));
        assert_eq!(
            d.condition_c,
            Some(true),
            "pairing residual {:?}",
            d.pairing_residual
        );
        assert!(d.member);
    }

    #[test]
    fn increasing_reparametrization_fails_condition_a() {
        // Exponent 1.5 keeps the excess-mass prescan comfortable
        // (∫(h−2)⁺ dm = 1/27 ≈ 3.7%) so the rejection is attributable to
        // the involution condition, not to the prescan.
        let alpha = CircleMap::power_increasing(1.5).unwrap();
        let phi = CircleSymbol::from_angle_fn(|t| -PI + TWO_PI * ((t + PI) / TWO_PI).powf(1.5));
        let d = mult_orbit_decision(&phi, &alpha, G, 1e-3).expect("decision");
        assert!(d.prescan_range_ok, "a smooth bijection must cover the circle");
        assert!(d.prescan_injectivity_ok);
        assert_eq!(d.condition_a, Some(false), "residual {:?}", d.involution_residual);
        assert!(!d.member);
    }

    #[test]
    fn halfcircle_symbol_is_rejected_by_the_prescan() {
        let phi = CircleSymbol::halfcircle();
        let alpha = CircleMap::halfcircle_action();
        let d = mult_orbit_decision(&phi, &alpha, 1 << 14, 1e-3).expect("decision");
        assert!(!d.prescan_range_ok, "two atoms cannot cover the circle");
        assert!(
            d.range_coverage < 0.01,
            "coverage {} should be ~2 bins",
            d.range_coverage
        );
        assert!(!d.prescan_injectivity_ok, "excess {}", d.injectivity_excess);
        assert!(!d.member);
        assert!(d.condition_a.is_none(), "prescan must short-circuit");
    }

    #[test]
    fn inconsistent_symbol_and_map_is_a_domain_error() {
        let phi = CircleSymbol::adjoint_coordinate();
        let alpha = CircleMap::negation();
        assert!(matches!(
            mult_orbit_decision(&phi, &alpha, G, 1e-3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cmc_route_realizes_the_member_symbol() {
        // C f = √h·conj(f∘α) applied twice around M must multiply by
        // e^{−iα}.  Checked off-collar (and off the collar's α-image) on a
        // smooth test function.
        let g = 1 << 14;
        let alpha = CircleMap::quadratic_flip();
        let density = pushforward_density(&alpha, g).expect("density");
        let f = SampledFunction::from_fn(g, |t| {
            Complex64::from_polar(1.0, 2.0 * t) + Complex64::new(0.3, 0.1) * Complex64::from_polar(1.0, -t)
        })
        .unwrap();
        let cf = symbol_conjugation_apply(&density, &alpha, &f).unwrap();
        let mcf = SampledFunction::new(
            (0..g)
                .map(|m| Complex64::from_polar(1.0, grid_theta(g, m)) * cf.get(m))
                .collect(),
        )
        .unwrap();
        let cmcf = symbol_conjugation_apply(&density, &alpha, &mcf).unwrap();
        let mut worst: f64 = 0.0;
        for m in 0..g {
            if density.collar[m] {
                continue;
            }
            let th = grid_theta(g, m);
            if density.value_at(alpha.apply(th)).is_none() {
                continue;
            }
            let expect = Complex64::from_polar(1.0, -alpha.apply(th)) * f.get(m);
            worst = worst.max((cmcf.get(m) - expect).norm());
        }
        assert!(worst < 5e-3, "CMC route deviates {worst}");
    }

    #[test]
    fn conjugation_is_isometric_for_measure_preserving_maps() {
        // Grid-aligned axis so that α maps grid points to grid points and
        // evaluation is interpolation-free.
        let alpha = CircleMap::reflection(grid_theta(G, 300));
        let density = pushforward_density(&alpha, G).expect("density");
        let f = SampledFunction::from_fn(G, |t| {
            Complex64::from_polar(1.0, 3.0 * t) + Complex64::new(0.2, -0.4)
        })
        .unwrap();
        let cf = symbol_conjugation_apply(&density, &alpha, &f).unwrap();
        // The reflection maps the collar set onto itself (both collar balls
        // are swapped isometrically), so off-collar mass must be conserved
        // exactly; collar samples themselves carry no density guarantee.
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for m in 0..G {
            if !density.collar[m] {
                lhs += cf.get(m).norm_sqr();
                rhs += f.get(m).norm_sqr();
            }
        }
        assert!(
            ((lhs - rhs) / rhs).abs() < 1e-12,
            "off-collar mass {lhs} vs {rhs}"
        );
    }

    #[test]
    fn alpha_beta_member_matches_step_by_step_conjugation() {
        // Independent oracle: apply C f = s·conj(f)∘α + i·t·β·conj(f), then
        // M, then C again, entirely by grid operations, and compare with the
        // closed-form member.
        let g = 1 << 12;
        // Grid-aligned axis: both routes then evaluate on exact grid points
        // and the comparison is free of interpolation bias.
        let axis = grid_theta(g, 3000);
        let alpha = CircleMap::reflection(axis);
        // β = ±1 by distance to the axis: reflection-symmetric.
        let beta = CircleSymbol::new(Box::new(move |t: f64| {
            if signed_angle_diff(t, axis).abs() < PI / 2.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        }));
        let (s, t) = (0.6, 0.8);
        let f = SampledFunction::from_fn(g, |th| {
            Complex64::from_polar(1.0, 2.0 * th) + Complex64::new(0.1, 0.7)
        })
        .unwrap();

        let apply_c = |x: &SampledFunction| -> SampledFunction {
            SampledFunction::new(
                (0..g)
                    .map(|m| {
                        let th = grid_theta(g, m);
                        let xa = x.eval(alpha.apply(th)).conj();
                        let xb = x.get(m).conj();
                        xa * s + Complex64::new(0.0, t) * beta.eval(th) * xb
                    })
                    .collect(),
            )
            .unwrap()
        };
        let cf = apply_c(&f);
        let mcf = SampledFunction::new(
            (0..g)
                .map(|m| Complex64::from_polar(1.0, grid_theta(g, m)) * cf.get(m))
                .collect(),
        )
        .unwrap();
        let direct = apply_c(&mcf);

        let closed = alpha_beta_member(&alpha, &beta, s, t, &f).expect("member");
        let dev = closed.max_abs_diff(&direct);
        assert!(dev < 1e-6, "closed form vs step-by-step deviates {dev}");
    }

    #[test]
    fn alpha_beta_member_validates_inputs() {
        let g = 1 << 10;
        let f = SampledFunction::from_fn(g, |_| Complex64::new(1.0, 0.0)).unwrap();
        let beta = CircleSymbol::one();
        // s² + t² ≠ 1.
        assert!(matches!(
            alpha_beta_member(&CircleMap::identity(), &beta, 0.9, 0.9, &f),
            Err(Error::Validation { .. })
        ));
        // Not an involution.
        let psi = CircleMap::power_increasing(2.0).unwrap();
        assert!(matches!(
            alpha_beta_member(&psi, &beta, 1.0, 0.0, &f),
            Err(Error::Validation { .. })
        ));
        // Involution but not measure preserving.
        assert!(matches!(
            alpha_beta_member(&CircleMap::quadratic_flip(), &beta, 1.0, 0.0, &f),
            Err(Error::Validation { .. })
        ));
        // β not ±1-valued.
        let badbeta = CircleSymbol::new(Box::new(|_| Complex64::new(0.5, 0.0)));
        assert!(matches!(
            alpha_beta_member(&CircleMap::identity(), &badbeta, 1.0, 0.0, &f),
            Err(Error::Validation { .. })
        ));
        // β not symmetric under α.
        let asym = CircleSymbol::new(Box::new(|t: f64| {
            if t > 0.3 && t < 1.0 {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        }));
        assert!(matches!(
            alpha_beta_member(&CircleMap::reflection(-0.9), &asym, 0.6, 0.8, &f),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn sampled_function_interpolation_and_norm() {
        let f = SampledFunction::from_fn(1 << 10, |t| Complex64::from_polar(1.0, t)).unwrap();
        assert!((f.norm() - 1.0).abs() < 1e-12);
        // Interpolation at an off-grid point of a smooth function.
        let th = 0.123456;
        assert!((f.eval(th) - Complex64::from_polar(1.0, th)).norm() < 1e-5);
        assert!(SampledFunction::from_fn(100, |_| Complex64::new(0.0, 0.0)).is_err());
    }
}
