//! Measure-valued solution of the neutral Kimura equation
//!
//! ```text
//! ∂ₜp = ∂ₓ²(x(1−x)p),   p(x,t) = a(t)δ₀(x) + r(x,t) + b(t)δ₁(x)
//! ```
//!
//! The interior density is the eigenfunction expansion
//!
//! ```text
//! r(x,t) = Σ_n d_n e^{−λ_n t} C_n^{3/2}(2x−1),   λ_n = (n+1)(n+2)
//! ```
//!
//! with `d_n` the weighted projection of the initial density onto the
//! shifted Gegenbauer basis. The boundary masses follow from conservation of
//! `∫p` and `∫x p`, using `∫₀¹ C_n^{3/2}(2x−1) dx = [n even]` and
//! `∫₀¹ x C_n^{3/2}(2x−1) dx = 1/2`:
//!
//! ```text
//! b(t) = ∫x p^I − ½ Σ_n d_n e^{−λ_n t}
//! a(t) = ∫p^I − ∫x p^I − ½ Σ_n (−1)ⁿ d_n e^{−λ_n t}
//! ```
//!
//! Both are anchored to the exact initial moments rather than to the
//! truncated sums `½Σd_n`, `½Σ(−1)ⁿd_n`: the two agree for smooth initial
//! data, but for a point mass the coefficient series converges too slowly
//! for the truncated constants to be usable. The literal truncated series
//! are still available as [`MeasureSolution::fixation_probability_series`]
//! and [`MeasureSolution::extinction_probability_series`].

mod initial;

pub use initial::{InitialCondition, Pchip, MASS_NORMALIZATION_TOLERANCE};

use initial::Density;

use crate::chebyshev::ChebSeries;
use crate::error::{domain, Result};
use crate::quadrature::{gauss_legendre, Interval};
use crate::special::{
    gegenbauer_chebyshev, gegenbauer_sequence, integral_identity_const, integral_identity_linear,
    GegenbauerParam,
};

/// Gegenbauer order of the Kimura eigenfunctions.
pub const KIMURA_ALPHA: f64 = 1.5;
/// Default truncation for point-mass initial conditions.
pub const DEFAULT_DELTA_TRUNCATION: usize = 60;
/// Default truncation for smooth initial conditions.
pub const DEFAULT_SMOOTH_TRUNCATION: usize = 30;
/// Number of grid points used for pointwise diagnostics.
pub const DIAGNOSTIC_GRID: usize = 101;

/// Eigenvalue `(n+1)(n+2)` of mode `n`.
pub fn eigenvalue(n: usize) -> f64 {
    ((n + 1) * (n + 2)) as f64
}

/// `4(2n+3) / ((n+1)(n+2))`, the inverse weighted norm of mode `n` on `[0,1]`.
fn projection_factor(n: usize) -> f64 {
    4.0 * (2 * n + 3) as f64 / eigenvalue(n)
}

/// Truncated coefficient vector `(d_0, …, d_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    values: Vec<f64>,
}

impl SpectralCoefficients {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(domain("coefficient vector is empty"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(domain(format!("coefficient d_{i} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn truncation(&self) -> usize {
        self.values.len() - 1
    }

    /// `Σ_{n even} d_n`; equals the initial mass for an untruncated expansion.
    pub fn even_sum(&self) -> f64 {
        self.values.iter().step_by(2).sum()
    }

    /// `Σ d_n`; equals twice the initial mean for an untruncated expansion.
    pub fn total_sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Smallest `quad_order` for which Gauss-Legendre projection of a density
/// with pieces of degree `degree` is exact.
pub fn min_projection_order(truncation: usize, degree: usize) -> usize {
    // C_n · p · x(1−x) has degree N + deg + 2 ≤ 2m − 1
    (truncation + degree + 4).div_ceil(2)
}

/// `d_n = 4(2n+3)/((n+1)(n+2)) ∫₀¹ C_n^{3/2}(2x−1) p^I(x) x(1−x) dx`, `n ≤ N`.
///
/// Point masses use the closed form `d_n = 4(2n+3)/((n+1)(n+2)) x0(1−x0) C_n^{3/2}(2x0−1)`
/// and ignore `quad_order`.
pub fn project_coefficients(
    ic: &InitialCondition,
    truncation: usize,
    quad_order: usize,
) -> Result<SpectralCoefficients> {
    match ic {
        InitialCondition::Delta { x0 } => {
            ic.validate()?;
            delta_coefficients(*x0, truncation)
        }
        _ => {
            let (density, _) = Density::prepare(ic, quad_order)?;
            project_density(&density, truncation, quad_order)
        }
    }
}

fn delta_coefficients(x0: f64, truncation: usize) -> Result<SpectralCoefficients> {
    let het = x0 * (1.0 - x0);
    let modes = gegenbauer_sequence(KIMURA_ALPHA, truncation, 2.0 * x0 - 1.0);
    SpectralCoefficients::new(
        modes.iter().enumerate().map(|(n, c)| projection_factor(n) * het * c).collect(),
    )
}

fn project_density(density: &Density, truncation: usize, quad_order: usize) -> Result<SpectralCoefficients> {
    let required = min_projection_order(truncation, density.piece_degree());
    if quad_order < required {
        return Err(domain(format!(
            "quad_order {quad_order} too small for truncation {truncation}; need at least {required}"
        )));
    }
    let mut sums = vec![0.0; truncation + 1];
    for (x, w) in density.quadrature_points(quad_order)? {
        let weight = w * density.eval(x) * x * (1.0 - x);
        for (s, c) in sums.iter_mut().zip(gegenbauer_sequence(KIMURA_ALPHA, truncation, 2.0 * x - 1.0)) {
            *s += weight * c;
        }
    }
    SpectralCoefficients::new(sums.iter().enumerate().map(|(n, s)| projection_factor(n) * s).collect())
}

/// The measure-valued solution `a(t)δ₀ + r(·,t) + b(t)δ₁` for one initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSolution {
    coefficients: SpectralCoefficients,
    initial_mass: f64,
    initial_mean: f64,
    initial_heterozygosity: f64,
    projection_error: Option<f64>,
    normalization: f64,
}

impl MeasureSolution {
    /// Projects `ic` onto the first `truncation + 1` modes.
    ///
    /// `quad_order` is the Gauss-Legendre order per smooth piece of the
    /// initial density (ignored for point masses); see [`min_projection_order`].
    pub fn new(ic: &InitialCondition, truncation: usize, quad_order: usize) -> Result<Self> {
        if truncation < 2 {
            return Err(domain(format!("truncation must be at least 2, got {truncation}")));
        }
        match ic {
            InitialCondition::Delta { x0 } => {
                ic.validate()?;
                Ok(Self {
                    coefficients: delta_coefficients(*x0, truncation)?,
                    initial_mass: 1.0,
                    initial_mean: *x0,
                    initial_heterozygosity: x0 * (1.0 - x0),
                    projection_error: None,
                    normalization: 1.0,
                })
            }
            _ => {
                let (density, normalization) = Density::prepare(ic, quad_order)?;
                let coefficients = project_density(&density, truncation, quad_order)?;
                let points = density.quadrature_points(quad_order)?;
                let moment = |g: &dyn Fn(f64) -> f64| -> f64 {
                    points.iter().map(|&(x, w)| w * density.eval(x) * g(x)).sum()
                };
                let initial_mass = moment(&|_| 1.0);
                let initial_mean = moment(&|x| x);
                let initial_heterozygosity = moment(&|x| x * (1.0 - x));
                let projection_error = weighted_projection_error(&density, &coefficients)?;
                Ok(Self {
                    coefficients,
                    initial_mass,
                    initial_mean,
                    initial_heterozygosity,
                    projection_error: Some(projection_error),
                    normalization,
                })
            }
        }
    }

    /// Uses the default truncation for the kind of initial condition and the
    /// smallest exact projection order.
    pub fn with_defaults(ic: &InitialCondition) -> Result<Self> {
        let (truncation, degree) = default_truncation_and_degree(ic);
        Self::new(ic, truncation, min_projection_order(truncation, degree))
    }

    pub fn coefficients(&self) -> &SpectralCoefficients {
        &self.coefficients
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.truncation()
    }

    /// `∫ p^I` after normalization.
    pub fn initial_mass(&self) -> f64 {
        self.initial_mass
    }

    /// `∫ x p^I`.
    pub fn initial_mean(&self) -> f64 {
        self.initial_mean
    }

    /// `∫ x(1−x) p^I`.
    pub fn initial_heterozygosity(&self) -> f64 {
        self.initial_heterozygosity
    }

    /// Weighted `L²` error `(∫ (p^I − p_N)² x(1−x) dx)^{1/2}` of the truncated
    /// expansion; `None` for point masses.
    pub fn projection_error(&self) -> Option<f64> {
        self.projection_error
    }

    /// Factor applied to the raw initial density to give it unit mass.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Earliest time at which the first discarded mode has decayed below
    /// `e^{−36}` of its initial weight. Pointwise values for point masses are
    /// truncation artifacts before this.
    pub fn resolved_after(&self) -> f64 {
        36.0 / eigenvalue(self.truncation() + 1)
    }

    fn check_time(t: f64) -> Result<()> {
        if t >= 0.0 && t.is_finite() {
            Ok(())
        } else {
            Err(domain(format!("time must be finite and nonnegative, got {t}")))
        }
    }

    /// `d_n e^{−λ_n t}` for every retained mode.
    fn decayed(&self, t: f64) -> impl Iterator<Item = f64> + '_ {
        self.coefficients
            .values()
            .iter()
            .enumerate()
            .map(move |(n, d)| d * (-eigenvalue(n) * t).exp())
    }

    /// `r(x, t) = Σ_{n≤N} d_n e^{−λ_n t} C_n^{3/2}(2x−1)`.
    ///
    /// For point masses this is only meaningful once `t` exceeds
    /// [`Self::resolved_after`]; near `t = 0` it shows Gibbs-type
    /// oscillations, including negative values, which are left as they are.
    pub fn interior_density(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if !(0.0..=1.0).contains(&x) {
            return Err(domain(format!("x = {x} outside [0, 1]")));
        }
        let modes = gegenbauer_sequence(KIMURA_ALPHA, self.truncation(), 2.0 * x - 1.0);
        Ok(self.decayed(t).zip(modes).map(|(d, c)| d * c).sum())
    }

    /// `m₁ − b(t) = ½ Σ d_n e^{−λ_n t}`, computed without cancellation.
    pub fn fixation_deficit(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(0.5 * self.decayed(t).sum::<f64>())
    }

    /// Fixation probability `b(t)`, the mass at `x = 1`. Exactly zero at `t = 0`.
    pub fn fixation_probability(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok(self.initial_mean - self.fixation_deficit(t)?)
    }

    /// Extinction probability `a(t)`, the mass at `x = 0`. Exactly zero at `t = 0`.
    pub fn extinction_probability(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let alternating: f64 = self
            .decayed(t)
            .enumerate()
            .map(|(n, v)| if n % 2 == 0 { v } else { -v })
            .sum();
        Ok(self.initial_mass - self.initial_mean - 0.5 * alternating)
    }

    /// Literal truncated series `½ Σ_{n≤N} d_n (1 − e^{−λ_n t})`.
    pub fn fixation_probability_series(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(0.5
            * self
                .coefficients
                .values()
                .iter()
                .enumerate()
                .map(|(n, d)| -d * (-eigenvalue(n) * t).exp_m1())
                .sum::<f64>())
    }

    /// Literal truncated series `½ Σ_{n≤N} (−1)ⁿ d_n (1 − e^{−λ_n t})`.
    pub fn extinction_probability_series(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(0.5
            * self
                .coefficients
                .values()
                .iter()
                .enumerate()
                .map(|(n, d)| {
                    let term = -d * (-eigenvalue(n) * t).exp_m1();
                    if n % 2 == 0 { term } else { -term }
                })
                .sum::<f64>())
    }

    /// `∫₀¹ r(x,t) dx = Σ_{n even} d_n e^{−λ_n t}` from the closed mode integrals.
    pub fn interior_mass(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(self.decayed(t).step_by(2).sum())
    }

    /// `∫₀¹ x(1−x) r(x,t) dx = (d_0/6) e^{−2t}`: only mode 0 survives the weight.
    pub fn heterozygosity_closed(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(self.coefficients.values()[0] / 6.0 * (-2.0 * t).exp())
    }

    /// Leading large-time behaviour `∫x p^I − 3 [∫x(1−x) p^I] e^{−2t}`.
    pub fn asymptotic_fixation(&self, t: f64) -> f64 {
        self.initial_mean - 3.0 * self.initial_heterozygosity * (-2.0 * t).exp()
    }

    /// Residuals of both conservation laws at each time, with `∫r` and
    /// `∫x r` computed by Gauss-Legendre quadrature of the truncated series.
    ///
    /// `quad_order ≥ N/2 + 2` makes that quadrature exact.
    pub fn conservation_report(&self, times: &[f64], quad_order: usize) -> Result<ConservationReport> {
        let n = self.truncation();
        let required = n / 2 + 2;
        if quad_order < required {
            return Err(domain(format!(
                "quad_order {quad_order} too small for truncation {n}; need at least {required}"
            )));
        }
        let rule = gauss_legendre(quad_order, Interval::UNIT)?;
        let node_modes: Vec<Vec<f64>> = rule
            .nodes()
            .iter()
            .map(|&x| gegenbauer_sequence(KIMURA_ALPHA, n, 2.0 * x - 1.0))
            .collect();
        let grid: Vec<Vec<f64>> = (0..DIAGNOSTIC_GRID)
            .map(|i| {
                let x = i as f64 / (DIAGNOSTIC_GRID - 1) as f64;
                gegenbauer_sequence(KIMURA_ALPHA, n, 2.0 * x - 1.0)
            })
            .collect();
        let mut report = ConservationReport {
            times: times.to_vec(),
            projection_error: self.projection_error,
            ..ConservationReport::default()
        };
        for &t in times {
            Self::check_time(t)?;
            let decayed: Vec<f64> = self.decayed(t).collect();
            let eval = |modes: &[f64]| -> f64 { decayed.iter().zip(modes).map(|(d, c)| d * c).sum() };
            let mut mass = 0.0;
            let mut mean = 0.0;
            for ((&x, &w), modes) in rule.nodes().iter().zip(rule.weights()).zip(&node_modes) {
                let r = eval(modes);
                mass += w * r;
                mean += w * x * r;
            }
            let a = self.extinction_probability(t)?;
            let b = self.fixation_probability(t)?;
            report.interior_mass.push(mass);
            report.mass_residual.push((a + b + mass - 1.0).abs());
            report.mean_residual.push((b + mean - self.initial_mean).abs());
            report
                .min_interior_density
                .push(grid.iter().map(|m| eval(m)).fold(f64::INFINITY, f64::min));
        }
        Ok(report)
    }

    /// Largest per-mode residual of the neutral Kimura equation over modes
    /// `n ≤ N`; see [`mode_residual`]. The eigenfunction relation does not
    /// depend on `t`, which only has to be positive.
    pub fn pde_residual(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain(format!("PDE residual needs t > 0, got {t}")));
        }
        Ok((0..=self.truncation()).map(mode_residual).fold(0.0, f64::max))
    }
}

/// `(∫₀¹ C_n^{3/2}(2x−1) dx, ∫₀¹ x C_n^{3/2}(2x−1) dx)`, derived from the
/// integrals over `[-1, 1]` by `x = (u + 1)/2`. These are the values
/// `([n even], 1/2)` that the boundary-mass formulas rely on.
pub fn shifted_mode_moments(n: usize) -> Result<(f64, f64)> {
    let c = integral_identity_const(KIMURA_ALPHA, n)?;
    let xc = integral_identity_linear(KIMURA_ALPHA, n)?;
    Ok((0.5 * c, 0.25 * (xc + c)))
}

/// Truncation and per-piece degree that [`MeasureSolution::with_defaults`] uses.
pub fn default_truncation_and_degree(ic: &InitialCondition) -> (usize, usize) {
    match ic {
        InitialCondition::Delta { .. } => (DEFAULT_DELTA_TRUNCATION, 0),
        InitialCondition::Polynomial { coefficients } => {
            (DEFAULT_SMOOTH_TRUNCATION, coefficients.len().saturating_sub(1))
        }
        InitialCondition::Tabulated { .. } => (DEFAULT_SMOOTH_TRUNCATION, 3),
    }
}

fn weighted_projection_error(density: &Density, coefficients: &SpectralCoefficients) -> Result<f64> {
    let n = coefficients.truncation();
    let order = n.max(density.piece_degree()) + 2;
    let mut sum = 0.0;
    for (x, w) in density.quadrature_points(order)? {
        let modes = gegenbauer_sequence(KIMURA_ALPHA, n, 2.0 * x - 1.0);
        let approx: f64 = coefficients.values().iter().zip(&modes).map(|(d, c)| d * c).sum();
        let diff = density.eval(x) - approx;
        sum += w * diff * diff * x * (1.0 - x);
    }
    Ok(sum.sqrt())
}

/// `b(t) ≈ x0 − 3 x0 (1 − x0) e^{−2t}` for a point mass at `x0`.
///
/// Only the two slowest terms of the expansion; wrong at small `t` (it is
/// negative at `t = 0` for every `x0`).
pub fn asymptotic_fixation(x0: f64, t: f64) -> f64 {
    x0 - 3.0 * x0 * (1.0 - x0) * (-2.0 * t).exp()
}

/// The polynomial `∂ₓ²(x(1−x)C_n^{3/2}(2x−1)) + λ_n C_n^{3/2}(2x−1)` in the
/// variable `u = 2x − 1`, where it reads `∂ᵤ²((1−u²)C_n^{3/2}(u)) + λ_n C_n^{3/2}(u)`.
pub fn mode_operator(n: usize) -> ChebSeries {
    let c = gegenbauer_chebyshev(&GegenbauerParam::new(KIMURA_ALPHA, n).expect("alpha = 3/2 is valid"));
    let flux = &c - &c.mul_x().mul_x();
    &flux.derivative().derivative() + &c.scale(eigenvalue(n))
}

/// Maximum of `|mode_operator(n)|` on the uniform [`DIAGNOSTIC_GRID`] grid
/// over `x ∈ [0, 1]`, divided by `λ_n · max|C_n^{3/2}|`, the size of either
/// term it cancels.
pub fn mode_residual(n: usize) -> f64 {
    let op = mode_operator(n);
    let scale = eigenvalue(n) * (n + 1) as f64 * (n + 2) as f64 / 2.0;
    let worst = (0..DIAGNOSTIC_GRID)
        .map(|i| {
            let u = 2.0 * i as f64 / (DIAGNOSTIC_GRID - 1) as f64 - 1.0;
            op.eval(u).abs()
        })
        .fold(0.0, f64::max);
    worst / scale
}

/// Per-time conservation diagnostics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConservationReport {
    pub times: Vec<f64>,
    /// `|a + b + ∫r − 1|`
    pub mass_residual: Vec<f64>,
    /// `|b + ∫x r − ∫x p^I|`
    pub mean_residual: Vec<f64>,
    /// `∫r` by quadrature.
    pub interior_mass: Vec<f64>,
    /// Minimum of `r(·, t)` on the diagnostic grid; negative values flag truncation artifacts.
    pub min_interior_density: Vec<f64>,
    pub projection_error: Option<f64>,
}

impl ConservationReport {
    pub fn max_mass_residual(&self) -> f64 {
        self.mass_residual.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_mean_residual(&self) -> f64 {
        self.mean_residual.iter().copied().fold(0.0, f64::max)
    }
}
