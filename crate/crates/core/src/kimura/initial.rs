//! Initial conditions and their quadrature-ready densities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, Interval};

/// Largest relative mass defect that is silently normalized away.
pub const MASS_NORMALIZATION_TOLERANCE: f64 = 1e-3;

/// Initial allele-frequency distribution `p^I` on `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InitialCondition {
    /// Point mass at `x0 ∈ (0, 1)`.
    Delta { x0: f64 },
    /// Density `Σ cₖ xᵏ` on `[0, 1]`, ascending powers.
    Polynomial { coefficients: Vec<f64> },
    /// Samples `(x, p(x))` with strictly increasing `x ∈ (0, 1)`, joined by a
    /// monotone piecewise cubic and zero outside the first and last sample.
    Tabulated { points: Vec<(f64, f64)> },
}

impl InitialCondition {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InitialCondition(msg));
        match self {
            InitialCondition::Delta { x0 } => {
                if !(*x0 > 0.0 && *x0 < 1.0) {
                    return bad(format!("delta location must lie in (0, 1), got {x0}"));
                }
            }
            InitialCondition::Polynomial { coefficients } => {
                if coefficients.is_empty() {
                    return bad("polynomial needs at least one coefficient".into());
                }
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return bad("polynomial coefficients must be finite".into());
                }
            }
            InitialCondition::Tabulated { points } => {
                if points.len() < 2 {
                    return bad("tabulated density needs at least two samples".into());
                }
                for (i, &(x, v)) in points.iter().enumerate() {
                    if !(x > 0.0 && x < 1.0) {
                        return bad(format!("sample {i}: x = {x} outside (0, 1)"));
                    }
                    if !(v.is_finite() && v >= 0.0) {
                        return bad(format!("sample {i}: value {v} is not a finite nonnegative number"));
                    }
                    if i > 0 && x <= points[i - 1].0 {
                        return bad(format!("sample {i}: x values must be strictly increasing"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_delta(&self) -> bool {
        matches!(self, InitialCondition::Delta { .. })
    }
}

/// Monotonicity-preserving piecewise cubic Hermite interpolant
/// (Fritsch-Carlson slopes with the three-point one-sided end rule).
#[derive(Debug, Clone, PartialEq)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl Pchip {
    pub fn new(points: &[(f64, f64)]) -> Self {
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = delta[0];
            slopes[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    slopes[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Self { xs, ys, slopes }
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let k = match self.xs.partition_point(|&xk| xk <= x) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        };
        let h = self.xs[k + 1] - self.xs[k];
        let s = (x - self.xs[k]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.ys[k] + h10 * h * self.slopes[k] + h01 * self.ys[k + 1] + h11 * h * self.slopes[k + 1]
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// A smooth initial density ready for projection: a polynomial or an
/// interpolated table, already scaled to unit mass.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Density {
    Polynomial(Vec<f64>),
    Pchip { interp: Pchip, scale: f64 },
}

impl Density {
    /// Builds the density, checks nonnegativity at the projection nodes and
    /// normalizes the mass. Returns the density and the factor applied.
    pub(crate) fn prepare(ic: &InitialCondition, quad_order: usize) -> Result<(Self, f64)> {
        ic.validate()?;
        let raw = match ic {
            InitialCondition::Delta { .. } => {
                return Err(Error::InitialCondition("a point mass has no density".into()))
            }
            InitialCondition::Polynomial { coefficients } => Density::Polynomial(coefficients.clone()),
            InitialCondition::Tabulated { points } => {
                Density::Pchip { interp: Pchip::new(points), scale: 1.0 }
            }
        };
        let points = raw.quadrature_points(quad_order)?;
        if let Some(&(x, _)) = points.iter().find(|(x, _)| raw.eval(*x) < 0.0) {
            return Err(Error::InitialCondition(format!(
                "density is negative at x = {x} ({})",
                raw.eval(x)
            )));
        }
        let mass: f64 = points.iter().map(|&(x, w)| w * raw.eval(x)).sum();
        if !((mass - 1.0).abs() <= MASS_NORMALIZATION_TOLERANCE) {
            return Err(Error::InitialCondition(format!(
                "total mass {mass} is not within {MASS_NORMALIZATION_TOLERANCE} of 1"
            )));
        }
        let factor = 1.0 / mass;
        let density = match raw {
            Density::Polynomial(c) => Density::Polynomial(c.iter().map(|v| v * factor).collect()),
            Density::Pchip { interp, .. } => Density::Pchip { interp, scale: factor },
        };
        Ok((density, factor))
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        match self {
            Density::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            Density::Pchip { interp, scale } => scale * interp.eval(x),
        }
    }

    /// Polynomial degree on each smooth piece.
    pub(crate) fn piece_degree(&self) -> usize {
        match self {
            Density::Polynomial(c) => c.len() - 1,
            Density::Pchip { .. } => 3,
        }
    }

    /// Gauss-Legendre nodes and weights of order `order` on every smooth
    /// piece of the support.
    pub(crate) fn quadrature_points(&self, order: usize) -> Result<Vec<(f64, f64)>> {
        let pieces: Vec<Interval> = match self {
            Density::Polynomial(_) => vec![Interval::UNIT],
            Density::Pchip { interp, .. } => interp
                .knots()
                .windows(2)
                .map(|w| Interval { lo: w[0], hi: w[1] })
                .collect(),
        };
        let base = gauss_legendre(order, Interval::SYMMETRIC)?;
        let mut out = Vec::with_capacity(order * pieces.len());
        for piece in pieces {
            let rule = base.mapped(piece);
            out.extend(rule.nodes().iter().copied().zip(rule.weights().iter().copied()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_validation() {
        assert!(InitialCondition::Delta { x0: 0.3 }.validate().is_ok());
        for x0 in [0.0, 1.0, -0.2, f64::NAN] {
            assert!(InitialCondition::Delta { x0 }.validate().is_err());
        }
    }

    #[test]
    fn tabulated_validation() {
        let ok = InitialCondition::Tabulated { points: vec![(0.2, 1.0), (0.5, 2.0)] };
        assert!(ok.validate().is_ok());
        let unsorted = InitialCondition::Tabulated { points: vec![(0.5, 1.0), (0.2, 2.0)] };
        assert!(unsorted.validate().is_err());
        let negative = InitialCondition::Tabulated { points: vec![(0.2, -1.0), (0.5, 2.0)] };
        assert!(negative.validate().is_err());
        let boundary = InitialCondition::Tabulated { points: vec![(0.0, 1.0), (0.5, 2.0)] };
        assert!(boundary.validate().is_err());
    }

    #[test]
    fn pchip_interpolates_and_preserves_shape() {
        let pts = [(0.1, 0.0), (0.3, 1.0), (0.5, 3.0), (0.7, 3.0), (0.9, 0.0)];
        let p = Pchip::new(&pts);
        for &(x, y) in &pts {
            assert!((p.eval(x) - y).abs() < 1e-15);
        }
        assert_eq!(p.eval(0.05), 0.0);
        assert_eq!(p.eval(0.95), 0.0);
        // flat segment stays flat, data nonnegative → interpolant nonnegative
        for i in 0..=200 {
            let x = 0.1 + 0.004 * i as f64;
            assert!(p.eval(x) >= 0.0);
            if (0.5..=0.7).contains(&x) {
                assert!((p.eval(x) - 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn polynomial_mass_normalization() {
        // 6.003 x(1−x) is within 1e−3 of unit mass
        let ic = InitialCondition::Polynomial { coefficients: vec![0.0, 6.003, -6.003] };
        let (d, factor) = Density::prepare(&ic, 8).unwrap();
        assert!((factor - 1.0 / 1.0005).abs() < 1e-12);
        let mass: f64 = d.quadrature_points(8).unwrap().iter().map(|&(x, w)| w * d.eval(x)).sum();
        assert!((mass - 1.0).abs() < 1e-14);
        let far = InitialCondition::Polynomial { coefficients: vec![0.0, 7.0, -7.0] };
        assert!(Density::prepare(&far, 8).is_err());
        let negative = InitialCondition::Polynomial { coefficients: vec![2.0, -2.0, 0.0, 0.0] };
        // 2 − 2x ≥ 0 on [0,1] with mass 1: accepted
        assert!(Density::prepare(&negative, 8).is_ok());
        let signed = InitialCondition::Polynomial { coefficients: vec![-0.5, 3.0] };
        assert!(Density::prepare(&signed, 8).is_err());
    }
}
