//! Polynomials on `[-1, 1]` stored as Chebyshev coefficient vectors.
//!
//! Multiplication by `x`, differentiation and evaluation are all exact
//! operations on the coefficient vector (up to rounding), and stay well
//! conditioned at degrees where the monomial basis is useless. The
//! differential-equation residual checks rely on this.

use std::ops::{Add, Mul, Sub};

/// `p(x) = Σ c_k T_k(x)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
}

impl ChebSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self { coeffs: vec![0.0, 1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Length of the coefficient vector minus one; trailing zeros are not trimmed.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiply by `x` using `x T_0 = T_1`, `x T_k = (T_{k+1} + T_{k-1}) / 2`.
    pub fn mul_x(&self) -> Self {
        if self.coeffs.is_empty() {
            return Self::default();
        }
        let n = self.coeffs.len();
        let mut out = vec![0.0; n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            if k == 0 {
                out[1] += c;
            } else {
                out[k + 1] += 0.5 * c;
                out[k - 1] += 0.5 * c;
            }
        }
        Self::new(out)
    }

    /// Exact derivative via the backward recurrence
    /// `c'_{k-1} = c'_{k+1} + 2k c_k`, with `c'_0` halved.
    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::constant(0.0);
        }
        let mut d = vec![0.0; n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * self.coeffs[k];
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        Self::new(d)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        match self.coeffs.first() {
            Some(&c0) => x * b1 - b2 + c0,
            None => 0.0,
        }
    }
}

impl Add for &ChebSeries {
    type Output = ChebSeries;

    fn add(self, rhs: &ChebSeries) -> ChebSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        ChebSeries::new((0..n).map(|k| get(&self.coeffs, k) + get(&rhs.coeffs, k)).collect())
    }
}

impl Sub for &ChebSeries {
    type Output = ChebSeries;

    fn sub(self, rhs: &ChebSeries) -> ChebSeries {
        self + &rhs.scale(-1.0)
    }
}

impl Mul<f64> for &ChebSeries {
    type Output = ChebSeries;

    fn mul(self, rhs: f64) -> ChebSeries {
        self.scale(rhs)
    }
}
