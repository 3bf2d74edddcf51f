//! Closed forms checked against adaptive quadrature of recurrence-evaluated
//! integrands. Shared by the `identities` command and the acceptance suite.

use crate::error::Result;
use crate::kimura::{shifted_mode_moments, KIMURA_ALPHA};
use crate::quadrature::{adaptive_integrate, Interval};
use crate::special::{
    f_closed, f_series, gegenbauer_sequence, integral_identity_const, integral_identity_linear,
    orthogonality_norm, xmoment_gen_closed, xmoment_series,
};

/// Absolute tolerance handed to the adaptive oracle.
pub const ORACLE_TOL: f64 = 1e-13;

/// Expansion variables at which the generating integrals are checked.
pub const GENERATING_TS: [f64; 6] = [-0.5, -0.3, -0.1, 0.1, 0.3, 0.5];

/// One closed form compared with an independent reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub alpha: f64,
    pub n: Option<usize>,
    pub t: Option<f64>,
    pub closed_form: f64,
    pub reference: f64,
}

impl IdentityCheck {
    pub fn abs_error(&self) -> f64 {
        (self.closed_form - self.reference).abs()
    }

    /// `|closed − reference| ≤ tol · max(1, |closed|)`.
    pub fn passes_mixed(&self, tol: f64) -> bool {
        self.abs_error() <= tol * self.closed_form.abs().max(1.0)
    }
}

/// `∫₋₁¹ C_n^α` and `∫₋₁¹ x C_n^α` for `n ≤ n_max`.
pub fn integral_identity_checks(alpha: f64, n_max: usize) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::with_capacity(2 * (n_max + 1));
    for n in 0..=n_max {
        let c = |x: f64| gegenbauer_sequence(alpha, n, x)[n];
        out.push(IdentityCheck {
            identity: "int_C",
            alpha,
            n: Some(n),
            t: None,
            closed_form: integral_identity_const(alpha, n)?,
            reference: adaptive_integrate(c, Interval::SYMMETRIC, ORACLE_TOL)?,
        });
        out.push(IdentityCheck {
            identity: "int_xC",
            alpha,
            n: Some(n),
            t: None,
            closed_form: integral_identity_linear(alpha, n)?,
            reference: adaptive_integrate(|x| x * c(x), Interval::SYMMETRIC, ORACLE_TOL)?,
        });
    }
    Ok(out)
}

/// `G[n][m] = ∫₋₁¹ C_n^α C_m^α (1 − x²)^(α − 1/2) dx` for `n, m ≤ n_max`.
pub fn gram_matrix(alpha: f64, n_max: usize) -> Result<Vec<Vec<f64>>> {
    let mut g = vec![vec![0.0; n_max + 1]; n_max + 1];
    for n in 0..=n_max {
        for m in 0..=n {
            let v = adaptive_integrate(
                |x| {
                    let c = gegenbauer_sequence(alpha, n, x);
                    c[n] * c[m] * (1.0 - x * x).powf(alpha - 0.5)
                },
                Interval::SYMMETRIC,
                ORACLE_TOL,
            )?;
            g[n][m] = v;
            g[m][n] = v;
        }
    }
    Ok(g)
}

/// Diagonal of the Gram matrix against [`orthogonality_norm`], plus one
/// `orth_offdiag_max` row holding the largest off-diagonal magnitude.
pub fn orthogonality_checks(alpha: f64, n_max: usize) -> Result<Vec<IdentityCheck>> {
    let g = gram_matrix(alpha, n_max)?;
    let mut out = Vec::with_capacity(n_max + 2);
    let mut offdiag = 0.0_f64;
    for n in 0..=n_max {
        out.push(IdentityCheck {
            identity: "norm",
            alpha,
            n: Some(n),
            t: None,
            closed_form: orthogonality_norm(alpha, n)?,
            reference: g[n][n],
        });
        for m in 0..n {
            offdiag = offdiag.max(g[n][m].abs());
        }
    }
    out.push(IdentityCheck {
        identity: "orth_offdiag_max",
        alpha,
        n: Some(n_max),
        t: None,
        closed_form: 0.0,
        reference: offdiag,
    });
    Ok(out)
}

/// `f(α,t)` and `∫ x (1 − 2xt + t²)^(−α)` against quadrature.
pub fn generating_integral_checks(alpha: f64, ts: &[f64]) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::with_capacity(2 * ts.len());
    for &t in ts {
        let base = |x: f64| (1.0 - 2.0 * x * t + t * t).powf(-alpha);
        out.push(IdentityCheck {
            identity: "f_closed",
            alpha,
            n: None,
            t: Some(t),
            closed_form: f_closed(alpha, t)?,
            reference: adaptive_integrate(base, Interval::SYMMETRIC, ORACLE_TOL)?,
        });
        out.push(IdentityCheck {
            identity: "xmoment",
            alpha,
            n: None,
            t: Some(t),
            closed_form: xmoment_gen_closed(alpha, t)?,
            reference: adaptive_integrate(|x| x * base(x), Interval::SYMMETRIC, ORACLE_TOL)?,
        });
    }
    Ok(out)
}

/// Closed forms of the generating integrals against their power series
/// truncated at `terms` terms.
pub fn generating_series_checks(alpha: f64, ts: &[f64], terms: usize) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::with_capacity(2 * ts.len());
    for &t in ts {
        out.push(IdentityCheck {
            identity: "f_series",
            alpha,
            n: Some(terms),
            t: Some(t),
            closed_form: f_closed(alpha, t)?,
            reference: f_series(alpha, t, terms)?,
        });
        out.push(IdentityCheck {
            identity: "xmoment_series",
            alpha,
            n: Some(terms),
            t: Some(t),
            closed_form: xmoment_gen_closed(alpha, t)?,
            reference: xmoment_series(alpha, t, terms)?,
        });
    }
    Ok(out)
}

/// `∫₀¹ C_n^{3/2}(2x−1) dx` and `∫₀¹ x C_n^{3/2}(2x−1) dx` for `n ≤ n_max`.
pub fn shifted_moment_checks(n_max: usize) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::with_capacity(2 * (n_max + 1));
    for n in 0..=n_max {
        let c = |x: f64| gegenbauer_sequence(KIMURA_ALPHA, n, 2.0 * x - 1.0)[n];
        let (mass, mean) = shifted_mode_moments(n)?;
        out.push(IdentityCheck {
            identity: "int01_C",
            alpha: KIMURA_ALPHA,
            n: Some(n),
            t: None,
            closed_form: mass,
            reference: adaptive_integrate(c, Interval::UNIT, ORACLE_TOL)?,
        });
        out.push(IdentityCheck {
            identity: "int01_xC",
            alpha: KIMURA_ALPHA,
            n: Some(n),
            t: None,
            closed_form: mean,
            reference: adaptive_integrate(|x| x * c(x), Interval::UNIT, ORACLE_TOL)?,
        });
    }
    Ok(out)
}
