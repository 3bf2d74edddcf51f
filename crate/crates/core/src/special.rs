//! Gegenbauer (ultraspherical) polynomials `C_n^α` and their integral identities.
//!
//! Conventions: `C_n^α` is normalized by the generating function
//!
//! ```text
//! (1 − 2xt + t²)^(−α) = Σ_n C_n^α(x) tⁿ
//! ```
//!
//! and is orthogonal on `[-1, 1]` under the weight `(1 − x²)^(α − 1/2)`.
//!
//! Besides evaluation, this module holds closed forms for
//!
//! * `∫₋₁¹ C_n^α(x) dx` and `∫₋₁¹ x C_n^α(x) dx` ([`integral_identity_const`],
//!   [`integral_identity_linear`]),
//! * the generating integrals `f(α,t) = ∫₋₁¹ (1 − 2xt + t²)^(−α) dx`
//!   ([`f_closed`]) and `∫₋₁¹ x (1 − 2xt + t²)^(−α) dx` ([`xmoment_gen_closed`]),
//!   together with their power series in `t`.
//!
//! Every closed form carries a `1/(α − 1)` prefactor that is cancelled
//! analytically, so `α = 1` needs no special limit.

use std::f64::consts::{LN_2, PI};

use statrs::function::gamma::ln_gamma;

use crate::chebyshev::ChebSeries;
use crate::error::{domain, Result};

/// `(α, n)` identifying the polynomial `C_n^α`; requires `α > −1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParam {
    alpha: f64,
    degree: usize,
}

impl GegenbauerParam {
    pub fn new(alpha: f64, degree: usize) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, degree })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// A point `(x, t)` with `|x| ≤ 1` and `|t| < 1`, where the generating
/// function converges and `1 − 2xt + t² > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratingFunctionPoint {
    x: f64,
    t: f64,
}

impl GeneratingFunctionPoint {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(domain(format!("generating function needs |x| <= 1, got x = {x}")));
        }
        if !(t.abs() < 1.0) {
            return Err(domain(format!("generating function needs |t| < 1, got t = {t}")));
        }
        Ok(Self { x, t })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > -0.5 {
        Ok(())
    } else {
        Err(domain(format!("Gegenbauer order must satisfy alpha > -1/2, got {alpha}")))
    }
}

fn check_unit(x: f64, lo: f64) -> Result<()> {
    if (lo..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain(format!("argument {x} outside [{lo}, 1]")))
    }
}

fn check_t(t: f64) -> Result<()> {
    if t.abs() < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("expansion variable needs |t| < 1, got {t}")))
    }
}

/// Values `C_0^α(x), …, C_{n_max}^α(x)` by the forward recurrence
///
/// ```text
/// n C_n = 2(n + α − 1) x C_{n−1} − (n + 2α − 2) C_{n−2}
/// ```
///
/// No argument checking; callers validate `α` and `x`.
pub fn gegenbauer_sequence(alpha: f64, n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(2.0 * alpha * x);
    for n in 2..=n_max {
        let nf = n as f64;
        let c = (2.0 * (nf + alpha - 1.0) * x * out[n - 1] - (nf + 2.0 * alpha - 2.0) * out[n - 2])
            / nf;
        out.push(c);
    }
    out
}

/// `C_n^α(x)` for `x ∈ [-1, 1]`.
pub fn gegenbauer_eval(p: &GegenbauerParam, x: f64) -> Result<f64> {
    check_unit(x, -1.0)?;
    let (mut prev, mut cur) = (0.0, 1.0);
    for n in 1..=p.degree {
        let nf = n as f64;
        let next = if n == 1 {
            2.0 * p.alpha * x
        } else {
            (2.0 * (nf + p.alpha - 1.0) * x * cur - (nf + 2.0 * p.alpha - 2.0) * prev) / nf
        };
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `C_n^α(2x − 1)` for `x ∈ [0, 1]`: the eigenfunctions of
/// `x(1−x) f'' + (α + 1/2)(1 − 2x) f'` with eigenvalue `−n(n + 2α)`.
pub fn gegenbauer_shifted_eval(p: &GegenbauerParam, x: f64) -> Result<f64> {
    check_unit(x, 0.0)?;
    gegenbauer_eval(p, 2.0 * x - 1.0)
}

/// Chebyshev coefficients of `C_n^α`, built by running the three-term
/// recurrence on coefficient vectors.
pub fn gegenbauer_chebyshev(p: &GegenbauerParam) -> ChebSeries {
    let alpha = p.alpha;
    let mut prev = ChebSeries::constant(1.0);
    if p.degree == 0 {
        return prev;
    }
    let mut cur = ChebSeries::x().scale(2.0 * alpha);
    for n in 2..=p.degree {
        let nf = n as f64;
        let next = &cur.mul_x().scale(2.0 * (nf + alpha - 1.0) / nf)
            - &prev.scale((nf + 2.0 * alpha - 2.0) / nf);
        prev = cur;
        cur = next;
    }
    cur
}

/// The polynomial `(1 − x²) y'' − (2α + 1) x y' + n(n + 2α) y` for `y = C_n^α`,
/// from exact differentiation of the Chebyshev coefficient vector.
/// Identically zero in exact arithmetic.
///
/// The second-derivative term uses `(1 − x²) T_k'' = x T_k' − k² T_k`, so the
/// residual is assembled as `Σ (n(n+2α) − k²) c_k T_k − 2α x y'`.
pub fn gegenbauer_ode_residual(p: &GegenbauerParam) -> ChebSeries {
    let alpha = p.alpha;
    let n = p.degree as f64;
    let y = gegenbauer_chebyshev(p);
    let diagonal = ChebSeries::new(
        y.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| (n * (n + 2.0 * alpha) - (k * k) as f64) * c)
            .collect(),
    );
    &diagonal - &y.derivative().mul_x().scale(2.0 * alpha)
}

/// `β(β−1)…(β−k+1) / k!` for real `β`. Exactly zero when `β` is a
/// nonnegative integer smaller than `k`.
pub fn generalized_binomial(beta: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (beta - j as f64) / (j + 1) as f64)
}

/// `∫₋₁¹ C_n^α(x) dx`.
///
/// Zero for odd `n`; for `n = 2m` the closed form
/// `binom(2α + 2m − 2, 2m + 1) / (α − 1)` is evaluated with the factor
/// `2α − 2` of the binomial product already cancelled against `α − 1`:
///
/// ```text
/// 2 · binom(2α + 2m − 2, 2m) / (2m + 1)
/// ```
pub fn integral_identity_const(alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if n % 2 == 1 {
        return Ok(0.0);
    }
    Ok(cancelled_even_binomial(alpha, n / 2))
}

/// `binom(2α + 2m − 2, 2m + 1) / (α − 1)` with the removable pole cancelled.
fn cancelled_even_binomial(alpha: f64, m: usize) -> f64 {
    let beta = 2.0 * alpha + 2.0 * m as f64 - 2.0;
    2.0 * generalized_binomial(beta, 2 * m) / (2 * m + 1) as f64
}

/// `∫₋₁¹ x C_n^α(x) dx`.
///
/// Zero for even `n`; for `n = 2m + 1`
///
/// ```text
/// 2(α + m) / ((α − 1)(2m + 3)) · binom(2α + 2m − 2, 2m + 1)
/// ```
///
/// with the same cancellation as [`integral_identity_const`].
pub fn integral_identity_linear(alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if n % 2 == 0 {
        return Ok(0.0);
    }
    let m = (n - 1) / 2;
    let mf = m as f64;
    Ok(2.0 * (alpha + mf) / (2.0 * mf + 3.0) * cancelled_even_binomial(alpha, m))
}

/// `ln |Γ(x)|` for `x > −1`, `x ≠ 0`, together with the sign of `Γ(x)`.
fn ln_abs_gamma(x: f64) -> (f64, f64) {
    if x > 0.0 {
        (ln_gamma(x), 1.0)
    } else {
        (ln_gamma(x + 1.0) - (-x).ln(), -1.0)
    }
}

/// Squared weighted norm
/// `∫₋₁¹ (C_n^α)² (1 − x²)^(α − 1/2) dx = π 2^(1−2α) Γ(n + 2α) / (n! (n + α) Γ(α)²)`.
pub fn orthogonality_norm(alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Err(domain("orthogonality norm is undefined at alpha = 0 (Gamma pole)"));
    }
    let nf = n as f64;
    let (ln_num, sign_num) = ln_abs_gamma(nf + 2.0 * alpha);
    let (ln_ga, _) = ln_abs_gamma(alpha);
    let shift = nf + alpha;
    let ln_mag = PI.ln() + (1.0 - 2.0 * alpha) * LN_2 + ln_num
        - ln_gamma(nf + 1.0)
        - shift.abs().ln()
        - 2.0 * ln_ga;
    Ok(sign_num * shift.signum() * ln_mag.exp())
}

/// `(1 − 2xt + t²)^(−α)`.
pub fn generating_fn_closed(gp: &GeneratingFunctionPoint, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let base = 1.0 - 2.0 * gp.x * gp.t + gp.t * gp.t;
    if base <= 0.0 {
        return Err(domain(format!("1 - 2xt + t^2 = {base} is not positive")));
    }
    Ok(base.powf(-alpha))
}

/// `(e^{s·hi} − e^{s·lo}) / s`, continuous at `s = 0` where it equals `hi − lo`.
///
/// With `lo = ln (1−t)²`, `hi = ln (1+t)²` this is `∫ u^(s−1) du` over the
/// image of `[-1, 1]` under `u = 1 − 2xt + t²`.
fn power_difference(s: f64, lo: f64, hi: f64) -> f64 {
    if s == 0.0 {
        hi - lo
    } else {
        (s * lo).exp() * (s * (hi - lo)).exp_m1() / s
    }
}

fn log_endpoints(t: f64) -> (f64, f64) {
    (2.0 * (-t).ln_1p(), 2.0 * t.ln_1p())
}

/// `f(α, t) = ∫₋₁¹ (1 − 2xt + t²)^(−α) dx`
/// `= [(1−t)^(2−2α) − (1+t)^(2−2α)] / (2t(α−1))`.
///
/// At `α = 1` this is `ln((1+t)/(1−t)) / t`; at `t = 0` it is 2.
pub fn f_closed(alpha: f64, t: f64) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(domain(format!("alpha must be finite, got {alpha}")));
    }
    check_t(t)?;
    if t == 0.0 {
        return Ok(2.0);
    }
    let (lo, hi) = log_endpoints(t);
    Ok(power_difference(1.0 - alpha, lo, hi) / (2.0 * t))
}

/// `t`-derivative of [`f_closed`], differentiated by hand:
///
/// ```text
/// ∂ₜf(α,t) = −f(α,t)/t + [(1+t)^(1−2α) + (1−t)^(1−2α)] / t
/// ```
fn f_closed_dt(alpha: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 {
        // f is even in t
        return Ok(0.0);
    }
    let p = 1.0 - 2.0 * alpha;
    Ok((-f_closed(alpha, t)? + (1.0 + t).powf(p) + (1.0 - t).powf(p)) / t)
}

/// `f(α, t)` from its power series `Σ_m ∫C_{2m}^α · t^{2m}`, `terms` terms.
pub fn f_series(alpha: f64, t: f64, terms: usize) -> Result<f64> {
    check_t(t)?;
    let t2 = t * t;
    let mut sum = 0.0;
    let mut pow = 1.0;
    for m in 0..terms {
        sum += integral_identity_const(alpha, 2 * m)? * pow;
        pow *= t2;
    }
    Ok(sum)
}

/// `∫₋₁¹ x (1 − 2xt + t²)^(−α) dx`.
///
/// Substituting `u = 1 − 2xt + t²` gives
///
/// ```text
/// [(1 + t²) D(1 − α) − D(2 − α)] / (4t²),   D(s) = ((1+t)^(2s) − (1−t)^(2s)) / s
/// ```
///
/// which is finite for every real `α` (the removable poles of `D` at
/// `α = 1, 2` are handled inside `D`).
pub fn xmoment_gen_closed(alpha: f64, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_t(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi) = log_endpoints(t);
    let d1 = power_difference(1.0 - alpha, lo, hi);
    let d2 = power_difference(2.0 - alpha, lo, hi);
    Ok(((1.0 + t * t) * d1 - d2) / (4.0 * t * t))
}

/// Same integral as [`xmoment_gen_closed`], assembled from
///
/// ```text
/// ∂ₜf(α−1, t) / (2(α−1)) + t f(α, t)
/// ```
///
/// using the hand-differentiated `∂ₜf`. Undefined at `α = 1`, where the
/// two factors of the first term are both zero.
pub fn xmoment_gen_via_f_derivative(alpha: f64, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 1.0 {
        return Err(domain("derivative form of the x-moment is 0/0 at alpha = 1"));
    }
    Ok(f_closed_dt(alpha - 1.0, t)? / (2.0 * (alpha - 1.0)) + t * f_closed(alpha, t)?)
}

/// `Σ_m ∫x C_{2m+1}^α · t^{2m+1}`, `terms` terms.
pub fn xmoment_series(alpha: f64, t: f64, terms: usize) -> Result<f64> {
    check_t(t)?;
    let t2 = t * t;
    let mut sum = 0.0;
    let mut pow = t;
    for m in 0..terms {
        sum += integral_identity_linear(alpha, 2 * m + 1)? * pow;
        pow *= t2;
    }
    Ok(sum)
}
