//! Gauss-Legendre rules and a globally adaptive bisection integrator.
//!
//! The adaptive integrator is the independent oracle behind every identity
//! check in this crate, so it only ever sees integrands built from
//! recurrence-evaluated polynomials, never the closed forms under test.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// Maximum Newton steps per Legendre root.
const NEWTON_MAX_STEPS: usize = 100;
/// Maximum bisection depth of the adaptive integrator.
pub const MAX_DEPTH: usize = 50;

/// A closed finite interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const SYMMETRIC: Interval = Interval { lo: -1.0, hi: 1.0 };
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(domain(format!("invalid interval [{lo}, {hi}]")))
        }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Nodes and weights of an `order`-point Gauss-Legendre rule on `interval`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    interval: Interval,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// The same rule affinely mapped onto `target`.
    pub fn mapped(&self, target: Interval) -> Self {
        let scale = target.length() / self.interval.length();
        Self {
            nodes: self
                .nodes
                .iter()
                .map(|x| target.lo + (x - self.interval.lo) * scale)
                .collect(),
            weights: self.weights.iter().map(|w| w * scale).collect(),
            interval: target,
        }
    }

    /// `Σ wᵢ f(xᵢ)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, f: F) -> Result<f64> {
        integrate(f, self)
    }
}

/// Legendre `P_m(x)` and `P_m'(x)` by the three-term recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (pm, pm1) = if m == 0 { (1.0, 0.0) } else { (p1, p0) };
    let dp = if m == 0 { 0.0 } else { m as f64 * (x * pm - pm1) / (x * x - 1.0) };
    (pm, dp)
}

/// `m`-point Gauss-Legendre rule on `interval`.
///
/// Roots of `P_m` are found by Newton iteration from the asymptotic guesses
/// `cos(π(i − 1/4)/(m + 1/2))`; the negative half is mirrored so that paired
/// nodes and weights are exactly symmetric.
pub fn gauss_legendre(m: usize, interval: Interval) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(domain("Gauss-Legendre order must be at least 1"));
    }
    let mf = m as f64;
    let half = m.div_ceil(2);
    let mut pos_nodes = Vec::with_capacity(half);
    let mut pos_weights = Vec::with_capacity(half);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_STEPS {
            let (p, dp) = legendre_with_derivative(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { order: m, index: i });
        }
        let (_, dp) = legendre_with_derivative(m, x);
        // the middle root of an odd rule is exactly zero
        if m % 2 == 1 && i == half - 1 {
            x = 0.0;
        }
        pos_nodes.push(x);
        pos_weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    let mirrored = if m % 2 == 1 { half - 1 } else { half };
    for i in 0..mirrored {
        nodes.push(-pos_nodes[i]);
        weights.push(pos_weights[i]);
    }
    for i in (0..half).rev() {
        nodes.push(pos_nodes[i]);
        weights.push(pos_weights[i]);
    }
    let rule = QuadratureRule { nodes, weights, interval: Interval::SYMMETRIC };
    Ok(if interval == Interval::SYMMETRIC { rule } else { rule.mapped(interval) })
}

/// `Σ wᵢ f(xᵢ)`; fails if `f` is not finite at some node.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, rule: &QuadratureRule) -> Result<f64> {
    let mut sum = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::NonFinite { x });
        }
        sum += w * y;
    }
    Ok(sum)
}

/// Embedded pair used on each adaptive panel.
const LOW_ORDER: usize = 10;
const HIGH_ORDER: usize = 2 * LOW_ORDER + 1;

fn embedded_pair() -> &'static (QuadratureRule, QuadratureRule) {
    static PAIR: OnceLock<(QuadratureRule, QuadratureRule)> = OnceLock::new();
    PAIR.get_or_init(|| {
        (
            gauss_legendre(LOW_ORDER, Interval::SYMMETRIC).expect("order 10 rule"),
            gauss_legendre(HIGH_ORDER, Interval::SYMMETRIC).expect("order 21 rule"),
        )
    })
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    interval: Interval,
    depth: usize,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.interval.lo.total_cmp(&self.interval.lo))
    }
}

fn eval_panel<F: FnMut(f64) -> f64>(f: &mut F, interval: Interval, depth: usize) -> Result<Panel> {
    let (low, high) = embedded_pair();
    let c = interval.midpoint();
    let h = 0.5 * interval.length();
    let mut sum_rule = |rule: &QuadratureRule| -> Result<(f64, f64)> {
        let mut s = 0.0;
        let mut abs = 0.0;
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            let xi = c + h * x;
            let y = f(xi);
            if !y.is_finite() {
                return Err(Error::NonFinite { x: xi });
            }
            s += w * y;
            abs += w * y.abs();
        }
        Ok((s * h, abs * h))
    };
    let (coarse, _) = sum_rule(low)?;
    let (fine, fine_abs) = sum_rule(high)?;
    let mut error = (fine - coarse).abs();
    // below this the two rules only differ by rounding
    if error <= 50.0 * f64::EPSILON * fine_abs {
        error = 0.0;
    }
    Ok(Panel { interval, depth, value: fine, error })
}

/// Globally adaptive Gauss-Legendre integration of `f` over `interval`.
///
/// Each panel is integrated with 10- and 21-point rules and `|I₂₁ − I₁₀|`
/// serves as its error estimate. The panel with the largest estimate is
/// bisected until the summed estimate drops to `abs_tol`. Bisecting a
/// panel at depth [`MAX_DEPTH`] is an error.
pub fn adaptive_integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    interval: Interval,
    abs_tol: f64,
) -> Result<f64> {
    if !(abs_tol > 0.0) {
        return Err(domain(format!("abs_tol must be positive, got {abs_tol}")));
    }
    let mut heap = BinaryHeap::new();
    let first = eval_panel(&mut f, interval, 0)?;
    let mut total_error = first.error;
    heap.push(first);
    while total_error > abs_tol {
        let worst = heap.pop().expect("heap is never empty");
        if worst.depth >= MAX_DEPTH {
            return Err(Error::DepthLimit {
                depth: MAX_DEPTH,
                lo: worst.interval.lo,
                hi: worst.interval.hi,
            });
        }
        let mid = worst.interval.midpoint();
        let left = eval_panel(&mut f, Interval { lo: worst.interval.lo, hi: mid }, worst.depth + 1)?;
        let right = eval_panel(&mut f, Interval { lo: mid, hi: worst.interval.hi }, worst.depth + 1)?;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // re-sum occasionally so cancellation in the running total cannot stall the loop
        if heap.len() % 64 == 0 {
            total_error = heap.iter().map(|p| p.error).sum();
        }
    }
    let mut panels = heap.into_vec();
    panels.sort_by(|a, b| a.interval.lo.total_cmp(&b.interval.lo));
    Ok(neumaier_sum(panels.iter().map(|p| p.value)))
}

/// Compensated summation.
pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn midpoint_and_two_point_rules() {
        let r = gauss_legendre(1, Interval::UNIT).unwrap();
        assert_eq!(r.nodes(), &[0.5]);
        assert_eq!(r.weights(), &[1.0]);
        let r = gauss_legendre(2, Interval::SYMMETRIC).unwrap();
        let s = 1.0 / 3.0_f64.sqrt();
        assert_relative_eq!(r.nodes()[0], -s, max_relative = 1e-15);
        assert_relative_eq!(r.nodes()[1], s, max_relative = 1e-15);
        assert_relative_eq!(r.weights()[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(r.weights()[1], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn degree_nine_exactness_with_five_points() {
        let r = gauss_legendre(5, Interval::UNIT).unwrap();
        let v = r.integrate(|x| x.powi(9)).unwrap();
        assert!((v - 0.1).abs() < 1e-13);
    }

    #[test]
    fn weights_sum_to_length() {
        for m in 1..=40 {
            for iv in [Interval::SYMMETRIC, Interval::UNIT] {
                let r = gauss_legendre(m, iv).unwrap();
                assert_eq!(r.order(), m);
                let s: f64 = r.weights().iter().sum();
                assert!((s - iv.length()).abs() < 1e-13, "m={m}");
                assert!(r.weights().iter().all(|&w| w > 0.0));
            }
        }
    }

    #[test]
    fn integrate_examples() {
        let r = gauss_legendre(3, Interval::UNIT).unwrap();
        assert_relative_eq!(r.integrate(|_| 1.0).unwrap(), 1.0, max_relative = 1e-15);
        assert!((r.integrate(|x| x * (1.0 - x)).unwrap() - 1.0 / 6.0).abs() < 1e-13);
        assert!(matches!(r.integrate(|_| f64::NAN), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn adaptive_examples() {
        let v = adaptive_integrate(|_| 1.0, Interval::SYMMETRIC, 1e-12).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-15);
        // endpoint singularity in the derivative
        let v = adaptive_integrate(|x: f64| x.sqrt(), Interval::UNIT, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        let v = adaptive_integrate(|x: f64| (1.0 - x * x).powf(0.1), Interval::SYMMETRIC, 1e-13)
            .unwrap();
        // √π Γ(1.1)/Γ(1.6)
        let want = (0.5 * PI.ln() + statrs::function::gamma::ln_gamma(1.1)
            - statrs::function::gamma::ln_gamma(1.6))
        .exp();
        assert!((v - want).abs() < 1e-12, "{v} vs {want}");
    }

    #[test]
    fn adaptive_depth_limit() {
        let err = adaptive_integrate(|x: f64| 1.0 / (x * x), Interval::UNIT, 1e-12);
        assert!(matches!(err, Err(Error::DepthLimit { .. })));
        assert!(adaptive_integrate(|x| x, Interval::UNIT, 0.0).is_err());
    }
}
