use kimura_core::special::{
    f_closed, gegenbauer_eval, gegenbauer_ode_residual, gegenbauer_sequence, generating_fn_closed,
    xmoment_gen_closed, xmoment_gen_via_f_derivative,
};
use kimura_core::verify::{
    generating_integral_checks, generating_series_checks, integral_identity_checks, orthogonality_checks,
    shifted_moment_checks, GENERATING_TS,
};
use kimura_core::{GegenbauerParam, GeneratingFunctionPoint};

const ALPHAS: [f64; 8] = [0.6, 0.9, 0.999, 1.0, 1.001, 1.5, 2.0, 3.25];

#[test]
fn closed_integrals_match_quadrature() {
    for alpha in ALPHAS {
        for check in integral_identity_checks(alpha, 20).unwrap() {
            assert!(check.abs_error() <= 1e-10, "{check:?}");
        }
    }
}

#[test]
fn gram_matrix_is_diagonal() {
    for alpha in [0.6, 1.0, 1.5, 2.5] {
        for check in orthogonality_checks(alpha, 20).unwrap() {
            if check.identity == "orth_offdiag_max" {
                assert!(check.reference <= 1e-12, "{check:?}");
            } else {
                assert!(check.abs_error() <= 1e-9 * check.closed_form.abs(), "{check:?}");
            }
        }
    }
}

#[test]
fn generating_integrals() {
    for alpha in ALPHAS {
        for check in generating_integral_checks(alpha, &GENERATING_TS).unwrap() {
            assert!(check.abs_error() <= 1e-10, "{check:?}");
        }
        for check in generating_series_checks(alpha, &[-0.3, -0.1, 0.1, 0.3], 30).unwrap() {
            assert!(check.abs_error() <= 1e-10, "{check:?}");
        }
    }
}

#[test]
fn derivative_route_agrees_away_from_one() {
    for alpha in [0.6, 1.5, 2.0, 3.25] {
        for t in GENERATING_TS {
            let direct = xmoment_gen_closed(alpha, t).unwrap();
            let via = xmoment_gen_via_f_derivative(alpha, t).unwrap();
            assert!((direct - via).abs() < 1e-12, "alpha = {alpha}, t = {t}");
        }
    }
    assert!(xmoment_gen_via_f_derivative(1.0, 0.2).is_err());
    assert!(xmoment_gen_closed(1.0, 0.2).is_ok());
}

#[test]
fn f_special_values() {
    assert_eq!(f_closed(0.0, 0.3).unwrap(), 2.0);
    assert_eq!(f_closed(1.7, 0.0).unwrap(), 2.0);
    let at_one = f_closed(1.0, 0.4).unwrap();
    assert!((at_one - (1.4f64 / 0.6).ln() / 0.4).abs() < 1e-15);
}

#[test]
fn truncated_generating_series_bound() {
    let n_max = 25;
    for alpha in [0.6, 1.0, 1.5, 3.25] {
        for &x in &[-1.0, -0.4, 0.0, 0.7, 1.0] {
            for &t in &[-0.5f64, -0.2, 0.3, 0.5] {
                // peak over the tail indices too: at x = ±1 the C_n grow with n
                let c = gegenbauer_sequence(alpha, 2 * n_max + 1, x);
                let partial: f64 = c[..=n_max].iter().enumerate().map(|(n, v)| v * t.powi(n as i32)).sum();
                let peak = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let closed = generating_fn_closed(&GeneratingFunctionPoint::new(x, t).unwrap(), alpha).unwrap();
                let bound = 2.0 * t.abs().powi(n_max as i32 + 1) * peak + 8.0 * f64::EPSILON * closed.abs().max(1.0);
                assert!((closed - partial).abs() <= bound, "alpha = {alpha}, x = {x}, t = {t}");
            }
        }
    }
}

#[test]
fn parity() {
    for alpha in [0.6, 1.5, 3.25] {
        for n in 0..=15 {
            let p = GegenbauerParam::new(alpha, n).unwrap();
            for i in 0..=20 {
                let x = 0.05 * i as f64;
                let plus = gegenbauer_eval(&p, x).unwrap();
                let minus = gegenbauer_eval(&p, -x).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((minus - sign * plus).abs() <= 1e-12 * plus.abs().max(1e-300), "{alpha} {n} {x}");
            }
        }
    }
}

#[test]
fn differential_equation_residual() {
    for alpha in ALPHAS.iter().copied().chain([2.5]) {
        for n in 0..=15 {
            let r = gegenbauer_ode_residual(&GegenbauerParam::new(alpha, n).unwrap());
            for i in 0..50 {
                let x = (-1.0 + 2.0 * i as f64 / 49.0).min(1.0);
                assert!(r.eval(x).abs() <= 1e-9, "alpha = {alpha}, n = {n}, x = {x}");
            }
        }
    }
}

#[test]
fn shifted_moments() {
    for check in shifted_moment_checks(20).unwrap() {
        assert!(check.abs_error() <= 1e-11, "{check:?}");
    }
}
