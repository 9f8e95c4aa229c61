//! Kernel checks against oracles that do not share code with the library's
//! Wright-function evaluation: Talbot-inverted Laplace transforms frozen
//! from `tests/oracle/freeze_values.py`, and numerical Riemann–Liouville
//! differentiation of `K_α`.

// frozen reference values keep all printed digits
#![allow(clippy::excessive_precision)]

use approx::assert_relative_eq;
use thetafrac::kernel::{
    k_alpha, k_alpha_rl, theta, theta_rl, FractionalOrder, Kernel, ThetaTruncation,
};
use thetafrac::quad::{adaptive, AdaptiveOptions};

fn order(a: f64) -> FractionalOrder<f64> {
    FractionalOrder::new(a).unwrap()
}

#[test]
fn spec_constants() {
    let o = order(0.5);
    // 1/(2Γ(3/4)) and 1/(2Γ(1/4))
    assert_relative_eq!(
        k_alpha(o, 0.0, 1.0).unwrap(),
        0.40802446954913149054,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        k_alpha_rl(o, 0.0, 1.0).unwrap(),
        0.13790783141510465718,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        k_alpha(o, 1.0, 1.0).unwrap(),
        0.19166770828534176789,
        max_relative = 1e-12
    );
}

#[test]
fn kernels_match_talbot_inversion() {
    for (a, x, t, want) in [
        (0.4, 0.7, 0.5, 0.15785925515545191105),
        (0.5, 1.0, 1.0, 0.10624259021477466197),
        (0.3, 0.2, 0.05, 0.99036877721761165255),
        (0.7, 0.9, 2.0, 0.1094566610105419576),
    ] {
        assert_relative_eq!(
            k_alpha_rl(order(a), x, t).unwrap(),
            want,
            max_relative = 1e-11
        );
    }
    for (a, x, t, want) in [
        (0.5, 1.0, 1.0, 0.19166770828534176789),
        (0.3, 0.5, 0.1, 0.34278450415394181061),
        (0.7, 1.5, 0.3, 0.10267629673321323988),
    ] {
        assert_relative_eq!(k_alpha(order(a), x, t).unwrap(), want, max_relative = 1e-11);
    }
}

/// `J^α K(x,·)(t) = 1/Γ(1+α) ∫_0^{t^α} K(x, t - u^{1/α}) du`.
fn fractional_integral(o: FractionalOrder<f64>, x: f64, t: f64) -> f64 {
    let a = o.alpha();
    let opts = AdaptiveOptions::new(1e-15, 1e-13);
    let r = adaptive(
        |u: f64| {
            let tau = t - u.powf(1.0 / a);
            if tau <= 0.0 {
                0.0
            } else {
                k_alpha(o, x, tau).unwrap()
            }
        },
        0.0,
        t.powf(a),
        &opts,
    );
    assert!(r.converged);
    r.value / libm::tgamma(1.0 + a)
}

#[test]
fn rl_kernel_matches_numerical_differentiation() {
    for (a, x, t) in [(0.4, 0.7, 0.5), (0.6, 0.4, 1.2), (0.3, 1.0, 0.2)] {
        let o = order(a);
        let h = 2e-3 * t;
        let f = |s: f64| fractional_integral(o, x, s);
        // fourth-order central difference of the fractional integral
        let d = (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h);
        let want = k_alpha_rl(o, x, t).unwrap();
        assert_relative_eq!(d, want, max_relative = 1e-6);
    }
}

#[test]
fn theta_conserves_mass() {
    for a in [0.3, 0.5, 0.7] {
        let k = Kernel::new(order(a), ThetaTruncation::default()).unwrap();
        for (x, t) in [(0.3, 0.05), (0.5, 1.0), (0.9, 4.0)] {
            let opts = AdaptiveOptions::new(1e-13, 1e-12);
            let r = adaptive(
                |xi: f64| k.theta(x - xi, t).unwrap() + k.theta(x + xi, t).unwrap(),
                0.0,
                1.0,
                &opts,
            );
            assert!(
                (r.value - 1.0).abs() < 1e-10,
                "alpha {a}, x {x}, t {t}: {}",
                r.value
            );
        }
    }
}

#[test]
fn theta_matches_wider_cutoff_and_free_function() {
    let o = order(0.5);
    let trunc = ThetaTruncation::default();
    let value = theta(o, 0.5, 1.0, trunc).unwrap();
    let mut wide = k_alpha(o, 0.5, 1.0).unwrap();
    for m in 1..=40 {
        let s = 2.0 * m as f64;
        wide += k_alpha(o, 0.5 + s, 1.0).unwrap() + k_alpha(o, 0.5 - s, 1.0).unwrap();
    }
    assert!((value - wide).abs() < 1e-13);
    assert!(theta_rl(o, 1.0, 1.0, trunc).unwrap() > 0.0);
}

#[test]
fn theta_is_positive() {
    for a in [0.1, 0.5, 0.9] {
        let k = Kernel::new(order(a), ThetaTruncation::default()).unwrap();
        for i in 0..=40 {
            let x = -2.0 + 0.1 * i as f64;
            for t in [1e-3, 0.02, 0.5, 3.0, 30.0] {
                assert!(k.theta(x, t).unwrap() > 0.0, "alpha {a} x {x} t {t}");
            }
        }
    }
}

#[test]
fn rl_theta_at_boundary_is_flat_at_origin() {
    let k = Kernel::new(order(0.5), ThetaTruncation::default()).unwrap();
    // θ_rl(1,·) peaks near t = 0.01 for α = 1/2; the super-polynomial decay
    // shows once t^{-1/3} dominates the t^{α/2-1} prefactor
    let ts = [1e-5, 5e-6, 2.5e-6, 1.25e-6];
    let values: Vec<f64> = ts.iter().map(|&t| k.theta_rl(1.0, t).unwrap()).collect();
    for m in 1..=4 {
        let ratios: Vec<f64> = ts.iter().zip(&values).map(|(t, v)| v / t.powi(m)).collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "m={m}: {ratios:?}");
    }
    assert!(values[3] / ts[3].powi(4) < 1e-3 * values[0] / ts[0].powi(4));
}

#[test]
fn narrow_scalar_kernel_agrees_with_wide() {
    let o32 = FractionalOrder::new(0.5f32).unwrap();
    let k32 = Kernel::new(o32, ThetaTruncation::default()).unwrap();
    let k64 = Kernel::new(order(0.5), ThetaTruncation::default()).unwrap();
    for (x, t) in [(0.2f32, 0.1f32), (1.0, 1.0), (1.7, 3.0)] {
        let a = k32.theta(x, t).unwrap() as f64;
        let b = k64.theta(x as f64, t as f64).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-4);
    }
}
