//! Two-parameter Mittag-Leffler function on the non-positive real axis.

use super::gamma::recip_gamma;
use super::wright::sum_power_series;
use super::SeriesTolerance;
use crate::error::{invalid, Error, Result};
use crate::quad::{adaptive, AdaptiveOptions};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Below this argument the asymptotic expansion is tried first.
pub const ASYMPTOTIC_SWITCH: f64 = -10.0;

/// `E_{α,β}(z) = Σ z^k / Γ(αk + β)` for `0 < α <= 1` and `z <= 0`.
///
/// Regimes, in order: power series while its rounding error is within
/// tolerance; for `z < -10` the algebraic expansion
/// `-Σ_{k>=1} z^{-k}/Γ(β - αk)`; for `β = 1` the Pollard integral
/// `E_α(-x) = sin(απ)/(απ) ∫_0^∞ exp(-(xv)^{1/α}) / (v² + 2v cos απ + 1) dv`;
/// finally the expansion at any argument if its truncation error is small.
pub fn mittag_leffler<T: Scalar>(alpha: T, beta: T, z: T, tol: &SeriesTolerance<T>) -> Result<T> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(invalid("alpha", to_f64(alpha), "must lie in (0, 1]"));
    }
    if !beta.is_finite() {
        return Err(invalid("beta", to_f64(beta), "must be finite"));
    }
    if !(z <= T::zero()) {
        return Err(invalid(
            "z",
            to_f64(z),
            "only the non-positive axis is supported",
        ));
    }
    tol.validate()?;
    if z == T::zero() {
        return Ok(recip_gamma(beta));
    }
    if alpha == T::one() && beta == T::one() {
        return Ok(z.exp());
    }
    let series = sum_power_series(
        "mittag_leffler",
        z,
        false,
        |k| recip_gamma(alpha * from_usize(k) + beta),
        tol,
    );
    if let Ok(s) = &series {
        if s.meets(tol) {
            return Ok(s.value);
        }
    }
    if z < lit(ASYMPTOTIC_SWITCH) {
        if let Some(v) = asymptotic(alpha, beta, z, tol) {
            return Ok(v);
        }
    }
    if beta == T::one() && alpha < T::one() {
        return pollard(alpha, -z, tol);
    }
    if let Some(v) = asymptotic(alpha, beta, z, tol) {
        return Ok(v);
    }
    Err(match series {
        Err(e) => e,
        Ok(s) => Error::NonConvergent {
            function: "mittag_leffler",
            terms: s.terms,
            achieved: to_f64(s.rounding_error()),
        },
    })
}

/// Optimally truncated algebraic expansion; `None` if its smallest term is
/// not below `rel_tol · |sum|`.
fn asymptotic<T: Scalar>(alpha: T, beta: T, z: T, tol: &SeriesTolerance<T>) -> Option<T> {
    let inv = z.recip();
    let mut power = T::one();
    let mut sum = T::zero();
    let mut previous = T::infinity();
    let mut zero_run = 0usize;
    for k in 1..tol.max_terms {
        power = power * inv;
        let c = recip_gamma(beta - alpha * from_usize(k));
        if c == T::zero() {
            zero_run += 1;
            if zero_run > 4 {
                // every coefficient vanishes (e.g. α = 1, integer β)
                return None;
            }
            continue;
        }
        zero_run = 0;
        let term = -power * c;
        if !term.is_finite() || term.abs() > previous {
            return None;
        }
        sum = sum + term;
        previous = term.abs();
        if term.abs() <= tol.rel_tol * sum.abs() {
            return Some(sum);
        }
    }
    None
}

fn pollard<T: Scalar>(alpha: T, x: T, tol: &SeriesTolerance<T>) -> Result<T> {
    let one = T::one();
    let two = lit::<T>(2.0);
    let cos = (alpha * T::PI()).cos();
    let expo = one / alpha;
    let opts = AdaptiveOptions {
        abs_tol: T::zero(),
        rel_tol: tol.rel_tol.max(lit::<T>(16.0) * T::epsilon()),
        max_intervals: 200,
    };
    let inner = adaptive(
        |v: T| (-(x * v).powf(expo)).exp() / (v * v + two * v * cos + one),
        T::zero(),
        one,
        &opts,
    );
    // v = 1/w on [1, ∞)
    let outer = adaptive(
        |w: T| {
            if w == T::zero() {
                return T::zero();
            }
            (-(x / w).powf(expo)).exp() / (one + two * w * cos + w * w)
        },
        T::zero(),
        one,
        &opts,
    );
    if !(inner.converged && outer.converged) {
        return Err(Error::NonConvergent {
            function: "mittag_leffler (integral representation)",
            terms: 0,
            achieved: to_f64((inner.error + outer.error) / (inner.value + outer.value)),
        });
    }
    Ok((alpha * T::PI()).sin() / (alpha * T::PI()) * (inner.value + outer.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> SeriesTolerance<f64> {
        SeriesTolerance::default()
    }

    #[test]
    fn exponential_case() {
        assert_relative_eq!(
            mittag_leffler(1.0, 1.0, -2.0, &tol()).unwrap(),
            (-2.0f64).exp(),
            max_relative = 1e-15
        );
        assert_eq!(mittag_leffler(0.5, 1.0, 0.0, &tol()).unwrap(), 1.0);
    }

    #[test]
    fn all_regimes_agree_with_erfc_closed_form() {
        for &x in &[0.5f64, 2.0, 4.0, 7.0, 9.5, 12.0, 30.0] {
            let exact = if x < 20.0 {
                (x * x).exp() * libm::erfc(x)
            } else {
                // e^{x²} erfc(x) ~ 1/(x√π) (1 - 1/(2x²) + 3/(4x⁴) - 15/(8x⁶))
                let x2 = x * x;
                (1.0 - 0.5 / x2 + 0.75 / (x2 * x2) - 1.875 / (x2 * x2 * x2)
                    + 6.5625 / (x2 * x2 * x2 * x2))
                    / (x * std::f64::consts::PI.sqrt())
            };
            let v = mittag_leffler(0.5, 1.0, -x, &tol()).unwrap();
            assert_relative_eq!(v, exact, max_relative = 1e-10);
        }
    }

    #[test]
    fn pollard_and_asymptotic_agree_past_the_switch() {
        for &a in &[0.3f64, 0.6, 0.8] {
            let z = -14.0;
            let asym = asymptotic(a, 1.0, z, &tol());
            let integral = pollard(a, -z, &tol()).unwrap();
            if let Some(v) = asym {
                assert_relative_eq!(v, integral, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn domain_checks() {
        assert!(mittag_leffler(0.0, 1.0, -1.0, &tol()).is_err());
        assert!(mittag_leffler(0.5, 1.0, 1.0, &tol()).is_err());
    }
}
