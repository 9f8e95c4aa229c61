//! Reciprocal and incomplete gamma functions.

use crate::scalar::{from_usize, lit, sin_pi, Scalar};

/// `1/Γ(x)`.
///
/// Exactly zero at the poles `x = 0, -1, -2, …`. For large positive `x`
/// the value underflows to zero (beyond about `x ≈ 171.6` in `f64`, where
/// Γ overflows). For large negative non-integer `x` the magnitude grows
/// like `Γ(1 - x)` and saturates at a signed infinity. NaN maps to NaN.
pub fn recip_gamma<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x == T::infinity() {
        return T::zero();
    }
    if x <= T::zero() && x == x.floor() {
        return T::zero();
    }
    if x >= lit(0.5) {
        let g = x.tgamma();
        if g.is_infinite() {
            T::zero()
        } else {
            g.recip()
        }
    } else {
        // reflection: 1/Γ(x) = sin(πx) Γ(1-x) / π
        sin_pi(x) * (T::one() - x).tgamma() / T::PI()
    }
}

/// Lower incomplete gamma `γ(a, x)` by its power series, `x >= 0`, `a > 0`.
fn lower_series<T: Scalar>(a: T, x: T) -> T {
    if x == T::zero() {
        return T::zero();
    }
    let mut ap = a;
    let mut del = a.recip();
    let mut sum = del;
    for _ in 0..1000 {
        ap = ap + T::one();
        del = del * x / ap;
        sum = sum + del;
        if del.abs() < sum.abs() * T::epsilon() {
            break;
        }
    }
    sum * (a * x.ln() - x).exp()
}

/// Continued fraction for `e^x x^{-a} Γ(a, x)` (modified Lentz), `x > a + 1`.
fn upper_fraction<T: Scalar>(a: T, x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let two = lit::<T>(2.0);
    let mut b = x + T::one() - a;
    let mut c = tiny.recip();
    let mut d = b.recip();
    let mut h = d;
    for i in 1..1000usize {
        let fi = from_usize::<T>(i);
        let an = -fi * (fi - a);
        b = b + two;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let del = d * c;
        h = h * del;
        if (del - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    h
}

/// Upper incomplete gamma scaled by `e^x`: returns `e^x Γ(a, x)` for
/// `a > 0`, `x >= 0`. Finite for every finite `x`.
pub fn upper_gamma_scaled<T: Scalar>(a: T, x: T) -> T {
    if x > a + T::one() {
        x.powf(a) * upper_fraction(a, x)
    } else {
        x.exp() * (a.tgamma() - lower_series(a, x))
    }
}

/// `∫_{x1}^{x2} u^{a-1} e^{-u} du` for `0 <= x1 <= x2`, `a > 0`.
///
/// Uses the lower series near the origin and differences of the upper
/// function in the tail, so neither branch subtracts two values close to Γ(a).
pub fn gamma_increment<T: Scalar>(a: T, x1: T, x2: T) -> T {
    if x2 <= x1 {
        return T::zero();
    }
    let knee = a + T::one();
    if x2 <= knee {
        lower_series(a, x2) - lower_series(a, x1)
    } else if x1 > knee {
        let u1 = (-x1).exp() * x1.powf(a) * upper_fraction(a, x1);
        let u2 = (-x2).exp() * x2.powf(a) * upper_fraction(a, x2);
        u1 - u2
    } else {
        let mid_lower = lower_series(a, knee) - lower_series(a, x1);
        let mid_upper = (-knee).exp() * knee.powf(a) * upper_fraction(a, knee)
            - (-x2).exp() * x2.powf(a) * upper_fraction(a, x2);
        mid_lower + mid_upper
    }
}
