//! Numerical Laplace transforms of sampled functions and the moment
//! functional `∫_0^1 e^{(1-ξ)z} u0(ξ) dξ`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{Profile, TimeSeries};
use crate::quad::GaussRule;
use crate::scalar::{from_usize, lit, to_f64, Scalar};
use crate::specfun::gamma_increment;

/// Log-spaced transform variables and the truncation time used with them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceProbe {
    pub s_values: Vec<f64>,
    pub t_horizon: f64,
    /// Tail estimate per `s`, filled in by the checks that use the probe.
    pub tail_bound: Vec<f64>,
}

impl LaplaceProbe {
    pub fn log_spaced(s_lo: f64, s_hi: f64, n: usize, t_horizon: f64) -> Result<Self> {
        if !(s_lo > 0.0 && s_hi >= s_lo) {
            return Err(invalid("s", s_lo, "need 0 < s_lo <= s_hi"));
        }
        if !(t_horizon > 0.0) {
            return Err(invalid("t_horizon", t_horizon, "must be positive"));
        }
        let s_values = log_space(s_lo, s_hi, n);
        Ok(Self {
            tail_bound: vec![0.0; s_values.len()],
            s_values,
            t_horizon,
        })
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// A transform value with its quadrature and truncation error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceValue<T> {
    pub value: T,
    pub quad_error: T,
    pub tail: T,
}

/// `∫_lo^{t_last} f(t) e^{-s(t-shift)} dt` with `f = t^γ φ` and `φ`
/// interpolated by local cubics through samples `stride` apart. On
/// `[lo, t_0]` `φ` is held at `φ(t_0)` and `t^γ` is integrated exactly.
fn product_rule<T: Scalar>(
    f: &TimeSeries<T>,
    s: T,
    gamma: T,
    lo: T,
    shift: T,
    stride: usize,
    rule: &(Vec<T>, Vec<T>),
) -> T {
    let mut idx: Vec<usize> = (0..f.len()).step_by(stride).collect();
    if *idx.last().unwrap() != f.len() - 1 {
        idx.push(f.len() - 1);
    }
    let pts: Vec<(T, T)> = idx
        .iter()
        .map(|&k| (f.t[k], f.values[k] * f.t[k].powf(-gamma)))
        .collect();
    let n = pts.len();
    let mut total = T::zero();
    let t0 = pts[0].0;
    if t0 > lo {
        let head = if gamma == T::zero() {
            // ∫_lo^{t0} e^{-s(t-shift)} dt
            (-s * (lo - shift)).exp() * -(-s * (t0 - lo)).exp_m1() / s
        } else {
            let a = gamma + T::one();
            (s * shift).exp() * s.powf(-a) * gamma_increment(a, s * lo, s * t0)
        };
        total = total + pts[0].1 * head;
    }
    for k in 0..n.saturating_sub(1) {
        let (a, b) = (pts[k].0, pts[k + 1].0);
        let h = b - a;
        // four-point stencil around the panel, shifted inwards at the ends
        let stencil = &pts[k.saturating_sub(1).min(n.saturating_sub(4))
            ..(k.saturating_sub(1).min(n.saturating_sub(4)) + 4).min(n)];
        let mut panel = T::zero();
        for (c, wt) in rule.0.iter().zip(&rule.1) {
            let t = a + *c * h;
            let mut interp = T::zero();
            for (i, (ti, fi)) in stencil.iter().enumerate() {
                let mut l = T::one();
                for (j, (tj, _)) in stencil.iter().enumerate() {
                    if i != j {
                        l = l * (t - *tj) / (*ti - *tj);
                    }
                }
                interp = interp + l * *fi;
            }
            let weight = if gamma == T::zero() {
                T::one()
            } else {
                t.powf(gamma)
            };
            panel = panel + *wt * weight * interp * (-s * (t - shift)).exp();
        }
        total = total + panel * h;
    }
    total
}

fn transform<T: Scalar>(
    f: &TimeSeries<T>,
    s: T,
    gamma: T,
    lo: T,
    shift: T,
    rel_tol: T,
) -> Result<LaplaceValue<T>> {
    if !(s > T::zero()) {
        return Err(invalid(
            "s",
            to_f64(s),
            "transform variable must be positive",
        ));
    }
    if f.is_empty() || f.t[0] < lo {
        return Err(invalid(
            "f",
            0.0,
            "samples must lie in the integration window",
        ));
    }
    let rule = GaussRule::<T>::legendre(8).unit_interval();
    let fine = product_rule(f, s, gamma, lo, shift, 1, &rule);
    let coarse = product_rule(f, s, gamma, lo, shift, 2, &rule);
    // fourth-order interpolation: halving the spacing cuts the error by 16
    let quad_error = (fine - coarse).abs() / lit(15.0);
    let h = *f.t.last().unwrap();
    let tail = f.values.last().unwrap().abs() * (-s * (h - shift)).exp() / s;
    if tail > rel_tol * fine.abs() && tail > T::min_positive_value() {
        return Err(Error::TailDominates {
            s: to_f64(s),
            tail: to_f64(tail),
            tolerance: to_f64(rel_tol * fine.abs()),
        });
    }
    Ok(LaplaceValue {
        value: fine,
        quad_error,
        tail,
    })
}

/// `∫_0^{t_horizon} f(t) e^{-st} dt` for samples of `f` on `(0, t_horizon]`
/// behaving like `t^γ` at the origin (`γ = singular_exponent ∈ (-1, 0]`).
/// The tail beyond the last sample is estimated by `|f(t_H)| e^{-s t_H}/s`;
/// if it exceeds `rel_tol` times the value, `TailDominates` is returned.
pub fn numeric_laplace<T: Scalar>(
    f: &TimeSeries<T>,
    s: T,
    singular_exponent: T,
    rel_tol: T,
) -> Result<LaplaceValue<T>> {
    if !(singular_exponent > -T::one() && singular_exponent <= T::zero()) {
        return Err(invalid(
            "singular_exponent",
            to_f64(singular_exponent),
            "must lie in (-1, 0]",
        ));
    }
    transform(f, s, singular_exponent, T::zero(), T::zero(), rel_tol)
}

/// `∫_{t_lo}^{t_horizon} f(t) e^{-s(t - t_lo)} dt` for samples of a function
/// that is bounded on `[t_lo, t_horizon]` (samples before `t_lo` are ignored).
pub fn numeric_laplace_from<T: Scalar>(
    f: &TimeSeries<T>,
    s: T,
    t_lo: T,
    rel_tol: T,
) -> Result<LaplaceValue<T>> {
    let mut window = f.window(t_lo, T::infinity());
    if window.is_empty() {
        return Err(invalid("t_lo", to_f64(t_lo), "no samples after t_lo"));
    }
    if window.t[0] > t_lo && f.t[0] < t_lo {
        // start the window exactly at t_lo with a cubic estimate
        window.t.insert(0, t_lo);
        window.values.insert(0, cubic_at(f, t_lo));
    }
    transform(&window, s, T::zero(), t_lo, t_lo, rel_tol)
}

/// Four-point Lagrange interpolation of `f` at `t` inside its range.
fn cubic_at<T: Scalar>(f: &TimeSeries<T>, t: T) -> T {
    let n = f.len();
    if n < 4 {
        return f.at(t);
    }
    let k = f.t.partition_point(|&x| x <= t).saturating_sub(1);
    let start = k.saturating_sub(1).min(n - 4);
    let mut out = T::zero();
    for i in start..start + 4 {
        let mut l = T::one();
        for j in start..start + 4 {
            if i != j {
                l = l * (t - f.t[j]) / (f.t[i] - f.t[j]);
            }
        }
        out = out + l * f.values[i];
    }
    out
}

/// Exact `∫ p(t) e^{-st} dt` for the piecewise-linear `p` through
/// `(t_k, v_k)`, zero outside `[t_0, t_last]`.
pub fn laplace_piecewise_linear<T: Scalar>(t: &[T], v: &[T], s: T) -> T {
    let mut total = T::zero();
    for k in 0..t.len().saturating_sub(1) {
        let (a, h) = (t[k], t[k + 1] - t[k]);
        let x = s * h;
        let e = (-x).exp();
        let m0 = -(-x).exp_m1() / s;
        let m1 = (-(-x).exp_m1() - x * e) / (s * s);
        let slope = (v[k + 1] - v[k]) / h;
        total = total + (-s * a).exp() * (v[k] * m0 + slope * m1);
    }
    total
}

/// `ln |∫_0^1 e^{-zξ} u(ξ) dξ|` and its sign for `u` linear between the
/// uniform nodes `ξ_k = k/(n-1)`, summed with a running log-scale so that
/// no intermediate under- or overflows.
fn ln_damped_integral<T: Scalar>(u: &[T], z: T) -> (T, T) {
    let n = u.len();
    let h = T::one() / from_usize::<T>(n - 1);
    let x = z * h;
    let e = (-x).exp();
    let (m0, m1) = if x == T::zero() {
        (h, h * h / lit(2.0))
    } else {
        (-(-x).exp_m1() / z, (-(-x).exp_m1() - x * e) / (z * z))
    };
    // panel k carries the factor e^{-z ξ_k}
    let mut terms: Vec<(T, T)> = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        let c = u[k] * m0 + (u[k + 1] - u[k]) / h * m1;
        if c != T::zero() {
            terms.push((-z * from_usize::<T>(k) * h + c.abs().ln(), c.signum()));
        }
    }
    if terms.is_empty() {
        return (T::neg_infinity(), T::zero());
    }
    let top = terms.iter().fold(T::neg_infinity(), |m, t| m.max(t.0));
    let sum = terms
        .iter()
        .fold(T::zero(), |acc, (l, sg)| acc + *sg * (*l - top).exp());
    if sum == T::zero() {
        return (T::neg_infinity(), T::zero());
    }
    (top + sum.abs().ln(), sum.signum())
}

/// Node values used for moment integrals: the samples themselves, or the
/// function at `MOMENT_NODES` uniform points.
pub const MOMENT_NODES: usize = 4097;

fn nodes_of<T: Scalar>(u0: &Profile<T>) -> Vec<T> {
    match u0 {
        Profile::Samples(v) if v.len() >= 2 => v.clone(),
        _ => (0..MOMENT_NODES)
            .map(|k| u0.eval(from_usize::<T>(k) / from_usize::<T>(MOMENT_NODES - 1)))
            .collect(),
    }
}

/// `(ln|F(z)|, sign F(z))` for `F(z) = ∫_0^1 e^{(1-ξ)z} u0(ξ) dξ`, exact for
/// piecewise-linear samples.
pub fn ln_moment_functional<T: Scalar>(u0: &Profile<T>, z: T) -> (T, T) {
    let (l, sg) = ln_damped_integral(&nodes_of(u0), z);
    (z + l, sg)
}

/// `F(z) = ∫_0^1 e^{(1-ξ)z} u0(ξ) dξ`; overflows to ±∞ only when `F` does.
pub fn moment_functional<T: Scalar>(u0: &Profile<T>, z: T) -> T {
    let (l, sg) = ln_moment_functional(u0, z);
    sg * l.exp()
}

/// `∫_0^1 e^{(ξ-1)z} u0(ξ) dξ`, the decaying companion of the moment.
pub fn reflected_moment<T: Scalar>(u0: &Profile<T>, z: T) -> T {
    let mut u = nodes_of(u0);
    u.reverse();
    let (l, sg) = ln_damped_integral(&u, z);
    sg * l.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_transform() {
        let f = TimeSeries::from_fn(log_space(1e-6, 20.0, 3000), |t: f64| (-t).exp()).unwrap();
        let r = numeric_laplace(&f, 1.0, 0.0, 1e-6).unwrap();
        assert_relative_eq!(r.value, 0.5 * (1.0 - (-40.0f64).exp()), max_relative = 1e-7);
        assert!(r.quad_error < 1e-6);
        let zero = TimeSeries::from_fn(vec![0.5, 1.0], |_| 0.0).unwrap();
        assert_eq!(numeric_laplace(&zero, 2.0, 0.0, 1e-6).unwrap().value, 0.0);
    }

    #[test]
    fn singular_transform() {
        // L{t^{-1/2}} = sqrt(π/s)
        let f = TimeSeries::from_fn(log_space(1e-8, 60.0, 2000), |t: f64| t.powf(-0.5)).unwrap();
        let r = numeric_laplace(&f, 2.0, -0.5, 1e-6).unwrap();
        assert_relative_eq!(
            r.value,
            (std::f64::consts::PI / 2.0).sqrt(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn short_horizon_is_flagged() {
        let f = TimeSeries::from_fn(log_space(1e-3, 1.0, 100), |_| 1.0f64).unwrap();
        assert!(matches!(
            numeric_laplace(&f, 1.0, 0.0, 1e-6),
            Err(Error::TailDominates { .. })
        ));
    }

    #[test]
    fn shifted_window() {
        let f = TimeSeries::from_fn(log_space(0.1, 40.0, 3000), |t: f64| (-t).exp()).unwrap();
        // ∫_2^∞ e^{-t} e^{-(t-2)} dt = e^{-2}/2
        let r = numeric_laplace_from(&f, 1.0, 2.0, 1e-6).unwrap();
        assert_relative_eq!(r.value, 0.5 * (-2.0f64).exp(), max_relative = 1e-7);
    }

    #[test]
    fn piecewise_linear_is_exact() {
        // hat on [0, 2] peaking at 1: (1 - e^{-s})² / s²
        let s = 1.7f64;
        let v = laplace_piecewise_linear(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0], s);
        assert_relative_eq!(
            v,
            (1.0 - (-s).exp()).powi(2) / (s * s),
            max_relative = 1e-14
        );
    }

    #[test]
    fn moments_of_simple_profiles() {
        let one = Profile::constant(1.0f64);
        for z in [0.5, 20.0, 200.0, 900.0] {
            let (l, sg) = ln_moment_functional(&one, z);
            assert_eq!(sg, 1.0);
            // ln((e^z - 1)/z)
            let exact = z + (-(-z).exp_m1()).ln() - z.ln();
            assert_relative_eq!(l, exact, max_relative = 1e-13);
            assert_relative_eq!(
                reflected_moment(&one, z),
                -(-z).exp_m1() / z,
                max_relative = 1e-12
            );
        }
        assert_eq!(moment_functional(&Profile::zero(), 3.0f64), 0.0);
    }
}
