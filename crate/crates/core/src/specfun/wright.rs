//! Wright functions `W_{λ,μ}(z) = Σ z^k / (k! Γ(λk + μ))` for `-1 < λ < 0`.
//!
//! The power series is summed directly while its rounding error stays below
//! the requested tolerance. When cancellation makes the series useless
//! (large |z|) two members of the family switch to integral
//! representations with positive integrands:
//!
//! * the M-function `M_ν(z) = W_{-ν,1-ν}(-z)`, through the Zolotarev-type
//!   integral of the one-sided stable density,
//! * `W_{-ν,ν}(-z) = ν ∫_z^∞ w M_ν(w) dw`, the same integral with the `w`
//!   integration done in closed form through the upper incomplete gamma.
//!
//! Other `(λ, μ)` pairs report `NonConvergent` when the series fails.

use std::sync::atomic::{AtomicU64, Ordering};

use super::gamma::{recip_gamma, upper_gamma_scaled};
use super::{SeriesTolerance, WrightSpec};
use crate::error::{invalid, Error, Result};
use crate::quad::{adaptive, AdaptiveOptions};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

static EVALUATIONS: AtomicU64 = AtomicU64::new(0);

/// Number of Wright-function evaluations performed by this process.
pub fn evaluation_count() -> u64 {
    EVALUATIONS.load(Ordering::Relaxed)
}

/// Outcome of summing a power series term by term.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum<T> {
    pub value: T,
    /// Σ |term|, drives the rounding error estimate.
    pub magnitude: T,
    pub terms: usize,
}

impl<T: Scalar> SeriesSum<T> {
    /// Relative rounding error estimate of the summed value.
    pub fn rounding_error(&self) -> T {
        if self.value == T::zero() {
            return T::infinity();
        }
        lit::<T>(4.0) * T::epsilon() * self.magnitude / self.value.abs()
    }

    pub fn meets(&self, tol: &SeriesTolerance<T>) -> bool {
        self.value.is_finite() && self.rounding_error() <= tol.rel_tol
    }
}

/// Sums `Σ_k power_k · coef(k)` where `power_k = z^k / k!` (`factorial`)
/// or `z^k`. Stops once three consecutive non-zero terms are each below
/// `rel_tol · |sum|` with decreasing magnitudes.
pub(crate) fn sum_power_series<T: Scalar, C: Fn(usize) -> T>(
    function: &'static str,
    z: T,
    factorial: bool,
    coef: C,
    tol: &SeriesTolerance<T>,
) -> Result<SeriesSum<T>> {
    let mut sum = T::zero();
    let mut magnitude = T::zero();
    let mut power = T::one();
    let mut recent: [T; 3] = [T::zero(); 3];
    let mut seen = 0usize;
    let mut last = T::zero();
    for k in 0..tol.max_terms {
        if k > 0 {
            power = if factorial {
                power * z / from_usize(k)
            } else {
                power * z
            };
        }
        let c = coef(k);
        let term = if c == T::zero() { T::zero() } else { power * c };
        if term.is_nan() {
            break;
        }
        sum = sum + term;
        magnitude = magnitude + term.abs();
        if !sum.is_finite() {
            break;
        }
        if term != T::zero() {
            recent = [recent[1], recent[2], term.abs()];
            seen += 1;
            last = term.abs();
        }
        let bound = tol.rel_tol * sum.abs();
        if seen >= 3
            && recent.iter().all(|&t| t < bound)
            && recent[0] > recent[1]
            && recent[1] > recent[2]
        {
            return Ok(SeriesSum {
                value: sum,
                magnitude,
                terms: k + 1,
            });
        }
        if power == T::zero() {
            return Ok(SeriesSum {
                value: sum,
                magnitude,
                terms: k + 1,
            });
        }
    }
    Err(Error::NonConvergent {
        function,
        terms: tol.max_terms,
        achieved: to_f64(last / sum.abs()),
    })
}

/// Which integral representation, if any, backs a Wright pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    /// μ = 1 + λ: the M-function.
    Mainardi,
    /// μ = −λ: time-derivative kernel of the fundamental solution.
    Derivative,
    General,
}

fn family<T: Scalar>(spec: &WrightSpec<T>) -> Family {
    let slack = lit::<T>(4.0) * T::epsilon();
    if (spec.mu - (T::one() + spec.lambda)).abs() <= slack {
        Family::Mainardi
    } else if (spec.mu + spec.lambda).abs() <= slack {
        Family::Derivative
    } else {
        Family::General
    }
}

fn check_spec<T: Scalar>(spec: &WrightSpec<T>, z: T) -> Result<()> {
    spec.validate()?;
    if !(z <= T::zero()) {
        return Err(invalid("z", to_f64(z), "Wright argument must be <= 0"));
    }
    Ok(())
}

/// Generalized Wright function `W_{λ,μ}(z)` for `-1 < λ < 0`, `z <= 0`.
pub fn wright_w<T: Scalar>(spec: WrightSpec<T>, z: T, tol: &SeriesTolerance<T>) -> Result<T> {
    check_spec(&spec, z)?;
    tol.validate()?;
    evaluate(&spec, z, tol, |k| {
        recip_gamma(spec.lambda * from_usize(k) + spec.mu)
    })
}

/// Wright M-function `M_α(z) = W_{-α,1-α}(-z)`, `0 < α < 1`, `z >= 0`.
pub fn wright_m<T: Scalar>(alpha: T, z: T, tol: &SeriesTolerance<T>) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(invalid("alpha", to_f64(alpha), "must lie in (0, 1)"));
    }
    if !(z >= T::zero()) {
        return Err(invalid("z", to_f64(z), "M-function argument must be >= 0"));
    }
    wright_w(WrightSpec::mainardi(alpha), -z, tol)
}

fn evaluate<T: Scalar, C: Fn(usize) -> T>(
    spec: &WrightSpec<T>,
    z: T,
    tol: &SeriesTolerance<T>,
    coef: C,
) -> Result<T> {
    EVALUATIONS.fetch_add(1, Ordering::Relaxed);
    if z == T::zero() {
        return Ok(coef(0));
    }
    let series = sum_power_series("wright_w", z, true, coef, tol);
    match series {
        Ok(s) if s.meets(tol) => return Ok(s.value),
        _ => {}
    }
    let nu = -spec.lambda;
    match family(spec) {
        Family::Mainardi => mainardi_integral(nu, -z, tol),
        Family::Derivative => derivative_integral(nu, -z, tol),
        Family::General => Err(match series {
            Err(e) => e,
            Ok(s) => Error::NonConvergent {
                function: "wright_w",
                terms: s.terms,
                achieved: to_f64(s.rounding_error()),
            },
        }),
    }
}

/// Wright function with the reciprocal-gamma coefficients tabulated once.
///
/// Produces bit-identical values to [`wright_w`] for the same pair.
#[derive(Debug, Clone)]
pub struct WrightTable<T> {
    spec: WrightSpec<T>,
    tol: SeriesTolerance<T>,
    coefficients: Vec<T>,
}

impl<T: Scalar> WrightTable<T> {
    pub fn new(spec: WrightSpec<T>, tol: SeriesTolerance<T>) -> Result<Self> {
        spec.validate()?;
        tol.validate()?;
        let coefficients = (0..tol.max_terms)
            .map(|k| recip_gamma(spec.lambda * from_usize(k) + spec.mu))
            .collect();
        Ok(Self {
            spec,
            tol,
            coefficients,
        })
    }

    pub fn spec(&self) -> WrightSpec<T> {
        self.spec
    }

    /// `W_{λ,μ}(z)`, `z <= 0`.
    pub fn eval(&self, z: T) -> Result<T> {
        if !(z <= T::zero()) {
            return Err(invalid("z", to_f64(z), "Wright argument must be <= 0"));
        }
        evaluate(&self.spec, z, &self.tol, |k| self.coefficients[k])
    }
}

/// `A(φ)` of the stable-density integral, returned as `(A, A(0))`.
fn zolotarev<T: Scalar>(nu: T, phi: T) -> T {
    let one = T::one();
    let p = one / (one - nu);
    let ratio = (nu * phi).sin() / phi.sin();
    ratio.powf(p) * ((one - nu) * phi).sin() / (nu * phi).sin()
}

fn zolotarev_origin<T: Scalar>(nu: T) -> T {
    let one = T::one();
    (one - nu) * nu.powf(nu / (one - nu))
}

fn integral_options<T: Scalar>(tol: &SeriesTolerance<T>) -> AdaptiveOptions<T> {
    AdaptiveOptions {
        abs_tol: T::zero(),
        rel_tol: tol.rel_tol.max(lit::<T>(16.0) * T::epsilon()),
        max_intervals: 200,
    }
}

fn finish<T: Scalar>(log_prefactor: T, value: T, converged: bool) -> Result<T> {
    if !converged {
        return Err(Error::NonConvergent {
            function: "wright_w (integral representation)",
            terms: 0,
            achieved: f64::NAN,
        });
    }
    Ok(log_prefactor.exp() * value)
}

/// `M_ν(x)` for `x > 0` from
/// `M_ν(x) = x^{ν/(1-ν)} / (π(1-ν)) ∫_0^π A(φ) exp(-x^{1/(1-ν)} A(φ)) dφ`.
fn mainardi_integral<T: Scalar>(nu: T, x: T, tol: &SeriesTolerance<T>) -> Result<T> {
    let one = T::one();
    let lam = x.powf(one / (one - nu));
    let a0 = zolotarev_origin(nu);
    let log_prefactor = nu / (one - nu) * x.ln() - (T::PI() * (one - nu)).ln() - lam * a0;
    if log_prefactor < lit(-745.0) {
        return Ok(T::zero());
    }
    let r = adaptive(
        |phi: T| {
            let a = zolotarev(nu, phi);
            if !a.is_finite() {
                return T::zero();
            }
            a * (-(lam * (a - a0))).exp()
        },
        T::zero(),
        T::PI(),
        &integral_options(tol),
    );
    finish(log_prefactor, r.value, r.converged)
}

/// `W_{-ν,ν}(-x) = (ν/π) ∫_0^π A^{ν-1} Γ(2-ν, x^{1/(1-ν)} A) dφ` for `x > 0`.
fn derivative_integral<T: Scalar>(nu: T, x: T, tol: &SeriesTolerance<T>) -> Result<T> {
    let one = T::one();
    let two = lit::<T>(2.0);
    let lam = x.powf(one / (one - nu));
    let a0 = zolotarev_origin(nu);
    let log_prefactor = (nu / T::PI()).ln() - lam * a0;
    if log_prefactor < lit(-745.0) {
        return Ok(T::zero());
    }
    let r = adaptive(
        |phi: T| {
            let a = zolotarev(nu, phi);
            if !a.is_finite() {
                return T::zero();
            }
            let damp = (-(lam * (a - a0))).exp();
            if damp == T::zero() {
                return T::zero();
            }
            a.powf(nu - one) * upper_gamma_scaled(two - nu, lam * a) * damp
        },
        T::zero(),
        T::PI(),
        &integral_options(tol),
    );
    finish(log_prefactor, r.value, r.converged)
}
