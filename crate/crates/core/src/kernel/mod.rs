//! Fundamental solution `K_α`, the Theta function `θ_α = Σ_m K_α(x+2m, t)`,
//! their Riemann–Liouville time derivatives of order `1-α`, and the
//! closed-form Laplace transforms.
//!
//! With `ν = α/2` and `z = |x| t^{-ν}`:
//!
//! * `K_α(x,t) = ½ t^{-ν} M_ν(z)`,
//! * `D_t^{1-α} K_α(x,t) = ½ t^{ν-1} W_{-ν,ν}(-z)`, the inverse transform of
//!   `½ s^{-ν} e^{-|x| s^ν}`.
//!
//! Image sums are truncated with the exponential majorant
//! `C t^{-ν} exp(-σ t^{-α/(2-α)} |x|^{2/(2-α)})` (and `C t^{ν-1}` for the
//! derivative), valid once `|x|² ≥ t^α`. `C = 10` is fixed and `σ` is fitted
//! when the [`Kernel`] is built.

mod profile;

pub use profile::ProfileTable;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Scalar};
use crate::specfun::{wright_m, wright_w, SeriesTolerance, WrightSpec, WrightTable};

/// The order `α ∈ (0,1)`; every derived exponent is recomputed from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder<T> {
    alpha: T,
}

impl<T: Scalar> FractionalOrder<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(invalid("alpha", to_f64(alpha), "must lie in (0, 1)"));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// `α/2`, the order of the M-function inside `K_α`.
    pub fn half(&self) -> T {
        self.alpha / lit(2.0)
    }

    /// `1 - α`, the order of the Riemann–Liouville derivative.
    pub fn co(&self) -> T {
        T::one() - self.alpha
    }

    /// `2/(2-α)`, the spatial exponent in the Gaussian-like decay.
    pub fn sigma_exp(&self) -> T {
        lit::<T>(2.0) / (lit::<T>(2.0) - self.alpha)
    }

    /// `α/(2-α)`, the temporal exponent in the same decay.
    pub fn t_exp(&self) -> T {
        self.alpha / (lit::<T>(2.0) - self.alpha)
    }

    /// Asymptotic decay rate of `M_ν(z) ~ exp(-σ z^{1/(1-ν)})`:
    /// `σ = (1-ν) ν^{ν/(1-ν)}` with `ν = α/2`.
    pub fn sharp_sigma(&self) -> T {
        let nu = self.half();
        let one = T::one();
        (one - nu) * nu.powf(nu / (one - nu))
    }
}

/// Truncation control for the image sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaTruncation<T> {
    pub abs_tol: T,
    pub max_m: usize,
}

impl<T: Scalar> Default for ThetaTruncation<T> {
    fn default() -> Self {
        Self {
            abs_tol: lit::<T>(1e-14).max(lit::<T>(16.0) * T::epsilon()),
            max_m: 64,
        }
    }
}

impl<T: Scalar> ThetaTruncation<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero()) {
            return Err(invalid("abs_tol", to_f64(self.abs_tol), "must be positive"));
        }
        if self.max_m == 0 {
            return Err(invalid("max_m", 0.0, "must be at least 1"));
        }
        Ok(())
    }
}

/// `C exp(-σ z^{2/(2-α)})` dominating a kernel profile for `z ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailMajorant<T> {
    pub c: T,
    pub sigma: T,
}

/// Fixed majorant constant.
pub const MAJORANT_C: f64 = 10.0;

/// Partial image sum with its certified tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSum<T> {
    pub value: T,
    /// Largest `|m|` included.
    pub images: usize,
    pub tail_bound: T,
}

/// `K_α(x,t) = ½ t^{-α/2} M_{α/2}(|x| t^{-α/2})`.
pub fn k_alpha<T: Scalar>(order: FractionalOrder<T>, x: T, t: T) -> Result<T> {
    check_time(t)?;
    let nu = order.half();
    let scale = t.powf(-nu);
    Ok(lit::<T>(0.5) * scale * wright_m(nu, x.abs() * scale, &SeriesTolerance::default())?)
}

/// `D_t^{1-α} K_α(x,t) = ½ t^{α/2-1} W_{-α/2,α/2}(-|x| t^{-α/2})`.
pub fn k_alpha_rl<T: Scalar>(order: FractionalOrder<T>, x: T, t: T) -> Result<T> {
    check_time(t)?;
    let nu = order.half();
    let scale = t.powf(-nu);
    let w = wright_w(
        WrightSpec::derivative(nu),
        -(x.abs() * scale),
        &SeriesTolerance::default(),
    )?;
    Ok(lit::<T>(0.5) * t.powf(nu - T::one()) * w)
}

/// `θ_α(x,t)` for `|x| ≤ 2`. Builds a [`Kernel`]; reuse one for repeated calls.
pub fn theta<T: Scalar>(
    order: FractionalOrder<T>,
    x: T,
    t: T,
    trunc: ThetaTruncation<T>,
) -> Result<T> {
    Kernel::new(order, trunc)?.theta(x, t)
}

/// `D_t^{1-α} θ_α(x,t)` for `|x| ≤ 2`.
pub fn theta_rl<T: Scalar>(
    order: FractionalOrder<T>,
    x: T,
    t: T,
    trunc: ThetaTruncation<T>,
) -> Result<T> {
    Kernel::new(order, trunc)?.theta_rl(x, t)
}

/// `L{K_α(x,·)}(s) = ½ s^{α/2-1} e^{-|x| s^{α/2}}`.
pub fn k_laplace_closed<T: Scalar>(order: FractionalOrder<T>, x: T, s: T) -> Result<T> {
    check_s(s)?;
    let nu = order.half();
    let z = s.powf(nu);
    Ok(lit::<T>(0.5) * s.powf(nu - T::one()) * (-(x.abs() * z)).exp())
}

/// `L{D_t^{1-α} K_α(x,·)}(s) = ½ s^{-α/2} e^{-|x| s^{α/2}}`.
pub fn k_rl_laplace_closed<T: Scalar>(order: FractionalOrder<T>, x: T, s: T) -> Result<T> {
    check_s(s)?;
    let nu = order.half();
    let z = s.powf(nu);
    Ok(lit::<T>(0.5) * s.powf(-nu) * (-(x.abs() * z)).exp())
}

/// `L{θ_α(x,·)}(s) = ½ s^{α/2-1} [e^{x z} + e^{(2-x) z}] / (e^{2z} - 1)`,
/// `z = s^{α/2}`, for `0 ≤ x ≤ 1`, computed as
/// `½ s^{α/2-1} [e^{(x-2) z} + e^{-x z}] / (1 - e^{-2z})`.
pub fn theta_laplace_closed<T: Scalar>(order: FractionalOrder<T>, x: T, s: T) -> Result<T> {
    check_s(s)?;
    if !(x >= T::zero() && x <= T::one()) {
        return Err(invalid("x", to_f64(x), "must lie in [0, 1]"));
    }
    let nu = order.half();
    let two = lit::<T>(2.0);
    let z = s.powf(nu);
    let num = ((x - two) * z).exp() + (-(x * z)).exp();
    let den = -(-(two * z)).exp_m1();
    Ok(lit::<T>(0.5) * s.powf(nu - T::one()) * num / den)
}

/// `L{D_t^{1-α} θ_α(1,·)}(s) = ½ s^{-α/2} / sinh(s^{α/2})`.
pub fn theta_rl_laplace_closed<T: Scalar>(order: FractionalOrder<T>, s: T) -> Result<T> {
    check_s(s)?;
    let nu = order.half();
    let two = lit::<T>(2.0);
    let z = s.powf(nu);
    // 1/sinh z = 2 e^{-z} / (1 - e^{-2z})
    let csch = two * (-z).exp() / -(-(two * z)).exp_m1();
    Ok(lit::<T>(0.5) * s.powf(-nu) * csch)
}

fn check_time<T: Scalar>(t: T) -> Result<()> {
    if !(t > T::zero() && t.is_finite()) {
        return Err(invalid("t", to_f64(t), "time must be positive and finite"));
    }
    Ok(())
}

fn check_s<T: Scalar>(s: T) -> Result<()> {
    if !(s > T::zero() && s.is_finite()) {
        return Err(invalid("s", to_f64(s), "Laplace variable must be positive"));
    }
    Ok(())
}

/// Which time derivative an image sum is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// `K_α` itself.
    Plain,
    /// `D_t^{1-α} K_α`.
    Rl,
}

/// Cached evaluator for one order: coefficient tables and fitted majorants.
#[derive(Debug, Clone)]
pub struct Kernel<T> {
    order: FractionalOrder<T>,
    trunc: ThetaTruncation<T>,
    m_profile: ProfileTable<T>,
    w_profile: ProfileTable<T>,
    majorant: TailMajorant<T>,
    majorant_rl: TailMajorant<T>,
}

impl<T: Scalar> Kernel<T> {
    pub fn new(order: FractionalOrder<T>, trunc: ThetaTruncation<T>) -> Result<Self> {
        Self::with_tolerance(order, trunc, SeriesTolerance::default())
    }

    pub fn with_tolerance(
        order: FractionalOrder<T>,
        trunc: ThetaTruncation<T>,
        tol: SeriesTolerance<T>,
    ) -> Result<Self> {
        trunc.validate()?;
        let nu = order.half();
        let m_table = WrightTable::new(WrightSpec::mainardi(nu), tol)?;
        let w_table = WrightTable::new(WrightSpec::derivative(nu), tol)?;
        let m_profile = tabulate(&m_table)?;
        let w_profile = tabulate(&w_table)?;
        let majorant = fit_majorant(order, |z| Ok(m_profile.eval(z)))?;
        let majorant_rl = fit_majorant(order, |z| Ok(w_profile.eval(z)))?;
        Ok(Self {
            order,
            trunc,
            m_profile,
            w_profile,
            majorant,
            majorant_rl,
        })
    }

    pub fn order(&self) -> FractionalOrder<T> {
        self.order
    }

    pub fn truncation(&self) -> ThetaTruncation<T> {
        self.trunc
    }

    pub fn majorant(&self, flavor: Flavor) -> TailMajorant<T> {
        match flavor {
            Flavor::Plain => self.majorant,
            Flavor::Rl => self.majorant_rl,
        }
    }

    /// `M_{α/2}(z)`, `z ≥ 0`, from the interpolation table.
    pub fn profile(&self, z: T) -> T {
        self.m_profile.eval(z)
    }

    /// `W_{-α/2,α/2}(-z)`, `z ≥ 0`, from the interpolation table.
    pub fn profile_rl(&self, z: T) -> T {
        self.w_profile.eval(z)
    }

    pub fn profile_table(&self, flavor: Flavor) -> &ProfileTable<T> {
        match flavor {
            Flavor::Plain => &self.m_profile,
            Flavor::Rl => &self.w_profile,
        }
    }

    pub fn k(&self, x: T, t: T) -> Result<T> {
        self.image(Flavor::Plain, x, t)
    }

    pub fn k_rl(&self, x: T, t: T) -> Result<T> {
        self.image(Flavor::Rl, x, t)
    }

    fn image(&self, flavor: Flavor, x: T, t: T) -> Result<T> {
        check_time(t)?;
        let scales = self.scales(flavor, t);
        Ok(self.scaled_image(flavor, scales, x.abs()))
    }

    /// `(t^{-ν}, ½ · time prefactor)` for one flavor.
    fn scales(&self, flavor: Flavor, t: T) -> (T, T) {
        let nu = self.order.half();
        let scale = t.powf(-nu);
        let half = lit::<T>(0.5);
        let pre = match flavor {
            Flavor::Plain => half * scale,
            Flavor::Rl => half * t.powf(nu - T::one()),
        };
        (scale, pre)
    }

    fn scaled_image(&self, flavor: Flavor, (scale, pre): (T, T), d: T) -> T {
        let z = d * scale;
        pre * match flavor {
            Flavor::Plain => self.profile(z),
            Flavor::Rl => self.profile_rl(z),
        }
    }

    pub fn theta(&self, x: T, t: T) -> Result<T> {
        Ok(self.image_sum(Flavor::Plain, x, t)?.value)
    }

    pub fn theta_rl(&self, x: T, t: T) -> Result<T> {
        Ok(self.image_sum(Flavor::Rl, x, t)?.value)
    }

    /// `Σ_{|m| ≤ M} K(x + 2m, t)` with `M` chosen from the tail majorant.
    pub fn image_sum(&self, flavor: Flavor, x: T, t: T) -> Result<ImageSum<T>> {
        let (_, pre) = self.scales(flavor, t);
        let reduced = self.profile_sum(flavor, x, t)?;
        Ok(ImageSum {
            value: pre * reduced.value,
            images: reduced.images,
            tail_bound: pre * reduced.tail_bound,
        })
    }

    /// The image sum without its time prefactor:
    /// `Φ(x,t) = Σ_m F(|x + 2m| t^{-α/2})`, so that `θ = ½ t^{-α/2} Φ` and
    /// `D_t^{1-α} θ = ½ t^{α/2-1} Φ_rl`.
    pub fn profile_sum(&self, flavor: Flavor, x: T, t: T) -> Result<ImageSum<T>> {
        check_time(t)?;
        let two = lit::<T>(2.0);
        if !(x.abs() <= two) {
            return Err(invalid(
                "x",
                to_f64(x),
                "theta is evaluated on [-2, 2] only",
            ));
        }
        let xa = x.abs();
        let (scale, pre) = self.scales(flavor, t);
        let (images, tail_bound) = self.truncation_for(flavor, xa, t)?;
        let f = |d: T| match flavor {
            Flavor::Plain => self.profile(d * scale),
            Flavor::Rl => self.profile_rl(d * scale),
        };
        let mut value = f(xa);
        for m in 1..=images {
            let shift = two * from_usize::<T>(m);
            value = value + (f(xa + shift) + f(shift - xa));
        }
        Ok(ImageSum {
            value,
            images,
            tail_bound: tail_bound / pre,
        })
    }

    /// Smallest `M` whose tail `Σ_{|m|>M}` is certified below `abs_tol`.
    fn truncation_for(&self, flavor: Flavor, xa: T, t: T) -> Result<(usize, T)> {
        let two = lit::<T>(2.0);
        let nu = self.order.half();
        let maj = self.majorant(flavor);
        let prefactor = match flavor {
            Flavor::Plain => t.powf(-nu),
            Flavor::Rl => t.powf(nu - T::one()),
        };
        let b = maj.sigma * t.powf(-self.order.t_exp());
        let p = self.order.sigma_exp();
        // images closer than t^{α/2} lie outside the majorant's regime
        let reach = t.powf(nu);
        let first = ((reach + xa) / two)
            .ceil()
            .to_usize()
            .unwrap_or(usize::MAX)
            .max(1);
        let mut achieved = T::infinity();
        for m in first..=self.trunc.max_m {
            let mm = two * from_usize::<T>(m);
            let tail = maj.c
                * prefactor
                * lit::<T>(0.5)
                * (decay_integral(b, p, mm + xa) + decay_integral(b, p, mm - xa));
            achieved = tail;
            if tail <= self.trunc.abs_tol {
                return Ok((m, tail));
            }
        }
        Err(Error::TruncationCapReached {
            max_m: self.trunc.max_m,
            achieved_bound: to_f64(achieved),
        })
    }
}

/// Relative accuracy demanded of the interpolated profiles.
const PROFILE_TOL: f64 = 2e-14;

/// Tabulates `z ↦ W(-z)` up to the point where it leaves the normal range.
fn tabulate<T: Scalar>(table: &WrightTable<T>) -> Result<ProfileTable<T>> {
    let floor = T::min_positive_value();
    let f = |z: T| table.eval(-z);
    let mut lo = T::one();
    let mut hi = lit::<T>(2.0);
    while f(hi)? >= floor {
        lo = hi;
        hi = hi * lit(2.0);
    }
    for _ in 0..60 {
        let mid = lit::<T>(0.5) * (lo + hi);
        if f(mid)? >= floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tol = lit::<T>(PROFILE_TOL).max(lit::<T>(64.0) * T::epsilon());
    ProfileTable::build(f, lo, tol)
}

/// Upper bound for `∫_D^∞ e^{-b d^p} dd`, `p ≥ 1`, from the tangent line
/// `d^p ≥ D^p + p D^{p-1} (d - D)`: `e^{-b D^p} / (b p D^{p-1})`.
fn decay_integral<T: Scalar>(b: T, p: T, d: T) -> T {
    let dp1 = d.powf(p - T::one());
    (-(b * dp1 * d)).exp() / (b * p * dp1)
}

/// Largest `σ` with `½ F(z) ≤ C exp(-σ z^p)` on a log grid over `z ≥ 1`,
/// capped by the sharp rate and shaded by 2%.
fn fit_majorant<T: Scalar, F: Fn(T) -> Result<T>>(
    order: FractionalOrder<T>,
    profile: F,
) -> Result<TailMajorant<T>> {
    let c = lit::<T>(MAJORANT_C);
    let p = order.sigma_exp();
    let sharp = order.sharp_sigma();
    let floor_log = T::min_positive_value().ln();
    // beyond z_hi the profile is below the smallest normal number
    let z_hi = (lit::<T>(-0.9) * floor_log / sharp).powf(T::one() / p);
    let n = 240usize;
    let mut sigma = sharp;
    for i in 0..=n {
        let z = z_hi.powf(from_usize::<T>(i) / from_usize::<T>(n));
        let v = lit::<T>(0.5) * profile(z)?;
        if v <= T::zero() {
            continue;
        }
        let q = (c / v).ln() / z.powf(p);
        sigma = sigma.min(q);
    }
    Ok(TailMajorant {
        c,
        sigma: sigma * lit(0.98),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn kernel(alpha: f64) -> Kernel<f64> {
        Kernel::new(
            FractionalOrder::new(alpha).unwrap(),
            ThetaTruncation::default(),
        )
        .unwrap()
    }

    #[test]
    fn derived_exponents() {
        let o = FractionalOrder::new(0.5).unwrap();
        assert_eq!(o.half(), 0.25);
        assert_eq!(o.co(), 0.5);
        assert_relative_eq!(o.sigma_exp(), 4.0 / 3.0);
        assert_relative_eq!(o.t_exp(), 1.0 / 3.0);
        assert!(FractionalOrder::new(1.0).is_err());
        assert!(FractionalOrder::new(0.0).is_err());
    }

    #[test]
    fn tabulated_and_direct_kernels_agree() {
        for &a in &[0.1, 0.5, 0.9] {
            let k = kernel(a);
            let o = k.order();
            for i in 0..400 {
                let z = 0.1 * i as f64;
                let (x, t) = (z * 0.3f64.powf(a / 2.0), 0.3);
                let direct = k_alpha(o, x, t).unwrap();
                let direct_rl = k_alpha_rl(o, x, t).unwrap();
                assert_relative_eq!(k.k(x, t).unwrap(), direct, max_relative = 1e-11);
                assert_relative_eq!(k.k_rl(x, t).unwrap(), direct_rl, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn fitted_sigma_is_close_to_sharp_rate() {
        for &a in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let k = kernel(a);
            let sharp = k.order().sharp_sigma();
            let s = k.majorant(Flavor::Plain).sigma;
            let s_rl = k.majorant(Flavor::Rl).sigma;
            assert!(s <= sharp && s > 0.9 * sharp, "alpha {a}: {s} vs {sharp}");
            assert!(
                s_rl <= s && s_rl > 0.5 * sharp,
                "alpha {a}: {s_rl} vs {sharp}"
            );
            assert!(s_rl > 0.1);
        }
    }

    #[test]
    fn theta_is_even_bitwise() {
        let k = kernel(0.4);
        for &t in &[0.003, 0.1, 1.0, 7.0] {
            for &x in &[0.0, 0.25, 0.9, 1.0, 1.6, 2.0] {
                assert_eq!(k.theta(x, t).unwrap(), k.theta(-x, t).unwrap());
                assert_eq!(k.theta_rl(x, t).unwrap(), k.theta_rl(-x, t).unwrap());
            }
        }
    }

    #[test]
    fn theta_tail_is_certified_against_larger_cutoff() {
        let k = kernel(0.5);
        for &t in &[0.01, 1.0, 20.0] {
            let s = k.image_sum(Flavor::Plain, 0.5, t).unwrap();
            let mut wide = s.value;
            for m in (s.images + 1)..=(s.images + 16) {
                let shift = 2.0 * m as f64;
                wide += k.k(0.5 + shift, t).unwrap() + k.k(shift - 0.5, t).unwrap();
            }
            assert!((wide - s.value).abs() <= s.tail_bound.max(1e-16));
            assert!(s.tail_bound <= 1e-14);
        }
    }

    #[test]
    fn theta_domain_is_enforced() {
        let k = kernel(0.5);
        assert!(k.theta(2.5, 1.0).is_err());
        assert!(k.theta(0.5, 0.0).is_err());
    }

    #[test]
    fn truncation_cap_is_reported() {
        let o = FractionalOrder::new(0.7).unwrap();
        let trunc = ThetaTruncation {
            abs_tol: 1e-14,
            max_m: 2,
        };
        let k = Kernel::new(o, trunc).unwrap();
        match k.theta(0.3, 50.0) {
            Err(Error::TruncationCapReached {
                max_m,
                achieved_bound,
            }) => {
                assert_eq!(max_m, 2);
                assert!(achieved_bound > 1e-14);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn laplace_closed_forms_are_consistent() {
        let o = FractionalOrder::new(0.5).unwrap();
        assert_relative_eq!(
            theta_rl_laplace_closed(o, 1.0).unwrap(),
            0.5 / 1f64.sinh(),
            max_relative = 1e-15
        );
        for &s in &[0.01, 0.5, 3.0, 40.0, 1e4] {
            let rl = theta_rl_laplace_closed(o, s).unwrap();
            let plain = theta_laplace_closed(o, 1.0, s).unwrap();
            assert_relative_eq!(rl, s.powf(0.5) * plain, max_relative = 1e-14);
        }
        // large s: the m = 0 image dominates
        let s = 1e6;
        assert_relative_eq!(
            theta_laplace_closed(o, 0.5, s).unwrap(),
            k_laplace_closed(o, 0.5, s).unwrap(),
            max_relative = 1e-10
        );
        assert!(theta_laplace_closed(o, 0.0, 1e12).unwrap().is_finite());
    }
}
