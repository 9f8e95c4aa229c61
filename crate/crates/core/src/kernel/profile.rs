//! Piecewise Chebyshev interpolation of `ln F(z)` for a positive profile `F`
//! on `[0, z_max]`, with `F = 0` beyond.
//!
//! Panels start on a doubling partition and are bisected until the
//! interpolant reproduces the direct evaluation at off-node check points.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

const DEGREE: usize = 20;
const MAX_DEPTH: usize = 12;

#[derive(Debug, Clone)]
struct Panel<T> {
    lo: T,
    hi: T,
    coeffs: Vec<T>,
}

impl<T: Scalar> Panel<T> {
    fn eval(&self, z: T) -> T {
        let two = lit::<T>(2.0);
        let u = (two * z - self.lo - self.hi) / (self.hi - self.lo);
        let (mut b1, mut b2) = (T::zero(), T::zero());
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = two * u * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        u * b1 - b2 + self.coeffs[0]
    }
}

/// Interpolated positive profile.
#[derive(Debug, Clone)]
pub struct ProfileTable<T> {
    starts: Vec<T>,
    panels: Vec<Panel<T>>,
    z_max: T,
    /// Largest scaled check error seen during construction.
    pub max_check_error: T,
}

impl<T: Scalar> ProfileTable<T> {
    /// Tabulates `f` on `[0, z_max]`; `check_tol` bounds
    /// `|Δ ln F| / max(1, |ln F|)` at the check points.
    pub fn build<F: Fn(T) -> Result<T>>(f: F, z_max: T, check_tol: T) -> Result<Self> {
        let log_f = |z: T| -> Result<T> {
            let v = f(z)?;
            if !(v > T::zero()) {
                return Err(Error::NonConvergent {
                    function: "profile table",
                    terms: 0,
                    achieved: to_f64(v),
                });
            }
            Ok(v.ln())
        };
        let mut panels = Vec::new();
        let mut max_err = T::zero();
        let mut lo = T::zero();
        let mut hi = T::one();
        while lo < z_max {
            let top = hi.min(z_max);
            build_panel(&log_f, lo, top, check_tol, 0, &mut panels, &mut max_err)?;
            lo = top;
            hi = hi * lit(2.0);
        }
        Ok(Self {
            starts: panels.iter().map(|p| p.lo).collect(),
            panels,
            z_max,
            max_check_error: max_err,
        })
    }

    pub fn z_max(&self) -> T {
        self.z_max
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }

    /// `F(z)` for `z ≥ 0`.
    pub fn eval(&self, z: T) -> T {
        if z > self.z_max {
            return T::zero();
        }
        let i = match self.starts.binary_search_by(|s| s.partial_cmp(&z).unwrap()) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        self.panels[i].eval(z).exp()
    }
}

fn chebyshev_nodes<T: Scalar>(n: usize) -> impl Iterator<Item = T> {
    (0..n).map(move |j| {
        let theta = T::PI() * (from_usize::<T>(2 * j + 1)) / from_usize::<T>(2 * n);
        theta.cos()
    })
}

fn build_panel<T: Scalar, G: Fn(T) -> Result<T>>(
    log_f: &G,
    lo: T,
    hi: T,
    tol: T,
    depth: usize,
    out: &mut Vec<Panel<T>>,
    max_err: &mut T,
) -> Result<()> {
    let half = lit::<T>(0.5);
    let mid = half * (lo + hi);
    let rad = half * (hi - lo);
    let n = DEGREE;
    let values: Vec<T> = chebyshev_nodes::<T>(n)
        .map(|u| log_f(mid + rad * u))
        .collect::<Result<_>>()?;
    let coeffs: Vec<T> = (0..n)
        .map(|k| {
            let mut c = T::zero();
            for (j, &v) in values.iter().enumerate() {
                let theta = T::PI() * from_usize::<T>(k * (2 * j + 1)) / from_usize::<T>(2 * n);
                c = c + v * theta.cos();
            }
            let scale = if k == 0 { T::one() } else { lit(2.0) };
            c * scale / from_usize::<T>(n)
        })
        .collect();
    let panel = Panel { lo, hi, coeffs };
    let mut err = T::zero();
    for u in [-0.93, -0.61, -0.17, 0.29, 0.71, 0.97] {
        let z = mid + rad * lit::<T>(u);
        let exact = log_f(z)?;
        err = err.max((panel.eval(z) - exact).abs() / exact.abs().max(T::one()));
    }
    if err <= tol || depth >= MAX_DEPTH {
        *max_err = max_err.max(err);
        out.push(panel);
        return Ok(());
    }
    build_panel(log_f, lo, mid, tol, depth + 1, out, max_err)?;
    build_panel(log_f, mid, hi, tol, depth + 1, out, max_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_gaussian_profile() {
        let f = |z: f64| Ok((-z * z / 4.0).exp() / std::f64::consts::PI.sqrt());
        let table = ProfileTable::build(f, 50.0, 1e-13).unwrap();
        for i in 0..1000 {
            let z = 50.0 * i as f64 / 999.0;
            let exact = f(z).unwrap();
            let got = table.eval(z);
            // log-domain rounding scales with |ln F|
            let tol = 1e-13 * exact.ln().abs().max(1.0);
            assert!(((got - exact) / exact).abs() < tol, "z={z}");
        }
        assert_eq!(table.eval(50.5), 0.0);
    }
}
