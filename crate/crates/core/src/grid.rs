//! Space-time grids, sampled time series and initial profiles.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Uniform nodes `x_i = i/(nx-1)` on [0,1] and `t_j = j·t_max/nt`, `j = 1..nt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeGrid<T> {
    pub nx: usize,
    pub nt: usize,
    pub t_max: T,
}

impl<T: Scalar> SpaceTimeGrid<T> {
    pub fn new(nx: usize, nt: usize, t_max: T) -> Result<Self> {
        let g = Self { nx, nt, t_max };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 3 {
            return Err(invalid(
                "nx",
                self.nx as f64,
                "need at least 3 spatial nodes",
            ));
        }
        if self.nt < 2 {
            return Err(invalid("nt", self.nt as f64, "need at least 2 time nodes"));
        }
        if !(self.t_max > T::zero() && self.t_max.is_finite()) {
            return Err(invalid("t_max", to_f64(self.t_max), "must be positive"));
        }
        Ok(())
    }

    pub fn dx(&self) -> T {
        T::one() / from_usize::<T>(self.nx - 1)
    }

    pub fn dt(&self) -> T {
        self.t_max / from_usize::<T>(self.nt)
    }

    pub fn x(&self, i: usize) -> T {
        from_usize::<T>(i) / from_usize::<T>(self.nx - 1)
    }

    /// `t_j = j·dt`; `j = 0` is the initial time and is never an output node.
    pub fn t(&self, j: usize) -> T {
        from_usize::<T>(j) * self.t_max / from_usize::<T>(self.nt)
    }

    pub fn xs(&self) -> Vec<T> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    /// Output times `t_1 .. t_nt`.
    pub fn ts(&self) -> Vec<T> {
        (1..=self.nt).map(|j| self.t(j)).collect()
    }

    /// Index `j` with `t_j = t`, if `t` is a time node (to rounding).
    pub fn time_index(&self, t: T) -> Option<usize> {
        let r = t / self.dt();
        let j = r.round();
        if (r - j).abs() <= lit::<T>(1e-9) * r.max(T::one()) {
            j.to_usize()
        } else {
            None
        }
    }
}

/// Scalar function of time sampled at increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries<T> {
    pub t: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(t: Vec<T>, values: Vec<T>) -> Result<Self> {
        if t.len() != values.len() || t.is_empty() {
            return Err(invalid(
                "values",
                values.len() as f64,
                "time series needs equally many, non-zero, times and values",
            ));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("t", 0.0, "sample times must increase strictly"));
        }
        Ok(Self { t, values })
    }

    pub fn from_fn<F: Fn(T) -> T>(t: Vec<T>, f: F) -> Result<Self> {
        let values = t.iter().map(|&s| f(s)).collect();
        Self::new(t, values)
    }

    /// Uniform samples `f(k·h)`, `k = 0..=n`.
    pub fn uniform<F: Fn(T) -> T>(h: T, n: usize, f: F) -> Result<Self> {
        Self::from_fn((0..=n).map(|k| from_usize::<T>(k) * h).collect(), f)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Piecewise-linear interpolant, held constant outside the sample range.
    pub fn at(&self, s: T) -> T {
        let n = self.t.len();
        if s <= self.t[0] {
            return self.values[0];
        }
        if s >= self.t[n - 1] {
            return self.values[n - 1];
        }
        let k = self.t.partition_point(|&x| x <= s) - 1;
        let (t0, t1) = (self.t[k], self.t[k + 1]);
        let w = (s - t0) / (t1 - t0);
        self.values[k] + w * (self.values[k + 1] - self.values[k])
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Samples restricted to `lo ≤ t ≤ hi`.
    pub fn window(&self, lo: T, hi: T) -> Self {
        let (t, values) = self
            .t
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| **t >= lo && **t <= hi)
            .map(|(t, v)| (*t, *v))
            .unzip();
        Self { t, values }
    }
}

/// A function on [0,1]: either a closure or uniform samples (linearly
/// interpolated, `values[i]` at `i/(n-1)`).
#[derive(Clone)]
pub enum Profile<T> {
    Function(Arc<dyn Fn(T) -> T + Send + Sync>),
    Samples(Vec<T>),
}

impl<T: Scalar> Profile<T> {
    pub fn function<F: Fn(T) -> T + Send + Sync + 'static>(f: F) -> Self {
        Profile::Function(Arc::new(f))
    }

    pub fn zero() -> Self {
        Profile::function(|_| T::zero())
    }

    pub fn constant(c: T) -> Self {
        Profile::function(move |_| c)
    }

    pub fn eval(&self, x: T) -> T {
        match self {
            Profile::Function(f) => f(x),
            Profile::Samples(v) => {
                let n = v.len();
                if n == 1 {
                    return v[0];
                }
                let h = T::one() / from_usize::<T>(n - 1);
                let r = (x / h).max(T::zero());
                let k = r.floor().to_usize().unwrap_or(0).min(n - 2);
                let w = r - from_usize::<T>(k);
                v[k] + w * (v[k + 1] - v[k])
            }
        }
    }

    /// Values at the grid's spatial nodes.
    pub fn sample(&self, grid: &SpaceTimeGrid<T>) -> Vec<T> {
        grid.xs().into_iter().map(|x| self.eval(x)).collect()
    }

    /// `max |u|` over `n` uniform points (exact for sampled profiles when
    /// `n` matches their resolution).
    pub fn sup_norm(&self) -> T {
        let n = match self {
            Profile::Samples(v) => v.len(),
            Profile::Function(_) => 2001,
        };
        (0..n)
            .map(|i| {
                self.eval(from_usize::<T>(i) / from_usize::<T>(n.max(2) - 1))
                    .abs()
            })
            .fold(T::zero(), T::max)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: T, other: &Profile<T>, b: T) -> Profile<T> {
        let (p, q) = (self.clone(), other.clone());
        Profile::function(move |x| a * p.eval(x) + b * q.eval(x))
    }
}

impl<T> fmt::Debug for Profile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Function(_) => f.write_str("Profile::Function"),
            Profile::Samples(v) => write!(f, "Profile::Samples({} nodes)", v.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_nodes() {
        let g = SpaceTimeGrid::new(5, 4, 2.0).unwrap();
        assert_eq!(g.x(4), 1.0);
        assert_eq!(g.t(4), 2.0);
        assert_eq!(g.ts(), vec![0.5, 1.0, 1.5, 2.0]);
        assert_eq!(g.time_index(1.5), Some(3));
        assert_eq!(g.time_index(1.2), None);
        assert!(SpaceTimeGrid::new(2, 4, 1.0).is_err());
        assert!(SpaceTimeGrid::new(3, 1, 1.0).is_err());
        assert!(SpaceTimeGrid::new(3, 4, 0.0).is_err());
    }

    #[test]
    fn series_interpolation() {
        let s = TimeSeries::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(s.at(0.5), 1.0);
        assert_eq!(s.at(2.0), 1.0);
        assert_eq!(s.at(5.0), 0.0);
        assert_eq!(s.sup_norm(), 2.0);
        assert!(TimeSeries::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn sampled_profile_interpolates() {
        let p = Profile::Samples(vec![0.0, 1.0, 0.0]);
        assert_eq!(p.eval(0.25), 0.5);
        assert_eq!(p.eval(1.0), 0.0);
        assert_eq!(p.sup_norm(), 1.0);
    }
}
