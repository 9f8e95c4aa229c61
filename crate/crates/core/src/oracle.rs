//! Independent reference solvers: an implicit L1 finite-difference scheme
//! for the two-sided Neumann problem and the cosine–Mittag-Leffler series
//! for zero flux.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::{Provenance, SolutionField};
use crate::grid::{Profile, SpaceTimeGrid, TimeSeries};
use crate::kernel::FractionalOrder;
use crate::quad::GaussRule;
use crate::scalar::{from_usize, lit, Scalar};
use crate::solver::CauchyData;
use crate::specfun::{mittag_leffler, recip_gamma, SeriesTolerance};

/// Resolution of the L1 scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L1Config {
    pub nx_fd: usize,
    pub nt_fd: usize,
    /// Weight of the new time level in the spatial operator (1 = fully
    /// implicit, 0.5 = Crank–Nicolson-like).
    pub theta_scheme: f64,
}

impl Default for L1Config {
    fn default() -> Self {
        Self {
            nx_fd: 201,
            nt_fd: 2048,
            theta_scheme: 1.0,
        }
    }
}

impl L1Config {
    pub fn validate(&self) -> Result<()> {
        if self.nx_fd < 5 {
            return Err(invalid("nx_fd", self.nx_fd as f64, "need at least 5 nodes"));
        }
        if self.nt_fd < 5 {
            return Err(invalid("nt_fd", self.nt_fd as f64, "need at least 5 steps"));
        }
        if !(self.theta_scheme > 0.0 && self.theta_scheme <= 1.0) {
            return Err(invalid(
                "theta_scheme",
                self.theta_scheme,
                "must lie in (0, 1]",
            ));
        }
        Ok(())
    }

    /// Checks that the output grid is a subgrid of the FD grid.
    fn strides<T: Scalar>(&self, grid: &SpaceTimeGrid<T>) -> Result<(usize, usize)> {
        self.validate()?;
        grid.validate()?;
        if !(self.nx_fd - 1).is_multiple_of(grid.nx - 1) {
            return Err(invalid(
                "nx_fd",
                self.nx_fd as f64,
                "nx_fd - 1 must be a multiple of nx - 1",
            ));
        }
        if !self.nt_fd.is_multiple_of(grid.nt) {
            return Err(invalid(
                "nt_fd",
                self.nt_fd as f64,
                "nt_fd must be a multiple of nt",
            ));
        }
        Ok(((self.nx_fd - 1) / (grid.nx - 1), self.nt_fd / grid.nt))
    }
}

/// Solves `tridiag(lower, diag, upper) x = rhs` in place of `rhs`.
fn thomas<T: Scalar>(
    lower: &[T],
    diag: &[T],
    upper: &[T],
    rhs: &mut [T],
    step: usize,
) -> Result<()> {
    let n = diag.len();
    let mut c = vec![T::zero(); n];
    let tiny = T::epsilon() * T::epsilon();
    let mut d = diag[0];
    if d.abs() <= tiny {
        return Err(Error::SingularSystem { step });
    }
    c[0] = upper[0] / d;
    rhs[0] = rhs[0] / d;
    for i in 1..n {
        d = diag[i] - lower[i] * c[i - 1];
        if d.abs() <= tiny || !d.is_finite() {
            return Err(Error::SingularSystem { step });
        }
        c[i] = if i + 1 < n { upper[i] / d } else { T::zero() };
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] = rhs[i] - c[i] * rhs[i + 1];
    }
    Ok(())
}

/// Implicit L1 scheme for `∂_t^α u = u_xx`, `u_x(0,·) = h0`,
/// `u_x(1,·) = g̃`, ghost-node Neumann closure, sampled onto `grid`.
/// `h0 = None` means zero left flux.
pub fn l1_solve<T: Scalar>(
    data: &CauchyData<T>,
    h0: Option<&TimeSeries<T>>,
    order: FractionalOrder<T>,
    config: &L1Config,
    grid: &SpaceTimeGrid<T>,
) -> Result<SolutionField<T>> {
    let (sx, st) = config.strides(grid)?;
    let alpha = order.alpha();
    let one = T::one();
    let two = lit::<T>(2.0);
    let nx = config.nx_fd;
    let nt = config.nt_fd;
    let h = one / from_usize::<T>(nx - 1);
    let dt = grid.t_max / from_usize::<T>(nt);
    let theta = lit::<T>(config.theta_scheme);
    let c = dt.powf(-alpha) * recip_gamma(two - alpha);
    let b: Vec<T> = (0..nt)
        .map(|k| {
            (from_usize::<T>(k) + one).powf(one - alpha) - from_usize::<T>(k).powf(one - alpha)
        })
        .collect();
    let g_ext = data.extension();
    let left = |t: T| h0.map_or(T::zero(), |s| s.at(t));
    let inv_h2 = one / (h * h);

    // levels[j] = u at t = j·dt, j = 0..nt
    let mut levels: Vec<Vec<T>> = Vec::with_capacity(nt + 1);
    levels.push(
        (0..nx)
            .map(|i| data.u0.eval(from_usize::<T>(i) * h))
            .collect(),
    );

    // spatial operator with the ghost-node closure: (A u)_i + boundary term
    let apply_lap = |u: &[T], t: T| -> Vec<T> {
        (0..nx)
            .map(|i| {
                if i == 0 {
                    two * (u[1] - u[0]) * inv_h2 - two * left(t) / h
                } else if i == nx - 1 {
                    two * (u[nx - 2] - u[nx - 1]) * inv_h2 + two * g_ext.eval(t) / h
                } else {
                    (u[i - 1] - two * u[i] + u[i + 1]) * inv_h2
                }
            })
            .collect()
    };

    let mut lower = vec![-theta * inv_h2; nx];
    let mut upper = vec![-theta * inv_h2; nx];
    let diag = vec![c * b[0] + two * theta * inv_h2; nx];
    upper[0] = -two * theta * inv_h2;
    lower[nx - 1] = -two * theta * inv_h2;
    lower[0] = T::zero();
    upper[nx - 1] = T::zero();

    for j in 1..=nt {
        let t = from_usize::<T>(j) * dt;
        // c·[b_0 u^{j-1} - Σ_{k=1}^{j-1} b_k (u^{j-k} - u^{j-k-1})]
        let mut rhs: Vec<T> = (0..nx).map(|i| c * b[0] * levels[j - 1][i]).collect();
        for k in 1..j {
            let (newer, older) = (&levels[j - k], &levels[j - k - 1]);
            let w = c * b[k];
            for i in 0..nx {
                rhs[i] = rhs[i] - w * (newer[i] - older[i]);
            }
        }
        // boundary data of the new level always enters implicitly
        rhs[0] = rhs[0] - theta * two * left(t) / h;
        rhs[nx - 1] = rhs[nx - 1] + theta * two * g_ext.eval(t) / h;
        if theta < one {
            let lap = apply_lap(&levels[j - 1], t - dt);
            for i in 0..nx {
                rhs[i] = rhs[i] + (one - theta) * lap[i];
            }
        }
        thomas(&lower, &diag, &upper, &mut rhs, j)?;
        levels.push(rhs);
    }

    let values = Array2::from_shape_fn((grid.nx, grid.nt), |(i, j)| levels[(j + 1) * st][i * sx]);
    SolutionField::new(values, *grid, Provenance::L1Oracle, T::zero())
}

/// `a_n` with `u0 = Σ a_n cos(nπx)`, `n = 0..n_modes`, by composite
/// Gauss–Legendre on `panels` panels.
pub fn cosine_coefficients<T: Scalar>(u0: &Profile<T>, n_modes: usize, panels: usize) -> Vec<T> {
    let (nodes, weights) = GaussRule::<T>::legendre(8).unit_interval();
    let h = T::one() / from_usize::<T>(panels.max(1));
    let mut pts = Vec::with_capacity(panels * nodes.len());
    for p in 0..panels.max(1) {
        for (c, w) in nodes.iter().zip(&weights) {
            let x = (from_usize::<T>(p) + *c) * h;
            pts.push((x, *w * h * u0.eval(x)));
        }
    }
    (0..n_modes)
        .map(|n| {
            let k = from_usize::<T>(n) * T::PI();
            let s = pts
                .iter()
                .fold(T::zero(), |acc, (x, wu)| acc + *wu * (k * *x).cos());
            if n == 0 {
                s
            } else {
                lit::<T>(2.0) * s
            }
        })
        .collect()
}

/// `Σ a_n E_α(-n²π²t^α) cos(nπx)` on `grid`.
pub fn spectral_solve<T: Scalar>(
    coeffs: &[T],
    order: FractionalOrder<T>,
    grid: &SpaceTimeGrid<T>,
) -> Result<SolutionField<T>> {
    grid.validate()?;
    let alpha = order.alpha();
    let tol = SeriesTolerance::default();
    let pi = T::PI();
    let mut decay = Array2::zeros((coeffs.len(), grid.nt));
    for (n, a) in coeffs.iter().enumerate() {
        if *a == T::zero() {
            continue;
        }
        let lam = (from_usize::<T>(n) * pi).powi(2);
        for j in 0..grid.nt {
            decay[[n, j]] =
                mittag_leffler(alpha, T::one(), -lam * grid.t(j + 1).powf(alpha), &tol)?;
        }
    }
    let values = Array2::from_shape_fn((grid.nx, grid.nt), |(i, j)| {
        let x = grid.x(i);
        coeffs.iter().enumerate().fold(T::zero(), |acc, (n, a)| {
            acc + *a * decay[[n, j]] * (from_usize::<T>(n) * pi * x).cos()
        })
    });
    SolutionField::new(values, *grid, Provenance::SpectralOracle, T::zero())
}
