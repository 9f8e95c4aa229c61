//! Representation-formula solver for
//!
//! ```text
//! ∂_t^α u - u_xx = 0 on (0,1) × (0,∞),  u(·,0) = u0,
//! u_x(0,·) = 0,  u_x(1,·) = g̃,
//! ```
//!
//! as `u = w + v` with
//! `w(x,t) = ∫_0^1 (θ(x-ξ,t) + θ(x+ξ,t)) u0(ξ) dξ` and
//! `v(x,t) = 2 ∫_0^t D_t^{1-α}θ(x-1, t-τ) g̃(τ) dτ`.

use std::sync::{Arc, Mutex};

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::{Provenance, SolutionField};
use crate::grid::{Profile, SpaceTimeGrid, TimeSeries};
use crate::kernel::{Flavor, FractionalOrder, Kernel, ThetaTruncation};
use crate::quad::{adaptive_pair, GaussRule};
use crate::report::{fit_scale, BoundReport, Sample};
use crate::scalar::{from_usize, lit, to_f64, Scalar};
use crate::specfun::recip_gamma;

/// `g̃`: `g` on `[0,T]`, the taper `g(T)(T+1-t)` on `(T,T+1)`, zero after.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannExtension<T> {
    g: TimeSeries<T>,
    horizon: T,
}

impl<T: Scalar> NeumannExtension<T> {
    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn eval(&self, t: T) -> T {
        let one = T::one();
        if t < T::zero() || t >= self.horizon + one {
            T::zero()
        } else if t <= self.horizon {
            self.g.at(t)
        } else {
            self.g.at(self.horizon) * (self.horizon + one - t)
        }
    }

    /// `g̃(k·dt)` for `k = 0..=nt`.
    pub fn sampled(&self, grid: &SpaceTimeGrid<T>) -> Vec<T> {
        (0..=grid.nt).map(|k| self.eval(grid.t(k))).collect()
    }

    /// `‖g‖_{L∞(0,T)}`, which is also `‖g̃‖_{L∞}`.
    pub fn sup_norm(&self) -> T {
        self.g
            .window(T::zero(), self.horizon)
            .sup_norm()
            .max(self.g.at(self.horizon).abs())
    }
}

/// Extends Neumann data given on `[0, T]`.
pub fn extend_neumann_data<T: Scalar>(
    g: &TimeSeries<T>,
    horizon: T,
) -> Result<NeumannExtension<T>> {
    if !(horizon > T::zero() && horizon.is_finite()) {
        return Err(invalid("T", to_f64(horizon), "horizon must be positive"));
    }
    let slack = lit::<T>(1e-12) * horizon.max(T::one());
    if g.t[0] > slack || *g.t.last().unwrap() < horizon - slack {
        return Err(invalid(
            "g",
            to_f64(*g.t.last().unwrap()),
            "Neumann data must be sampled over all of [0, T]",
        ));
    }
    Ok(NeumannExtension {
        g: g.clone(),
        horizon,
    })
}

/// Initial value and right Neumann trace of a lateral Cauchy problem.
#[derive(Debug, Clone)]
pub struct CauchyData<T> {
    pub u0: Profile<T>,
    pub g: TimeSeries<T>,
    pub horizon: T,
}

impl<T: Scalar> CauchyData<T> {
    pub fn new(u0: Profile<T>, g: TimeSeries<T>, horizon: T) -> Result<Self> {
        extend_neumann_data(&g, horizon)?;
        Ok(Self { u0, g, horizon })
    }

    /// `g` given as a function, sampled at `n + 1` uniform points of `[0,T]`.
    pub fn with_flux_fn<F: Fn(T) -> T>(u0: Profile<T>, g: F, horizon: T, n: usize) -> Result<Self> {
        let h = horizon / from_usize::<T>(n.max(1));
        let series = TimeSeries::uniform(h, n.max(1), g)?;
        Self::new(u0, series, horizon)
    }

    pub fn zero(horizon: T) -> Result<Self> {
        Self::with_flux_fn(Profile::zero(), |_| T::zero(), horizon, 1)
    }

    pub fn extension(&self) -> NeumannExtension<T> {
        NeumannExtension {
            g: self.g.clone(),
            horizon: self.horizon,
        }
    }

    /// `a·self + b·other` (both must share the horizon).
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.horizon != other.horizon {
            return Err(invalid("T", to_f64(other.horizon), "horizons differ"));
        }
        let mut t: Vec<T> = self.g.t.iter().chain(&other.g.t).copied().collect();
        t.sort_by(|x, y| x.partial_cmp(y).unwrap());
        t.dedup();
        let g = TimeSeries::from_fn(t, |s| a * self.g.at(s) + b * other.g.at(s))?;
        Self::new(self.u0.combine(a, &other.u0, b), g, self.horizon)
    }
}

/// Accuracy controls of the representation solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions<T> {
    /// Absolute Richardson tolerance for `w` at every node.
    pub w_tol: T,
    /// Absolute per-panel tolerance of the `v` convolution weights.
    pub v_abs_tol: T,
    /// Relative per-panel tolerance of the `v` convolution weights.
    pub v_rel_tol: T,
    /// Maximum number of panel halvings for `w`.
    pub max_refine: usize,
    /// Longest product-integration panel for `v`; output steps are split
    /// into equal sub-panels no longer than this. Piecewise-linear `g`
    /// sampled on a multiple of the panel length is integrated exactly.
    pub v_max_panel: T,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            w_tol: lit::<T>(1e-10).max(lit::<T>(256.0) * T::epsilon()),
            v_abs_tol: lit::<T>(1e-14).max(T::epsilon()),
            v_rel_tol: lit::<T>(1e-11).max(lit::<T>(64.0) * T::epsilon()),
            max_refine: 7,
            v_max_panel: lit::<T>(1.0 / 128.0),
        }
    }
}

/// One part (`w` or `v`) of the solution on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Contribution<T> {
    /// `nx × nt`, columns are `t_1 .. t_nt`.
    pub values: Array2<T>,
    pub error_estimate: T,
}

/// Product-integration weights of the `v` convolution on a uniform grid.
///
/// For lag panel `σ ∈ [nΔ, (n+1)Δ]` and spatial node `i`:
/// `a[[i,n]] = ∫ D^{1-α}θ(x_i-1, σ) dσ`,
/// `b[[i,n]] = ∫ D^{1-α}θ(x_i-1, σ) (σ-nΔ)/Δ dσ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionWeights<T> {
    pub a: Array2<T>,
    pub b: Array2<T>,
    /// Summed quadrature error estimate per spatial node.
    pub error: Vec<T>,
}

/// Boundary traces reported with a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Traces<T> {
    /// `ũ(0, ·)`
    pub left: TimeSeries<T>,
    /// `ũ(1, ·)`
    pub right: TimeSeries<T>,
    /// `ũ_x(0, ·)` from a 3-point one-sided stencil (lower accuracy).
    pub left_flux: TimeSeries<T>,
    /// Max difference between the 3- and 4-point one-sided stencils.
    pub left_flux_stencil_error: T,
}

#[derive(Debug, Clone)]
pub struct IbvpSolution<T> {
    pub field: SolutionField<T>,
    pub w_error: T,
    pub v_error: T,
    pub traces: Traces<T>,
}

type WeightCache<T> = Mutex<Vec<(SpaceTimeGrid<T>, Arc<ConvolutionWeights<T>>)>>;

/// Number of grids whose convolution weights are kept.
const WEIGHT_CACHE_SIZE: usize = 16;

/// Representation solver for one order; caches the kernel and the
/// convolution weights of recently used grids.
#[derive(Debug)]
pub struct Solver<T> {
    kernel: Kernel<T>,
    opts: SolverOptions<T>,
    rule: (Vec<T>, Vec<T>),
    weights: WeightCache<T>,
}

impl<T: Scalar> Solver<T> {
    pub fn new(
        order: FractionalOrder<T>,
        trunc: ThetaTruncation<T>,
        opts: SolverOptions<T>,
    ) -> Result<Self> {
        Ok(Self::from_kernel(Kernel::new(order, trunc)?, opts))
    }

    pub fn from_kernel(kernel: Kernel<T>, opts: SolverOptions<T>) -> Self {
        Self {
            kernel,
            opts,
            rule: GaussRule::legendre(8).unit_interval(),
            weights: Mutex::new(Vec::new()),
        }
    }

    pub fn kernel(&self) -> &Kernel<T> {
        &self.kernel
    }

    pub fn order(&self) -> FractionalOrder<T> {
        self.kernel.order()
    }

    pub fn options(&self) -> SolverOptions<T> {
        self.opts
    }

    /// `w` at every grid node.
    pub fn solve_w(&self, u0: &Profile<T>, grid: &SpaceTimeGrid<T>) -> Result<Contribution<T>> {
        grid.validate()?;
        let columns: Vec<Result<(Vec<T>, T)>> = (1..=grid.nt)
            .into_par_iter()
            .map(|j| self.w_column(u0, grid, grid.t(j)))
            .collect();
        let mut values = Array2::zeros((grid.nx, grid.nt));
        let mut err = T::zero();
        for (j, col) in columns.into_iter().enumerate() {
            let (col, e) = col?;
            for (i, v) in col.into_iter().enumerate() {
                values[[i, j]] = v;
            }
            err = err.max(e);
        }
        Ok(Contribution {
            values,
            error_estimate: err,
        })
    }

    /// `w(x_i, t)` for all spatial nodes at one time, refined by panel
    /// halving until two successive levels agree to `w_tol`.
    pub fn w_column(&self, u0: &Profile<T>, grid: &SpaceTimeGrid<T>, t: T) -> Result<(Vec<T>, T)> {
        let mut coarse = self.w_level(u0, grid, t, 0)?;
        for level in 1..=self.opts.max_refine {
            let fine = self.w_level(u0, grid, t, level)?;
            let est = coarse
                .iter()
                .zip(&fine)
                .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
            if est <= self.opts.w_tol {
                return Ok((fine, est));
            }
            coarse = fine;
        }
        Err(Error::QuadratureFailure {
            context: format!("w at t = {:e}", to_f64(t)),
            estimate: f64::NAN,
            tolerance: to_f64(self.opts.w_tol),
        })
    }

    /// Composite 8-point Gauss–Legendre with `(nx-1)·2^level` panels.
    fn w_level(
        &self,
        u0: &Profile<T>,
        grid: &SpaceTimeGrid<T>,
        t: T,
        level: usize,
    ) -> Result<Vec<T>> {
        let (nodes, weights) = (&self.rule.0, &self.rule.1);
        let q = nodes.len();
        let split = 1usize << level;
        let panels = (grid.nx - 1) * split;
        let h = grid.dx() / from_usize::<T>(split);
        // θ((n + c_q) h, t) for n = 0..2·panels; covers |x ± ξ| ≤ 2
        let mut table = Vec::with_capacity(2 * panels * q);
        for n in 0..2 * panels {
            for &c in nodes {
                let y = (from_usize::<T>(n) + c) * h;
                table.push(self.kernel.theta(y.min(lit(2.0)), t)?);
            }
        }
        let mut u = Vec::with_capacity(panels * q);
        for p in 0..panels {
            for &c in nodes {
                u.push(u0.eval((from_usize::<T>(p) + c) * h));
            }
        }
        let out = (0..grid.nx)
            .map(|i| {
                let base = i * split;
                let mut sum = T::zero();
                for p in 0..panels {
                    let mut panel = T::zero();
                    for k in 0..q {
                        // x_i - ξ = (base - p - c_k) h, mirrored onto the table
                        let left = if base > p {
                            table[(base - p - 1) * q + (q - 1 - k)]
                        } else {
                            table[(p - base) * q + k]
                        };
                        let right = table[(base + p) * q + k];
                        panel = panel + weights[k] * (left + right) * u[p * q + k];
                    }
                    sum = sum + panel;
                }
                sum * h
            })
            .collect();
        Ok(out)
    }

    /// Convolution weights for `grid`, cached across calls.
    pub fn convolution_weights(
        &self,
        grid: &SpaceTimeGrid<T>,
    ) -> Result<Arc<ConvolutionWeights<T>>> {
        if let Some((_, w)) = self.weights.lock().unwrap().iter().find(|(g, _)| g == grid) {
            return Ok(w.clone());
        }
        let w = Arc::new(self.compute_weights(grid)?);
        let mut cache = self.weights.lock().unwrap();
        if cache.len() == WEIGHT_CACHE_SIZE {
            cache.remove(0);
        }
        cache.push((*grid, w.clone()));
        Ok(w)
    }

    fn compute_weights(&self, grid: &SpaceTimeGrid<T>) -> Result<ConvolutionWeights<T>> {
        grid.validate()?;
        type Row<T> = (Vec<T>, Vec<T>, T);
        let rows: Vec<Result<Row<T>>> = (0..grid.nx)
            .into_par_iter()
            .map(|i| self.weight_row(grid.x(i) - T::one(), grid))
            .collect();
        let mut a = Array2::zeros((grid.nx, grid.nt));
        let mut b = Array2::zeros((grid.nx, grid.nt));
        let mut error = Vec::with_capacity(grid.nx);
        for (i, row) in rows.into_iter().enumerate() {
            let (ra, rb, e) = row?;
            for n in 0..grid.nt {
                a[[i, n]] = ra[n];
                b[[i, n]] = rb[n];
            }
            error.push(e);
        }
        Ok(ConvolutionWeights { a, b, error })
    }

    /// Lag-panel moments at offset `y = x - 1`, integrated in `u = σ^ν`
    /// where `D^{1-α}θ(y,σ) dσ = Φ_rl(y,σ) du / (2ν)` has no singularity.
    fn weight_row(&self, y: T, grid: &SpaceTimeGrid<T>) -> Result<(Vec<T>, Vec<T>, T)> {
        let nu = self.order().half();
        let inv_nu = T::one() / nu;
        let dt = grid.dt();
        let scale = lit::<T>(0.5) * inv_nu;
        let at_zero = if y == T::zero() {
            recip_gamma(nu)
        } else {
            T::zero()
        };
        let mut a = Vec::with_capacity(grid.nt);
        let mut b = Vec::with_capacity(grid.nt);
        let mut err_sum = T::zero();
        for n in 0..grid.nt {
            let start = from_usize::<T>(n) * dt;
            let lo = start.powf(nu);
            let hi = (start + dt).powf(nu);
            let mut failure = None;
            // Φ_rl(y, u^{1/ν}) switches on near u ≈ |y|; split there so the
            // first rule sees the layer
            let mut cuts = vec![lo];
            for f in [0.25, 1.0, 4.0] {
                let c = lit::<T>(f) * y.abs();
                if c > lo && c < hi {
                    cuts.push(c);
                }
            }
            cuts.push(hi);
            let (mut v, mut e, mut ok) = ([T::zero(); 2], T::zero(), true);
            for w in cuts.windows(2) {
                let (pv, pe, pok) = adaptive_pair(
                    |u: T| {
                        let sigma = u.powf(inv_nu);
                        let phi = if sigma < T::min_positive_value() {
                            at_zero
                        } else {
                            match self.kernel.profile_sum(Flavor::Rl, y, sigma) {
                                Ok(s) => s.value,
                                Err(err) => {
                                    failure.get_or_insert(err);
                                    T::zero()
                                }
                            }
                        };
                        let s = (sigma - start) / dt;
                        [scale * phi, scale * phi * s]
                    },
                    w[0],
                    w[1],
                    self.opts.v_abs_tol,
                    self.opts.v_rel_tol,
                    30,
                );
                v = [v[0] + pv[0], v[1] + pv[1]];
                e = e + pe;
                ok &= pok;
            }
            if let Some(err) = failure {
                return Err(err);
            }
            if !ok {
                return Err(Error::QuadratureFailure {
                    context: format!("v weights at x = {:e}, lag panel {n}", to_f64(y + T::one())),
                    estimate: to_f64(e),
                    tolerance: to_f64(self.opts.v_abs_tol),
                });
            }
            a.push(v[0]);
            b.push(v[1]);
            err_sum = err_sum + e;
        }
        Ok((a, b, err_sum))
    }

    /// `v` at every grid node for piecewise-linear `g̃` on the time grid.
    pub fn solve_v(
        &self,
        g_ext: &NeumannExtension<T>,
        grid: &SpaceTimeGrid<T>,
    ) -> Result<Contribution<T>> {
        grid.validate()?;
        let r = (grid.dt() / self.opts.v_max_panel * (T::one() - lit::<T>(1e-12)))
            .ceil()
            .to_usize()
            .unwrap_or(1)
            .max(1);
        let fine = SpaceTimeGrid {
            nt: grid.nt * r,
            ..*grid
        };
        let g = g_ext.sampled(&fine);
        let mut values = Array2::zeros((grid.nx, grid.nt));
        if g.iter().all(|v| *v == T::zero()) {
            return Ok(Contribution {
                values,
                error_estimate: T::zero(),
            });
        }
        let w = self.convolution_weights(&fine)?;
        let two = lit::<T>(2.0);
        let g_norm = g.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        for i in 0..grid.nx {
            for j in 1..=grid.nt {
                let jf = j * r;
                let mut sum = T::zero();
                for n in 0..jf {
                    let (g_hi, g_lo) = (g[jf - n], g[jf - n - 1]);
                    sum = sum + w.a[[i, n]] * g_hi + w.b[[i, n]] * (g_lo - g_hi);
                }
                values[[i, j - 1]] = two * sum;
            }
        }
        // linear interpolation of g̃ is off by at most |Δ²g|/8 per panel
        let curvature = g
            .windows(3)
            .fold(T::zero(), |m, v| m.max((v[0] - two * v[1] + v[2]).abs()));
        let mass = (0..grid.nx)
            .map(|i| w.a.row(i).iter().fold(T::zero(), |s, a| s + a.abs()))
            .fold(T::zero(), T::max);
        let quad = w.error.iter().fold(T::zero(), |m, e| m.max(*e));
        Ok(Contribution {
            values,
            error_estimate: two * (g_norm * quad + lit::<T>(0.125) * curvature * mass),
        })
    }

    /// `ũ(0, ·)` on `(0, t_horizon]` from nested uniform grids
    /// `t_max = t_horizon / ratio^k`, `k = 0..levels`, with `n` steps each;
    /// resolves the non-smooth behaviour near `t = 0`.
    pub fn graded_left_trace(
        &self,
        data: &CauchyData<T>,
        t_horizon: T,
        levels: usize,
        ratio: T,
        n: usize,
    ) -> Result<TimeSeries<T>> {
        let mut samples: Vec<(T, T)> = Vec::new();
        let mut upper = t_horizon;
        for k in 0..levels.max(1) {
            let grid = SpaceTimeGrid::new(3, n, upper)?;
            let sol = self.solve_ibvp(data, &grid)?;
            let trace = sol.field.trace(0);
            let lower = if k + 1 == levels.max(1) {
                T::zero()
            } else {
                upper / ratio
            };
            for (t, v) in trace.t.iter().zip(&trace.values) {
                if *t > lower {
                    samples.push((*t, *v));
                }
            }
            upper = upper / ratio;
        }
        samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        samples.dedup_by(|a, b| a.0 == b.0);
        let (t, values) = samples.into_iter().unzip();
        TimeSeries::new(t, values)
    }

    /// Full solution `w + v` with boundary traces.
    pub fn solve_ibvp(
        &self,
        data: &CauchyData<T>,
        grid: &SpaceTimeGrid<T>,
    ) -> Result<IbvpSolution<T>> {
        let w = self.solve_w(&data.u0, grid)?;
        let v = self.solve_v(&data.extension(), grid)?;
        let values = &w.values + &v.values;
        let field = SolutionField::new(
            values,
            *grid,
            Provenance::Representation,
            w.error_estimate + v.error_estimate,
        )?;
        let traces = traces(&field);
        Ok(IbvpSolution {
            field,
            w_error: w.error_estimate,
            v_error: v.error_estimate,
            traces,
        })
    }
}

fn traces<T: Scalar>(field: &SolutionField<T>) -> Traces<T> {
    let grid = field.grid();
    let left_flux = field.left_flux();
    let stencil_error = if grid.nx >= 4 {
        let h = grid.dx();
        let six = lit::<T>(6.0);
        (1..=grid.nt)
            .map(|j| {
                let u = |i| field.at(i, j);
                let four_point = (lit::<T>(-11.0) * u(0) + lit::<T>(18.0) * u(1)
                    - lit::<T>(9.0) * u(2)
                    + lit::<T>(2.0) * u(3))
                    / (six * h);
                (four_point - left_flux.values[j - 1]).abs()
            })
            .fold(T::zero(), T::max)
    } else {
        T::infinity()
    };
    Traces {
        left: field.trace(0),
        right: field.trace(grid.nx - 1),
        left_flux,
        left_flux_stencil_error: stencil_error,
    }
}

/// `w` for initial data `u0`.
pub fn solve_w<T: Scalar>(
    u0: &Profile<T>,
    order: FractionalOrder<T>,
    grid: &SpaceTimeGrid<T>,
    trunc: ThetaTruncation<T>,
) -> Result<Contribution<T>> {
    Solver::new(order, trunc, SolverOptions::default())?.solve_w(u0, grid)
}

/// `v` for extended Neumann data.
pub fn solve_v<T: Scalar>(
    g_ext: &NeumannExtension<T>,
    order: FractionalOrder<T>,
    grid: &SpaceTimeGrid<T>,
    trunc: ThetaTruncation<T>,
) -> Result<Contribution<T>> {
    Solver::new(order, trunc, SolverOptions::default())?.solve_v(g_ext, grid)
}

/// `ũ = w + v` with traces.
pub fn solve_ibvp<T: Scalar>(
    data: &CauchyData<T>,
    order: FractionalOrder<T>,
    grid: &SpaceTimeGrid<T>,
    trunc: ThetaTruncation<T>,
) -> Result<IbvpSolution<T>> {
    Solver::new(order, trunc, SolverOptions::default())?.solve_ibvp(data, grid)
}

/// Shape of the trace estimate
/// `t^{-α/2} + t^{α/2} + t^{3α/2} + t^{α²/(2-α)} + t^{(2α-2)/(2-α)}`.
pub fn growth_envelope(alpha: f64, t: f64) -> f64 {
    let h = alpha / 2.0;
    let d = 2.0 - alpha;
    t.powf(-h)
        + t.powf(h)
        + t.powf(3.0 * h)
        + t.powf(alpha * alpha / d)
        + t.powf((2.0 * alpha - 2.0) / d)
}

/// Fit-then-validate check of `|ũ(0,t)| ≤ C·envelope(t)` on the trace
/// samples with `t_lo ≤ t ≤ t_hi`.
pub fn growth_bound_check<T: Scalar>(
    order: FractionalOrder<T>,
    trace: &TimeSeries<T>,
    t_lo: T,
    t_hi: T,
) -> BoundReport {
    let alpha = to_f64(order.alpha());
    let samples: Vec<Sample> = trace
        .window(t_lo, t_hi)
        .t
        .iter()
        .zip(&trace.window(t_lo, t_hi).values)
        .map(|(&t, &v)| {
            let t = to_f64(t);
            Sample {
                param: t,
                value: to_f64(v),
                envelope: growth_envelope(alpha, t),
            }
        })
        .collect();
    fit_scale("trace_growth", &samples)
}

/// `L1 Caputo(u) - u_xx` at interior nodes `(i, j)`, `1 ≤ i ≤ nx-2`, using
/// `u0` (sampled on the spatial nodes) as the `t = 0` level.
pub fn pde_residual<T: Scalar>(field: &SolutionField<T>, alpha: T, u0: &[T]) -> Result<Array2<T>> {
    let grid = field.grid();
    if u0.len() != grid.nx {
        return Err(invalid(
            "u0",
            u0.len() as f64,
            "needs one value per spatial node",
        ));
    }
    let one = T::one();
    let dt = grid.dt();
    let h = grid.dx();
    let c = dt.powf(-alpha) * recip_gamma(lit::<T>(2.0) - alpha);
    let bk: Vec<T> = (0..grid.nt)
        .map(|k| {
            (from_usize::<T>(k) + one).powf(one - alpha) - from_usize::<T>(k).powf(one - alpha)
        })
        .collect();
    let level = |i: usize, j: usize| if j == 0 { u0[i] } else { field.at(i, j) };
    let mut out = Array2::zeros((grid.nx - 2, grid.nt));
    for i in 1..grid.nx - 1 {
        for j in 1..=grid.nt {
            let mut caputo = T::zero();
            for (k, b) in bk.iter().enumerate().take(j) {
                caputo = caputo + *b * (level(i, j - k) - level(i, j - k - 1));
            }
            let lap = (level(i - 1, j) - lit::<T>(2.0) * level(i, j) + level(i + 1, j)) / (h * h);
            out[[i - 1, j - 1]] = c * caputo - lap;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn solver(alpha: f64) -> Solver<f64> {
        Solver::new(
            FractionalOrder::new(alpha).unwrap(),
            ThetaTruncation::default(),
            SolverOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn extension_matches_taper() {
        let g = TimeSeries::uniform(0.5, 2, |_| 1.0).unwrap();
        let e = extend_neumann_data(&g, 1.0).unwrap();
        assert_eq!(e.eval(0.5), 1.0);
        assert_eq!(e.eval(1.5), 0.5);
        assert_eq!(e.eval(2.5), 0.0);
        let g2 = TimeSeries::uniform(0.5, 2, |_| 2.0).unwrap();
        let e2 = extend_neumann_data(&g2, 1.0).unwrap();
        for h in [0.25, 0.5, 0.75] {
            assert_relative_eq!(e2.eval(1.0 + h), 2.0 * (1.0 - h), max_relative = 1e-15);
        }
        let short = TimeSeries::uniform(0.25, 2, |_| 1.0).unwrap();
        assert!(extend_neumann_data(&short, 1.0).is_err());
    }

    #[test]
    fn constant_initial_data_is_preserved() {
        let s = solver(0.5);
        let grid = SpaceTimeGrid::new(11, 8, 2.0).unwrap();
        let w = s.solve_w(&Profile::constant(1.0), &grid).unwrap();
        for v in w.values.iter() {
            assert!((v - 1.0).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn zero_data_gives_zero_field() {
        let s = solver(0.4);
        let grid = SpaceTimeGrid::new(5, 4, 1.0).unwrap();
        let sol = s
            .solve_ibvp(&CauchyData::zero(1.0).unwrap(), &grid)
            .unwrap();
        assert_eq!(sol.field.sup_norm(), 0.0);
    }

    #[test]
    fn convolution_weights_sum_to_kernel_integral() {
        // Σ_n a[i,n] = ∫_0^{t_max} D^{1-α}θ(x_i - 1, σ) dσ; at x = 1 only
        // the m = 0 image matters for tiny t_max, giving ½t^{α/2}/Γ(1+α/2)
        let s = solver(0.5);
        let grid = SpaceTimeGrid::new(3, 16, 1e-8).unwrap();
        let w = s.convolution_weights(&grid).unwrap();
        let total: f64 = w.a.row(2).sum();
        let nu: f64 = 0.25;
        let exact = 0.5 * 1e-8f64.powf(nu) / libm::tgamma(1.0 + nu);
        assert_relative_eq!(total, exact, max_relative = 1e-9);
        for n in 0..grid.nt {
            assert!(w.b[[2, n]] < w.a[[2, n]] && w.b[[2, n]] > 0.0);
        }
    }
}
