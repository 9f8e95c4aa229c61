//! Quadrature rules: Gauss–Legendre, Gauss–Jacobi and adaptive Gauss–Kronrod.
//!
//! Nodes and weights of the fixed rules are computed once in `f64` with the
//! Golub–Welsch eigenvalue method and converted to the working scalar.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::scalar::{lit, Scalar};

/// An n-point Gauss rule on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GaussRule<T> {
    /// Gauss–Legendre rule with `n` nodes.
    pub fn legendre(n: usize) -> Self {
        Self::jacobi(n, 0.0, 0.0)
    }

    /// Gauss–Jacobi rule for the weight `(1 - x)^a (1 + x)^b`, `a, b > -1`.
    pub fn jacobi(n: usize, a: f64, b: f64) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one node");
        assert!(a > -1.0 && b > -1.0, "Jacobi exponents must exceed -1");
        let (x, w) = golub_welsch_jacobi(n, a, b);
        Self {
            nodes: x.into_iter().map(lit).collect(),
            weights: w.into_iter().map(lit).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes on [-1, 1], ascending.
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Nodes mapped to [0, 1] with correspondingly scaled weights.
    ///
    /// Only meaningful for the Legendre weight.
    pub fn unit_interval(&self) -> (Vec<T>, Vec<T>) {
        let half = lit::<T>(0.5);
        let x = self.nodes.iter().map(|&x| half * (x + T::one())).collect();
        let w = self.weights.iter().map(|&w| half * w).collect();
        (x, w)
    }

    /// Σ w_i f(x_i) with the nodes mapped affinely onto [lo, hi].
    ///
    /// For a Jacobi rule the weight function is *not* rescaled: the caller
    /// is integrating `(1 - x)^a (1 + x)^b f` in reference coordinates, so
    /// the result carries the factor `((hi - lo) / 2)^(1 + a + b)` only if
    /// the caller accounts for it.
    pub fn integrate<F: FnMut(T) -> T>(&self, lo: T, hi: T, mut f: F) -> T {
        let half = lit::<T>(0.5);
        let c = half * (hi + lo);
        let h = half * (hi - lo);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + w * f(c + h * x);
        }
        acc * h
    }
}

/// Nodes/weights of the Jacobi weight `(1-x)^a (1+x)^b` by Golub–Welsch.
fn golub_welsch_jacobi(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        diag[k] = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            let s = 2.0 * kf + ab;
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let j = kf + 1.0;
            let s = 2.0 * j + ab;
            let beta = 4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0));
            off[k] = beta.sqrt();
        }
    }
    let mu0 = (ab + 1.0) * std::f64::consts::LN_2 + libm::lgamma(a + 1.0) + libm::lgamma(b + 1.0)
        - libm::lgamma(ab + 2.0);
    let mu0 = mu0.exp();
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    symmetric_tridiagonal_ql(&mut diag, &mut off, &mut first);
    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first)
        .map(|(x, v)| (x, mu0 * v * v))
        .collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(Ordering::Equal));
    pairs.into_iter().unzip()
}

/// Implicit QL on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal and is overwritten with the eigenvalues; `e[i]`
/// couples rows i and i+1. Only the first component of each eigenvector is
/// tracked, in `z`.
fn symmetric_tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    let n = d.len();
    if n == 0 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 100, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let bb = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_41,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
    pub converged: bool,
}

/// Tolerances and subdivision cap for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Scalar> Default for AdaptiveOptions<T> {
    fn default() -> Self {
        Self {
            abs_tol: lit(1e-13),
            rel_tol: lit(1e-11),
            max_intervals: 400,
        }
    }
}

impl<T: Scalar> AdaptiveOptions<T> {
    pub fn new(abs_tol: T, rel_tol: T) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

fn gk15<T: Scalar, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = lit::<T>(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let fc = f(c);
    let mut kron = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = h * lit(XGK[j]);
        let pair = f(c - dx) + f(c + dx);
        kron = kron + pair * lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * lit(WG[j / 2]);
        }
    }
    let k = kron * h;
    let g = gauss * h;
    (k, (k - g).abs())
}

fn gk15_pair<T: Scalar, F: FnMut(T) -> [T; 2]>(f: &mut F, a: T, b: T) -> ([T; 2], T) {
    let half = lit::<T>(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let fc = f(c);
    let mut kron = [fc[0] * lit(WGK[7]), fc[1] * lit(WGK[7])];
    let mut gauss = [fc[0] * lit(WG[3]), fc[1] * lit(WG[3])];
    for j in 0..7 {
        let dx = h * lit(XGK[j]);
        let (lo, hi) = (f(c - dx), f(c + dx));
        for k in 0..2 {
            let pair = lo[k] + hi[k];
            kron[k] = kron[k] + pair * lit(WGK[j]);
            if j % 2 == 1 {
                gauss[k] = gauss[k] + pair * lit(WG[j / 2]);
            }
        }
    }
    let value = [kron[0] * h, kron[1] * h];
    let err = ((kron[0] - gauss[0]) * h)
        .abs()
        .max(((kron[1] - gauss[1]) * h).abs());
    (value, err)
}

/// Locally adaptive (recursive bisection) Gauss–Kronrod integration of a
/// two-component integrand. A segment is accepted when its Kronrod–Gauss
/// difference is below `max(abs_tol·len/(b-a), rel_tol·|value|)` or the
/// depth cap is hit; `converged` reports whether every segment passed.
pub fn adaptive_pair<T: Scalar, F: FnMut(T) -> [T; 2]>(
    mut f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_depth: usize,
) -> ([T; 2], T, bool) {
    fn rec<T: Scalar, F: FnMut(T) -> [T; 2]>(
        f: &mut F,
        a: T,
        b: T,
        abs_tol: T,
        rel_tol: T,
        depth: usize,
        acc: &mut ([T; 2], T, bool),
    ) {
        let (v, e) = gk15_pair(f, a, b);
        let scale = v[0].abs().max(v[1].abs());
        if e <= abs_tol.max(rel_tol * scale) || depth == 0 {
            acc.0 = [acc.0[0] + v[0], acc.0[1] + v[1]];
            acc.1 = acc.1 + e;
            acc.2 &= e <= abs_tol.max(rel_tol * scale);
            return;
        }
        let m = lit::<T>(0.5) * (a + b);
        let half_tol = lit::<T>(0.5) * abs_tol;
        rec(f, a, m, half_tol, rel_tol, depth - 1, acc);
        rec(f, m, b, half_tol, rel_tol, depth - 1, acc);
    }
    let mut acc = ([T::zero(); 2], T::zero(), true);
    rec(&mut f, a, b, abs_tol, rel_tol, max_depth, &mut acc);
    acc
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    order: usize,
}

impl<T: Scalar> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Scalar> Eq for Segment<T> {}
impl<T: Scalar> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.order.cmp(&self.order))
    }
}

/// Globally adaptive 15-point Gauss–Kronrod integration of `f` over [a, b].
///
/// The error estimate is the plain Kronrod–Gauss difference summed over
/// segments. Never panics on non-convergence; check `converged`.
pub fn adaptive<T: Scalar, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    opts: &AdaptiveOptions<T>,
) -> Integral<T> {
    adaptive_with_breaks(&mut f, &[a, b], opts)
}

/// Like [`adaptive`] but starts from the segments delimited by `points`
/// (ascending, at least two entries). Use it to place known kinks on
/// segment boundaries.
pub fn adaptive_with_breaks<T: Scalar, F: FnMut(T) -> T>(
    f: &mut F,
    points: &[T],
    opts: &AdaptiveOptions<T>,
) -> Integral<T> {
    let mut heap = BinaryHeap::new();
    let mut order = 0usize;
    let mut evaluations = 0usize;
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gk15(f, w[0], w[1]);
        evaluations += 15;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
            order,
        });
        order += 1;
    }
    let totals = |heap: &BinaryHeap<Segment<T>>| {
        let mut segs: Vec<&Segment<T>> = heap.iter().collect();
        segs.sort_by_key(|s| s.order);
        segs.iter().fold((T::zero(), T::zero()), |(v, e), s| {
            (v + s.value, e + s.error)
        })
    };
    let half = lit::<T>(0.5);
    let (mut run_value, mut run_error) = totals(&heap);
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * run_value.abs());
        let exhausted = heap.len() >= opts.max_intervals;
        if run_error <= target || heap.is_empty() || exhausted {
            let (value, error) = totals(&heap);
            let target = opts.abs_tol.max(opts.rel_tol * value.abs());
            if error <= target || heap.is_empty() || exhausted {
                return Integral {
                    value,
                    error,
                    evaluations,
                    converged: error <= target,
                };
            }
            run_value = value;
            run_error = error;
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = half * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at working precision
            run_error = run_error - worst.error;
            heap.push(Segment {
                error: T::zero(),
                ..worst
            });
            continue;
        }
        run_value = run_value - worst.value;
        run_error = run_error - worst.error;
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(f, lo, hi);
            run_value = run_value + value;
            run_error = run_error + error;
            evaluations += 15;
            heap.push(Segment {
                a: lo,
                b: hi,
                value,
                error,
                order,
            });
            order += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_matches_known_three_point_rule() {
        let r = GaussRule::<f64>::legendre(3);
        assert_relative_eq!(r.nodes()[2], (0.6f64).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(r.weights()[1], 8.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(r.weights()[0], 5.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn legendre_exact_for_high_degree_polynomials() {
        let r = GaussRule::<f64>::legendre(8);
        // degree 15 exactness
        let v = r.integrate(0.0, 2.0, |x| x.powi(15));
        assert_relative_eq!(v, 2f64.powi(16) / 16.0, max_relative = 1e-13);
    }

    #[test]
    fn jacobi_integrates_endpoint_singularity() {
        // ∫_{-1}^{1} (1+x)^{-0.7} dx = 2^{0.3}/0.3
        let r = GaussRule::<f64>::jacobi(10, 0.0, -0.7);
        let s: f64 = r.weights().iter().sum();
        assert_relative_eq!(s, 2f64.powf(0.3) / 0.3, max_relative = 1e-13);
        // ∫ (1+x)^{-0.7} (1+x)^2 dx = 2^{2.3}/2.3
        let v = r.integrate(-1.0, 1.0, |x| (1.0 + x).powi(2));
        assert_relative_eq!(v, 2f64.powf(2.3) / 2.3, max_relative = 1e-13);
    }

    #[test]
    fn adaptive_handles_interior_peak() {
        let opts = AdaptiveOptions::new(1e-14, 1e-12);
        let r = adaptive(|x: f64| 1.0 / (1e-4 + (x - 0.3).powi(2)), 0.0, 1.0, &opts);
        let exact = ((0.7f64 / 0.01).atan() + (0.3f64 / 0.01).atan()) / 0.01;
        assert!(r.converged);
        assert_relative_eq!(r.value, exact, max_relative = 1e-11);
    }

    #[test]
    fn adaptive_integrable_endpoint_singularity() {
        let opts = AdaptiveOptions::new(1e-12, 1e-10);
        let r = adaptive(|x: f64| x.powf(-0.5), 0.0, 1.0, &opts);
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn adaptive_is_generic_over_f32() {
        let opts = AdaptiveOptions::new(1e-6f32, 1e-5);
        let r = adaptive(|x: f32| x.exp(), 0.0, 1.0, &opts);
        assert!((r.value - (1f32.exp() - 1.0)).abs() < 1e-5);
    }

    #[test]
    fn pair_integrator_handles_sharp_layer() {
        // ∫_0^{0.01} (1, x) e^{-x/ε} dx with ε = 1e-4; the layer must be
        // visible to the first rule (GK15 cannot find unseen features)
        let eps = 1e-4f64;
        let (v, _, ok) = adaptive_pair(
            |x: f64| {
                let e = (-x / eps).exp();
                [e, x * e]
            },
            0.0,
            0.01,
            1e-16,
            1e-13,
            40,
        );
        assert!(ok);
        assert_relative_eq!(v[0], eps, max_relative = 1e-12);
        assert_relative_eq!(v[1], eps * eps, max_relative = 1e-12);
    }
}
