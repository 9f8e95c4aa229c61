//! Fit-then-validate checks of the kernel estimates and of the growth of
//! the left trace.
//!
//! Kernel estimates, with `ν = α/2`:
//!
//! ```text
//! far   (|x|² ≥ t^α):  |K| ≤ C t^{-ν} e^{-σφ},   |D^{1-α}K| ≤ C t^{ν-1} e^{-σφ}
//! near  (|x|² ≤ t^α):  |K| ≤ C t^{-ν},           |D^{1-α}K| ≤ C t^{ν-1}
//! ```
//!
//! where `φ = t^{-α/(2-α)} |x|^{2/(2-α)}`.

use crate::analysis::laplace::log_space;
use crate::error::Result;
use crate::grid::TimeSeries;
use crate::kernel::{FractionalOrder, Kernel};
use crate::report::{fit_exponential, fit_scale, BoundReport, Sample};
use crate::solver::growth_bound_check;

/// Sample counts per axis of the log-spaced `(x, t)` grids.
pub const KERNEL_GRID: usize = 40;

/// Interleaves samples sorted by `param` so that even and odd indices
/// cover the same range.
fn sorted(mut samples: Vec<Sample>) -> Vec<Sample> {
    samples.sort_by(|a, b| a.param.partial_cmp(&b.param).unwrap());
    samples
}

/// The four kernel estimates for one order.
pub fn kernel_bound_suite(kernel: &Kernel<f64>) -> Result<Vec<BoundReport>> {
    let order = kernel.order();
    let alpha = order.alpha();
    let nu = order.half();
    let xs = log_space(1e-3, 2.0, KERNEL_GRID);
    let ts = log_space(1e-6, 1e2, KERNEL_GRID);
    let (mut far, mut far_rl, mut near, mut near_rl) = (vec![], vec![], vec![], vec![]);
    for &x in &xs {
        for &t in &ts {
            let k = kernel.k(x, t)?;
            let k_rl = kernel.k_rl(x, t)?;
            if x * x >= t.powf(alpha) {
                let phi = t.powf(-alpha / (2.0 - alpha)) * x.powf(2.0 / (2.0 - alpha));
                // skip underflowed values: no information about the rate
                if k > 0.0 {
                    far.push(Sample {
                        param: phi,
                        value: k * t.powf(nu),
                        envelope: phi,
                    });
                }
                if k_rl > 0.0 {
                    far_rl.push(Sample {
                        param: phi,
                        value: k_rl * t.powf(1.0 - nu),
                        envelope: phi,
                    });
                }
            }
            if x * x <= t.powf(alpha) {
                let z = x * t.powf(-nu);
                near.push(Sample {
                    param: z,
                    value: k,
                    envelope: t.powf(-nu),
                });
                near_rl.push(Sample {
                    param: z,
                    value: k_rl,
                    envelope: t.powf(nu - 1.0),
                });
            }
        }
    }
    Ok(vec![
        fit_exponential("kernel_far", &sorted(far)),
        fit_exponential("kernel_rl_far", &sorted(far_rl)),
        fit_scale("kernel_near", &sorted(near)),
        fit_scale("kernel_rl_near", &sorted(near_rl)),
    ])
}

/// Growth of `ũ(0,·)` on `[t_lo, t_hi]` for one trace.
pub fn trace_growth(
    order: FractionalOrder<f64>,
    trace: &TimeSeries<f64>,
    t_lo: f64,
    t_hi: f64,
) -> BoundReport {
    growth_bound_check(order, trace, t_lo, t_hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ThetaTruncation;

    #[test]
    fn suite_passes_at_half_order() {
        let kernel = Kernel::new(
            FractionalOrder::new(0.5).unwrap(),
            ThetaTruncation::default(),
        )
        .unwrap();
        for r in kernel_bound_suite(&kernel).unwrap() {
            assert!(r.pass, "{r:?}");
            assert!(r.worst_ratio >= 0.0);
        }
    }
}
