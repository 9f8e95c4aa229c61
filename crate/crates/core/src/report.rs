//! Fit-then-validate bound reports.
//!
//! Samples are split by index parity: constants are fitted on even-indexed
//! samples and the inequality is checked on odd-indexed ones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Safety factor applied to fitted constants before validation.
pub const FIT_MARGIN: f64 = 1.05;

/// Outcome of checking one asymptotic estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub estimate_id: String,
    pub fitted_constants: BTreeMap<String, f64>,
    pub train_range: (f64, f64),
    pub validation_range: (f64, f64),
    /// max over validation samples of |quantity| / bound.
    pub worst_ratio: f64,
    pub pass: bool,
}

/// One sample: the parameter it is indexed by (for range reporting), the
/// measured quantity and the shape of the bound at that parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub param: f64,
    pub value: f64,
    pub envelope: f64,
}

fn range<'a, I: Iterator<Item = &'a Sample>>(it: I) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
        (lo.min(s.param), hi.max(s.param))
    })
}

fn ratio(value: f64, bound: f64) -> f64 {
    let v = value.abs();
    if v == 0.0 {
        0.0
    } else if bound > 0.0 {
        v / bound
    } else {
        f64::INFINITY
    }
}

/// `|value| ≤ C · envelope` with `C` fitted as the training maximum of
/// `|value|/envelope` times [`FIT_MARGIN`].
pub fn fit_scale(id: &str, samples: &[Sample]) -> BoundReport {
    let train = samples.iter().step_by(2);
    let validate = samples.iter().skip(1).step_by(2);
    let c = train
        .clone()
        .map(|s| ratio(s.value, s.envelope))
        .fold(0.0, f64::max)
        * FIT_MARGIN;
    let worst = validate
        .clone()
        .map(|s| ratio(s.value, c * s.envelope))
        .fold(0.0, f64::max);
    let mut fitted = BTreeMap::new();
    fitted.insert("C".to_string(), c);
    BoundReport {
        estimate_id: id.to_string(),
        fitted_constants: fitted,
        train_range: range(train),
        validation_range: range(validate),
        worst_ratio: worst,
        pass: worst <= 1.0,
    }
}

/// `|value| ≤ C e^{-σ φ}` where `envelope` carries `φ`. `σ` is the
/// least-squares slope of `ln|value|` against `φ` on the training set
/// (clamped to be non-negative) divided by [`FIT_MARGIN`], then `C` is the
/// training maximum of `|value| e^{σφ}` times [`FIT_MARGIN`]. Shrinking the
/// rate keeps an algebraic prefactor from outgrowing the fit at the far
/// end of the range.
pub fn fit_exponential(id: &str, samples: &[Sample]) -> BoundReport {
    let train: Vec<&Sample> = samples.iter().step_by(2).collect();
    let validate: Vec<&Sample> = samples.iter().skip(1).step_by(2).collect();
    let pts: Vec<(f64, f64)> = train
        .iter()
        .filter(|s| s.value != 0.0)
        .map(|s| (s.envelope, s.value.abs().ln()))
        .collect();
    let sigma = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        if sxx > 0.0 {
            (-sxy / sxx).max(0.0) / FIT_MARGIN
        } else {
            0.0
        }
    } else {
        0.0
    };
    // work in logs: ln C = max(ln|v| + σφ)
    let ln_c = train
        .iter()
        .filter(|s| s.value != 0.0)
        .map(|s| s.value.abs().ln() + sigma * s.envelope)
        .fold(f64::NEG_INFINITY, f64::max)
        + FIT_MARGIN.ln();
    let worst = validate
        .iter()
        .map(|s| {
            if s.value == 0.0 {
                0.0
            } else {
                (s.value.abs().ln() + sigma * s.envelope - ln_c).exp()
            }
        })
        .fold(0.0, f64::max);
    let mut fitted = BTreeMap::new();
    fitted.insert("C".to_string(), ln_c.exp());
    fitted.insert("sigma".to_string(), sigma);
    BoundReport {
        estimate_id: id.to_string(),
        fitted_constants: fitted,
        train_range: range(train.into_iter()),
        validation_range: range(validate.into_iter()),
        worst_ratio: worst,
        pass: worst <= 1.0,
    }
}

/// An inequality with explicit constants: `|value| ≤ envelope` at every
/// sample, no fitting.
pub fn explicit(id: &str, samples: &[Sample]) -> BoundReport {
    let worst = samples
        .iter()
        .map(|s| ratio(s.value, s.envelope))
        .fold(0.0, f64::max);
    let all = range(samples.iter());
    BoundReport {
        estimate_id: id.to_string(),
        fitted_constants: BTreeMap::new(),
        train_range: all,
        validation_range: all,
        worst_ratio: worst,
        pass: worst <= 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_fit_uses_disjoint_halves() {
        let samples: Vec<Sample> = (0..10)
            .map(|i| Sample {
                param: i as f64,
                value: 1.0 + 0.01 * i as f64,
                envelope: 1.0,
            })
            .collect();
        let r = fit_scale("demo", &samples);
        assert_eq!(r.train_range, (0.0, 8.0));
        assert_eq!(r.validation_range, (1.0, 9.0));
        assert!(r.pass);
        // a spike on the validation half is caught
        let mut spiked = samples.clone();
        spiked[5].value = 3.0;
        assert!(!fit_scale("demo", &spiked).pass);
    }

    #[test]
    fn exponential_fit_recovers_rate_up_to_margin() {
        let samples: Vec<Sample> = (0..40)
            .map(|i| {
                let phi = 0.5 * i as f64;
                Sample {
                    param: phi,
                    value: 3.0 * (-0.7 * phi).exp(),
                    envelope: phi,
                }
            })
            .collect();
        let r = fit_exponential("exp", &samples);
        assert!((r.fitted_constants["sigma"] * FIT_MARGIN - 0.7).abs() < 1e-9);
        assert!(r.pass);
    }

    #[test]
    fn zero_quantities_pass() {
        let samples = [Sample {
            param: 1.0,
            value: 0.0,
            envelope: 0.0,
        }; 4];
        assert!(fit_scale("z", &samples).pass);
        assert!(explicit("z", &samples).pass);
    }
}
