//! Special functions: reciprocal gamma, Wright functions, Mittag-Leffler.

mod gamma;
mod mittag_leffler;
mod wright;

pub use gamma::{gamma_increment, recip_gamma, upper_gamma_scaled};
pub use mittag_leffler::{mittag_leffler, ASYMPTOTIC_SWITCH};
pub use wright::{evaluation_count, wright_m, wright_w, WrightTable};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Truncation control for the power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTolerance<T> {
    pub rel_tol: T,
    pub max_terms: usize,
}

impl<T: Scalar> Default for SeriesTolerance<T> {
    /// `rel_tol = 1e-12` (raised to 64 ulp for narrow types), 500 terms.
    fn default() -> Self {
        Self {
            rel_tol: lit::<T>(1e-12).max(lit::<T>(64.0) * T::epsilon()),
            max_terms: 500,
        }
    }
}

impl<T: Scalar> SeriesTolerance<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero() && self.rel_tol < T::one()) {
            return Err(invalid(
                "rel_tol",
                to_f64(self.rel_tol),
                "must lie in (0, 1)",
            ));
        }
        if self.max_terms == 0 {
            return Err(invalid("max_terms", 0.0, "must be at least 1"));
        }
        Ok(())
    }
}

/// Parameter pair `(λ, μ)` of `W_{λ,μ}(z) = Σ z^k / (k! Γ(λk + μ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrightSpec<T> {
    pub lambda: T,
    pub mu: T,
}

impl<T: Scalar> WrightSpec<T> {
    /// The M-function pair `(-ν, 1 - ν)`.
    pub fn mainardi(nu: T) -> Self {
        Self {
            lambda: -nu,
            mu: T::one() - nu,
        }
    }

    /// The pair `(-ν, ν)` that inverts `s^{-ν} e^{-x s^ν}`.
    pub fn derivative(nu: T) -> Self {
        Self {
            lambda: -nu,
            mu: nu,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > -T::one() && self.lambda < T::zero()) {
            return Err(invalid(
                "lambda",
                to_f64(self.lambda),
                "must lie in (-1, 0)",
            ));
        }
        if !self.mu.is_finite() {
            return Err(invalid("mu", to_f64(self.mu), "must be finite"));
        }
        Ok(())
    }
}
