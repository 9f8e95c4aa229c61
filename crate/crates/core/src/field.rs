//! Solution fields `u(x_i, t_j)` on a [`SpaceTimeGrid`].

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::{SpaceTimeGrid, TimeSeries};
use crate::scalar::{lit, Scalar};

/// Which solver produced a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Representation,
    L1Oracle,
    SpectralOracle,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Representation => "representation",
            Provenance::L1Oracle => "l1_oracle",
            Provenance::SpectralOracle => "spectral_oracle",
        }
    }
}

/// `values[[i, j]] = u(x_i, t_{j+1})`, an `nx × nt` array.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField<T> {
    values: Array2<T>,
    grid: SpaceTimeGrid<T>,
    provenance: Provenance,
    /// Estimated max-norm numerical error (0 if the solver gives none).
    pub error_estimate: T,
}

impl<T: Scalar> SolutionField<T> {
    pub fn new(
        values: Array2<T>,
        grid: SpaceTimeGrid<T>,
        provenance: Provenance,
        error_estimate: T,
    ) -> Result<Self> {
        if values.dim() != (grid.nx, grid.nt) {
            return Err(invalid(
                "values",
                values.len() as f64,
                "field shape must be nx × nt",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("values", f64::NAN, "field entries must be finite"));
        }
        Ok(Self {
            values,
            grid,
            provenance,
            error_estimate,
        })
    }

    pub fn values(&self) -> &Array2<T> {
        &self.values
    }

    pub fn grid(&self) -> &SpaceTimeGrid<T> {
        &self.grid
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `u(x_i, t_j)` with `j` in `1..=nt`.
    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[[i, j - 1]]
    }

    /// `t ↦ u(x_i, t)` over the output times.
    pub fn trace(&self, i: usize) -> TimeSeries<T> {
        TimeSeries {
            t: self.grid.ts(),
            values: self.values.row(i).to_vec(),
        }
    }

    /// `u_x(0, ·)` by the one-sided stencil `(-3u_0 + 4u_1 - u_2) / (2h)`.
    pub fn left_flux(&self) -> TimeSeries<T> {
        let h = self.grid.dx();
        let (two, three, four) = (lit::<T>(2.0), lit::<T>(3.0), lit::<T>(4.0));
        let values = (0..self.grid.nt)
            .map(|j| {
                let v = |i: usize| self.values[[i, j]];
                (-three * v(0) + four * v(1) - v(2)) / (two * h)
            })
            .collect();
        TimeSeries {
            t: self.grid.ts(),
            values,
        }
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Max-norm distance to another field on the same grid, restricted to
    /// times in `[t_lo, t_hi]`.
    pub fn max_diff_in(&self, other: &Self, t_lo: T, t_hi: T) -> Result<T> {
        if self.grid != other.grid {
            return Err(invalid("grid", 0.0, "fields live on different grids"));
        }
        let mut worst = T::zero();
        for j in 1..=self.grid.nt {
            let t = self.grid.t(j);
            if t < t_lo || t > t_hi {
                continue;
            }
            for i in 0..self.grid.nx {
                worst = worst.max((self.at(i, j) - other.at(i, j)).abs());
            }
        }
        Ok(worst)
    }

    pub fn max_diff(&self, other: &Self) -> Result<T> {
        self.max_diff_in(other, T::zero(), T::infinity())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_is_checked() {
        let g = SpaceTimeGrid::new(3, 2, 1.0).unwrap();
        assert!(SolutionField::new(Array2::zeros((3, 2)), g, Provenance::L1Oracle, 0.0).is_ok());
        assert!(SolutionField::new(Array2::zeros((2, 3)), g, Provenance::L1Oracle, 0.0).is_err());
        let mut bad = Array2::zeros((3, 2));
        bad[[0, 0]] = f64::NAN;
        assert!(SolutionField::new(bad, g, Provenance::L1Oracle, 0.0).is_err());
    }

    #[test]
    fn flux_stencil_is_exact_for_quadratics() {
        let g = SpaceTimeGrid::new(5, 2, 1.0).unwrap();
        let v = Array2::from_shape_fn((5, 2), |(i, _)| {
            let x = i as f64 / 4.0;
            x * x + 3.0 * x
        });
        let f = SolutionField::new(v, g, Provenance::Representation, 0.0).unwrap();
        for v in f.left_flux().values {
            assert!((v - 3.0).abs() < 1e-12);
        }
    }
}
