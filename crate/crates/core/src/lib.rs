//! Theta-function representation of the 1-D time-fractional diffusion
//! equation `∂_t^α u = u_xx` on `(0,1)` with Neumann data, and numerical
//! tools for the lateral Cauchy problem and its unique continuation.
//!
//! The numerical core is generic over the scalar type ([`Scalar`], `f32`
//! or `f64`); the aliases below fix it to `f64`. The [`analysis`] drivers
//! and the [`verify`] suites work in `f64`.

// `!(a > b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod kernel;
pub mod oracle;
pub mod quad;
pub mod report;
pub mod scalar;
pub mod solver;
pub mod specfun;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use field::Provenance;
pub use kernel::{Flavor, ThetaTruncation};
pub use scalar::Scalar;

pub type FractionalOrder = kernel::FractionalOrder<f64>;
pub type Kernel = kernel::Kernel<f64>;
pub type SpaceTimeGrid = grid::SpaceTimeGrid<f64>;
pub type TimeSeries = grid::TimeSeries<f64>;
pub type Profile = grid::Profile<f64>;
pub type SolutionField = field::SolutionField<f64>;
pub type CauchyData = solver::CauchyData<f64>;
pub type NeumannExtension = solver::NeumannExtension<f64>;
pub type Solver = solver::Solver<f64>;
pub type SolverOptions = solver::SolverOptions<f64>;
pub type IbvpSolution = solver::IbvpSolution<f64>;
pub type Contribution = solver::Contribution<f64>;
