//! Numerical laboratory for the degenerate diffusion equation with a
//! singular absorption term,
//!
//! ```text
//! ∂ₜu − Δuᵐ + λ u^{−β} χ_{u>0} = 0,      m ≥ 1, β > 0,
//! ```
//!
//! on 1D intervals and radially symmetric N-dimensional balls. The crate
//! provides the globally Lipschitz regularization of the absorption term,
//! explicit and split time integrators for the regularized problems, the
//! closed-form stationary profiles and sub/supersolution barriers, and
//! estimators that test gradient bounds, smoothing exponents, Hölder
//! moduli, and quenching diagnostics against the simulated fields.
//!
//! The crate is `no_std` compatible (an allocator is required); file IO,
//! plotting, and the command line live in the companion `quenchlab` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod barriers;
pub mod estimators;
pub mod grid;
pub mod params;
pub mod quench;
pub mod regularize;
pub mod solver;

pub use grid::{Domain, Field, Grid, WeightField};
pub use params::{ModelParams, RegimeReport};
pub use solver::{BoundaryMode, RunResult, Scheme, SimConfig};
