//! Closed-form bound evaluation, log-log exponent fitting, and the Monte
//! Carlo experiment suite.

pub mod bounds;
pub mod experiment;
pub mod fit;

pub use bounds::{bounds_grid_consistency, exponent_bounds, watabiki_dimension, BoundsTable};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentResult};
pub use fit::{fit_loglog, ExponentFit};
