//! Mated-CRT map simulation library.
//!
//! Builds structure graphs from correlated two-coordinate Brownian path
//! discretizations (and quadrant lattice walks via the discrete
//! mating-of-trees encoding), measures graph distances, and estimates the
//! scaling exponents those graphs exhibit, together with the closed-form
//! bound tables they are checked against.

pub mod error;
pub mod estimators;
pub mod exec;
pub mod features;
pub mod graph;
pub mod metrics;
pub mod mullin;
pub mod oracle;
pub mod params;
pub mod paths;
pub mod reroot;
pub mod stats;
pub mod rmq;
pub mod rng;

pub use error::{Error, Result};
pub use params::GammaParams;
pub use rng::SeedSpec;
