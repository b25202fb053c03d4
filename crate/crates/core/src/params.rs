use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Coupling constant `gamma` together with its derived quantities.
///
/// The two path coordinates are correlated Gaussian increments with
/// correlation `rho = -cos(pi * gamma^2 / 4)`, and `kappa = 16 / gamma^2`.
/// `alpha_scale` is the per-unit-time variance of each coordinate; the
/// exponents estimated downstream are scale invariant, so it defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    gamma: f64,
    alpha_scale: f64,
}

/// `|rho|` below this is snapped to exactly 0. With `gamma = sqrt(2)` in
/// f64, `gamma^2 = 2 + 2^-51`, so the computed correlation is ~2e-16 rather
/// than 0; the snap restores the exact-independence case.
const RHO_ZERO_SNAP: f64 = 1e-12;

impl GammaParams {
    pub fn new(gamma: f64) -> Result<Self> {
        Self::with_alpha_scale(gamma, 1.0)
    }

    pub fn with_alpha_scale(gamma: f64, alpha_scale: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 2.0) {
            return Err(Error::InvalidArgument(format!(
                "gamma must lie in (0, 2), got {gamma}"
            )));
        }
        if !(alpha_scale > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha_scale must be positive, got {alpha_scale}"
            )));
        }
        Ok(GammaParams { gamma, alpha_scale })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha_scale(&self) -> f64 {
        self.alpha_scale
    }

    /// Correlation of the two coordinates: `-cos(pi * gamma^2 / 4)`.
    pub fn rho(&self) -> f64 {
        let rho = -(PI * self.gamma * self.gamma / 4.0).cos();
        if rho.abs() < RHO_ZERO_SNAP {
            0.0
        } else {
            rho
        }
    }

    /// `kappa = 16 / gamma^2 > 4`.
    pub fn kappa(&self) -> f64 {
        16.0 / (self.gamma * self.gamma)
    }

    /// True when the coordinates are exactly independent (`gamma^2 = 2`).
    pub fn is_uncorrelated(&self) -> bool {
        self.rho() == 0.0
    }
}
