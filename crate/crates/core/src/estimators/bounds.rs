//! Closed-form exponent bounds as functions of gamma.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

fn check_gamma(gamma: f64) -> Result<f64> {
    if gamma > 0.0 && gamma < 2.0 {
        Ok(gamma)
    } else {
        Err(Error::InvalidArgument(format!(
            "gamma must lie in (0, 2), got {gamma}"
        )))
    }
}

/// Watabiki's predicted dimension
/// `1 + gamma^2/4 + sqrt((4 + gamma^2)^2 + 16 gamma^2) / 4`.
pub fn watabiki_dimension(gamma: f64) -> Result<f64> {
    let g2 = check_gamma(gamma)?.powi(2);
    Ok(1.0 + g2 / 4.0 + ((4.0 + g2).powi(2) + 16.0 * g2).sqrt() / 4.0)
}

/// Lower ball-volume bound `2 gamma^2 / (4 + gamma^2 - sqrt(16 + gamma^4))`.
pub fn d_minus(gamma: f64) -> Result<f64> {
    let g2 = check_gamma(gamma)?.powi(2);
    Ok(2.0 * g2 / (4.0 + g2 - (16.0 + g2 * g2).sqrt()))
}

/// Upper ball-volume bound `2 + gamma^2/2 + sqrt(2) gamma`.
pub fn d_plus(gamma: f64) -> Result<f64> {
    let g = check_gamma(gamma)?;
    Ok(2.0 + g * g / 2.0 + 2f64.sqrt() * g)
}

/// `xi_minus = 1 / d_plus`.
pub fn xi_minus(gamma: f64) -> Result<f64> {
    Ok(1.0 / (2.0 + gamma * gamma / 2.0 + 2f64.sqrt() * check_gamma(gamma)?))
}

/// Lower bound for the diameter exponent: `xi_minus v (1 - 2/gamma^2)`.
pub fn chi_lower(gamma: f64) -> Result<f64> {
    Ok(xi_minus(gamma)?.max(1.0 - 2.0 / (gamma * gamma)))
}

/// All bounds for one gamma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub gamma: f64,
    pub watabiki_d: f64,
    pub d_minus: f64,
    pub d_plus: f64,
    pub xi_minus: f64,
    pub chi_lower: f64,
    pub chi_upper: f64,
}

pub fn exponent_bounds(gamma: f64) -> Result<BoundsTable> {
    Ok(BoundsTable {
        gamma,
        watabiki_d: watabiki_dimension(gamma)?,
        d_minus: d_minus(gamma)?,
        d_plus: d_plus(gamma)?,
        xi_minus: xi_minus(gamma)?,
        chi_lower: chi_lower(gamma)?,
        chi_upper: 0.5,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridConsistencyReport {
    pub points: usize,
    pub max_sandwich_violation: f64,
    pub max_xi_identity_error: f64,
    pub pass: bool,
}

/// Numerical consistency over a gamma grid: `d_minus <= watabiki <= d_plus`
/// and `xi_minus * d_plus = 1`, to within `tol`.
pub fn bounds_grid_consistency(points: usize, tol: f64) -> GridConsistencyReport {
    let mut max_violation = 0.0f64;
    let mut max_identity = 0.0f64;
    for i in 0..points {
        let gamma = 2.0 * (i as f64 + 0.5) / (points as f64 + 1.0);
        let t = exponent_bounds(gamma).expect("grid gamma in range");
        max_violation = max_violation
            .max(t.d_minus - t.watabiki_d)
            .max(t.watabiki_d - t.d_plus);
        max_identity = max_identity.max((t.xi_minus * t.d_plus - 1.0).abs());
    }
    GridConsistencyReport {
        points,
        max_sandwich_violation: max_violation,
        max_xi_identity_error: max_identity,
        pass: max_violation <= tol && max_identity <= tol,
    }
}
