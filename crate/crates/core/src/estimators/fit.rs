//! Ordinary least squares on log-log transformed points.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub n_points: usize,
    pub r_squared: f64,
}

/// OLS of `ln y` on `ln x`. Needs at least 3 strictly positive points with
/// non-degenerate abscissae. `r_squared` is 1 for exact fits (including the
/// constant case).
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "log-log fit needs >= 3 points, got {}",
            points.len()
        )));
    }
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "log-log fit needs positive coordinates, got ({x}, {y})"
            )));
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(x, _)| x.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx <= 1e-24 * (1.0 + mx * mx) * n {
        return Err(Error::DegenerateFit("abscissae are (numerically) all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr = (syy - slope * sxy).max(0.0);
    let slope_stderr = (ssr / (n - 2.0) / sxx).sqrt();
    let r_squared = if syy <= 1e-30 {
        1.0
    } else {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    };
    Ok(ExponentFit {
        slope,
        intercept,
        slope_stderr,
        n_points: points.len(),
        r_squared,
    })
}
