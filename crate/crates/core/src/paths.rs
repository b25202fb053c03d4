//! Seedable samplers for the two-coordinate paths everything else consumes:
//! correlated Brownian discretizations (unconditioned, bridge, excursion,
//! meander) and nearest-neighbor quadrant lattice walks.
//!
//! All samplers are pure functions of `(inputs, seed)`: Gaussian increments
//! come from a ChaCha8 stream (ziggurat normals) seeded via the SplitMix64
//! derivation in [`crate::rng`], so identical seeds reproduce identical
//! paths byte for byte.

use crate::error::{Error, Result};
use crate::mullin;
use crate::params::GammaParams;
use crate::rng::SeedSpec;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathKind {
    Unconditioned,
    Bridge,
    Excursion,
    Meander,
    LatticeQuadrantBridge,
}

/// A discretized two-coordinate path `(L, R)` with `steps + 1` samples per
/// coordinate and `L[0] = R[0] = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub dt: f64,
    pub l: Vec<f64>,
    pub r: Vec<f64>,
    pub kind: PathKind,
}

impl PathSample {
    /// Number of steps `M`; the arrays hold `M + 1` samples.
    pub fn steps(&self) -> usize {
        self.l.len() - 1
    }

    pub fn total_time(&self) -> f64 {
        self.steps() as f64 * self.dt
    }

    pub fn coord(&self, which: Coord) -> &[f64] {
        match which {
            Coord::L => &self.l,
            Coord::R => &self.r,
        }
    }

    /// Checks the structural invariants of the kind tag.
    pub fn validate(&self) -> Result<()> {
        if self.l.is_empty() || self.l.len() != self.r.len() {
            return Err(Error::InvalidSize(format!(
                "coordinate arrays must have equal nonzero length, got {} and {}",
                self.l.len(),
                self.r.len()
            )));
        }
        if self.l[0] != 0.0 || self.r[0] != 0.0 {
            return Err(Error::InvalidEncoding("path must start at (0, 0)".into()));
        }
        let m = self.steps();
        match self.kind {
            PathKind::Unconditioned | PathKind::Bridge => {}
            PathKind::Excursion => {
                if self.l[m] != 0.0 || self.r[m] != 0.0 {
                    return Err(Error::InvalidEncoding("excursion must end at (0, 0)".into()));
                }
                if self.l.iter().any(|&v| v < 0.0) || self.r.iter().any(|&v| v < 0.0) {
                    return Err(Error::InvalidEncoding("excursion must be nonnegative".into()));
                }
            }
            PathKind::Meander => {
                if self.l.iter().any(|&v| v < 0.0) || self.r.iter().any(|&v| v < 0.0) {
                    return Err(Error::InvalidEncoding("meander must be nonnegative".into()));
                }
            }
            PathKind::LatticeQuadrantBridge => {
                if self.l[m] != 0.0 || self.r[m] != 0.0 {
                    return Err(Error::InvalidEncoding("lattice walk must end at (0, 0)".into()));
                }
                for k in 1..=m {
                    let dl = self.l[k] - self.l[k - 1];
                    let dr = self.r[k] - self.r[k - 1];
                    let unit = (dl.abs() == 1.0 && dr == 0.0) || (dl == 0.0 && dr.abs() == 1.0);
                    if !unit {
                        return Err(Error::InvalidEncoding(format!(
                            "lattice step {k} must move exactly one coordinate by 1"
                        )));
                    }
                    if self.l[k] < 0.0 || self.r[k] < 0.0 {
                        return Err(Error::InvalidEncoding(format!(
                            "lattice walk leaves the quadrant at step {k}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coord {
    L,
    R,
}

/// Sampling method for quadrant lattice walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeMethod {
    /// Uniform over the walk set by rejection from i.i.d. steps.
    Rejection,
    /// Deterministic pick (seed-indexed) from the full enumeration;
    /// only for `2n <= 12`.
    Exhaustive,
}

/// Attempt cap for rejection sampling of lattice walks.
pub const REJECTION_ATTEMPT_CAP: u64 = 10_000_000;

/// Sample a correlated Brownian path discretization of `steps` increments of
/// duration `dt`.
///
/// Unconditioned increments are centered Gaussian pairs with per-coordinate
/// variance `alpha_scale * dt` and covariance `rho * alpha_scale * dt`.
/// Bridges subtract the linear drift; excursions apply the Vervaat rotation
/// (argmin ties broken toward the earliest index) per coordinate; meanders
/// use the last-zero construction (restrict to after the last sign change,
/// take absolute values, Brownian-rescale back to full length). Excursion
/// and meander kinds require independent coordinates (`rho = 0`).
pub fn sample_path(
    params: &GammaParams,
    kind: PathKind,
    steps: usize,
    dt: f64,
    seed: SeedSpec,
) -> Result<PathSample> {
    if steps == 0 {
        return Err(Error::InvalidSize("path needs at least one step".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    match kind {
        PathKind::LatticeQuadrantBridge => {
            return Err(Error::UnsupportedKind(
                "lattice walks come from sample_lattice_walk".into(),
            ))
        }
        PathKind::Excursion | PathKind::Meander if !params.is_uncorrelated() => {
            return Err(Error::UnsupportedKind(format!(
                "{kind:?} is defined only for independent coordinates (rho = 0), got rho = {}",
                params.rho()
            )))
        }
        _ => {}
    }

    let (mut l, mut r) = raw_pair(params, steps, dt, seed);
    match kind {
        PathKind::Unconditioned => {}
        PathKind::Bridge => {
            bridge_transform(&mut l);
            bridge_transform(&mut r);
        }
        PathKind::Excursion => {
            bridge_transform(&mut l);
            bridge_transform(&mut r);
            vervaat(&mut l);
            vervaat(&mut r);
        }
        PathKind::Meander => {
            last_zero_meander(&mut l);
            last_zero_meander(&mut r);
        }
        PathKind::LatticeQuadrantBridge => unreachable!(),
    }
    Ok(PathSample { dt, l, r, kind })
}

/// Stream of correlated Gaussian increment pairs with per-step variance
/// `alpha_scale * dt` and correlation `rho`.
pub struct GaussianIncrements {
    rng: rand_chacha::ChaCha8Rng,
    scale: f64,
    rho: f64,
    cross: f64,
}

impl GaussianIncrements {
    pub fn new(params: &GammaParams, dt: f64, seed: SeedSpec) -> Self {
        let rho = params.rho();
        GaussianIncrements {
            rng: seed.rng(),
            scale: (params.alpha_scale() * dt).sqrt(),
            rho,
            cross: (1.0 - rho * rho).sqrt(),
        }
    }

    pub fn next_pair(&mut self) -> (f64, f64) {
        let g1: f64 = self.rng.sample(StandardNormal);
        let g2: f64 = self.rng.sample(StandardNormal);
        (
            self.scale * g1,
            self.scale * (self.rho * g1 + self.cross * g2),
        )
    }
}

fn raw_pair(params: &GammaParams, steps: usize, dt: f64, seed: SeedSpec) -> (Vec<f64>, Vec<f64>) {
    let mut inc = GaussianIncrements::new(params, dt, seed);
    let mut l = Vec::with_capacity(steps + 1);
    let mut r = Vec::with_capacity(steps + 1);
    l.push(0.0);
    r.push(0.0);
    let (mut lv, mut rv) = (0.0f64, 0.0f64);
    for _ in 0..steps {
        let (dl, dr) = inc.next_pair();
        lv += dl;
        rv += dr;
        l.push(lv);
        r.push(rv);
    }
    (l, r)
}

/// In-place bridge transform `w[k] -= (k / M) * w[M]`.
fn bridge_transform(w: &mut [f64]) {
    let m = w.len() - 1;
    let end = w[m];
    for (k, v) in w.iter_mut().enumerate() {
        *v -= end * (k as f64 / m as f64);
    }
    w[m] = 0.0;
}

/// Vervaat rotation of a bridge at its earliest argmin: the result is an
/// excursion with endpoints exactly 0 and nonnegative interior.
fn vervaat(w: &mut Vec<f64>) {
    let m = w.len() - 1;
    let mut arg = 0usize;
    for k in 1..m {
        if w[k] < w[arg] {
            arg = k;
        }
    }
    let base = w[arg];
    let rotated: Vec<f64> = (0..=m).map(|k| w[(arg + k) % m] - base).collect();
    *w = rotated;
    w[0] = 0.0;
    w[m] = 0.0;
}

/// Last-zero (Imhof) construction of a meander from an unconditioned path:
/// find the exact last zero `c` of the piecewise-linear interpolant before
/// the endpoint, restrict to `[c, M]`, take absolute values, and rescale to
/// `[0, M]` with Brownian scaling.
fn last_zero_meander(w: &mut Vec<f64>) {
    let m = w.len() - 1;
    if w[m] == 0.0 {
        // measure-zero guard: treat the endpoint as infinitesimally positive
        w[m] = f64::MIN_POSITIVE;
    }
    let sign_end = w[m];
    let mut tau = 0usize;
    for k in (0..m).rev() {
        if w[k] * sign_end <= 0.0 {
            tau = k;
            break;
        }
    }
    let c = if w[tau] == 0.0 {
        tau as f64
    } else {
        tau as f64 + w[tau] / (w[tau] - w[tau + 1])
    };
    let span = m as f64 - c;
    let scale = (m as f64 / span).sqrt();
    let out: Vec<f64> = (0..=m)
        .map(|j| {
            let u = c + span * (j as f64 / m as f64);
            let k = (u.floor() as usize).min(m - 1);
            let frac = u - k as f64;
            let val = w[k] + frac * (w[k + 1] - w[k]);
            val.abs() * scale
        })
        .collect();
    *w = out;
    w[0] = 0.0;
}

/// A pair of independent unit-step lattice excursions (discrete Vervaat
/// rotation of a uniformly shuffled +-1 bridge per coordinate), tagged
/// `Excursion`. Both coordinates move at every step, values are integers.
/// This is the exactly-representable excursion family used by the
/// re-rooting graph-shift checks.
pub fn sample_lattice_excursion_pair(steps: usize, seed: SeedSpec) -> Result<PathSample> {
    if steps == 0 || steps % 2 != 0 {
        return Err(Error::InvalidSize(format!(
            "lattice excursion needs a positive even step count, got {steps}"
        )));
    }
    let mut rng = seed.rng();
    let coord = |rng: &mut rand_chacha::ChaCha8Rng| {
        let mut incs: Vec<f64> = (0..steps).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        for i in (1..steps).rev() {
            let j = rng.gen_range(0..=i);
            incs.swap(i, j);
        }
        let mut w = Vec::with_capacity(steps + 1);
        w.push(0.0f64);
        for inc in incs {
            w.push(w.last().unwrap() + inc);
        }
        vervaat(&mut w);
        w
    };
    let l = coord(&mut rng);
    let r = coord(&mut rng);
    Ok(PathSample {
        dt: 1.0,
        l,
        r,
        kind: PathKind::Excursion,
    })
}

/// Uniform (Rejection) or seed-indexed (Exhaustive) element of the set of
/// nearest-neighbor walks with `2n` steps staying in the first quadrant and
/// returning to the origin, encoded as a `LatticeQuadrantBridge` path.
pub fn sample_lattice_walk(n: usize, seed: SeedSpec, method: LatticeMethod) -> Result<PathSample> {
    if n == 0 {
        return Err(Error::InvalidSize("lattice walk needs n >= 1 edges".into()));
    }
    match method {
        LatticeMethod::Exhaustive => {
            if 2 * n > 12 {
                return Err(Error::SizeLimit(format!(
                    "exhaustive lattice sampling needs 2n <= 12, got 2n = {}",
                    2 * n
                )));
            }
            let walks = mullin::all_walks(n);
            let idx = (seed.derive() % walks.len() as u64) as usize;
            Ok(mullin::walk_to_path(&walks[idx]))
        }
        LatticeMethod::Rejection => {
            let mut rng = seed.rng();
            let mut attempts: u64 = 0;
            'outer: loop {
                attempts += 1;
                if attempts > REJECTION_ATTEMPT_CAP {
                    return Err(Error::RejectionBudget { attempts: attempts - 1 });
                }
                let mut x: i64 = 0;
                let mut y: i64 = 0;
                let mut l = Vec::with_capacity(2 * n + 1);
                let mut r = Vec::with_capacity(2 * n + 1);
                l.push(0.0);
                r.push(0.0);
                for _ in 0..2 * n {
                    match rng.gen_range(0..4u8) {
                        0 => x += 1,
                        1 => x -= 1,
                        2 => y += 1,
                        _ => y -= 1,
                    }
                    if x < 0 || y < 0 {
                        continue 'outer;
                    }
                    l.push(x as f64);
                    r.push(y as f64);
                }
                if x == 0 && y == 0 {
                    return Ok(PathSample {
                        dt: 1.0,
                        l,
                        r,
                        kind: PathKind::LatticeQuadrantBridge,
                    });
                }
            }
        }
    }
}
