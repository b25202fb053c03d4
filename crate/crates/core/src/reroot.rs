//! Re-rooting of two-coordinate excursions: the contour-function change of
//! root, its involution, the induced cyclic shift of the structure graph,
//! and the distributional invariance test for independent coordinates.

use crate::error::{Error, Result};
use crate::graph::{build_graph, CellDecomposition, GraphMode};
use crate::metrics::{diameter_with_limit, DiameterMethod};
use crate::params::GammaParams;
use crate::paths::{sample_path, PathKind, PathSample};
use crate::rng::SeedSpec;
use crate::stats::{ks_two_sample, KsReport};
use serde::{Deserialize, Serialize};

/// Change the root of an excursion to sample index `pivot`:
/// `w'[s] = (w[t] - m) + (w[(s+t) mod M] - m)` with `m` the minimum of `w`
/// over the unwrapped index range between `t` and `(s+t) mod M`. Cyclic
/// index arithmetic realizes the fractional shift; both coordinates are
/// re-rooted at the same pivot. Endpoints come out exactly 0 and the
/// interior exactly nonnegative.
pub fn reroot(path: &PathSample, pivot: usize) -> Result<PathSample> {
    if path.kind != PathKind::Excursion {
        return Err(Error::UnsupportedKind(format!(
            "re-rooting needs an Excursion path, got {:?}",
            path.kind
        )));
    }
    let m = path.steps();
    if pivot > m {
        return Err(Error::InvalidArgument(format!(
            "pivot {pivot} out of range 0..={m}"
        )));
    }
    Ok(PathSample {
        dt: path.dt,
        l: reroot_coord(&path.l, pivot),
        r: reroot_coord(&path.r, pivot),
        kind: PathKind::Excursion,
    })
}

fn reroot_coord(w: &[f64], t: usize) -> Vec<f64> {
    let m = w.len() - 1;
    let t = t % m.max(1);
    // running minima away from the pivot in both directions
    let mut fwd = vec![0.0f64; m + 1]; // fwd[u] = min w[t..=u] for u >= t
    let mut acc = f64::INFINITY;
    for u in t..=m {
        acc = acc.min(w[u]);
        fwd[u] = acc;
    }
    let mut bwd = vec![0.0f64; m + 1]; // bwd[u] = min w[u..=t] for u <= t
    let mut acc = f64::INFINITY;
    for u in (0..=t).rev() {
        acc = acc.min(w[u]);
        bwd[u] = acc;
    }
    (0..=m + 0)
        .map(|s| {
            let u = (s + t) % m;
            let u = if s == m { t } else { u };
            let min = if u >= t { fwd[u] } else { bwd[u] };
            (w[t] - min) + (w[u] - min)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShiftReport {
    pub cells_shift: usize,
    pub edges_checked: usize,
    pub first_mismatch: Option<((usize, usize), (usize, usize))>,
    pub pass: bool,
}

/// Check that re-rooting at a cell-aligned pivot shifts the structure graph
/// cyclically: cells `x1, x2` are adjacent iff their shifts by
/// `N - pivot/K` (mod N) are adjacent in the graph of the re-rooted path.
pub fn reroot_graph_shift_check(
    path: &PathSample,
    cells: CellDecomposition,
    pivot: usize,
) -> Result<ShiftReport> {
    if pivot % cells.cell_size != 0 {
        return Err(Error::UnalignedPivot {
            pivot,
            cell_size: cells.cell_size,
        });
    }
    let n = cells.cell_count;
    let g1 = build_graph(path, cells, GraphMode::ContinuousRule)?;
    let g2 = build_graph(&reroot(path, pivot)?, cells, GraphMode::ContinuousRule)?;
    let shift = n - (pivot / cells.cell_size) % n;
    let map = |c: usize| (c + shift) % n;
    let mut first_mismatch = None;
    let mut edges_checked = 0usize;
    'outer: for x1 in 0..n {
        for x2 in x1 + 1..n {
            let a = g1.are_adjacent(x1, x2);
            let (s1, s2) = (map(x1), map(x2));
            let b = g2.are_adjacent(s1, s2);
            edges_checked += 1;
            if a != b {
                first_mismatch = Some(((x1, x2), (s1, s2)));
                break 'outer;
            }
        }
    }
    Ok(ShiftReport {
        cells_shift: shift,
        edges_checked,
        pass: first_mismatch.is_none(),
        first_mismatch,
    })
}

/// Statistic compared across re-rooted and plain replicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RerootStatistic {
    Diameter,
    RootDegree,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RerootLawReport {
    pub ks: KsReport,
    pub negative_control: KsReport,
    pub replicates: usize,
    pub pivot_index: usize,
}

/// Two-sample Kolmogorov-Smirnov test of the re-rooting invariance in law:
/// statistics of graphs built from independent excursions vs. from
/// independent re-rooted excursions. The negative control replaces the
/// excursion by a re-rooted bridge, which is *not* excursion-distributed,
/// and should be rejected at matched sample sizes.
pub fn reroot_law_test(
    params: &GammaParams,
    cell_count: usize,
    cell_size: usize,
    replicates: usize,
    pivot_fraction: f64,
    statistic: RerootStatistic,
    seed: SeedSpec,
) -> Result<RerootLawReport> {
    if !params.is_uncorrelated() {
        return Err(Error::UnsupportedParameter(format!(
            "re-rooting invariance holds only for rho = 0, got rho = {}",
            params.rho()
        )));
    }
    if replicates < 10 {
        return Err(Error::Config(format!(
            "need at least 10 replicates, got {replicates}"
        )));
    }
    if !(0.0..=1.0).contains(&pivot_fraction) {
        return Err(Error::InvalidArgument(format!(
            "pivot fraction {pivot_fraction} outside [0, 1]"
        )));
    }
    let steps = cell_count * cell_size;
    let dt = 1.0 / steps as f64;
    let cells = CellDecomposition::new(cell_size, cell_count)?;
    let pivot = ((steps as f64 * pivot_fraction).round() as usize).min(steps);

    let stat_of = |path: &PathSample| -> Result<f64> {
        let g = build_graph(path, cells, GraphMode::ContinuousRule)?;
        Ok(match statistic {
            RerootStatistic::Diameter => {
                diameter_with_limit(&g, DiameterMethod::Exact, usize::MAX)? as f64
            }
            RerootStatistic::RootDegree => g.degree(0) as f64,
        })
    };

    let runs = crate::exec::map_indexed(replicates, |i| -> Result<(f64, f64, f64)> {
        let base_seed = SeedSpec::new(seed.master_seed, seed.replicate_index + i as u64);
        let plain = sample_path(params, PathKind::Excursion, steps, dt, base_seed)?;
        let plain_stat = stat_of(&plain)?;

        let other = base_seed.substream(1);
        let fresh = sample_path(params, PathKind::Excursion, steps, dt, other)?;
        let rerooted_stat = stat_of(&reroot(&fresh, pivot)?)?;

        // negative control: a bridge passed through the same re-rooting
        let ctrl_seed = base_seed.substream(2);
        let bridge = sample_path(params, PathKind::Bridge, steps, dt, ctrl_seed)?;
        let fake = PathSample {
            dt: bridge.dt,
            l: reroot_excursionize(&bridge.l, pivot),
            r: reroot_excursionize(&bridge.r, pivot),
            kind: PathKind::Excursion,
        };
        let control_stat = stat_of(&fake)?;
        Ok((plain_stat, rerooted_stat, control_stat))
    });

    let mut plain = Vec::with_capacity(replicates);
    let mut rerooted = Vec::with_capacity(replicates);
    let mut control = Vec::with_capacity(replicates);
    for r in runs {
        let (a, b, c) = r?;
        plain.push(a);
        rerooted.push(b);
        control.push(c);
    }
    let ks = ks_two_sample(&plain, &rerooted);
    let negative_control = ks_two_sample(&plain, &control);
    Ok(RerootLawReport {
        ks,
        negative_control,
        replicates,
        pivot_index: pivot,
    })
}

/// The re-rooting formula applied to an arbitrary zero-ended path (used
/// only as a corrupted comparator; the result is nonnegative but not
/// excursion-distributed unless the pivot is the argmin).
fn reroot_excursionize(w: &[f64], pivot: usize) -> Vec<f64> {
    reroot_coord(w, pivot)
}
