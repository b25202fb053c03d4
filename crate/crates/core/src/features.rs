//! Path functionals the exponent experiments hinge on: running-minimum
//! times, simultaneous running minima (pinch/cut cells), boundary cell
//! counts, quadrant-stay indicators, and the first long excursion of one
//! coordinate above its running infimum.
//!
//! Discrete running-minimum convention: index `t` is a running-minimum index
//! of `w` iff `w[t] <= min w[0..t]` (so `t = 0` always qualifies, exact ties
//! count as revisits on lattice paths, and for Gaussian samples the
//! condition degenerates to a strict new minimum).

use crate::error::{Error, Result};
use crate::graph::{boundary_sets, CellDecomposition};
use crate::paths::{Coord, PathSample};
use serde::{Deserialize, Serialize};

/// All running-minimum indices of a sample array.
pub fn running_min_indices(samples: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut min = f64::INFINITY;
    for (t, &v) in samples.iter().enumerate() {
        if v <= min {
            out.push(t);
            min = v;
        }
    }
    out
}

/// Number of cells containing a sample index `t > 0` at which both
/// coordinates attain a running minimum simultaneously. Samples are
/// attributed to cells by the half-open ranges `(c*K, (c+1)*K]`, so a hit on
/// a shared boundary sample counts for the earlier cell only.
pub fn simultaneous_running_min_cells(path: &PathSample, cells: CellDecomposition) -> usize {
    let k = cells.cell_size;
    let m = path.steps();
    debug_assert_eq!(m, cells.total_steps());
    let mut count = 0usize;
    let mut cell_hit = false;
    let (mut min_l, mut min_r) = (path.l[0], path.r[0]);
    for t in 1..=m {
        let hit = path.l[t] <= min_l && path.r[t] <= min_r;
        min_l = min_l.min(path.l[t]);
        min_r = min_r.min(path.r[t]);
        if hit {
            cell_hit = true;
        }
        if t % k == 0 {
            if cell_hit {
                count += 1;
            }
            cell_hit = false;
        }
    }
    count
}

/// `#` of cells on the boundary of the whole decomposition: the union of the
/// four running-minimum boundary sets of `[0, N-1]`.
pub fn boundary_cell_count(path: &PathSample, cells: CellDecomposition) -> Result<usize> {
    let sets = boundary_sets(path, cells, 0, cells.cell_count - 1)?;
    Ok(sets.union().len())
}

/// True iff both coordinates stay above `-delta` over `[0, horizon]`.
pub fn quadrant_stay_indicator(
    path: &PathSample,
    delta_l: f64,
    delta_r: f64,
    horizon: usize,
) -> Result<bool> {
    if horizon > path.steps() {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} exceeds path length {}",
            path.steps()
        )));
    }
    let min_l = path.l[..=horizon].iter().cloned().fold(f64::INFINITY, f64::min);
    let min_r = path.r[..=horizon].iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(min_l >= -delta_l && min_r >= -delta_r)
}

/// First sample index per horizon at which the stay condition breaks, or
/// `None` if it holds to the end. Convenience for sweeping horizons in one
/// pass.
pub fn first_exit_index(path: &PathSample, delta_l: f64, delta_r: f64) -> Option<usize> {
    for t in 0..=path.steps() {
        if path.l[t] < -delta_l || path.r[t] < -delta_r {
            return Some(t);
        }
    }
    None
}

/// Window `[start, end]` between two running-minimum indices at distance at
/// least the requested length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcursionWindow {
    pub start: usize,
    pub end: usize,
}

/// The first long window over the running-minimum set of one coordinate:
/// `end` is the earliest running-minimum index with some running-minimum
/// index at least `min_length` before it, and `start` is the largest such
/// earlier index. On a generic path whose minima keep strictly decreasing,
/// the window brackets the first excursion of the coordinate above its
/// running infimum with duration >= `min_length`.
pub fn first_long_excursion(
    path: &PathSample,
    coord: Coord,
    min_length: usize,
) -> Result<ExcursionWindow> {
    if min_length == 0 {
        return Err(Error::InvalidArgument("min_length must be >= 1".into()));
    }
    let samples = path.coord(coord);
    let mins = running_min_indices(samples);
    for (pos, &end) in mins.iter().enumerate() {
        if end < min_length {
            continue;
        }
        let cutoff = end - min_length;
        // largest earlier running-minimum index <= end - min_length
        let idx = mins[..pos].partition_point(|&t| t <= cutoff);
        if idx > 0 {
            let start = mins[idx - 1];
            return Ok(ExcursionWindow { start, end });
        }
    }
    Err(Error::NotFound(format!(
        "no running-minimum revisit at distance >= {min_length}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CellDecomposition;
    use crate::params::GammaParams;
    use crate::paths::{sample_path, PathKind};
    use crate::rng::SeedSpec;

    fn raw(l: Vec<f64>, r: Vec<f64>) -> PathSample {
        PathSample { dt: 1.0, l, r, kind: PathKind::Unconditioned }
    }

    #[test]
    fn running_min_sets_of_monotone_paths() {
        let dec: Vec<f64> = (0..=6).map(|k| -(k as f64)).collect();
        let inc: Vec<f64> = (0..=6).map(|k| k as f64).collect();
        assert_eq!(running_min_indices(&dec), vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(running_min_indices(&inc), vec![0]);
    }

    #[test]
    fn simultaneous_cells_monotone_cases() {
        let m = 12;
        let dec: Vec<f64> = (0..=m).map(|k| -(k as f64)).collect();
        let inc: Vec<f64> = (0..=m).map(|k| k as f64).collect();
        let cells = CellDecomposition::new(3, 4).unwrap();
        // both increasing: only the origin qualifies, which is excluded
        assert_eq!(simultaneous_running_min_cells(&raw(inc.clone(), inc.clone()), cells), 0);
        // both decreasing: every cell counted
        assert_eq!(simultaneous_running_min_cells(&raw(dec.clone(), dec.clone()), cells), 4);
        // mixed: increasing L kills every simultaneous minimum
        assert_eq!(simultaneous_running_min_cells(&raw(inc, dec), cells), 0);
    }

    #[test]
    fn simultaneous_count_bounded_by_each_coordinate() {
        let p = GammaParams::new(3f64.sqrt()).unwrap();
        for rep in 0..10u64 {
            let path =
                sample_path(&p, PathKind::Unconditioned, 512, 1e-3, SeedSpec::new(71, rep)).unwrap();
            let cells = CellDecomposition::new(4, 128).unwrap();
            let both = simultaneous_running_min_cells(&path, cells);
            let count_coord = |samples: &[f64]| {
                let mins = running_min_indices(samples);
                let mut cells_hit: Vec<usize> =
                    mins.iter().filter(|&&t| t > 0).map(|&t| (t - 1) / 4).collect();
                cells_hit.dedup();
                cells_hit.len()
            };
            assert!(both <= count_coord(&path.l));
            assert!(both <= count_coord(&path.r));
        }
    }

    #[test]
    fn boundary_count_extremes() {
        let m = 12;
        let dec: Vec<f64> = (0..=m).map(|k| -(k as f64)).collect();
        let inc: Vec<f64> = (0..=m).map(|k| k as f64).collect();
        let cells = CellDecomposition::new(2, 6).unwrap();
        // strictly monotone both coordinates: all cells are boundary
        assert_eq!(boundary_cell_count(&raw(dec.clone(), inc.clone()), cells).unwrap(), 6);
        // single cell
        let one = CellDecomposition::new(12, 1).unwrap();
        assert_eq!(boundary_cell_count(&raw(dec, inc), one).unwrap(), 1);
    }

    #[test]
    fn boundary_count_range_on_random_paths() {
        let p = GammaParams::new(2f64.sqrt()).unwrap();
        for rep in 0..20u64 {
            let path =
                sample_path(&p, PathKind::Unconditioned, 256, 1e-2, SeedSpec::new(5, rep)).unwrap();
            let cells = CellDecomposition::new(2, 128).unwrap();
            let c = boundary_cell_count(&path, cells).unwrap();
            assert!((2..=128).contains(&c), "count {c}");
        }
    }

    #[test]
    fn quadrant_stay_basics() {
        let p = GammaParams::new(2f64.sqrt()).unwrap();
        let path = sample_path(&p, PathKind::Unconditioned, 64, 1e-2, SeedSpec::new(9, 0)).unwrap();
        assert!(quadrant_stay_indicator(&path, f64::INFINITY, f64::INFINITY, 64).unwrap());
        // horizon 0: only the origin, which sits at (0, 0) >= (-d, -d)
        assert!(quadrant_stay_indicator(&path, 0.5, 0.5, 0).unwrap());
        assert!(quadrant_stay_indicator(&path, 0.5, 0.5, 65).is_err());
        // agreement with the exit-index sweep
        for rep in 0..20u64 {
            let path =
                sample_path(&p, PathKind::Unconditioned, 128, 1e-1, SeedSpec::new(10, rep)).unwrap();
            let exit = first_exit_index(&path, 0.3, 0.4);
            for h in [0usize, 5, 64, 128] {
                let stay = quadrant_stay_indicator(&path, 0.3, 0.4, h).unwrap();
                assert_eq!(stay, exit.map_or(true, |e| e > h));
            }
        }
    }

    #[test]
    fn first_long_excursion_on_decreasing_path() {
        // every index is a running minimum; the convention returns the
        // earliest end with the farthest admissible start
        let dec: Vec<f64> = (0..=10).map(|k| -(k as f64)).collect();
        let path = raw(dec.clone(), dec);
        let w = first_long_excursion(&path, Coord::L, 3).unwrap();
        assert_eq!((w.start, w.end), (0, 3));
    }

    #[test]
    fn first_long_excursion_on_alternating_walk() {
        // E,W,E,W,... x-coordinate [0,1,0,1,...]: value 0 revisited at
        // distance 2
        let l: Vec<f64> = (0..=8).map(|k| (k % 2) as f64).collect();
        let r = vec![0.0; 9];
        let path = raw(l, r);
        let w = first_long_excursion(&path, Coord::L, 2).unwrap();
        assert_eq!((w.start, w.end), (0, 2));
    }

    #[test]
    fn first_long_excursion_not_found_on_increasing_path() {
        let inc: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let path = raw(inc.clone(), inc);
        assert!(matches!(
            first_long_excursion(&path, Coord::L, 2),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn window_endpoints_are_running_minima() {
        let p = GammaParams::new(2f64.sqrt()).unwrap();
        for rep in 0..20u64 {
            let path =
                sample_path(&p, PathKind::Unconditioned, 2048, 1e-3, SeedSpec::new(44, rep))
                    .unwrap();
            for min_length in [8usize, 64, 256] {
                match first_long_excursion(&path, Coord::R, min_length) {
                    Ok(w) => {
                        assert!(w.start < w.end);
                        assert!(w.end - w.start >= min_length);
                        let mins = running_min_indices(&path.r);
                        assert!(mins.contains(&w.start));
                        assert!(mins.contains(&w.end));
                    }
                    Err(Error::NotFound(_)) => {}
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
        }
    }
}
