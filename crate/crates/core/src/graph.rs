//! Structure graphs over cell decompositions of a two-coordinate path.
//!
//! A path of `M = K * N` steps is grouped into `N` cells of `K` steps; cell
//! `c` (0-based) covers the inclusive sample range `[c*K, (c+1)*K]`, so
//! neighboring cells share their boundary sample. Cells `c1 < c2` are
//! adjacent iff `c2 = c1 + 1` or, for some coordinate, the two cell minima
//! both clear the minimum over the samples strictly between the cells:
//!
//! * `ContinuousRule`: `max(min_c1, min_c2) <= min(samples in the middle)`,
//!   with non-strict comparison (ties have probability zero for Gaussian
//!   samples).
//! * `LatticeRule` (unit cells of a quadrant lattice walk only):
//!   `max(d[c1], d[c2+1]) < min(d[c1+1..=c2])` with the strict
//!   inequality taken verbatim, per coordinate.
//!
//! Builders run as linear sweeps (monotone stack for the continuous rule,
//! parenthesis matching for the lattice rule); [`crate::oracle`] holds the
//! quadratic reference evaluation they are tested against.

use crate::error::{Error, Result};
use crate::paths::{PathKind, PathSample};
use serde::{Deserialize, Serialize};

/// Grouping of `cell_count * cell_size` path steps into cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDecomposition {
    pub cell_size: usize,
    pub cell_count: usize,
}

impl CellDecomposition {
    pub fn new(cell_size: usize, cell_count: usize) -> Result<Self> {
        if cell_size == 0 || cell_count == 0 {
            return Err(Error::InvalidSize(
                "cell size and cell count must be positive".into(),
            ));
        }
        Ok(CellDecomposition { cell_size, cell_count })
    }

    /// Decomposition of `path` into cells of `cell_size` steps.
    pub fn for_path(path: &PathSample, cell_size: usize) -> Result<Self> {
        if cell_size == 0 {
            return Err(Error::InvalidSize("cell size must be positive".into()));
        }
        let m = path.steps();
        if m % cell_size != 0 {
            return Err(Error::InvalidSize(format!(
                "path of {m} steps does not split into cells of {cell_size}"
            )));
        }
        Ok(CellDecomposition {
            cell_size,
            cell_count: m / cell_size,
        })
    }

    pub fn total_steps(&self) -> usize {
        self.cell_size * self.cell_count
    }

    /// Duration of one cell; this plays the role of the cell mass.
    pub fn time_per_cell(&self, dt: f64) -> f64 {
        self.cell_size as f64 * dt
    }

    fn check_path(&self, path: &PathSample) -> Result<()> {
        if path.steps() != self.total_steps() {
            return Err(Error::InvalidSize(format!(
                "decomposition covers {} steps but path has {}",
                self.total_steps(),
                path.steps()
            )));
        }
        Ok(())
    }

    /// New decomposition with cells split by `factor` over the same path.
    pub fn refine(&self, factor: usize) -> Result<CellDecomposition> {
        if factor == 0 {
            return Err(Error::InvalidArgument("refinement factor must be positive".into()));
        }
        if self.cell_size % factor != 0 {
            return Err(Error::Indivisible {
                cell_size: self.cell_size,
                factor,
            });
        }
        Ok(CellDecomposition {
            cell_size: self.cell_size / factor,
            cell_count: self.cell_count * factor,
        })
    }
}

/// Refine a decomposition; free-function form of [`CellDecomposition::refine`].
pub fn refine_cells(cells: CellDecomposition, factor: usize) -> Result<CellDecomposition> {
    cells.refine(factor)
}

/// The four displacements of a path over a sample interval: per coordinate,
/// start minus interval minimum and end minus interval minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLengthVector {
    pub dl_lower: f64,
    pub dl_upper: f64,
    pub dr_lower: f64,
    pub dr_upper: f64,
}

impl BoundaryLengthVector {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("dl_lower", self.dl_lower),
            ("dl_upper", self.dl_upper),
            ("dr_lower", self.dr_lower),
            ("dr_upper", self.dr_upper),
        ] {
            if !(v >= 0.0) {
                return Err(Error::InvalidDelta(format!("{name} = {v} is negative")));
            }
        }
        Ok(())
    }

    /// Net increment of `L` over the interval.
    pub fn net_l(&self) -> f64 {
        self.dl_upper - self.dl_lower
    }

    pub fn net_r(&self) -> f64 {
        self.dr_upper - self.dr_lower
    }
}

/// Boundary-length vector of `path` over the inclusive sample interval `[a, b]`.
pub fn boundary_vector(path: &PathSample, a: usize, b: usize) -> Result<BoundaryLengthVector> {
    if a >= b || b > path.steps() {
        return Err(Error::InvalidInterval { a, b });
    }
    let min_l = path.l[a..=b].iter().cloned().fold(f64::INFINITY, f64::min);
    let min_r = path.r[a..=b].iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(BoundaryLengthVector {
        dl_lower: path.l[a] - min_l,
        dl_upper: path.l[b] - min_l,
        dr_lower: path.r[a] - min_r,
        dr_upper: path.r[b] - min_r,
    })
}

/// Per-cell boundary-length vectors for a whole decomposition.
pub fn cell_boundary_vectors(
    path: &PathSample,
    cells: CellDecomposition,
) -> Result<Vec<BoundaryLengthVector>> {
    cells.check_path(path)?;
    let k = cells.cell_size;
    (0..cells.cell_count)
        .map(|c| boundary_vector(path, c * k, (c + 1) * k))
        .collect()
}

/// Adjacency rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphMode {
    ContinuousRule,
    LatticeRule,
}

/// Edge provenance flags.
pub mod label {
    pub const CONSECUTIVE: u8 = 1;
    pub const L_MATCH: u8 = 2;
    pub const R_MATCH: u8 = 4;
}

/// Symmetric graph on cells, stored as compressed sorted adjacency with a
/// provenance bitmask per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureGraph {
    n: usize,
    offsets: Vec<u32>,
    neigh: Vec<u32>,
    labels: Vec<u8>,
}

impl StructureGraph {
    /// Build from an undirected edge list (`u < v`, 0-based); duplicate
    /// pairs have their labels merged.
    pub fn from_edges(n: usize, edges: &mut Vec<(u32, u32, u8)>) -> StructureGraph {
        edges.sort_unstable_by_key(|&(u, v, _)| (u, v));
        edges.dedup_by(|a, b| {
            if a.0 == b.0 && a.1 == b.1 {
                b.2 |= a.2;
                true
            } else {
                false
            }
        });
        let mut deg = vec![0u32; n + 1];
        for &(u, v, _) in edges.iter() {
            deg[u as usize + 1] += 1;
            deg[v as usize + 1] += 1;
        }
        for i in 0..n {
            deg[i + 1] += deg[i];
        }
        let offsets = deg;
        let total = offsets[n] as usize;
        let mut neigh = vec![0u32; total];
        let mut labels = vec![0u8; total];
        let mut cursor: Vec<u32> = offsets[..n].to_vec();
        for &(u, v, lab) in edges.iter() {
            let cu = cursor[u as usize] as usize;
            neigh[cu] = v;
            labels[cu] = lab;
            cursor[u as usize] += 1;
            let cv = cursor[v as usize] as usize;
            neigh[cv] = u;
            labels[cv] = lab;
            cursor[v as usize] += 1;
        }
        // neighbor lists come out sorted for v-entries of edges sorted by
        // (u, v) only within the u side; sort each list with its labels
        let mut g = StructureGraph { n, offsets, neigh, labels };
        g.sort_lists();
        g
    }

    fn sort_lists(&mut self) {
        for v in 0..self.n {
            let (s, e) = (self.offsets[v] as usize, self.offsets[v + 1] as usize);
            let mut pairs: Vec<(u32, u8)> = self.neigh[s..e]
                .iter()
                .cloned()
                .zip(self.labels[s..e].iter().cloned())
                .collect();
            pairs.sort_unstable_by_key(|&(w, _)| w);
            for (i, (w, lab)) in pairs.into_iter().enumerate() {
                self.neigh[s + i] = w;
                self.labels[s + i] = lab;
            }
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neigh[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn neighbor_labels(&self, v: usize) -> &[u8] {
        &self.labels[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    pub fn edge_count(&self) -> usize {
        self.neigh.len() / 2
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn edge_label(&self, u: usize, v: usize) -> Option<u8> {
        self.neighbors(u)
            .binary_search(&(v as u32))
            .ok()
            .map(|i| self.neighbor_labels(u)[i])
    }

    /// Iterate undirected edges as `(u, v, label)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, u8)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .zip(self.neighbor_labels(u))
                .filter(move |&(&v, _)| (u as u32) < v)
                .map(move |(&v, &lab)| (u as u32, v, lab))
        })
    }

    /// Edge-list dump, one `i j label` line per edge, vertices 1-based,
    /// label rendered as a subset of `clr`.
    pub fn dump_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v, lab) in self.edges() {
            out.push_str(&format!("{} {} {}\n", u + 1, v + 1, render_label(lab)));
        }
        out
    }
}

pub fn render_label(lab: u8) -> String {
    let mut s = String::new();
    if lab & label::CONSECUTIVE != 0 {
        s.push('c');
    }
    if lab & label::L_MATCH != 0 {
        s.push('l');
    }
    if lab & label::R_MATCH != 0 {
        s.push('r');
    }
    s
}

/// Per-cell minima of one coordinate.
pub fn cell_minima(samples: &[f64], cells: CellDecomposition) -> Vec<f64> {
    let k = cells.cell_size;
    (0..cells.cell_count)
        .map(|c| {
            samples[c * k..=(c + 1) * k]
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Build the structure graph of `path` under `cells` with the given rule.
///
/// The lattice rule requires unit cells of a quadrant lattice walk. Output
/// is a linear sweep; it must (and is tested to) agree with the quadratic
/// reference predicate in [`crate::oracle`].
pub fn build_graph(
    path: &PathSample,
    cells: CellDecomposition,
    mode: GraphMode,
) -> Result<StructureGraph> {
    cells.check_path(path)?;
    match mode {
        GraphMode::ContinuousRule => {
            let min_l = cell_minima(&path.l, cells);
            let min_r = cell_minima(&path.r, cells);
            Ok(build_continuous_from_minima(&min_l, &min_r))
        }
        GraphMode::LatticeRule => {
            if path.kind != PathKind::LatticeQuadrantBridge {
                return Err(Error::ModeMismatch(
                    "lattice rule needs a LatticeQuadrantBridge path".into(),
                ));
            }
            if cells.cell_size != 1 {
                return Err(Error::ModeMismatch("lattice rule needs unit cells".into()));
            }
            let n = cells.cell_count;
            let mut edges: Vec<(u32, u32, u8)> = Vec::with_capacity(4 * n);
            for c in 0..n.saturating_sub(1) {
                edges.push((c as u32, c as u32 + 1, label::CONSECUTIVE));
            }
            lattice_matching_pairs(&path.l, label::L_MATCH, &mut edges);
            lattice_matching_pairs(&path.r, label::R_MATCH, &mut edges);
            Ok(StructureGraph::from_edges(n, &mut edges))
        }
    }
}

/// Continuous-rule graph from per-cell minima of the two coordinates.
pub(crate) fn build_continuous_from_minima(min_l: &[f64], min_r: &[f64]) -> StructureGraph {
    let n = min_l.len();
    let mut edges: Vec<(u32, u32, u8)> = Vec::with_capacity(4 * n);
    for c in 0..n.saturating_sub(1) {
        edges.push((c as u32, c as u32 + 1, label::CONSECUTIVE));
    }
    visibility_pairs(min_l, label::L_MATCH, &mut edges);
    visibility_pairs(min_r, label::R_MATCH, &mut edges);
    StructureGraph::from_edges(n, &mut edges)
}

/// All pairs `i < j` with `j >= i + 2` and
/// `max(v[i], v[j]) <= min(v[i+1..j])`, via one monotone-stack sweep.
///
/// The stack holds the indices whose value is a non-strict minimum of the
/// suffix seen so far (values non-decreasing toward the top); for each new
/// `j` the qualifying partners are a top segment of the stack, read off by
/// walking down while the element *above* the candidate still dominates
/// `v[j]`.
fn visibility_pairs(v: &[f64], lab: u8, edges: &mut Vec<(u32, u32, u8)>) {
    let n = v.len();
    if n < 3 {
        return;
    }
    let mut stack: Vec<u32> = Vec::with_capacity(n);
    stack.push(0);
    for j in 1..n {
        let vj = v[j];
        // emit pairs against the stack relative to the interval ending at j-1:
        // skip the top (that is j-1, a consecutive pair), then walk down while
        // the interior minimum (the value of the element above) clears vj.
        if stack.len() >= 2 {
            let mut above = v[*stack.last().unwrap() as usize];
            for idx in (0..stack.len() - 1).rev() {
                if vj <= above {
                    edges.push((stack[idx], j as u32, lab));
                    above = v[stack[idx] as usize];
                } else {
                    break;
                }
            }
        }
        while let Some(&top) = stack.last() {
            if v[top as usize] > vj {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(j as u32);
    }
}

/// Matched up/down step pairs of one lattice coordinate: step `c1` raises the
/// coordinate from level `h` and step `c2` is the first later return to `h`.
/// These are exactly the pairs satisfying the strict lattice adjacency rule.
fn lattice_matching_pairs(samples: &[f64], lab: u8, edges: &mut Vec<(u32, u32, u8)>) {
    let steps = samples.len() - 1;
    let mut stack: Vec<u32> = Vec::new();
    for c in 0..steps {
        if samples[c + 1] > samples[c] {
            stack.push(c as u32);
        } else if samples[c + 1] < samples[c] {
            if let Some(open) = stack.pop() {
                edges.push((open, c as u32, lab));
            }
        }
    }
}

/// Rebuild the continuous-rule graph from per-cell boundary-length vectors
/// alone: cumulative net increments recover each cell's left-endpoint value,
/// subtracting the initial displacement recovers the cell minimum, and the
/// usual sweep runs on those minima. Agrees with [`build_graph`] on any path
/// realizing the vectors.
pub fn graph_from_boundary_vectors(deltas: &[BoundaryLengthVector]) -> Result<StructureGraph> {
    if deltas.is_empty() {
        return Err(Error::InvalidArgument("empty boundary-vector list".into()));
    }
    for d in deltas {
        d.validate()?;
    }
    let n = deltas.len();
    let mut min_l = Vec::with_capacity(n);
    let mut min_r = Vec::with_capacity(n);
    let (mut bl, mut br) = (0.0f64, 0.0f64);
    for d in deltas {
        min_l.push(bl - d.dl_lower);
        min_r.push(br - d.dr_lower);
        bl += d.net_l();
        br += d.net_r();
    }
    Ok(build_continuous_from_minima(&min_l, &min_r))
}

/// The four boundary vertex sets of the cell range `[lo, hi]` (0-based,
/// inclusive), characterized by running minima: a cell is on the lower-left
/// boundary iff its minimum of `L` ties or beats the forward running minimum
/// at the cell's left endpoint (relative to the range's left endpoint), and
/// symmetrically for the other three sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySets {
    pub lower_left: Vec<usize>,
    pub lower_right: Vec<usize>,
    pub upper_left: Vec<usize>,
    pub upper_right: Vec<usize>,
}

impl BoundarySets {
    /// Union of the four sets, sorted and deduplicated.
    pub fn union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self
            .lower_left
            .iter()
            .chain(&self.lower_right)
            .chain(&self.upper_left)
            .chain(&self.upper_right)
            .cloned()
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }
}

pub fn boundary_sets(
    path: &PathSample,
    cells: CellDecomposition,
    lo: usize,
    hi: usize,
) -> Result<BoundarySets> {
    cells.check_path(path)?;
    if lo > hi || hi >= cells.cell_count {
        return Err(Error::InvalidInterval { a: lo, b: hi });
    }
    let k = cells.cell_size;

    let side = |samples: &[f64]| -> (Vec<usize>, Vec<usize>) {
        // forward running minima recorded at each cell's left endpoint
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut fwd = vec![0.0f64; hi - lo + 2];
        let mut run = f64::INFINITY;
        for c in lo..=hi {
            run = run.min(samples[c * k]);
            fwd[c - lo] = run;
            for s in c * k + 1..(c + 1) * k {
                run = run.min(samples[s]);
            }
        }
        let mut bwd = vec![0.0f64; hi - lo + 2];
        let mut run = f64::INFINITY;
        for c in (lo..=hi).rev() {
            run = run.min(samples[(c + 1) * k]);
            bwd[c - lo] = run;
            for s in (c * k + 1..(c + 1) * k).rev() {
                run = run.min(samples[s]);
            }
        }
        for c in lo..=hi {
            let cmin = samples[c * k..=(c + 1) * k]
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            if cmin <= fwd[c - lo] {
                lower.push(c);
            }
            if cmin <= bwd[c - lo] {
                upper.push(c);
            }
        }
        (lower, upper)
    };

    let (lower_left, upper_left) = side(&path.l);
    let (lower_right, upper_right) = side(&path.r);
    Ok(BoundarySets {
        lower_left,
        lower_right,
        upper_left,
        upper_right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::params::GammaParams;
    use crate::paths::sample_path;
    use crate::rng::SeedSpec;

    fn raw_path(l: Vec<f64>, r: Vec<f64>) -> PathSample {
        PathSample { dt: 1.0, l, r, kind: PathKind::Unconditioned }
    }

    #[test]
    fn boundary_vector_examples() {
        // strictly decreasing L: min at the right endpoint
        let p = raw_path(vec![0.0, -1.0, -2.0, -3.0], vec![0.0, 1.0, 2.0, 3.0]);
        let d = boundary_vector(&p, 0, 3).unwrap();
        assert_eq!((d.dl_lower, d.dl_upper), (3.0, 0.0));
        // strictly increasing R: min at the left endpoint
        assert_eq!((d.dr_lower, d.dr_upper), (0.0, 3.0));
        // the worked example [0, -2, -1]
        let p = raw_path(vec![0.0, -2.0, -1.0], vec![0.0, 0.5, 0.25]);
        let d = boundary_vector(&p, 0, 2).unwrap();
        assert_eq!((d.dl_lower, d.dl_upper), (2.0, 1.0));
        assert!(boundary_vector(&p, 2, 2).is_err());
        assert!(boundary_vector(&p, 2, 1).is_err());
    }

    #[test]
    fn monotone_paths_give_path_graphs() {
        let l: Vec<f64> = (0..=3).map(|k| -(k as f64)).collect();
        let r: Vec<f64> = (0..=3).map(|k| k as f64).collect();
        let p = raw_path(l, r);
        let cells = CellDecomposition::new(1, 3).unwrap();
        let g = build_graph(&p, cells, GraphMode::ContinuousRule).unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(
            edges,
            vec![(0, 1, label::CONSECUTIVE), (1, 2, label::CONSECUTIVE)]
        );
    }

    #[test]
    fn worked_visibility_example() {
        // L = [0, -2, -1, -3], R strictly increasing, three unit cells:
        // cells 0 and 2 see each other across the middle value -2
        let p = raw_path(
            vec![0.0, -2.0, -1.0, -3.0],
            vec![0.0, 1.0, 2.0, 3.0],
        );
        let cells = CellDecomposition::new(1, 3).unwrap();
        let g = build_graph(&p, cells, GraphMode::ContinuousRule).unwrap();
        let mut pairs: Vec<(u32, u32)> = g.edges().map(|(u, v, _)| (u, v)).collect();
        pairs.sort_unstable();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.edge_label(0, 2), Some(label::L_MATCH));
    }

    #[test]
    fn sweep_matches_reference_on_random_paths() {
        let params = GammaParams::new(2f64.sqrt()).unwrap();
        for (seed, k) in [(0u64, 1usize), (1, 4), (2, 16), (3, 2), (4, 8)] {
            for rep in 0..20u64 {
                let n = 96usize;
                let path = sample_path(
                    &params,
                    PathKind::Unconditioned,
                    n * k,
                    1e-3,
                    SeedSpec::new(7000 + seed, rep),
                )
                .unwrap();
                let cells = CellDecomposition::new(k, n).unwrap();
                let fast = build_graph(&path, cells, GraphMode::ContinuousRule).unwrap();
                let slow = oracle::build_graph_reference(&path, cells, GraphMode::ContinuousRule)
                    .unwrap();
                assert_eq!(fast, slow, "seed {seed} rep {rep} k {k}");
                assert!(fast.edge_count() <= 4 * n);
            }
        }
    }

    #[test]
    fn lattice_sweep_matches_reference_on_all_small_walks() {
        for n in 1..=4 {
            for walk in crate::mullin::enumerate_quadrant_walks(n).unwrap() {
                let path = crate::mullin::walk_to_path(&walk);
                let cells = CellDecomposition::new(1, 2 * n).unwrap();
                let fast = build_graph(&path, cells, GraphMode::LatticeRule).unwrap();
                let slow =
                    oracle::build_graph_reference(&path, cells, GraphMode::LatticeRule).unwrap();
                assert_eq!(fast, slow, "walk {}", crate::mullin::walk_to_string(&walk));
                assert!(fast.edge_count() <= 4 * 2 * n);
            }
        }
    }

    #[test]
    fn lattice_mode_rejects_mismatches() {
        let params = GammaParams::new(2f64.sqrt()).unwrap();
        let path = sample_path(&params, PathKind::Unconditioned, 8, 0.1, SeedSpec::new(0, 0))
            .unwrap();
        let cells = CellDecomposition::new(1, 8).unwrap();
        assert!(matches!(
            build_graph(&path, cells, GraphMode::LatticeRule),
            Err(Error::ModeMismatch(_))
        ));
        let walk = crate::mullin::walk_from_string("ENWSEW").unwrap();
        let wpath = crate::mullin::walk_to_path(&walk);
        let cells2 = CellDecomposition::new(2, 3).unwrap();
        assert!(matches!(
            build_graph(&wpath, cells2, GraphMode::LatticeRule),
            Err(Error::ModeMismatch(_))
        ));
    }

    #[test]
    fn boundary_vector_reconstruction_matches_build() {
        let params = GammaParams::new(3f64.sqrt()).unwrap();
        for rep in 0..30u64 {
            let (n, k) = (64usize, 4usize);
            let path = sample_path(
                &params,
                PathKind::Unconditioned,
                n * k,
                1e-3,
                SeedSpec::new(512, rep),
            )
            .unwrap();
            let cells = CellDecomposition::new(k, n).unwrap();
            let deltas = cell_boundary_vectors(&path, cells).unwrap();
            let rebuilt = graph_from_boundary_vectors(&deltas).unwrap();
            let direct = build_graph(&path, cells, GraphMode::ContinuousRule).unwrap();
            assert_eq!(rebuilt, direct, "rep {rep}");
        }
    }

    #[test]
    fn reconstruction_handles_degenerate_inputs() {
        assert!(graph_from_boundary_vectors(&[]).is_err());
        // single cell: one vertex, no edges
        let one = BoundaryLengthVector {
            dl_lower: 0.5,
            dl_upper: 0.25,
            dr_lower: 0.0,
            dr_upper: 1.0,
        };
        let g = graph_from_boundary_vectors(&[one]).unwrap();
        assert_eq!(g.n_vertices(), 1);
        assert_eq!(g.edge_count(), 0);
        let bad = BoundaryLengthVector {
            dl_lower: -0.1,
            dl_upper: 0.0,
            dr_lower: 0.0,
            dr_upper: 0.0,
        };
        assert!(matches!(
            graph_from_boundary_vectors(&[bad]),
            Err(Error::InvalidDelta(_))
        ));
    }

    #[test]
    fn monotone_reconstruction_gives_path_graph() {
        // deltas of a strictly decreasing L: dl_lower = K per cell, upper 0
        let deltas: Vec<BoundaryLengthVector> = (0..5)
            .map(|_| BoundaryLengthVector {
                dl_lower: 1.0,
                dl_upper: 0.0,
                dr_lower: 0.0,
                dr_upper: 1.0,
            })
            .collect();
        let g = graph_from_boundary_vectors(&deltas).unwrap();
        assert_eq!(g.edge_count(), 4);
        for (u, v, _) in g.edges() {
            assert_eq!(v, u + 1);
        }
    }

    #[test]
    fn boundary_vector_additivity_recursion() {
        // the interval displacement is recoverable from per-cell vectors via
        // the running-minimum recursion
        let params = GammaParams::new(2f64.sqrt()).unwrap();
        for rep in 0..10u64 {
            let (n, k) = (32usize, 8usize);
            let path = sample_path(
                &params,
                PathKind::Unconditioned,
                n * k,
                1e-2,
                SeedSpec::new(606, rep),
            )
            .unwrap();
            let cells = CellDecomposition::new(k, n).unwrap();
            let deltas = cell_boundary_vectors(&path, cells).unwrap();
            // reconstruct dl_lower over cells [0, c] for every c:
            // -min over cells y <= c of (left-boundary value of y minus dl_lower(y))
            let mut left_val = 0.0f64;
            let mut run_min = f64::INFINITY;
            for c in 0..n {
                run_min = run_min.min(left_val - deltas[c].dl_lower);
                left_val += deltas[c].net_l();
                let direct = boundary_vector(&path, 0, (c + 1) * k).unwrap();
                let recon = 0.0 - run_min;
                assert!(
                    (direct.dl_lower - recon).abs() <= 1e-9 * (1.0 + recon.abs()),
                    "cell {c}: {} vs {recon}",
                    direct.dl_lower
                );
            }
        }
    }

    #[test]
    fn refine_cells_composes() {
        let cells = CellDecomposition::new(8, 10).unwrap();
        assert_eq!(refine_cells(cells, 1).unwrap(), cells);
        let unit = refine_cells(cells, 8).unwrap();
        assert_eq!(unit.cell_size, 1);
        assert_eq!(unit.cell_count, 80);
        let twice = refine_cells(refine_cells(cells, 2).unwrap(), 2).unwrap();
        assert_eq!(twice, refine_cells(cells, 4).unwrap());
        assert!(matches!(
            refine_cells(cells, 3),
            Err(Error::Indivisible { .. })
        ));
    }

    #[test]
    fn boundary_sets_monotone_cases() {
        // strictly decreasing L on the whole interval: every cell is a
        // forward running minimum; only the last is a backward one
        let m = 12;
        let l: Vec<f64> = (0..=m).map(|k| -(k as f64)).collect();
        let r: Vec<f64> = (0..=m).map(|k| k as f64).collect();
        let p = raw_path(l, r);
        let cells = CellDecomposition::new(2, 6).unwrap();
        let sets = boundary_sets(&p, cells, 0, 5).unwrap();
        assert_eq!(sets.lower_left, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(sets.upper_left, vec![5]);
        // increasing R mirrors it
        assert_eq!(sets.lower_right, vec![0]);
        assert_eq!(sets.upper_right, vec![0, 1, 2, 3, 4, 5]);
        // the leftmost cell is always in both lower sets
        assert!(sets.lower_left.contains(&0) && sets.lower_right.contains(&0));
        assert!(boundary_sets(&p, cells, 3, 2).is_err());
        assert!(boundary_sets(&p, cells, 0, 6).is_err());
    }

    #[test]
    fn boundary_sets_match_adjacency_oracle_on_embedding() {
        // Embed the query range in a path whose prefix and suffix dive far
        // below anything inside, so the adjacency-based definition has
        // partners available on both sides for every interior level.
        let params = GammaParams::new(2f64.sqrt()).unwrap();
        for rep in 0..20u64 {
            let (n, k) = (40usize, 4usize);
            let inner = sample_path(
                &params,
                PathKind::Unconditioned,
                n * k,
                1e-3,
                SeedSpec::new(808, rep),
            )
            .unwrap();
            // 4 dive cells on each side
            let dive = 4usize;
            let mut l = Vec::new();
            let mut r = Vec::new();
            let deep = -1e6;
            let ramp = 2 * dive * k + 1;
            for i in 0..ramp {
                // v-shape: 0 -> deep -> 0
                let t = i as f64 / (ramp - 1) as f64;
                let v = deep * (1.0 - (2.0 * t - 1.0).abs());
                l.push(v);
                r.push(v);
            }
            // splice the inner path, shifted to start at the ramp end (0.0)
            for j in 1..inner.l.len() {
                l.push(inner.l[j]);
                r.push(inner.r[j]);
            }
            let (l_end, r_end) = (*l.last().unwrap(), *r.last().unwrap());
            for i in 1..ramp {
                let t = i as f64 / (ramp - 1) as f64;
                let v = deep * (1.0 - (2.0 * t - 1.0).abs());
                l.push(l_end + v);
                r.push(r_end + v);
            }
            let emb = raw_path(l, r);
            let total_cells = emb.steps() / k;
            let cells = CellDecomposition::new(k, total_cells).unwrap();
            let lo = 2 * dive;
            let hi = lo + n - 1;
            let fast = boundary_sets(&emb, cells, lo, hi).unwrap();
            let (ll, lr, ul, ur) =
                oracle::boundary_sets_by_adjacency(&emb, cells, lo, hi).unwrap();
            assert_eq!(fast.lower_left, ll, "rep {rep}");
            assert_eq!(fast.lower_right, lr, "rep {rep}");
            assert_eq!(fast.upper_left, ul, "rep {rep}");
            assert_eq!(fast.upper_right, ur, "rep {rep}");
        }
    }
}
