//! Shortest-path machinery on structure graphs: BFS distance fields, exact
//! and double-sweep diameters, ball volumes, and the deterministic
//! refinement and re-subdivision checks.

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{build_graph, CellDecomposition, GraphMode, StructureGraph};
use crate::paths::{PathKind, PathSample};
use serde::{Deserialize, Serialize};

/// Distance sentinel for unreachable vertices (cannot occur on a connected
/// structure graph, but kept explicit).
pub const UNREACHABLE: u32 = u32::MAX;

/// BFS distances from a source set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceField {
    pub dist: Vec<u32>,
}

impl DistanceField {
    pub fn max_finite(&self) -> u32 {
        self.dist.iter().cloned().filter(|&d| d != UNREACHABLE).max().unwrap_or(0)
    }
}

/// Breadth-first distances from `sources` (multi-source allowed).
pub fn sssp(graph: &StructureGraph, sources: &[usize]) -> Result<DistanceField> {
    if sources.is_empty() {
        return Err(Error::InvalidArgument("empty source set".into()));
    }
    let n = graph.n_vertices();
    let mut dist = vec![UNREACHABLE; n];
    let mut queue = std::collections::VecDeque::with_capacity(n);
    for &s in sources {
        if s >= n {
            return Err(Error::InvalidArgument(format!("source {s} out of range ({n} vertices)")));
        }
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s as u32);
        }
    }
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize];
        for &w in graph.neighbors(v as usize) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = dv + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(DistanceField { dist })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiameterMethod {
    /// Max eccentricity over every source; capped at a vertex-count limit.
    Exact,
    /// Iterated farthest-point restarts; a certified lower bound.
    DoubleSweep(u32),
}

/// Default vertex cap for the exact method.
pub const DEFAULT_EXACT_LIMIT: usize = 8192;

pub fn diameter(graph: &StructureGraph, method: DiameterMethod) -> Result<u32> {
    diameter_with_limit(graph, method, DEFAULT_EXACT_LIMIT)
}

pub fn diameter_with_limit(
    graph: &StructureGraph,
    method: DiameterMethod,
    exact_limit: usize,
) -> Result<u32> {
    let n = graph.n_vertices();
    if n == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    match method {
        DiameterMethod::Exact => {
            if n > exact_limit {
                return Err(Error::SizeLimit(format!(
                    "exact diameter capped at {exact_limit} vertices, graph has {n}"
                )));
            }
            let eccs = exec::map_indexed(n, |v| {
                sssp(graph, &[v]).expect("valid source").max_finite()
            });
            Ok(eccs.into_iter().max().unwrap_or(0))
        }
        DiameterMethod::DoubleSweep(rounds) => {
            let mut best = 0u32;
            let mut v = 0usize;
            for _ in 0..rounds.max(1) {
                let field = sssp(graph, &[v])?;
                let mut far = v;
                let mut far_d = 0u32;
                for (w, &d) in field.dist.iter().enumerate() {
                    if d != UNREACHABLE && d > far_d {
                        far_d = d;
                        far = w;
                    }
                }
                best = best.max(far_d);
                if far == v {
                    break;
                }
                v = far;
            }
            Ok(best)
        }
    }
}

/// Number of vertices within graph distance `radius` of `center`.
pub fn ball_size(graph: &StructureGraph, center: usize, radius: u32) -> usize {
    bounded_ball_size(graph, center, radius)
}

/// BFS truncated at the radius, so the cost is the ball, not the graph.
fn bounded_ball_size(graph: &StructureGraph, center: usize, radius: u32) -> usize {
    let n = graph.n_vertices();
    let mut dist = vec![UNREACHABLE; n];
    let mut queue = std::collections::VecDeque::new();
    dist[center] = 0;
    queue.push_back(center as u32);
    let mut count = 1usize;
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize];
        if dv == radius {
            continue;
        }
        for &w in graph.neighbors(v as usize) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = dv + 1;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count
}

/// Ball sizes for several radii in one truncated BFS.
pub fn ball_sizes(graph: &StructureGraph, center: usize, radii: &[u32]) -> Vec<usize> {
    let max_r = radii.iter().cloned().max().unwrap_or(0);
    let n = graph.n_vertices();
    let mut dist = vec![UNREACHABLE; n];
    let mut queue = std::collections::VecDeque::new();
    dist[center] = 0;
    queue.push_back(center as u32);
    // counts[d] = number of vertices at distance exactly d
    let mut counts = vec![0usize; max_r as usize + 1];
    counts[0] = 1;
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize];
        if dv == max_r {
            continue;
        }
        for &w in graph.neighbors(v as usize) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = dv + 1;
                counts[(dv + 1) as usize] += 1;
                queue.push_back(w);
            }
        }
    }
    let mut cum = Vec::with_capacity(counts.len());
    let mut acc = 0usize;
    for c in counts {
        acc += c;
        cum.push(acc);
    }
    radii.iter().map(|&r| cum[r as usize]).collect()
}

/// One failed comparison in a sandwich check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichWitness {
    pub coarse_pair: (usize, usize),
    pub fine_pair: (usize, usize),
    pub dist_coarse: u32,
    pub dist_fine: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichReport {
    pub pairs_checked: usize,
    pub diam_coarse: u32,
    pub diam_fine: u32,
    /// Pairs with `dist_fine < dist_coarse`.
    pub lower_failures: Vec<SandwichWitness>,
    /// Pairs with `dist_fine > 2 dist_coarse + 1`.
    pub slack_failures: Vec<SandwichWitness>,
    /// Coarse pairs whose four half-combinations were all supplied but none
    /// achieved `dist_fine <= 2 dist_coarse`.
    pub tight_failures: Vec<(usize, usize)>,
    pub pass: bool,
}

/// Refinement sandwich: the fine graph halves the coarse cells and matched
/// `y` lie in `{2x, 2x + 1}` (0-based) for their coarse `x`. For every pair,
/// `dist_coarse(x0, x1) <= dist_fine(y0, y1) <= 2 dist_coarse(x0, x1) + 1`;
/// the +1 is tight for mismatched half choices (a fixed wrong half can cost
/// one extra intra-cell hop, so the bare factor-2 bound is false pair by
/// pair). The factor-2 bound does hold for the best matched combination,
/// checked whenever all four combinations of a coarse pair are supplied.
/// Also checks `diam(fine) >= diam(coarse)`.
pub fn refinement_sandwich_check(
    coarse: &StructureGraph,
    fine: &StructureGraph,
    pairs: &[((usize, usize), (usize, usize))],
) -> Result<SandwichReport> {
    if fine.n_vertices() != 2 * coarse.n_vertices() {
        return Err(Error::InvalidArgument(format!(
            "fine graph must have twice the vertices: {} vs {}",
            fine.n_vertices(),
            coarse.n_vertices()
        )));
    }
    for &((x0, x1), (y0, y1)) in pairs {
        let ok = |x: usize, y: usize| y / 2 == x;
        if !(ok(x0, y0) && ok(x1, y1)) {
            return Err(Error::InvalidArgument(format!(
                "pair (({x0},{x1}),({y0},{y1})) violates the halving correspondence"
            )));
        }
    }
    // cache one BFS per distinct source
    let mut coarse_fields: std::collections::HashMap<usize, DistanceField> = Default::default();
    let mut fine_fields: std::collections::HashMap<usize, DistanceField> = Default::default();
    let mut lower_failures = Vec::new();
    let mut slack_failures = Vec::new();
    // (coarse pair) -> (combos seen, best fine distance, coarse distance)
    let mut best: std::collections::HashMap<(usize, usize), (u8, u32, u32)> = Default::default();
    for &((x0, x1), (y0, y1)) in pairs {
        let cf = coarse_fields
            .entry(x0)
            .or_insert_with(|| sssp(coarse, &[x0]).expect("valid source"));
        let dc = cf.dist[x1];
        let ff = fine_fields
            .entry(y0)
            .or_insert_with(|| sssp(fine, &[y0]).expect("valid source"));
        let df = ff.dist[y1];
        let witness = SandwichWitness {
            coarse_pair: (x0, x1),
            fine_pair: (y0, y1),
            dist_coarse: dc,
            dist_fine: df,
        };
        if df < dc {
            lower_failures.push(witness.clone());
        }
        if df > 2 * dc + 1 {
            slack_failures.push(witness);
        }
        let combo = ((y0 & 1) | ((y1 & 1) << 1)) as u8;
        let entry = best.entry((x0, x1)).or_insert((0, u32::MAX, dc));
        entry.0 |= 1 << combo;
        entry.1 = entry.1.min(df);
    }
    let tight_failures: Vec<(usize, usize)> = best
        .iter()
        .filter(|(_, &(seen, best_df, dc))| seen == 0b1111 && best_df > 2 * dc)
        .map(|(&pair, _)| pair)
        .collect();
    let diam_coarse = diameter_with_limit(coarse, DiameterMethod::Exact, usize::MAX)?;
    let diam_fine = diameter_with_limit(fine, DiameterMethod::Exact, usize::MAX)?;
    let pass = lower_failures.is_empty()
        && slack_failures.is_empty()
        && tight_failures.is_empty()
        && diam_fine >= diam_coarse;
    Ok(SandwichReport {
        pairs_checked: pairs.len(),
        diam_coarse,
        diam_fine,
        lower_failures,
        slack_failures,
        tight_failures,
        pass,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DyadicBlockReport {
    pub diam_full: u32,
    pub block_sizes: Vec<usize>,
    pub block_diams: Vec<u32>,
    /// `sum(block_diams) + (#blocks - 1)`: the inter-block crossings cost
    /// one step each, which the bare sum misses (all-singleton blocks give
    /// zero block diameters while the full diameter is positive).
    pub bound: u64,
    pub pass: bool,
}

/// Coupled dyadic-block comparison on one path: the diameter over the whole
/// range is at most the sum of the diameters over the dyadic block
/// partition plus one step per block boundary. Blocks are the binary
/// digits of the cell count, largest first, laid out left to right; each
/// block's induced subgraph is the graph of the corresponding sample slice.
pub fn dyadic_block_diameter_check(
    path: &PathSample,
    cells: CellDecomposition,
) -> Result<DyadicBlockReport> {
    if path.steps() != cells.total_steps() {
        return Err(Error::InvalidSize("decomposition does not cover the path".into()));
    }
    let n = cells.cell_count;
    let k = cells.cell_size;
    let full = build_graph(path, cells, GraphMode::ContinuousRule)?;
    let diam_full = diameter_with_limit(&full, DiameterMethod::Exact, usize::MAX)?;
    let mut block_sizes = Vec::new();
    for bit in (0..usize::BITS).rev() {
        if n & (1 << bit) != 0 {
            block_sizes.push(1usize << bit);
        }
    }
    let mut block_diams = Vec::new();
    let mut start_cell = 0usize;
    for &size in &block_sizes {
        let lo = start_cell * k;
        let hi = (start_cell + size) * k;
        let min_l = slice_minima(&path.l[lo..=hi], k);
        let min_r = slice_minima(&path.r[lo..=hi], k);
        let sub = crate::graph::build_continuous_from_minima(&min_l, &min_r);
        block_diams.push(diameter_with_limit(&sub, DiameterMethod::Exact, usize::MAX)?);
        start_cell += size;
    }
    let bound = block_diams.iter().map(|&d| d as u64).sum::<u64>() + (block_sizes.len() as u64 - 1);
    Ok(DyadicBlockReport {
        diam_full,
        block_sizes,
        block_diams,
        bound,
        pass: (diam_full as u64) <= bound,
    })
}

fn slice_minima(samples: &[f64], k: usize) -> Vec<f64> {
    let n = (samples.len() - 1) / k;
    (0..n)
        .map(|c| samples[c * k..=(c + 1) * k].iter().cloned().fold(f64::INFINITY, f64::min))
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Number of admissible refinements per cell of the refine set.
    pub alternatives: Vec<usize>,
    /// Total refinement assignments enumerated.
    pub assignments: usize,
    /// Max over assignment pairs and vertex pairs of the distance change.
    pub max_difference: u32,
    /// The bound `2^m`.
    pub bound: u32,
    pub pass: bool,
}

/// Enumeration budget for re-subdivision assignments.
const STABILITY_BUDGET: usize = 4096;

/// Deterministic re-subdivision stability on lattice paths: fix the path
/// outside `refine_set` and each refined cell's boundary-length vector,
/// enumerate every compatible replacement of the refined cells' interiors,
/// build the fine continuous-rule graph for each assignment, and measure the
/// worst change of any vertex-to-vertex distance between two assignments.
/// The bound `2^m` is guaranteed for single-cell refine sets.
pub fn resubdivision_stability_check(
    path: &PathSample,
    cells: CellDecomposition,
    refine_set: &[usize],
    m: u32,
) -> Result<StabilityReport> {
    if path.kind != PathKind::LatticeQuadrantBridge {
        return Err(Error::UnsupportedKind(
            "re-subdivision stability is enumerable only for lattice paths".into(),
        ));
    }
    if path.steps() != cells.total_steps() {
        return Err(Error::InvalidSize("decomposition does not cover the path".into()));
    }
    let factor = 1usize << m;
    let fine = cells.refine(factor)?;
    for &c in refine_set {
        if c >= cells.cell_count {
            return Err(Error::InvalidArgument(format!("refine cell {c} out of range")));
        }
    }

    // per refined cell, all lattice segments with the cell's endpoints and
    // per-coordinate minima
    let k = cells.cell_size;
    let mut alternatives: Vec<Vec<(Vec<f64>, Vec<f64>)>> = Vec::new();
    for &c in refine_set {
        let (a, b) = (c * k, (c + 1) * k);
        let seg_l = &path.l[a..=b];
        let seg_r = &path.r[a..=b];
        let alts = compatible_segments(seg_l, seg_r);
        alternatives.push(alts);
    }
    let total: usize = alternatives.iter().map(|a| a.len()).product::<usize>().max(1);
    if total > STABILITY_BUDGET {
        return Err(Error::SizeLimit(format!(
            "{total} refinement assignments exceed the budget {STABILITY_BUDGET}"
        )));
    }

    // all-pairs distance matrices per assignment
    let mut matrices: Vec<Vec<u32>> = Vec::with_capacity(total);
    let nf = fine.cell_count;
    let mut choice = vec![0usize; refine_set.len()];
    loop {
        let mut modified = path.clone();
        for (slot, &c) in refine_set.iter().enumerate() {
            let (seg_l, seg_r) = &alternatives[slot][choice[slot]];
            let a = c * k;
            modified.l[a..=a + k].copy_from_slice(seg_l);
            modified.r[a..=a + k].copy_from_slice(seg_r);
        }
        let g = build_graph(&modified, fine, GraphMode::ContinuousRule)?;
        let mut flat = Vec::with_capacity(nf * nf);
        for v in 0..nf {
            flat.extend_from_slice(&sssp(&g, &[v])?.dist);
        }
        matrices.push(flat);
        // next assignment
        let mut slot = 0;
        loop {
            if slot == refine_set.len() {
                break;
            }
            choice[slot] += 1;
            if choice[slot] < alternatives[slot].len() {
                break;
            }
            choice[slot] = 0;
            slot += 1;
        }
        if slot == refine_set.len() {
            break;
        }
    }

    let mut max_diff = 0u32;
    for i in 0..matrices.len() {
        for j in i + 1..matrices.len() {
            for (a, b) in matrices[i].iter().zip(matrices[j].iter()) {
                let d = a.abs_diff(*b);
                if d > max_diff {
                    max_diff = d;
                }
            }
        }
    }
    let bound = 1u32 << m;
    Ok(StabilityReport {
        alternatives: alternatives.iter().map(|a| a.len()).collect(),
        assignments: matrices.len(),
        max_difference: max_diff,
        bound,
        pass: max_diff <= bound,
    })
}

/// All lattice segments sharing the original's endpoints and per-coordinate
/// minima (equivalently, its boundary-length vector).
fn compatible_segments(orig_l: &[f64], orig_r: &[f64]) -> Vec<(Vec<f64>, Vec<f64>)> {
    let steps = orig_l.len() - 1;
    let min_of = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let (min_l, min_r) = (min_of(orig_l), min_of(orig_r));
    let (end_l, end_r) = (orig_l[steps], orig_r[steps]);
    let mut out = Vec::new();
    let mut l = vec![0.0f64; steps + 1];
    let mut r = vec![0.0f64; steps + 1];
    l[0] = orig_l[0];
    r[0] = orig_r[0];
    fn rec(
        k: usize,
        steps: usize,
        l: &mut Vec<f64>,
        r: &mut Vec<f64>,
        target: (f64, f64, f64, f64),
        out: &mut Vec<(Vec<f64>, Vec<f64>)>,
    ) {
        let (min_l, min_r, end_l, end_r) = target;
        if k == steps {
            let got_min_l = l.iter().cloned().fold(f64::INFINITY, f64::min);
            let got_min_r = r.iter().cloned().fold(f64::INFINITY, f64::min);
            if l[steps] == end_l && r[steps] == end_r && got_min_l == min_l && got_min_r == min_r {
                out.push((l.clone(), r.clone()));
            }
            return;
        }
        // prune on reachability of the endpoint and on broken minima
        let remaining = (steps - k) as f64;
        if (l[k] - end_l).abs() + (r[k] - end_r).abs() > remaining {
            return;
        }
        if l[k] < min_l || r[k] < min_r {
            return;
        }
        for (dl, dr) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            l[k + 1] = l[k] + dl;
            r[k + 1] = r[k] + dr;
            rec(k + 1, steps, l, r, target, out);
        }
    }
    rec(0, steps, &mut l, &mut r, (min_l, min_r, end_l, end_r), &mut out);
    out
}
