//! Reference implementations used to verify the fast paths.
//!
//! Everything here evaluates definitions directly: the adjacency predicate
//! pair by pair with exact interval minima, and all-pairs distances by
//! Floyd-Warshall. Quadratic or cubic on purpose; the sweep builders and
//! BFS must reproduce these outputs exactly.

use crate::error::{Error, Result};
use crate::graph::{label, CellDecomposition, GraphMode, StructureGraph};
use crate::paths::{PathKind, PathSample};
use crate::rmq::SparseTable;

/// Direct evaluation of the adjacency predicate for cells `c1 < c2`, one
/// coordinate. Sample ranges are inclusive; `middle` is the sample range
/// strictly between the two cells.
fn continuous_coord_adjacent(t: &SparseTable, k: usize, c1: usize, c2: usize) -> bool {
    let m1 = t.min(c1 * k, (c1 + 1) * k);
    let m2 = t.min(c2 * k, (c2 + 1) * k);
    let mid = t.min((c1 + 1) * k, c2 * k);
    m1.max(m2) <= mid
}

/// The strict lattice rule, verbatim: `d[c1] v d[c2+1] < min d[c1+1..=c2]`.
fn lattice_coord_adjacent(t: &SparseTable, samples: &[f64], c1: usize, c2: usize) -> bool {
    let mid = t.min(c1 + 1, c2);
    samples[c1].max(samples[c2 + 1]) < mid
}

/// Quadratic reference builder: every pair, direct predicate.
pub fn build_graph_reference(
    path: &PathSample,
    cells: CellDecomposition,
    mode: GraphMode,
) -> Result<StructureGraph> {
    if path.steps() != cells.total_steps() {
        return Err(Error::InvalidSize(format!(
            "decomposition covers {} steps but path has {}",
            cells.total_steps(),
            path.steps()
        )));
    }
    if mode == GraphMode::LatticeRule {
        if path.kind != PathKind::LatticeQuadrantBridge {
            return Err(Error::ModeMismatch(
                "lattice rule needs a LatticeQuadrantBridge path".into(),
            ));
        }
        if cells.cell_size != 1 {
            return Err(Error::ModeMismatch("lattice rule needs unit cells".into()));
        }
    }
    let n = cells.cell_count;
    let k = cells.cell_size;
    let tl = SparseTable::new(&path.l);
    let tr = SparseTable::new(&path.r);
    let mut edges: Vec<(u32, u32, u8)> = Vec::new();
    for c1 in 0..n {
        for c2 in c1 + 1..n {
            let mut lab = 0u8;
            if c2 == c1 + 1 {
                lab |= label::CONSECUTIVE;
            }
            match mode {
                GraphMode::ContinuousRule => {
                    if c2 > c1 + 1 {
                        if continuous_coord_adjacent(&tl, k, c1, c2) {
                            lab |= label::L_MATCH;
                        }
                        if continuous_coord_adjacent(&tr, k, c1, c2) {
                            lab |= label::R_MATCH;
                        }
                    }
                }
                GraphMode::LatticeRule => {
                    if lattice_coord_adjacent(&tl, &path.l, c1, c2) {
                        lab |= label::L_MATCH;
                    }
                    if lattice_coord_adjacent(&tr, &path.r, c1, c2) {
                        lab |= label::R_MATCH;
                    }
                }
            }
            if lab != 0 {
                edges.push((c1 as u32, c2 as u32, lab));
            }
        }
    }
    Ok(StructureGraph::from_edges(n, &mut edges))
}

/// All-pairs shortest paths by Floyd-Warshall; `u32::MAX` marks unreachable.
/// Reference for BFS-based distances; intended for small graphs.
pub fn all_pairs_reference(g: &StructureGraph) -> Vec<Vec<u32>> {
    let n = g.n_vertices();
    const INF: u32 = u32::MAX;
    let mut d = vec![vec![INF; n]; n];
    for v in 0..n {
        d[v][v] = 0;
        for &w in g.neighbors(v) {
            d[v][w as usize] = 1;
        }
    }
    for mid in 0..n {
        for i in 0..n {
            let dim = d[i][mid];
            if dim == INF {
                continue;
            }
            for j in 0..n {
                let dmj = d[mid][j];
                if dmj != INF && dim + dmj < d[i][j] {
                    d[i][j] = dim + dmj;
                }
            }
        }
    }
    d
}

/// Boundary sets per the adjacency definition: which cells of `[lo, hi]`
/// are adjacent, within the full graph of the embedding path, to a cell
/// outside the range on the given side and through the given coordinate.
/// Returns (lower_left, lower_right, upper_left, upper_right).
pub fn boundary_sets_by_adjacency(
    path: &PathSample,
    cells: CellDecomposition,
    lo: usize,
    hi: usize,
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>)> {
    if lo > hi || hi >= cells.cell_count {
        return Err(Error::InvalidInterval { a: lo, b: hi });
    }
    let n = cells.cell_count;
    let k = cells.cell_size;
    let tl = SparseTable::new(&path.l);
    let tr = SparseTable::new(&path.r);
    let mut ll = Vec::new();
    let mut lr = Vec::new();
    let mut ul = Vec::new();
    let mut ur = Vec::new();
    for c in lo..=hi {
        let (mut in_ll, mut in_lr, mut in_ul, mut in_ur) = (false, false, false, false);
        for y in 0..lo {
            // the predicate covers the consecutive case (the middle range
            // degenerates to the shared sample)
            if continuous_coord_adjacent(&tl, k, y, c) {
                in_ll = true;
            }
            if continuous_coord_adjacent(&tr, k, y, c) {
                in_lr = true;
            }
        }
        for y in hi + 1..n {
            if continuous_coord_adjacent(&tl, k, c, y) {
                in_ul = true;
            }
            if continuous_coord_adjacent(&tr, k, c, y) {
                in_ur = true;
            }
        }
        if in_ll {
            ll.push(c);
        }
        if in_lr {
            lr.push(c);
        }
        if in_ul {
            ul.push(c);
        }
        if in_ur {
            ur.push(c);
        }
    }
    Ok((ll, lr, ul, ur))
}
