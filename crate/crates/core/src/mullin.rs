//! The discrete mating-of-trees layer: quadrant lattice walks, their
//! tree/dual-tree contour pairs, and the triangle adjacency graph.
//!
//! Walks are serialized as strings over `{E, W, N, S}`; enumeration is in
//! lexicographic step order with `E < N < S < W`.

use crate::error::{Error, Result};
use crate::graph::{CellDecomposition, GraphMode, StructureGraph};
use crate::oracle;
use crate::paths::{PathKind, PathSample};
use serde::{Deserialize, Serialize};

/// One step of a nearest-neighbor walk. Ordering is the lexicographic
/// enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    E,
    N,
    S,
    W,
}

impl Step {
    pub const ALL: [Step; 4] = [Step::E, Step::N, Step::S, Step::W];

    pub fn to_char(self) -> char {
        match self {
            Step::E => 'E',
            Step::N => 'N',
            Step::S => 'S',
            Step::W => 'W',
        }
    }

    pub fn from_char(c: char) -> Result<Step> {
        match c {
            'E' => Ok(Step::E),
            'N' => Ok(Step::N),
            'S' => Ok(Step::S),
            'W' => Ok(Step::W),
            other => Err(Error::InvalidEncoding(format!("unknown step '{other}'"))),
        }
    }

    /// Displacement on the (tree, dual-tree) coordinates.
    fn delta(self) -> (i64, i64) {
        match self {
            Step::E => (1, 0),
            Step::W => (-1, 0),
            Step::N => (0, 1),
            Step::S => (0, -1),
        }
    }
}

pub fn walk_to_string(walk: &[Step]) -> String {
    walk.iter().map(|s| s.to_char()).collect()
}

pub fn walk_from_string(s: &str) -> Result<Vec<Step>> {
    s.chars().map(Step::from_char).collect()
}

/// Is `walk` a valid quadrant bridge (stays in the first quadrant, returns
/// to the origin, even length)?
pub fn is_valid_walk(walk: &[Step]) -> bool {
    let (mut x, mut y) = (0i64, 0i64);
    for &s in walk {
        let (dx, dy) = s.delta();
        x += dx;
        y += dy;
        if x < 0 || y < 0 {
            return false;
        }
    }
    x == 0 && y == 0 && !walk.is_empty()
}

/// Encode a walk as a `LatticeQuadrantBridge` path sample (`dt = 1`).
pub fn walk_to_path(walk: &[Step]) -> PathSample {
    let mut l = Vec::with_capacity(walk.len() + 1);
    let mut r = Vec::with_capacity(walk.len() + 1);
    let (mut x, mut y) = (0i64, 0i64);
    l.push(0.0);
    r.push(0.0);
    for &s in walk {
        let (dx, dy) = s.delta();
        x += dx;
        y += dy;
        l.push(x as f64);
        r.push(y as f64);
    }
    PathSample {
        dt: 1.0,
        l,
        r,
        kind: PathKind::LatticeQuadrantBridge,
    }
}

/// Decode a lattice path sample back to its step sequence.
pub fn path_to_walk(path: &PathSample) -> Result<Vec<Step>> {
    if path.kind != PathKind::LatticeQuadrantBridge {
        return Err(Error::InvalidEncoding("not a lattice walk sample".into()));
    }
    path.validate()?;
    let mut walk = Vec::with_capacity(path.steps());
    for k in 1..=path.steps() {
        let dl = path.l[k] - path.l[k - 1];
        let dr = path.r[k] - path.r[k - 1];
        walk.push(match (dl as i64, dr as i64) {
            (1, 0) => Step::E,
            (-1, 0) => Step::W,
            (0, 1) => Step::N,
            (0, -1) => Step::S,
            _ => unreachable!("validated lattice walk"),
        });
    }
    Ok(walk)
}

/// Contour pair of the tree and dual tree: the two coordinate height
/// processes of a walk, length `2n + 1`, both nonnegative, both ending at 0,
/// exactly one moving by +-1 at each step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContourPair {
    pub d: Vec<i64>,
    pub d_star: Vec<i64>,
}

impl ContourPair {
    pub fn validate(&self) -> Result<()> {
        let len = self.d.len();
        if len < 2 || self.d_star.len() != len {
            return Err(Error::InvalidEncoding(
                "contours must have equal length >= 2".into(),
            ));
        }
        if self.d[0] != 0 || self.d_star[0] != 0 || self.d[len - 1] != 0 || self.d_star[len - 1] != 0
        {
            return Err(Error::InvalidEncoding("contours must start and end at 0".into()));
        }
        for k in 1..len {
            let dd = self.d[k] - self.d[k - 1];
            let ds = self.d_star[k] - self.d_star[k - 1];
            if !((dd.abs() == 1 && ds == 0) || (dd == 0 && ds.abs() == 1)) {
                return Err(Error::InvalidEncoding(format!(
                    "step {k} must move exactly one contour by 1"
                )));
            }
            if self.d[k] < 0 || self.d_star[k] < 0 {
                return Err(Error::InvalidEncoding(format!("contour negative at step {k}")));
            }
        }
        Ok(())
    }
}

/// The two coordinate height processes of a walk: distances to the roots in
/// the tree and dual tree.
pub fn walk_to_trees(path: &PathSample) -> Result<ContourPair> {
    if path.kind != PathKind::LatticeQuadrantBridge {
        return Err(Error::InvalidEncoding("not a lattice walk sample".into()));
    }
    path.validate()?;
    Ok(ContourPair {
        d: path.l.iter().map(|&v| v as i64).collect(),
        d_star: path.r.iter().map(|&v| v as i64).collect(),
    })
}

/// Interleave a contour pair back into a walk; inverse of [`walk_to_trees`].
pub fn trees_to_walk(pair: &ContourPair) -> Result<PathSample> {
    pair.validate()?;
    let steps = pair.d.len() - 1;
    let mut walk = Vec::with_capacity(steps);
    for k in 1..=steps {
        let dd = pair.d[k] - pair.d[k - 1];
        let ds = pair.d_star[k] - pair.d_star[k - 1];
        walk.push(match (dd, ds) {
            (1, 0) => Step::E,
            (-1, 0) => Step::W,
            (0, 1) => Step::N,
            (0, -1) => Step::S,
            _ => unreachable!("validated contour pair"),
        });
    }
    Ok(walk_to_path(&walk))
}

/// Triangle adjacency graph of a walk: one vertex per step, adjacency by
/// the printed strict rule (consecutive, or one contour strictly clears its
/// interior minimum). Evaluated directly pair by pair; the linear-sweep
/// route is `build_graph(walk, unit cells, LatticeRule)` and the two must
/// agree.
pub fn walk_to_triangle_graph(path: &PathSample) -> Result<StructureGraph> {
    if path.kind != PathKind::LatticeQuadrantBridge {
        return Err(Error::InvalidEncoding("not a lattice walk sample".into()));
    }
    path.validate()?;
    let cells = CellDecomposition::new(1, path.steps())?;
    oracle::build_graph_reference(path, cells, GraphMode::LatticeRule)
}

/// All quadrant walks with `2n` steps in lexicographic order; the public
/// surface is capped at `n <= 4` (the enumeration oracle of the test
/// suites).
pub fn enumerate_quadrant_walks(n: usize) -> Result<Vec<Vec<Step>>> {
    if n == 0 {
        return Err(Error::InvalidSize("n must be >= 1".into()));
    }
    if n > 4 {
        return Err(Error::SizeLimit(format!("enumeration is capped at n <= 4, got {n}")));
    }
    Ok(all_walks(n))
}

/// Unchecked enumeration, shared with the exhaustive lattice sampler
/// (which allows n <= 6).
pub(crate) fn all_walks(n: usize) -> Vec<Vec<Step>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(2 * n);
    descend(2 * n, 0, 0, &mut current, &mut out);
    out
}

fn descend(remaining: usize, x: i64, y: i64, current: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
    if remaining == 0 {
        if x == 0 && y == 0 {
            out.push(current.clone());
        }
        return;
    }
    // prune: must be able to return to the origin in the remaining steps
    let dist = x + y;
    if dist > remaining as i64 || (remaining as i64 - dist) % 2 != 0 {
        return;
    }
    for s in Step::ALL {
        let (dx, dy) = s.delta();
        let (nx, ny) = (x + dx, y + dy);
        if nx < 0 || ny < 0 {
            continue;
        }
        current.push(s);
        descend(remaining - 1, nx, ny, current, out);
        current.pop();
    }
}
