//! Aggregated invariant suites from every module, run at reduced but
//! representative scale. One pass/fail line per suite; the process fails if
//! any suite does.

use mated_crt::error::Result;
use mated_crt::estimators::bounds_grid_consistency;
use mated_crt::exec;
use mated_crt::graph::{
    build_graph, boundary_sets, cell_boundary_vectors, graph_from_boundary_vectors,
    CellDecomposition, GraphMode,
};
use mated_crt::metrics::{
    diameter, dyadic_block_diameter_check, refinement_sandwich_check,
    resubdivision_stability_check, sssp, DiameterMethod,
};
use mated_crt::mullin;
use mated_crt::oracle;
use mated_crt::params::GammaParams;
use mated_crt::paths::{sample_lattice_excursion_pair, sample_path, PathKind};
use mated_crt::reroot::{reroot, reroot_graph_shift_check};
use mated_crt::rng::SeedSpec;
use mated_crt::stats::ks_two_sample;

type Suite = (&'static str, fn() -> Result<()>);

fn fail(msg: String) -> mated_crt::Error {
    mated_crt::Error::InvalidArgument(msg)
}

fn seed_mix_vectors() -> Result<()> {
    if SeedSpec::new(0, 0).derive() != 0xE220_A839_7B1D_CDAF {
        return Err(fail("seed mix golden vector mismatch".into()));
    }
    let p = GammaParams::new(2f64.sqrt()).unwrap();
    let a = sample_path(&p, PathKind::Excursion, 64, 1.0 / 64.0, SeedSpec::new(7, 3))?;
    let b = sample_path(&p, PathKind::Excursion, 64, 1.0 / 64.0, SeedSpec::new(7, 3))?;
    if a != b {
        return Err(fail("identical seeds produced different paths".into()));
    }
    Ok(())
}

fn sweep_matches_oracle() -> Result<()> {
    let p = GammaParams::new(2f64.sqrt()).unwrap();
    for (rep, k) in (0..20u64).zip([1usize, 4].into_iter().cycle()) {
        let n = 128usize;
        let path = sample_path(&p, PathKind::Unconditioned, n * k, 1e-3, SeedSpec::new(1000, rep))?;
        let cells = CellDecomposition::new(k, n)?;
        let fast = build_graph(&path, cells, GraphMode::ContinuousRule)?;
        let slow = oracle::build_graph_reference(&path, cells, GraphMode::ContinuousRule)?;
        if fast != slow {
            return Err(fail(format!("continuous sweep != oracle at rep {rep}")));
        }
        if fast.edge_count() > 4 * n {
            return Err(fail("edge budget exceeded".into()));
        }
    }
    for n in 1..=4 {
        for walk in mullin::enumerate_quadrant_walks(n)? {
            let path = mullin::walk_to_path(&walk);
            let cells = CellDecomposition::new(1, 2 * n)?;
            let fast = build_graph(&path, cells, GraphMode::LatticeRule)?;
            let slow = oracle::build_graph_reference(&path, cells, GraphMode::LatticeRule)?;
            if fast != slow {
                return Err(fail(format!(
                    "lattice sweep != oracle on {}",
                    mullin::walk_to_string(&walk)
                )));
            }
        }
    }
    Ok(())
}

fn boundary_vector_reconstruction() -> Result<()> {
    let p = GammaParams::new(3f64.sqrt()).unwrap();
    for rep in 0..20u64 {
        let (n, k) = (96usize, 4usize);
        let path = sample_path(&p, PathKind::Unconditioned, n * k, 1e-3, SeedSpec::new(2000, rep))?;
        let cells = CellDecomposition::new(k, n)?;
        let rebuilt = graph_from_boundary_vectors(&cell_boundary_vectors(&path, cells)?)?;
        let direct = build_graph(&path, cells, GraphMode::ContinuousRule)?;
        if rebuilt != direct {
            return Err(fail(format!("boundary-vector reconstruction differs at rep {rep}")));
        }
    }
    Ok(())
}

fn sandwich_inequalities() -> Result<()> {
    let p = GammaParams::new(2f64.sqrt()).unwrap();
    for rep in 0..10u64 {
        let (n, k) = (64usize, 4usize);
        let path = sample_path(&p, PathKind::Unconditioned, n * k, 1e-3, SeedSpec::new(3000, rep))?;
        let coarse_cells = CellDecomposition::new(k, n)?;
        let coarse = build_graph(&path, coarse_cells, GraphMode::ContinuousRule)?;
        let fine = build_graph(&path, coarse_cells.refine(2)?, GraphMode::ContinuousRule)?;
        let mut pairs = Vec::new();
        for x0 in 0..n {
            for x1 in 0..n {
                for y0 in [2 * x0, 2 * x0 + 1] {
                    for y1 in [2 * x1, 2 * x1 + 1] {
                        pairs.push(((x0, x1), (y0, y1)));
                    }
                }
            }
        }
        let report = refinement_sandwich_check(&coarse, &fine, &pairs)?;
        if !report.pass {
            return Err(fail(format!("sandwich failed at rep {rep}")));
        }
    }
    Ok(())
}

fn boundary_sets_match_adjacency() -> Result<()> {
    let p = GammaParams::new(2f64.sqrt()).unwrap();
    for rep in 0..5u64 {
        let (n, k, dive) = (32usize, 4usize, 4usize);
        let inner = sample_path(&p, PathKind::Unconditioned, n * k, 1e-3, SeedSpec::new(4000, rep))?;
        let ramp = 2 * dive * k + 1;
        let deep = -1e6;
        let mut l = Vec::new();
        let mut r = Vec::new();
        for i in 0..ramp {
            let t = i as f64 / (ramp - 1) as f64;
            let v = deep * (1.0 - (2.0 * t - 1.0).abs());
            l.push(v);
            r.push(v);
        }
        for j in 1..inner.l.len() {
            l.push(inner.l[j]);
            r.push(inner.r[j]);
        }
        let (le, re) = (*l.last().unwrap(), *r.last().unwrap());
        for i in 1..ramp {
            let t = i as f64 / (ramp - 1) as f64;
            let v = deep * (1.0 - (2.0 * t - 1.0).abs());
            l.push(le + v);
            r.push(re + v);
        }
        let emb = mated_crt::paths::PathSample { dt: 1.0, l, r, kind: PathKind::Unconditioned };
        let cells = CellDecomposition::new(k, emb.steps() / k)?;
        let (lo, hi) = (2 * dive, 2 * dive + n - 1);
        let fast = boundary_sets(&emb, cells, lo, hi)?;
        let (ll, lr, ul, ur) = oracle::boundary_sets_by_adjacency(&emb, cells, lo, hi)?;
        if fast.lower_left != ll || fast.lower_right != lr || fast.upper_left != ul || fast.upper_right != ur {
            return Err(fail(format!("boundary sets differ from adjacency oracle at rep {rep}")));
        }
    }
    Ok(())
}

fn reroot_invariants() -> Result<()> {
    for rep in 0..5u64 {
        let e = sample_lattice_excursion_pair(128, SeedSpec::new(5000, rep))?;
        // involution
        for t in [0usize, 13, 64, 100] {
            let back = reroot(&reroot(&e, t)?, 128 - t)?;
            if back != e {
                return Err(fail(format!("involution failed at rep {rep}, pivot {t}")));
            }
        }
        // graph shift, all cell-aligned pivots
        let cells = CellDecomposition::new(2, 64)?;
        for c in 0..64 {
            let report = reroot_graph_shift_check(&e, cells, 2 * c)?;
            if !report.pass {
                return Err(fail(format!("graph shift failed at rep {rep}, pivot cell {c}")));
            }
        }
    }
    Ok(())
}

fn mullin_layer() -> Result<()> {
    let counts = [2usize, 10, 70, 588];
    for n in 1..=4usize {
        let walks = mullin::enumerate_quadrant_walks(n)?;
        if walks.len() != counts[n - 1] {
            return Err(fail(format!("|D_{n}| = {} != {}", walks.len(), counts[n - 1])));
        }
        for walk in &walks {
            let path = mullin::walk_to_path(walk);
            let back = mullin::trees_to_walk(&mullin::walk_to_trees(&path)?)?;
            if back != path {
                return Err(fail("tree round trip failed".into()));
            }
            let direct = mullin::walk_to_triangle_graph(&path)?;
            let sweep = build_graph(&path, CellDecomposition::new(1, 2 * n)?, GraphMode::LatticeRule)?;
            if direct != sweep {
                return Err(fail("triangle graph != lattice builder".into()));
            }
        }
    }
    Ok(())
}

fn resubdivision_stability() -> Result<()> {
    for n in 1..=3usize {
        for walk in mullin::enumerate_quadrant_walks(n)? {
            let path = mullin::walk_to_path(&walk);
            let cells = CellDecomposition::new(2, n)?;
            for c in 0..n {
                let report = resubdivision_stability_check(&path, cells, &[c], 1)?;
                if !report.pass {
                    return Err(fail(format!(
                        "stability {} > 2 on {}",
                        report.max_difference,
                        mullin::walk_to_string(&walk)
                    )));
                }
            }
        }
    }
    Ok(())
}

fn bounds_table_consistency() -> Result<()> {
    let report = bounds_grid_consistency(100, 1e-12);
    if !report.pass {
        return Err(fail(format!("bounds grid inconsistent: {report:?}")));
    }
    Ok(())
}

fn variance_band() -> Result<()> {
    let p = GammaParams::new(2f64.sqrt()).unwrap();
    let reps = 500usize;
    let steps = 256usize;
    let sums = exec::map_indexed(reps, |i| {
        let path = sample_path(
            &p,
            PathKind::Unconditioned,
            steps,
            1.0 / steps as f64,
            SeedSpec::new(6000, i as u64),
        )
        .expect("sampling");
        path.l[steps] * path.l[steps]
    });
    let s2 = sums.iter().sum::<f64>() / reps as f64;
    let band = 3.0 * (2.0 / reps as f64).sqrt();
    if (s2 - 1.0).abs() > band {
        return Err(fail(format!("variance {s2} outside band {band}")));
    }
    Ok(())
}

fn metric_invariants() -> Result<()> {
    let p = GammaParams::new(2f64.sqrt()).unwrap();
    for rep in 0..5u64 {
        let (n, k) = (100usize, 2usize);
        let path = sample_path(&p, PathKind::Unconditioned, n * k, 1e-3, SeedSpec::new(7000, rep))?;
        let cells = CellDecomposition::new(k, n)?;
        let report = dyadic_block_diameter_check(&path, cells)?;
        if !report.pass {
            return Err(fail(format!("dyadic block bound failed at rep {rep}")));
        }
        let g = build_graph(&path, cells, GraphMode::ContinuousRule)?;
        let exact = diameter(&g, DiameterMethod::Exact)?;
        let sweep = diameter(&g, DiameterMethod::DoubleSweep(8))?;
        if sweep > exact {
            return Err(fail("double sweep exceeded the exact diameter".into()));
        }
        let field = sssp(&g, &[0])?;
        for w in field.dist.windows(2) {
            if w[0].abs_diff(w[1]) > 1 {
                return Err(fail("consecutive cells differ by more than 1".into()));
            }
        }
    }
    Ok(())
}

fn stats_sanity() -> Result<()> {
    let a = [1.0, 2.0, 3.0, 4.0, 5.0];
    let r = ks_two_sample(&a, &a);
    if r.statistic != 0.0 || r.p_value != 1.0 {
        return Err(fail("KS self-comparison not exact".into()));
    }
    let serial = exec::map_indexed_serial(64, |i| (i as f64).sqrt());
    let parallel = exec::map_indexed(64, |i| (i as f64).sqrt());
    if serial != parallel {
        return Err(fail("parallel and serial maps differ".into()));
    }
    Ok(())
}

pub fn run_all() -> bool {
    let suites: &[Suite] = &[
        ("seed-mix-and-determinism", seed_mix_vectors),
        ("sweep-vs-oracle", sweep_matches_oracle),
        ("boundary-vector-reconstruction", boundary_vector_reconstruction),
        ("refinement-sandwich", sandwich_inequalities),
        ("boundary-sets-vs-adjacency", boundary_sets_match_adjacency),
        ("reroot-involution-and-shift", reroot_invariants),
        ("mullin-layer", mullin_layer),
        ("resubdivision-stability", resubdivision_stability),
        ("bounds-table", bounds_table_consistency),
        ("variance-band", variance_band),
        ("metric-invariants", metric_invariants),
        ("stats-and-exec", stats_sanity),
    ];
    let mut all_ok = true;
    for (name, f) in suites {
        match f() {
            Ok(()) => println!("selftest {name}: ok"),
            Err(e) => {
                all_ok = false;
                println!("selftest {name}: FAILED ({e})");
            }
        }
    }
    all_ok
}
