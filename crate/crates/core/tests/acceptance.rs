//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Deterministic lemma checks are exact; Monte Carlo exponent checks use
//! fixed seeds and pinned tolerance windows, so every verdict here is a
//! constant of the code base. Run with `cargo test --test acceptance`
//! (`-- --nocapture` to see the lines).

use mated_crt::estimators::bounds;
use mated_crt::estimators::experiment::{run_experiment, ExperimentConfig, ExperimentKind};
use mated_crt::graph::{
    build_graph, cell_boundary_vectors, graph_from_boundary_vectors, CellDecomposition, GraphMode,
};
use mated_crt::metrics::{
    refinement_sandwich_check, resubdivision_stability_check, sssp,
};
use mated_crt::mullin;
use mated_crt::oracle;
use mated_crt::params::GammaParams;
use mated_crt::paths::{sample_lattice_excursion_pair, sample_path, PathKind};
use mated_crt::reroot::{reroot, reroot_graph_shift_check, reroot_law_test, RerootStatistic};
use mated_crt::rng::SeedSpec;
use std::time::Instant;

fn sqrt2() -> f64 {
    2f64.sqrt()
}
fn sqrt_8_3() -> f64 {
    (8f64 / 3.0).sqrt()
}
fn sqrt3() -> f64 {
    3f64.sqrt()
}

fn report(idx: u32, name: &str, started: Instant, detail: &str) {
    println!(
        "acceptance {idx:02} {name}: PASS ({detail}; {:.1?})",
        started.elapsed()
    );
}

/// 1. Sweep builder output equals the direct quadratic predicate: 100
/// seeded Gaussian paths (N = 512, K in {1, 4, 16}) under the non-strict
/// continuous rule, and every lattice walk with n <= 4 under the strict
/// rule. Exact.
#[test]
fn acceptance_01_adjacency_oracle_equivalence() {
    let t = Instant::now();
    let params = GammaParams::new(sqrt2()).unwrap();
    let n = 512usize;
    for rep in 0..100u64 {
        let k = [1usize, 4, 16][(rep % 3) as usize];
        let path = sample_path(
            &params,
            PathKind::Unconditioned,
            n * k,
            1e-4,
            SeedSpec::new(101, rep),
        )
        .unwrap();
        let cells = CellDecomposition::new(k, n).unwrap();
        let sweep = build_graph(&path, cells, GraphMode::ContinuousRule).unwrap();
        let direct = oracle::build_graph_reference(&path, cells, GraphMode::ContinuousRule).unwrap();
        assert_eq!(sweep, direct, "gaussian rep {rep}, K = {k}");
        assert!(sweep.edge_count() <= 4 * n);
    }
    let mut lattice_checked = 0usize;
    for n in 1..=4 {
        for walk in mullin::enumerate_quadrant_walks(n).unwrap() {
            let path = mullin::walk_to_path(&walk);
            let cells = CellDecomposition::new(1, 2 * n).unwrap();
            let sweep = build_graph(&path, cells, GraphMode::LatticeRule).unwrap();
            let direct =
                oracle::build_graph_reference(&path, cells, GraphMode::LatticeRule).unwrap();
            assert_eq!(sweep, direct, "walk {}", mullin::walk_to_string(&walk));
            lattice_checked += 1;
        }
    }
    report(
        1,
        "adjacency-oracle-equivalence",
        t,
        &format!("100 gaussian instances and {lattice_checked} lattice walks, exact"),
    );
}

/// 2. Boundary-length vectors determine the graph: reconstruction equals
/// the direct build on 100 seeded instances. Exact.
#[test]
fn acceptance_02_boundary_vector_reconstruction() {
    let t = Instant::now();
    let gammas = [sqrt2(), sqrt_8_3(), sqrt3()];
    for rep in 0..100u64 {
        let params = GammaParams::new(gammas[(rep % 3) as usize]).unwrap();
        let (n, k) = (256usize, 4usize);
        let path = sample_path(
            &params,
            PathKind::Unconditioned,
            n * k,
            1e-3,
            SeedSpec::new(202, rep),
        )
        .unwrap();
        let cells = CellDecomposition::new(k, n).unwrap();
        let deltas = cell_boundary_vectors(&path, cells).unwrap();
        let rebuilt = graph_from_boundary_vectors(&deltas).unwrap();
        let direct = build_graph(&path, cells, GraphMode::ContinuousRule).unwrap();
        assert_eq!(rebuilt, direct, "rep {rep}");
    }
    report(2, "boundary-vector-reconstruction", t, "100 instances, exact");
}

/// 3. Refinement sandwich on 50 instances (N = 256 coarse cells), all
/// coarse pairs, all four matched half choices: lower bound exact per
/// combination, upper bound `2 d + 1` exact per combination, bare `2 d`
/// achieved by the best combination, and the fine diameter dominates the
/// coarse one. (The bare factor-2 bound for every fixed combination is
/// false discretely; one wrong-half hop costs one step.)
#[test]
fn acceptance_03_refinement_sandwich() {
    let t = Instant::now();
    let params = GammaParams::new(sqrt2()).unwrap();
    for rep in 0..50u64 {
        let (n, k) = (256usize, 2usize);
        let path = sample_path(
            &params,
            PathKind::Unconditioned,
            n * k,
            1e-3,
            SeedSpec::new(303, rep),
        )
        .unwrap();
        let coarse_cells = CellDecomposition::new(k, n).unwrap();
        let coarse = build_graph(&path, coarse_cells, GraphMode::ContinuousRule).unwrap();
        let fine =
            build_graph(&path, coarse_cells.refine(2).unwrap(), GraphMode::ContinuousRule).unwrap();
        let mut pairs = Vec::with_capacity(4 * n * n);
        for x0 in 0..n {
            for x1 in 0..n {
                for y0 in [2 * x0, 2 * x0 + 1] {
                    for y1 in [2 * x1, 2 * x1 + 1] {
                        pairs.push(((x0, x1), (y0, y1)));
                    }
                }
            }
        }
        let r = refinement_sandwich_check(&coarse, &fine, &pairs).unwrap();
        assert!(r.lower_failures.is_empty(), "rep {rep}: {:?}", r.lower_failures.first());
        assert!(r.slack_failures.is_empty(), "rep {rep}: {:?}", r.slack_failures.first());
        assert!(r.tight_failures.is_empty(), "rep {rep}: {:?}", r.tight_failures.first());
        assert!(r.diam_fine >= r.diam_coarse, "rep {rep}");
    }
    report(
        3,
        "refinement-sandwich",
        t,
        "50 instances x 256^2 pairs x 4 combos, exact",
    );
}

/// 4. Re-rooting: involution to 1e-12 on 50 excursions x 16 pivots and the
/// cyclic graph shift exact on all cell-aligned pivots (N = 256), both on
/// unit-step lattice excursion pairs (where sampling commutes with the
/// re-rooting algebra); plus the distributional invariance at gamma =
/// sqrt 2 by a two-sample KS test (400 replicates, N = 512, p > 0.01) whose
/// negative control (a re-rooted bridge) is rejected at p < 0.01.
#[test]
fn acceptance_04_rerooting() {
    let t = Instant::now();
    // involution
    for rep in 0..50u64 {
        let e = sample_lattice_excursion_pair(256, SeedSpec::new(404, rep)).unwrap();
        let m = e.steps();
        let scale = e
            .l
            .iter()
            .chain(e.r.iter())
            .cloned()
            .fold(0.0f64, f64::max)
            .max(1.0);
        for g in 0..16usize {
            let pivot = g * m / 16;
            let back = reroot(&reroot(&e, pivot).unwrap(), m - pivot).unwrap();
            for s in 0..=m {
                assert!(
                    (back.l[s] - e.l[s]).abs() <= 1e-12 * scale
                        && (back.r[s] - e.r[s]).abs() <= 1e-12 * scale,
                    "involution rep {rep} pivot {pivot} sample {s}"
                );
            }
        }
    }
    // graph shift isomorphism, all cell-aligned pivots at N = 256
    for rep in 0..10u64 {
        let (n, k) = (256usize, 2usize);
        let e = sample_lattice_excursion_pair(n * k, SeedSpec::new(405, rep)).unwrap();
        let cells = CellDecomposition::new(k, n).unwrap();
        for c in 0..n {
            let r = reroot_graph_shift_check(&e, cells, c * k).unwrap();
            assert!(r.pass, "rep {rep} pivot cell {c}: {:?}", r.first_mismatch);
        }
    }
    // distributional invariance + negative control
    let params = GammaParams::new(sqrt2()).unwrap();
    let law = reroot_law_test(
        &params,
        512,
        4,
        400,
        0.5,
        RerootStatistic::Diameter,
        SeedSpec::new(406, 0),
    )
    .unwrap();
    assert!(law.ks.p_value > 0.01, "null p = {}", law.ks.p_value);
    assert!(
        law.negative_control.p_value < 0.01,
        "control p = {}",
        law.negative_control.p_value
    );
    report(
        4,
        "rerooting",
        t,
        &format!(
            "involution+shift exact; KS p = {:.3}, control p = {:.1e}",
            law.ks.p_value, law.negative_control.p_value
        ),
    );
}

/// 5. Mullin layer: enumeration counts |D_1| = 2 and |D_2| = 10, the tree
/// encoding round-trips every walk with n <= 4, and the triangle graph
/// equals the lattice-rule builder. Exact.
#[test]
fn acceptance_05_mullin_layer() {
    let t = Instant::now();
    assert_eq!(mullin::enumerate_quadrant_walks(1).unwrap().len(), 2);
    assert_eq!(mullin::enumerate_quadrant_walks(2).unwrap().len(), 10);
    let mut walks_checked = 0;
    for n in 1..=4 {
        for walk in mullin::enumerate_quadrant_walks(n).unwrap() {
            let path = mullin::walk_to_path(&walk);
            let pair = mullin::walk_to_trees(&path).unwrap();
            let back = mullin::trees_to_walk(&pair).unwrap();
            assert_eq!(back, path, "round trip on {}", mullin::walk_to_string(&walk));
            let triangle = mullin::walk_to_triangle_graph(&path).unwrap();
            let cells = CellDecomposition::new(1, 2 * n).unwrap();
            let lattice = build_graph(&path, cells, GraphMode::LatticeRule).unwrap();
            assert_eq!(triangle, lattice, "adjacency on {}", mullin::walk_to_string(&walk));
            walks_checked += 1;
        }
    }
    report(
        5,
        "mullin-layer",
        t,
        &format!("counts 2/10, {walks_checked} walks round-tripped, exact"),
    );
}

/// 6. Boundary-count exponent: slope of log E[#boundary cells] against
/// log(1/eps) over eps in 2^-8 .. 2^-16, 200 replicates, within 0.5 +- 0.1.
#[test]
fn acceptance_06_boundary_count_exponent() {
    let t = Instant::now();
    let mut config = ExperimentConfig::new(
        ExperimentKind::BoundaryCount,
        sqrt2(),
        (8..=16).collect(),
        200,
        606,
    );
    config.samples_per_cell = 1;
    let result = run_experiment(&config).unwrap();
    let slope = result.fit.unwrap().slope;
    assert!(
        (0.4..=0.6).contains(&slope),
        "slope {slope} outside 0.5 +- 0.1"
    );
    report(6, "boundary-count-exponent", t, &format!("slope {slope:.4} in [0.4, 0.6]"));
}

/// 7. Cut-cell exponent: gamma = sqrt 3 slope within 1/3 +- 0.15 on a
/// coupled dyadic grid; gamma = sqrt 2 slope <= 0.1 on a grid of coarse
/// cells over a finer path (the simultaneous-minimum count is logarithmic
/// there, so the power-law slope must be near zero). 200 replicates per
/// scale. The criterion pins the windows, not the grids.
#[test]
fn acceptance_07_cut_cell_exponent() {
    let t = Instant::now();
    let mut config = ExperimentConfig::new(
        ExperimentKind::CutCells,
        sqrt3(),
        (6..=14).collect(),
        200,
        707,
    );
    config.samples_per_cell = 16;
    let result = run_experiment(&config).unwrap();
    let slope3 = result.fit.unwrap().slope;
    let target = 1.0 / 3.0;
    assert!(
        (target - 0.15..=target + 0.15).contains(&slope3),
        "sqrt3 slope {slope3} outside 1/3 +- 0.15"
    );

    let mut config = ExperimentConfig::new(
        ExperimentKind::CutCells,
        sqrt2(),
        (5..=13).collect(),
        200,
        708,
    );
    // keep every cell far above the sample resolution: the discrete walk
    // has ~log-many spurious simultaneous minima at sample granularity, and
    // only coarse cells measure the continuum count (which is O(1) here)
    config.samples_per_cell = 2048;
    let result = run_experiment(&config).unwrap();
    let slope2 = result.fit.unwrap().slope;
    assert!(slope2 <= 0.1, "sqrt2 slope {slope2} > 0.1");
    report(
        7,
        "cut-cell-exponent",
        t,
        &format!("sqrt3 slope {slope3:.4}, sqrt2 slope {slope2:.4}"),
    );
}

/// 8. Cone-probability exponent at gamma = sqrt 2: slope of log P against
/// log T over T in {1, 2, ..., 64}, 1e5 replicates, within -1 +- 0.15.
#[test]
fn acceptance_08_cone_probability_exponent() {
    let t = Instant::now();
    let mut config = ExperimentConfig::new(
        ExperimentKind::ConeProbability,
        sqrt2(),
        vec![1, 2, 4, 8, 16, 32, 64],
        100_000,
        808,
    );
    config.samples_per_cell = 256;
    config.delta = 0.5;
    let result = run_experiment(&config).unwrap();
    let slope = result.fit.unwrap().slope;
    assert!(
        (-1.15..=-0.85).contains(&slope),
        "slope {slope} outside -1 +- 0.15"
    );
    report(8, "cone-probability-exponent", t, &format!("slope {slope:.4} in -1 +- 0.15"));
}

/// 9. Ball-volume exponent on 2e6-cell windows, radii 8..64, 50
/// replicates: within [d_-(gamma) - 0.5, d_+(gamma) + 0.5] for gamma in
/// {sqrt 2, sqrt(8/3), sqrt 3}, and additionally within [3, 5] for
/// sqrt(8/3).
#[test]
fn acceptance_09_ball_volume_exponent() {
    let t = Instant::now();
    let mut detail = String::new();
    for gamma in [sqrt2(), sqrt_8_3(), sqrt3()] {
        let mut config = ExperimentConfig::new(
            ExperimentKind::BallVolume,
            gamma,
            vec![8, 11, 16, 23, 32, 45, 64],
            50,
            909,
        );
        config.samples_per_cell = 1;
        let result = run_experiment(&config).unwrap();
        let slope = result.fit.unwrap().slope;
        let dm = bounds::d_minus(gamma).unwrap();
        let dp = bounds::d_plus(gamma).unwrap();
        assert!(
            (dm - 0.5..=dp + 0.5).contains(&slope),
            "gamma {gamma}: slope {slope} outside [{}, {}]",
            dm - 0.5,
            dp + 0.5
        );
        if (gamma - sqrt_8_3()).abs() < 1e-12 {
            assert!(
                (3.0..=5.0).contains(&slope),
                "pure gravity slope {slope} outside [3, 5]"
            );
        }
        detail.push_str(&format!("g={gamma:.3}: {slope:.3}; "));
    }
    report(9, "ball-volume-exponent", t, detail.trim_end_matches("; "));
}

/// 10. Diameter-scaling exponent over n in 6..12 with exact diameters, 200
/// replicates per scale: chi_lower(gamma) - 0.1 <= chi-hat <= 0.55 for
/// gamma in {sqrt 2, sqrt(8/3), sqrt 3}; coupled monotonicity holds on
/// every replicate.
#[test]
fn acceptance_10_chi_bounds() {
    let t = Instant::now();
    let mut detail = String::new();
    for gamma in [sqrt2(), sqrt_8_3(), sqrt3()] {
        let config = ExperimentConfig::new(
            ExperimentKind::DiameterScaling,
            gamma,
            (6..=12).collect(),
            200,
            1010,
        );
        let result = run_experiment(&config).unwrap();
        let chi = result.fit.unwrap().slope;
        let lo = bounds::chi_lower(gamma).unwrap() - 0.1;
        assert!(
            (lo..=0.55).contains(&chi),
            "gamma {gamma}: chi {chi} outside [{lo}, 0.55]"
        );
        assert!(
            result.notes[0].contains("violations: 0"),
            "coupled monotonicity violated: {:?}",
            result.notes
        );
        detail.push_str(&format!("g={gamma:.3}: {chi:.3} >= {lo:.3}; "));
    }
    report(10, "chi-bounds", t, detail.trim_end_matches("; "));
}

/// 11. Submultiplicativity with C = 1: for the admissible pairs with n in
/// 6..10, m in 2..4 and n^(2/3) <= m, the estimated E[D_{n+m}] is at most
/// n^5 E[D_n] E[D_m]. 200 replicates per scale.
#[test]
fn acceptance_11_submultiplicativity() {
    let t = Instant::now();
    let config = ExperimentConfig::new(
        ExperimentKind::Submultiplicativity,
        sqrt2(),
        (6..=10).collect(),
        200,
        1111,
    );
    let result = run_experiment(&config).unwrap();
    assert!(!result.ratios.is_empty());
    for r in &result.ratios {
        assert!(
            r.pass,
            "pair (n={}, m={}): lhs {} > rhs {}",
            r.n, r.m, r.lhs, r.rhs
        );
    }
    let detail: Vec<String> = result
        .ratios
        .iter()
        .map(|r| format!("({},{}) ratio {:.1e}", r.n, r.m, r.ratio))
        .collect();
    report(11, "submultiplicativity", t, &detail.join(", "));
}

/// 12. Re-subdivision stability: on every lattice walk with at most 6 unit
/// cells, refining any single coarse cell (m = 1, two-sample cells split in
/// two) changes no vertex distance by more than 2^1 = 2, over every pair of
/// boundary-vector-compatible refinements. Exhaustive and exact.
#[test]
fn acceptance_12_resubdivision_stability() {
    let t = Instant::now();
    let mut checked = 0usize;
    let mut max_seen = 0u32;
    for n in 1..=3usize {
        for walk in mullin::enumerate_quadrant_walks(n).unwrap() {
            let path = mullin::walk_to_path(&walk);
            let cells = CellDecomposition::new(2, n).unwrap();
            for c in 0..n {
                let r = resubdivision_stability_check(&path, cells, &[c], 1).unwrap();
                assert!(
                    r.max_difference <= 2,
                    "walk {} cell {c}: difference {}",
                    mullin::walk_to_string(&walk),
                    r.max_difference
                );
                max_seen = max_seen.max(r.max_difference);
                checked += 1;
            }
        }
    }
    report(
        12,
        "resubdivision-stability",
        t,
        &format!("{checked} cell refinements, max difference {max_seen} <= 2"),
    );
}

/// 13. Bounds-table consistency: d_-(gamma) <= watabiki(gamma) <=
/// d_+(gamma) and xi_- = 1/d_+ on a 100-point gamma grid, to 1e-12.
#[test]
fn acceptance_13_bounds_table_consistency() {
    let t = Instant::now();
    let r = bounds::bounds_grid_consistency(100, 1e-12);
    assert!(r.pass, "{r:?}");
    report(
        13,
        "bounds-table-consistency",
        t,
        &format!(
            "max sandwich violation {:.1e}, max identity error {:.1e}",
            r.max_sandwich_violation, r.max_xi_identity_error
        ),
    );
}

/// Distances measured by BFS agree with the all-pairs oracle on a sampled
/// instance (supporting check for the distance machinery the criteria
/// lean on).
#[test]
fn supporting_bfs_vs_all_pairs() {
    let params = GammaParams::new(sqrt_8_3()).unwrap();
    let path =
        sample_path(&params, PathKind::Unconditioned, 512, 1e-3, SeedSpec::new(1414, 0)).unwrap();
    let cells = CellDecomposition::new(2, 256).unwrap();
    let g = build_graph(&path, cells, GraphMode::ContinuousRule).unwrap();
    let apd = oracle::all_pairs_reference(&g);
    for v in [0usize, 100, 255] {
        assert_eq!(sssp(&g, &[v]).unwrap().dist, apd[v]);
    }
}
