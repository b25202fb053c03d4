mod selftest;

use clap::{Args, Parser, Subcommand};
use mated_crt::error::Error;
use mated_crt::estimators::experiment::{
    run_experiment, ExperimentConfig, ExperimentKind, ExperimentResult,
};
use mated_crt::estimators::exponent_bounds;
use mated_crt::graph::{build_graph, CellDecomposition, GraphMode};
use mated_crt::metrics::DiameterMethod;
use mated_crt::mullin;
use mated_crt::paths::{sample_lattice_walk, sample_path, LatticeMethod, PathKind};
use mated_crt::reroot::RerootStatistic;
use mated_crt::rng::SeedSpec;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Simulate mated-CRT structure graphs and estimate their scaling exponents.
#[derive(Parser)]
#[command(name = "mcrt", version, about)]
struct Cli {
    /// Cap on worker threads (default: available hardware parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one structure graph and dump its edge list ("i j label", 1-based)
    Simulate(SimulateArgs),
    /// Run a Monte Carlo experiment from a JSON config and/or flags
    Experiment(ExperimentArgs),
    /// Print the closed-form exponent bounds for a list of gamma values
    Bounds(BoundsArgs),
    /// Enumerate, round-trip, or decode quadrant lattice walks
    Mullin {
        #[command(subcommand)]
        action: MullinAction,
    },
    /// Run the full invariant suite; fails the process if any check fails
    Selftest,
}

#[derive(Args)]
struct SimulateArgs {
    /// Coupling constant for a Brownian path
    #[arg(long, conflicts_with = "lattice_n")]
    gamma: Option<f64>,
    /// Sample a uniform quadrant lattice walk with this many map edges
    #[arg(long)]
    lattice_n: Option<usize>,
    /// Path kind for Brownian simulation
    #[arg(long, default_value = "unconditioned")]
    kind: String,
    /// Number of cells
    #[arg(long, default_value_t = 256)]
    cells: usize,
    /// Samples per cell
    #[arg(long, default_value_t = 4)]
    samples_per_cell: usize,
    /// Master seed (falls back to MCRT_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Comma-separated scale list, or an inclusive range like 6..12
    #[arg(long)]
    scales: Option<String>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Master seed (falls back to MCRT_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples_per_cell: Option<usize>,
    /// exact | double-sweep:<rounds>
    #[arg(long)]
    diameter_method: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    pivot_fraction: Option<f64>,
    /// diameter | root-degree
    #[arg(long)]
    statistic: Option<String>,
    #[arg(long)]
    window_cells: Option<usize>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json | plot
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct BoundsArgs {
    /// Comma-separated gamma values
    #[arg(long, required = true)]
    gamma: String,
    /// text | csv | json
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum MullinAction {
    /// Print every quadrant walk with n map edges, one EWNS line each
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Verify the tree-encoding round trip on every walk with n map edges
    Roundtrip {
        #[arg(long)]
        n: usize,
    },
    /// Decode one walk: contour pair plus triangle-graph edge list
    Decode {
        #[arg(long)]
        walk: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit 2; the documented contract is usage -> 1,
            // except for --help/--version which remain success
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    #[cfg(feature = "parallel")]
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("mcrt: could not configure {jobs} worker threads: {e}");
        }
    }
    #[cfg(not(feature = "parallel"))]
    if cli.jobs.is_some() {
        eprintln!("mcrt: built without the parallel feature; --jobs ignored");
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mcrt: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        Command::Simulate(args) => simulate(args),
        Command::Experiment(args) => experiment(args),
        Command::Bounds(args) => bounds(args),
        Command::Mullin { action } => mullin_cmd(action),
        Command::Selftest => Ok(if selftest::run_all() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(2)
        }),
    }
}

fn seed_or_env(seed: Option<u64>) -> Result<u64, Error> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("MCRT_SEED") {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::Config(format!("MCRT_SEED is not a 64-bit integer: '{v}'"))),
        Err(_) => Ok(0),
    }
}

fn write_out(out: Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}

fn simulate(args: SimulateArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let seed = SeedSpec::new(seed_or_env(args.seed)?, 0);
    let (path, cells, mode) = if let Some(n) = args.lattice_n {
        let path = sample_lattice_walk(n, seed, LatticeMethod::Rejection)?;
        let cells = CellDecomposition::new(1, 2 * n)?;
        (path, cells, GraphMode::LatticeRule)
    } else {
        let gamma = args
            .gamma
            .ok_or_else(|| Error::Config("simulate needs --gamma or --lattice-n".into()))?;
        let params = mated_crt::GammaParams::new(gamma).map_err(|e| Error::Config(e.to_string()))?;
        let kind = match args.kind.as_str() {
            "unconditioned" => PathKind::Unconditioned,
            "bridge" => PathKind::Bridge,
            "excursion" => PathKind::Excursion,
            "meander" => PathKind::Meander,
            other => return Err(Error::Config(format!("unknown path kind '{other}'")).into()),
        };
        let steps = args.cells * args.samples_per_cell;
        let path = sample_path(&params, kind, steps, 1.0 / steps as f64, seed)?;
        let cells = CellDecomposition::new(args.samples_per_cell, args.cells)?;
        (path, cells, GraphMode::ContinuousRule)
    };
    let graph = build_graph(&path, cells, mode)?;
    write_out(args.out, &graph.dump_edge_list())?;
    Ok(ExitCode::SUCCESS)
}

fn parse_scales(spec: &str) -> Result<Vec<u32>, Error> {
    let spec = spec.trim();
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u32 = lo
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad scale range '{spec}'")))?;
        let hi: u32 = hi
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad scale range '{spec}'")))?;
        if lo > hi {
            return Err(Error::Config(format!("empty scale range '{spec}'")));
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad scale '{tok}'")))
        })
        .collect()
}

fn parse_diameter_method(spec: &str) -> Result<DiameterMethod, Error> {
    if spec == "exact" {
        return Ok(DiameterMethod::Exact);
    }
    if let Some(rounds) = spec.strip_prefix("double-sweep:") {
        let rounds: u32 = rounds
            .parse()
            .map_err(|_| Error::Config(format!("bad double-sweep rounds '{rounds}'")))?;
        return Ok(DiameterMethod::DoubleSweep(rounds));
    }
    Err(Error::Config(format!(
        "unknown diameter method '{spec}' (want exact or double-sweep:<rounds>)"
    )))
}

fn experiment(args: ExperimentArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut config: ExperimentConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("bad config {}: {e}", path.display())))?
        }
        None => {
            let kind = args
                .kind
                .as_deref()
                .ok_or_else(|| Error::Config("need --config or --kind".into()))?;
            let gamma = args
                .gamma
                .ok_or_else(|| Error::Config("need --gamma (or a config file)".into()))?;
            let scales = parse_scales(
                args.scales
                    .as_deref()
                    .ok_or_else(|| Error::Config("need --scales (or a config file)".into()))?,
            )?;
            let replicates = args
                .replicates
                .ok_or_else(|| Error::Config("need --replicates (or a config file)".into()))?;
            ExperimentConfig::new(
                ExperimentKind::parse(kind)?,
                gamma,
                scales,
                replicates,
                seed_or_env(args.seed)?,
            )
        }
    };
    // flags override config-file fields
    if let Some(kind) = &args.kind {
        config.kind = ExperimentKind::parse(kind)?;
    }
    if let Some(gamma) = args.gamma {
        config.gamma = gamma;
    }
    if let Some(scales) = &args.scales {
        config.scales = parse_scales(scales)?;
    }
    if let Some(replicates) = args.replicates {
        config.replicates = replicates;
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(k) = args.samples_per_cell {
        config.samples_per_cell = k;
    }
    if let Some(m) = &args.diameter_method {
        config.diameter_method = parse_diameter_method(m)?;
    }
    if let Some(d) = args.delta {
        config.delta = d;
    }
    if let Some(p) = args.pivot_fraction {
        config.pivot_fraction = p;
    }
    if let Some(s) = &args.statistic {
        config.statistic = match s.as_str() {
            "diameter" => RerootStatistic::Diameter,
            "root-degree" => RerootStatistic::RootDegree,
            other => return Err(Error::Config(format!("unknown statistic '{other}'")).into()),
        };
    }
    if let Some(w) = args.window_cells {
        config.window_cells = w;
    }

    let result = run_experiment(&config)?;
    let rendered = render_result(&result, &args.format)?;
    write_out(args.out, &rendered)?;
    for note in &result.notes {
        eprintln!("note: {note}");
    }
    for check in &result.checks {
        eprintln!(
            "check {}: value {:.6} window [{:.6}, {:.6}] -> {}",
            check.name,
            check.value,
            check.lo,
            check.hi,
            if check.pass { "pass" } else { "FAIL" }
        );
    }
    for ratio in &result.ratios {
        eprintln!(
            "ratio (n={}, m={}): {:.3e} -> {}",
            ratio.n,
            ratio.m,
            ratio.ratio,
            if ratio.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(if result.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn render_result(result: &ExperimentResult, format: &str) -> Result<String, Error> {
    match format {
        "csv" => Ok(result.to_csv()),
        "json" => Ok(result.to_json()),
        "plot" => Ok(result.to_plot()),
        other => Err(Error::Config(format!("unknown format '{other}'"))),
    }
}

fn bounds(args: BoundsArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let gammas: Result<Vec<f64>, Error> = args
        .gamma
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad gamma '{tok}'")))
        })
        .collect();
    let gammas = gammas?;
    let tables: Result<Vec<_>, _> = gammas.iter().map(|&g| exponent_bounds(g)).collect();
    let tables = tables?;
    let mut out = String::new();
    match args.format.as_str() {
        "text" => {
            out.push_str("gamma        watabiki_d   d_minus      d_plus       xi_minus     chi_lower    chi_upper\n");
            for t in &tables {
                out.push_str(&format!(
                    "{:<12.6} {:<12.6} {:<12.6} {:<12.6} {:<12.6} {:<12.6} {:<12.6}\n",
                    t.gamma, t.watabiki_d, t.d_minus, t.d_plus, t.xi_minus, t.chi_lower, t.chi_upper
                ));
            }
        }
        "csv" => {
            out.push_str("gamma,watabiki_d,d_minus,d_plus,xi_minus,chi_lower,chi_upper\n");
            for t in &tables {
                out.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    t.gamma, t.watabiki_d, t.d_minus, t.d_plus, t.xi_minus, t.chi_lower, t.chi_upper
                ));
            }
        }
        "json" => {
            out = serde_json::to_string_pretty(&tables).expect("tables serialize");
            out.push('\n');
        }
        other => return Err(Error::Config(format!("unknown format '{other}'")).into()),
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn mullin_cmd(action: MullinAction) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match action {
        MullinAction::Enumerate { n } => {
            for walk in mullin::enumerate_quadrant_walks(n)? {
                println!("{}", mullin::walk_to_string(&walk));
            }
        }
        MullinAction::Roundtrip { n } => {
            let walks = mullin::enumerate_quadrant_walks(n)?;
            for walk in &walks {
                let path = mullin::walk_to_path(walk);
                let pair = mullin::walk_to_trees(&path)?;
                let back = mullin::trees_to_walk(&pair)?;
                if back != path {
                    eprintln!("round trip failed for {}", mullin::walk_to_string(walk));
                    return Ok(ExitCode::from(2));
                }
            }
            println!("{} walks round-tripped OK", walks.len());
        }
        MullinAction::Decode { walk } => {
            let steps = mullin::walk_from_string(&walk)?;
            let path = mullin::walk_to_path(&steps);
            let pair = mullin::walk_to_trees(&path)?;
            let contour = |v: &[i64]| {
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
            };
            println!("d      {}", contour(&pair.d));
            println!("d_star {}", contour(&pair.d_star));
            let graph = mullin::walk_to_triangle_graph(&path)?;
            print!("{}", graph.dump_edge_list());
        }
    }
    Ok(ExitCode::SUCCESS)
}
