use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use submod_cli::bench::{run_bench, BenchConfig};
use submod_cli::io::{self, InstanceFile, Sidecar};
use submod_core::families::{gen_coverage, gen_facility, gen_hypergraph, CostLaw};
use submod_core::matroid::{Matroid, DEFAULT_BUDGET};
use submod_core::optimize::{greedy_cardinality, lazy_greedy, GreedyTrace};
use submod_core::sparsify::{estimate, kappa_for, sample_sparsifier, PiStrategy, SparsifyConfig};
use submod_core::verify::{verify_all_subsets, verify_lovasz, verify_matroid, VerificationReport};
use submod_core::{DecomposableFunction, SetFunction, SparsifierWeights};

const EXIT_FAIL: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Sparsify decomposable submodular functions and check the result.
#[derive(Parser)]
#[command(name = "submod", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Convert external CSV data to an instance file.
    #[command(subcommand)]
    Import(ImportCommand),
    /// Sample a sparsifier and write its weights.
    Sparsify(SparsifyArgs),
    /// Run greedy under a cardinality constraint on F and optionally on F'.
    Maximize(MaximizeArgs),
    /// Check the sandwich bound; exits 0 on pass and 1 on failure.
    Verify(VerifyArgs),
    /// Sweep epsilon and record size and greedy quality per trial.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    Coverage {
        #[arg(long)]
        sets: usize,
        #[arg(long)]
        universe: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    Facility {
        #[arg(long)]
        facilities: usize,
        #[arg(long)]
        clients: usize,
        #[arg(long, value_enum, default_value_t = Law::Uniform)]
        law: Law,
        #[arg(long, default_value_t = 6)]
        centers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    Hypergraph {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    Uniform,
    Clustered,
}

#[derive(Subcommand)]
enum ImportCommand {
    /// `component_id,ground_id` incidence list to a coverage instance.
    Edges {
        csv: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// `lat,lon` pickups and candidate locations to a facility instance.
    Pickups {
        pickups: PathBuf,
        locations: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Pi {
    Exact,
    ExactMatroid,
    Closed,
    Upper,
}

impl From<Pi> for PiStrategy {
    fn from(p: Pi) -> Self {
        match p {
            Pi::Exact => PiStrategy::Exact,
            Pi::ExactMatroid => PiStrategy::ExactMatroid,
            Pi::Closed => PiStrategy::Closed,
            Pi::Upper => PiStrategy::UpperMonotone,
        }
    }
}

#[derive(Args)]
struct SparsifyArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = Pi::Exact)]
    pi: Pi,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `uniform:K` or a partition-matroid JSON file.
    #[arg(long)]
    matroid: Option<String>,
    #[arg(long)]
    allow_large_epsilon: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Weights CSV; the sidecar goes next to it with a `.json` suffix.
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct MaximizeArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    weights: Option<PathBuf>,
    #[arg(long, short)]
    k: usize,
    #[arg(long)]
    lazy: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Subsets,
    Lovasz,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    weights: PathBuf,
    /// Defaults to the value in the weights sidecar.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    matroid: Option<String>,
    #[arg(long, value_enum, default_value_t = Check::Subsets)]
    check: Check,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Report path; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2,4")]
    epsilons: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, short)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = Pi::Closed)]
    pi: Pi,
    /// Write zero runtimes so the output is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, short)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// `SUBMOD_THREADS` caps the rayon worker count.
fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("SUBMOD_THREADS") {
        let n: usize = v.parse().with_context(|| format!("SUBMOD_THREADS={v:?} is not a number"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    use submod_core::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::BudgetExceeded { .. } | E::TooLargeForExhaustive { .. }) => EXIT_BUDGET,
        Some(E::InvalidParameter(_) | E::IncompatibleMode { .. } | E::NotMonotone(_)) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Gen(g) => gen(g).map(|_| 0),
        Command::Import(i) => import(i).map(|_| 0),
        Command::Sparsify(a) => sparsify(a).map(|_| 0),
        Command::Maximize(a) => maximize(a).map(|_| 0),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a).map(|_| 0),
    }
}

fn gen(cmd: GenCommand) -> Result<()> {
    let (file, out) = match cmd {
        GenCommand::Coverage { sets, universe, density, seed, out } => {
            (InstanceFile::from_coverage(&gen_coverage(seed, sets, universe, density)?), out)
        }
        GenCommand::Facility { facilities, clients, law, centers, seed, out } => {
            let law = match law {
                Law::Uniform => CostLaw::Uniform,
                Law::Clustered => CostLaw::Clustered { centers },
            };
            (InstanceFile::from_facility(&gen_facility(seed, facilities, clients, law)?), out)
        }
        GenCommand::Hypergraph { vertices, edges, max_size, seed, out } => {
            (InstanceFile::from_hypergraph(&gen_hypergraph(seed, vertices, edges, max_size)?), out)
        }
    };
    io::write_json(&out, &file)
}

fn import(cmd: ImportCommand) -> Result<()> {
    match cmd {
        ImportCommand::Edges { csv, out } => io::write_json(&out, &InstanceFile::from_coverage(&io::import_edges(&csv)?)),
        ImportCommand::Pickups { pickups, locations, out } => {
            io::write_json(&out, &InstanceFile::from_facility(&io::import_pickups(&pickups, &locations)?))
        }
    }
}

fn load(path: &Path) -> Result<DecomposableFunction> {
    io::read_instance(path)?.to_function()
}

fn load_matroid(arg: Option<&str>, n: usize) -> Result<Option<Box<dyn Matroid>>> {
    arg.map(|a| io::parse_matroid(a, n)).transpose()
}

fn sparsify(a: SparsifyArgs) -> Result<()> {
    let f = load(&a.input)?;
    let matroid = load_matroid(a.matroid.as_deref(), f.n())?;
    let config = SparsifyConfig {
        allow_large_epsilon: a.allow_large_epsilon,
        budget: a.budget,
        ..SparsifyConfig::new(a.epsilon, a.delta, a.seed, a.pi.into())
    };
    config.validate()?;
    let p = estimate(&f, config.pi, matroid.as_deref(), config.budget)?;
    let kappa = kappa_for(&f, matroid.as_deref(), config.epsilon, config.delta)?;
    let w = sample_sparsifier(&p, kappa, config.seed)?;
    if !config.guaranteed() {
        eprintln!("warning: epsilon > 1, the sandwich bound is not guaranteed");
    }
    io::write_weights(&a.out, &w)?;
    let expected_size = p.p_hat().iter().map(|x| (kappa * x).min(1.0)).sum();
    let sidecar = Sidecar {
        epsilon: config.epsilon,
        delta: config.delta,
        kappa,
        sum_p: p.sum_p(),
        expected_size,
        size: w.size(),
        n: f.n(),
        n_components: f.num_components(),
        mode: p.mode().as_str().to_string(),
        seed: config.seed,
        guaranteed: config.guaranteed(),
        matroid: a.matroid,
    };
    io::write_json(&io::sidecar_path(&a.out), &sidecar)
}

#[derive(Serialize)]
struct Run {
    chosen: Vec<usize>,
    /// Objective greedy maximized (`F'` for the sparse run).
    objective_value: f64,
    /// `F` on the chosen set.
    full_value: f64,
    evals: usize,
    oracle_calls: usize,
}

#[derive(Serialize)]
struct MaximizeReport {
    k: usize,
    full: Run,
    sparse: Option<Run>,
    /// Oracle calls of the sparse run relative to the full run.
    oracle_ratio: Option<f64>,
}

fn maximize(a: MaximizeArgs) -> Result<()> {
    let f = load(&a.input)?;
    let solve = |g: &dyn SetFunction| -> Result<GreedyTrace> {
        Ok(if a.lazy { lazy_greedy(g, a.k)? } else { greedy_cardinality(g, a.k)? })
    };
    let to_run = |t: GreedyTrace| -> Result<Run> {
        let full_value = f.eval_sum(t.set())?;
        Ok(Run { full_value, objective_value: t.value, evals: t.evals, oracle_calls: t.oracle_calls, chosen: t.chosen })
    };
    let full = to_run(solve(&f)?)?;
    let sparse = match &a.weights {
        Some(path) => {
            let w = io::read_weights(path, f.num_components())?;
            Some(to_run(solve(&f.weighted(&w)?)?)?)
        }
        None => None,
    };
    let oracle_ratio = sparse.as_ref().map(|s| s.oracle_calls as f64 / full.oracle_calls.max(1) as f64);
    println!("{}", serde_json::to_string_pretty(&MaximizeReport { k: a.k, full, sparse, oracle_ratio })?);
    Ok(())
}

fn read_sidecar_epsilon(weights: &Path) -> Result<f64> {
    let path = io::sidecar_path(weights);
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("no --epsilon given and no sidecar at {}", path.display()))?;
    let sidecar: Sidecar = serde_json::from_str(&text)?;
    Ok(sidecar.epsilon)
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let f = load(&a.input)?;
    let w: SparsifierWeights = io::read_weights(&a.weights, f.num_components())?;
    let epsilon = match a.epsilon {
        Some(e) => e,
        None => read_sidecar_epsilon(&a.weights)?,
    };
    let matroid = load_matroid(a.matroid.as_deref(), f.n())?;
    let report: VerificationReport = match (a.check, matroid) {
        (Check::Subsets, None) => verify_all_subsets(&f, &w, epsilon)?,
        (Check::Subsets, Some(m)) => verify_matroid(&f, &w, epsilon, m.as_ref(), a.budget)?,
        (Check::Lovasz, None) => verify_lovasz(&f, &w, epsilon, a.samples, a.seed)?,
        (Check::Lovasz, Some(_)) => bail!(submod_core::Error::IncompatibleMode {
            mode: "lovasz".into(),
            reason: "the continuous check has no matroid form".into(),
        }),
    };
    let json = serde_json::to_string_pretty(&report)?;
    match &a.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(if report.pass { 0 } else { EXIT_FAIL })
}

fn bench(a: BenchArgs) -> Result<()> {
    let f = load(&a.input)?;
    let cfg = BenchConfig {
        epsilons: a.epsilons,
        trials: a.trials,
        k: a.k,
        seed: a.seed,
        delta: a.delta,
        pi: a.pi.into(),
        timing: !a.no_timing,
    };
    let rows = run_bench(&f, &cfg)?;
    let mut out = csv::Writer::from_path(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for row in &rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}
