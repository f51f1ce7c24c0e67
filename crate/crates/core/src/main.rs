use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use costgreedy::costs::CostModel;
use costgreedy::harness::{self, DegreeSpec, ExperimentConfig, ExperimentKind};
use costgreedy::oracle::{self, ReportRow};
use costgreedy::rng::{derive_path, derive_seed, tag};
use costgreedy::search::{StepperContext, StepperRegistry, ZeroWeighting};
use costgreedy::topology::{generate_graph, CostGraph, GraphSpec, ShortcutLaw};
use costgreedy::weights::{
    self, DegreeConditioning, EstimationConfig, EstimationMode, FittedWeights,
};

#[derive(Parser)]
#[command(
    name = "costgreedy",
    version,
    about = "Cost-greedy search on random small-world cost graphs"
)]
struct Cli {
    /// Plain-text `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (or file for `generate`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as text.
    Generate(GraphArgs),
    /// Fit cost-greedy weights on one graph.
    Weights(WeightsArgs),
    /// Run a named experiment and write CSV, SVG and gnuplot files.
    Experiment {
        #[arg(value_parser = parse_kind)]
        name: ExperimentKind,
    },
    /// Run a verifier and write its report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, default_value_t = 1024)]
    n: u32,
    /// `log2`, `constant:q`, `two-type:a,p,b` or `power-law:t`.
    #[arg(long, default_value = "log2")]
    degree: String,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
}

#[derive(Args)]
struct WeightsArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// `constant:c`, `exp:r`, `twopoint` or `table:v,p;v,p`.
    #[arg(long, default_value = "exp:1")]
    cost: String,
    #[arg(long, default_value_t = 10)]
    rounds: usize,
    #[arg(long, default_value_t = 20)]
    queries_multiplier: usize,
    #[arg(long, default_value_t = 1)]
    k_z: usize,
    /// Split the weights by log2 degree class.
    #[arg(long)]
    by_degree: bool,
    /// Exact per-target weights; finite-support costs and small graphs only.
    #[arg(long)]
    exact: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    /// Policy enumeration, convergence and regret bounds on tiny instances.
    Tiny,
    /// `E[R] = E[C_min] E[S]` by simulation.
    Wald,
    /// Mean cost against `log n log d` across sizes.
    Scaling,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    /// Number of tiny instances.
    #[arg(long, default_value_t = 20)]
    instances: usize,
    /// Queries for the simulation checks.
    #[arg(long, default_value_t = 100_000)]
    queries: usize,
    /// Sizes for the scaling check.
    #[arg(long, default_value = "2^10,2^12,2^14")]
    sizes: String,
    /// Shortcut law for the scaling check.
    #[arg(long, default_value = "log2")]
    degree: String,
}

fn parse_kind(s: &str) -> Result<ExperimentKind, String> {
    s.parse().map_err(|e: costgreedy::Error| e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn build_graph(args: &GraphArgs, seed: u64) -> anyhow::Result<CostGraph> {
    let degree: DegreeSpec = args.degree.parse()?;
    Ok(generate_graph(&GraphSpec {
        n: args.n,
        alpha: args.alpha,
        shortcuts: degree.law_for(args.n),
        seed: derive_seed(seed, tag::GRAPH),
    })?)
}

fn require_seed(cli: &Cli) -> anyhow::Result<u64> {
    cli.seed.context("--seed is required")
}

/// Returns whether every check passed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Generate(args) => {
            let g = build_graph(args, require_seed(&cli)?)?;
            match &cli.out {
                Some(path) => g.write_text(BufWriter::new(fs::File::create(path)?))?,
                None => g.write_text(std::io::stdout().lock())?,
            }
            Ok(true)
        }
        Command::Weights(args) => {
            let seed = require_seed(&cli)?;
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            fs::create_dir_all(&out)?;
            fit_weights(args, seed, &out)?;
            Ok(true)
        }
        Command::Experiment { name } => {
            let text = match &cli.config {
                Some(p) => {
                    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
                }
                None => String::new(),
            };
            let mut cfg = ExperimentConfig::from_text(&text, Some(*name), cli.seed)?;
            if let Some(out) = &cli.out {
                cfg.out = out.clone();
            }
            let output = harness::run_experiment(&cfg)?;
            harness::write_rows_csv(&output.rows(), std::io::stdout().lock())?;
            for f in &output.files {
                eprintln!("wrote {}", f.display());
            }
            Ok(true)
        }
        Command::Verify(args) => {
            let seed = require_seed(&cli)?;
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            fs::create_dir_all(&out)?;
            let rows = verify(args, seed)?;
            let path = out.join(format!("verify-{}.csv", check_name(args.check)));
            oracle::write_report(&rows, BufWriter::new(fs::File::create(&path)?))?;
            oracle::write_report(&rows, std::io::stdout().lock())?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            eprintln!(
                "{} checks, {failed} failed; wrote {}",
                rows.len(),
                path.display()
            );
            Ok(failed == 0)
        }
    }
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Tiny => "tiny",
        Check::Wald => "wald",
        Check::Scaling => "scaling",
    }
}

fn fit_weights(args: &WeightsArgs, seed: u64, out: &Path) -> anyhow::Result<()> {
    let g = build_graph(&args.graph, seed)?;
    let model: CostModel = args.cost.parse()?;
    let conditioning = if args.by_degree {
        DegreeConditioning::Log2Shortcuts
    } else {
        DegreeConditioning::None
    };
    let cfg = EstimationConfig {
        queries_per_round: Some(args.queries_multiplier * g.n() as usize),
        rounds: args.rounds,
        k_z: args.k_z,
        conditioning,
        seed: derive_path(seed, &[tag::TRAIN]),
        initial: None,
    };
    let mode = if args.exact {
        EstimationMode::Exact
    } else {
        EstimationMode::Empirical
    };
    let estimate = weights::iterate_to_fixpoint(&g, &model, &cfg, mode)?;
    weights::write_diagnostics_csv(&estimate.rounds, fs::File::create(out.join("rounds.csv"))?)?;
    match &estimate.weights {
        FittedWeights::Compressed(w) => w.write_csv(fs::File::create(out.join("weights.csv"))?)?,
        FittedWeights::Full(table) => {
            let mut f = BufWriter::new(fs::File::create(out.join("weights.csv"))?);
            writeln!(f, "target,vertex,weight")?;
            for z in g.vertices() {
                for x in g.vertices() {
                    writeln!(f, "{z},{x},{}", table.get(x, z))?;
                }
            }
        }
    }
    weights::write_diagnostics_csv(&estimate.rounds, std::io::stdout().lock())?;
    Ok(())
}

fn verify(args: &VerifyArgs, seed: u64) -> anyhow::Result<Vec<ReportRow>> {
    match args.check {
        Check::Tiny => Ok(oracle::tiny_suite(args.instances, seed)?),
        Check::Wald => {
            let g = generate_graph(&GraphSpec {
                n: 1 << 12,
                alpha: 1.0,
                shortcuts: ShortcutLaw::Constant(7),
                seed: derive_seed(seed, tag::GRAPH),
            })?;
            let model = CostModel::Exponential { rate: 1.0 };
            let registry = StepperRegistry::with_builtins();
            let mut rows = Vec::new();
            for name in ["greedy", "lowest-cost"] {
                let stepper = registry.create(name, &StepperContext { cost_model: &model })?;
                let r = oracle::verify_wald(
                    &g,
                    &model,
                    stepper.as_ref(),
                    &ZeroWeighting,
                    args.queries,
                    derive_seed(seed, tag::EVAL),
                )?;
                rows.push(ReportRow::new(
                    "wald",
                    name,
                    r.mean_gap,
                    3.0 * r.gap_std_err,
                    r.pass(),
                ));
            }
            Ok(rows)
        }
        Check::Scaling => {
            let sizes = harness::config::parse_sizes(&args.sizes)?;
            if sizes.len() < 3 {
                bail!("the scaling check needs at least three sizes");
            }
            let cfg = EstimationConfig {
                seed,
                ..Default::default()
            };
            let degree: DegreeSpec = args.degree.parse()?;
            let law = match degree {
                DegreeSpec::Log2 => None,
                DegreeSpec::Law(law) => Some(law),
            };
            let report = oracle::verify_scaling(
                &sizes,
                law.as_ref(),
                &CostModel::Exponential { rate: 1.0 },
                &cfg,
                10,
            )?;
            let mut rows: Vec<ReportRow> = report
                .points
                .iter()
                .map(|p| {
                    ReportRow::new(
                        "scaling_ratio",
                        format!("n{}", p.n),
                        p.ratio,
                        f64::NAN,
                        true,
                    )
                })
                .collect();
            rows.push(ReportRow::new(
                "scaling_spread",
                "top3",
                report.spread,
                0.25,
                report.pass(),
            ));
            Ok(rows)
        }
    }
}
