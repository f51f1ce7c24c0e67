//! Experiment runner: builds graphs, fits weights on a training query
//! stream, evaluates every algorithm on a held-out batch, and writes CSV
//! rows plus figures.
//!
//! Seeds are derived from the root seed by purpose: graph realizations,
//! training streams and evaluation batches never share a stream, and every
//! algorithm at a given size is evaluated on the same batch.

pub mod config;
pub mod plot;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

pub use config::{DegreeSpec, ExperimentConfig, ExperimentKind};
pub use plot::{emit_plot, gnuplot_script, FigureStyle, Metric, XAxis};

use crate::costs::CostModel;
use crate::decentralized::{
    run_decentralized_experiment, DecentralizedConfig, DecentralizedNetwork,
};
use crate::error::Result;
use crate::rng::{derive_path, tag};
use crate::search::{
    evaluate_batch, BatchStats, StepperContext, StepperRegistry, Weighting, ZeroWeighting,
};
use crate::topology::{generate_graph, CostGraph, GraphSpec};
use crate::weights::{
    estimate_rounds, CompressedWeightVector, DegreeConditioning, EstimationConfig, RoundDiagnostics,
};

/// One line of experiment output.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub size: u32,
    pub algorithm: String,
    pub round: usize,
    pub mean_steps: f64,
    pub mean_cost: f64,
    pub ci95_steps: f64,
    pub ci95_cost: f64,
    pub queries: u64,
}

impl ExperimentRow {
    pub fn from_stats(size: u32, algorithm: &str, round: usize, s: &BatchStats) -> Self {
        Self {
            size,
            algorithm: algorithm.to_string(),
            round,
            mean_steps: s.steps.mean(),
            mean_cost: s.cost.mean(),
            ci95_steps: s.steps.ci95(),
            ci95_cost: s.cost.ci95(),
            queries: s.cost.count,
        }
    }

    fn from_round(size: u32, algorithm: &str, d: &RoundDiagnostics) -> Self {
        Self {
            size,
            algorithm: algorithm.to_string(),
            round: d.round,
            mean_steps: d.mean_steps,
            mean_cost: d.mean_cost,
            ci95_steps: d.ci95_steps,
            ci95_cost: d.ci95_cost,
            queries: d.queries,
        }
    }
}

pub const CSV_HEADER: &str =
    "size,algorithm,round,mean_steps,mean_cost,ci95_steps,ci95_cost,queries";

pub fn write_rows_csv<W: Write>(rows: &[ExperimentRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.size,
            r.algorithm,
            r.round,
            r.mean_steps,
            r.mean_cost,
            r.ci95_steps,
            r.ci95_cost,
            r.queries
        )?;
    }
    Ok(())
}

/// A result row together with the pooled statistics behind it. Stream rows
/// of the decentralized runs have no statistics.
#[derive(Clone, Debug)]
pub struct Cell {
    pub row: ExperimentRow,
    pub stats: Option<BatchStats>,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub cells: Vec<Cell>,
    pub files: Vec<PathBuf>,
}

impl ExperimentOutput {
    pub fn rows(&self) -> Vec<ExperimentRow> {
        self.cells.iter().map(|c| c.row.clone()).collect()
    }

    /// The cell of `algorithm` at `size` with the highest round.
    pub fn find(&self, size: u32, algorithm: &str) -> Option<&Cell> {
        self.cells
            .iter()
            .filter(|c| c.row.size == size && c.row.algorithm == algorithm)
            .max_by_key(|c| c.row.round)
    }

    pub fn find_round(&self, size: u32, algorithm: &str, round: usize) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.row.size == size && c.row.algorithm == algorithm && c.row.round == round)
    }
}

/// Algorithm names used in the output.
pub mod algo {
    pub const GREEDY: &str = "greedy";
    pub const COST_GREEDY: &str = "cost-greedy";
    pub const SJ: &str = "sj";
    pub const DECENTRALIZED: &str = "decentralized";
    /// Per-round diagnostics of the decentralized training stream on the
    /// first graph realization.
    pub const DECENTRALIZED_STREAM: &str = "decentralized-stream";
}

struct Runner<'a> {
    cfg: &'a ExperimentConfig,
    registry: StepperRegistry,
}

/// Accumulates statistics per (algorithm, round) across graph seeds,
/// keeping first-insertion order.
#[derive(Default)]
struct Pool {
    entries: Vec<(String, usize, BatchStats)>,
}

impl Pool {
    fn add(&mut self, algorithm: &str, round: usize, s: &BatchStats) {
        match self
            .entries
            .iter_mut()
            .find(|(a, r, _)| a == algorithm && *r == round)
        {
            Some((_, _, acc)) => acc.merge(s),
            None => self.entries.push((algorithm.to_string(), round, *s)),
        }
    }

    fn cells(self, size: u32) -> impl Iterator<Item = Cell> {
        self.entries.into_iter().map(move |(a, r, s)| Cell {
            row: ExperimentRow::from_stats(size, &a, r, &s),
            stats: Some(s),
        })
    }
}

impl<'a> Runner<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Self {
        Self {
            cfg,
            registry: StepperRegistry::with_builtins(),
        }
    }

    fn graph(&self, n: u32, s: usize) -> Result<CostGraph> {
        generate_graph(&GraphSpec {
            n,
            alpha: 1.0,
            shortcuts: self.cfg.degree.law_for(n),
            seed: derive_path(self.cfg.seed, &[tag::GRAPH, n as u64, s as u64]),
        })
    }

    fn training(&self, n: u32, s: usize, rounds: usize) -> EstimationConfig {
        EstimationConfig {
            queries_per_round: Some(self.cfg.queries_multiplier * n as usize),
            rounds,
            k_z: self.cfg.k_z,
            conditioning: self.cfg.degree.conditioning(),
            seed: derive_path(self.cfg.seed, &[tag::TRAIN, n as u64, s as u64]),
            initial: None,
        }
    }

    fn evaluate(
        &self,
        g: &CostGraph,
        s: usize,
        algorithm: &str,
        w: &dyn Weighting,
    ) -> Result<BatchStats> {
        let ctx = StepperContext {
            cost_model: &self.cfg.cost,
        };
        let stepper = self.registry.create(algorithm, &ctx)?;
        let n = g.n();
        let seed = derive_path(self.cfg.seed, &[tag::EVAL, n as u64, s as u64]);
        evaluate_batch(
            g,
            &self.cfg.cost,
            stepper.as_ref(),
            w,
            self.cfg.eval_multiplier * n as usize,
            seed,
        )
    }

    fn fit(&self, g: &CostGraph, s: usize, rounds: usize) -> Result<CompressedWeightVector> {
        Ok(estimate_rounds(
            g,
            &self.cfg.cost,
            &self.training(g.n(), s, rounds),
            |_, _| Ok(()),
        )?
        .0)
    }

    fn run(&self) -> Result<Vec<Cell>> {
        let mut cells = Vec::new();
        for &n in &self.cfg.sizes {
            let mut pool = Pool::default();
            let mut stream: Vec<Cell> = Vec::new();
            for s in 0..self.cfg.graph_seeds {
                let g = self.graph(n, s)?;
                pool.add(
                    algo::GREEDY,
                    0,
                    &self.evaluate(&g, s, algo::GREEDY, &ZeroWeighting)?,
                );
                match self.cfg.experiment {
                    ExperimentKind::Baseline | ExperimentKind::BySize => {
                        let w = self.fit(&g, s, self.cfg.rounds)?;
                        pool.add(
                            algo::COST_GREEDY,
                            self.cfg.rounds,
                            &self.evaluate(&g, s, algo::COST_GREEDY, &w)?,
                        );
                    }
                    ExperimentKind::ByRound => {
                        pool.add(
                            algo::COST_GREEDY,
                            0,
                            &self.evaluate(&g, s, algo::COST_GREEDY, &ZeroWeighting)?,
                        );
                        let mut per_round = Vec::new();
                        estimate_rounds(
                            &g,
                            &self.cfg.cost,
                            &self.training(n, s, self.cfg.rounds),
                            |r, w| {
                                per_round.push((r, self.evaluate(&g, s, algo::COST_GREEDY, w)?));
                                Ok(())
                            },
                        )?;
                        for (r, stats) in per_round {
                            pool.add(algo::COST_GREEDY, r, &stats);
                        }
                    }
                    ExperimentKind::TwoDegree => {
                        pool.add(
                            algo::SJ,
                            0,
                            &self.evaluate(&g, s, algo::SJ, &ZeroWeighting)?,
                        );
                        let w = self.fit(&g, s, self.cfg.rounds)?;
                        pool.add(
                            algo::COST_GREEDY,
                            self.cfg.rounds,
                            &self.evaluate(&g, s, algo::COST_GREEDY, &w)?,
                        );
                    }
                    ExperimentKind::Decentralized | ExperimentKind::General => {
                        let w = self.fit(&g, s, self.cfg.central_rounds)?;
                        pool.add(
                            algo::COST_GREEDY,
                            self.cfg.central_rounds,
                            &self.evaluate(&g, s, algo::COST_GREEDY, &w)?,
                        );
                        let mut net = DecentralizedNetwork::new(g.clone(), self.cfg.m)?;
                        let diagnostics = run_decentralized_experiment(
                            &mut net,
                            &self.cfg.cost,
                            &DecentralizedConfig {
                                rounds: self.cfg.rounds,
                                queries_per_round: Some(self.cfg.queries_multiplier * n as usize),
                                seed: derive_path(
                                    self.cfg.seed,
                                    &[tag::TRAIN, n as u64, s as u64, 1],
                                ),
                            },
                        )?;
                        if s == 0 {
                            stream.extend(diagnostics.iter().map(|d| Cell {
                                row: ExperimentRow::from_round(n, algo::DECENTRALIZED_STREAM, d),
                                stats: None,
                            }));
                        }
                        let eval_seed =
                            derive_path(self.cfg.seed, &[tag::EVAL, n as u64, s as u64]);
                        let queries = self.cfg.eval_multiplier * n as usize;
                        pool.add(
                            algo::DECENTRALIZED,
                            self.cfg.rounds,
                            &net.evaluate_live(&self.cfg.cost, queries, eval_seed)?,
                        );
                    }
                }
            }
            cells.extend(pool.cells(n));
            cells.extend(stream);
        }
        Ok(cells)
    }
}

/// Runs the experiment without writing anything.
pub fn compute_experiment(cfg: &ExperimentConfig) -> Result<Vec<Cell>> {
    cfg.validate()?;
    if cfg.experiment == ExperimentKind::TwoDegree && !cfg.cost.is_constant() {
        return Err(crate::error::Error::Unsupported(format!(
            "the two-degree comparison includes the unit-cost `sj` stepper; cost `{}` is not constant",
            cfg.cost
        )));
    }
    Runner::new(cfg).run()
}

/// Figures written for each experiment.
fn figures(kind: ExperimentKind) -> Vec<(&'static str, FigureStyle, bool)> {
    let fig = |x, metric| FigureStyle { x, metric };
    // (suffix, style, use stream rows instead of evaluation rows)
    match kind {
        ExperimentKind::ByRound => vec![
            ("cost", fig(XAxis::Round, Metric::Cost), false),
            ("steps", fig(XAxis::Round, Metric::Steps), false),
        ],
        ExperimentKind::Decentralized | ExperimentKind::General => vec![
            ("cost", fig(XAxis::Size, Metric::Cost), false),
            ("steps", fig(XAxis::Size, Metric::Steps), false),
            ("stream", fig(XAxis::Round, Metric::Cost), true),
        ],
        _ => vec![
            ("cost", fig(XAxis::Size, Metric::Cost), false),
            ("steps", fig(XAxis::Size, Metric::Steps), false),
        ],
    }
}

/// Runs the experiment and writes `<name>.csv` plus an SVG figure and a
/// gnuplot script per view into `cfg.out`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let cells = compute_experiment(cfg)?;
    fs::create_dir_all(&cfg.out)?;
    let name = cfg.experiment.name();
    let rows: Vec<ExperimentRow> = cells.iter().map(|c| c.row.clone()).collect();
    let mut files = Vec::new();

    let csv = cfg.out.join(format!("{name}.csv"));
    write_rows_csv(&rows, fs::File::create(&csv)?)?;
    files.push(csv);

    for (suffix, style, stream) in figures(cfg.experiment) {
        let selected: Vec<ExperimentRow> = rows
            .iter()
            .filter(|r| (r.algorithm == algo::DECENTRALIZED_STREAM) == stream)
            .cloned()
            .collect();
        let title = format!("{name}: {}", suffix);
        let svg = cfg.out.join(format!("{name}-{suffix}.svg"));
        emit_plot(&selected, style, &title, &svg)?;
        let gp = cfg.out.join(format!("{name}-{suffix}.gp"));
        fs::write(
            &gp,
            gnuplot_script(
                &selected,
                style,
                &title,
                &format!("{name}-{suffix}.gnuplot.svg"),
            ),
        )?;
        files.push(svg);
        files.push(gp);
    }
    Ok(ExperimentOutput { cells, files })
}

/// Cost-greedy weights for one graph, as the `weights` command fits them.
pub fn fit_weights(
    g: &CostGraph,
    model: &CostModel,
    rounds: usize,
    queries_multiplier: usize,
    k_z: usize,
    conditioning: DegreeConditioning,
    seed: u64,
) -> Result<(CompressedWeightVector, Vec<RoundDiagnostics>)> {
    let cfg = EstimationConfig {
        queries_per_round: Some(queries_multiplier * g.n() as usize),
        rounds,
        k_z,
        conditioning,
        seed: derive_path(seed, &[tag::TRAIN]),
        initial: None,
    };
    estimate_rounds(g, model, &cfg, |_, _| Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ExperimentKind, dir: &std::path::Path) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::preset(kind, 3);
        cfg.sizes = vec![64, 128];
        cfg.rounds = 3;
        cfg.central_rounds = 2;
        cfg.queries_multiplier = 5;
        cfg.eval_multiplier = 5;
        cfg.out = dir.to_path_buf();
        if kind == ExperimentKind::TwoDegree {
            cfg.graph_seeds = 2;
            cfg.degree = DegreeSpec::Law(crate::topology::ShortcutLaw::TwoType {
                count_a: 10,
                fraction_a: 0.1,
                count_b: 2,
            });
        }
        cfg
    }

    #[test]
    fn every_experiment_runs_and_writes_files() {
        for kind in ExperimentKind::ALL {
            let dir = tempfile::tempdir().unwrap();
            let out = run_experiment(&small(kind, dir.path())).unwrap();
            for f in &out.files {
                assert!(f.exists(), "{}", f.display());
            }
            let csv = fs::read_to_string(dir.path().join(format!("{}.csv", kind.name()))).unwrap();
            assert!(csv.starts_with(CSV_HEADER));
            assert!(out.find(64, algo::GREEDY).is_some());
            assert!(out.find(128, algo::GREEDY).is_some());
        }
    }

    #[test]
    fn csv_is_reproducible() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        run_experiment(&small(ExperimentKind::Decentralized, a.path())).unwrap();
        run_experiment(&small(ExperimentKind::Decentralized, b.path())).unwrap();
        let read = |d: &tempfile::TempDir| fs::read(d.path().join("decentralized.csv")).unwrap();
        assert_eq!(read(&a), read(&b));
    }

    #[test]
    fn by_round_rows_cover_every_round() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&small(ExperimentKind::ByRound, dir.path())).unwrap();
        for r in 0..=3 {
            let c = out.find_round(64, algo::COST_GREEDY, r).unwrap();
            assert_eq!(c.row.queries, 5 * 64);
        }
    }

    #[test]
    fn two_degree_pools_graph_seeds() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&small(ExperimentKind::TwoDegree, dir.path())).unwrap();
        assert_eq!(out.find(64, algo::SJ).unwrap().row.queries, 2 * 5 * 64);
        let mut cfg = small(ExperimentKind::TwoDegree, dir.path());
        cfg.cost = CostModel::Exponential { rate: 1.0 };
        assert!(compute_experiment(&cfg).is_err());
    }
}
