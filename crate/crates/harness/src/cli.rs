use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sigmax_core::diffusion::Simulator;
use sigmax_core::embedding::{ItemGraph, DEFAULT_DIMENSION};
use sigmax_core::learning::{learn, ActionLog, EmsConfig};
use sigmax_core::seeding::{
    hag_select_with, ioc_evaluate, opt_select_within, ran_select_within, sns_extend, AdoptionEstimator, ExactEstimator,
    HagOptions, SeedBudget, Selection, DEFAULT_OPT_CAP,
};
use sigmax_core::{exact_adoption, EngineKind, NodeId, SocialGraph, SocialItemGraph};

use crate::io::{load_action_log, load_model, load_seed_set, load_social_graph, save_action_log, save_model, save_social_graph};
use crate::metrics::{evaluate_prediction, PredictionRule, PrfScores};
use crate::parallel::{estimate_parallel, ParallelEstimator};
use crate::report::{timing_table, ExperimentReport, Format};
use crate::synth::{cascade_log, generate_synthetic, social_from_graph, EdgeTarget, ProbDist, SyntheticSpec};
use crate::{HarnessError, Result};

#[derive(Debug, Parser)]
#[command(name = "sigmax", version, about = "Learn social item graphs, pick seeds, simulate and benchmark")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn a model from a purchase log and a social graph.
    Learn(LearnArgs),
    /// Choose k seed purchase actions.
    Select(SelectArgs),
    /// Estimate the adoption of a given seed set.
    Simulate(SimulateArgs),
    /// Precision, recall and F1 of one-step purchase prediction.
    Eval(EvalArgs),
    /// Time the three diffusion engines on one workload. The timing table goes
    /// to stderr.
    Bench(BenchArgs),
    /// Write a random model, and optionally a social graph and cascade log.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Naive,
    Sorting,
    Sigindex,
}

impl From<Engine> for EngineKind {
    fn from(e: Engine) -> Self {
        match e {
            Engine::Naive => EngineKind::Naive,
            Engine::Sorting => EngineKind::Sorting,
            Engine::Sigindex => EngineKind::SigIndex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Hag,
    Sns,
    Ran,
    Soc,
    Opt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ItemGraphArg {
    Complete,
    CoPurchase,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Report file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Add wall-clock phase timings to the report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct LearnParams {
    #[arg(long, default_value_t = 2)]
    pub mu: usize,
    /// Kernel bandwidth; 0 is plain EM.
    #[arg(long = "h", default_value_t = 1.0)]
    pub bandwidth: f64,
    #[arg(long, default_value_t = 0.1)]
    pub theta: f64,
    #[arg(long, default_value_t = 86_400)]
    pub item_window: i64,
    #[arg(long, default_value_t = 86_400)]
    pub social_window: i64,
    #[arg(long, default_value_t = 200)]
    pub max_iters: u32,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_DIMENSION)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = ItemGraphArg::Complete)]
    pub item_graph: ItemGraphArg,
}

impl LearnParams {
    fn config(&self) -> EmsConfig {
        EmsConfig {
            mu: self.mu,
            item_window: self.item_window,
            social_window: self.social_window,
            bandwidth: self.bandwidth,
            theta: self.theta,
            max_iters: self.max_iters,
            tol: self.tol,
            ..EmsConfig::default()
        }
    }

    fn items(&self) -> ItemGraph {
        match self.item_graph {
            ItemGraphArg::Complete => ItemGraph::Complete,
            ItemGraphArg::CoPurchase => ItemGraph::CoPurchase,
        }
    }

    fn echo(&self, r: &mut ExperimentReport) {
        r.echo("mu", self.mu);
        r.echo("h", self.bandwidth);
        r.echo("theta", self.theta);
        r.echo("item_window", self.item_window);
        r.echo("social_window", self.social_window);
        r.echo("max_iters", self.max_iters);
        r.echo("tol", self.tol);
        r.echo("dim", self.dim);
        r.echo("item_graph", format!("{:?}", self.item_graph).to_lowercase());
    }
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    #[arg(long)]
    pub log: PathBuf,
    #[arg(long)]
    pub graph: PathBuf,
    /// Where to write the learned model.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub params: LearnParams,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    #[arg(long, value_enum, default_value_t = Engine::Sigindex)]
    pub engine: Engine,
    #[arg(long, default_value_t = 300)]
    pub runs: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the exact oracle instead of Monte Carlo.
    #[arg(long)]
    pub exact: bool,
}

impl EstimatorArgs {
    fn estimator(&self) -> Box<dyn AdoptionEstimator> {
        if self.exact {
            Box::new(ExactEstimator::default())
        } else {
            Box::new(ParallelEstimator {
                runs: self.runs,
                engine: self.engine.into(),
                rng_seed: self.seed,
            })
        }
    }

    fn check(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(HarnessError::Usage("--runs must be at least 1".into()));
        }
        Ok(())
    }

    /// Fills adoption, standard error and run count for `seeds`.
    fn measure(&self, graph: &SocialItemGraph, seeds: &[NodeId], r: &mut ExperimentReport) -> Result<()> {
        if self.exact {
            r.adoption = Some(exact_adoption(graph, seeds)?);
        } else {
            let sim = Simulator::new(graph, self.engine.into());
            let est = estimate_parallel(&sim, seeds, self.runs, self.seed);
            r.adoption = Some(est.mean);
            r.std_error = Some(est.std_error);
            r.runs = Some(self.runs);
        }
        r.engine = Some(if self.exact { "exact".into() } else { EngineKind::from(self.engine).label().into() });
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Algo::Hag)]
    pub algo: Algo,
    /// Also report adoption when only item-inference hyperedges fire.
    #[arg(long)]
    pub ioc_eval: bool,
    /// Fill up with best single nodes when greedy stops short of k.
    #[arg(long)]
    pub pad: bool,
    /// Only purchase actions of these items may be seeds.
    #[arg(long, value_delimiter = ',')]
    pub restrict_items: Option<Vec<String>>,
    /// Random draws averaged by `--algo ran`.
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, default_value_t = DEFAULT_OPT_CAP)]
    pub opt_cap: u128,
    #[arg(long)]
    pub allow_empty: bool,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub seed_set: PathBuf,
    #[arg(long)]
    pub allow_empty: bool,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Training log, or the whole log when folding.
    #[arg(long)]
    pub log: PathBuf,
    #[arg(long)]
    pub graph: PathBuf,
    /// Fixed model; learned per fold when absent.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Held-out log; disables folding.
    #[arg(long)]
    pub test: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    /// Only test purchases this many seconds after the test start count.
    #[arg(long)]
    pub horizon: Option<i64>,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Predict by Bernoulli draws averaged over this many runs instead of the
    /// threshold.
    #[arg(long)]
    pub sampled: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub allow_empty: bool,
    #[command(flatten)]
    pub params: LearnParams,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Benchmark on this model instead of a synthetic one.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = 2000)]
    pub nodes: usize,
    #[arg(long, default_value_t = 40.0)]
    pub in_degree: f64,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 300)]
    pub runs: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub allow_empty: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub nodes: usize,
    #[arg(long)]
    pub in_degree: f64,
    #[arg(long, default_value_t = 1)]
    pub items: usize,
    #[arg(long, default_value_t = 0.01)]
    pub p_low: f64,
    #[arg(long, default_value_t = 0.2)]
    pub p_high: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub model: PathBuf,
    /// Also write the implied social graph here.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Also write a cascade log here.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub cascades: u32,
    /// Per-node seeding probability of each cascade.
    #[arg(long, default_value_t = 0.05)]
    pub seed_prob: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Phase timer; only reported when asked for.
struct Clock {
    start: Instant,
    phases: Vec<(String, f64)>,
}

impl Clock {
    fn new() -> Self {
        Self {
            start: Instant::now(),
            phases: Vec::new(),
        }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.phases.push((phase.to_owned(), (now - self.start).as_secs_f64()));
        self.start = now;
    }
}

fn emit(mut report: ExperimentReport, out: &OutputArgs, clock: Clock) -> Result<()> {
    if out.timings {
        report.timings = Some(clock.phases.into_iter().collect());
    }
    let text = report.render(out.format);
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| HarnessError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Learn(a) => cmd_learn(a),
        Command::Select(a) => cmd_select(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Generate(a) => cmd_generate(a),
    }
}

pub fn cmd_learn(a: LearnArgs) -> Result<()> {
    let mut clock = Clock::new();
    let cfg = a.params.config();
    cfg.validate()?;
    let log = load_action_log(&a.log)?;
    let social = load_social_graph(&a.graph)?;
    clock.lap("load");
    let model = learn(&log, &social, &cfg, a.params.items(), a.params.dim)?;
    clock.lap("learn");
    save_model(&model.graph, &a.model)?;
    clock.lap("save");

    let mut r = ExperimentReport::new("learn", a.seed);
    r.algorithm = Some(if cfg.bandwidth > 0.0 { "ems" } else { "em" }.into());
    a.params.echo(&mut r);
    r.echo("log", a.log.display());
    r.echo("graph", a.graph.display());
    r.echo("model", a.model.display());
    r.metric("log_records", log.len() as f64);
    r.metric("candidates", model.candidates.edge_count() as f64);
    r.metric("hyperedges", model.graph.edge_count() as f64);
    r.metric("nodes", model.graph.node_count() as f64);
    r.metric("iterations", model.fit.iterations as f64);
    r.metric("converged", if model.fit.converged { 1.0 } else { 0.0 });
    emit(r, &a.output, clock)
}

/// Node ids whose item is listed.
fn item_pool(graph: &SocialItemGraph, items: &[String]) -> Vec<NodeId> {
    graph
        .node_ids()
        .filter(|v| items.iter().any(|i| *i == graph.node(*v).item))
        .collect()
}

pub fn cmd_select(a: SelectArgs) -> Result<()> {
    a.estimator.check()?;
    let mut clock = Clock::new();
    let graph = load_model(&a.model, a.allow_empty)?;
    clock.lap("load");
    let budget = SeedBudget::new(a.k, &graph)?;
    let eval = a.estimator.estimator();
    let pool = a.restrict_items.as_deref().map(|items| item_pool(&graph, items));
    let mut r = ExperimentReport::new("select", a.estimator.seed);
    r.algorithm = Some(format!("{:?}", a.algo).to_lowercase());
    r.k = Some(a.k);

    let greedy = |g: &SocialItemGraph| {
        let opts = HagOptions {
            allowed: pool.clone(),
            ..HagOptions::default()
        };
        hag_select_with(g, budget, eval.as_ref(), opts)
    };
    let mut seeds = match a.algo {
        Algo::Hag => greedy(&graph)?.seeds,
        Algo::Soc => greedy(&graph.filter_social_only())?.seeds,
        Algo::Sns => sns_extend(&graph, Vec::new(), budget, eval.as_ref(), pool.as_deref())?.seeds,
        Algo::Opt => opt_select_within(&graph, budget, eval.as_ref(), a.opt_cap, pool.as_deref())?.seeds,
        Algo::Ran => {
            let draws = ran_select_within(&graph, budget, a.estimator.seed, a.reps.max(1), pool.as_deref())?;
            let values = draws
                .iter()
                .map(|s| eval.adoption(&graph, s))
                .collect::<Result<Vec<f64>, _>>()?;
            r.metric("ran_mean", values.iter().sum::<f64>() / values.len() as f64);
            r.metric("ran_min", values.iter().copied().fold(f64::INFINITY, f64::min));
            r.metric("ran_max", values.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            r.echo("reps", a.reps.max(1));
            draws.into_iter().next().unwrap_or_default()
        }
    };
    r.metric("greedy_seeds", seeds.len() as f64);
    if a.pad && seeds.len() < a.k {
        let Selection { seeds: padded, .. } = sns_extend(&graph, seeds, budget, eval.as_ref(), pool.as_deref())?;
        seeds = padded;
    }
    clock.lap("select");

    a.estimator.measure(&graph, &seeds, &mut r)?;
    if a.ioc_eval {
        r.metric("ioc_adoption", ioc_evaluate(&graph, &seeds, eval.as_ref())?);
    }
    clock.lap("evaluate");
    r.set_seeds(&graph, &seeds);
    r.echo("model", a.model.display());
    r.echo("pad", a.pad);
    r.echo("opt_cap", a.opt_cap);
    if let Some(items) = &a.restrict_items {
        r.echo("restrict_items", items.join(","));
    }
    emit(r, &a.output, clock)
}

pub fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    a.estimator.check()?;
    let mut clock = Clock::new();
    let graph = load_model(&a.model, a.allow_empty)?;
    let seeds = load_seed_set(&a.seed_set, &graph)?;
    clock.lap("load");
    let mut r = ExperimentReport::new("simulate", a.estimator.seed);
    r.k = Some(seeds.len());
    a.estimator.measure(&graph, &seeds, &mut r)?;
    clock.lap("simulate");
    r.set_seeds(&graph, &seeds);
    r.echo("model", a.model.display());
    r.echo("seed_set", a.seed_set.display());
    emit(r, &a.output, clock)
}

/// The last `window` seconds of `log`.
fn tail(log: &ActionLog, window: i64) -> ActionLog {
    match log.records().last() {
        Some(last) => log.between(last.time.saturating_sub(window), last.time.saturating_add(1)),
        None => ActionLog::default(),
    }
}

fn concat(parts: &[ActionLog]) -> ActionLog {
    ActionLog::new(parts.iter().flat_map(|p| p.records().iter().cloned()))
}

pub fn cmd_eval(a: EvalArgs) -> Result<()> {
    let mut clock = Clock::new();
    let cfg = a.params.config();
    cfg.validate()?;
    let log = load_action_log(&a.log)?;
    let social: SocialGraph = load_social_graph(&a.graph)?;
    let fixed = a.model.as_deref().map(|p| load_model(p, a.allow_empty)).transpose()?;
    let test = a.test.as_deref().map(load_action_log).transpose()?;
    clock.lap("load");

    let rule = match a.sampled {
        Some(runs) if runs > 0 => PredictionRule::Sampled { runs, rng_seed: a.seed },
        Some(_) => return Err(HarnessError::Usage("--sampled must be at least 1".into())),
        None => PredictionRule::Threshold(a.threshold),
    };
    let window = cfg.item_window.max(cfg.social_window);
    let splits: Vec<(ActionLog, ActionLog)> = match test {
        Some(test) => vec![(log, test)],
        None => {
            if a.folds < 2 {
                return Err(HarnessError::Usage("--folds must be at least 2".into()));
            }
            let folds = log.folds(a.folds);
            (1..folds.len()).map(|i| (concat(&folds[..i]), folds[i].clone())).collect()
        }
    };
    let mut scores = Vec::new();
    for (train, test) in splits {
        if train.is_empty() || test.is_empty() {
            continue;
        }
        let model = match &fixed {
            Some(m) => m.clone(),
            None => learn(&train, &social, &cfg, a.params.items(), a.params.dim)?.graph,
        };
        scores.push(evaluate_prediction(&model, &tail(&train, window), &test, a.horizon, rule));
    }
    clock.lap("evaluate");
    let mean = PrfScores::mean(&scores);

    let mut r = ExperimentReport::new("eval", a.seed);
    r.algorithm = Some(if a.model.is_some() { "fixed-model" } else if cfg.bandwidth > 0.0 { "ems" } else { "em" }.into());
    r.metric("precision", mean.precision);
    r.metric("recall", mean.recall);
    r.metric("f1", mean.f1);
    r.metric("degenerate", if mean.degenerate { 1.0 } else { 0.0 });
    r.metric("splits", scores.len() as f64);
    a.params.echo(&mut r);
    r.echo("log", a.log.display());
    r.echo("graph", a.graph.display());
    if let Some(m) = &a.model {
        r.echo("model", m.display());
    }
    if let Some(t) = &a.test {
        r.echo("test", t.display());
    } else {
        r.echo("folds", a.folds);
    }
    r.echo("horizon", a.horizon.map_or("none".to_owned(), |h| h.to_string()));
    match rule {
        PredictionRule::Threshold(t) => r.echo("rule", format!("threshold:{t}")),
        PredictionRule::Sampled { runs, .. } => r.echo("rule", format!("sampled:{runs}")),
    }
    emit(r, &a.output, clock)
}

/// The `k` nodes with the most outgoing hyperedges, ties to the smaller id.
pub fn hub_seeds(graph: &SocialItemGraph, k: usize) -> Vec<NodeId> {
    let mut ids: Vec<NodeId> = graph.node_ids().collect();
    ids.sort_by_key(|v| (std::cmp::Reverse(graph.outgoing(*v).len()), *v));
    ids.truncate(k);
    ids
}

pub fn bench_graph(nodes: usize, in_degree: f64, rng_seed: u64) -> Result<SocialItemGraph> {
    let mut spec = SyntheticSpec::new(nodes, EdgeTarget::MeanInDegree(in_degree), rng_seed);
    spec.probs = ProbDist::Uniform { low: 0.001, high: 0.05 };
    Ok(generate_synthetic(&spec)?)
}

pub fn cmd_bench(a: BenchArgs) -> Result<()> {
    if a.runs == 0 {
        return Err(HarnessError::Usage("--runs must be at least 1".into()));
    }
    let mut clock = Clock::new();
    let graph = match &a.model {
        Some(p) => load_model(p, a.allow_empty)?,
        None => bench_graph(a.nodes, a.in_degree, a.seed)?,
    };
    clock.lap("load");
    let seeds = hub_seeds(&graph, a.k);
    let mut rows = Vec::new();
    let mut r = ExperimentReport::new("bench", a.seed);
    for engine in EngineKind::ALL {
        let start = Instant::now();
        let sim = Simulator::new(&graph, engine);
        let est = sigmax_core::diffusion::estimate_with(&sim, &seeds, a.runs, a.seed);
        let secs = start.elapsed().as_secs_f64();
        clock.phases.push((engine.label().to_owned(), secs));
        rows.push((engine.label().to_owned(), secs, est.mean));
        r.metric(&format!("adoption.{}", engine.label()), est.mean);
    }
    clock.start = Instant::now();
    eprint!("{}", timing_table(&rows));
    let agree = rows.iter().all(|row| row.2.to_bits() == rows[0].2.to_bits());
    r.metric("engines_agree", if agree { 1.0 } else { 0.0 });
    r.adoption = Some(rows[0].2);
    r.runs = Some(a.runs);
    r.k = Some(seeds.len());
    r.set_seeds(&graph, &seeds);
    r.metric("nodes", graph.node_count() as f64);
    r.metric("hyperedges", graph.edge_count() as f64);
    match &a.model {
        Some(p) => r.echo("model", p.display()),
        None => {
            r.echo("synthetic_nodes", a.nodes);
            r.echo("synthetic_in_degree", a.in_degree);
        }
    }
    emit(r, &a.output, clock)
}

pub fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let mut clock = Clock::new();
    let mut spec = SyntheticSpec::new(a.nodes, EdgeTarget::MeanInDegree(a.in_degree), a.seed);
    spec.items = a.items.max(1);
    spec.probs = ProbDist::Uniform { low: a.p_low, high: a.p_high };
    let graph = generate_synthetic(&spec)?;
    save_model(&graph, &a.model)?;
    if let Some(path) = &a.graph {
        save_social_graph(&social_from_graph(&graph), path)?;
    }
    let mut r = ExperimentReport::new("generate", a.seed);
    if let Some(path) = &a.log {
        if !(0.0..=1.0).contains(&a.seed_prob) {
            return Err(HarnessError::Usage("--seed-prob must lie in [0, 1]".into()));
        }
        let q = vec![a.seed_prob; graph.node_count()];
        let out = cascade_log(&graph, &q, a.cascades, 100, a.seed);
        save_action_log(&out.log, path)?;
        r.metric("log_records", out.log.len() as f64);
        r.echo("cascades", a.cascades);
        r.echo("seed_prob", a.seed_prob);
    }
    clock.lap("generate");
    r.metric("nodes", graph.node_count() as f64);
    r.metric("hyperedges", graph.edge_count() as f64);
    r.echo("in_degree", a.in_degree);
    r.echo("items", spec.items);
    emit(r, &a.output, clock)
}

/// Parses `args` (without the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(std::iter::once("sigmax".into()).chain(args.into_iter().map(Into::into)))
        .map_err(|e| HarnessError::Usage(e.to_string()))?;
    run(cli)
}
