//! Command-line front end.
//!
//! Model parameters are accepted either as `--beta/--gamma` or as
//! `--c/--mu`, and are canonicalized to `(beta, gamma)` before any work is
//! done, so both spellings produce identical files. Each run writes a
//! `manifest.json` whose `args` field replays it.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, CommandFactory, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::epidemic::{monte_carlo, IndexCase, McConfig, DEFAULT_THRESHOLD_EXPONENT};
use crate::error::Error;
use crate::experiments::{
    ball_check, census_scaling, default_c_grid, default_kappa, degree_tv, mc_validation, sweep_figure1_with,
    SweepOptions,
};
use crate::graphgen::io::{read_edge_list, write_edge_list, write_memberships};
use crate::graphgen::{
    clustering, degree_histogram, limit_mean_degree, mean_degree, project, sample_bipartite, solve_params,
    transitivity, GraphParams, IntersectionGraph,
};
use crate::motifs::DEFAULT_MOTIF_BUDGET;
use crate::output::{fmt_g, write_census, write_figure1, write_trials, write_validation};
use crate::theory::{compound_poisson_degree_pmf, BranchingModel, FinalSizeTable, DEFAULT_EPSILON, DEFAULT_K_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Parser, Debug)]
#[command(name = "rigepi", version, about = "Reed-Frost epidemics on random intersection graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a graph and export its edge list and group memberships.
    Generate(GenerateArgs),
    /// Degree histogram and transitivity of a sampled or loaded graph.
    Stats(StatsArgs),
    /// R0, extinction and outbreak probability at one parameter point.
    Theory(TheoryArgs),
    /// R0 and outbreak probability over a clustering grid (figure1.csv).
    Sweep(SweepArgs),
    /// Monte Carlo Reed-Frost trials.
    Simulate(SimulateArgs),
    /// Monte Carlo outbreak fraction against theory (mc_validation.csv).
    Validate(ValidateArgs),
    /// Induced K4 / K4' counts for unthinned and thinned graphs (census.csv).
    Census(CensusArgs),
    /// Fraction of tree-shaped neighbourhood balls.
    BallCheck(BallCheckArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

/// Model parameters: `(beta, gamma)` or `(c, mu)`.
#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("model").args(["beta", "c"]).required(true)))]
pub struct ModelArgs {
    /// Groups per individual.
    #[arg(long, requires = "gamma", conflicts_with_all = ["c", "mu"])]
    pub beta: Option<f64>,
    /// Expected group size.
    #[arg(long, requires = "beta")]
    pub gamma: Option<f64>,
    /// Clustering coefficient in (0, 1).
    #[arg(long, requires = "mu")]
    pub c: Option<f64>,
    /// Mean degree.
    #[arg(long, requires = "c")]
    pub mu: Option<f64>,
}

impl ModelArgs {
    fn canonical(&self) -> Result<(f64, f64), Error> {
        match (self.beta, self.gamma, self.c, self.mu) {
            (Some(b), Some(g), None, None) => Ok((b, g)),
            (None, None, Some(c), Some(mu)) => solve_params(c, mu),
            _ => Err(Error::Parse("model needs exactly one of --beta/--gamma or --c/--mu".into())),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").args(["edges", "n"]).required(true)))]
#[command(group(ArgGroup::new("model").args(["beta", "c"])))]
pub struct StatsArgs {
    /// Edge list to analyse instead of sampling a graph.
    #[arg(long, conflicts_with = "n")]
    pub edges: Option<PathBuf>,
    #[arg(long, requires = "model")]
    pub n: Option<usize>,
    #[arg(long, requires = "gamma", conflicts_with_all = ["c", "mu"])]
    pub beta: Option<f64>,
    #[arg(long, requires = "beta")]
    pub gamma: Option<f64>,
    #[arg(long, requires = "mu")]
    pub c: Option<f64>,
    #[arg(long, requires = "c")]
    pub mu: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct TheoryArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub p: f64,
    /// Tail tolerance for the group-size truncation.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_K_CAP)]
    pub k_cap: usize,
    /// Also write theory.json and a manifest here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    /// Clustering grid; defaults to 50 points on [0.001, 0.99].
    #[arg(long, value_delimiter = ',')]
    pub c_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_K_CAP)]
    pub k_cap: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Run every trial on one graph instead of a fresh graph per trial.
    #[arg(long)]
    pub shared_graph: bool,
    /// Fixed index case instead of a uniform one.
    #[arg(long)]
    pub index: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD_EXPONENT)]
    pub threshold_exponent: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Clustering values; crossed with every `--p`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<f64>,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 50_000)]
    pub n: usize,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub p: f64,
    /// Ascending population sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    pub replicates: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct BallCheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: usize,
    /// Radius factor; radius = floor(kappa ln n). Defaults to just inside
    /// 1 / (2 ln(beta gamma^2)).
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

/// Record written next to every output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Canonical argument list (without `--out`/`--threads`) that replays
    /// the run.
    pub args: Vec<String>,
    pub params: Value,
    pub master_seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<String>,
    pub threads: usize,
    pub wall_clock_seconds: f64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(msg) => CliError::Usage(msg),
            e => CliError::Run(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Run(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Runs the CLI on `argv` and returns the process exit code. Failures print
/// one line `rigepi: error kind=<kind>: <message>` to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return EXIT_OK;
        }
        Err(e) => {
            let msg = e.kind().to_string();
            let detail = e.to_string();
            let first = detail
                .lines()
                .map(|l| l.trim_start_matches("error: ").trim())
                .find(|l| !l.is_empty())
                .unwrap_or(&msg)
                .to_string();
            eprintln!("rigepi: error kind=usage: {first}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            eprintln!("rigepi: error kind=usage: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Run(e)) => {
            eprintln!("rigepi: error kind={}: {}", e.kind(), one_line(&e.to_string()));
            exit_code(&e)
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::NoWedges | Error::NonConvergence { .. } | Error::Parse(_) => EXIT_DOMAIN,
        Error::Capacity(_) => EXIT_CAPACITY,
        Error::Io(_) | Error::Json(_) => EXIT_FAILURE,
    }
}

fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Generate(a) => generate(a),
        Command::Stats(a) => stats(a),
        Command::Theory(a) => theory(a),
        Command::Sweep(a) => sweep(a),
        Command::Simulate(a) => simulate(a),
        Command::Validate(a) => validate(a),
        Command::Census(a) => census(a),
        Command::BallCheck(a) => ball(a),
        Command::Replay(a) => replay(a),
    }
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Run(Error::Io(std::io::Error::other(e))))?;
    Ok(pool.install(f))
}

/// Collects outputs for one run and writes the manifest at the end.
struct Run {
    dir: PathBuf,
    command: &'static str,
    args: Vec<String>,
    params: Value,
    seed: Option<u64>,
    threads: usize,
    outputs: Vec<String>,
    started: Instant,
}

impl Run {
    fn new(dir: &Path, command: &'static str, threads: usize) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Run {
            dir: dir.to_path_buf(),
            command,
            args: vec![command.to_string()],
            params: json!({}),
            seed: None,
            threads,
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    fn arg(&mut self, name: &str, value: impl ToString) {
        self.args.push(format!("--{name}"));
        self.args.push(value.to_string());
    }

    fn flag(&mut self, name: &str) {
        self.args.push(format!("--{name}"));
    }

    fn file(&mut self, name: &str) -> CliResult<BufWriter<File>> {
        self.outputs.push(name.to_string());
        Ok(BufWriter::new(File::create(self.dir.join(name))?))
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> CliResult<()> {
        let mut w = self.file(name)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn finish(self) -> CliResult<()> {
        let manifest = RunManifest {
            command: self.command.to_string(),
            args: self.args,
            params: self.params,
            master_seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: self.outputs,
            threads: self.threads,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
        };
        let mut w = BufWriter::new(File::create(self.dir.join(MANIFEST_FILE))?);
        serde_json::to_writer_pretty(&mut w, &manifest)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn model_params(run: &mut Run, beta: f64, gamma: f64) {
    run.arg("beta", beta);
    run.arg("gamma", gamma);
}

fn generate(a: GenerateArgs) -> CliResult<()> {
    let (beta, gamma) = a.model.canonical()?;
    let params = GraphParams::new(a.n, beta, gamma)?;
    let mut run = Run::new(&a.common.out, "generate", a.common.threads)?;
    model_params(&mut run, beta, gamma);
    run.arg("n", a.n);
    run.arg("seed", a.common.seed);
    run.params = json!({ "n": a.n, "beta": beta, "gamma": gamma, "m": params.m() });
    run.seed = Some(a.common.seed);
    let b = sample_bipartite(&params, a.common.seed)?;
    let g = project(&b);
    let mut w = run.file("edges.txt")?;
    write_edge_list(&g, &mut w)?;
    w.flush()?;
    let mut w = run.file("memberships.txt")?;
    write_memberships(&b, &mut w)?;
    w.flush()?;
    run.finish()
}

fn stats(a: StatsArgs) -> CliResult<()> {
    let model = ModelArgs {
        beta: a.beta,
        gamma: a.gamma,
        c: a.c,
        mu: a.mu,
    };
    let limit = if model.beta.is_some() || model.c.is_some() {
        Some(model.canonical()?)
    } else {
        None
    };
    let mut run = Run::new(&a.common.out, "stats", a.common.threads)?;
    let g: IntersectionGraph = match (&a.edges, a.n) {
        (Some(path), _) => {
            let path = fs::canonicalize(path)?;
            run.arg("edges", path.display());
            read_edge_list(BufReader::new(File::open(&path)?))?
        }
        (None, Some(n)) => {
            let (beta, gamma) = limit.ok_or_else(|| CliError::Usage("--n requires model parameters".into()))?;
            let params = GraphParams::new(n, beta, gamma)?;
            run.arg("n", n);
            run.arg("seed", a.common.seed);
            run.seed = Some(a.common.seed);
            project(&sample_bipartite(&params, a.common.seed)?)
        }
        (None, None) => return Err(CliError::Usage("give --edges or --n".into())),
    };
    if let Some((beta, gamma)) = limit {
        model_params(&mut run, beta, gamma);
    }
    let hist = degree_histogram(&g);
    let max_deg = hist.keys().next_back().copied().unwrap_or(0);
    let law = match limit {
        Some((beta, gamma)) => Some(compound_poisson_degree_pmf(beta, gamma, max_deg)?),
        None => None,
    };
    let mut w = run.file("degree_histogram.csv")?;
    writeln!(w, "degree,count,fraction,limit_pmf")?;
    for d in 0..=max_deg {
        let count = hist.get(&d).copied().unwrap_or(0);
        let lim = law.as_ref().map_or(String::new(), |l| fmt_g(l[d]));
        writeln!(w, "{d},{count},{},{lim}", fmt_g(count as f64 / g.n() as f64))?;
    }
    w.flush()?;
    let trans = match transitivity(&g) {
        Ok(t) => Some(t),
        Err(Error::NoWedges) => None,
        Err(e) => return Err(e.into()),
    };
    let mut summary = json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "mean_degree": mean_degree(&g),
        "transitivity": trans,
    });
    if let Some((beta, gamma)) = limit {
        summary["beta"] = json!(beta);
        summary["gamma"] = json!(gamma);
        summary["limit_mean_degree"] = json!(limit_mean_degree(beta, gamma));
        summary["limit_clustering"] = json!(clustering(beta, gamma));
        summary["degree_tv"] = json!(degree_tv(&g, beta, gamma)?);
    }
    run.params = summary.clone();
    run.json("stats.json", &summary)?;
    run.finish()
}

fn theory(a: TheoryArgs) -> CliResult<()> {
    let (beta, gamma) = a.model.canonical()?;
    let mut table = FinalSizeTable::new(a.p)?;
    let sol = BranchingModel::with_table(beta, gamma, a.eps, a.k_cap, &mut table)?.extinction()?;
    let value = json!({
        "beta": beta,
        "gamma": gamma,
        "p": a.p,
        "mu": sol.mu(),
        "c": sol.c(),
        "R0": sol.r_nought,
        "rho": sol.rho,
        "pi": sol.pi,
        "K": sol.truncation_k,
        "residual": sol.residual,
        "iterations": sol.iterations,
        "near_critical": sol.near_critical,
        "converged": sol.converged,
    });
    println!("{}", serde_json::to_string_pretty(&value)?);
    if let Some(out) = &a.out {
        let mut run = Run::new(out, "theory", 1)?;
        model_params(&mut run, beta, gamma);
        run.arg("p", a.p);
        run.arg("eps", a.eps);
        run.arg("k-cap", a.k_cap);
        run.params = json!({ "beta": beta, "gamma": gamma, "p": a.p, "eps": a.eps, "k_cap": a.k_cap });
        run.json("theory.json", &value)?;
        run.finish()?;
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> CliResult<()> {
    let grid = a.c_grid.clone().unwrap_or_else(default_c_grid);
    let opts = SweepOptions {
        eps: a.eps,
        k_cap: a.k_cap,
    };
    let result = with_pool(a.threads, || sweep_figure1_with(a.mu, &a.p, &grid, opts))??;
    let mut run = Run::new(&a.out, "sweep", a.threads)?;
    run.arg("mu", a.mu);
    run.arg("p", join(&a.p));
    run.arg("c-grid", join(&grid));
    run.arg("eps", a.eps);
    run.arg("k-cap", a.k_cap);
    run.params = json!({ "mu": a.mu, "p": a.p, "c_grid": grid, "eps": a.eps, "k_cap": a.k_cap });
    let mut w = run.file("figure1.csv")?;
    write_figure1(&mut w, &result.rows)?;
    w.flush()?;
    let mut w = run.file("thresholds.csv")?;
    writeln!(w, "p,c_star")?;
    for c in &result.crossings {
        writeln!(w, "{},{}", fmt_g(c.p), c.c_star.map_or("nan".to_string(), fmt_g))?;
    }
    w.flush()?;
    run.finish()
}

fn simulate(a: SimulateArgs) -> CliResult<()> {
    let (beta, gamma) = a.model.canonical()?;
    let params = GraphParams::new(a.n, beta, gamma)?;
    let mut cfg = McConfig::new(params, a.p, a.trials, a.common.seed);
    cfg.regenerate_graph = !a.shared_graph;
    cfg.threshold_exponent = a.threshold_exponent;
    if let Some(v) = a.index {
        cfg.index_case = IndexCase::Fixed(v);
    }
    let result = with_pool(a.common.threads, || monte_carlo(&cfg))??;
    let mut run = Run::new(&a.common.out, "simulate", a.common.threads)?;
    model_params(&mut run, beta, gamma);
    run.arg("n", a.n);
    run.arg("p", a.p);
    run.arg("trials", a.trials);
    run.arg("seed", a.common.seed);
    run.arg("threshold-exponent", a.threshold_exponent);
    if a.shared_graph {
        run.flag("shared-graph");
    }
    if let Some(v) = a.index {
        run.arg("index", v);
    }
    run.params = serde_json::to_value(&cfg)?;
    run.seed = Some(a.common.seed);
    let mut w = run.file("trials.csv")?;
    write_trials(&mut w, &result.records)?;
    w.flush()?;
    run.json("summary.json", &result.summary)?;
    run.finish()
}

fn validate(a: ValidateArgs) -> CliResult<()> {
    let points: Vec<(f64, f64, f64)> = a
        .c
        .iter()
        .flat_map(|&c| a.p.iter().map(move |&p| (c, a.mu, p)))
        .collect();
    let rows = with_pool(a.common.threads, || mc_validation(&points, a.n, a.trials, a.common.seed))??;
    let mut run = Run::new(&a.common.out, "validate", a.common.threads)?;
    run.arg("c", join(&a.c));
    run.arg("mu", a.mu);
    run.arg("p", join(&a.p));
    run.arg("n", a.n);
    run.arg("trials", a.trials);
    run.arg("seed", a.common.seed);
    run.params = json!({ "c": a.c, "mu": a.mu, "p": a.p, "n": a.n, "trials": a.trials });
    run.seed = Some(a.common.seed);
    let mut w = run.file("mc_validation.csv")?;
    write_validation(&mut w, &rows)?;
    w.flush()?;
    run.finish()
}

fn census(a: CensusArgs) -> CliResult<()> {
    let (beta, gamma) = a.model.canonical()?;
    let study = with_pool(a.common.threads, || {
        census_scaling(beta, gamma, a.p, &a.n, a.replicates, a.common.seed)
    })??;
    let mut run = Run::new(&a.common.out, "census", a.common.threads)?;
    model_params(&mut run, beta, gamma);
    run.arg("p", a.p);
    run.arg("n", join(&a.n));
    run.arg("replicates", a.replicates);
    run.arg("seed", a.common.seed);
    run.params = json!({
        "beta": beta, "gamma": gamma, "p": a.p, "n": a.n,
        "replicates": a.replicates, "motif_budget": DEFAULT_MOTIF_BUDGET,
    });
    run.seed = Some(a.common.seed);
    let mut w = run.file("census.csv")?;
    write_census(&mut w, &study.rows)?;
    w.flush()?;
    let mut w = run.file("census_means.csv")?;
    writeln!(w, "n,unthinned_k4,unthinned_k4prime,thinned_k4,thinned_k4prime")?;
    for m in &study.means {
        writeln!(
            w,
            "{},{},{},{},{}",
            m.n,
            fmt_g(m.unthinned_k4),
            fmt_g(m.unthinned_k4_prime),
            fmt_g(m.thinned_k4),
            fmt_g(m.thinned_k4_prime)
        )?;
    }
    w.flush()?;
    run.finish()
}

fn ball(a: BallCheckArgs) -> CliResult<()> {
    let (beta, gamma) = a.model.canonical()?;
    let params = GraphParams::new(a.n, beta, gamma)?;
    let kappa = a.kappa.unwrap_or_else(|| default_kappa(beta, gamma));
    let check = with_pool(a.common.threads, || ball_check(&params, kappa, a.samples, a.common.seed))??;
    let mut run = Run::new(&a.common.out, "ball-check", a.common.threads)?;
    model_params(&mut run, beta, gamma);
    run.arg("n", a.n);
    run.arg("kappa", kappa);
    run.arg("samples", a.samples);
    run.arg("seed", a.common.seed);
    run.params = json!({ "n": a.n, "beta": beta, "gamma": gamma, "kappa": kappa, "samples": a.samples });
    run.seed = Some(a.common.seed);
    run.json("ball_check.json", &check)?;
    run.finish()
}

fn replay(a: ReplayArgs) -> CliResult<()> {
    let manifest: RunManifest = serde_json::from_reader(BufReader::new(File::open(&a.manifest)?))?;
    if manifest.args.first().map(String::as_str) == Some("replay") {
        return Err(CliError::Usage("manifest records a replay".into()));
    }
    let mut argv: Vec<OsString> = vec!["rigepi".into()];
    argv.extend(manifest.args.iter().map(OsString::from));
    argv.push("--out".into());
    argv.push(a.out.into_os_string());
    if manifest.command != "theory" {
        argv.push("--threads".into());
        argv.push(a.threads.to_string().into());
    }
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(one_line(&e.to_string())))?;
    dispatch(cli.command)
}

/// Clap's view of the interface, for completions and doc checks.
pub fn command() -> clap::Command {
    Cli::command()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interface_is_consistent() {
        command().debug_assert();
    }

    #[test]
    fn parameter_pairs_are_exclusive() {
        let base = ["rigepi", "theory", "--p", "0.5"];
        let parse = |extra: &[&str]| Cli::try_parse_from(base.iter().chain(extra));
        assert!(parse(&["--beta", "0.25", "--gamma", "4"]).is_ok());
        assert!(parse(&["--c", "0.5", "--mu", "4"]).is_ok());
        assert!(parse(&["--beta", "0.25", "--mu", "4"]).is_err());
        assert!(parse(&["--beta", "0.25"]).is_err());
        assert!(parse(&[]).is_err());
    }

    #[test]
    fn usage_and_domain_exit_codes() {
        assert_eq!(run(["rigepi", "theory", "--p", "0.5"]), EXIT_USAGE);
        assert_eq!(run(["rigepi", "theory", "--c", "1.5", "--mu", "4", "--p", "0.5"]), EXIT_DOMAIN);
        assert_eq!(
            run(["rigepi", "theory", "--c", "0.99", "--mu", "4", "--p", "0.5", "--k-cap", "20"]),
            EXIT_CAPACITY
        );
        assert_eq!(run(["rigepi", "--help"]), EXIT_OK);
    }
}
