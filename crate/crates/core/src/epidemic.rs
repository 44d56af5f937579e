//! Reed-Frost epidemics on an intersection graph, the equivalent percolation
//! cluster, and Monte Carlo replication.
//!
//! Transmission uses one coin per undirected edge (see [`EdgeCoins`]), so for
//! a given seed the Reed-Frost final set and the percolation cluster of the
//! index case are the same set.

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphgen::{check_probability, sample_intersection, GraphParams, IntersectionGraph};
use crate::seed::{derive_seed, rng_from_seed, EdgeCoins};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpidemicOutcome {
    /// Ever-infected count, index case included.
    pub final_size: usize,
    /// Newly infected per generation; `generations[0] == 1` and every entry
    /// is positive (the run stops at the first empty generation).
    pub generations: Vec<usize>,
    /// Sorted ever-infected vertices, when requested.
    pub infected_set: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Susceptible,
    Infective,
    Removed,
}

fn check_index(g: &IntersectionGraph, index: usize) -> Result<()> {
    if index < g.n() {
        Ok(())
    } else {
        Err(Error::domain(format!("index case {index} out of range for n = {}", g.n())))
    }
}

/// Generation-synchronous Reed-Frost run started by `index`.
pub fn reed_frost_run(g: &IntersectionGraph, p: f64, index: usize, seed: u64) -> Result<EpidemicOutcome> {
    check_probability(p)?;
    check_index(g, index)?;
    Ok(reed_frost(g, p, index, &EdgeCoins::new(seed), true))
}

fn reed_frost(g: &IntersectionGraph, p: f64, index: usize, coins: &EdgeCoins, keep_set: bool) -> EpidemicOutcome {
    let mut status = vec![Status::Susceptible; g.n()];
    status[index] = Status::Infective;
    let mut infectives = vec![index];
    let mut generations = vec![1];
    let mut ever = keep_set.then(|| vec![index]);
    loop {
        let mut next = Vec::new();
        for &i in &infectives {
            for &w in g.neighbors(i) {
                if status[w] == Status::Susceptible && coins.is_open(i, w, p) {
                    status[w] = Status::Infective;
                    next.push(w);
                }
            }
        }
        for &i in &infectives {
            status[i] = Status::Removed;
        }
        if next.is_empty() {
            break;
        }
        generations.push(next.len());
        if let Some(ever) = ever.as_mut() {
            ever.extend_from_slice(&next);
        }
        infectives = next;
    }
    finish(generations, ever)
}

/// Cluster of `index` when each edge is open independently with probability
/// `p`, explored breadth first with coins drawn lazily per edge.
pub fn percolation_cluster(g: &IntersectionGraph, p: f64, index: usize, seed: u64) -> Result<EpidemicOutcome> {
    check_probability(p)?;
    check_index(g, index)?;
    let coins = EdgeCoins::new(seed);
    let mut visited = vec![false; g.n()];
    visited[index] = true;
    let mut members = vec![index];
    let mut levels = vec![1];
    let mut frontier = 0..1;
    loop {
        let level_start = members.len();
        for k in frontier.clone() {
            let u = members[k];
            for &w in g.neighbors(u) {
                if !visited[w] && coins.is_open(u, w, p) {
                    visited[w] = true;
                    members.push(w);
                }
            }
        }
        if members.len() == level_start {
            break;
        }
        levels.push(members.len() - level_start);
        frontier = level_start..members.len();
    }
    Ok(finish(levels, Some(members)))
}

fn finish(generations: Vec<usize>, set: Option<Vec<usize>>) -> EpidemicOutcome {
    let final_size = generations.iter().sum();
    let infected_set = set.map(|mut s| {
        s.sort_unstable();
        s
    });
    EpidemicOutcome {
        final_size,
        generations,
        infected_set,
    }
}

/// Smallest final size classified as a large outbreak:
/// `max(10, ceil(n^exponent))`.
pub fn large_outbreak_threshold(n: usize, exponent: f64) -> usize {
    ((n as f64).powf(exponent).ceil() as usize).max(10)
}

pub const DEFAULT_THRESHOLD_EXPONENT: f64 = 2.0 / 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexCase {
    /// Uniformly random vertex per trial.
    Uniform,
    Fixed(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct McConfig {
    pub params: GraphParams,
    pub p: f64,
    pub trials: usize,
    /// Fresh graph per trial; otherwise all trials share one graph.
    pub regenerate_graph: bool,
    pub threshold_exponent: f64,
    pub master_seed: u64,
    pub index_case: IndexCase,
}

impl McConfig {
    pub fn new(params: GraphParams, p: f64, trials: usize, master_seed: u64) -> Self {
        McConfig {
            params,
            p,
            trials,
            regenerate_graph: true,
            threshold_exponent: DEFAULT_THRESHOLD_EXPONENT,
            master_seed,
            index_case: IndexCase::Uniform,
        }
    }

    pub fn threshold(&self) -> usize {
        large_outbreak_threshold(self.params.n(), self.threshold_exponent)
    }

    fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.trials == 0 {
            return Err(Error::domain("trial count must be at least 1"));
        }
        if !(self.threshold_exponent > 0.0 && self.threshold_exponent <= 1.0) {
            return Err(Error::domain(format!(
                "threshold exponent must lie in (0, 1], got {}",
                self.threshold_exponent
            )));
        }
        if let IndexCase::Fixed(v) = self.index_case {
            if v >= self.params.n() {
                return Err(Error::domain(format!("index case {v} out of range")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    pub final_size: usize,
    pub num_generations: usize,
    pub is_large: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McSummary {
    pub trials: usize,
    pub threshold: usize,
    pub num_large: usize,
    pub fraction_large: f64,
    /// Binomial standard error of `fraction_large`.
    pub stderr: f64,
    /// `NaN` when every trial is large.
    pub mean_small_final_size: f64,
    /// `NaN` when no trial is large.
    pub mean_large_final_size: f64,
    pub mean_large_relative_size: f64,
}

impl McSummary {
    /// Aggregates records. Only integer sums are accumulated, so the result
    /// does not depend on record order.
    pub fn from_records(records: &[TrialRecord], threshold: usize, n: usize) -> Self {
        let trials = records.len();
        let (mut num_large, mut small_sum, mut large_sum) = (0usize, 0u64, 0u64);
        for r in records {
            if r.is_large {
                num_large += 1;
                large_sum += r.final_size as u64;
            } else {
                small_sum += r.final_size as u64;
            }
        }
        let num_small = trials - num_large;
        let fraction_large = num_large as f64 / trials as f64;
        let mean = |sum: u64, count: usize| {
            if count == 0 {
                f64::NAN
            } else {
                sum as f64 / count as f64
            }
        };
        let mean_large_final_size = mean(large_sum, num_large);
        McSummary {
            trials,
            threshold,
            num_large,
            fraction_large,
            stderr: (fraction_large * (1.0 - fraction_large) / trials as f64).sqrt(),
            mean_small_final_size: mean(small_sum, num_small),
            mean_large_final_size,
            mean_large_relative_size: mean_large_final_size / n as f64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct McResult {
    pub records: Vec<TrialRecord>,
    pub summary: McSummary,
}

const SHARED_GRAPH_STREAM: u64 = u64::MAX;

/// Runs `cfg.trials` independent epidemics in parallel on the current rayon
/// pool. Trial `t` draws everything from `derive_seed(master_seed, t)`.
pub fn monte_carlo(cfg: &McConfig) -> Result<McResult> {
    cfg.validate()?;
    let threshold = cfg.threshold();
    let shared = if cfg.regenerate_graph {
        None
    } else {
        let seed = derive_seed(cfg.master_seed, SHARED_GRAPH_STREAM);
        Some(sample_intersection(&cfg.params, seed)?)
    };
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, shared.as_ref(), t, threshold))
        .collect::<Result<Vec<_>>>()?;
    let summary = McSummary::from_records(&records, threshold, cfg.params.n());
    Ok(McResult { records, summary })
}

fn run_trial(
    cfg: &McConfig,
    shared: Option<&IntersectionGraph>,
    t: usize,
    threshold: usize,
) -> Result<TrialRecord> {
    let seed = derive_seed(cfg.master_seed, t as u64);
    let mut rng = rng_from_seed(seed);
    let graph_seed = rng.next_u64();
    let coin_seed = rng.next_u64();
    let index = match cfg.index_case {
        IndexCase::Uniform => rng.random_range(0..cfg.params.n()),
        IndexCase::Fixed(v) => v,
    };
    let fresh;
    let g = match shared {
        Some(g) => g,
        None => {
            fresh = sample_intersection(&cfg.params, graph_seed)?;
            &fresh
        }
    };
    let outcome = reed_frost(g, cfg.p, index, &EdgeCoins::new(coin_seed), false);
    Ok(TrialRecord {
        trial_index: t,
        seed,
        final_size: outcome.final_size,
        num_generations: outcome.generations.len(),
        is_large: outcome.final_size >= threshold,
    })
}
