//! Parameter sweeps, Monte Carlo validation against the branching-process
//! limit, the K4′ census study and the local tree-likeness check.

use std::collections::BTreeMap;

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;

use crate::epidemic::{monte_carlo, McConfig, TrialRecord};
use crate::error::{Error, Result};
use crate::graphgen::{
    ball_is_tree, check_probability, degree_histogram, project, sample_bipartite, solve_params, thin,
    GraphParams, IntersectionGraph,
};
use crate::motifs::census4;
use crate::seed::{derive_seed, derive_seed_path, rng_from_seed};
use crate::theory::{
    compound_poisson_degree_pmf, truncation_point, BranchingModel, FinalSizeTable, TotalProgeny, DEFAULT_EPSILON,
    DEFAULT_K_CAP,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub c: f64,
    pub p: f64,
    pub mu: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `NaN` when the row exceeded the truncation capacity.
    pub r_nought: f64,
    pub pi: f64,
    /// Truncation point used, or the one that would have been needed.
    pub truncation_k: usize,
    pub near_critical: bool,
    pub capacity_exceeded: bool,
}

/// Location of `R0(c) = 1` for one `p`, if the grid brackets it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub p: f64,
    pub c_star: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub crossings: Vec<Crossing>,
}

#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub eps: f64,
    pub k_cap: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            eps: DEFAULT_EPSILON,
            k_cap: DEFAULT_K_CAP,
        }
    }
}

/// 50 points on `[1e-3, 0.99]`: 20 log-spaced below 0.1, then 30 evenly
/// spaced from 0.1 to 0.99.
pub fn default_c_grid() -> Vec<f64> {
    let log = (0..20).map(|i| 10f64.powf(-3.0 + 2.0 * i as f64 / 20.0));
    let lin = (0..30).map(|j| 0.1 + 0.89 * j as f64 / 29.0);
    log.chain(lin).collect()
}

pub fn sweep_figure1(mu: f64, p_list: &[f64], c_grid: &[f64]) -> Result<Sweep> {
    sweep_figure1_with(mu, p_list, c_grid, SweepOptions::default())
}

/// One row per `(p, c)` in input order (p outer). Each `p` shares a single
/// final-size table across its grid.
pub fn sweep_figure1_with(mu: f64, p_list: &[f64], c_grid: &[f64], opts: SweepOptions) -> Result<Sweep> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::domain(format!("mu must be positive, got {mu}")));
    }
    for &p in p_list {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain(format!("sweep p must lie in (0, 1], got {p}")));
        }
    }
    let params = c_grid
        .iter()
        .map(|&c| solve_params(c, mu).map(|(beta, gamma)| (c, beta, gamma)))
        .collect::<Result<Vec<_>>>()?;
    let per_p = p_list
        .par_iter()
        .map(|&p| sweep_one_p(mu, p, &params, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(p_list.len() * c_grid.len());
    let mut crossings = Vec::with_capacity(p_list.len());
    for (r, c) in per_p {
        rows.extend(r);
        crossings.push(c);
    }
    Ok(Sweep { rows, crossings })
}

fn sweep_one_p(mu: f64, p: f64, params: &[(f64, f64, f64)], opts: SweepOptions) -> Result<(Vec<SweepRow>, Crossing)> {
    let ks = params
        .iter()
        .map(|&(_, _, gamma)| truncation_point(gamma, opts.eps))
        .collect::<Result<Vec<_>>>()?;
    let mut table = FinalSizeTable::new(p)?;
    if let Some(k) = ks.iter().copied().filter(|&k| k <= opts.k_cap).max() {
        table.extend_to(k);
    }
    let mut rows = Vec::with_capacity(params.len());
    for (&(c, beta, gamma), &k) in params.iter().zip(&ks) {
        let mut row = SweepRow {
            c,
            p,
            mu,
            beta,
            gamma,
            r_nought: f64::NAN,
            pi: f64::NAN,
            truncation_k: k,
            near_critical: false,
            capacity_exceeded: k > opts.k_cap,
        };
        if !row.capacity_exceeded {
            let sol = BranchingModel::with_table(beta, gamma, opts.eps, opts.k_cap, &mut table)?.extinction()?;
            row.r_nought = sol.r_nought;
            row.pi = sol.pi;
            row.near_critical = sol.near_critical;
        }
        rows.push(row);
    }
    let c_star = locate_crossing(mu, &rows, opts, &mut table)?;
    Ok((rows, Crossing { p, c_star }))
}

/// Bisection for `R0(c) = 1` inside the first grid interval where `R0`
/// moves from below 1 to at least 1.
fn locate_crossing(mu: f64, rows: &[SweepRow], opts: SweepOptions, table: &mut FinalSizeTable) -> Result<Option<f64>> {
    let valid: Vec<&SweepRow> = rows.iter().filter(|r| !r.capacity_exceeded).collect();
    let Some(w) = valid
        .windows(2)
        .find(|w| w[0].r_nought < 1.0 && w[1].r_nought >= 1.0)
    else {
        return Ok(None);
    };
    let (mut lo, mut hi) = (w[0].c, w[1].c);
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (beta, gamma) = solve_params(mid, mu)?;
        let model = BranchingModel::with_table(beta, gamma, opts.eps, opts.k_cap, table)?;
        if model.r_nought() < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationRow {
    pub c: f64,
    pub mu: f64,
    pub p: f64,
    pub n: usize,
    pub trials: usize,
    pub pi_theory: f64,
    pub pi_hat: f64,
    /// `sqrt(pi (1 - pi) / trials)` with the theoretical `pi`.
    pub stderr: f64,
    pub z: f64,
}

/// Monte Carlo large-outbreak fraction against theory at each `(c, mu, p)`.
/// Point `i` runs with master seed `derive_seed(master_seed, i)`.
pub fn mc_validation(points: &[(f64, f64, f64)], n: usize, trials: usize, master_seed: u64) -> Result<Vec<ValidationRow>> {
    points
        .iter()
        .enumerate()
        .map(|(i, &(c, mu, p))| {
            let params = GraphParams::from_clustering(n, c, mu)?;
            let sol = BranchingModel::new(params.beta(), params.gamma(), p)?.extinction()?;
            let mc = monte_carlo(&McConfig::new(params, p, trials, derive_seed(master_seed, i as u64)))?;
            let pi = sol.pi;
            let pi_hat = mc.summary.fraction_large;
            let stderr = (pi * (1.0 - pi) / trials as f64).sqrt();
            let z = if pi_hat == pi { 0.0 } else { (pi_hat - pi) / stderr };
            Ok(ValidationRow {
                c,
                mu,
                p,
                n,
                trials,
                pi_theory: pi,
                pi_hat,
                stderr,
                z,
            })
        })
        .collect()
}

/// Total variation between the empirical law of small final sizes and the
/// total-progeny law, both conditioned on size below `threshold`.
pub fn small_outbreak_tv(records: &[TrialRecord], threshold: usize, progeny: &TotalProgeny) -> Result<f64> {
    if progeny.pmf.len() + 1 < threshold {
        return Err(Error::capacity(format!(
            "total progeny computed to {} but threshold is {threshold}",
            progeny.pmf.len()
        )));
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut small = 0usize;
    for r in records.iter().filter(|r| r.final_size < threshold) {
        *counts.entry(r.final_size).or_default() += 1;
        small += 1;
    }
    if small == 0 {
        return Err(Error::domain("no small outbreaks to compare"));
    }
    let mass: f64 = (1..threshold).map(|k| progeny.prob(k)).sum();
    let tv = (1..threshold)
        .map(|k| {
            let emp = counts.get(&k).copied().unwrap_or(0) as f64 / small as f64;
            (emp - progeny.prob(k) / mass).abs()
        })
        .sum::<f64>();
    Ok(0.5 * tv)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    pub beta: f64,
    pub gamma: f64,
    /// 1 for the unthinned graph.
    pub p: f64,
    pub replicate: usize,
    pub k4: u64,
    pub k4_prime: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusMean {
    pub n: usize,
    pub unthinned_k4: f64,
    pub unthinned_k4_prime: f64,
    pub thinned_k4: f64,
    pub thinned_k4_prime: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusStudy {
    pub rows: Vec<CensusRow>,
    pub means: Vec<CensusMean>,
}

pub const MAX_CENSUS_N: usize = 20_000;

/// For each `n` and replicate, samples one graph and counts motifs in it
/// (row with `p = 1`) and in its `p`-thinning (row with the given `p`).
pub fn census_scaling(
    beta: f64,
    gamma: f64,
    p: f64,
    n_list: &[usize],
    replicates: usize,
    master_seed: u64,
) -> Result<CensusStudy> {
    check_probability(p)?;
    if replicates == 0 {
        return Err(Error::domain("replicate count must be at least 1"));
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("n list must be non-empty and strictly ascending"));
    }
    if let Some(&n) = n_list.iter().find(|&&n| n > MAX_CENSUS_N) {
        return Err(Error::domain(format!("census n {n} exceeds {MAX_CENSUS_N}")));
    }
    let params = n_list
        .iter()
        .map(|&n| GraphParams::new(n, beta, gamma))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..params.len())
        .flat_map(|i| (0..replicates).map(move |r| (i, r)))
        .collect();
    let pairs = jobs
        .par_iter()
        .map(|&(i, rep)| {
            let params = &params[i];
            let mut rng = rng_from_seed(derive_seed_path(master_seed, &[params.n() as u64, rep as u64]));
            let g = project(&sample_bipartite(params, rng.next_u64())?);
            let full = census4(&g)?;
            let thinned = census4(&thin(&g, p, rng.next_u64())?)?;
            let row = |p: f64, c: crate::motifs::MotifCounts| CensusRow {
                n: params.n(),
                beta,
                gamma,
                p,
                replicate: rep,
                k4: c.k4,
                k4_prime: c.k4_prime,
            };
            Ok((row(1.0, full), row(p, thinned)))
        })
        .collect::<Result<Vec<_>>>()?;
    let means = n_list
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let chunk = &pairs[i * replicates..(i + 1) * replicates];
            let avg = |f: &dyn Fn(&(CensusRow, CensusRow)) -> u64| {
                chunk.iter().map(f).sum::<u64>() as f64 / replicates as f64
            };
            CensusMean {
                n,
                unthinned_k4: avg(&|r| r.0.k4),
                unthinned_k4_prime: avg(&|r| r.0.k4_prime),
                thinned_k4: avg(&|r| r.1.k4),
                thinned_k4_prime: avg(&|r| r.1.k4_prime),
            }
        })
        .collect();
    let rows = pairs.into_iter().flat_map(|(a, b)| [a, b]).collect();
    Ok(CensusStudy { rows, means })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallCheck {
    pub n: usize,
    pub beta: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub radius: usize,
    pub samples: usize,
    pub trees: usize,
    pub fraction: f64,
}

/// `0.99 / (2 ln(beta gamma^2))`, just inside the admissible range, or 1
/// when `beta gamma^2 <= 1` leaves it unconstrained.
pub fn default_kappa(beta: f64, gamma: f64) -> f64 {
    let l = (beta * gamma * gamma).ln();
    if l > 0.0 {
        0.99 / (2.0 * l)
    } else {
        1.0
    }
}

/// Samples `samples` independent (graph, root) pairs and reports how often
/// the bipartite ball of radius `floor(kappa ln n)` around the root is a
/// tree.
pub fn ball_check(params: &GraphParams, kappa: f64, samples: usize, master_seed: u64) -> Result<BallCheck> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::domain(format!("kappa must be positive, got {kappa}")));
    }
    if samples == 0 {
        return Err(Error::domain("sample count must be at least 1"));
    }
    let radius = (kappa * (params.n() as f64).ln()).floor() as usize;
    let hits = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = rng_from_seed(derive_seed(master_seed, s as u64));
            let b = sample_bipartite(params, rng.next_u64())?;
            let root = rng.random_range(0..params.n());
            ball_is_tree(&b, root, radius)
        })
        .collect::<Result<Vec<bool>>>()?;
    let trees = hits.iter().filter(|&&t| t).count();
    Ok(BallCheck {
        n: params.n(),
        beta: params.beta(),
        gamma: params.gamma(),
        kappa,
        radius,
        samples,
        trees,
        fraction: trees as f64 / samples as f64,
    })
}

/// Total variation between a graph's degree histogram and the limiting
/// compound-Poisson degree law.
pub fn degree_tv(g: &IntersectionGraph, beta: f64, gamma: f64) -> Result<f64> {
    let hist = degree_histogram(g);
    let max_deg = hist.keys().next_back().copied().unwrap_or(0);
    let pmf = compound_poisson_degree_pmf(beta, gamma, max_deg)?;
    let n = g.n() as f64;
    let covered: f64 = pmf
        .iter()
        .enumerate()
        .map(|(d, &q)| (hist.get(&d).copied().unwrap_or(0) as f64 / n - q).abs())
        .sum();
    let beyond = (1.0 - pmf.iter().sum::<f64>()).max(0.0);
    Ok(0.5 * (covered + beyond))
}
