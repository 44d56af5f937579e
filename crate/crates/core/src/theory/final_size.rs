//! Reed-Frost final size in a homogeneously mixing group.
//!
//! `F_k` is the law of the number of group members ultimately infected,
//! excluding the index case, when one infective enters a group of `k`
//! susceptibles and every infective meets every other member with
//! probability `p`. `F_0` is the point mass at 0.
//!
//! The pmf comes from a forward pass over the chain state
//! `(susceptibles, infectives)`: from `(s, i)` the next generation has
//! `Binomial(s, 1 - (1 - p)^i)` new infectives. The pass uses only convex
//! combinations, unlike the classical triangular system which divides by
//! powers of `1 - p`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphgen::check_probability;

/// Largest group size accepted by default.
pub const DEFAULT_K_CAP: usize = 1000;

/// Terms of a binomial row below this are dropped.
const NEGLIGIBLE: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq)]
pub struct FinalSizeDist {
    pub k: usize,
    pub p: f64,
    /// `pmf[j]` = P(j of the k susceptibles are infected).
    pub pmf: Vec<f64>,
    pub mean: f64,
}

impl FinalSizeDist {
    fn from_pmf(k: usize, p: f64, pmf: Vec<f64>) -> Self {
        let mean = pmf.iter().enumerate().map(|(j, w)| j as f64 * w).sum();
        FinalSizeDist { k, p, pmf, mean }
    }
}

pub fn final_size_dist(k: usize, p: f64) -> Result<FinalSizeDist> {
    final_size_dist_capped(k, p, DEFAULT_K_CAP)
}

pub fn final_size_dist_capped(k: usize, p: f64, cap: usize) -> Result<FinalSizeDist> {
    check_probability(p)?;
    if k > cap {
        return Err(Error::capacity(format!("group size {k} exceeds cap {cap}")));
    }
    let ln_fact = ln_factorials(k);
    Ok(FinalSizeDist::from_pmf(k, p, chain_pmf(k, p, &ln_fact)))
}

/// `F_0, ..., F_K` for one transmission probability.
#[derive(Clone, Debug)]
pub struct FinalSizeTable {
    p: f64,
    rows: Vec<Vec<f64>>,
}

impl FinalSizeTable {
    pub fn new(p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(FinalSizeTable {
            p,
            rows: Vec::new(),
        })
    }

    pub fn build(p: f64, k_max: usize) -> Result<Self> {
        let mut table = Self::new(p)?;
        table.extend_to(k_max);
        Ok(table)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Largest `k` held, if any.
    pub fn k_max(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    /// Computes the missing rows up to `k_max`. Rows are independent and are
    /// computed in parallel.
    pub fn extend_to(&mut self, k_max: usize) {
        let start = self.rows.len();
        if k_max < start {
            return;
        }
        let ln_fact = ln_factorials(k_max);
        let p = self.p;
        // Largest rows first so the expensive ones start early.
        let mut fresh: Vec<(usize, Vec<f64>)> = (start..=k_max)
            .rev()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|k| (k, chain_pmf(k, p, &ln_fact)))
            .collect();
        fresh.sort_unstable_by_key(|(k, _)| *k);
        self.rows.extend(fresh.into_iter().map(|(_, row)| row));
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k]
    }

    pub fn dist(&self, k: usize) -> FinalSizeDist {
        FinalSizeDist::from_pmf(k, self.p, self.rows[k].clone())
    }
}

pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

fn chain_pmf(k: usize, p: f64, ln_fact: &[f64]) -> Vec<f64> {
    let mut pmf = vec![0.0; k + 1];
    if p == 0.0 || k == 0 {
        pmf[0] = 1.0;
        return pmf;
    }
    if p == 1.0 {
        pmf[k] = 1.0;
        return pmf;
    }
    let ln_q = (-p).ln_1p();
    // mass[s * width + i]: probability of reaching s susceptibles with i
    // current infectives, 1 <= i <= k + 1 - s.
    let width = k + 2;
    let mut mass = vec![0.0; width * width];
    mass[k * width + 1] = 1.0;
    let mut row = vec![0.0; k + 1];
    for s in (0..=k).rev() {
        for i in 1..=(k + 1 - s) {
            let m = mass[s * width + i];
            if m == 0.0 {
                continue;
            }
            if s == 0 {
                pmf[k] += m;
                continue;
            }
            let (lo, hi) = binomial_row(s, i as f64 * ln_q, ln_fact, &mut row);
            for (j, &b) in row[lo..=hi].iter().enumerate() {
                let j = lo + j;
                if j == 0 {
                    pmf[k - s] += m * b;
                } else {
                    mass[(s - j) * width + j] += m * b;
                }
            }
        }
    }
    pmf
}

/// Fills `row[lo..=hi]` with the Binomial(s, 1 - exp(ln_fail)) pmf, dropping
/// negligible terms and renormalizing what is kept.
fn binomial_row(s: usize, ln_fail: f64, ln_fact: &[f64], row: &mut [f64]) -> (usize, usize) {
    let fail = ln_fail.exp();
    if fail == 0.0 {
        row[s] = 1.0;
        return (s, s);
    }
    let succ = -ln_fail.exp_m1();
    let ln_succ = succ.ln();
    let mode = (((s + 1) as f64 * succ).floor() as usize).min(s);
    let ln_mode = ln_fact[s] - ln_fact[mode] - ln_fact[s - mode]
        + mode as f64 * ln_succ
        + (s - mode) as f64 * ln_fail;
    row[mode] = ln_mode.exp();
    let odds = succ / fail;
    let mut hi = mode;
    while hi < s {
        let next = row[hi] * (s - hi) as f64 / (hi + 1) as f64 * odds;
        if next < NEGLIGIBLE {
            break;
        }
        hi += 1;
        row[hi] = next;
    }
    let mut lo = mode;
    while lo > 0 {
        let next = row[lo] * lo as f64 / (s - lo + 1) as f64 / odds;
        if next < NEGLIGIBLE {
            break;
        }
        lo -= 1;
        row[lo] = next;
    }
    let total: f64 = row[lo..=hi].iter().sum();
    for b in &mut row[lo..=hi] {
        *b /= total;
    }
    (lo, hi)
}
