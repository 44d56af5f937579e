use serde::Serialize;

use super::final_size::{FinalSizeTable, DEFAULT_K_CAP};
use super::weights::{self, Truncated};
use crate::error::{Error, Result};
use crate::graphgen::{check_probability, GraphParams};

/// Default Poisson tail tolerance for the group-size truncation.
pub const DEFAULT_EPSILON: f64 = 1e-10;

/// Law of the local outbreak `R` an infective causes inside one group, mixed
/// over the group-size law.
#[derive(Clone, Debug, Serialize)]
pub struct LocalOutbreakDist {
    pub gamma: f64,
    pub p: f64,
    pub pmf: Vec<f64>,
    pub truncation_k: usize,
    /// Group-size mass beyond `truncation_k` that is left out of `pmf`.
    pub truncated_mass: f64,
    /// `E[R]`, including the estimated contribution of groups beyond
    /// `truncation_k` (see [`LocalOutbreakDist::tail_mean`]).
    pub mean: f64,
    /// Part of `mean` from groups larger than `truncation_k`, taking
    /// `E[F_k] = k E[F_K] / K` there. Exact for `p` in {0, 1}; in general it
    /// is bounded by `E[N; N > K]`.
    pub tail_mean: f64,
}

impl LocalOutbreakDist {
    fn mix(gamma: f64, sizes: &Truncated, table: &FinalSizeTable) -> Self {
        let big_k = sizes.k();
        let mut pmf = vec![0.0; big_k + 1];
        for (k, &w) in sizes.weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (j, &f) in table.row(k).iter().enumerate() {
                pmf[j] += w * f;
            }
        }
        let body: f64 = pmf.iter().enumerate().map(|(j, w)| j as f64 * w).sum();
        let tail_mean = sizes.tail_moment * table.dist(big_k).mean / big_k.max(1) as f64;
        LocalOutbreakDist {
            gamma,
            p: table.p(),
            pmf,
            truncation_k: big_k,
            truncated_mass: sizes.tail,
            mean: body + tail_mean,
            tail_mean,
        }
    }

    /// Total retained mass, `1 - truncated_mass` up to rounding.
    pub fn mass(&self) -> f64 {
        self.pmf.iter().sum()
    }

    /// pmf conditioned on the group size being at most `truncation_k`.
    pub fn normalized(&self) -> Vec<f64> {
        let mass = self.mass();
        self.pmf.iter().map(|w| w / mass).collect()
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1e-6 {
        Ok(())
    } else {
        Err(Error::domain(format!("tail tolerance must lie in (0, 1e-6], got {eps}")))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("gamma must be positive and finite, got {gamma}")))
    }
}

/// `R ~ sum_k F_k Poisson(gamma)(k)`, truncated where the Poisson tail drops
/// below `eps`.
pub fn local_outbreak_dist(gamma: f64, p: f64, eps: f64) -> Result<LocalOutbreakDist> {
    check_probability(p)?;
    let mut table = FinalSizeTable::new(p)?;
    local_outbreak_dist_with(gamma, eps, DEFAULT_K_CAP, &mut table)
}

/// As [`local_outbreak_dist`], reusing (and extending) a final-size table.
pub fn local_outbreak_dist_with(
    gamma: f64,
    eps: f64,
    cap: usize,
    table: &mut FinalSizeTable,
) -> Result<LocalOutbreakDist> {
    check_gamma(gamma)?;
    check_epsilon(eps)?;
    let sizes = weights::poisson(gamma, eps, cap)?;
    table.extend_to(sizes.k());
    Ok(LocalOutbreakDist::mix(gamma, &sizes, table))
}

/// Finite-population counterpart `R^(n)` with Binomial(n, gamma/n) group
/// sizes.
pub fn finite_local_outbreak_dist(
    params: &GraphParams,
    eps: f64,
    table: &mut FinalSizeTable,
) -> Result<LocalOutbreakDist> {
    check_epsilon(eps)?;
    let sizes = weights::binomial(params.n(), params.r(), eps, DEFAULT_K_CAP)?;
    table.extend_to(sizes.k());
    Ok(LocalOutbreakDist::mix(params.gamma(), &sizes, table))
}

/// Smallest truncation point the Poisson(gamma) mixture needs at tolerance
/// `eps`.
pub fn truncation_point(gamma: f64, eps: f64) -> Result<usize> {
    check_gamma(gamma)?;
    check_epsilon(eps)?;
    Ok(weights::poisson(gamma, eps, usize::MAX)?.k())
}
