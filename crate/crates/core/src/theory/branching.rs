//! The approximating branching process.
//!
//! An infective belongs to Poisson(beta gamma) groups and causes an
//! independent local outbreak `R` in each, so the offspring law is compound
//! Poisson with pgf `f(s) = exp{beta gamma (E[s^R] - 1)}`.

use serde::Serialize;

use super::final_size::{FinalSizeTable, DEFAULT_K_CAP};
use super::local::{finite_local_outbreak_dist, local_outbreak_dist_with, LocalOutbreakDist, DEFAULT_EPSILON};
use crate::error::{Error, Result};
use crate::graphgen::{clustering, GraphParams};

/// Fixed-point stopping tolerance.
pub const FIXED_POINT_TOL: f64 = 1e-12;
/// Iteration cap for the extinction fixed point.
pub const MAX_ITERATIONS: usize = 200_000;
/// `|R_0 - 1|` below which a point is reported as near-critical.
pub const NEAR_CRITICAL: f64 = 1e-6;
/// Largest total-progeny support accepted by [`BranchingModel::total_progeny`].
pub const MAX_PROGENY_SIZE: usize = 10_000;

#[derive(Clone, Debug)]
pub struct BranchingModel {
    beta: f64,
    gamma: f64,
    local: LocalOutbreakDist,
    /// `R` pmf renormalized to mass one.
    severity: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheorySolution {
    pub beta: f64,
    pub gamma: f64,
    pub p: f64,
    pub r_nought: f64,
    pub rho: f64,
    pub pi: f64,
    pub iterations: usize,
    pub residual: f64,
    pub truncation_k: usize,
    pub near_critical: bool,
    pub converged: bool,
}

/// Total progeny pmf on `{1, ..., max_size}`; `pmf[0]` is P(E = 1).
#[derive(Clone, Debug)]
pub struct TotalProgeny {
    pub pmf: Vec<f64>,
    /// `1 - sum(pmf)`, the mass of `E > max_size` including `E = infinity`.
    pub residual: f64,
}

impl TotalProgeny {
    pub fn prob(&self, size: usize) -> f64 {
        if size == 0 {
            0.0
        } else {
            self.pmf.get(size - 1).copied().unwrap_or(0.0)
        }
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {x}")))
    }
}

impl BranchingModel {
    pub fn new(beta: f64, gamma: f64, p: f64) -> Result<Self> {
        let mut table = FinalSizeTable::new(p)?;
        Self::with_table(beta, gamma, DEFAULT_EPSILON, DEFAULT_K_CAP, &mut table)
    }

    /// Builds the model reusing a final-size table for `p`.
    pub fn with_table(
        beta: f64,
        gamma: f64,
        eps: f64,
        cap: usize,
        table: &mut FinalSizeTable,
    ) -> Result<Self> {
        check_positive("beta", beta)?;
        let local = local_outbreak_dist_with(gamma, eps, cap, table)?;
        Ok(Self::from_local(beta, local))
    }

    pub fn from_local(beta: f64, local: LocalOutbreakDist) -> Self {
        let severity = local.normalized();
        BranchingModel {
            beta,
            gamma: local.gamma,
            local,
            severity,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p(&self) -> f64 {
        self.local.p
    }

    pub fn local(&self) -> &LocalOutbreakDist {
        &self.local
    }

    /// Mean number of groups per individual.
    fn group_rate(&self) -> f64 {
        self.beta * self.gamma
    }

    pub fn r_nought(&self) -> f64 {
        self.group_rate() * self.local.mean
    }

    /// `E[s^R]` under the normalized local-outbreak law.
    fn severity_pgf(&self, s: f64) -> f64 {
        self.severity.iter().rev().fold(0.0, |acc, &w| acc * s + w)
    }

    fn severity_pgf_derivative(&self, s: f64) -> f64 {
        self.severity
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (j, &w)| acc * s + j as f64 * w)
    }

    /// Offspring pgf `f(s)`.
    pub fn pgf(&self, s: f64) -> f64 {
        (self.group_rate() * (self.severity_pgf(s) - 1.0)).exp()
    }

    pub fn pgf_derivative(&self, s: f64) -> f64 {
        self.group_rate() * self.severity_pgf_derivative(s) * self.pgf(s)
    }

    /// Smallest root of `f(rho) = rho` by monotone iteration from 0.
    ///
    /// Aitken extrapolates are taken only when they stay left of the root
    /// (`f(s) >= s`), so the iterate sequence never passes the smallest root.
    pub fn extinction(&self) -> Result<TheorySolution> {
        let r_nought = self.r_nought();
        let near_critical = (r_nought - 1.0).abs() < NEAR_CRITICAL;
        if r_nought <= 1.0 {
            // A pgf with f'(1) <= 1 has no fixed point below 1.
            return Ok(TheorySolution {
                beta: self.beta,
                gamma: self.gamma,
                p: self.p(),
                r_nought,
                rho: 1.0,
                pi: 0.0,
                iterations: 0,
                residual: (self.pgf(1.0) - 1.0).abs(),
                truncation_k: self.local.truncation_k,
                near_critical,
                converged: true,
            });
        }
        let mut s = 0.0;
        let mut prev_delta: Option<f64> = None;
        let mut iterations = 0;
        let mut converged = false;
        while iterations < MAX_ITERATIONS {
            let next = self.pgf(s);
            iterations += 1;
            let delta = next - s;
            if delta <= 0.0 {
                converged = true;
                s = next.max(s);
                break;
            }
            let ratio = prev_delta.map(|d| delta / d);
            let small = delta < FIXED_POINT_TOL;
            let settled = match ratio {
                Some(r) if r < 1.0 => delta * r < FIXED_POINT_TOL * (1.0 - r),
                Some(_) => false,
                None => true,
            };
            if small && settled {
                s = next;
                converged = true;
                break;
            }
            if let Some(d0) = prev_delta {
                let curvature = delta - d0;
                if curvature < 0.0 {
                    let jump = next - delta * delta / curvature;
                    if jump > next && jump < 1.0 && self.pgf(jump) >= jump {
                        s = jump;
                        prev_delta = None;
                        continue;
                    }
                }
            }
            prev_delta = Some(delta);
            s = next;
        }
        let rho = s.min(1.0);
        let residual = (self.pgf(rho) - rho).abs();
        if !converged && !near_critical {
            return Err(Error::NonConvergence {
                iterations,
                residual,
            });
        }
        Ok(TheorySolution {
            beta: self.beta,
            gamma: self.gamma,
            p: self.p(),
            r_nought,
            rho,
            pi: 1.0 - rho,
            iterations,
            residual,
            truncation_k: self.local.truncation_k,
            near_critical,
            converged,
        })
    }

    /// Offspring pmf on `{0, ..., max}` by the compound-Poisson recursion.
    pub fn offspring_pmf(&self, max: usize) -> Vec<f64> {
        compound_poisson_pmf(self.group_rate(), &self.severity, max)
    }

    /// Total progeny law up to `max_size`, via the hitting-time identity
    /// `P(E = n) = P(S_n = n - 1) / n` where `S_n` is a sum of `n` offspring
    /// counts, itself compound Poisson with rate `n beta gamma`.
    pub fn total_progeny(&self, max_size: usize) -> Result<TotalProgeny> {
        if max_size == 0 || max_size > MAX_PROGENY_SIZE {
            return Err(Error::capacity(format!(
                "total progeny support must lie in 1..={MAX_PROGENY_SIZE}, got {max_size}"
            )));
        }
        let rate = self.group_rate();
        let pmf: Vec<f64> = (1..=max_size)
            .map(|n| scaled_compound_poisson_at(n as f64 * rate, &self.severity, n - 1) / n as f64)
            .collect();
        let residual = 1.0 - pmf.iter().sum::<f64>();
        Ok(TotalProgeny { pmf, residual })
    }
}

/// `P(S = target)` for `S` compound Poisson(rate, severity), with rescaling
/// so that large rates do not underflow the starting term.
fn scaled_compound_poisson_at(rate: f64, severity: &[f64], target: usize) -> f64 {
    const BIG: f64 = 1e200;
    let log_g0 = rate * (severity[0] - 1.0);
    if target == 0 {
        return log_g0.exp();
    }
    let jw: Vec<f64> = severity
        .iter()
        .enumerate()
        .map(|(j, &w)| rate * j as f64 * w)
        .collect();
    let top = jw.len() - 1;
    let mut g = Vec::with_capacity(target + 1);
    g.push(1.0);
    let mut log_scale = log_g0;
    for k in 1..=target {
        let reach = top.min(k);
        let mut acc = 0.0;
        for j in 1..=reach {
            acc += jw[j] * g[k - j];
        }
        let val = acc / k as f64;
        g.push(val);
        if val > BIG {
            for x in &mut g {
                *x /= BIG;
            }
            log_scale += BIG.ln();
        }
    }
    let last = g[target];
    if last == 0.0 {
        0.0
    } else {
        (log_scale + last.ln()).exp()
    }
}

/// Panjer recursion for a compound Poisson(rate) sum of i.i.d. terms with
/// pmf `severity`.
pub(crate) fn compound_poisson_pmf(rate: f64, severity: &[f64], max: usize) -> Vec<f64> {
    let mut g = Vec::with_capacity(max + 1);
    g.push((rate * (severity[0] - 1.0)).exp());
    for k in 1..=max {
        let reach = (severity.len() - 1).min(k);
        let acc: f64 = (1..=reach).map(|j| j as f64 * severity[j] * g[k - j]).sum();
        g.push(rate * acc / k as f64);
    }
    g
}

/// Finite-`n` offspring law with Binomial(n, gamma/n) group sizes:
/// `f_n(s) = (1 - gamma/n + (gamma/n) E[s^{R^(n)}])^m`.
#[derive(Clone, Debug)]
pub struct FiniteBranchingModel {
    params: GraphParams,
    local: LocalOutbreakDist,
    severity: Vec<f64>,
}

impl FiniteBranchingModel {
    pub fn new(params: &GraphParams, p: f64) -> Result<Self> {
        let mut table = FinalSizeTable::new(p)?;
        let local = finite_local_outbreak_dist(params, DEFAULT_EPSILON, &mut table)?;
        let severity = local.normalized();
        Ok(FiniteBranchingModel {
            params: *params,
            local,
            severity,
        })
    }

    pub fn local(&self) -> &LocalOutbreakDist {
        &self.local
    }

    pub fn pgf(&self, s: f64) -> f64 {
        let h = self.severity.iter().rev().fold(0.0, |acc, &w| acc * s + w);
        let r = self.params.r();
        (self.params.m() as f64 * (-r * (1.0 - h)).ln_1p()).exp()
    }
}

fn check_unit(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::domain(format!("pgf argument must lie in [0, 1], got {s}")))
    }
}

/// Offspring pgf `f(s) = exp{beta gamma (E[s^R] - 1)}`.
pub fn offspring_pgf(beta: f64, gamma: f64, p: f64, s: f64) -> Result<f64> {
    check_unit(s)?;
    Ok(BranchingModel::new(beta, gamma, p)?.pgf(s))
}

/// Finite-`n` offspring pgf `f_n(s)`.
pub fn finite_n_offspring_pgf(params: &GraphParams, p: f64, s: f64) -> Result<f64> {
    check_unit(s)?;
    Ok(FiniteBranchingModel::new(params, p)?.pgf(s))
}

/// `R_0 = beta gamma E[R]`.
pub fn r_nought(beta: f64, gamma: f64, p: f64) -> Result<f64> {
    Ok(BranchingModel::new(beta, gamma, p)?.r_nought())
}

pub fn extinction_prob(beta: f64, gamma: f64, p: f64) -> Result<TheorySolution> {
    BranchingModel::new(beta, gamma, p)?.extinction()
}

pub fn total_progeny_pmf(beta: f64, gamma: f64, p: f64, max_size: usize) -> Result<TotalProgeny> {
    BranchingModel::new(beta, gamma, p)?.total_progeny(max_size)
}

/// Limiting degree law: a Poisson(beta gamma) sum of Poisson(gamma) terms.
pub fn compound_poisson_degree_pmf(beta: f64, gamma: f64, max_degree: usize) -> Result<Vec<f64>> {
    check_positive("beta", beta)?;
    check_positive("gamma", gamma)?;
    let mut severity = Vec::with_capacity(max_degree + 1);
    let mut w = (-gamma).exp();
    severity.push(w);
    for j in 1..=max_degree {
        w *= gamma / j as f64;
        severity.push(w);
    }
    Ok(compound_poisson_pmf(beta * gamma, &severity, max_degree))
}

impl TheorySolution {
    pub fn mu(&self) -> f64 {
        self.beta * self.gamma * self.gamma
    }

    pub fn c(&self) -> f64 {
        clustering(self.beta, self.gamma)
    }
}
