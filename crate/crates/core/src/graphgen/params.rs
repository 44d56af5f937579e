use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Model parameters `(n, beta, gamma)` of the random intersection graph with
/// `m = floor(beta n)` groups and membership probability `gamma / n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    n: usize,
    beta: f64,
    gamma: f64,
}

impl GraphParams {
    pub fn new(n: usize, beta: f64, gamma: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("n must be at least 2, got {n}")));
        }
        if n as u64 > u32::MAX as u64 {
            return Err(Error::domain(format!("n must fit in 32 bits, got {n}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::domain(format!("beta must be positive and finite, got {beta}")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::domain(format!("gamma must be positive and finite, got {gamma}")));
        }
        if gamma / n as f64 > 1.0 {
            return Err(Error::domain(format!(
                "membership probability gamma/n = {} exceeds 1",
                gamma / n as f64
            )));
        }
        let params = GraphParams { n, beta, gamma };
        if params.m() < 1 {
            return Err(Error::domain(format!(
                "group count floor(beta n) = 0 for beta = {beta}, n = {n}"
            )));
        }
        Ok(params)
    }

    /// Parameters with the given asymptotic clustering `c` and mean degree `mu`.
    pub fn from_clustering(n: usize, c: f64, mu: f64) -> Result<Self> {
        let (beta, gamma) = solve_params(c, mu)?;
        GraphParams::new(n, beta, gamma)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Number of groups.
    pub fn m(&self) -> usize {
        (self.beta * self.n as f64).floor() as usize
    }

    /// Membership probability.
    pub fn r(&self) -> f64 {
        self.gamma / self.n as f64
    }

    /// Limiting mean degree.
    pub fn mu(&self) -> f64 {
        mean_degree(self.beta, self.gamma)
    }

    /// Limiting clustering.
    pub fn c(&self) -> f64 {
        clustering(self.beta, self.gamma)
    }
}

pub fn mean_degree(beta: f64, gamma: f64) -> f64 {
    beta * gamma * gamma
}

pub fn clustering(beta: f64, gamma: f64) -> f64 {
    1.0 / (1.0 + beta * gamma)
}

/// Inverts `(beta, gamma) -> (c, mu)`: `gamma = mu c / (1 - c)`,
/// `beta = (1 - c)^2 / (mu c^2)`.
pub fn solve_params(c: f64, mu: f64) -> Result<(f64, f64)> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::domain(format!("clustering c must lie in (0, 1), got {c}")));
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::domain(format!("mean degree mu must be positive, got {mu}")));
    }
    let gamma = mu * c / (1.0 - c);
    let beta = (1.0 - c) * (1.0 - c) / (mu * c * c);
    Ok((beta, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn half_clustering_mean_four() {
        let (beta, gamma) = solve_params(0.5, 4.0).unwrap();
        assert_eq!(beta, 0.25);
        assert_eq!(gamma, 4.0);
        assert_eq!(beta * gamma * gamma, 4.0);
        assert_eq!(beta * gamma, 1.0);
    }

    #[test]
    fn clustering_point_eight() {
        let (beta, gamma) = solve_params(0.8, 4.0).unwrap();
        assert!(rel(gamma, 16.0) < 1e-12);
        assert!(rel(beta, 1.0 / 64.0) < 1e-12);
        assert!(rel(mean_degree(beta, gamma), 4.0) < 1e-12);
        assert!(rel(clustering(beta, gamma), 0.8) < 1e-12);
    }

    #[test]
    fn low_clustering_sends_gamma_to_zero() {
        let mut last_gamma = f64::INFINITY;
        let mut last_groups = 0.0;
        for c in [1e-2, 1e-4, 1e-6, 1e-8] {
            let (beta, gamma) = solve_params(c, 4.0).unwrap();
            assert!(gamma < last_gamma);
            assert!(beta * gamma > last_groups);
            last_gamma = gamma;
            last_groups = beta * gamma;
        }
        assert!(last_gamma < 1e-7);
        assert!(last_groups > 1e7);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(solve_params(0.0, 4.0).is_err());
        assert!(solve_params(1.0, 4.0).is_err());
        assert!(solve_params(0.5, 0.0).is_err());
        assert!(solve_params(0.5, -1.0).is_err());
        assert!(GraphParams::new(1, 1.0, 0.5).is_err());
        assert!(GraphParams::new(10, 1.0, 0.0).is_err());
        assert!(GraphParams::new(10, 1.0, 11.0).is_err());
        assert!(GraphParams::new(10, 0.05, 1.0).is_err());
        assert!(GraphParams::new(10, 1.0, 10.0).is_ok());
    }

    #[test]
    fn derived_quantities() {
        let p = GraphParams::new(10_000, 0.25, 4.0).unwrap();
        assert_eq!(p.m(), 2500);
        assert_eq!(p.r(), 4e-4);
        assert_eq!(p.mu(), 4.0);
        assert_eq!(p.c(), 0.5);
    }

    proptest! {
        #[test]
        fn solve_params_roundtrip(c in 1e-4f64..0.999, mu in 0.01f64..100.0) {
            let (beta, gamma) = solve_params(c, mu).unwrap();
            prop_assert!(rel(mean_degree(beta, gamma), mu) <= 1e-12);
            prop_assert!(rel(clustering(beta, gamma), c) <= 1e-12);
        }
    }
}
