//! Truncated Poisson and binomial group-size weights.

use crate::error::{Error, Result};

/// Weights `w[0..=K]` of a nonnegative integer law truncated at `K`, the
/// smallest index with `P(N >= K) < eps`.
#[derive(Clone, Debug)]
pub(crate) struct Truncated {
    pub weights: Vec<f64>,
    /// `P(N > K)`.
    pub tail: f64,
    /// `E[N; N > K]`.
    pub tail_moment: f64,
}

impl Truncated {
    pub fn k(&self) -> usize {
        self.weights.len() - 1
    }
}

/// Truncates a pmf whose log-weights are produced in order by `next_log`.
/// `mode` is the index beyond which the weights decrease.
fn truncate(
    mode: usize,
    max_index: Option<usize>,
    eps: f64,
    cap: usize,
    mut next_log: impl FnMut(usize) -> f64,
) -> Result<Truncated> {
    let mut pmf = Vec::new();
    let mut k = 0usize;
    loop {
        let w = next_log(k).exp();
        pmf.push(w);
        if max_index == Some(k) || (k > mode && w < eps * 1e-20) || w.is_nan() {
            break;
        }
        k += 1;
    }
    // backward tail sums: tail_geq[k] = P(N >= k)
    let mut tail_geq = vec![0.0; pmf.len() + 1];
    for k in (0..pmf.len()).rev() {
        tail_geq[k] = tail_geq[k + 1] + pmf[k];
    }
    let big_k = (0..pmf.len())
        .find(|&k| tail_geq[k] < eps)
        .unwrap_or(pmf.len() - 1);
    if big_k > cap {
        return Err(Error::capacity(format!(
            "truncation point K = {big_k} exceeds cap {cap}"
        )));
    }
    let tail_moment = pmf.iter().enumerate().skip(big_k + 1).map(|(k, w)| k as f64 * w).sum();
    pmf.truncate(big_k + 1);
    Ok(Truncated {
        weights: pmf,
        tail: tail_geq[big_k + 1],
        tail_moment,
    })
}

pub(crate) fn poisson(mean: f64, eps: f64, cap: usize) -> Result<Truncated> {
    let ln_mean = mean.ln();
    let mut log_w = -mean;
    truncate(mean.floor() as usize, None, eps, cap, |k| {
        if k > 0 {
            log_w += ln_mean - (k as f64).ln();
        }
        log_w
    })
}

pub(crate) fn binomial(trials: usize, prob: f64, eps: f64, cap: usize) -> Result<Truncated> {
    if prob >= 1.0 {
        let mut weights = vec![0.0; trials + 1];
        weights[trials] = 1.0;
        if trials > cap {
            return Err(Error::capacity(format!("truncation point K = {trials} exceeds cap {cap}")));
        }
        return Ok(Truncated {
            weights,
            tail: 0.0,
            tail_moment: 0.0,
        });
    }
    let log_odds = prob.ln() - (-prob).ln_1p();
    let mut log_w = trials as f64 * (-prob).ln_1p();
    let mode = ((trials + 1) as f64 * prob).floor() as usize;
    truncate(mode, Some(trials), eps, cap, |k| {
        if k > 0 {
            log_w += ((trials - k + 1) as f64 / k as f64).ln() + log_odds;
        }
        log_w
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_truncation_point_is_minimal() {
        let t = poisson(4.0, 1e-10, 1000).unwrap();
        let k = t.k();
        let mass: f64 = t.weights.iter().sum();
        assert!((mass + t.tail - 1.0).abs() < 1e-13);
        // P(N >= K) < eps but P(N >= K - 1) >= eps
        assert!(t.tail + t.weights[k] < 1e-10);
        assert!(t.tail + t.weights[k] + t.weights[k - 1] >= 1e-10);
        assert!((t.weights[2] - 8.0 * (-4.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn poisson_cap_is_enforced() {
        assert!(matches!(poisson(2000.0, 1e-10, 1000), Err(Error::Capacity(_))));
    }

    #[test]
    fn binomial_weights() {
        let t = binomial(10, 0.3, 1e-10, 1000).unwrap();
        assert_eq!(t.k(), 10);
        assert!((t.weights[3] - 120.0 * 0.3f64.powi(3) * 0.7f64.powi(7)).abs() < 1e-14);
        let t = binomial(100_000, 4e-5, 1e-10, 1000).unwrap();
        let mass: f64 = t.weights.iter().sum();
        assert!((mass + t.tail - 1.0).abs() < 1e-12);
        assert!(t.tail < 1e-10);
    }
}
