use std::collections::VecDeque;

use rand::seq::index;
use rand_distr::{Binomial, Distribution};

use super::params::GraphParams;
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Individuals-by-groups membership structure.
///
/// `memberships[a]` lists the individuals of group `a`, sorted and
/// duplicate-free. The inverse index (groups of each individual) is built on
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteGraph {
    n: usize,
    params: Option<GraphParams>,
    memberships: Vec<Vec<usize>>,
    groups_of: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds a bipartite graph from explicit group lists. Lists are sorted
    /// and checked for duplicates and range.
    pub fn from_memberships(n: usize, mut memberships: Vec<Vec<usize>>) -> Result<Self> {
        for (a, members) in memberships.iter_mut().enumerate() {
            members.sort_unstable();
            if let Some(&last) = members.last() {
                if last >= n {
                    return Err(Error::domain(format!(
                        "group {a} lists individual {last} but n = {n}"
                    )));
                }
            }
            if members.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::domain(format!("group {a} lists an individual twice")));
            }
        }
        Ok(Self::from_sorted(n, None, memberships))
    }

    fn from_sorted(n: usize, params: Option<GraphParams>, memberships: Vec<Vec<usize>>) -> Self {
        let mut groups_of = vec![Vec::new(); n];
        for (a, members) in memberships.iter().enumerate() {
            for &v in members {
                groups_of[v].push(a);
            }
        }
        BipartiteGraph {
            n,
            params,
            memberships,
            groups_of,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of groups.
    pub fn m(&self) -> usize {
        self.memberships.len()
    }

    /// Parameters the graph was sampled from, if any.
    pub fn params(&self) -> Option<&GraphParams> {
        self.params.as_ref()
    }

    pub fn memberships(&self) -> &[Vec<usize>] {
        &self.memberships
    }

    pub fn group(&self, a: usize) -> &[usize] {
        &self.memberships[a]
    }

    /// Groups containing individual `v`, ascending.
    pub fn groups_of(&self, v: usize) -> &[usize] {
        &self.groups_of[v]
    }

    pub fn total_memberships(&self) -> usize {
        self.memberships.iter().map(Vec::len).sum()
    }
}

/// Samples the membership graph: every (individual, group) pair is present
/// independently with probability `gamma / n`.
///
/// Each group draws a Binomial(n, gamma/n) size and then that many distinct
/// individuals uniformly, which has the same law as per-pair coins at
/// O(total memberships) cost.
pub fn sample_bipartite(params: &GraphParams, seed: u64) -> Result<BipartiteGraph> {
    let n = params.n();
    let m = params.m();
    let size_law = Binomial::new(n as u64, params.r())
        .map_err(|e| Error::domain(format!("membership probability: {e}")))?;
    let mut rng = rng_from_seed(seed);
    let mut memberships = Vec::new();
    memberships
        .try_reserve_exact(m)
        .map_err(|e| Error::capacity(format!("cannot allocate {m} groups: {e}")))?;
    for _ in 0..m {
        let size = size_law.sample(&mut rng) as usize;
        let mut members = index::sample(&mut rng, n, size).into_vec();
        members.sort_unstable();
        memberships.push(members);
    }
    Ok(BipartiteGraph::from_sorted(n, Some(*params), memberships))
}

/// Samples only the groups with at least two members, which are the ones
/// that create edges. Their number is Binomial(m, P(size >= 2)) and their
/// sizes are i.i.d. Binomial(n, gamma/n) conditioned on being at least 2, so
/// the projected graph has exactly the law of `project(sample_bipartite(..))`
/// while the cost no longer grows with the number of empty or singleton
/// groups. Group identities are not kept.
pub fn sample_edge_groups(params: &GraphParams, seed: u64) -> Result<Vec<Vec<usize>>> {
    let n = params.n();
    let r = params.r();
    let mut rng = rng_from_seed(seed);
    let ln_q = (-r).ln_1p();
    let p0 = (n as f64 * ln_q).exp();
    let p1 = n as f64 * r * ((n - 1) as f64 * ln_q).exp();
    let q2 = (1.0 - p0 - p1).clamp(0.0, 1.0);
    if q2 == 0.0 {
        return Ok(Vec::new());
    }
    let count = Binomial::new(params.m() as u64, q2)
        .map_err(|e| Error::domain(format!("group count: {e}")))?
        .sample(&mut rng) as usize;
    let size_law = Binomial::new(n as u64, r).map_err(|e| Error::domain(format!("membership probability: {e}")))?;
    // Small q2 means sizes concentrate at 2 and 3: invert the conditional
    // cdf directly instead of rejecting most draws.
    let walk: Option<Vec<f64>> = (q2 < 0.5).then(|| {
        let mut cdf = Vec::new();
        let (mut w, mut acc) = (p1, 0.0);
        for k in 2..=n {
            w *= (n - k + 1) as f64 / k as f64 * r / (1.0 - r);
            acc += w;
            cdf.push(acc);
            if acc >= q2 * (1.0 - 1e-15) {
                break;
            }
        }
        cdf
    });
    let mut groups = Vec::with_capacity(count);
    for _ in 0..count {
        let size = match &walk {
            Some(cdf) => {
                let u = rand::Rng::random::<f64>(&mut rng) * cdf[cdf.len() - 1];
                2 + cdf.partition_point(|&c| c < u).min(cdf.len() - 1)
            }
            None => loop {
                let k = size_law.sample(&mut rng) as usize;
                if k >= 2 {
                    break k;
                }
            },
        };
        let mut members = index::sample(&mut rng, n, size).into_vec();
        members.sort_unstable();
        groups.push(members);
    }
    Ok(groups)
}

/// Checks whether the subgraph of the bipartite graph induced by all vertices
/// within distance `radius` of individual `root` is a tree.
///
/// Individuals and groups are both vertices; a ball is a tree iff its induced
/// edge count is one less than its vertex count (it is connected by
/// construction).
pub fn ball_is_tree(b: &BipartiteGraph, root: usize, radius: usize) -> Result<bool> {
    if root >= b.n() {
        return Err(Error::domain(format!("root {root} out of range for n = {}", b.n())));
    }
    // Bipartite vertex ids: individuals 0..n, groups n..n+m.
    let n = b.n();
    let mut dist = vec![usize::MAX; n + b.m()];
    let mut in_ball = Vec::new();
    let mut queue = VecDeque::new();
    dist[root] = 0;
    queue.push_back(root);
    while let Some(x) = queue.pop_front() {
        in_ball.push(x);
        let d = dist[x];
        if d == radius {
            continue;
        }
        if x < n {
            for &a in b.groups_of(x) {
                if dist[n + a] == usize::MAX {
                    dist[n + a] = d + 1;
                    queue.push_back(n + a);
                }
            }
        } else {
            for &v in b.group(x - n) {
                if dist[v] == usize::MAX {
                    dist[v] = d + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    let edges: usize = in_ball
        .iter()
        .filter(|&&x| x < n)
        .map(|&v| {
            b.groups_of(v)
                .iter()
                .filter(|&&a| dist[n + a] != usize::MAX)
                .count()
        })
        .sum();
    Ok(edges + 1 == in_ball.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_membership_probability() {
        let params = GraphParams::new(100, 1.0, 1e-9).unwrap();
        let b = sample_bipartite(&params, 3).unwrap();
        assert_eq!(b.m(), 100);
        assert_eq!(b.total_memberships(), 0);
    }

    #[test]
    fn total_memberships_match_binomial_mean() {
        let params = GraphParams::new(10_000, 0.25, 4.0).unwrap();
        let b = sample_bipartite(&params, 11).unwrap();
        let trials = (params.n() * params.m()) as f64;
        let mean = trials * params.r();
        let sd = (trials * params.r() * (1.0 - params.r())).sqrt();
        assert!((mean - 10_000.0).abs() < 1e-9);
        let total = b.total_memberships() as f64;
        assert!((total - mean).abs() < 5.0 * sd, "total {total}, mean {mean}, sd {sd}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let params = GraphParams::new(2_000, 0.5, 3.0).unwrap();
        let a = sample_bipartite(&params, 99).unwrap();
        let b = sample_bipartite(&params, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_bipartite(&params, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn groups_are_sorted_and_in_range() {
        let params = GraphParams::new(500, 0.4, 10.0).unwrap();
        let b = sample_bipartite(&params, 5).unwrap();
        for g in b.memberships() {
            assert!(g.windows(2).all(|w| w[0] < w[1]));
            assert!(g.iter().all(|&v| v < 500));
        }
        for v in 0..b.n() {
            for &a in b.groups_of(v) {
                assert!(b.group(a).binary_search(&v).is_ok());
            }
        }
    }

    #[test]
    fn from_memberships_validates() {
        assert!(BipartiteGraph::from_memberships(3, vec![vec![0, 3]]).is_err());
        assert!(BipartiteGraph::from_memberships(3, vec![vec![1, 1]]).is_err());
        let b = BipartiteGraph::from_memberships(3, vec![vec![2, 0]]).unwrap();
        assert_eq!(b.group(0), &[0, 2]);
    }

    #[test]
    fn star_ball_is_tree() {
        let b = BipartiteGraph::from_memberships(5, vec![vec![0, 1, 2, 3, 4]]).unwrap();
        assert!(ball_is_tree(&b, 0, 2).unwrap());
        assert!(ball_is_tree(&b, 3, 0).unwrap());
    }

    #[test]
    fn shared_pair_makes_a_cycle() {
        let b = BipartiteGraph::from_memberships(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert!(!ball_is_tree(&b, 0, 2).unwrap());
        // the cycle closes only at distance 2
        assert!(ball_is_tree(&b, 0, 1).unwrap());
    }

    #[test]
    fn ball_root_out_of_range() {
        let b = BipartiteGraph::from_memberships(2, vec![vec![0, 1]]).unwrap();
        assert!(ball_is_tree(&b, 2, 1).is_err());
    }
}
