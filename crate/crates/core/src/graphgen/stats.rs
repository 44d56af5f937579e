use std::collections::BTreeMap;

use rand::Rng;

use super::intersection::IntersectionGraph;
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Largest vertex count for which [`transitivity`] counts triangles exactly.
pub const EXACT_TRANSITIVITY_LIMIT: usize = 100_000;
/// Wedges drawn by [`transitivity`] above the exact limit.
pub const DEFAULT_WEDGE_SAMPLES: usize = 1_000_000;
const WEDGE_SAMPLING_SEED: u64 = 0x7261_6e64_7765_6467;

/// Number of vertices of each degree.
pub fn degree_histogram(g: &IntersectionGraph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for v in 0..g.n() {
        *hist.entry(g.degree(v)).or_insert(0) += 1;
    }
    hist
}

pub fn mean_degree(g: &IntersectionGraph) -> f64 {
    2.0 * g.edge_count() as f64 / g.n() as f64
}

/// Number of paths of length two, `sum_v C(deg v, 2)`.
pub fn wedge_count(g: &IntersectionGraph) -> u64 {
    (0..g.n())
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum()
}

/// Number of triangles, each counted once.
pub fn triangle_count(g: &IntersectionGraph) -> u64 {
    let n = g.n();
    // Orient every edge towards the endpoint of higher (degree, id) rank.
    let rank = |v: usize| (g.degree(v), v);
    let forward: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            g.neighbors(u)
                .iter()
                .copied()
                .filter(|&w| rank(w) > rank(u))
                .collect()
        })
        .collect();
    let mut mark = vec![usize::MAX; n];
    let mut triangles = 0u64;
    for u in 0..n {
        for &v in &forward[u] {
            mark[v] = u;
        }
        for &v in &forward[u] {
            triangles += forward[v].iter().filter(|&&w| mark[w] == u).count() as u64;
        }
    }
    triangles
}

/// Global transitivity `3 * triangles / wedges`.
///
/// Counts exactly up to [`EXACT_TRANSITIVITY_LIMIT`] vertices and samples
/// [`DEFAULT_WEDGE_SAMPLES`] wedges (fixed seed) above it.
pub fn transitivity(g: &IntersectionGraph) -> Result<f64> {
    if g.n() <= EXACT_TRANSITIVITY_LIMIT {
        transitivity_exact(g)
    } else {
        transitivity_sampled(g, DEFAULT_WEDGE_SAMPLES, WEDGE_SAMPLING_SEED)
    }
}

pub fn transitivity_exact(g: &IntersectionGraph) -> Result<f64> {
    let wedges = wedge_count(g);
    if wedges == 0 {
        return Err(Error::NoWedges);
    }
    Ok(3.0 * triangle_count(g) as f64 / wedges as f64)
}

/// Fraction of closed wedges among `samples` wedges drawn uniformly.
pub fn transitivity_sampled(g: &IntersectionGraph, samples: usize, seed: u64) -> Result<f64> {
    let mut cumulative = Vec::with_capacity(g.n());
    let mut total = 0u64;
    for v in 0..g.n() {
        let d = g.degree(v) as u64;
        total += d * d.saturating_sub(1) / 2;
        cumulative.push(total);
    }
    if total == 0 {
        return Err(Error::NoWedges);
    }
    if samples == 0 {
        return Err(Error::domain("wedge sample count must be positive"));
    }
    let mut rng = rng_from_seed(seed);
    let mut closed = 0usize;
    for _ in 0..samples {
        let target = rng.random_range(0..total);
        let center = cumulative.partition_point(|&c| c <= target);
        let nbrs = g.neighbors(center);
        let i = rng.random_range(0..nbrs.len());
        let mut j = rng.random_range(0..nbrs.len() - 1);
        if j >= i {
            j += 1;
        }
        if g.has_edge(nbrs[i], nbrs[j]) {
            closed += 1;
        }
    }
    Ok(closed as f64 / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::{project, sample_bipartite, GraphParams};

    #[test]
    fn histogram_of_empty_graph() {
        let g = IntersectionGraph::empty(5);
        assert_eq!(degree_histogram(&g), BTreeMap::from([(0, 5)]));
    }

    #[test]
    fn histogram_of_triangle() {
        let g = IntersectionGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(degree_histogram(&g), BTreeMap::from([(2, 3)]));
    }

    #[test]
    fn histogram_sums() {
        let params = GraphParams::new(3000, 0.3, 3.0).unwrap();
        let g = project(&sample_bipartite(&params, 8).unwrap());
        let hist = degree_histogram(&g);
        assert_eq!(hist.values().sum::<usize>(), 3000);
        assert_eq!(hist.iter().map(|(d, c)| d * c).sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn transitivity_small_cases() {
        let tri = IntersectionGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(transitivity_exact(&tri).unwrap(), 1.0);
        let path = IntersectionGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(transitivity_exact(&path).unwrap(), 0.0);
        let single = IntersectionGraph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(transitivity(&single), Err(Error::NoWedges)));
        assert!(matches!(transitivity_sampled(&single, 10, 1), Err(Error::NoWedges)));
    }

    #[test]
    fn triangle_count_matches_brute_force() {
        let params = GraphParams::new(60, 0.5, 4.0).unwrap();
        for seed in 0..5 {
            let g = project(&sample_bipartite(&params, seed).unwrap());
            let mut brute = 0;
            for a in 0..60 {
                for b in a + 1..60 {
                    for c in b + 1..60 {
                        if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(triangle_count(&g), brute);
        }
    }

    #[test]
    fn sampled_transitivity_agrees_with_exact() {
        let params = GraphParams::new(20_000, 0.25, 4.0).unwrap();
        let g = project(&sample_bipartite(&params, 21).unwrap());
        let exact = transitivity_exact(&g).unwrap();
        let sampled = transitivity_sampled(&g, 200_000, 5).unwrap();
        // binomial standard error is about 1.1e-3
        assert!((exact - sampled).abs() < 6e-3, "{exact} vs {sampled}");
    }

    #[test]
    fn mean_degree_approaches_limit() {
        let gaps: Vec<f64> = [1_000usize, 10_000, 100_000]
            .iter()
            .map(|&n| {
                let params = GraphParams::new(n, 0.25, 4.0).unwrap();
                let reps = 2_000_000 / n;
                let total: f64 = (0..reps as u64)
                    .map(|s| mean_degree(&project(&sample_bipartite(&params, s).unwrap())))
                    .sum();
                (total / reps as f64 - params.mu()).abs()
            })
            .collect();
        assert!(gaps[0] > gaps[2], "{gaps:?}");
        assert!(gaps[2] < 0.05, "{gaps:?}");
    }
}
