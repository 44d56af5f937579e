use super::bipartite::{sample_edge_groups, BipartiteGraph};
use super::params::GraphParams;
use crate::error::{Error, Result};
use crate::seed::EdgeCoins;

/// Simple undirected graph on individuals, stored as sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGraph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl IntersectionGraph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        IntersectionGraph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Self-loops are rejected; repeated
    /// edges collapse into one.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::domain(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adjacency))
    }

    fn from_cliques(n: usize, groups: &[Vec<usize>]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for group in groups {
            for (i, &v) in group.iter().enumerate() {
                for &w in &group[i + 1..] {
                    adjacency[v].push(w);
                    adjacency[w].push(v);
                }
            }
        }
        Self::from_raw_adjacency(adjacency)
    }

    fn from_raw_adjacency(mut adjacency: Vec<Vec<usize>>) -> Self {
        let mut degree_sum = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        IntersectionGraph {
            adjacency,
            edge_count: degree_sum / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&w| w <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    /// Keeps only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Self {
        let mut adjacency = vec![Vec::new(); self.n()];
        let mut edge_count = 0;
        for (u, v) in self.edges() {
            if keep(u, v) {
                adjacency[u].push(v);
                adjacency[v].push(u);
                edge_count += 1;
            }
        }
        // Lexicographic edge order leaves every list sorted: smaller
        // neighbours are pushed before the vertex's own forward edges.
        debug_assert!(adjacency.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        IntersectionGraph {
            adjacency,
            edge_count,
        }
    }
}

/// Projects the membership graph onto individuals: `v ~ w` iff they share at
/// least one group. Multiple shared groups give a single edge.
pub fn project(b: &BipartiteGraph) -> IntersectionGraph {
    let mut adjacency: Vec<Vec<usize>> = (0..b.n())
        .map(|v| {
            let cap = b.groups_of(v).iter().map(|&a| b.group(a).len()).sum::<usize>();
            Vec::with_capacity(cap.saturating_sub(b.groups_of(v).len()))
        })
        .collect();
    for group in b.memberships() {
        for (i, &v) in group.iter().enumerate() {
            for &w in &group[i + 1..] {
                adjacency[v].push(w);
                adjacency[w].push(v);
            }
        }
    }
    IntersectionGraph::from_raw_adjacency(adjacency)
}

/// Samples the intersection graph directly from its edge-creating groups
/// (see [`sample_edge_groups`]).
pub fn sample_intersection(params: &GraphParams, seed: u64) -> Result<IntersectionGraph> {
    let groups = sample_edge_groups(params, seed)?;
    Ok(IntersectionGraph::from_cliques(params.n(), &groups))
}

/// Keeps each edge independently with probability `p`.
///
/// Edge `{u, v}` is kept iff its coin in the `seed` stream is below `p`; the
/// same stream drives the epidemic simulators, so the percolation cluster of
/// a vertex at `(p, seed)` is its component in `thin(g, p, seed)`.
pub fn thin(g: &IntersectionGraph, p: f64, seed: u64) -> Result<IntersectionGraph> {
    check_probability(p)?;
    let coins = EdgeCoins::new(seed);
    Ok(g.filter_edges(|u, v| coins.is_open(u, v, p)))
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("probability must lie in [0, 1], got {p}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::{sample_bipartite, GraphParams};
    use proptest::prelude::*;

    fn triangle() -> IntersectionGraph {
        IntersectionGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn empty_groups_project_to_empty_graph() {
        let b = BipartiteGraph::from_memberships(4, vec![vec![], vec![]]).unwrap();
        let g = project(&b);
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn one_group_is_a_clique() {
        let b = BipartiteGraph::from_memberships(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(project(&b), triangle());
    }

    #[test]
    fn shared_groups_deduplicate() {
        let b = BipartiteGraph::from_memberships(3, vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        let g = project(&b);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(IntersectionGraph::from_edges(3, [(0, 0)]).is_err());
        assert!(IntersectionGraph::from_edges(3, [(0, 3)]).is_err());
        let g = IntersectionGraph::from_edges(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn thin_extremes() {
        let params = GraphParams::new(500, 0.5, 3.0).unwrap();
        let g = project(&sample_bipartite(&params, 1).unwrap());
        assert_eq!(thin(&g, 1.0, 4).unwrap(), g);
        let empty = thin(&g, 0.0, 4).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert_eq!(empty.n(), g.n());
        assert!(thin(&g, 1.5, 4).is_err());
        assert!(thin(&g, -0.1, 4).is_err());
    }

    #[test]
    fn thin_half_keeps_binomial_count() {
        let params = GraphParams::new(20_000, 0.25, 4.0).unwrap();
        let g = project(&sample_bipartite(&params, 2).unwrap());
        let e = g.edge_count() as f64;
        let kept = thin(&g, 0.5, 77).unwrap().edge_count() as f64;
        assert!((kept - e / 2.0).abs() < 5.0 * (e * 0.25).sqrt());
    }

    fn small_params() -> impl Strategy<Value = (usize, f64, f64, u64)> {
        (5usize..50, 0.1f64..2.0, 0.5f64..4.0, any::<u64>())
            .prop_filter("valid", |(n, beta, gamma, _)| {
                GraphParams::new(*n, *beta, *gamma).is_ok()
            })
    }

    proptest! {
        #[test]
        fn projection_is_sound((n, beta, gamma, seed) in small_params()) {
            let params = GraphParams::new(n, beta, gamma).unwrap();
            let b = sample_bipartite(&params, seed).unwrap();
            let g = project(&b);
            let mut degree_sum = 0;
            for v in 0..n {
                prop_assert!(!g.neighbors(v).contains(&v));
                degree_sum += g.degree(v);
                for w in 0..n {
                    if v == w { continue; }
                    let share = b.memberships().iter().any(|grp| grp.contains(&v) && grp.contains(&w));
                    prop_assert_eq!(g.has_edge(v, w), share);
                    prop_assert_eq!(g.has_edge(v, w), g.has_edge(w, v));
                }
            }
            prop_assert_eq!(degree_sum, 2 * g.edge_count());
        }

        #[test]
        fn thinning_is_monotone((n, beta, gamma, seed) in small_params(), p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
            let params = GraphParams::new(n, beta, gamma).unwrap();
            let g = project(&sample_bipartite(&params, seed).unwrap());
            let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
            let a = thin(&g, lo, seed ^ 1).unwrap();
            let b = thin(&g, hi, seed ^ 1).unwrap();
            for (u, v) in a.edges() {
                prop_assert!(b.has_edge(u, v));
            }
            for (u, v) in b.edges() {
                prop_assert!(g.has_edge(u, v));
            }
        }
    }
}
