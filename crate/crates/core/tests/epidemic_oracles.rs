use rigepi::epidemic::{monte_carlo, percolation_cluster, reed_frost_run, McConfig};
use rigepi::experiments::{mc_validation, small_outbreak_tv};
use rigepi::graphgen::{GraphParams, IntersectionGraph};
use rigepi::theory::BranchingModel;

fn complete(n: usize) -> IntersectionGraph {
    IntersectionGraph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).unwrap()
}

/// Cluster-size law of vertex 0 over all open/closed edge patterns.
fn enumerate_cluster(g: &IntersectionGraph, p: f64) -> Vec<f64> {
    let edges: Vec<_> = g.edges().collect();
    let mut pmf = vec![0.0; g.n() + 1];
    for mask in 0u32..1 << edges.len() {
        let open = mask.count_ones() as i32;
        let w = p.powi(open) * (1.0 - p).powi(edges.len() as i32 - open);
        let mut reached = 1u32;
        loop {
            let before = reached;
            for (e, &(a, b)) in edges.iter().enumerate() {
                if mask >> e & 1 == 1 && (reached >> a & 1 | reached >> b & 1) == 1 {
                    reached |= 1 << a | 1 << b;
                }
            }
            if reached == before {
                break;
            }
        }
        pmf[reached.count_ones() as usize] += w;
    }
    pmf
}

fn assert_band(g: &IntersectionGraph, p: f64, run: impl Fn(u64) -> usize) {
    let seeds = 100_000;
    let oracle = enumerate_cluster(g, p);
    let mut counts = vec![0usize; g.n() + 1];
    for seed in 0..seeds {
        counts[run(seed)] += 1;
    }
    for (size, &q) in oracle.iter().enumerate() {
        let emp = counts[size] as f64 / seeds as f64;
        let se = (q * (1.0 - q) / seeds as f64).sqrt();
        assert!((emp - q).abs() <= 3.0 * se, "size {size}: {emp} vs {q}");
    }
}

#[test]
fn triangle_final_size_law() {
    let g = complete(3);
    let oracle = enumerate_cluster(&g, 0.5);
    assert_eq!(&oracle[1..], &[0.25, 0.25, 0.5]);
    assert_band(&g, 0.5, |seed| reed_frost_run(&g, 0.5, 0, seed).unwrap().final_size);
}

#[test]
fn k4_cluster_law() {
    let g = complete(4);
    assert_band(&g, 0.5, |seed| percolation_cluster(&g, 0.5, 0, seed).unwrap().final_size);
}

#[test]
fn small_outbreak_law_at_ten_thousand() {
    let params = GraphParams::from_clustering(10_000, 0.5, 4.0).unwrap();
    let cfg = McConfig::new(params, 0.5, 2000, 77);
    let mc = monte_carlo(&cfg).unwrap();
    let model = BranchingModel::new(params.beta(), params.gamma(), 0.5).unwrap();
    let progeny = model.total_progeny(cfg.threshold() - 1).unwrap();
    let tv = small_outbreak_tv(&mc.records, cfg.threshold(), &progeny).unwrap();
    assert!(tv <= 0.05, "tv {tv}");
}

#[test]
fn subcritical_point_has_no_large_outbreaks() {
    // c = 0.01, p = 0.2: R0 is about 0.8.
    let rows = mc_validation(&[(0.01, 4.0, 0.2)], 50_000, 1000, 5).unwrap();
    assert_eq!(rows[0].pi_theory, 0.0);
    assert_eq!(rows[0].pi_hat, 0.0);
}

#[test]
fn validation_point_within_three_errors() {
    let rows = mc_validation(&[(0.5, 4.0, 0.5)], 50_000, 2000, 6).unwrap();
    assert!(rows[0].z.abs() <= 3.0, "{:?}", rows[0]);
}
