use rigepi::graphgen::{project, sample_bipartite, sample_intersection, triangle_count, GraphParams};

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, v.sqrt())
}

/// Direct sampler against the exact expected edge count and against the
/// full membership sampler's triangle counts.
#[test]
fn direct_sampler_has_projection_law() {
    // Small P(size >= 2) (cdf walk) and large (rejection) regimes.
    for &(n, beta, gamma) in &[(400, 50.0, 0.08), (300, 0.5, 3.0), (100, 0.05, 20.0)] {
        let params = GraphParams::new(n, beta, gamma).unwrap();
        let reps = 3000;
        let mut edges = Vec::new();
        let mut tri_direct = Vec::new();
        let mut tri_full = Vec::new();
        for s in 0..reps {
            let g = sample_intersection(&params, s).unwrap();
            edges.push(g.edge_count() as f64);
            tri_direct.push(triangle_count(&g) as f64);
            let h = project(&sample_bipartite(&params, s + 1_000_000).unwrap());
            tri_full.push(triangle_count(&h) as f64);
        }
        let r2 = params.r() * params.r();
        let pairs = (n * (n - 1) / 2) as f64;
        let expected = pairs * (1.0 - (1.0 - r2).powi(params.m() as i32));
        let (m, sd) = mean_sd(&edges);
        assert!((m - expected).abs() <= 3.0 * sd / (reps as f64).sqrt(), "{n}: edges {m} vs {expected}");
        let (a, sa) = mean_sd(&tri_direct);
        let (b, sb) = mean_sd(&tri_full);
        let se = ((sa * sa + sb * sb) / reps as f64).sqrt();
        assert!((a - b).abs() <= 3.0 * se, "{n}: triangles {a} vs {b} (se {se})");
    }
}
