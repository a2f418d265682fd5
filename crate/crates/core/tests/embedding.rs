use proptest::collection::vec;
use proptest::prelude::*;
use sigmax_core::embedding::{gaussian_kernel, geodesic_distances, hyperedge_vector, mds_embed, Embedding};
use sigmax_core::{Hyperedge, PurchaseNode, SocialGraph};

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mds_recovers_euclidean_distances(points in vec(vec(-5.0f64..5.0, 3), 3..10)) {
        let n = points.len();
        let d: Vec<f64> = (0..n * n).map(|x| dist(&points[x / n], &points[x % n])).collect();
        let m = mds_embed(&d, n, 3).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert!((dist(&m.coords[i], &m.coords[j]) - d[i * n + j]).abs() <= 1e-9);
            }
        }
        prop_assert_eq!(m, mds_embed(&d, n, 3).unwrap());
    }

    #[test]
    fn kernel_is_symmetric_and_monotone(x in vec(-3.0f64..3.0, 1..6), h in 0.0f64..4.0, scale in 1.0f64..3.0) {
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert_eq!(gaussian_kernel(&x, h), gaussian_kernel(&neg, h));
        let far: Vec<f64> = x.iter().map(|v| v * scale).collect();
        prop_assert!(gaussian_kernel(&far, h) <= gaussian_kernel(&x, h));
        let w = gaussian_kernel(&x, h);
        prop_assert!((0.0..=1.0).contains(&w));
    }

    #[test]
    fn hyperedge_vector_ignores_source_order(edges in vec((0usize..6, 0usize..6), 1..12), perm in Just(()).prop_perturb(|_, mut r| r.next_u64())) {
        let users = ["a", "b", "c", "d", "e", "f"];
        let mut g = SocialGraph::new();
        for u in users {
            g.add_user(u);
        }
        for (x, y) in edges {
            if x != y {
                g.add_edge(users[x], users[y]);
            }
        }
        let emb = Embedding::build(&g, &["i".into(), "j".into()], 3).unwrap();
        let mut sources: Vec<PurchaseNode> =
            ["a", "b", "c"].iter().zip(["i", "j", "i"]).map(|(u, i)| PurchaseNode::new(*u, i)).collect();
        let dest = PurchaseNode::new("f", "j");
        let base = hyperedge_vector(&Hyperedge::new(sources.clone(), dest.clone(), 0.5), &emb).unwrap();
        sources.rotate_left((perm % 3) as usize);
        if perm % 2 == 0 {
            sources.swap(0, 1);
        }
        let shuffled = hyperedge_vector(&Hyperedge::new(sources, dest, 0.1), &emb).unwrap();
        prop_assert_eq!(base.len(), 4 * 2 * 3);
        prop_assert_eq!(base, shuffled);
        prop_assert_eq!(geodesic_distances(&g), geodesic_distances(&g.clone()));
    }
}
