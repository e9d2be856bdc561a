use proptest::prelude::*;
use rand::Rng;
use rsgraph::graph::{greedy_induced_matching_cover, is_induced_matching, verify_cover};
use rsgraph::limits::{check_min_degree_bound, uniformize};
use rsgraph::{seeded_rng, Graph, Matching};

fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn brute_induced(g: &Graph, m: &[(usize, usize)]) -> bool {
    for i in 0..m.len() {
        for j in 0..m.len() {
            if i == j {
                continue;
            }
            let (a, b) = m[i];
            let (c, d) = m[j];
            if a == c || a == d || b == c || b == d {
                return false;
            }
            if g.has_edge(a, c) || g.has_edge(a, d) || g.has_edge(b, c) || g.has_edge(b, d) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn greedy_cover_is_valid_and_small(n in 1usize..=200, density in 0.0f64..0.6, seed: u64) {
        let g = random_graph(n, density, seed);
        let cover = greedy_induced_matching_cover(&g);
        let report = verify_cover(&g, &cover);
        prop_assert!(report.valid, "{:?}", report.violations.first());
        let d = g.max_degree();
        prop_assert!(cover.len() <= 2 * d * d);
        let total: usize = cover.matchings().iter().map(|m| m.len()).sum();
        prop_assert_eq!(total, g.edge_count());
    }

    #[test]
    fn induced_check_matches_brute_force(n in 2usize..40, density in 0.0f64..0.5, seed: u64, picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        let g = random_graph(n, density, seed);
        prop_assume!(g.edge_count() > 0);
        let mut edges: Vec<_> = picks.iter().map(|ix| g.edges()[ix.index(g.edge_count())]).collect();
        edges.sort_unstable();
        edges.dedup();
        let fast = is_induced_matching(&g, &Matching::new(edges.clone())).unwrap();
        prop_assert_eq!(fast, brute_induced(&g, &edges));
    }

    #[test]
    fn uniform_subcovers_satisfy_min_degree(n in 2usize..80, density in 0.05f64..0.5, seed: u64) {
        let g = random_graph(n, density, seed);
        prop_assume!(g.edge_count() > 0);
        let cover = greedy_induced_matching_cover(&g);
        let (r_min, _) = cover.size_range();
        let uni = uniformize(&cover, r_min).unwrap();
        let kept: Vec<_> = uni.cover.matchings().iter().flat_map(|m| m.edges().iter().copied()).collect();
        let sub = Graph::from_edges(n, kept).unwrap();
        prop_assert!(verify_cover(&sub, &uni.cover).valid);
        prop_assert!(uni.dropped.len() <= (r_min - 1) * cover.len());
        let report = check_min_degree_bound(&sub, &uni.cover).unwrap();
        prop_assert!(report.holds());
    }
}

#[test]
fn non_edge_in_matching_is_an_error() {
    let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
    assert!(is_induced_matching(&g, &Matching::new(vec![(0, 2)])).is_err());
}
