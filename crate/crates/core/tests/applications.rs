use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::One;
use proptest::prelude::*;
use rand::Rng;
use rsgraph::channel::{build_schedule, partition_two, simulate, Policy};
use rsgraph::code_graph::{enumerate_cover, CodeGraphParams};
use rsgraph::codes::{build_chain, LinearCode};
use rsgraph::limits::{enumerate_triangles, triangle_graph, triangles_per_edge};
use rsgraph::lintest::{
    blr_trial, estimate_soundness, graph_test, trial_rng, walsh_correlation, BooleanFunction,
};
use rsgraph::vempala::{counterexample_partition, part_h_contribution, vempala_sum};
use rsgraph::{seeded_rng, Graph, Limits};

fn pinned() -> CodeGraphParams {
    let code = LinearCode::from_columns(4, vec![0b1111, 0b0011]).unwrap();
    CodeGraphParams::new(3, 4, 2, build_chain(&code, 2, None).unwrap()).unwrap()
}

fn brute_correlation(f: &BooleanFunction) -> Rational64 {
    let size = 1u64 << f.arity();
    (0..size)
        .map(|mask| {
            let agree = (0..size)
                .filter(|&x| f.eval(x) == ((x & mask).count_ones() % 2 == 1))
                .count() as i64;
            Rational64::new((2 * agree - size as i64).abs(), size as i64)
        })
        .max()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walsh_matches_brute_force(m in 1usize..=9, seed: u64) {
        let f = BooleanFunction::random(m, seed).unwrap();
        prop_assert_eq!(walsh_correlation(&f).unwrap(), brute_correlation(&f));
    }
}

#[test]
fn walsh_brute_force_at_twelve() {
    let f = BooleanFunction::and_padded(12).unwrap();
    assert_eq!(walsh_correlation(&f).unwrap(), brute_correlation(&f));
    assert_eq!(walsh_correlation(&f).unwrap(), Rational64::new(1, 2));
    let r = BooleanFunction::random(12, 77).unwrap();
    assert_eq!(walsh_correlation(&r).unwrap(), brute_correlation(&r));
}

#[test]
fn single_edge_test_matches_exhaustive_rate() {
    let f = BooleanFunction::and_padded(2).unwrap();
    let pass = (0..4u64)
        .flat_map(|x| (0..4u64).map(move |y| (x, y)))
        .filter(|&(x, y)| blr_trial(&f, x, y))
        .count();
    assert_eq!(pass, 10);
    let g = Graph::from_edges(2, [(0, 1)]).unwrap();
    let s = estimate_soundness(&g, &f, 20_000, 1).unwrap();
    let exact = 10.0 / 16.0;
    let sigma = (exact * (1.0 - exact) / 20_000f64).sqrt();
    assert!(
        (s.p_hat - exact).abs() <= 4.0 * sigma,
        "{} vs {exact}",
        s.p_hat
    );
}

#[test]
fn one_edge_graph_test_is_one_blr_trial() {
    let g = Graph::from_edges(2, [(0, 1)]).unwrap();
    let f = BooleanFunction::random(5, 3).unwrap();
    for seed in 0..200 {
        let mut rng = seeded_rng(seed);
        let x = rng.gen::<u64>() & f.domain_mask();
        let y = rng.gen::<u64>() & f.domain_mask();
        assert_eq!(graph_test(&g, &f, seed), blr_trial(&f, x, y));
    }
    let mut a = trial_rng(4, 9);
    let mut b = trial_rng(4, 9);
    assert_eq!(a.gen::<u64>(), b.gen::<u64>());
}

#[test]
fn triangle_graph_of_code_cover() {
    let cons = enumerate_cover(&pinned(), &Limits::default()).unwrap();
    let tri = triangle_graph(&cons.graph, &cons.cover).unwrap();
    assert!(2 * tri.crossing.len() >= cons.graph.edge_count());
    let found = enumerate_triangles(&tri.graph);
    assert_eq!(found.len(), tri.crossing.len());
    assert_eq!(tri.triangles.len(), tri.crossing.len());
    assert!(triangles_per_edge(&tri.graph).iter().all(|&k| k == 1));
    assert_eq!(tri.graph.edge_count(), 3 * tri.crossing.len());
}

#[test]
fn two_channel_pipeline() {
    let cp = partition_two(&pinned(), &Limits::default()).unwrap();
    assert_eq!(cp.cover_sizes(), vec![972, 81 * 81 - 3888]);
    for policy in [Policy::Sequential, Policy::RoundRobin] {
        let s = build_schedule(&cp, policy);
        let rep = simulate(&s, 81).unwrap();
        assert_eq!(rep.delivered, 81 * 81);
        assert!(rep.garbled_events.is_empty());
        assert_eq!(rep.rounds_used, 972 + 2673);
        assert_eq!(rep.parallel_rounds, 2673);
    }
}

#[test]
fn counterexample_identities() {
    let ce = counterexample_partition(&pinned(), &Limits::default()).unwrap();
    assert_eq!(ce.matching_parts, 972);
    assert_eq!(ce.missing_pairs, 2673);
    for id in 0..ce.matching_parts {
        assert_eq!(
            part_h_contribution(&ce.partition, id, &ce.h),
            BigRational::one()
        );
    }
    let sum = vempala_sum(&ce.partition);
    assert!(sum <= BigRational::from_integer(BigInt::from(972 + 2673)));
}
