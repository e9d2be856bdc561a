use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rsgraph::code_graph::{
    agreement_certificate, build_code_graph, class_canonical, enumerate_cover,
    missing_edge_count_bound, x_flip, CodeGraphParams, OrderedPair,
};
use rsgraph::codes::{build_chain, gv_search, LinearCode};
use rsgraph::graph::verify_cover;
use rsgraph::limits::check_min_degree_bound;
use rsgraph::{LatticeVertex, Limits};

fn pinned() -> CodeGraphParams {
    let code = LinearCode::from_columns(4, vec![0b1111, 0b0011]).unwrap();
    CodeGraphParams::new(3, 4, 2, build_chain(&code, 2, None).unwrap()).unwrap()
}

fn word(bits: u64, len: usize) -> Vec<bool> {
    (0..len).map(|j| bits >> j & 1 == 1).collect()
}

fn edge_strategy(c: u32, n: usize, d: usize) -> impl Strategy<Value = OrderedPair> {
    (
        proptest::collection::vec(1..=c, n),
        proptest::collection::vec(1..=c, n),
    )
        .prop_filter("pair must be an edge", move |(a, b)| {
            a.iter().zip(b).filter(|(x, y)| x == y).count() < d
        })
        .prop_map(move |(a, b)| {
            OrderedPair::new(
                LatticeVertex::new(a, c).unwrap(),
                LatticeVertex::new(b, c).unwrap(),
            )
            .unwrap()
        })
}

/// Brute-force class: all flips of `pr` by codewords of the matching chain code.
fn class(pr: &OrderedPair, p: &CodeGraphParams) -> Vec<OrderedPair> {
    let s = pr.agreement_set().len();
    let code = p.chain().for_agreements(s).unwrap();
    code.codewords()
        .into_iter()
        .map(|w| x_flip(pr, &word(w, code.n())).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_is_a_class_invariant(pr in edge_strategy(3, 4, 2), i in 0usize..4, j in 0usize..4) {
        let p = pinned();
        let members = class(&pr, &p);
        prop_assert_eq!(members.len(), 4);
        let canon = class_canonical(&pr, &p).unwrap();
        let swapped = OrderedPair::new(pr.b.clone(), pr.a.clone()).unwrap();
        prop_assert_eq!(class_canonical(&swapped, &p).unwrap(), canon.clone());
        // composed flips stay in the class
        let once = &members[i];
        let twice = &class(once, &p)[j];
        prop_assert_eq!(class_canonical(twice, &p).unwrap(), canon.clone());
        let least = members.iter().min_by_key(|q| q.ids(3)).unwrap();
        prop_assert_eq!(&canon, least);
    }

    #[test]
    fn flip_preserves_agreement_set(pr in edge_strategy(4, 6, 3), bits in any::<u64>()) {
        let len = 6 - pr.agreement_set().len();
        let f = x_flip(&pr, &word(bits, len)).unwrap();
        prop_assert_eq!(f.agreement_set(), pr.agreement_set());
        let back = x_flip(&f, &word(bits, len)).unwrap();
        prop_assert_eq!(back, pr);
    }
}

#[test]
fn pinned_instance_counts() {
    let p = pinned();
    let cons = enumerate_cover(&p, &Limits::default()).unwrap();
    assert_eq!(cons.graph.n_vertices(), 81);
    assert_eq!(cons.graph.edge_count(), 1944);
    assert_eq!(cons.cover.len(), 972);
    assert!(cons.cover.matchings().iter().all(|m| m.len() == 2));
    let report = verify_cover(&cons.graph, &cons.cover);
    assert!(report.valid);
    assert_eq!((report.r_min, report.r_max, report.t), (2, 2, 972));
    assert!(cons
        .cover
        .matchings()
        .iter()
        .all(|m| agreement_certificate(&p, m)));
    assert!((0..81).all(|v| cons.graph.complement_degree(v) == 32));
    assert_eq!(cons.graph.missing_edge_count(), 1296);
}

fn instances() -> Vec<CodeGraphParams> {
    let mut out = vec![pinned()];
    for (c, n, k, d, seed) in [
        (2u32, 6usize, 2usize, 2usize, 1u64),
        (3, 6, 2, 2, 2),
        (2, 7, 2, 3, 3),
        (3, 5, 2, 1, 5),
    ] {
        let code = gv_search(n, k, d - 1, seed, 500).unwrap();
        out.push(CodeGraphParams::new(c, n, d, build_chain(&code, d, None).unwrap()).unwrap());
    }
    let rep = LinearCode::repetition(5).unwrap();
    out.push(CodeGraphParams::new(2, 5, 3, build_chain(&rep, 3, None).unwrap()).unwrap());
    out
}

#[test]
fn construction_instances_are_exact() {
    for p in instances() {
        let cons = enumerate_cover(&p, &Limits::default()).unwrap();
        let report = verify_cover(&cons.graph, &cons.cover);
        assert!(report.valid, "C={} n={} d={}", p.c(), p.n(), p.d());
        let size = p.matching_size();
        assert_eq!(cons.graph.edge_count() % size, 0);
        assert_eq!(cons.cover.len(), cons.graph.edge_count() / size);
        assert!(cons
            .cover
            .matchings()
            .iter()
            .all(|m| m.len() == size && agreement_certificate(&p, m)));
        let bound = missing_edge_count_bound(p.c(), p.n(), p.d());
        let missing = BigRational::from_integer(BigInt::from(cons.graph.missing_edge_count()));
        assert!(bound.exact >= missing);
        if let Some(simple) = bound.simplified {
            assert!(BigRational::from_integer(simple.into()) >= missing);
        }
        assert!(check_min_degree_bound(&cons.graph, &cons.cover)
            .unwrap()
            .holds());
    }
}

#[test]
fn full_threshold_graph_is_complete() {
    let g = build_code_graph(3, 3, 3, &Limits::default()).unwrap();
    assert_eq!(g.edge_count(), 27 * 26 / 2);
    let b = missing_edge_count_bound(3, 3, 3);
    assert!(b.exact >= BigRational::from_integer(0.into()));
}

#[test]
fn graph_respects_vertex_cap() {
    let limits = Limits {
        max_vertices: 50,
        ..Limits::default()
    };
    assert!(build_code_graph(3, 4, 2, &limits).is_err());
}
