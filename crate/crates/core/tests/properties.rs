use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use lll::criteria::{abstract_lll_exact, cluster_vs_product_exact};
use lll::depgraph::{symmetrize, DependencyDigraph, DependencyGraph};
use lll::hypergraph::{missing_color_probability, monochromatic_probability, union_bound_probability};
use lll::moser_tardos::{Instance, RunOptions, Selection};
use lll::numeric::Precision;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `v -> v+1, ..., v+d` modulo `n`.
fn circulant(n: usize, d: usize) -> DependencyDigraph {
    DependencyDigraph::from_arcs(n, (1..=n).flat_map(|v| (1..=d).map(move |s| (v, (v - 1 + s) % n + 1)))).unwrap()
}

fn graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=12).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (Just(n), proptest::sample::subsequence(pairs, 0..=m.min(20)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weight_sum_below_product_with_equality_iff_edgeless(
        (n, edges) in graph(),
        ys in prop::collection::vec(1i64..=200, 12),
    ) {
        let g = DependencyGraph::from_edges(n, edges.iter().copied()).unwrap();
        let y: Vec<BigRational> = ys[..n].iter().map(|&v| rat(v, 100)).collect();
        let c = cluster_vs_product_exact(&g, &y, 128).unwrap();
        prop_assert!(c.cluster_dominates);
        prop_assert_eq!(c.cluster_bound == c.product_bound, edges.is_empty());
    }

    #[test]
    fn symmetrize_keeps_degrees(n in 1usize..10, arcs in prop::collection::vec((1usize..10, 1usize..10), 0..40)) {
        let mut d = DependencyDigraph::new(n);
        for (i, j) in arcs {
            if i <= n && j <= n && i != j {
                d.add_arc(i, j).unwrap();
            }
        }
        let g = symmetrize(&d);
        for v in 1..=n {
            prop_assert!(g.degree(v) >= d.out_degree(v));
        }
    }

    /// On a regular digraph with uniform `x = 1/(d+1)` the abstract check
    /// is `p <= d^d / (d+1)^(d+1)`.
    #[test]
    fn abstract_matches_symmetric_on_regular_digraphs(d in 1usize..8, extra in 0usize..4, num in 1i64..400) {
        let n = d + 1 + extra;
        let dg = circulant(n, d);
        let threshold = BigRational::new(
            num_traits::pow(BigInt::from(d), d),
            num_traits::pow(BigInt::from(d + 1), d + 1),
        );
        let p = &threshold * rat(num, 200);
        let x = vec![rat(1, d as i64 + 1); n];
        let v = abstract_lll_exact(&vec![p.clone(); n], &dg, &x, Precision::default()).unwrap();
        prop_assert_eq!(v.passes(), p <= threshold);
    }

    #[test]
    fn rainbow_probability_chain(k in 2u64..=8, extra in 0u64..30) {
        let r = k + extra;
        let n = missing_color_probability(r, k);
        let d = union_bound_probability(r, k);
        prop_assert!(n <= d);
        prop_assert!(&d / (BigRational::one() + &d) <= n);
        prop_assert_eq!(monochromatic_probability(r, k), BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(k), (r - 1) as usize)));
    }

    /// Parsing, serializing and parsing again gives the same run.
    #[test]
    fn instance_json_round_trip_preserves_runs(seed in any::<u64>(), random in any::<bool>()) {
        let text = r#"{
            "variables": [2, {"domain": 3, "pmf": [0.5, 0.25, 0.25]}, 2, 3],
            "events": [
                {"scope": [0, 1], "bad_assignments": [[0, 0], [1, 2]]},
                {"scope": [1, 2, 3], "predicate": "not_panchromatic", "k": 2},
                {"scope": [2, 3], "predicate": "monochromatic"}
            ]
        }"#;
        let a = Instance::from_json(text).unwrap().with_seed(seed);
        let b = Instance::from_json(&a.to_json().unwrap()).unwrap();
        let selection = if random { Selection::RandomUniform } else { Selection::LowestIndex };
        let opts = RunOptions { selection, max_steps: 500 };
        prop_assert_eq!(a.run(opts).unwrap(), b.run(opts).unwrap());
    }
}
