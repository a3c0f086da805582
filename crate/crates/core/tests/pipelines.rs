//! End-to-end runs over the sample files in `data/`.

use lll::criteria::{abstract_lll, cluster_expansion};
use lll::depgraph::{parse_graph, GraphFile};
use lll::digraph_cycles::{degree_profile, even_cycle_condition, find_mod_k_cycle, has_mod_k_cycle_exhaustive};
use lll::hypergraph::{exhaustive_coloring, k_colorability_check, parse_hypergraph, solve_coloring, ColoringMode};
use lll::moser_tardos::{is_proper_witness_tree, replay_assignment, witness_trees, ExecutionLog, Instance, RunOptions};
use lll::numeric::{Decision, Precision};

const FANO: &str = include_str!("../../../data/fano.hg");
const K4: &str = include_str!("../../../data/k4triples.hg");
const CIRCULANT: &str = include_str!("../../../data/circulant8.dg");
const CYCLE6: &str = include_str!("../../../data/cycle6.dg");
const TRIANGLE: &str = include_str!("../../../data/triangle.g");
const TRIANGLE_2COL: &str = include_str!("../../../data/triangle2col.json");
const TWO_EVENTS: &str = include_str!("../../../data/two_events.json");

fn numbers(text: &str) -> Vec<f64> {
    text.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

fn digraph(text: &str) -> lll::depgraph::DependencyDigraph {
    match parse_graph(text).unwrap() {
        GraphFile::Digraph(d) => d,
        GraphFile::Graph(_) => panic!("expected a digraph"),
    }
}

#[test]
fn fano_is_a_negative_control() {
    let h = parse_hypergraph(FANO).unwrap();
    assert_eq!((h.num_vertices(), h.edge_count(), h.max_degree()), (7, 7, 3));
    assert!(exhaustive_coloring(&h, 2, ColoringMode::Proper).unwrap().is_none());
    let opts = RunOptions { max_steps: 2000, ..RunOptions::default() };
    let rep = solve_coloring(&h, 2, ColoringMode::Proper, 4, opts, Precision::default()).unwrap();
    assert!(rep.coloring.is_none());
    assert_eq!(rep.criterion.holds, Decision::Fails);
    // three colours are plenty
    let rep = solve_coloring(&h, 3, ColoringMode::Proper, 4, RunOptions::default(), Precision::default()).unwrap();
    assert!(rep.coloring.is_some());
}

#[test]
fn k4_triples_criterion_fails_but_colouring_exists() {
    let h = parse_hypergraph(K4).unwrap();
    assert_eq!(k_colorability_check(&h, 2, Precision::default()).unwrap().holds, Decision::Fails);
    assert!(exhaustive_coloring(&h, 2, ColoringMode::Proper).unwrap().is_some());
}

#[test]
fn triangle_criteria_from_files() {
    let file = parse_graph(TRIANGLE).unwrap();
    let g = file.clone().into_graph();
    assert_eq!(g.edge_count(), 3);
    let probs = numbers(include_str!("../../../data/triangle.probs"));
    let y = numbers(include_str!("../../../data/triangle.y"));
    let x = numbers(include_str!("../../../data/triangle.x"));
    let v = cluster_expansion(&probs, &g, &y, Precision::default()).unwrap();
    assert!(v.passes());
    // x = 1/5 on a triangle: x (1 - x)^2 = 0.128 >= 0.1, bound (4/5)^3
    let d = lll::depgraph::DependencyDigraph::from_arcs(3, g.edges().flat_map(|(a, b)| [(a, b), (b, a)])).unwrap();
    let v = abstract_lll(&probs, &d, &x, Precision::default()).unwrap();
    assert!(v.passes());
    assert!((v.lower_bound.unwrap().mid_f64() - 0.512).abs() < 1e-12);
}

#[test]
fn regular_digraph_has_even_cycle() {
    let d = digraph(CIRCULANT);
    let prof = degree_profile(&d);
    assert_eq!((prof.delta, prof.max_in), (8, 8));
    assert!(even_cycle_condition(8, 8, Precision::default()).unwrap().passes());
    let rep = find_mod_k_cycle(&d, 2, 1, RunOptions::default(), Precision::default()).unwrap();
    let cert = rep.certificate.unwrap();
    cert.verify(&d).unwrap();
    assert_eq!(cert.length % 2, 0);
}

#[test]
fn six_cycle_gives_length_six() {
    let d = digraph(CYCLE6);
    for k in [2, 3, 6] {
        let rep = find_mod_k_cycle(&d, k, 0, RunOptions::default(), Precision::default()).unwrap();
        assert_eq!(rep.certificate.unwrap().length, 6);
        assert!(has_mod_k_cycle_exhaustive(&d, k));
    }
    assert!(!has_mod_k_cycle_exhaustive(&d, 4));
}

#[test]
fn logs_replay_through_json() {
    let inst = Instance::from_json(TRIANGLE_2COL).unwrap();
    let opts = RunOptions { max_steps: 60, ..RunOptions::default() };
    let (log, stats) = inst.run(opts).unwrap();
    assert!(!log.terminated);
    assert_eq!(stats.total_resamples, 60);
    let back = ExecutionLog::from_json(&log.to_json().unwrap()).unwrap();
    assert_eq!(back, log);
    for t in [1, 30, 61] {
        let a = replay_assignment(&inst.space, &inst.events, &back, t).unwrap();
        assert_eq!(a.len(), 3);
    }
    assert_eq!(replay_assignment(&inst.space, &inst.events, &back, 61).unwrap(), log.final_assignment);
    for w in witness_trees(&log, &inst.events).unwrap() {
        assert!(is_proper_witness_tree(&w, &inst.events).unwrap());
    }
}

#[test]
fn satisfiable_instance_terminates() {
    let inst = Instance::from_json(TWO_EVENTS).unwrap();
    for seed in 0..50 {
        let (log, _) = inst.with_seed(seed).run(RunOptions::default()).unwrap();
        assert!(log.terminated);
        let a = &log.final_assignment;
        assert!(!(a[0] == 0 && a[1] == 0) && !(a[1] == 1 && a[2] == 1));
    }
}
