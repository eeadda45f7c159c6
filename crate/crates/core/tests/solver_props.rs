mod common;

use common::{arb_instance, complete};
use proptest::prelude::*;
use sdfvs::oracle::{brute_force_optimum, brute_force_solve, OracleBudget};
use sdfvs::sampling::{SamplingConfig, SamplingMode};
use sdfvs::solver::{
    edge_to_vertex, solve, solve_disjoint_compression, vertex_to_edge, verify_compression,
    verify_solution, CompressionInstance, EdgeInstance, SolverConfig,
};
use sdfvs::{Arc, ArcSet, Digraph, VertexId, VertexSet};

fn config(mode: SamplingMode, seed: u64) -> SolverConfig {
    SolverConfig {
        sampling: SamplingConfig { mode, seed, ..SamplingConfig::default() },
        ..SolverConfig::default()
    }
}

fn permuted(inst: &EdgeInstance, perm: &[usize]) -> EdgeInstance {
    let g = inst.graph();
    let map = |v: VertexId| perm[v.index()];
    let arcs: Vec<(usize, usize)> = g.arcs().iter().map(|a| (map(a.tail), map(a.head))).collect();
    let und: Vec<usize> = g.undeletable_set().into_iter().map(map).collect();
    let s: ArcSet = inst.s_arcs().iter().map(|a| Arc::from((map(a.tail), map(a.head)))).collect();
    EdgeInstance::new(Digraph::build(g.capacity(), &arcs, &und).unwrap(), s, inst.budget()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn exact_modes_agree_with_oracle(inst in arb_instance(7, 12, 3), seed in any::<u64>()) {
        let truth = brute_force_solve(&inst, &OracleBudget::default()).unwrap();
        let mut modes = vec![SamplingMode::ExhaustiveP];
        if inst.budget() <= 1 {
            modes.push(SamplingMode::Deterministic);
        }
        for mode in modes {
            let report = solve(&inst, &config(mode, seed)).unwrap();
            prop_assert!(report.exact);
            prop_assert_eq!(report.solution.is_some(), truth.is_some());
            if let Some(sol) = report.solution {
                prop_assert!(sol.certified && verify_solution(&inst, &sol.deleted));
                // Every strongly connected piece left behind, the last one
                // included, is free of S-arcs.
                let rest = inst.graph().delete_vertices(&sol.deleted).unwrap();
                for comp in rest.scc().components() {
                    let inside: VertexSet = comp.iter().copied().collect();
                    prop_assert!(!inst.s_arcs().iter().any(|a| inside.contains(&a.tail) && inside.contains(&a.head)));
                }
            }
        }
    }

    #[test]
    fn monte_carlo_is_sound(inst in arb_instance(8, 16, 3), seed in any::<u64>()) {
        let report = solve(&inst, &config(SamplingMode::MonteCarlo, seed)).unwrap();
        if let Some(sol) = report.solution {
            prop_assert!(verify_solution(&inst, &sol.deleted));
        } else {
            prop_assert!(!report.exact);
        }
    }

    #[test]
    fn disjoint_compression_agrees_with_oracle(inst in arb_instance(7, 12, 3), seed in any::<u64>()) {
        let budget = OracleBudget::default();
        let g = inst.graph();
        let Some(t) = brute_force_solve(&inst.with_budget(g.capacity()), &budget).unwrap() else {
            return Ok(());
        };
        let t = t.deleted;
        let comp = CompressionInstance::new(g.clone(), inst.s_arcs().clone(), t.clone(), inst.budget()).unwrap();
        let pinned = EdgeInstance::new(g.with_undeletable(&t), inst.s_arcs().clone(), inst.budget()).unwrap();
        let truth = brute_force_solve(&pinned, &budget).unwrap();
        let found = solve_disjoint_compression(&comp, &config(SamplingMode::ExhaustiveP, seed)).unwrap();
        prop_assert_eq!(found.is_some(), truth.is_some());
        if let Some(x) = found {
            prop_assert!(x.is_disjoint(&t));
            prop_assert!(verify_compression(&comp, &x));
        }
    }

    #[test]
    fn subdivision_preserves_answers(inst in arb_instance(5, 8, 3), every_arc in any::<bool>()) {
        let budget = OracleBudget { max_vertices: 16, ..OracleBudget::default() };
        let optimum = |i: &EdgeInstance| brute_force_optimum(i, 4, &budget).unwrap();
        let there = edge_to_vertex(&inst, every_arc);
        let back = vertex_to_edge(&there);
        let expected = brute_force_solve(&inst, &budget).unwrap().is_some();
        prop_assert_eq!(brute_force_solve(&back, &budget).unwrap().is_some(), expected);
        prop_assert_eq!(optimum(&back), optimum(&inst));
    }

    #[test]
    fn oracle_ignores_vertex_names(inst in arb_instance(7, 12, 3), perm in Just((0..7).collect::<Vec<usize>>()).prop_shuffle()) {
        let budget = OracleBudget::default();
        let n = inst.graph().capacity();
        let perm: Vec<usize> = perm.into_iter().filter(|&p| p < n).collect();
        let moved = permuted(&inst, &perm);
        prop_assert_eq!(
            brute_force_optimum(&inst, n, &budget).unwrap(),
            brute_force_optimum(&moved, n, &budget).unwrap()
        );
    }
}

#[test]
fn complete_graphs_need_all_but_one() {
    for n in 2..=5 {
        for k in 0..n {
            let inst = complete(n, k);
            let report = solve(&inst, &config(SamplingMode::ExhaustiveP, 1)).unwrap();
            assert_eq!(report.solution.is_some(), k + 1 >= n, "n={n} k={k}");
        }
    }
}
