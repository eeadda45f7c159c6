mod common;

use common::{arb_graph, arb_instance, subset_of};
use proptest::prelude::*;
use sdfvs::oracle::{brute_force_solve, OracleBudget};
use sdfvs::solver::{verify_compression, CompressionInstance, EdgeInstance};
use sdfvs::torso::{reduce_instance, torso};
use sdfvs::VertexSet;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn torso_contains_induced_subgraph(raw in arb_graph(8, 16, false), c in any::<u32>(), s in any::<u32>()) {
        let g = raw.build();
        let c = subset_of(c, raw.n);
        let s = raw.arcs.iter().enumerate().filter(|(i, _)| s >> i & 1 == 1).map(|(_, &p)| p.into()).collect();
        let t = torso(&g, &c, &s).unwrap();
        prop_assert_eq!(t.graph.vertex_set(), c.clone());
        for a in g.arcs().iter().filter(|a| c.contains(&a.tail) && c.contains(&a.head)) {
            prop_assert!(t.graph.has_arc(a.tail, a.head));
            if s.contains(a) {
                prop_assert!(t.s_arcs.contains(a));
            }
        }
        for a in &t.s_arcs {
            prop_assert!(t.graph.has_arc(a.tail, a.head));
        }
    }

    /// Any solution of `I/Z` solves `I`, so a NO instance stays NO.
    #[test]
    fn reduction_preserves_no_instances(inst in arb_instance(7, 12, 3), z in any::<u32>()) {
        let budget = OracleBudget::default();
        let g = inst.graph();
        let Some(t) = brute_force_solve(&inst.with_budget(g.capacity()), &budget).unwrap() else {
            return Ok(());
        };
        let t = t.deleted;
        let comp = CompressionInstance::new(g.clone(), inst.s_arcs().clone(), t.clone(), inst.budget()).unwrap();
        let z: VertexSet = subset_of(z, g.capacity()).difference(&t).copied().collect();
        let reduced = reduce_instance(&comp, &z).unwrap();
        let as_edge = |c: &CompressionInstance| {
            EdgeInstance::new(c.graph().with_undeletable(&t), c.s_arcs().clone(), c.budget()).unwrap()
        };
        let original = brute_force_solve(&as_edge(&comp), &budget).unwrap();
        let after = brute_force_solve(&as_edge(&reduced), &budget).unwrap();
        if let Some(sol) = &after {
            prop_assert!(verify_compression(&comp, &sol.deleted));
        }
        if original.is_none() {
            prop_assert!(after.is_none());
        }
    }
}
