mod common;

use common::{arb_graph, subset_of};
use proptest::prelude::*;
use sdfvs::oracle::{brute_force_important_separators, OracleBudget, OracleError};
use sdfvs::sampling::{covering, random_set, SamplingConfig, SamplingMode};
use sdfvs::separators::{
    enumerate_important_separators, exact_forward_shadow, exact_reverse_shadow, is_important,
    is_minimal_separator, min_vertex_cut, MinCut, SeparatorError,
};
use sdfvs::VertexSet;

fn terminals(n: usize, x: u32, y: u32) -> Option<(VertexSet, VertexSet)> {
    let x = subset_of(x, n);
    let y: VertexSet = subset_of(y, n).difference(&x).copied().collect();
    (!x.is_empty() && !y.is_empty()).then_some((x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn enumeration_matches_oracle(raw in arb_graph(7, 14, true), x in any::<u32>(), y in any::<u32>(), k in 0usize..4) {
        let Some((x, y)) = terminals(raw.n, x, y) else { return Ok(()) };
        let g = raw.build();
        let fast = enumerate_important_separators(&g, &x, &y, k);
        let slow = brute_force_important_separators(&g, &x, &y, k, &OracleBudget::default());
        match (fast, slow) {
            (Err(SeparatorError::Inseparable), Err(OracleError::Inseparable)) => {}
            (Ok(fast), Ok(mut slow)) => {
                let mut sets: Vec<VertexSet> = fast.iter().map(|s| s.vertices.clone()).collect();
                prop_assert!(sets.len() <= 4usize.pow(k as u32));
                for w in &sets {
                    prop_assert!(w.is_disjoint(&x) && w.is_disjoint(&y));
                    prop_assert!(is_minimal_separator(&g, &x, &y, w).unwrap());
                    prop_assert!(is_important(&g, &x, &y, w).unwrap());
                }
                sets.sort();
                slow.sort();
                prop_assert_eq!(sets, slow);
            }
            (fast, slow) => prop_assert!(false, "fast {:?} vs oracle {:?}", fast, slow),
        }
    }

    #[test]
    fn min_cut_is_smallest_important_separator(raw in arb_graph(7, 14, false), x in any::<u32>(), y in any::<u32>()) {
        let Some((x, y)) = terminals(raw.n, x, y) else { return Ok(()) };
        let g = raw.build();
        let all = brute_force_important_separators(&g, &x, &y, raw.n, &OracleBudget::default());
        match (min_vertex_cut(&g, &x, &y, raw.n).unwrap(), all) {
            (MinCut::Inseparable, Err(OracleError::Inseparable)) => {}
            (MinCut::Cut { size, separator }, Ok(all)) => {
                prop_assert_eq!(Some(size), all.iter().map(|w| w.len()).min());
                prop_assert!(all.contains(&separator));
            }
            (cut, all) => prop_assert!(false, "cut {:?} vs oracle {:?}", cut, all),
        }
    }

    #[test]
    fn exact_shadows_are_minimal_separations(raw in arb_graph(7, 14, true), t in any::<u32>(), w in any::<u32>()) {
        let g = raw.build();
        let t = subset_of(t, raw.n);
        let w: VertexSet = subset_of(w, raw.n).difference(&t).copied().collect();
        if t.is_empty() {
            return Ok(());
        }
        let reverse = exact_reverse_shadow(&g, &t, &w).unwrap();
        let forward = exact_forward_shadow(&g, &t, &w).unwrap();
        for v in g.vertices().filter(|v| !t.contains(v) && !w.contains(v)) {
            let single: VertexSet = [v].into();
            prop_assert_eq!(reverse.contains(&v), is_minimal_separator(&g, &single, &t, &w).unwrap());
            prop_assert_eq!(forward.contains(&v), is_minimal_separator(&g, &t, &single, &w).unwrap());
        }
    }

    #[test]
    fn samples_avoid_terminals_and_reproduce(raw in arb_graph(8, 16, true), t in any::<u32>(), k in 0usize..3, seed in any::<u64>()) {
        let g = raw.build();
        let t = subset_of(t, raw.n);
        let z = random_set(&g, &t, k, seed);
        prop_assert_eq!(&z, &random_set(&g, &t, k, seed));
        prop_assert!(z.is_disjoint(&t));

        let config = SamplingConfig { trials: Some(20), seed, ..SamplingConfig::default() };
        let family = covering(&g, &t, k, &config).unwrap();
        prop_assert_eq!(&family, &covering(&g, &t, k, &config).unwrap());
        let exhaustive = SamplingConfig { mode: SamplingMode::ExhaustiveP, ..config };
        for z in covering(&g, &t, k, &exhaustive).unwrap().sets {
            prop_assert!(z.is_disjoint(&t));
        }
    }
}
