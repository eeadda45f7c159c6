mod common;

use common::arb_instance;
use proptest::prelude::*;
use sdfvs::format::{format_solution, parse_solution, InstanceFile};
use sdfvs::solver::edge_to_vertex;
use sdfvs::VertexSet;

proptest! {
    #[test]
    fn edge_files_round_trip(inst in arb_instance(9, 20, 4), note in "[a-z ]{0,12}") {
        let file = InstanceFile::from_edge_instance(&inst, vec![note.trim().to_string()]);
        let text = file.serialize();
        let parsed = InstanceFile::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &file);
        prop_assert_eq!(parsed.to_edge_instance(), inst);
    }

    #[test]
    fn vertex_files_round_trip(inst in arb_instance(6, 10, 3)) {
        let v = edge_to_vertex(&inst, false);
        let file = InstanceFile::from_vertex_instance(&v, Vec::new());
        let parsed = InstanceFile::parse(&file.serialize()).unwrap();
        prop_assert_eq!(parsed.to_vertex_instance(), v);
    }

    #[test]
    fn solutions_round_trip(ids in prop::collection::btree_set(0usize..30, 0..8)) {
        let x: VertexSet = ids.into_iter().map(Into::into).collect();
        prop_assert_eq!(parse_solution(&format_solution(&x), 30).unwrap(), x);
    }
}
