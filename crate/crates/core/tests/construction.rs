use std::collections::BTreeSet;

use genealogy::construct::{
    apply_overlay, build_series, build_year, invert_overlay, Cohorts, InclusionReason, OverlayEdit,
};
use genealogy::fixtures::{self, random_dag, RandomDagSpec};
use genealogy::{AdvisingEdge, EdgeKind, GenealogyGraph};
use proptest::prelude::*;

fn universe(seed: u64, nodes: usize) -> GenealogyGraph {
    random_dag(
        &RandomDagSpec {
            nodes,
            max_advisors: 2,
            laureate_rate: 0.25,
            ..RandomDagSpec::default()
        },
        seed,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn snapshots_only_grow(seed in any::<u64>(), nodes in 5usize..60) {
        let u = universe(seed, nodes);
        let cohorts = Cohorts::from_universe(&u);
        prop_assume!(!cohorts.is_empty());
        let series = build_series(&u, &cohorts).unwrap();
        for w in series.snapshots.windows(2) {
            prop_assert!(w[0].graph.node_ids().is_subset(&w[1].graph.node_ids()));
            prop_assert!(w[0].graph.edge_keys().is_subset(&w[1].graph.edge_keys()));
        }
    }

    #[test]
    fn rebuild_equals_incremental(seed in any::<u64>(), nodes in 5usize..60) {
        let u = universe(seed, nodes);
        let cohorts = Cohorts::from_universe(&u);
        prop_assume!(!cohorts.is_empty());
        let series = build_series(&u, &cohorts).unwrap();
        for snap in series.iter() {
            let fresh = build_year(&u, &cohorts, snap.year, None).unwrap();
            prop_assert_eq!(fresh.graph.node_ids(), snap.graph.node_ids());
            prop_assert_eq!(fresh.graph.edge_keys(), snap.graph.edge_keys());
        }
    }

    #[test]
    fn every_node_leads_to_a_laureate(seed in any::<u64>(), nodes in 5usize..60) {
        let u = universe(seed, nodes);
        let cohorts = Cohorts::from_universe(&u);
        prop_assume!(!cohorts.is_empty());
        let series = build_series(&u, &cohorts).unwrap();
        for snap in series.iter() {
            let g = &snap.graph;
            for (i, p) in g.persons().iter().enumerate() {
                let reason = snap.reasons[&p.id];
                if p.laureate {
                    prop_assert_eq!(reason, InclusionReason::Laureate);
                    continue;
                }
                prop_assert!(matches!(reason, InclusionReason::Ancestor | InclusionReason::Connector));
                let reaches = g
                    .descendant_distances(i)
                    .iter()
                    .enumerate()
                    .any(|(j, d)| j != i && d.is_some() && g.person_at(j).laureate);
                prop_assert!(reaches, "{} in {} reaches no laureate", p.id, snap.year);
            }
        }
    }

    #[test]
    fn overlay_then_inverse_restores(seed in any::<u64>(), picks in proptest::collection::vec((0usize..40, 0usize..40, any::<bool>()), 1..8)) {
        let g = universe(seed, 40);
        let mut edits = Vec::new();
        let mut current = g.clone();
        for (a, b, remove) in picks {
            let edit = if remove && current.edge_count() > 0 {
                OverlayEdit::RemoveEdge(current.edges()[a % current.edge_count()].key())
            } else {
                let (a, b) = (a.min(b), a.max(b));
                if a == b {
                    continue;
                }
                let e = AdvisingEdge::new(current.person_at(a).id.clone(), current.person_at(b).id.clone())
                    .with_kind(EdgeKind::Mentor);
                if current.has_edge(&e.key()) {
                    continue;
                }
                OverlayEdit::AddEdge(e)
            };
            current = apply_overlay(&current, std::slice::from_ref(&edit)).unwrap();
            edits.push(edit);
        }
        let edited = apply_overlay(&g, &edits).unwrap();
        prop_assert_eq!(&edited, &current);
        let inverse = invert_overlay(&g, &edits).unwrap();
        prop_assert_eq!(apply_overlay(&edited, &inverse).unwrap(), g);
    }
}

#[test]
fn f1_snapshot_sizes() {
    let series = build_series(&fixtures::f1_graph(), &fixtures::f1_cohorts()).unwrap();
    let sizes: Vec<(i32, usize, usize)> = series
        .iter()
        .map(|s| (s.year, s.graph.node_count(), s.graph.edge_count()))
        .collect();
    assert_eq!(sizes, [(1970, 2, 1), (1972, 3, 2), (1975, 4, 3)]);
    let laureates_1972: BTreeSet<&str> = series
        .get(1972)
        .unwrap()
        .graph
        .laureates()
        .map(|p| p.id.as_str())
        .collect();
    assert_eq!(laureates_1972, BTreeSet::from(["A", "B"]));
}
