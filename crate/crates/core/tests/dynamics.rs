use std::collections::BTreeSet;

use genealogy::construct::{build_series, Cohorts};
use genealogy::dynamics::{components, descendant_subgraph, edit_series, graph_delta};
use genealogy::fixtures::{random_dag, RandomDagSpec};
use genealogy::GenealogyGraph;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn universe(seed: u64) -> GenealogyGraph {
    random_dag(&RandomDagSpec::default(), seed)
}

/// Nested induced subgraphs, each adding a random batch of nodes.
fn monotone_sequence(g: &GenealogyGraph, seed: u64, steps: usize) -> Vec<GenealogyGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.shuffle(&mut rng);
    let mut cuts: Vec<usize> = (0..steps)
        .map(|_| rand::Rng::gen_range(&mut rng, 0..=order.len()))
        .collect();
    cuts.sort_unstable();
    cuts.iter()
        .map(|&c| g.induced_by_index(&order[..c].iter().copied().collect()))
        .collect()
}

/// Weak components by repeated label propagation over the edge list.
fn brute_components(g: &GenealogyGraph) -> usize {
    let ids: Vec<_> = g.persons().iter().map(|p| p.id.clone()).collect();
    let mut label: Vec<usize> = (0..ids.len()).collect();
    let pos = |id| ids.iter().position(|x| *x == id).unwrap();
    loop {
        let mut changed = false;
        for e in g.edges() {
            let (a, b) = (pos(e.advisor.clone()), pos(e.student.clone()));
            let m = label[a].min(label[b]);
            if label[a] != m || label[b] != m {
                label[a] = m;
                label[b] = m;
                changed = true;
            }
        }
        if !changed {
            return label.iter().collect::<BTreeSet<_>>().len();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn delta_matches_set_difference(seed in any::<u64>(), steps in 2usize..8) {
        let g = universe(seed);
        let seq = monotone_sequence(&g, seed ^ 0x5eed, steps);
        let mut nodes_sum = 0;
        let mut edges_sum = 0;
        for w in seq.windows(2) {
            let d = graph_delta(&w[0], &w[1], 0).unwrap();
            let nodes = w[1].node_ids().difference(&w[0].node_ids()).count();
            let edges = w[1].edge_keys().difference(&w[0].edge_keys()).count();
            prop_assert_eq!((d.nodes_added, d.edges_added, d.total), (nodes, edges, nodes + edges));
            prop_assert_eq!(d.components_after, brute_components(&w[1]));
            nodes_sum += d.nodes_added;
            edges_sum += d.edges_added;
        }
        let (first, last) = (seq.first().unwrap(), seq.last().unwrap());
        prop_assert_eq!(nodes_sum, last.node_count() - first.node_count());
        prop_assert_eq!(edges_sum, last.edge_count() - first.edge_count());
    }

    #[test]
    fn components_grow_at_most_by_cohort_size(seed in any::<u64>()) {
        let u = universe(seed);
        let cohorts = Cohorts::from_universe(&u);
        prop_assume!(!cohorts.is_empty());
        let series = build_series(&u, &cohorts).unwrap();
        for d in edit_series(&series).unwrap() {
            prop_assert!(d.components_after <= d.components_before + cohorts.cohort(d.year).len());
        }
    }

    #[test]
    fn descendant_subgraph_is_reachable_set(seed in any::<u64>(), root in 0usize..40) {
        let g = universe(seed);
        let root_id = g.person_at(root).id.clone();
        let sub = descendant_subgraph(&g, root_id.as_str()).unwrap();
        let reach: BTreeSet<_> = g
            .descendant_distances(root)
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_some())
            .map(|(i, _)| g.person_at(i).id.clone())
            .collect();
        prop_assert_eq!(sub.node_ids(), reach);
        prop_assert_eq!(components(&sub).0, 1);
    }
}

#[test]
fn shrinking_pair_is_an_error() {
    let g = universe(3);
    let half = g.induced_by_index(&(0..20).collect());
    assert!(graph_delta(&half, &g, 1).is_ok());
    assert!(graph_delta(&g, &half, 1).is_err());
}
