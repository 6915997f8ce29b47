//! Change between yearly snapshots.
//!
//! Each snapshot extends its predecessor, so the edit distance between two
//! consecutive years is just the number of nodes and edges that appear, and
//! the edits make the graphs identical rather than merely isomorphic.
//! Components ignore edge direction.

use std::collections::{BTreeMap, BTreeSet};

use crate::construct::{NetworkSeries, Snapshot};
use crate::model::{GenealogyGraph, PersonId};

#[derive(Debug, thiserror::Error)]
pub enum DynamicsError {
    #[error("{year}: earlier snapshot is not a subgraph of the later one ({missing_nodes} nodes, {missing_edges} edges missing)")]
    NotSubgraph {
        year: i32,
        missing_nodes: usize,
        missing_edges: usize,
    },
    #[error("unknown root `{0}`")]
    UnknownRoot(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EditDelta {
    pub year: i32,
    pub nodes_added: usize,
    pub edges_added: usize,
    /// Graph edit distance.
    pub total: usize,
    pub components_before: usize,
    pub components_after: usize,
}

/// Edit distance from `prev` to `next`, which must contain it.
pub fn edit_delta(prev: &Snapshot, next: &Snapshot) -> Result<EditDelta, DynamicsError> {
    graph_delta(&prev.graph, &next.graph, next.year)
}

/// As [`edit_delta`] on bare graphs, labelling the result with `year`.
pub fn graph_delta(
    prev: &GenealogyGraph,
    next: &GenealogyGraph,
    year: i32,
) -> Result<EditDelta, DynamicsError> {
    let missing_nodes = prev
        .persons()
        .iter()
        .filter(|p| !next.contains(p.id.as_str()))
        .count();
    let missing_edges = prev
        .edges()
        .iter()
        .filter(|e| !next.has_edge(&e.key()))
        .count();
    if missing_nodes > 0 || missing_edges > 0 {
        return Err(DynamicsError::NotSubgraph {
            year,
            missing_nodes,
            missing_edges,
        });
    }
    let nodes_added = next.node_count() - prev.node_count();
    let edges_added = next.edge_count() - prev.edge_count();
    Ok(EditDelta {
        year,
        nodes_added,
        edges_added,
        total: nodes_added + edges_added,
        components_before: components(prev).0,
        components_after: components(next).0,
    })
}

/// One delta per consecutive pair of snapshots.
pub fn edit_series(series: &NetworkSeries) -> Result<Vec<EditDelta>, DynamicsError> {
    series
        .snapshots
        .windows(2)
        .map(|w| edit_delta(&w[0], &w[1]))
        .collect()
}

/// Weakly connected components. Each node maps to the smallest id in its
/// component.
pub fn components(graph: &GenealogyGraph) -> (usize, BTreeMap<PersonId, PersonId>) {
    let n = graph.node_count();
    let mut label: Vec<Option<usize>> = vec![None; n];
    let mut count = 0;
    // Ascending index order is ascending id order, so the seed is the smallest id.
    for seed in 0..n {
        if label[seed].is_some() {
            continue;
        }
        count += 1;
        label[seed] = Some(seed);
        let mut stack = vec![seed];
        while let Some(u) = stack.pop() {
            for &v in graph.students_of(u).iter().chain(graph.advisors_of(u)) {
                if label[v].is_none() {
                    label[v] = Some(seed);
                    stack.push(v);
                }
            }
        }
    }
    let membership = (0..n)
        .map(|i| {
            let root = label[i].expect("every node labelled");
            (
                graph.person_at(i).id.clone(),
                graph.person_at(root).id.clone(),
            )
        })
        .collect();
    (count, membership)
}

/// Everything reachable from `root` along advisor → student edges, root included.
pub fn descendant_subgraph(
    graph: &GenealogyGraph,
    root: &str,
) -> Result<GenealogyGraph, DynamicsError> {
    let r = graph
        .index_of(root)
        .ok_or_else(|| DynamicsError::UnknownRoot(root.to_owned()))?;
    let nodes: BTreeSet<usize> = graph
        .descendant_distances(r)
        .iter()
        .enumerate()
        .filter_map(|(i, d)| d.map(|_| i))
        .collect();
    Ok(graph.induced_by_index(&nodes))
}
