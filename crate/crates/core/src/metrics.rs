//! Laureate-restricted closeness centrality and rankings.
//!
//! Distances run along advisor → student edges, so a node's outcloseness
//! measures how near its academic descendants are, counting only laureates as
//! targets. With `C(i, j)` the shortest path length and `T` the laureates of the
//! snapshot:
//!
//! * arithmetic: `(A / (N - 1))^2 / Σ C(i, j)` over the `A` laureates reachable
//!   from `i`, where `N` is the node count; 0 when none is reachable.
//! * harmonic: `Σ 1 / C(i, j)` over `T \ {i}`, divided by `|T \ {i}|`;
//!   unreachable laureates contribute nothing.
//!
//! Incloseness replaces `C(i, j)` by `C(j, i)` in the harmonic form.
//!
//! Scores with identical distance profiles are bitwise identical: sums are
//! formed from per-distance counts in increasing distance order, so ties in a
//! [`RankTable`] are exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::construct::{attach_candidates, ConstructError, NetworkSeries, Snapshot};
use crate::model::{GenealogyGraph, GraphError, Person, PersonId};

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

impl From<GraphError> for MetricsError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownPerson(id) => MetricsError::UnknownNode(id),
            other => MetricsError::Construct(other.into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    Arithmetic,
    Harmonic,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Arithmetic => "arithmetic",
            Measure::Harmonic => "harmonic",
        }
    }

    pub fn score(self, record: &CentralityRecord) -> f64 {
        match self {
            Measure::Arithmetic => record.arithmetic,
            Measure::Harmonic => record.harmonic,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arithmetic" => Ok(Measure::Arithmetic),
            "harmonic" => Ok(Measure::Harmonic),
            other => Err(format!("unknown measure `{other}` (arithmetic|harmonic)")),
        }
    }
}

/// Which nodes incloseness measures distance from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetMode {
    /// Every other node of the snapshot.
    Network,
    /// The snapshot's laureates.
    Laureates,
}

/// Shortest distances from one node to the laureates it reaches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceRow {
    pub source: PersonId,
    pub distances: BTreeMap<PersonId, u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityRecord {
    pub node: PersonId,
    pub reachable_nobel: usize,
    pub total_nodes: usize,
    pub arithmetic: f64,
    pub harmonic: f64,
}

/// Counts of targets per distance (index 0 unused).
struct Profile(Vec<usize>);

impl Profile {
    fn collect(dist: &[Option<u32>], source: usize, is_target: impl Fn(usize) -> bool) -> Self {
        let mut counts = Vec::new();
        for (j, d) in dist.iter().enumerate() {
            let Some(d) = *d else { continue };
            if j == source || !is_target(j) {
                continue;
            }
            let d = d as usize;
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        Profile(counts)
    }

    fn reached(&self) -> usize {
        self.0.iter().sum()
    }

    fn distance_sum(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(d, &c)| d as u64 * c as u64)
            .sum()
    }

    /// `Σ count / d` divided by `targets`, evaluated as an exact fraction so
    /// that equal scores compare equal.
    fn inverse_sum_over(&self, targets: usize) -> f64 {
        let max_d = self.0.len().saturating_sub(1);
        let Some(lcm) = (1..=max_d as u128).try_fold(1u128, |l, d| l.checked_mul(d / gcd(l, d)))
        else {
            let sum: f64 = self
                .0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, &c)| c as f64 / d as f64)
                .sum();
            return sum / targets as f64;
        };
        let num: u128 = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, &c)| c as u128 * (lcm / d as u128))
            .sum();
        ratio(num, lcm * targets as u128)
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `p / q` from the reduced fraction, so equal rationals map to equal floats.
fn ratio(p: u128, q: u128) -> f64 {
    let g = gcd(p, q).max(1);
    (p / g) as f64 / (q / g) as f64
}

fn laureate_profile(g: &GenealogyGraph, i: usize) -> Profile {
    Profile::collect(&g.descendant_distances(i), i, |j| g.person_at(j).laureate)
}

fn laureate_count(g: &GenealogyGraph) -> usize {
    g.persons().iter().filter(|p| p.laureate).count()
}

fn record_at(g: &GenealogyGraph, i: usize, laureates: usize) -> CentralityRecord {
    let profile = laureate_profile(g, i);
    let n = g.node_count();
    let reachable = profile.reached();
    let arithmetic = if reachable == 0 {
        0.0
    } else {
        let r = reachable as u128;
        let rest = (n - 1) as u128;
        ratio(r * r, rest * rest * profile.distance_sum() as u128)
    };
    let targets = laureates - usize::from(g.person_at(i).laureate);
    let harmonic = if targets == 0 {
        0.0
    } else {
        profile.inverse_sum_over(targets)
    };
    CentralityRecord {
        node: g.person_at(i).id.clone(),
        reachable_nobel: reachable,
        total_nodes: n,
        arithmetic,
        harmonic,
    }
}

/// BFS distances from `source` to each laureate it reaches, itself excluded.
pub fn nobel_distances(graph: &GenealogyGraph, source: &str) -> Result<DistanceRow, MetricsError> {
    let i = graph.require(source)?;
    let dist = graph.descendant_distances(i);
    let distances = dist
        .iter()
        .enumerate()
        .filter(|&(j, d)| j != i && d.is_some() && graph.person_at(j).laureate)
        .map(|(j, d)| (graph.person_at(j).id.clone(), d.unwrap()))
        .collect();
    Ok(DistanceRow {
        source: graph.person_at(i).id.clone(),
        distances,
    })
}

pub fn centrality(graph: &GenealogyGraph, node: &str) -> Result<CentralityRecord, MetricsError> {
    let i = graph.require(node)?;
    Ok(record_at(graph, i, laureate_count(graph)))
}

pub fn arithmetic_centrality(graph: &GenealogyGraph, node: &str) -> Result<f64, MetricsError> {
    Ok(centrality(graph, node)?.arithmetic)
}

pub fn harmonic_centrality(graph: &GenealogyGraph, node: &str) -> Result<f64, MetricsError> {
    Ok(centrality(graph, node)?.harmonic)
}

/// Centrality of every node, in node (id) order. Nodes are scored in parallel.
pub fn centralities(graph: &GenealogyGraph) -> Vec<CentralityRecord> {
    let laureates = laureate_count(graph);
    (0..graph.node_count())
        .into_par_iter()
        .map(|i| record_at(graph, i, laureates))
        .collect()
}

/// Harmonic closeness of the targets' distances *to* `node`.
pub fn incloseness(
    graph: &GenealogyGraph,
    node: &str,
    mode: TargetMode,
) -> Result<f64, MetricsError> {
    let i = graph.require(node)?;
    let is_target = |j: usize| match mode {
        TargetMode::Network => true,
        TargetMode::Laureates => graph.person_at(j).laureate,
    };
    let targets = (0..graph.node_count())
        .filter(|&j| j != i && is_target(j))
        .count();
    if targets == 0 {
        return Ok(0.0);
    }
    let profile = Profile::collect(&graph.ancestor_distances(i, None), i, is_target);
    Ok(profile.inverse_sum_over(targets))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    pub rank: usize,
    pub node: PersonId,
    pub score: f64,
}

/// Nodes by descending score with competition ranking: equal scores share a
/// rank and the next distinct score skips the tied positions. Ties are listed
/// in ascending id order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub measure: Measure,
    pub rows: Vec<RankRow>,
}

impl RankTable {
    pub const TIE_RULE: &'static str = "competition";

    pub fn rank_of(&self, node: &str) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.node.as_str() == node)
            .map(|r| r.rank)
    }

    pub fn ranks(&self) -> BTreeMap<PersonId, usize> {
        self.rows.iter().map(|r| (r.node.clone(), r.rank)).collect()
    }

    /// `(rank, node)` pairs, the part of a table that must not depend on the
    /// scale of the scores.
    pub fn ordering(&self) -> Vec<(usize, &PersonId)> {
        self.rows.iter().map(|r| (r.rank, &r.node)).collect()
    }
}

/// Ranks arbitrary scores.
pub fn rank_scores(
    measure: Measure,
    scores: impl IntoIterator<Item = (PersonId, f64)>,
) -> RankTable {
    let mut scored: Vec<(PersonId, f64)> = scores.into_iter().collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let mut rows: Vec<RankRow> = Vec::with_capacity(scored.len());
    for (pos, (node, score)) in scored.into_iter().enumerate() {
        let rank = match rows.last() {
            Some(prev) if prev.score == score => prev.rank,
            _ => pos + 1,
        };
        rows.push(RankRow { rank, node, score });
    }
    RankTable { measure, rows }
}

pub fn rank_table(graph: &GenealogyGraph, measure: Measure) -> RankTable {
    rank_scores(
        measure,
        centralities(graph).into_iter().map(|r| {
            let s = measure.score(&r);
            (r.node, s)
        }),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankHistoryRow {
    pub year: i32,
    pub node: PersonId,
    pub rank: usize,
    pub score: f64,
}

/// Rank of each subject in every snapshot that contains it, by year then id.
pub fn rank_history(
    series: &NetworkSeries,
    measure: Measure,
    subjects: &BTreeSet<PersonId>,
) -> Vec<RankHistoryRow> {
    let mut out = Vec::new();
    for snap in series.iter() {
        if !subjects.iter().any(|s| snap.graph.contains(s.as_str())) {
            continue;
        }
        let table = rank_table(&snap.graph, measure);
        for row in table.rows.iter().filter(|r| subjects.contains(&r.node)) {
            out.push(RankHistoryRow {
                year: snap.year,
                node: row.node.clone(),
                rank: row.rank,
                score: row.score,
            });
        }
    }
    out.sort_by(|a, b| (a.year, &a.node).cmp(&(b.year, &b.node)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankShift {
    pub old: usize,
    pub new: usize,
}

impl RankShift {
    /// Positive when the node drops down the table.
    pub fn delta(self) -> i64 {
        self.new as i64 - self.old as i64
    }
}

/// Harmonic rank change of every snapshot node if all `candidates` won.
///
/// Candidates are attached with their ancestry (as a new laureate would be),
/// marked as laureates, and the network re-ranked.
pub fn counterfactual_rank_delta(
    snapshot: &Snapshot,
    universe: &GenealogyGraph,
    candidates: &[PersonId],
) -> Result<BTreeMap<PersonId, RankShift>, MetricsError> {
    let before = rank_table(&snapshot.graph, Measure::Harmonic).ranks();
    let attached = attach_candidates(snapshot, universe, candidates)?;
    let winners: BTreeSet<&PersonId> = candidates.iter().collect();
    let persons: Vec<Person> = attached
        .graph
        .persons()
        .iter()
        .map(|p| {
            let mut q = p.clone();
            if winners.contains(&q.id) {
                q.laureate = true;
                q.candidate = false;
            }
            q
        })
        .collect();
    let marked = GenealogyGraph::new(persons, attached.graph.edges().to_vec())?;
    let after = rank_table(&marked, Measure::Harmonic).ranks();
    Ok(before
        .into_iter()
        .map(|(id, old)| {
            let new = after[&id];
            (id, RankShift { old, new })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_series, Cohorts};
    use crate::fixtures;

    const EPS: f64 = 1e-12;

    fn f1_1975() -> GenealogyGraph {
        let u = fixtures::f1_graph();
        build_series(&u, &fixtures::f1_cohorts())
            .unwrap()
            .last()
            .unwrap()
            .graph
            .clone()
    }

    #[test]
    fn distances_from_f1_nodes() {
        let g = f1_1975();
        let row = nobel_distances(&g, "P").unwrap();
        let got: Vec<(&str, u32)> = row
            .distances
            .iter()
            .map(|(k, &v)| (k.as_str(), v))
            .collect();
        assert_eq!(got, [("A", 1), ("B", 1), ("C", 2)]);
        assert!(nobel_distances(&g, "B").unwrap().distances.is_empty());
        assert!(nobel_distances(&g, "C").unwrap().distances.is_empty());
        assert!(matches!(
            nobel_distances(&g, "Q"),
            Err(MetricsError::UnknownNode(_))
        ));
    }

    #[test]
    fn arithmetic_f1() {
        let g = f1_1975();
        assert!((arithmetic_centrality(&g, "P").unwrap() - 0.25).abs() < EPS);
        assert!((arithmetic_centrality(&g, "A").unwrap() - 1.0 / 9.0).abs() < EPS);
        assert_eq!(arithmetic_centrality(&g, "B").unwrap(), 0.0);
    }

    #[test]
    fn harmonic_f1() {
        let g = f1_1975();
        assert!((harmonic_centrality(&g, "P").unwrap() - 5.0 / 6.0).abs() < EPS);
        assert!((harmonic_centrality(&g, "A").unwrap() - 0.5).abs() < EPS);
        assert_eq!(harmonic_centrality(&g, "C").unwrap(), 0.0);
    }

    #[test]
    fn incloseness_of_candidate() {
        let u = fixtures::f1_with_candidate();
        let series = build_series(&u, &Cohorts::from_universe(&u)).unwrap();
        let snap = attach_candidates(series.last().unwrap(), &u, &[PersonId::from("X")]).unwrap();
        let lau = incloseness(&snap.graph, "X", TargetMode::Laureates).unwrap();
        assert!((lau - 0.5).abs() < EPS);
        let net = incloseness(&snap.graph, "X", TargetMode::Network).unwrap();
        assert!((net - (1.0 / 3.0 + 0.5 + 1.0) / 4.0).abs() < EPS);
    }

    #[test]
    fn isolated_candidate_has_zero_incloseness() {
        let mut ds = fixtures::f1_dataset();
        ds.persons.push(Person::new("Y").candidate());
        let g = GenealogyGraph::from_dataset(ds).unwrap();
        assert_eq!(incloseness(&g, "Y", TargetMode::Laureates).unwrap(), 0.0);
        assert_eq!(incloseness(&g, "Y", TargetMode::Network).unwrap(), 0.0);
    }

    #[test]
    fn f1_harmonic_ranks() {
        let t = rank_table(&f1_1975(), Measure::Harmonic);
        let got: Vec<(usize, &str)> = t.rows.iter().map(|r| (r.rank, r.node.as_str())).collect();
        assert_eq!(got, [(1, "P"), (2, "A"), (3, "B"), (3, "C")]);
    }

    #[test]
    fn isolated_graph_all_first() {
        let g = GenealogyGraph::new(["a", "b", "c"].map(Person::new).to_vec(), vec![]).unwrap();
        let t = rank_table(&g, Measure::Arithmetic);
        assert!(t.rows.iter().all(|r| r.rank == 1 && r.score == 0.0));
    }

    #[test]
    fn competition_ranking_skips() {
        let t = rank_scores(
            Measure::Harmonic,
            [("a", 1.0), ("b", 2.0), ("c", 2.0), ("d", 0.5)].map(|(k, v)| (PersonId::from(k), v)),
        );
        let got: Vec<(usize, &str)> = t.rows.iter().map(|r| (r.rank, r.node.as_str())).collect();
        assert_eq!(got, [(1, "b"), (1, "c"), (3, "a"), (4, "d")]);
    }

    #[test]
    fn history_of_professor() {
        let u = fixtures::f1_graph();
        let series = build_series(&u, &fixtures::f1_cohorts()).unwrap();
        let rows = rank_history(
            &series,
            Measure::Harmonic,
            &BTreeSet::from([PersonId::from("P")]),
        );
        let got: Vec<(i32, usize)> = rows.iter().map(|r| (r.year, r.rank)).collect();
        assert_eq!(got, [(1970, 1), (1972, 1), (1975, 1)]);
        let rows = rank_history(
            &series,
            Measure::Harmonic,
            &BTreeSet::from([PersonId::from("C")]),
        );
        assert_eq!(rows.first().map(|r| r.year), Some(1975));
    }

    #[test]
    fn counterfactual_trivial_cases() {
        let u = fixtures::f1_with_candidate();
        let series = build_series(&u, &Cohorts::from_universe(&u)).unwrap();
        let snap = series.last().unwrap();
        let none = counterfactual_rank_delta(snap, &u, &[]).unwrap();
        assert!(none.values().all(|s| s.delta() == 0));
        let existing: Vec<PersonId> = ["A", "B", "C"].map(PersonId::from).to_vec();
        let same = counterfactual_rank_delta(snap, &u, &existing).unwrap();
        assert!(same.values().all(|s| s.delta() == 0));
        assert_eq!(same.len(), 4);
    }
}
