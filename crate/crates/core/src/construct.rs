//! Yearly network construction.
//!
//! Each award year starts from the previous year's network. Every new laureate
//! brings in its ancestors up to [`GENERATIONS`] advisor hops. When those
//! ancestors do not touch the network built so far, the laureate is tied in
//! through its closest common ancestor with the existing nodes, which may lie
//! deeper than the generation limit. A snapshot's graph is the subgraph of the
//! universe induced by its included nodes.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{AdvisingEdge, EdgeKey, GenealogyGraph, GraphError, Person, PersonId};

/// Ancestor generations included for each laureate.
pub const GENERATIONS: u32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum ConstructError {
    #[error("unknown person `{0}`")]
    UnknownPerson(String),
    #[error("`{0}` is not a laureate in the universe")]
    NotLaureate(String),
    #[error("`{id}` is listed for {year} but its prize year is {prize_year:?}")]
    CohortYearMismatch {
        id: String,
        year: i32,
        prize_year: Option<i32>,
    },
    #[error("`{0}` appears in more than one cohort")]
    DuplicateCohortEntry(String),
    #[error("no cohorts to build from")]
    NoCohorts,
    #[error("previous snapshot for {prev} cannot precede {year}")]
    SnapshotOrder { prev: i32, year: i32 },
    #[error("edge {0} does not exist")]
    MissingEdge(EdgeKey),
    #[error("edge {0} already exists")]
    DuplicateEdge(EdgeKey),
    #[error("person `{0}` already exists")]
    DuplicatePerson(String),
    #[error("overlay produces an invalid graph:\n{0}")]
    Overlay(crate::validate::ValidationReport),
}

impl From<GraphError> for ConstructError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownPerson(id) => ConstructError::UnknownPerson(id),
            GraphError::Invalid(report) => ConstructError::Overlay(report),
        }
    }
}

/// Award cohorts: prize year → laureates in award order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cohorts {
    years: BTreeMap<i32, Vec<PersonId>>,
}

impl Cohorts {
    /// Cohorts implied by the universe's prize years, ids ascending within a year.
    pub fn from_universe(universe: &GenealogyGraph) -> Self {
        let mut years: BTreeMap<i32, Vec<PersonId>> = BTreeMap::new();
        for p in universe.laureates() {
            if let Some(y) = p.prize_year {
                years.entry(y).or_default().push(p.id.clone());
            }
        }
        Cohorts { years }
    }

    /// Appends a laureate to a year's cohort after checking it against the universe.
    pub fn push(
        &mut self,
        universe: &GenealogyGraph,
        year: i32,
        id: PersonId,
    ) -> Result<(), ConstructError> {
        let person = universe
            .person(id.as_str())
            .ok_or_else(|| ConstructError::UnknownPerson(id.to_string()))?;
        if !person.laureate {
            return Err(ConstructError::NotLaureate(id.to_string()));
        }
        if person.prize_year != Some(year) {
            return Err(ConstructError::CohortYearMismatch {
                id: id.to_string(),
                year,
                prize_year: person.prize_year,
            });
        }
        if self.years.values().flatten().any(|x| *x == id) {
            return Err(ConstructError::DuplicateCohortEntry(id.to_string()));
        }
        self.years.entry(year).or_default().push(id);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        self.years.keys().copied()
    }

    pub fn cohort(&self, year: i32) -> &[PersonId] {
        self.years.get(&year).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &[PersonId])> {
        self.years.iter().map(|(y, v)| (*y, v.as_slice()))
    }

    pub fn first_year(&self) -> Option<i32> {
        self.years.keys().next().copied()
    }

    pub fn last_year(&self) -> Option<i32> {
        self.years.keys().next_back().copied()
    }
}

/// Why a node is part of a snapshot. Ordered by strength; a node keeps the
/// strongest reason it has acquired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InclusionReason {
    Connector,
    Ancestor,
    Candidate,
    Laureate,
}

impl InclusionReason {
    pub fn as_str(self) -> &'static str {
        match self {
            InclusionReason::Connector => "connector-path",
            InclusionReason::Ancestor => "ancestor",
            InclusionReason::Candidate => "candidate",
            InclusionReason::Laureate => "laureate",
        }
    }
}

/// The network as of the end of one award year.
///
/// Person flags inside `graph` describe status at `year`: `laureate` is set only
/// once the prize has been awarded, and a candidate who has won is no longer a
/// candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub year: i32,
    pub graph: GenealogyGraph,
    pub reasons: BTreeMap<PersonId, InclusionReason>,
}

impl Snapshot {
    /// Wraps an arbitrary graph; flags are taken as given and no reasons are recorded.
    pub fn new(year: i32, graph: GenealogyGraph) -> Self {
        Snapshot {
            year,
            graph,
            reasons: BTreeMap::new(),
        }
    }
}

/// Yearly snapshots in chronological order.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSeries {
    pub snapshots: Vec<Snapshot>,
}

impl NetworkSeries {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn get(&self, year: i32) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| s.year == year)
    }

    /// The latest snapshot at or before `year`.
    pub fn as_of(&self, year: i32) -> Option<&Snapshot> {
        self.snapshots.iter().rev().find(|s| s.year <= year)
    }

    pub fn last(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        self.snapshots.iter().map(|s| s.year)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Snapshot> {
        self.snapshots.iter()
    }
}

/// Ancestors reached by at most `max_depth` advisor hops from `person`,
/// including the person, with the edges among them.
pub fn ancestor_closure(
    universe: &GenealogyGraph,
    person: &str,
    max_depth: u32,
) -> Result<GenealogyGraph, ConstructError> {
    let idx = universe.require(person)?;
    Ok(universe.induced_by_index(&closure_indices(universe, idx, Some(max_depth))))
}

fn closure_indices(
    universe: &GenealogyGraph,
    idx: usize,
    max_depth: Option<u32>,
) -> BTreeSet<usize> {
    universe
        .ancestor_distances(idx, max_depth)
        .iter()
        .enumerate()
        .filter_map(|(i, d)| d.map(|_| i))
        .collect()
}

/// The ancestor joining a new laureate to an existing node set, with the
/// shortest paths that realize the join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonAncestor {
    pub ancestor: PersonId,
    /// Generations from the ancestor down to the new laureate.
    pub to_new: u32,
    /// Generations from the ancestor down to the nearest existing node; 0 when
    /// the ancestor is itself an existing node.
    pub to_existing: u32,
    /// Every node on a minimal path from the ancestor to the laureate or to a
    /// nearest existing node, the ancestor included.
    pub nodes: BTreeSet<PersonId>,
    /// Advisor → student pairs along those paths.
    pub edges: BTreeSet<(PersonId, PersonId)>,
}

impl CommonAncestor {
    pub fn distance(&self) -> u32 {
        self.to_new + self.to_existing
    }
}

/// Finds the ancestor of `new_laureate` minimizing the combined distance to the
/// laureate and to `existing`; ties go to the smallest id.
pub fn closest_common_ancestor(
    universe: &GenealogyGraph,
    new_laureate: &str,
    existing: &BTreeSet<PersonId>,
) -> Result<Option<CommonAncestor>, ConstructError> {
    let new = universe.require(new_laureate)?;
    let existing = existing
        .iter()
        .map(|id| universe.require(id.as_str()))
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(common_ancestor_indices(universe, new, &existing).map(|w| w.resolve(universe)))
}

struct Witness {
    ancestor: usize,
    to_new: u32,
    to_existing: u32,
    nodes: BTreeSet<usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl Witness {
    fn resolve(self, g: &GenealogyGraph) -> CommonAncestor {
        let id = |i: usize| g.person_at(i).id.clone();
        CommonAncestor {
            ancestor: id(self.ancestor),
            to_new: self.to_new,
            to_existing: self.to_existing,
            nodes: self.nodes.iter().map(|&i| id(i)).collect(),
            edges: self.edges.iter().map(|&(a, b)| (id(a), id(b))).collect(),
        }
    }
}

fn common_ancestor_indices(
    g: &GenealogyGraph,
    new: usize,
    existing: &BTreeSet<usize>,
) -> Option<Witness> {
    if existing.is_empty() {
        return None;
    }
    // Distance from each node down to the laureate, and down to the existing set.
    let to_new = g.ancestor_distances(new, None);
    let sources: Vec<usize> = existing.iter().copied().collect();
    let to_set = g.bfs(&sources, |i| g.advisors_of(i), None);

    let (ancestor, dn, ds) = (0..g.node_count())
        .filter(|&a| a != new)
        .filter_map(|a| Some((a, to_new[a]?, to_set[a]?)))
        // node order is id order, so the first minimum has the smallest id
        .min_by_key(|&(a, dn, ds)| (dn + ds, a))?;

    let from_ancestor = g.descendant_distances(ancestor);
    let mut nodes = BTreeSet::from([ancestor]);
    let mut edges = BTreeSet::new();
    for (target, total) in [(&to_new, dn), (&to_set, ds)] {
        for u in 0..g.node_count() {
            let (Some(du), Some(tu)) = (from_ancestor[u], target[u]) else {
                continue;
            };
            if du + tu != total {
                continue;
            }
            for &v in g.students_of(u) {
                if target[v].is_some_and(|tv| du + 1 + tv == total) {
                    edges.insert((u, v));
                    nodes.insert(u);
                    nodes.insert(v);
                }
            }
        }
    }
    Some(Witness {
        ancestor,
        to_new: dn,
        to_existing: ds,
        nodes,
        edges,
    })
}

/// Incremental node set over a fixed universe.
struct Assembly<'u> {
    universe: &'u GenealogyGraph,
    included: BTreeSet<usize>,
    reasons: BTreeMap<usize, InclusionReason>,
}

impl<'u> Assembly<'u> {
    fn new(universe: &'u GenealogyGraph) -> Self {
        Assembly {
            universe,
            included: BTreeSet::new(),
            reasons: BTreeMap::new(),
        }
    }

    fn from_snapshot(
        universe: &'u GenealogyGraph,
        snap: &Snapshot,
    ) -> Result<Self, ConstructError> {
        let mut asm = Assembly::new(universe);
        for p in snap.graph.persons() {
            let i = universe.require(p.id.as_str())?;
            asm.included.insert(i);
            let reason = snap.reasons.get(&p.id).copied().unwrap_or(if p.laureate {
                InclusionReason::Laureate
            } else {
                InclusionReason::Ancestor
            });
            asm.reasons.insert(i, reason);
        }
        Ok(asm)
    }

    fn include(&mut self, idx: usize, reason: InclusionReason) {
        self.included.insert(idx);
        let r = self.reasons.entry(idx).or_insert(reason);
        *r = (*r).max(reason);
    }

    fn touches_existing(&self, closure: &BTreeSet<usize>) -> bool {
        let g = self.universe;
        closure.iter().any(|&c| {
            self.included.contains(&c)
                || g.advisors_of(c).iter().any(|a| self.included.contains(a))
                || g.students_of(c).iter().any(|s| self.included.contains(s))
        })
    }

    /// Adds `idx` with its generation-limited ancestry, connecting it to the
    /// existing nodes through a common ancestor when the ancestry is disjoint.
    fn add(&mut self, idx: usize, reason: InclusionReason) {
        let closure = closure_indices(self.universe, idx, Some(GENERATIONS));
        let needs_connector = !self.included.is_empty() && !self.touches_existing(&closure);
        let witness = if needs_connector {
            common_ancestor_indices(self.universe, idx, &self.included)
        } else {
            None
        };
        for &c in &closure {
            self.include(
                c,
                if c == idx {
                    reason
                } else {
                    InclusionReason::Ancestor
                },
            );
        }
        if let Some(w) = witness {
            for n in w.nodes {
                self.include(n, InclusionReason::Connector);
            }
        }
    }

    fn snapshot(&self, year: i32) -> Snapshot {
        let graph = self
            .universe
            .induced_with(&self.included, |p| status_at(p, year));
        let reasons = self
            .reasons
            .iter()
            .map(|(&i, &r)| (self.universe.person_at(i).id.clone(), r))
            .collect();
        Snapshot {
            year,
            graph,
            reasons,
        }
    }
}

fn status_at(p: &Person, year: i32) -> Person {
    let mut q = p.clone();
    q.laureate = p.laureate_as_of(year);
    q.candidate = p.candidate && !q.laureate;
    q
}

/// Builds the snapshot for `year`.
///
/// With `prev`, that snapshot is extended by the cohort of `year`. Without it,
/// all cohorts up to and including `year` are replayed in order, which yields
/// the same result as chaining year by year.
pub fn build_year(
    universe: &GenealogyGraph,
    cohorts: &Cohorts,
    year: i32,
    prev: Option<&Snapshot>,
) -> Result<Snapshot, ConstructError> {
    let mut asm = match prev {
        Some(p) if p.year >= year => {
            return Err(ConstructError::SnapshotOrder { prev: p.year, year });
        }
        Some(p) => Assembly::from_snapshot(universe, p)?,
        None => {
            let mut asm = Assembly::new(universe);
            for (_, ids) in cohorts.iter().take_while(|(y, _)| *y < year) {
                add_cohort(&mut asm, universe, ids)?;
            }
            asm
        }
    };
    add_cohort(&mut asm, universe, cohorts.cohort(year))?;
    Ok(asm.snapshot(year))
}

fn add_cohort(
    asm: &mut Assembly<'_>,
    universe: &GenealogyGraph,
    ids: &[PersonId],
) -> Result<(), ConstructError> {
    for id in ids {
        let idx = universe.require(id.as_str())?;
        asm.add(idx, InclusionReason::Laureate);
    }
    Ok(())
}

/// One snapshot per cohort year, each built on its predecessor.
pub fn build_series(
    universe: &GenealogyGraph,
    cohorts: &Cohorts,
) -> Result<NetworkSeries, ConstructError> {
    if cohorts.is_empty() {
        return Err(ConstructError::NoCohorts);
    }
    let mut snapshots: Vec<Snapshot> = Vec::with_capacity(cohorts.years.len());
    for year in cohorts.years() {
        let snap = build_year(universe, cohorts, year, snapshots.last())?;
        snapshots.push(snap);
    }
    Ok(NetworkSeries { snapshots })
}

/// Adds `candidates` to a snapshot the way a new laureate would be added
/// (generation-limited ancestry plus a connector if needed), without marking
/// them as laureates.
pub fn attach_candidates(
    snapshot: &Snapshot,
    universe: &GenealogyGraph,
    candidates: &[PersonId],
) -> Result<Snapshot, ConstructError> {
    let mut asm = Assembly::from_snapshot(universe, snapshot)?;
    for id in candidates {
        let idx = universe.require(id.as_str())?;
        asm.add(idx, InclusionReason::Candidate);
    }
    // Keep the snapshot's own flags for nodes it already had.
    let mut snap = asm.snapshot(snapshot.year);
    let persons: Vec<Person> = snap
        .graph
        .persons()
        .iter()
        .map(|p| {
            snapshot
                .graph
                .person(p.id.as_str())
                .cloned()
                .unwrap_or_else(|| p.clone())
        })
        .collect();
    snap.graph = GenealogyGraph::assemble(persons, snap.graph.edges().to_vec());
    Ok(snap)
}

/// A sensitivity edit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OverlayEdit {
    AddEdge(AdvisingEdge),
    RemoveEdge(EdgeKey),
    AddPerson(Person),
}

/// Applies edits in order to a copy of `graph` and revalidates the result.
pub fn apply_overlay(
    graph: &GenealogyGraph,
    edits: &[OverlayEdit],
) -> Result<GenealogyGraph, ConstructError> {
    let mut persons = graph.persons().to_vec();
    let mut edges = graph.edges().to_vec();
    for edit in edits {
        match edit {
            OverlayEdit::AddPerson(p) => {
                if persons.iter().any(|q| q.id == p.id) {
                    return Err(ConstructError::DuplicatePerson(p.id.to_string()));
                }
                persons.push(p.clone());
            }
            OverlayEdit::AddEdge(e) => {
                for end in [&e.advisor, &e.student] {
                    if !persons.iter().any(|q| q.id == *end) {
                        return Err(ConstructError::UnknownPerson(end.to_string()));
                    }
                }
                let key = e.key();
                if edges.iter().any(|x| x.key() == key) {
                    return Err(ConstructError::DuplicateEdge(key));
                }
                edges.push(e.clone());
            }
            OverlayEdit::RemoveEdge(key) => {
                let pos = edges
                    .iter()
                    .position(|x| x.key() == *key)
                    .ok_or_else(|| ConstructError::MissingEdge(key.clone()))?;
                edges.remove(pos);
            }
        }
    }
    Ok(GenealogyGraph::new(persons, edges)?)
}

/// Edits that undo `edits` when applied to `apply_overlay(graph, edits)`.
/// `None` when the edits add persons, which overlays cannot remove.
pub fn invert_overlay(graph: &GenealogyGraph, edits: &[OverlayEdit]) -> Option<Vec<OverlayEdit>> {
    let mut current: Vec<AdvisingEdge> = graph.edges().to_vec();
    let mut inverse = Vec::with_capacity(edits.len());
    for edit in edits {
        match edit {
            OverlayEdit::AddPerson(_) => return None,
            OverlayEdit::AddEdge(e) => {
                current.push(e.clone());
                inverse.push(OverlayEdit::RemoveEdge(e.key()));
            }
            OverlayEdit::RemoveEdge(key) => {
                let pos = current.iter().position(|x| x.key() == *key)?;
                inverse.push(OverlayEdit::AddEdge(current.remove(pos)));
            }
        }
    }
    inverse.reverse();
    Some(inverse)
}

/// All ancestors of all laureates, without a generation limit, excluding
/// everyone strictly above a cutoff root.
pub fn expand_full(
    universe: &GenealogyGraph,
    cutoff_roots: &BTreeSet<PersonId>,
) -> Result<GenealogyGraph, ConstructError> {
    let roots = cutoff_roots
        .iter()
        .map(|id| universe.require(id.as_str()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut above = vec![false; universe.node_count()];
    for &r in &roots {
        for &a in universe.advisors_of(r) {
            for (i, d) in universe.ancestor_distances(a, None).iter().enumerate() {
                if d.is_some() {
                    above[i] = true;
                }
            }
        }
    }
    let laureates: Vec<usize> = (0..universe.node_count())
        .filter(|&i| universe.person_at(i).laureate && !above[i])
        .collect();
    let mut seen = vec![false; universe.node_count()];
    let mut stack = laureates;
    for &l in &stack {
        seen[l] = true;
    }
    while let Some(u) = stack.pop() {
        for &a in universe.advisors_of(u) {
            if !seen[a] && !above[a] {
                seen[a] = true;
                stack.push(a);
            }
        }
    }
    let nodes: BTreeSet<usize> = (0..universe.node_count()).filter(|&i| seen[i]).collect();
    Ok(universe.induced_by_index(&nodes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ids(g: &GenealogyGraph) -> Vec<&str> {
        g.persons().iter().map(|p| p.id.as_str()).collect()
    }

    fn set(items: &[&str]) -> BTreeSet<PersonId> {
        items.iter().map(|&s| PersonId::from(s)).collect()
    }

    #[test]
    fn closure_depths() {
        let u = fixtures::f1_graph();
        assert_eq!(ids(&ancestor_closure(&u, "C", 1).unwrap()), ["A", "C"]);
        assert_eq!(ids(&ancestor_closure(&u, "C", 5).unwrap()), ["A", "C", "P"]);
        assert_eq!(ancestor_closure(&u, "C", 5).unwrap().edge_count(), 2);
        assert_eq!(ids(&ancestor_closure(&u, "B", 0).unwrap()), ["B"]);
        assert!(ancestor_closure(&u, "Q", 1).is_err());
    }

    #[test]
    fn common_ancestor_member_of_existing() {
        let u = fixtures::f1_graph();
        let ca = closest_common_ancestor(&u, "C", &set(&["A"]))
            .unwrap()
            .unwrap();
        assert_eq!(ca.ancestor.as_str(), "A");
        assert_eq!((ca.to_new, ca.to_existing), (1, 0));
        assert_eq!(
            ca.edges,
            BTreeSet::from([(PersonId::from("A"), PersonId::from("C"))])
        );
    }

    #[test]
    fn common_ancestor_two_generations_each_side() {
        // G -> M1 -> L1, G -> M2 -> L2
        let persons = ["G", "M1", "M2", "L1", "L2"].map(Person::new).to_vec();
        let edges = vec![
            AdvisingEdge::new("G", "M1"),
            AdvisingEdge::new("M1", "L1"),
            AdvisingEdge::new("G", "M2"),
            AdvisingEdge::new("M2", "L2"),
        ];
        let u = GenealogyGraph::new(persons, edges).unwrap();
        let ca = closest_common_ancestor(&u, "L2", &set(&["L1"]))
            .unwrap()
            .unwrap();
        assert_eq!(ca.ancestor.as_str(), "G");
        assert_eq!(ca.distance(), 4);
        assert_eq!(ca.nodes, set(&["G", "L1", "L2", "M1", "M2"]));
        assert_eq!(ca.edges.len(), 4);
    }

    #[test]
    fn common_ancestor_absent_for_disjoint_trees() {
        let u = GenealogyGraph::new(
            ["a", "b", "c", "d"].map(Person::new).to_vec(),
            vec![AdvisingEdge::new("a", "b"), AdvisingEdge::new("c", "d")],
        )
        .unwrap();
        assert!(closest_common_ancestor(&u, "d", &set(&["b"]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn common_ancestor_ties_break_by_id_and_keep_all_minimal_paths() {
        // two apexes at equal distance; diamond below the chosen one
        let persons = ["x", "y", "m1", "m2", "new", "old"]
            .map(Person::new)
            .to_vec();
        let edges = vec![
            AdvisingEdge::new("x", "m1"),
            AdvisingEdge::new("x", "m2"),
            AdvisingEdge::new("m1", "new"),
            AdvisingEdge::new("m2", "new"),
            AdvisingEdge::new("x", "old"),
            AdvisingEdge::new("y", "new"),
            AdvisingEdge::new("y", "q"),
        ];
        let mut persons = persons;
        persons.push(Person::new("q"));
        let u = GenealogyGraph::new(persons, edges).unwrap();
        // x: 2 + 1 = 3; y reaches no existing node
        let ca = closest_common_ancestor(&u, "new", &set(&["old"]))
            .unwrap()
            .unwrap();
        assert_eq!(ca.ancestor.as_str(), "x");
        assert_eq!(ca.nodes, set(&["m1", "m2", "new", "old", "x"]));

        // equal totals: y -> q counts too once q is existing
        let ca = closest_common_ancestor(&u, "new", &set(&["old", "q"]))
            .unwrap()
            .unwrap();
        assert_eq!(ca.ancestor.as_str(), "y");
        assert_eq!(ca.distance(), 2);
    }

    #[test]
    fn f1_series_by_year() {
        let u = fixtures::f1_graph();
        let cohorts = fixtures::f1_cohorts();
        let s70 = build_year(&u, &cohorts, 1970, None).unwrap();
        assert_eq!(ids(&s70.graph), ["A", "P"]);
        assert_eq!(s70.graph.edge_count(), 1);
        let s72 = build_year(&u, &cohorts, 1972, Some(&s70)).unwrap();
        assert_eq!(ids(&s72.graph), ["A", "B", "P"]);
        assert_eq!(s72.graph.edge_count(), 2);
        let s75 = build_year(&u, &cohorts, 1975, Some(&s72)).unwrap();
        assert_eq!(s75.graph.node_count(), 4);
        assert_eq!(s75.graph.edge_count(), 3);
        // status flags follow the year
        assert!(!s70.graph.person("C").is_some_and(|p| p.laureate));
        assert!(!s72.graph.person("B").is_none());
        assert!(s75.graph.person("C").unwrap().laureate);
        assert_eq!(s75.reasons[&PersonId::from("P")], InclusionReason::Ancestor);
        assert_eq!(s75.reasons[&PersonId::from("A")], InclusionReason::Laureate);

        let series = build_series(&u, &cohorts).unwrap();
        let sizes: Vec<usize> = series.iter().map(|s| s.graph.node_count()).collect();
        assert_eq!(sizes, [2, 3, 4]);
        assert_eq!(build_year(&u, &cohorts, 1975, None).unwrap(), s75);
        assert!(build_year(&u, &cohorts, 1972, Some(&s75)).is_err());
    }

    #[test]
    fn single_year_series() {
        let u = fixtures::f1_graph();
        let mut cohorts = Cohorts::default();
        cohorts.push(&u, 1972, PersonId::from("B")).unwrap();
        assert_eq!(build_series(&u, &cohorts).unwrap().len(), 1);
        assert!(matches!(
            build_series(&u, &Cohorts::default()),
            Err(ConstructError::NoCohorts)
        ));
    }

    #[test]
    fn disjoint_laureate_gets_connector_beyond_generation_limit() {
        // root R with two chains of length 7; laureates at the chain ends
        let mut persons = vec![Person::new("R")];
        let mut edges = Vec::new();
        for side in ["l", "r"] {
            let mut prev = "R".to_string();
            for k in 1..=7 {
                let id = format!("{side}{k}");
                let mut p = Person::new(id.as_str());
                if k == 7 {
                    p = p.laureate_in(if side == "l" { 1970 } else { 1971 });
                }
                persons.push(p);
                edges.push(AdvisingEdge::new(prev.as_str(), id.as_str()));
                prev = id;
            }
        }
        let u = GenealogyGraph::new(persons, edges).unwrap();
        let series = build_series(&u, &Cohorts::from_universe(&u)).unwrap();
        let first = &series.snapshots[0];
        assert_eq!(first.graph.node_count(), 6);
        let second = &series.snapshots[1];
        // R joins as connector along with r1 and the left chain's l1
        assert_eq!(second.graph.node_count(), 15);
        assert_eq!(
            second.reasons[&PersonId::from("R")],
            InclusionReason::Connector
        );
        assert_eq!(crate::dynamics::components(&second.graph).0, 1);
    }

    #[test]
    fn overlay_edits() {
        let g = fixtures::f1_graph();
        let added =
            apply_overlay(&g, &[OverlayEdit::AddEdge(AdvisingEdge::new("P", "C"))]).unwrap();
        assert_eq!(added.edge_count(), 4);
        assert_eq!(g.edge_count(), 3);
        let removed = apply_overlay(
            &g,
            &[OverlayEdit::RemoveEdge(AdvisingEdge::new("A", "C").key())],
        )
        .unwrap();
        assert!(removed
            .advisors_of(removed.index_of("C").unwrap())
            .is_empty());

        assert!(matches!(
            apply_overlay(
                &g,
                &[OverlayEdit::RemoveEdge(AdvisingEdge::new("C", "A").key())]
            ),
            Err(ConstructError::MissingEdge(_))
        ));
        assert!(matches!(
            apply_overlay(&g, &[OverlayEdit::AddEdge(AdvisingEdge::new("C", "P"))]),
            Err(ConstructError::Overlay(_))
        ));
        assert!(matches!(
            apply_overlay(&g, &[OverlayEdit::AddEdge(AdvisingEdge::new("P", "A"))]),
            Err(ConstructError::DuplicateEdge(_))
        ));
        let with_z = apply_overlay(
            &g,
            &[
                OverlayEdit::AddPerson(Person::new("Z")),
                OverlayEdit::AddEdge(AdvisingEdge::new("Z", "P")),
            ],
        )
        .unwrap();
        assert_eq!(with_z.node_count(), 5);
    }

    #[test]
    fn full_expansion_truncates_above_cutoff() {
        let g = fixtures::f1_graph();
        assert_eq!(expand_full(&g, &set(&["P"])).unwrap(), g);

        let mut ds = g.to_dataset();
        ds.persons.push(Person::new("Q1"));
        ds.persons.push(Person::new("Q2"));
        ds.edges.push(AdvisingEdge::new("Q2", "Q1"));
        ds.edges.push(AdvisingEdge::new("Q1", "P"));
        let extended = GenealogyGraph::from_dataset(ds).unwrap();
        assert_eq!(expand_full(&extended, &set(&["P"])).unwrap(), g);
        assert_eq!(
            expand_full(&extended, &set(&["Q1"])).unwrap().node_count(),
            5
        );
        assert_eq!(
            expand_full(&extended, &BTreeSet::new())
                .unwrap()
                .node_count(),
            6
        );
        assert!(expand_full(&g, &set(&["nobody"])).is_err());
    }

    #[test]
    fn candidates_attach_without_becoming_laureates() {
        let u = fixtures::f1_with_candidate();
        let series = build_series(&u, &Cohorts::from_universe(&u)).unwrap();
        let snap = series.last().unwrap();
        assert!(!snap.graph.contains("X"));
        let with_x = attach_candidates(snap, &u, &[PersonId::from("X")]).unwrap();
        assert_eq!(with_x.graph.node_count(), 5);
        let x = with_x.graph.person("X").unwrap();
        assert!(x.candidate && !x.laureate);
        assert_eq!(
            with_x.reasons[&PersonId::from("X")],
            InclusionReason::Candidate
        );
    }
}
