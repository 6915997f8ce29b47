//! Persons, advising edges and the validated genealogy graph.
//!
//! A [`GenealogyGraph`] is an immutable, acyclic snapshot. Persons are kept in
//! ascending id order and that order doubles as the dense node index used by
//! every traversal in the crate, so iteration order (and therefore every
//! derived output) is deterministic.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::validate::{self, ValidationReport};

/// Stable person identifier, usually source-qualified (`at:7045`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PersonId(String);

impl PersonId {
    pub fn new(id: impl Into<String>) -> Self {
        PersonId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for PersonId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for PersonId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl From<&str> for PersonId {
    fn from(s: &str) -> Self {
        PersonId(s.to_owned())
    }
}

impl From<String> for PersonId {
    fn from(s: String) -> Self {
        PersonId(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Gender {
    Male,
    Female,
    #[default]
    Unknown,
}

impl Gender {
    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
            Gender::Unknown => "unknown",
        }
    }
}

impl FromStr for Gender {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "male" | "m" => Ok(Gender::Male),
            "female" | "f" => Ok(Gender::Female),
            "unknown" | "" => Ok(Gender::Unknown),
            other => Err(format!("unknown gender `{other}`")),
        }
    }
}

/// The kind of supervision an edge records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum EdgeKind {
    #[default]
    Phd,
    Habilitation,
    Masters,
    Mentor,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Phd => "phd",
            EdgeKind::Habilitation => "habilitation",
            EdgeKind::Masters => "masters",
            EdgeKind::Mentor => "mentor",
        }
    }
}

impl FromStr for EdgeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "phd" => Ok(EdgeKind::Phd),
            "habilitation" => Ok(EdgeKind::Habilitation),
            "masters" => Ok(EdgeKind::Masters),
            "mentor" => Ok(EdgeKind::Mentor),
            other => Err(format!("unknown edge kind `{other}`")),
        }
    }
}

/// A scholar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Person {
    pub id: PersonId,
    pub name: String,
    pub gender: Gender,
    pub laureate: bool,
    pub prize_year: Option<i32>,
    /// Member of the candidate list.
    pub candidate: bool,
    pub degree_year: Option<i32>,
    pub degree_institution: Option<String>,
    /// Provenance labels.
    pub sources: Vec<String>,
}

impl Person {
    /// A bare person with the id doubling as display name.
    pub fn new(id: impl Into<PersonId>) -> Self {
        let id = id.into();
        Person {
            name: id.to_string(),
            id,
            gender: Gender::Unknown,
            laureate: false,
            prize_year: None,
            candidate: false,
            degree_year: None,
            degree_institution: None,
            sources: Vec::new(),
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn laureate_in(mut self, year: i32) -> Self {
        self.laureate = true;
        self.prize_year = Some(year);
        self.candidate = false;
        self
    }

    pub fn candidate(mut self) -> Self {
        self.candidate = true;
        self
    }

    pub fn degree(mut self, year: i32, institution: impl Into<String>) -> Self {
        self.degree_year = Some(year);
        self.degree_institution = Some(institution.into());
        self
    }

    pub fn degree_year(mut self, year: i32) -> Self {
        self.degree_year = Some(year);
        self
    }

    /// Whether the person holds the prize as of the end of `year`.
    pub fn laureate_as_of(&self, year: i32) -> bool {
        self.laureate && self.prize_year.is_some_and(|y| y <= year)
    }
}

/// A directed professor → student relation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdvisingEdge {
    pub advisor: PersonId,
    pub student: PersonId,
    pub kind: EdgeKind,
    pub source: String,
}

impl AdvisingEdge {
    pub fn new(advisor: impl Into<PersonId>, student: impl Into<PersonId>) -> Self {
        AdvisingEdge {
            advisor: advisor.into(),
            student: student.into(),
            kind: EdgeKind::Phd,
            source: String::new(),
        }
    }

    pub fn with_kind(mut self, kind: EdgeKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    /// Identity of the edge; the provenance label is not part of it.
    pub fn key(&self) -> EdgeKey {
        EdgeKey {
            advisor: self.advisor.clone(),
            student: self.student.clone(),
            kind: self.kind,
        }
    }
}

/// `(advisor, student, kind)`, the uniqueness key of an edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub advisor: PersonId,
    pub student: PersonId,
    pub kind: EdgeKind,
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} ({})",
            self.advisor,
            self.student,
            self.kind.as_str()
        )
    }
}

/// Where a record came from in a file, for error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowRef {
    Node(u64),
    Edge(u64),
}

impl fmt::Display for RowRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowRef::Node(line) => write!(f, "nodes row {line}"),
            RowRef::Edge(line) => write!(f, "edges row {line}"),
        }
    }
}

/// Unvalidated persons and edges, as parsed or assembled.
///
/// Row vectors are either empty or parallel to `persons`/`edges`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub persons: Vec<Person>,
    pub edges: Vec<AdvisingEdge>,
    pub person_rows: Vec<u64>,
    pub edge_rows: Vec<u64>,
}

impl Dataset {
    pub fn new(persons: Vec<Person>, edges: Vec<AdvisingEdge>) -> Self {
        Dataset {
            persons,
            edges,
            person_rows: Vec::new(),
            edge_rows: Vec::new(),
        }
    }

    pub(crate) fn person_row(&self, i: usize) -> Option<RowRef> {
        self.person_rows.get(i).map(|&l| RowRef::Node(l))
    }

    pub(crate) fn edge_row(&self, i: usize) -> Option<RowRef> {
        self.edge_rows.get(i).map(|&l| RowRef::Edge(l))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("dataset failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error("unknown person `{0}`")]
    UnknownPerson(String),
}

/// Immutable, validated, acyclic genealogy snapshot.
#[derive(Debug, Clone)]
pub struct GenealogyGraph {
    persons: Vec<Person>,
    index: HashMap<PersonId, usize>,
    edges: Vec<AdvisingEdge>,
    students: Vec<Vec<usize>>,
    advisors: Vec<Vec<usize>>,
}

impl PartialEq for GenealogyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.persons == other.persons && self.edges == other.edges
    }
}

impl Eq for GenealogyGraph {}

impl Default for GenealogyGraph {
    fn default() -> Self {
        GenealogyGraph::assemble(Vec::new(), Vec::new())
    }
}

impl GenealogyGraph {
    /// Validates and builds. Any validation error rejects the whole dataset.
    pub fn new(persons: Vec<Person>, edges: Vec<AdvisingEdge>) -> Result<Self, GraphError> {
        Self::from_dataset(Dataset::new(persons, edges))
    }

    pub fn from_dataset(dataset: Dataset) -> Result<Self, GraphError> {
        let report = validate::validate(&dataset);
        if !report.is_admissible() {
            return Err(GraphError::Invalid(report));
        }
        Ok(Self::assemble(dataset.persons, dataset.edges))
    }

    /// Builds without validation. Callers guarantee unique ids, resolvable and
    /// unique edges, and acyclicity (e.g. an induced subgraph of a valid graph).
    pub(crate) fn assemble(mut persons: Vec<Person>, mut edges: Vec<AdvisingEdge>) -> Self {
        persons.sort_by(|a, b| a.id.cmp(&b.id));
        edges.sort();
        let index: HashMap<PersonId, usize> = persons
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.clone(), i))
            .collect();
        let mut students = vec![Vec::new(); persons.len()];
        let mut advisors = vec![Vec::new(); persons.len()];
        for e in &edges {
            let a = index[&e.advisor];
            let s = index[&e.student];
            students[a].push(s);
            advisors[s].push(a);
        }
        for list in students.iter_mut().chain(advisors.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        GenealogyGraph {
            persons,
            index,
            edges,
            students,
            advisors,
        }
    }

    pub fn node_count(&self) -> usize {
        self.persons.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.persons.is_empty()
    }

    /// Persons in ascending id order.
    pub fn persons(&self) -> &[Person] {
        &self.persons
    }

    /// Edges in ascending `(advisor, student, kind)` order.
    pub fn edges(&self) -> &[AdvisingEdge] {
        &self.edges
    }

    pub fn person(&self, id: &str) -> Option<&Person> {
        self.index.get(id).map(|&i| &self.persons[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize, GraphError> {
        self.index_of(id)
            .ok_or_else(|| GraphError::UnknownPerson(id.to_owned()))
    }

    pub fn person_at(&self, idx: usize) -> &Person {
        &self.persons[idx]
    }

    /// Distinct students of the node at `idx`, ascending.
    pub fn students_of(&self, idx: usize) -> &[usize] {
        &self.students[idx]
    }

    /// Distinct advisors of the node at `idx`, ascending.
    pub fn advisors_of(&self, idx: usize) -> &[usize] {
        &self.advisors[idx]
    }

    pub fn laureates(&self) -> impl Iterator<Item = &Person> {
        self.persons.iter().filter(|p| p.laureate)
    }

    pub fn has_edge(&self, key: &EdgeKey) -> bool {
        self.edges
            .binary_search_by(|e| {
                (&e.advisor, &e.student, e.kind).cmp(&(&key.advisor, &key.student, key.kind))
            })
            .is_ok()
    }

    pub fn node_ids(&self) -> BTreeSet<PersonId> {
        self.persons.iter().map(|p| p.id.clone()).collect()
    }

    pub fn edge_keys(&self) -> BTreeSet<EdgeKey> {
        self.edges.iter().map(AdvisingEdge::key).collect()
    }

    /// Subgraph induced by `nodes` (indices into this graph), every edge whose
    /// endpoints are both kept.
    pub fn induced_by_index(&self, nodes: &BTreeSet<usize>) -> GenealogyGraph {
        self.induced_with(nodes, |p| p.clone())
    }

    /// As [`induced_by_index`](Self::induced_by_index), rewriting each kept
    /// person through `map`. `map` must preserve ids.
    pub(crate) fn induced_with(
        &self,
        nodes: &BTreeSet<usize>,
        map: impl Fn(&Person) -> Person,
    ) -> GenealogyGraph {
        let persons = nodes.iter().map(|&i| map(&self.persons[i])).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| {
                nodes.contains(&self.index[&e.advisor]) && nodes.contains(&self.index[&e.student])
            })
            .cloned()
            .collect();
        GenealogyGraph::assemble(persons, edges)
    }

    /// Subgraph induced by a set of ids; unknown ids are an error.
    pub fn induced<'a>(
        &self,
        ids: impl IntoIterator<Item = &'a PersonId>,
    ) -> Result<GenealogyGraph, GraphError> {
        let nodes = ids
            .into_iter()
            .map(|id| self.require(id.as_str()))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(self.induced_by_index(&nodes))
    }

    /// Whether every node and edge of `self` is present in `other`.
    pub fn is_subgraph_of(&self, other: &GenealogyGraph) -> bool {
        self.persons.iter().all(|p| other.contains(p.id.as_str()))
            && self.edges.iter().all(|e| other.has_edge(&e.key()))
    }

    pub fn to_dataset(&self) -> Dataset {
        Dataset::new(self.persons.clone(), self.edges.clone())
    }

    /// Breadth-first distances along advisor → student edges from `source`.
    /// `None` marks unreachable nodes; the source itself is at 0.
    pub fn descendant_distances(&self, source: usize) -> Vec<Option<u32>> {
        self.bfs(&[source], |i| &self.students[i], None)
    }

    /// Breadth-first distances along student → advisor edges from `source`,
    /// optionally stopping after `max_depth` generations.
    pub fn ancestor_distances(&self, source: usize, max_depth: Option<u32>) -> Vec<Option<u32>> {
        self.bfs(&[source], |i| &self.advisors[i], max_depth)
    }

    pub(crate) fn bfs<'a>(
        &'a self,
        sources: &[usize],
        next: impl Fn(usize) -> &'a [usize],
        max_depth: Option<u32>,
    ) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.persons.len()];
        let mut queue = std::collections::VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued nodes have a distance");
            if max_depth.is_some_and(|m| d >= m) {
                continue;
            }
            for &v in next(u) {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}
