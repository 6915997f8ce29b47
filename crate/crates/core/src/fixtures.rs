//! Bundled fixture data.
//!
//! F1 is a four-person network: professor `P` (degree 1900 at `U2`) advised
//! laureates `A` (prize 1970, degree 1930 at `U1`) and `B` (prize 1972, degree
//! 1932 at `U1`); `A` advised laureate `C` (prize 1975, degree 1960 at `U3`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::Cohorts;
use crate::dataset;
use crate::model::{AdvisingEdge, Dataset, GenealogyGraph, Person};

pub const F1_NODES: &str = include_str!("../data/f1/nodes.csv");
pub const F1_EDGES: &str = include_str!("../data/f1/edges.csv");
pub const F1_COHORTS: &str = include_str!("../data/f1/cohorts.csv");

pub fn f1_dataset() -> Dataset {
    dataset::parse_dataset(F1_NODES.as_bytes(), F1_EDGES.as_bytes()).expect("bundled F1 parses")
}

pub fn f1_graph() -> GenealogyGraph {
    dataset::read_dataset(F1_NODES.as_bytes(), F1_EDGES.as_bytes()).expect("bundled F1 is valid")
}

pub fn f1_cohorts() -> Cohorts {
    dataset::read_cohorts(F1_COHORTS.as_bytes(), &f1_graph()).expect("bundled F1 cohorts are valid")
}

/// F1 plus candidate `X` (degree 1990 at `U3`), a student of `C`.
pub fn f1_with_candidate() -> GenealogyGraph {
    let mut ds = f1_dataset();
    ds.persons.push(
        Person::new("X")
            .named("Candidate X")
            .candidate()
            .degree(1990, "U3"),
    );
    ds.edges
        .push(AdvisingEdge::new("C", "X").with_source("fixture"));
    GenealogyGraph::from_dataset(ds).expect("F1 with candidate is valid")
}

/// Shape of a [`random_dag`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomDagSpec {
    pub nodes: usize,
    pub max_advisors: usize,
    /// Probability that a node is a laureate.
    pub laureate_rate: f64,
    /// Number of institutions to draw degree institutions from.
    pub institutions: usize,
    /// Consecutive nodes sharing one degree year.
    pub year_group: usize,
}

impl Default for RandomDagSpec {
    fn default() -> Self {
        RandomDagSpec {
            nodes: 40,
            max_advisors: 3,
            laureate_rate: 0.3,
            institutions: 5,
            year_group: 1,
        }
    }
}

/// A seeded random genealogy. Node `nNNN` may only be advised by nodes with a
/// smaller number, so the graph is acyclic. Degree years step by 3 every
/// `year_group` nodes, and laureates win 30 to 34 years after their degree.
pub fn random_dag(spec: &RandomDagSpec, seed: u64) -> GenealogyGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |i: usize| format!("n{i:03}");
    let mut persons = Vec::with_capacity(spec.nodes);
    let mut edges = Vec::new();
    for i in 0..spec.nodes {
        let degree_year = 1850 + 3 * (i / spec.year_group.max(1)) as i32;
        let inst = format!("U{}", rng.gen_range(0..spec.institutions.max(1)));
        let mut p = Person::new(id(i)).degree(degree_year, inst);
        if rng.gen_bool(spec.laureate_rate) {
            p = p.laureate_in((degree_year + 30 + rng.gen_range(0..5)).max(1969));
        }
        persons.push(p);
        if i > 0 {
            let k = rng.gen_range(0..=spec.max_advisors.min(i));
            for a in rand::seq::index::sample(&mut rng, i, k) {
                edges.push(AdvisingEdge::new(id(a), id(i)));
            }
        }
    }
    GenealogyGraph::new(persons, edges).expect("random DAG is acyclic")
}
