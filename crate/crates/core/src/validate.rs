//! Structural and plausibility checks on raw datasets.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::model::{Dataset, EdgeKey, RowRef};

/// First award year of the prize.
pub const FIRST_PRIZE_YEAR: i32 = 1969;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingCode {
    EmptyId,
    DuplicateId,
    SelfLoop,
    DuplicateEdge,
    DanglingEndpoint,
    Cycle,
    PrizeYearOutOfRange,
    Chronology,
    MissingDegree,
    LaureateWithoutCohort,
}

impl FindingCode {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingCode::EmptyId => "empty-id",
            FindingCode::DuplicateId => "duplicate-id",
            FindingCode::SelfLoop => "self-loop",
            FindingCode::DuplicateEdge => "duplicate-edge",
            FindingCode::DanglingEndpoint => "dangling-endpoint",
            FindingCode::Cycle => "cycle",
            FindingCode::PrizeYearOutOfRange => "prize-year-out-of-range",
            FindingCode::Chronology => "chronology",
            FindingCode::MissingDegree => "missing-degree",
            FindingCode::LaureateWithoutCohort => "laureate-without-cohort",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub code: FindingCode,
    pub subject: String,
    pub message: String,
    /// Source rows involved, when the dataset came from files.
    pub rows: Vec<RowRef>,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {}",
            self.code.as_str(),
            self.subject,
            self.message
        )?;
        if !self.rows.is_empty() {
            let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
            write!(f, " ({})", rows.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.errors.is_empty()
    }

    fn error(
        &mut self,
        code: FindingCode,
        subject: impl Into<String>,
        message: impl Into<String>,
        rows: Vec<RowRef>,
    ) {
        self.errors.push(Finding {
            code,
            subject: subject.into(),
            message: message.into(),
            rows,
        });
    }

    fn warn(
        &mut self,
        code: FindingCode,
        subject: impl Into<String>,
        message: impl Into<String>,
        rows: Vec<RowRef>,
    ) {
        self.warnings.push(Finding {
            code,
            subject: subject.into(),
            message: message.into(),
            rows,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning {w}")?;
        }
        Ok(())
    }
}

/// Checks a dataset. Errors make it inadmissible as a [`GenealogyGraph`]; warnings
/// flag implausible but accepted data.
///
/// [`GenealogyGraph`]: crate::model::GenealogyGraph
pub fn validate(dataset: &Dataset) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, p) in dataset.persons.iter().enumerate() {
        let row: Vec<RowRef> = dataset.person_row(i).into_iter().collect();
        if p.id.as_str().is_empty() {
            report.error(FindingCode::EmptyId, "<empty>", "person id is empty", row);
            continue;
        }
        if let Some(&first) = index.get(p.id.as_str()) {
            let rows = dataset.person_row(first).into_iter().chain(row).collect();
            report.error(
                FindingCode::DuplicateId,
                p.id.as_str(),
                "id defined more than once",
                rows,
            );
            continue;
        }
        index.insert(p.id.as_str(), i);

        if p.laureate {
            match p.prize_year {
                None => report.warn(
                    FindingCode::LaureateWithoutCohort,
                    p.id.as_str(),
                    "laureate has no prize year and joins no cohort",
                    row.clone(),
                ),
                Some(y) if y < FIRST_PRIZE_YEAR => report.error(
                    FindingCode::PrizeYearOutOfRange,
                    p.id.as_str(),
                    format!("prize year {y} precedes {FIRST_PRIZE_YEAR}"),
                    row.clone(),
                ),
                Some(_) => {}
            }
        }
        if p.degree_year.is_none() || p.degree_institution.is_none() {
            let missing = match (p.degree_year, &p.degree_institution) {
                (None, None) => "degree year and institution",
                (None, Some(_)) => "degree year",
                _ => "degree institution",
            };
            report.warn(
                FindingCode::MissingDegree,
                p.id.as_str(),
                format!("missing {missing}"),
                row,
            );
        }
    }

    let n = dataset.persons.len();
    let mut seen: HashMap<EdgeKey, usize> = HashMap::new();
    // Resolved edges only; the cycle search ignores the rest.
    let mut resolved: Vec<(usize, usize, usize)> = Vec::new();
    for (i, e) in dataset.edges.iter().enumerate() {
        let row: Vec<RowRef> = dataset.edge_row(i).into_iter().collect();
        let key = e.key();
        if e.advisor == e.student {
            report.error(
                FindingCode::SelfLoop,
                key.to_string(),
                "advisor equals student",
                row,
            );
            continue;
        }
        if let Some(&first) = seen.get(&key) {
            let rows = dataset.edge_row(first).into_iter().chain(row).collect();
            report.error(
                FindingCode::DuplicateEdge,
                key.to_string(),
                "edge listed more than once",
                rows,
            );
            continue;
        }
        seen.insert(key.clone(), i);
        let a = index.get(e.advisor.as_str()).copied();
        let s = index.get(e.student.as_str()).copied();
        for (end, id) in [(a, &e.advisor), (s, &e.student)] {
            if end.is_none() {
                report.error(
                    FindingCode::DanglingEndpoint,
                    key.to_string(),
                    format!("endpoint `{id}` is not a known person"),
                    row.clone(),
                );
            }
        }
        let (Some(a), Some(s)) = (a, s) else { continue };
        resolved.push((a, s, i));

        let (pa, ps) = (&dataset.persons[a], &dataset.persons[s]);
        if let (Some(ya), Some(ys)) = (pa.degree_year, ps.degree_year) {
            if ys < ya {
                report.warn(
                    FindingCode::Chronology,
                    key.to_string(),
                    format!("student degree {ys} precedes advisor degree {ya}"),
                    row,
                );
            }
        }
    }

    if let Some(cycle) = find_cycle(n, &resolved) {
        let ids: Vec<&str> = cycle
            .iter()
            .map(|&(a, _, _)| dataset.persons[a].id.as_str())
            .chain(std::iter::once(dataset.persons[cycle[0].0].id.as_str()))
            .collect();
        let rows = cycle
            .iter()
            .filter_map(|&(_, _, e)| dataset.edge_row(e))
            .collect();
        report.error(
            FindingCode::Cycle,
            ids.join(" -> "),
            format!("advising relations form a cycle of length {}", cycle.len()),
            rows,
        );
    }

    report
}

/// Kahn's algorithm; on failure, walks back through unresolved nodes to extract
/// one cycle as `(advisor, student, edge index)` triples in path order.
fn find_cycle(n: usize, edges: &[(usize, usize, usize)]) -> Option<Vec<(usize, usize, usize)>> {
    let mut indegree = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut incoming: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(a, s, e) in edges {
        indegree[s] += 1;
        out[a].push(s);
        incoming[s].push((a, e));
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut removed = vec![false; n];
    while let Some(u) = stack.pop() {
        removed[u] = true;
        for &v in &out[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                stack.push(v);
            }
        }
    }
    let start = (0..n).find(|&i| !removed[i])?;

    // Every unresolved node keeps an unresolved advisor; follow those until a repeat.
    let mut order: Vec<usize> = Vec::new();
    let mut position: HashMap<usize, usize> = HashMap::new();
    let mut via: Vec<(usize, usize)> = Vec::new();
    let mut cur = start;
    let mut on_path: HashSet<usize> = HashSet::new();
    loop {
        if on_path.contains(&cur) {
            let from = position[&cur];
            // order[k] was reached from via[k] = (advisor, edge) with advisor == order[k + 1].
            let mut cycle: Vec<(usize, usize, usize)> = (from..order.len())
                .map(|k| (via[k].0, order[k], via[k].1))
                .collect();
            cycle.reverse();
            return Some(cycle);
        }
        on_path.insert(cur);
        position.insert(cur, order.len());
        order.push(cur);
        let &(adv, e) = incoming[cur]
            .iter()
            .find(|(a, _)| !removed[*a])
            .expect("unresolved node has an unresolved advisor");
        via.push((adv, e));
        cur = adv;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{AdvisingEdge, Person};

    fn codes(findings: &[Finding]) -> Vec<FindingCode> {
        findings.iter().map(|f| f.code).collect()
    }

    #[test]
    fn f1_is_clean() {
        let report = validate(&fixtures::f1_dataset());
        assert!(report.errors.is_empty(), "{report}");
        assert!(report.warnings.is_empty(), "{report}");
    }

    #[test]
    fn chronology_warning() {
        let mut ds = fixtures::f1_dataset();
        let c = ds
            .persons
            .iter_mut()
            .find(|p| p.id.as_str() == "C")
            .unwrap();
        c.degree_year = Some(1920);
        let report = validate(&ds);
        assert!(report.errors.is_empty());
        assert_eq!(codes(&report.warnings), vec![FindingCode::Chronology]);
    }

    #[test]
    fn unknown_endpoint_is_one_referential_error() {
        let mut ds = fixtures::f1_dataset();
        ds.edges.push(AdvisingEdge::new("X", "C"));
        let report = validate(&ds);
        assert_eq!(codes(&report.errors), vec![FindingCode::DanglingEndpoint]);
    }

    #[test]
    fn two_cycle_names_both_edges() {
        let ds = Dataset {
            persons: vec![
                Person::new("P").degree(1900, "U"),
                Person::new("A").degree(1900, "U"),
            ],
            edges: vec![AdvisingEdge::new("P", "A"), AdvisingEdge::new("A", "P")],
            person_rows: vec![2, 3],
            edge_rows: vec![2, 3],
        };
        let report = validate(&ds);
        assert_eq!(codes(&report.errors), vec![FindingCode::Cycle]);
        let mut rows = report.errors[0].rows.clone();
        rows.sort();
        assert_eq!(rows, vec![RowRef::Edge(2), RowRef::Edge(3)]);
    }

    #[test]
    fn longer_cycle_is_reported_in_path_order() {
        let persons = ["a", "b", "c", "d"]
            .map(|s| Person::new(s).degree(1900, "U"))
            .to_vec();
        let edges = vec![
            AdvisingEdge::new("d", "a"),
            AdvisingEdge::new("a", "b"),
            AdvisingEdge::new("b", "c"),
            AdvisingEdge::new("c", "a"),
        ];
        let report = validate(&Dataset::new(persons, edges));
        assert_eq!(report.errors.len(), 1);
        let subject = &report.errors[0].subject;
        let ids: Vec<&str> = subject.split(" -> ").collect();
        assert_eq!(ids.len(), 4);
        assert_eq!(ids.first(), ids.last());
        assert!(!ids.contains(&"d"));
    }

    #[test]
    fn duplicates_and_self_loops() {
        let persons = vec![
            Person::new("a").degree(1900, "U"),
            Person::new("a"),
            Person::new("b").degree(1900, "U"),
        ];
        let edges = vec![
            AdvisingEdge::new("a", "a"),
            AdvisingEdge::new("a", "b"),
            AdvisingEdge::new("a", "b").with_source("other"),
        ];
        let report = validate(&Dataset::new(persons, edges));
        assert_eq!(
            codes(&report.errors),
            vec![
                FindingCode::DuplicateId,
                FindingCode::SelfLoop,
                FindingCode::DuplicateEdge
            ]
        );
    }

    #[test]
    fn laureate_year_rules() {
        let mut early = Person::new("e").degree(1900, "U");
        early.laureate = true;
        early.prize_year = Some(1950);
        let mut no_year = Person::new("n").degree(1900, "U");
        no_year.laureate = true;
        let report = validate(&Dataset::new(vec![early, no_year], vec![]));
        assert_eq!(
            codes(&report.errors),
            vec![FindingCode::PrizeYearOutOfRange]
        );
        assert_eq!(
            codes(&report.warnings),
            vec![FindingCode::LaureateWithoutCohort]
        );
    }
}
