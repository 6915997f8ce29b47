//! CSV dataset files.
//!
//! ```text
//! nodes.csv:   id,name,gender,laureate,prize_year,candidate,degree_year,degree_institution,sources
//! edges.csv:   advisor_id,student_id,kind,source
//! cohorts.csv: year,laureate_id
//! overlay.csv: action,advisor_id,student_id,kind
//! ```
//!
//! Booleans are `0`/`1`, an empty field means absent, and `sources` is a
//! `;`-separated list. Writers emit rows in ascending id order so that saving
//! the same graph twice yields identical bytes.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::construct::{Cohorts, OverlayEdit};
use crate::model::{AdvisingEdge, Dataset, EdgeKind, GenealogyGraph, GraphError, Person, PersonId};
use crate::validate::{self, ValidationReport};

pub const NODES_HEADER: [&str; 9] = [
    "id",
    "name",
    "gender",
    "laureate",
    "prize_year",
    "candidate",
    "degree_year",
    "degree_institution",
    "sources",
];
pub const EDGES_HEADER: [&str; 4] = ["advisor_id", "student_id", "kind", "source"];
pub const COHORTS_HEADER: [&str; 2] = ["year", "laureate_id"];
pub const OVERLAY_HEADER: [&str; 4] = ["action", "advisor_id", "student_id", "kind"];

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file} row {row}: {message}")]
    Malformed {
        file: &'static str,
        row: u64,
        message: String,
    },
    #[error("{file}: {source}")]
    Csv {
        file: &'static str,
        #[source]
        source: csv::Error,
    },
    #[error("dataset rejected:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io {
        path: path.to_owned(),
        source,
    }
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input)
}

/// Iterates data rows after checking the header, yielding `(line, record)`.
fn rows<R: Read>(
    input: R,
    file: &'static str,
    header: &[&str],
) -> Result<Vec<(u64, csv::StringRecord)>, DatasetError> {
    let mut rdr = reader(input);
    let mut out = Vec::new();
    let mut saw_header = false;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line());
            DatasetError::Malformed {
                file,
                row,
                message: e.to_string(),
            }
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if !saw_header {
            let got: Vec<&str> = rec.iter().map(str::trim).collect();
            if got != header {
                return Err(DatasetError::Malformed {
                    file,
                    row: line,
                    message: format!(
                        "expected header `{}`, found `{}`",
                        header.join(","),
                        got.join(",")
                    ),
                });
            }
            saw_header = true;
            continue;
        }
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        if rec.len() != header.len() {
            return Err(DatasetError::Malformed {
                file,
                row: line,
                message: format!("expected {} columns, found {}", header.len(), rec.len()),
            });
        }
        out.push((line, rec));
    }
    if !saw_header {
        return Err(DatasetError::Malformed {
            file,
            row: 1,
            message: "missing header row".into(),
        });
    }
    Ok(out)
}

fn opt(rec: &csv::StringRecord, i: usize) -> Option<&str> {
    let v = rec[i].trim();
    (!v.is_empty()).then_some(v)
}

fn parse_bool(v: Option<&str>) -> Result<bool, String> {
    match v {
        None | Some("0") => Ok(false),
        Some("1") => Ok(true),
        Some(other) => Err(format!("expected 0 or 1, found `{other}`")),
    }
}

fn parse_year(v: Option<&str>) -> Result<Option<i32>, String> {
    v.map(|s| s.parse::<i32>().map_err(|_| format!("invalid year `{s}`")))
        .transpose()
}

fn parse_person(rec: &csv::StringRecord) -> Result<Person, String> {
    Ok(Person {
        id: PersonId::new(rec[0].trim()),
        name: rec[1].trim().to_owned(),
        gender: rec[2].trim().parse()?,
        laureate: parse_bool(opt(rec, 3))?,
        prize_year: parse_year(opt(rec, 4))?,
        candidate: parse_bool(opt(rec, 5))?,
        degree_year: parse_year(opt(rec, 6))?,
        degree_institution: opt(rec, 7).map(str::to_owned),
        sources: opt(rec, 8)
            .map(|s| {
                s.split(';')
                    .map(|x| x.trim().to_owned())
                    .filter(|x| !x.is_empty())
                    .collect()
            })
            .unwrap_or_default(),
    })
}

/// Parses both files without validating the result.
pub fn parse_dataset<N: Read, E: Read>(nodes: N, edges: E) -> Result<Dataset, DatasetError> {
    let mut ds = Dataset::default();
    for (line, rec) in rows(nodes, "nodes", &NODES_HEADER)? {
        let person = parse_person(&rec).map_err(|message| DatasetError::Malformed {
            file: "nodes",
            row: line,
            message,
        })?;
        ds.persons.push(person);
        ds.person_rows.push(line);
    }
    for (line, rec) in rows(edges, "edges", &EDGES_HEADER)? {
        let kind = match opt(&rec, 2) {
            None => EdgeKind::Phd,
            Some(k) => k.parse().map_err(|message| DatasetError::Malformed {
                file: "edges",
                row: line,
                message,
            })?,
        };
        ds.edges.push(AdvisingEdge {
            advisor: PersonId::new(rec[0].trim()),
            student: PersonId::new(rec[1].trim()),
            kind,
            source: rec[3].trim().to_owned(),
        });
        ds.edge_rows.push(line);
    }
    Ok(ds)
}

/// Parses and validates; any error finding aborts with the full report.
pub fn read_dataset<N: Read, E: Read>(nodes: N, edges: E) -> Result<GenealogyGraph, DatasetError> {
    let ds = parse_dataset(nodes, edges)?;
    let report = validate::validate(&ds);
    if !report.is_admissible() {
        return Err(DatasetError::Invalid(report));
    }
    Ok(GenealogyGraph::from_dataset(ds)?)
}

pub fn load_raw(nodes_path: &Path, edges_path: &Path) -> Result<Dataset, DatasetError> {
    let nodes = File::open(nodes_path).map_err(io_err(nodes_path))?;
    let edges = File::open(edges_path).map_err(io_err(edges_path))?;
    parse_dataset(nodes, edges)
}

pub fn load_dataset(nodes_path: &Path, edges_path: &Path) -> Result<GenealogyGraph, DatasetError> {
    let nodes = File::open(nodes_path).map_err(io_err(nodes_path))?;
    let edges = File::open(edges_path).map_err(io_err(edges_path))?;
    read_dataset(nodes, edges)
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn year(v: Option<i32>) -> String {
    v.map(|y| y.to_string()).unwrap_or_default()
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn write_nodes<W: Write>(graph: &GenealogyGraph, out: W) -> Result<(), DatasetError> {
    let csv_err = |source| DatasetError::Csv {
        file: "nodes",
        source,
    };
    let mut w = writer(out);
    w.write_record(NODES_HEADER).map_err(csv_err)?;
    for p in graph.persons() {
        w.write_record([
            p.id.as_str(),
            &p.name,
            p.gender.as_str(),
            flag(p.laureate),
            &year(p.prize_year),
            flag(p.candidate),
            &year(p.degree_year),
            p.degree_institution.as_deref().unwrap_or(""),
            &p.sources.join(";"),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| csv_err(e.into()))
}

pub fn write_edges<W: Write>(graph: &GenealogyGraph, out: W) -> Result<(), DatasetError> {
    let csv_err = |source| DatasetError::Csv {
        file: "edges",
        source,
    };
    let mut w = writer(out);
    w.write_record(EDGES_HEADER).map_err(csv_err)?;
    for e in graph.edges() {
        w.write_record([
            e.advisor.as_str(),
            e.student.as_str(),
            e.kind.as_str(),
            &e.source,
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| csv_err(e.into()))
}

pub fn save_dataset(
    graph: &GenealogyGraph,
    nodes_path: &Path,
    edges_path: &Path,
) -> Result<(), DatasetError> {
    let nodes = File::create(nodes_path).map_err(io_err(nodes_path))?;
    write_nodes(graph, nodes)?;
    let edges = File::create(edges_path).map_err(io_err(edges_path))?;
    write_edges(graph, edges)
}

/// Reads `year,laureate_id` rows and checks them against `universe`.
pub fn read_cohorts<R: Read>(input: R, universe: &GenealogyGraph) -> Result<Cohorts, DatasetError> {
    let mut entries = Vec::new();
    for (line, rec) in rows(input, "cohorts", &COHORTS_HEADER)? {
        let malformed = |message: String| DatasetError::Malformed {
            file: "cohorts",
            row: line,
            message,
        };
        let year = rec[0]
            .trim()
            .parse::<i32>()
            .map_err(|_| malformed(format!("invalid year `{}`", &rec[0])))?;
        entries.push((year, PersonId::new(rec[1].trim()), line));
    }
    let mut cohorts = Cohorts::default();
    for (year, id, line) in entries {
        cohorts
            .push(universe, year, id)
            .map_err(|e| DatasetError::Malformed {
                file: "cohorts",
                row: line,
                message: e.to_string(),
            })?;
    }
    Ok(cohorts)
}

pub fn load_cohorts(path: &Path, universe: &GenealogyGraph) -> Result<Cohorts, DatasetError> {
    read_cohorts(File::open(path).map_err(io_err(path))?, universe)
}

pub fn write_cohorts<W: Write>(cohorts: &Cohorts, out: W) -> Result<(), DatasetError> {
    let csv_err = |source| DatasetError::Csv {
        file: "cohorts",
        source,
    };
    let mut w = writer(out);
    w.write_record(COHORTS_HEADER).map_err(csv_err)?;
    for (year, ids) in cohorts.iter() {
        for id in ids {
            w.write_record([year.to_string().as_str(), id.as_str()])
                .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| csv_err(e.into()))
}

/// Reads overlay edits. `add_person` rows carry the new id in the
/// `advisor_id` column and leave the others empty.
pub fn read_overlay<R: Read>(input: R) -> Result<Vec<OverlayEdit>, DatasetError> {
    let mut edits = Vec::new();
    for (line, rec) in rows(input, "overlay", &OVERLAY_HEADER)? {
        let malformed = |message: String| DatasetError::Malformed {
            file: "overlay",
            row: line,
            message,
        };
        let advisor = rec[1].trim();
        let student = rec[2].trim();
        let kind = match opt(&rec, 3) {
            None => EdgeKind::Phd,
            Some(k) => k.parse().map_err(malformed)?,
        };
        let edge = || {
            AdvisingEdge::new(advisor, student)
                .with_kind(kind)
                .with_source("overlay")
        };
        let edit = match rec[0].trim() {
            "add_edge" => OverlayEdit::AddEdge(edge()),
            "remove_edge" => OverlayEdit::RemoveEdge(edge().key()),
            "add_person" => {
                if advisor.is_empty() {
                    return Err(malformed(
                        "add_person needs an id in the advisor_id column".into(),
                    ));
                }
                OverlayEdit::AddPerson(Person::new(advisor))
            }
            other => return Err(malformed(format!("unknown overlay action `{other}`"))),
        };
        if matches!(edit, OverlayEdit::AddEdge(_) | OverlayEdit::RemoveEdge(_))
            && (advisor.is_empty() || student.is_empty())
        {
            return Err(malformed(
                "edge edits need advisor_id and student_id".into(),
            ));
        }
        edits.push(edit);
    }
    Ok(edits)
}

pub fn load_overlay(path: &Path) -> Result<Vec<OverlayEdit>, DatasetError> {
    read_overlay(File::open(path).map_err(io_err(path))?)
}
