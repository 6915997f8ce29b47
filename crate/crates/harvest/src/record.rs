//! The plain-text record format shared by remote sources and the cache.
//!
//! ```text
//! genealogy-record 1
//! source: math_genealogy
//! id: 4711
//! name: Jane Roe
//! gender: female
//! laureate: 0
//! prize_year:
//! candidate: 0
//! degree_year: 1931
//! degree_institution: Harvard University
//! advisor: 815 phd
//! advisor: 816 habilitation
//! fetched_at: 1700000000
//! ```
//!
//! The first line is fixed. Each further line is `key: value`; `advisor` may
//! repeat and every other key appears at most once. Unknown keys are errors.
//! Only `source` and `id` are required.

use std::fmt;
use std::str::FromStr;

use genealogy::{EdgeKind, Gender};

pub const MAGIC: &str = "genealogy-record 1";

/// A remote genealogy source, in increasing order of precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SourceName {
    RepecGenealogy,
    MathGenealogy,
    AcademicTree,
    /// Hand-entered records; they override every remote source.
    Manual,
}

impl SourceName {
    pub const ALL: [SourceName; 4] = [
        SourceName::AcademicTree,
        SourceName::MathGenealogy,
        SourceName::RepecGenealogy,
        SourceName::Manual,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SourceName::AcademicTree => "academic_tree",
            SourceName::MathGenealogy => "math_genealogy",
            SourceName::RepecGenealogy => "repec_genealogy",
            SourceName::Manual => "manual",
        }
    }

    /// Prefix of merged ids from this source; manual ids are used verbatim.
    pub fn id_prefix(self) -> &'static str {
        match self {
            SourceName::AcademicTree => "at:",
            SourceName::MathGenealogy => "mgp:",
            SourceName::RepecGenealogy => "repec:",
            SourceName::Manual => "",
        }
    }

    pub fn qualify(self, id: &str) -> String {
        format!("{}{id}", self.id_prefix())
    }
}

impl fmt::Display for SourceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SourceName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SourceName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| {
                format!(
                    "unknown source `{s}` (academic_tree|math_genealogy|repec_genealogy|manual)"
                )
            })
    }
}

/// One person as a source describes it. Ids are local to the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersonRecord {
    pub source: SourceName,
    pub id: String,
    pub name: Option<String>,
    pub gender: Option<Gender>,
    pub laureate: Option<bool>,
    pub prize_year: Option<i32>,
    pub candidate: Option<bool>,
    pub degree_year: Option<i32>,
    pub degree_institution: Option<String>,
    pub advisors: Vec<(String, EdgeKind)>,
    /// Unix seconds.
    pub fetched_at: Option<u64>,
}

impl PersonRecord {
    pub fn new(source: SourceName, id: impl Into<String>) -> Self {
        PersonRecord {
            source,
            id: id.into(),
            name: None,
            gender: None,
            laureate: None,
            prize_year: None,
            candidate: None,
            degree_year: None,
            degree_institution: None,
            advisors: Vec::new(),
            fetched_at: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct RecordError {
    pub line: usize,
    pub message: String,
}

fn flag(v: &str) -> Result<bool, String> {
    match v {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(format!("expected 0 or 1, got `{other}`")),
    }
}

fn number<T: FromStr>(v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("not a number: `{v}`"))
}

fn set<T>(slot: &mut Option<T>, key: &str, value: Option<T>) -> Result<(), String> {
    if slot.is_some() {
        return Err(format!("`{key}` given twice"));
    }
    *slot = value;
    Ok(())
}

/// Parses a record. Empty values mean "not stated".
pub fn parse_record(text: &str) -> Result<PersonRecord, RecordError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim_end() == MAGIC => {}
        _ => {
            return Err(RecordError {
                line: 1,
                message: format!("expected `{MAGIC}`"),
            })
        }
    }
    let mut source = None;
    let mut id = None;
    let mut rec = PersonRecord::new(SourceName::Manual, "");
    let mut seen = std::collections::BTreeSet::new();
    for (n, line) in lines {
        let err = |message: String| RecordError {
            line: n + 1,
            message,
        };
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err("expected `key: value`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        if key != "advisor" && !seen.insert(key.to_owned()) {
            return Err(err(format!("`{key}` given twice")));
        }
        let some = |v: &str| (!v.is_empty()).then(|| v.to_owned());
        let parsed: Result<(), String> = (|| {
            match key {
                "source" => source = Some(value.parse::<SourceName>()?),
                "id" => id = some(value),
                "name" => set(&mut rec.name, key, some(value))?,
                "gender" => set(
                    &mut rec.gender,
                    key,
                    some(value).map(|v| v.parse()).transpose()?,
                )?,
                "laureate" => set(
                    &mut rec.laureate,
                    key,
                    some(value).map(|v| flag(&v)).transpose()?,
                )?,
                "prize_year" => set(
                    &mut rec.prize_year,
                    key,
                    some(value).map(|v| number(&v)).transpose()?,
                )?,
                "candidate" => set(
                    &mut rec.candidate,
                    key,
                    some(value).map(|v| flag(&v)).transpose()?,
                )?,
                "degree_year" => set(
                    &mut rec.degree_year,
                    key,
                    some(value).map(|v| number(&v)).transpose()?,
                )?,
                "degree_institution" => set(&mut rec.degree_institution, key, some(value))?,
                "fetched_at" => set(
                    &mut rec.fetched_at,
                    key,
                    some(value).map(|v| number(&v)).transpose()?,
                )?,
                "advisor" => {
                    let mut parts = value.split_whitespace();
                    let who = parts.next().ok_or("advisor id missing")?;
                    let kind = parts.next().map_or(Ok(EdgeKind::Phd), str::parse)?;
                    if parts.next().is_some() {
                        return Err("expected `advisor: <id> [kind]`".into());
                    }
                    rec.advisors.push((who.to_owned(), kind));
                }
                other => return Err(format!("unknown key `{other}`")),
            }
            Ok(())
        })();
        parsed.map_err(err)?;
    }
    rec.source = source.ok_or(RecordError {
        line: 0,
        message: "`source` missing".into(),
    })?;
    rec.id = id.ok_or(RecordError {
        line: 0,
        message: "`id` missing".into(),
    })?;
    Ok(rec)
}

/// Canonical text of a record: every key in a fixed order, `advisor` lines in
/// the order given.
pub fn format_record(rec: &PersonRecord) -> String {
    fn opt<T: ToString>(v: &Option<T>) -> String {
        v.as_ref().map(ToString::to_string).unwrap_or_default()
    }
    let flag = |v: Option<bool>| v.map(|b| if b { "1" } else { "0" }).unwrap_or("");
    let mut out = format!("{MAGIC}\n");
    let mut line = |k: &str, v: &str| {
        if v.is_empty() {
            out.push_str(&format!("{k}:\n"));
        } else {
            out.push_str(&format!("{k}: {v}\n"));
        }
    };
    line("source", rec.source.as_str());
    line("id", &rec.id);
    line("name", &opt(&rec.name));
    line("gender", rec.gender.map(Gender::as_str).unwrap_or(""));
    line("laureate", flag(rec.laureate));
    line("prize_year", &opt(&rec.prize_year));
    line("candidate", flag(rec.candidate));
    line("degree_year", &opt(&rec.degree_year));
    line("degree_institution", &opt(&rec.degree_institution));
    for (who, kind) in &rec.advisors {
        line("advisor", &format!("{who} {}", kind.as_str()));
    }
    line("fetched_at", &opt(&rec.fetched_at));
    out
}
