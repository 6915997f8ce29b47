//! Merging records from several sources into one dataset.
//!
//! Ids are qualified by source (`at:`, `mgp:`, `repec:`; manual ids verbatim)
//! and then mapped through an alias table, so the same person known to two
//! sources becomes one node. Each attribute comes from the highest-precedence
//! source that states it.

use std::collections::{BTreeMap, BTreeSet};

use genealogy::{AdvisingEdge, Dataset, EdgeKind, GenealogyGraph, Person, PersonId};

use crate::record::{PersonRecord, SourceName};

#[derive(Debug, thiserror::Error)]
pub enum MergeError {
    #[error("`{id}` is named `{first}` by {first_source} and `{second}` by {second_source}; add a manual record or alias")]
    NameConflict {
        id: String,
        first: String,
        first_source: SourceName,
        second: String,
        second_source: SourceName,
    },
    #[error("{source_name} lists `{id}` twice")]
    DuplicateRecord { source_name: SourceName, id: String },
    #[error("merged records do not form a valid genealogy:\n{0}")]
    Invalid(#[from] genealogy::GraphError),
}

#[derive(Debug)]
pub struct Merged {
    pub graph: GenealogyGraph,
    pub warnings: Vec<String>,
}

/// Qualified id → canonical id.
pub type Aliases = BTreeMap<String, String>;

fn canonical(aliases: &Aliases, source: SourceName, id: &str) -> String {
    let q = source.qualify(id);
    aliases.get(&q).cloned().unwrap_or(q)
}

/// Takes the first stated value (records are in descending precedence) and
/// warns about lower-precedence values that differ.
fn pick<T: PartialEq + std::fmt::Debug + Clone>(
    id: &str,
    field: &str,
    recs: &[&PersonRecord],
    get: impl Fn(&PersonRecord) -> Option<T>,
    warnings: &mut Vec<String>,
) -> Option<T> {
    let mut chosen: Option<(T, SourceName)> = None;
    for r in recs {
        let Some(v) = get(r) else { continue };
        match &chosen {
            None => chosen = Some((v, r.source)),
            Some((c, s)) if *c != v => warnings.push(format!(
                "{id}: {field} {c:?} from {s} kept over {v:?} from {}",
                r.source
            )),
            Some(_) => {}
        }
    }
    chosen.map(|(v, _)| v)
}

pub fn merge_sources<'a>(
    records: impl IntoIterator<Item = &'a PersonRecord>,
    aliases: &Aliases,
) -> Result<Merged, MergeError> {
    let mut by_person: BTreeMap<String, Vec<&PersonRecord>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for r in records {
        if !seen.insert((r.source, r.id.clone())) {
            return Err(MergeError::DuplicateRecord {
                source_name: r.source,
                id: r.id.clone(),
            });
        }
        by_person
            .entry(canonical(aliases, r.source, &r.id))
            .or_default()
            .push(r);
    }
    let mut warnings = Vec::new();
    let mut persons = Vec::new();
    for (id, recs) in &mut by_person {
        recs.sort_by_key(|r| std::cmp::Reverse(r.source));
        let named: Vec<&&PersonRecord> = recs.iter().filter(|r| r.name.is_some()).collect();
        if named
            .first()
            .is_some_and(|r| r.source != SourceName::Manual)
        {
            let first = named[0];
            if let Some(other) = named.iter().find(|r| r.name != first.name) {
                return Err(MergeError::NameConflict {
                    id: id.clone(),
                    first: first.name.clone().unwrap_or_default(),
                    first_source: first.source,
                    second: other.name.clone().unwrap_or_default(),
                    second_source: other.source,
                });
            }
        }
        let w = &mut warnings;
        let name = pick(id, "name", recs, |r| r.name.clone(), w);
        let mut p = Person::new(id.as_str());
        p.name = name.unwrap_or_default();
        p.gender = pick(id, "gender", recs, |r| r.gender, w).unwrap_or_default();
        p.laureate = pick(id, "laureate", recs, |r| r.laureate, w).unwrap_or(false);
        p.prize_year = pick(id, "prize_year", recs, |r| r.prize_year, w);
        p.candidate = pick(id, "candidate", recs, |r| r.candidate, w).unwrap_or(false);
        p.degree_year = pick(id, "degree_year", recs, |r| r.degree_year, w);
        p.degree_institution = pick(
            id,
            "degree_institution",
            recs,
            |r| r.degree_institution.clone(),
            w,
        );
        let mut sources: Vec<String> = recs.iter().map(|r| r.source.as_str().to_owned()).collect();
        sources.sort();
        p.sources = sources;
        persons.push(p);
    }

    let mut edges: BTreeMap<(String, String, EdgeKind), BTreeSet<&'static str>> = BTreeMap::new();
    for (student, recs) in &by_person {
        for r in recs {
            for (advisor, kind) in &r.advisors {
                let advisor = canonical(aliases, r.source, advisor);
                if !by_person.contains_key(&advisor) {
                    warnings.push(format!(
                        "{student}: advisor {advisor} has no record, edge dropped"
                    ));
                    continue;
                }
                edges
                    .entry((advisor, student.clone(), *kind))
                    .or_default()
                    .insert(r.source.as_str());
            }
        }
    }
    let edges = edges
        .into_iter()
        .map(|((a, s, kind), src)| {
            AdvisingEdge::new(PersonId::from(a), PersonId::from(s))
                .with_kind(kind)
                .with_source(src.into_iter().collect::<Vec<_>>().join(";"))
        })
        .collect();
    let graph = GenealogyGraph::from_dataset(Dataset::new(persons, edges))?;
    Ok(Merged { graph, warnings })
}
