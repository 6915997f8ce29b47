//! Institution credit.
//!
//! A laureate's degree institution earns one point. Ancestors pass credit to
//! their own degree institutions, each counted once at its nearest generation
//! `g`: the advisor's institution gets half a point and deeper generations
//! less, according to the [`WeightScheme`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::construct::{NetworkSeries, Snapshot};
use crate::metrics;

/// Name used for institutions outside the leaders in a [`ShareSeries`].
pub const REST: &str = "rest";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WeightScheme {
    /// Each ancestor at generation `g` earns `2^-g`.
    #[default]
    Halving,
    /// Generation `g` shares `2^-g` among its ancestors in proportion to their
    /// arithmetic centrality.
    CentralityWeighted,
}

impl WeightScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightScheme::Halving => "halving",
            WeightScheme::CentralityWeighted => "centrality",
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "halving" => Ok(WeightScheme::Halving),
            "centrality" | "centrality_weighted" => Ok(WeightScheme::CentralityWeighted),
            other => Err(format!(
                "unknown weight scheme `{other}` (halving|centrality)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstitutionLedger {
    pub year: i32,
    pub points: BTreeMap<String, f64>,
    pub shares: BTreeMap<String, f64>,
    /// Persons skipped for lack of a degree institution.
    pub warnings: Vec<String>,
}

impl InstitutionLedger {
    pub fn total(&self) -> f64 {
        self.points.values().sum()
    }
}

pub fn institution_points(snapshot: &Snapshot, scheme: WeightScheme) -> InstitutionLedger {
    let g = &snapshot.graph;
    let arithmetic: Vec<f64> = match scheme {
        WeightScheme::Halving => Vec::new(),
        WeightScheme::CentralityWeighted => metrics::centralities(g)
            .iter()
            .map(|r| r.arithmetic)
            .collect(),
    };
    let mut points: BTreeMap<String, f64> = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut credit = |idx: usize, amount: f64, warnings: &mut Vec<String>| {
        let p = g.person_at(idx);
        match &p.degree_institution {
            Some(inst) => *points.entry(inst.clone()).or_insert(0.0) += amount,
            None => warnings.push(format!(
                "{}: no degree institution, {amount} points skipped",
                p.id
            )),
        }
    };

    for l in (0..g.node_count()).filter(|&i| g.person_at(i).laureate) {
        credit(l, 1.0, &mut warnings);
        let dist = g.ancestor_distances(l, None);
        let mut generations: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (a, d) in dist.iter().enumerate() {
            if let Some(d) = *d {
                if d >= 1 {
                    generations.entry(d).or_default().push(a);
                }
            }
        }
        for (gen, ancestors) in generations {
            let weight = 0.5f64.powi(gen as i32);
            match scheme {
                WeightScheme::Halving => {
                    for a in ancestors {
                        credit(a, weight, &mut warnings);
                    }
                }
                WeightScheme::CentralityWeighted => {
                    let sum: f64 = ancestors.iter().map(|&a| arithmetic[a]).sum();
                    for &a in &ancestors {
                        let part = if sum > 0.0 {
                            arithmetic[a] / sum
                        } else {
                            1.0 / ancestors.len() as f64
                        };
                        credit(a, weight * part, &mut warnings);
                    }
                }
            }
        }
    }

    let total: f64 = points.values().sum();
    let shares = if total > 0.0 {
        points.iter().map(|(k, v)| (k.clone(), v / total)).collect()
    } else {
        BTreeMap::new()
    };
    InstitutionLedger {
        year: snapshot.year,
        points,
        shares,
        warnings,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShareRow {
    pub year: i32,
    pub institution: String,
    pub points: f64,
    pub share: f64,
}

/// Yearly shares of the leading institutions, the rest pooled under [`REST`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShareSeries {
    /// Leaders by final-year points, best first.
    pub leaders: Vec<String>,
    pub rows: Vec<ShareRow>,
    pub ledgers: Vec<InstitutionLedger>,
}

/// Leaders are the `top_k` institutions with most points in the final
/// snapshot (ties by name). A `rest` row is emitted each year when there are
/// more institutions than leaders.
pub fn share_series(series: &NetworkSeries, scheme: WeightScheme, top_k: usize) -> ShareSeries {
    let top_k = top_k.max(1);
    let ledgers: Vec<InstitutionLedger> = series
        .iter()
        .map(|s| institution_points(s, scheme))
        .collect();
    let Some(last) = ledgers.last() else {
        return ShareSeries {
            leaders: Vec::new(),
            rows: Vec::new(),
            ledgers,
        };
    };
    let mut ranked: Vec<(&String, f64)> = last.points.iter().map(|(k, &v)| (k, v)).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let leaders: Vec<String> = ranked
        .iter()
        .take(top_k)
        .map(|(k, _)| (*k).clone())
        .collect();
    let pooled = ranked.len() > leaders.len();

    let mut rows = Vec::new();
    for ledger in &ledgers {
        let total = ledger.total();
        let share = |p: f64| if total > 0.0 { p / total } else { 0.0 };
        let mut rest = 0.0;
        for (inst, &p) in &ledger.points {
            if !leaders.contains(inst) {
                rest += p;
            }
        }
        for inst in &leaders {
            let p = ledger.points.get(inst).copied().unwrap_or(0.0);
            rows.push(ShareRow {
                year: ledger.year,
                institution: inst.clone(),
                points: p,
                share: share(p),
            });
        }
        if pooled {
            rows.push(ShareRow {
                year: ledger.year,
                institution: REST.to_owned(),
                points: rest,
                share: share(rest),
            });
        }
    }
    ShareSeries {
        leaders,
        rows,
        ledgers,
    }
}
