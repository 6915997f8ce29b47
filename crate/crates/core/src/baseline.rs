//! Shortest-path histograms among a node set, and stratified Monte Carlo
//! baselines for them.
//!
//! A baseline draws, for every reference node, a random non-reference node with
//! the same degree year (the stratum), computes the same histogram on the
//! sample, and repeats. Per path length the band spans the empirical quantiles
//! of the trial counts.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::model::{GenealogyGraph, PersonId};

/// Half-width of the fallback stratum, in years.
pub const BUCKET_HALF_WIDTH: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum BaselineError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("at least 2 trials are needed, got {0}")]
    TooFewTrials(usize),
    #[error("confidence level must lie in (0, 1), got {0}")]
    BadLevel(f64),
}

/// How the two directed distances of an unordered pair combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PairAggregation {
    #[default]
    Minimum,
    /// Mean of both directions when both exist, otherwise the one that does.
    Average,
}

impl FromStr for PairAggregation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minimum" | "min" => Ok(PairAggregation::Minimum),
            "average" | "avg" => Ok(PairAggregation::Average),
            other => Err(format!(
                "unknown pair aggregation `{other}` (minimum|average)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathHistogram {
    pub variant: PairAggregation,
    /// Path length → number of pairs.
    pub counts: BTreeMap<u32, usize>,
    pub unreachable: usize,
}

impl PathHistogram {
    pub fn pairs(&self) -> usize {
        self.counts.values().sum::<usize>() + self.unreachable
    }

    pub fn count(&self, length: u32) -> usize {
        self.counts.get(&length).copied().unwrap_or(0)
    }

    pub fn max_length(&self) -> u32 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }
}

/// Histogram over unordered pairs of `nodes` of the combined directed
/// shortest-path length.
pub fn pairwise_paths(
    graph: &GenealogyGraph,
    nodes: &[PersonId],
    variant: PairAggregation,
) -> Result<PathHistogram, BaselineError> {
    let idx = nodes
        .iter()
        .map(|id| {
            graph
                .index_of(id.as_str())
                .ok_or_else(|| BaselineError::UnknownNode(id.to_string()))
        })
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(paths_among(
        graph,
        &idx.into_iter().collect::<Vec<_>>(),
        variant,
    ))
}

// Pairs are indexed both ways, so plain index loops read best here.
#[allow(clippy::needless_range_loop)]
fn paths_among(graph: &GenealogyGraph, nodes: &[usize], variant: PairAggregation) -> PathHistogram {
    let rows: Vec<Vec<Option<u32>>> = nodes
        .iter()
        .map(|&i| {
            let dist = graph.descendant_distances(i);
            nodes.iter().map(|&j| dist[j]).collect()
        })
        .collect();
    let mut counts = BTreeMap::new();
    let mut unreachable = 0;
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            let length = match (rows[a][b], rows[b][a]) {
                (Some(x), Some(y)) => Some(match variant {
                    PairAggregation::Minimum => x.min(y),
                    // Only possible with a cycle, which a GenealogyGraph cannot
                    // hold; rounds half generations up.
                    PairAggregation::Average => (x + y).div_ceil(2),
                }),
                (Some(x), None) | (None, Some(x)) => Some(x),
                (None, None) => None,
            };
            match length {
                Some(l) => *counts.entry(l).or_insert(0) += 1,
                None => unreachable += 1,
            }
        }
    }
    PathHistogram {
        variant,
        counts,
        unreachable,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum StrataKey {
    /// Same degree year.
    #[default]
    DegreeYear,
    /// Same degree year, widening to ±5 years when that stratum is exhausted.
    DegreeYearBucket,
}

impl fmt::Display for StrataKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrataKey::DegreeYear => "exact",
            StrataKey::DegreeYearBucket => "bucket",
        })
    }
}

impl FromStr for StrataKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" | "degree_year" => Ok(StrataKey::DegreeYear),
            "bucket" | "degree_year_bucket" => Ok(StrataKey::DegreeYearBucket),
            other => Err(format!("unknown strata key `{other}` (exact|bucket)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedSample {
    pub nodes: Vec<PersonId>,
    /// Reference nodes for which no stratum member was available.
    pub gaps: Vec<PersonId>,
}

/// Non-reference nodes grouped by degree year.
struct Strata {
    by_year: BTreeMap<i32, Vec<usize>>,
    reference: Vec<(usize, Option<i32>)>,
}

impl Strata {
    fn new(graph: &GenealogyGraph, reference: &BTreeSet<usize>) -> Self {
        let mut by_year: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for i in 0..graph.node_count() {
            if reference.contains(&i) {
                continue;
            }
            if let Some(y) = graph.person_at(i).degree_year {
                by_year.entry(y).or_default().push(i);
            }
        }
        let reference = reference
            .iter()
            .map(|&r| (r, graph.person_at(r).degree_year))
            .collect();
        Strata { by_year, reference }
    }

    fn available(&self, years: impl Iterator<Item = i32>, used: &HashMap<usize, ()>) -> Vec<usize> {
        years
            .filter_map(|y| self.by_year.get(&y))
            .flatten()
            .copied()
            .filter(|i| !used.contains_key(i))
            .collect()
    }

    /// One draw per reference node, without replacement.
    fn draw(&self, key: StrataKey, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
        let mut used: HashMap<usize, ()> = HashMap::new();
        let mut sample = Vec::with_capacity(self.reference.len());
        let mut gaps = Vec::new();
        for &(r, year) in &self.reference {
            let Some(y) = year else {
                gaps.push(r);
                continue;
            };
            let mut pool = self.available(std::iter::once(y), &used);
            if pool.is_empty() && key == StrataKey::DegreeYearBucket {
                pool = self.available(y - BUCKET_HALF_WIDTH..=y + BUCKET_HALF_WIDTH, &used);
            }
            match pool.choose(rng) {
                Some(&pick) => {
                    used.insert(pick, ());
                    sample.push(pick);
                }
                None => gaps.push(r),
            }
        }
        (sample, gaps)
    }
}

fn reference_indices(
    graph: &GenealogyGraph,
    reference: &[PersonId],
) -> Result<BTreeSet<usize>, BaselineError> {
    reference
        .iter()
        .map(|id| {
            graph
                .index_of(id.as_str())
                .ok_or_else(|| BaselineError::UnknownNode(id.to_string()))
        })
        .collect()
}

/// Draws one stratified sample. The same seed always yields the same sample.
pub fn stratified_sample(
    graph: &GenealogyGraph,
    reference: &[PersonId],
    key: StrataKey,
    seed: u64,
) -> Result<StratifiedSample, BaselineError> {
    let strata = Strata::new(graph, &reference_indices(graph, reference)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (sample, gaps) = strata.draw(key, &mut rng);
    let id = |i: usize| graph.person_at(i).id.clone();
    Ok(StratifiedSample {
        nodes: sample.into_iter().map(id).collect(),
        gaps: gaps.into_iter().map(id).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandRow {
    pub length: u32,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceBand {
    pub level: f64,
    pub trials: usize,
    /// One row per length from 1 to the longest path seen in the reference or any trial.
    pub rows: Vec<BandRow>,
    pub reference: PathHistogram,
    /// Histogram of every trial, in trial order.
    pub samples: Vec<PathHistogram>,
}

impl ConfidenceBand {
    pub fn contains_reference(&self, length: u32) -> bool {
        let c = self.reference.count(length) as f64;
        self.rows
            .iter()
            .find(|r| r.length == length)
            .is_some_and(|r| r.lower <= c && c <= r.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineConfig {
    pub trials: usize,
    pub level: f64,
    pub seed: u64,
    pub strata: StrataKey,
    pub variant: PairAggregation,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            trials: 50,
            level: 0.90,
            seed: 0,
            strata: StrataKey::DegreeYear,
            variant: PairAggregation::Minimum,
        }
    }
}

/// Sample quantile by piecewise-linear interpolation between order statistics
/// placed at `(k - 0.5) / n`; values outside the first and last positions
/// clamp to the extremes. `sorted` must be ascending and non-empty.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let h = n as f64 * p + 0.5;
    if h <= 1.0 {
        return sorted[0];
    }
    if h >= n as f64 {
        return sorted[n - 1];
    }
    let lo = h.floor();
    let frac = h - lo;
    let k = lo as usize - 1;
    sorted[k] + frac * (sorted[k + 1] - sorted[k])
}

/// Runs `trials` stratified samples. Trial `t` draws from the ChaCha stream `t`
/// of the master seed, so trials run in parallel and stay reproducible.
pub fn baseline_band(
    graph: &GenealogyGraph,
    reference: &[PersonId],
    config: &BaselineConfig,
) -> Result<ConfidenceBand, BaselineError> {
    if config.trials < 2 {
        return Err(BaselineError::TooFewTrials(config.trials));
    }
    if !(config.level > 0.0 && config.level < 1.0) {
        return Err(BaselineError::BadLevel(config.level));
    }
    let ref_idx = reference_indices(graph, reference)?;
    let ref_list: Vec<usize> = ref_idx.iter().copied().collect();
    let reference_hist = paths_among(graph, &ref_list, config.variant);
    let strata = Strata::new(graph, &ref_idx);

    let samples: Vec<PathHistogram> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(t as u64);
            let (mut sample, _) = strata.draw(config.strata, &mut rng);
            sample.sort_unstable();
            paths_among(graph, &sample, config.variant)
        })
        .collect();

    let max_len = samples
        .iter()
        .map(PathHistogram::max_length)
        .chain(std::iter::once(reference_hist.max_length()))
        .max()
        .unwrap_or(0);
    let tail = (1.0 - config.level) / 2.0;
    let rows = (1..=max_len)
        .map(|length| {
            let mut counts: Vec<f64> = samples.iter().map(|h| h.count(length) as f64).collect();
            counts.sort_by(f64::total_cmp);
            BandRow {
                length,
                lower: quantile(&counts, tail),
                upper: quantile(&counts, 1.0 - tail),
            }
        })
        .collect();
    Ok(ConfidenceBand {
        level: config.level,
        trials: config.trials,
        rows,
        reference: reference_hist,
        samples,
    })
}
