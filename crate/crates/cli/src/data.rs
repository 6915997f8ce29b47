//! Locating and loading the input dataset.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use genealogy::construct::{apply_overlay, build_series, Cohorts, NetworkSeries, Snapshot};
use genealogy::dataset::{load_cohorts, load_overlay, load_raw, read_cohorts};
use genealogy::{fixtures, validate, Dataset, GenealogyGraph};

/// Name that selects the bundled four-person fixture instead of a directory.
pub const BUNDLED: &str = "F1";

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Dataset directory holding nodes.csv, edges.csv and optionally
    /// cohorts.csv, or `F1` for the bundled fixture.
    #[arg(long, env = "GENEALOGY_DATASET", default_value = BUNDLED)]
    pub dataset: String,
    /// Nodes CSV, overriding the dataset directory.
    #[arg(long)]
    pub nodes: Option<PathBuf>,
    /// Edges CSV, overriding the dataset directory.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Cohorts CSV (`year,laureate_id`). Without one, cohorts follow the prize years.
    #[arg(long)]
    pub cohorts: Option<PathBuf>,
    /// Overlay CSV of edits applied before anything is built.
    #[arg(long)]
    pub overlay: Option<PathBuf>,
}

pub struct Loaded {
    pub universe: GenealogyGraph,
    pub cohorts: Cohorts,
}

impl DataArgs {
    fn dir(&self) -> Option<&Path> {
        (self.dataset != BUNDLED).then(|| Path::new(&self.dataset))
    }

    fn file(&self, explicit: &Option<PathBuf>, name: &str) -> Option<PathBuf> {
        explicit
            .clone()
            .or_else(|| self.dir().map(|d| d.join(name)))
    }

    /// The raw rows, before validation.
    pub fn raw(&self) -> Result<Dataset> {
        match (
            self.file(&self.nodes, "nodes.csv"),
            self.file(&self.edges, "edges.csv"),
        ) {
            (Some(n), Some(e)) => Ok(load_raw(&n, &e)?),
            (None, None) => Ok(fixtures::f1_dataset()),
            _ => {
                bail!("--nodes and --edges must be given together when the bundled dataset is used")
            }
        }
    }

    pub fn load(&self) -> Result<Loaded> {
        let raw = self.raw()?;
        let report = validate(&raw);
        for w in &report.warnings {
            eprintln!("warning {w}");
        }
        if !report.is_admissible() {
            bail!("dataset is invalid:\n{report}");
        }
        let mut universe = GenealogyGraph::from_dataset(raw)?;
        if let Some(path) = &self.overlay {
            let edits = load_overlay(path)?;
            universe = apply_overlay(&universe, &edits)
                .with_context(|| format!("applying {}", path.display()))?;
        }
        let cohorts = match self.file(&self.cohorts, "cohorts.csv") {
            Some(p) if p.exists() || self.cohorts.is_some() => load_cohorts(&p, &universe)?,
            Some(_) => Cohorts::from_universe(&universe),
            None => read_cohorts(fixtures::F1_COHORTS.as_bytes(), &universe)?,
        };
        Ok(Loaded { universe, cohorts })
    }
}

impl Loaded {
    pub fn series(&self) -> Result<NetworkSeries> {
        Ok(build_series(&self.universe, &self.cohorts)?)
    }
}

/// The snapshot in force at `year`, or the last one.
pub fn snapshot_at(series: &NetworkSeries, year: Option<i32>) -> Result<&Snapshot> {
    match year {
        None => series.last().context("no snapshots"),
        Some(y) => series.as_of(y).with_context(|| {
            format!(
                "no snapshot at or before {y}; first cohort year is {}",
                series.snapshots[0].year
            )
        }),
    }
}
