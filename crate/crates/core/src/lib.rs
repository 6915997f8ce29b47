//! Academic genealogy networks of prize laureates.
//!
//! A [`GenealogyGraph`] holds advisor → student edges between scholars. From a
//! universe graph and yearly prize cohorts, [`build_series`] grows one
//! [`Snapshot`] per cohort year. The remaining modules measure those
//! snapshots: laureate centrality and ranks ([`metrics`]), edit distance and
//! components between years ([`dynamics`]), institution credit
//! ([`affiliation`]) and a stratified random baseline for path lengths
//! ([`baseline`]).
//!
//! ```
//! use genealogy::{build_series, fixtures, metrics, Measure};
//!
//! let universe = fixtures::f1_graph();
//! let series = build_series(&universe, &fixtures::f1_cohorts()).unwrap();
//! let last = series.last().unwrap();
//! assert_eq!(last.graph.node_count(), 4);
//!
//! let table = metrics::rank_table(&last.graph, Measure::Arithmetic);
//! assert_eq!(table.rows[0].node.as_str(), "P");
//! ```

pub mod affiliation;
pub mod baseline;
pub mod construct;
pub mod dataset;
pub mod dynamics;
pub mod export;
pub mod fixtures;
pub mod metrics;
pub mod model;
pub mod validate;

pub use affiliation::{
    institution_points, share_series, InstitutionLedger, ShareSeries, WeightScheme,
};
pub use baseline::{
    baseline_band, pairwise_paths, BaselineConfig, ConfidenceBand, PairAggregation, StrataKey,
};
pub use construct::{
    build_series, build_year, Cohorts, ConstructError, NetworkSeries, OverlayEdit, Snapshot,
};
pub use dataset::{load_cohorts, load_dataset, read_dataset, DatasetError};
pub use dynamics::{edit_delta, edit_series, EditDelta};
pub use export::{export_dot, export_graphml};
pub use metrics::{Measure, RankTable, TargetMode};
pub use model::{
    AdvisingEdge, Dataset, EdgeKey, EdgeKind, Gender, GenealogyGraph, GraphError, Person, PersonId,
};
pub use validate::{validate, ValidationReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/data-model.md")]
    mod data_model {}
    #[doc = include_str!("../../../book/src/construction.md")]
    mod construction {}
    #[doc = include_str!("../../../book/src/centrality.md")]
    mod centrality {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/institutions.md")]
    mod institutions {}
    #[doc = include_str!("../../../book/src/baseline.md")]
    mod baseline {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
