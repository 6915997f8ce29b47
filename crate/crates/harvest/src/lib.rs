//! Fetching genealogy records from remote sources.
//!
//! Every fetch goes through a local cache first, so a harvested dataset can be
//! rebuilt offline. Requests to one source are serialized and spaced by the
//! configured interval. [`merge_sources`] folds records from several sources
//! into a validated [`genealogy::GenealogyGraph`].

mod client;
mod merge;
mod record;

pub use client::{
    Ancestry, Gap, HarvestError, Harvester, HttpTransport, SourceConfig, Transport,
    DEFAULT_INTERVAL,
};
pub use merge::{merge_sources, Aliases, MergeError, Merged};
pub use record::{format_record, parse_record, PersonRecord, RecordError, SourceName, MAGIC};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/harvest.md")]
mod book {}
