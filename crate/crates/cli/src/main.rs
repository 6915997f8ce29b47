//! `genealogy`: build, analyze and export laureate genealogy networks.

mod config;
mod data;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use genealogy::affiliation::{share_series, WeightScheme};
use genealogy::baseline::{
    baseline_band, pairwise_paths, BaselineConfig, PairAggregation, StrataKey,
};
use genealogy::construct::attach_candidates;
use genealogy::dataset::{save_dataset, write_edges, write_nodes};
use genealogy::dynamics::{components, descendant_subgraph, edit_series};
use genealogy::metrics::{self, rank_history, rank_scores, rank_table, Measure, TargetMode};
use genealogy::{export_dot, export_graphml, validate, GenealogyGraph, PersonId};

use crate::data::{snapshot_at, DataArgs};

#[derive(Parser, Debug)]
#[command(
    name = "genealogy",
    version,
    about = "Laureate genealogy networks: build, measure, export"
)]
struct Cli {
    /// Flat `key = value` file supplying defaults for any long option.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (or directory, for multi-file outputs). Standard output if omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a dataset; exits 1 when it has errors.
    Validate(DataArgs),
    /// Build the yearly snapshots and summarize their sizes.
    Build(BuildArgs),
    /// Rank nodes by laureate centrality.
    Centrality(CentralityArgs),
    /// Edit distance and component count between consecutive years.
    Timeline(DataArgs),
    /// Institution points and shares per year.
    Universities(UniversitiesArgs),
    /// Export a snapshot or a descendant subgraph as DOT, GraphML or CSV.
    Subgraph(SubgraphArgs),
    /// Candidate incloseness, or rank changes if every candidate won.
    Candidates(CandidatesArgs),
    /// Path-length histogram among laureates against a stratified random baseline.
    Baseline(BaselineArgs),
    /// Fetch ancestry records from a remote source into a dataset.
    #[cfg(feature = "harvest")]
    Fetch(FetchArgs),
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Also write the snapshot of this year as nodes.csv and edges.csv into --emit-dir.
    #[arg(long, requires = "emit_dir")]
    year: Option<i32>,
    #[arg(long, requires = "year")]
    emit_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CentralityArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Snapshot year; defaults to the last cohort year.
    #[arg(long)]
    year: Option<i32>,
    #[arg(long, default_value = "harmonic")]
    measure: Measure,
    /// Keep rows ranked at most this (ties included).
    #[arg(long)]
    top: Option<usize>,
    /// Follow the selected nodes through every earlier snapshot.
    #[arg(long)]
    history: bool,
}

#[derive(Args, Debug)]
struct UniversitiesArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "halving")]
    scheme: WeightScheme,
    /// Institutions named individually; the others are pooled as `rest`.
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Graphml,
    Csv,
}

#[derive(Args, Debug)]
struct SubgraphArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Restrict to this node and its descendants.
    #[arg(long)]
    root: Option<String>,
    /// Snapshot year; defaults to the last cohort year.
    #[arg(long, conflicts_with = "universe")]
    year: Option<i32>,
    /// Use the whole dataset instead of a snapshot.
    #[arg(long)]
    universe: bool,
    #[arg(long, value_enum, default_value = "dot")]
    format: Format,
}

#[derive(Args, Debug)]
struct CandidatesArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    year: Option<i32>,
    /// Report harmonic rank changes if all candidates won.
    #[arg(long)]
    counterfactual: bool,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    year: Option<i32>,
    /// Sample from the whole dataset instead of the snapshot.
    #[arg(long)]
    universe: bool,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0.9)]
    level: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `exact` degree years, or `bucket` to widen empty strata to ±5 years.
    #[arg(long, default_value = "exact")]
    strata: StrataKey,
    /// `minimum` or `average` of the two directions of a pair.
    #[arg(long, default_value = "minimum")]
    variant: PairAggregation,
    /// Print the laureate histogram (`length,count`) instead of the band.
    #[arg(long)]
    histogram: bool,
}

#[cfg(feature = "harvest")]
#[derive(Args, Debug)]
struct FetchArgs {
    #[arg(long)]
    source: genealogy_harvest::SourceName,
    /// Records are read from `<base-url>/<id>.rec`.
    #[arg(long, default_value = "")]
    base_url: String,
    #[arg(long, default_value = "cache")]
    cache_dir: PathBuf,
    /// Person to start from; may repeat.
    #[arg(long = "id", required = true)]
    ids: Vec<String>,
    /// Advisor generations to follow.
    #[arg(long, default_value_t = 5)]
    depth: u32,
    #[arg(long, default_value_t = 1000)]
    interval_ms: u64,
    /// Serve from the cache only.
    #[arg(long)]
    offline: bool,
}

/// Destination of single-file output.
fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn csv_writer(out: &Option<PathBuf>) -> Result<csv::Writer<Box<dyn Write>>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink(out)?))
}

fn name_of(g: &GenealogyGraph, id: &PersonId) -> String {
    g.person(id.as_str())
        .map(|p| p.name.clone())
        .unwrap_or_default()
}

fn run(cli: Cli) -> Result<ExitCode> {
    let out = &cli.out;
    match cli.command {
        Command::Validate(data) => {
            let raw = data.raw()?;
            let report = validate(&raw);
            let mut w = sink(out)?;
            write!(w, "{report}")?;
            writeln!(
                w,
                "{} persons, {} edges: {} errors, {} warnings",
                raw.persons.len(),
                raw.edges.len(),
                report.errors.len(),
                report.warnings.len()
            )?;
            w.flush()?;
            return Ok(if report.is_admissible() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Command::Build(args) => {
            let loaded = args.data.load()?;
            let series = loaded.series()?;
            let mut w = csv_writer(out)?;
            w.write_record(["year", "nodes", "edges", "laureates", "components"])?;
            for s in series.iter() {
                let g = &s.graph;
                w.write_record([
                    s.year.to_string(),
                    g.node_count().to_string(),
                    g.edge_count().to_string(),
                    g.laureates().count().to_string(),
                    components(g).0.to_string(),
                ])?;
            }
            w.flush()?;
            if let (Some(year), Some(dir)) = (args.year, &args.emit_dir) {
                let snap = series
                    .get(year)
                    .with_context(|| format!("{year} is not a cohort year"))?;
                std::fs::create_dir_all(dir)?;
                save_dataset(&snap.graph, &dir.join("nodes.csv"), &dir.join("edges.csv"))?;
            }
        }
        Command::Centrality(args) => {
            let loaded = args.data.load()?;
            let series = loaded.series()?;
            let snap = snapshot_at(&series, args.year)?;
            let table = rank_table(&snap.graph, args.measure);
            let limit = args
                .top
                .unwrap_or(if args.history { 10 } else { usize::MAX });
            let chosen: Vec<_> = table.rows.iter().filter(|r| r.rank <= limit).collect();
            let mut w = csv_writer(out)?;
            w.write_record(["year", "node_id", "name", "measure", "score", "rank"])?;
            let measure = args.measure.to_string();
            if args.history {
                let subjects: BTreeSet<PersonId> = chosen.iter().map(|r| r.node.clone()).collect();
                for row in rank_history(&series, args.measure, &subjects)
                    .into_iter()
                    .filter(|r| r.year <= snap.year)
                {
                    let name = name_of(&loaded.universe, &row.node);
                    w.write_record([
                        &row.year.to_string(),
                        row.node.as_str(),
                        &name,
                        &measure,
                        &row.score.to_string(),
                        &row.rank.to_string(),
                    ])?;
                }
            } else {
                for row in chosen {
                    let name = name_of(&snap.graph, &row.node);
                    w.write_record([
                        &snap.year.to_string(),
                        row.node.as_str(),
                        &name,
                        &measure,
                        &row.score.to_string(),
                        &row.rank.to_string(),
                    ])?;
                }
            }
            w.flush()?;
        }
        Command::Timeline(data) => {
            let series = data.load()?.series()?;
            let mut w = csv_writer(out)?;
            w.write_record(["year", "nodes_added", "edges_added", "total", "components"])?;
            for d in edit_series(&series)? {
                w.write_record(
                    [
                        d.year,
                        d.nodes_added as i32,
                        d.edges_added as i32,
                        d.total as i32,
                        d.components_after as i32,
                    ]
                    .map(|v| v.to_string()),
                )?;
            }
            w.flush()?;
        }
        Command::Universities(args) => {
            let series = args.data.load()?.series()?;
            let shares = share_series(&series, args.scheme, args.top);
            if let Some(last) = shares.ledgers.last() {
                for warning in &last.warnings {
                    eprintln!("warning {warning}");
                }
            }
            let mut w = csv_writer(out)?;
            w.write_record(["year", "institution", "points", "share"])?;
            for r in &shares.rows {
                w.write_record([
                    &r.year.to_string(),
                    r.institution.as_str(),
                    &r.points.to_string(),
                    &r.share.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Command::Subgraph(args) => {
            let loaded = args.data.load()?;
            let base = if args.universe {
                loaded.universe.clone()
            } else {
                snapshot_at(&loaded.series()?, args.year)?.graph.clone()
            };
            let graph = match &args.root {
                Some(root) => descendant_subgraph(&base, root)?,
                None => base,
            };
            match args.format {
                Format::Dot => {
                    let laureates = graph.laureates().map(|p| p.id.clone()).collect();
                    write_text(out, &export_dot(&graph, &laureates))?;
                }
                Format::Graphml => write_text(out, &export_graphml(&graph))?,
                Format::Csv => match out {
                    Some(dir) => {
                        std::fs::create_dir_all(dir)?;
                        save_dataset(&graph, &dir.join("nodes.csv"), &dir.join("edges.csv"))?;
                    }
                    None => {
                        let mut w = std::io::stdout().lock();
                        write_nodes(&graph, &mut w)?;
                        writeln!(w)?;
                        write_edges(&graph, &mut w)?;
                    }
                },
            }
        }
        Command::Candidates(args) => {
            let loaded = args.data.load()?;
            let series = loaded.series()?;
            let snap = snapshot_at(&series, args.year)?;
            let candidates: Vec<PersonId> = loaded
                .universe
                .persons()
                .iter()
                .filter(|p| p.candidate && !p.laureate_as_of(snap.year))
                .map(|p| p.id.clone())
                .collect();
            let mut w = csv_writer(out)?;
            if args.counterfactual {
                w.write_record(["year", "node_id", "name", "old_rank", "new_rank", "delta"])?;
                for (id, shift) in
                    metrics::counterfactual_rank_delta(snap, &loaded.universe, &candidates)?
                {
                    let name = name_of(&snap.graph, &id);
                    w.write_record([
                        &snap.year.to_string(),
                        id.as_str(),
                        &name,
                        &shift.old.to_string(),
                        &shift.new.to_string(),
                        &shift.delta().to_string(),
                    ])?;
                }
            } else {
                let mut scores = Vec::with_capacity(candidates.len());
                for c in &candidates {
                    let attached =
                        attach_candidates(snap, &loaded.universe, std::slice::from_ref(c))?;
                    let to_laureates =
                        metrics::incloseness(&attached.graph, c.as_str(), TargetMode::Laureates)?;
                    let to_network =
                        metrics::incloseness(&attached.graph, c.as_str(), TargetMode::Network)?;
                    scores.push((c.clone(), to_laureates, to_network));
                }
                let ranks = rank_scores(
                    Measure::Harmonic,
                    scores.iter().map(|(c, l, _)| (c.clone(), *l)),
                )
                .ranks();
                w.write_record([
                    "year",
                    "node_id",
                    "name",
                    "incloseness_laureates",
                    "incloseness_network",
                    "rank",
                ])?;
                for (c, l, n) in &scores {
                    let name = name_of(&loaded.universe, c);
                    w.write_record([
                        &snap.year.to_string(),
                        c.as_str(),
                        &name,
                        &l.to_string(),
                        &n.to_string(),
                        &ranks[c].to_string(),
                    ])?;
                }
            }
            w.flush()?;
        }
        Command::Baseline(args) => {
            let loaded = args.data.load()?;
            let series = loaded.series()?;
            let snap = snapshot_at(&series, args.year)?;
            let graph = if args.universe {
                &loaded.universe
            } else {
                &snap.graph
            };
            let reference: Vec<PersonId> = graph
                .persons()
                .iter()
                .filter(|p| p.laureate_as_of(snap.year))
                .map(|p| p.id.clone())
                .collect();
            let mut w = csv_writer(out)?;
            if args.histogram {
                let h = pairwise_paths(graph, &reference, args.variant)?;
                w.write_record(["length", "count"])?;
                for length in 1..=h.max_length() {
                    w.write_record([length.to_string(), h.count(length).to_string()])?;
                }
                eprintln!("{} of {} pairs unreachable", h.unreachable, h.pairs());
            } else {
                let config = BaselineConfig {
                    trials: args.trials,
                    level: args.level,
                    seed: args.seed,
                    strata: args.strata,
                    variant: args.variant,
                };
                let band = baseline_band(graph, &reference, &config)?;
                w.write_record(["length", "lower", "upper"])?;
                for r in &band.rows {
                    w.write_record([
                        r.length.to_string(),
                        r.lower.to_string(),
                        r.upper.to_string(),
                    ])?;
                }
            }
            w.flush()?;
        }
        #[cfg(feature = "harvest")]
        Command::Fetch(args) => fetch(args, out)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn write_text(out: &Option<PathBuf>, text: &str) -> Result<()> {
    let mut w = sink(out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

#[cfg(feature = "harvest")]
fn fetch(args: FetchArgs, out: &Option<PathBuf>) -> Result<()> {
    use genealogy_harvest::{merge_sources, Aliases, Harvester, SourceConfig};

    let Some(dir) = out else {
        anyhow::bail!("fetch writes nodes.csv and edges.csv; give the directory with --out");
    };
    if args.base_url.is_empty() && !args.offline {
        anyhow::bail!("--base-url is required unless --offline is set");
    }
    let config = SourceConfig::new(args.source, args.base_url, args.cache_dir)
        .with_interval(std::time::Duration::from_millis(args.interval_ms));
    let harvester = Harvester::http(config)?.offline(args.offline);
    let mut records = std::collections::BTreeMap::new();
    for id in &args.ids {
        let ancestry = harvester.fetch_ancestry(id, args.depth);
        for gap in &ancestry.gaps {
            eprintln!("gap {}: {}", gap.id, gap.error);
        }
        records.extend(ancestry.records);
    }
    if records.is_empty() {
        anyhow::bail!("no records fetched");
    }
    let merged = merge_sources(records.values(), &Aliases::new())?;
    for warning in &merged.warnings {
        eprintln!("warning {warning}");
    }
    std::fs::create_dir_all(dir)?;
    save_dataset(
        &merged.graph,
        &dir.join("nodes.csv"),
        &dir.join("edges.csv"),
    )?;
    eprintln!(
        "{} persons, {} edges, {} requests",
        merged.graph.node_count(),
        merged.graph.edge_count(),
        harvester.request_count()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match config::parse_with_config::<Cli>(std::env::args_os().collect()) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
