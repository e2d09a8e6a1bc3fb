//! Command-line surface. Every option is optional here; defaults and the
//! config file are applied in `resolve`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "scimap",
    version,
    about = "Science mapping: bibliographic networks, clusters and maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse Scopus CSV or BibTeX exports into OUT/corpus.json.
    Ingest {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ingest: IngestOpts,
    },
    /// Merge near-duplicate titles into OUT/corpus.dedup.json.
    Dedupe {
        #[command(flatten)]
        common: Common,
        /// Corpus to deduplicate [default: OUT/corpus.json].
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        dedupe: DedupeOpts,
    },
    /// Build a network from a corpus into OUT/network.csv.
    Build {
        #[command(flatten)]
        common: Common,
        /// Corpus to read [default: OUT/corpus.dedup.json].
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        build: BuildOpts,
    },
    /// Macro, meso and micro scores into OUT/report.{json,md}.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Edge list to analyze [default: OUT/network.csv].
        #[arg(long)]
        edges: Option<PathBuf>,
        #[command(flatten)]
        seed: SeedOpt,
        #[command(flatten)]
        analyze: AnalyzeOpts,
    },
    /// Force-directed coordinates into OUT/layout.json.
    Layout {
        #[command(flatten)]
        common: Common,
        /// Edge list to lay out [default: OUT/network.csv].
        #[arg(long)]
        edges: Option<PathBuf>,
        #[command(flatten)]
        seed: SeedOpt,
        #[command(flatten)]
        layout: LayoutOpts,
    },
    /// GEXF and GraphML files, decorated with whatever analysis exists.
    Export {
        #[command(flatten)]
        common: Common,
        /// Edge list to export [default: OUT/network.csv].
        #[arg(long)]
        edges: Option<PathBuf>,
        /// Cluster assignment [default: OUT/partition.csv if present].
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Betweenness scores [default: OUT/centrality.csv if present].
        #[arg(long)]
        centrality: Option<PathBuf>,
        /// Coordinates [default: OUT/layout.json if present].
        #[arg(long)]
        coords: Option<PathBuf>,
        #[command(flatten)]
        export: ExportOpts,
    },
    /// Every stage in order, stopping at the first failure.
    Pipeline {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ingest: IngestOpts,
        #[command(flatten)]
        dedupe: DedupeOpts,
        #[command(flatten)]
        build: BuildOpts,
        #[command(flatten)]
        seed: SeedOpt,
        #[command(flatten)]
        analyze: AnalyzeOpts,
        #[command(flatten)]
        layout: LayoutOpts,
        #[command(flatten)]
        export: ExportOpts,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Directory for every artifact and stage log.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// `key = value` file; flags take precedence over it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SeedOpt {
    /// Random seed [default: $SCIMAP_SEED, else 42].
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct IngestOpts {
    /// Export file; repeat for several.
    #[arg(long = "input", value_name = "FILE")]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
    /// Keep only these document types (comma-separated).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub doc_types: Vec<DocTypeArg>,
    /// Timestamp recorded in the corpus [default: $SOURCE_DATE_EPOCH].
    #[arg(long)]
    pub parsed_at: Option<String>,
}

#[derive(Debug, Args)]
pub struct DedupeOpts {
    /// Title similarity, in percent, at which records merge [default: 95].
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BuildOpts {
    /// ca = co-authorship, bc = bibliographic coupling, cw = co-word [default: ca].
    #[arg(long, value_enum)]
    pub network: Option<NetworkArg>,
    /// Co-authorship entity [default: author].
    #[arg(long, value_enum)]
    pub level: Option<LevelArg>,
    /// Co-authorship weighting [default: full].
    #[arg(long, value_enum)]
    pub counting: Option<CountingArg>,
    /// Shared references needed for a coupling edge [default: 1].
    #[arg(long)]
    pub min_shared: Option<usize>,
    /// Keywords to drop, one per line.
    #[arg(long, value_name = "FILE")]
    pub stoplist: Option<PathBuf>,
    /// Institution aliases as `raw,canonical` CSV rows.
    #[arg(long, value_name = "FILE")]
    pub aliases: Option<PathBuf>,
    /// Co-word from author keywords only.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub author_keywords_only: Option<bool>,
}

#[derive(Debug, Args)]
pub struct AnalyzeOpts {
    /// Modularity resolution [default: 1].
    #[arg(long)]
    pub resolution: Option<f64>,
    /// Louvain runs from consecutive seeds; the best is kept [default: 1].
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Louvain aggregation levels [default: 32].
    #[arg(long)]
    pub max_passes: Option<usize>,
    /// Betweenness over weighted distances (1 / weight) [default: false].
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub weighted: Option<bool>,
    /// Scale betweenness to [0, 1] [default: true].
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub normalized: Option<bool>,
    /// Pairs entering the average path length [default: reachable-pairs].
    #[arg(long, value_enum)]
    pub apl_policy: Option<AplArg>,
    /// Rows in the betweenness table [default: 10].
    #[arg(long)]
    pub top_k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LayoutOpts {
    /// Frame width [default: 1000].
    #[arg(long)]
    pub width: Option<f64>,
    /// Frame height [default: 1000].
    #[arg(long)]
    pub height: Option<f64>,
    /// Layout iterations [default: 500].
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Layout seed [default: --seed].
    #[arg(long)]
    pub layout_seed: Option<u64>,
    /// Scale on the ideal edge length [default: 1].
    #[arg(long)]
    pub spring_scale: Option<f64>,
    /// Attraction grows with edge weight [default: false].
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub weighted_attraction: Option<bool>,
}

#[derive(Debug, Args)]
pub struct ExportOpts {
    /// Comma-separated [default: gexf,graphml].
    #[arg(long, value_enum, value_delimiter = ',')]
    pub formats: Vec<ExportFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// By extension: .bib is BibTeX, anything else Scopus CSV.
    Auto,
    Scopus,
    Bibtex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocTypeArg {
    Article,
    Review,
    ConferencePaper,
    Book,
    BookChapter,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetworkArg {
    Ca,
    Bc,
    Cw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelArg {
    Author,
    Institution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountingArg {
    Full,
    Fractional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AplArg {
    ReachablePairs,
    LargestComponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportFormat {
    Gexf,
    Graphml,
}

/// The spelling clap accepts for `v`.
pub fn flag_value<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}
