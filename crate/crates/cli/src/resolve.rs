//! Fully resolved stage settings. Each one serializes into its stage log
//! and can print the flags that reproduce it without a config file.

use std::path::{Path, PathBuf};

use scimap::metrics::AplPolicy;
use scimap::report::AnalysisParams;
use scimap::LayoutParams;
use serde::Serialize;

use crate::args::*;
use crate::config::FileConfig;
use crate::error::CliError;
use crate::stages::files;

#[derive(Debug, Clone, Serialize)]
pub struct IngestConfig {
    pub inputs: Vec<PathBuf>,
    pub format: InputFormat,
    pub doc_types: Vec<DocTypeArg>,
    pub parsed_at: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DedupeConfig {
    pub corpus: PathBuf,
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildConfig {
    pub corpus: PathBuf,
    pub network: NetworkArg,
    pub level: LevelArg,
    pub counting: CountingArg,
    pub min_shared: usize,
    pub stoplist: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub author_keywords_only: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeConfig {
    pub edges: PathBuf,
    pub params: AnalysisParams,
}

#[derive(Debug, Clone, Serialize)]
pub struct LayoutConfig {
    pub edges: PathBuf,
    pub params: LayoutParams,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExportConfig {
    pub edges: PathBuf,
    pub partition: Option<PathBuf>,
    pub centrality: Option<PathBuf>,
    pub coords: Option<PathBuf>,
    pub formats: Vec<ExportFormat>,
}

fn path_arg(p: &Path) -> String {
    p.display().to_string()
}

fn args(pairs: &[(&str, String)]) -> Vec<String> {
    pairs.iter().flat_map(|(k, v)| [format!("--{k}"), v.clone()]).collect()
}

pub trait Replay {
    /// Flags (after the subcommand) that reproduce this stage exactly.
    fn flags(&self) -> Vec<String>;

    /// Files that must exist before the stage starts.
    fn required(&self) -> Vec<&Path>;
}

impl Replay for IngestConfig {
    fn flags(&self) -> Vec<String> {
        let mut out: Vec<(&str, String)> = self.inputs.iter().map(|p| ("input", path_arg(p))).collect();
        out.push(("format", flag_value(&self.format)));
        if !self.doc_types.is_empty() {
            out.push((
                "doc-types",
                self.doc_types.iter().map(flag_value).collect::<Vec<_>>().join(","),
            ));
        }
        if let Some(t) = &self.parsed_at {
            out.push(("parsed-at", t.clone()));
        }
        args(&out)
    }

    fn required(&self) -> Vec<&Path> {
        self.inputs.iter().map(PathBuf::as_path).collect()
    }
}

impl Replay for DedupeConfig {
    fn flags(&self) -> Vec<String> {
        args(&[
            ("corpus", path_arg(&self.corpus)),
            ("threshold", self.threshold.to_string()),
        ])
    }

    fn required(&self) -> Vec<&Path> {
        vec![&self.corpus]
    }
}

impl Replay for BuildConfig {
    fn flags(&self) -> Vec<String> {
        let mut out = vec![
            ("corpus", path_arg(&self.corpus)),
            ("network", flag_value(&self.network)),
            ("level", flag_value(&self.level)),
            ("counting", flag_value(&self.counting)),
            ("min-shared", self.min_shared.to_string()),
            ("author-keywords-only", self.author_keywords_only.to_string()),
        ];
        if let Some(p) = &self.stoplist {
            out.push(("stoplist", path_arg(p)));
        }
        if let Some(p) = &self.aliases {
            out.push(("aliases", path_arg(p)));
        }
        args(&out)
    }

    fn required(&self) -> Vec<&Path> {
        std::iter::once(&self.corpus)
            .chain(&self.stoplist)
            .chain(&self.aliases)
            .map(PathBuf::as_path)
            .collect()
    }
}

impl Replay for AnalyzeConfig {
    fn flags(&self) -> Vec<String> {
        let p = &self.params;
        let apl = match p.apl_policy {
            AplPolicy::ReachablePairs => AplArg::ReachablePairs,
            AplPolicy::LargestComponent => AplArg::LargestComponent,
        };
        args(&[
            ("edges", path_arg(&self.edges)),
            ("seed", p.seed.to_string()),
            ("resolution", p.resolution.to_string()),
            ("restarts", p.restarts.to_string()),
            ("max-passes", p.max_passes.to_string()),
            ("weighted", p.weighted_betweenness.to_string()),
            ("normalized", p.normalized_betweenness.to_string()),
            ("apl-policy", flag_value(&apl)),
            ("top-k", p.top_k.to_string()),
        ])
    }

    fn required(&self) -> Vec<&Path> {
        vec![&self.edges]
    }
}

impl Replay for LayoutConfig {
    fn flags(&self) -> Vec<String> {
        let p = &self.params;
        args(&[
            ("edges", path_arg(&self.edges)),
            ("width", p.width.to_string()),
            ("height", p.height.to_string()),
            ("iterations", p.iterations.to_string()),
            ("layout-seed", p.seed.to_string()),
            ("spring-scale", p.spring_scale.to_string()),
            ("weighted-attraction", p.weighted_attraction.to_string()),
        ])
    }

    fn required(&self) -> Vec<&Path> {
        vec![&self.edges]
    }
}

impl Replay for ExportConfig {
    fn flags(&self) -> Vec<String> {
        let mut out = vec![("edges", path_arg(&self.edges))];
        for (k, p) in [
            ("partition", &self.partition),
            ("centrality", &self.centrality),
            ("coords", &self.coords),
        ] {
            if let Some(p) = p {
                out.push((k, path_arg(p)));
            }
        }
        out.push((
            "formats",
            self.formats.iter().map(flag_value).collect::<Vec<_>>().join(","),
        ));
        args(&out)
    }

    fn required(&self) -> Vec<&Path> {
        std::iter::once(&self.edges)
            .chain(&self.partition)
            .chain(&self.centrality)
            .chain(&self.coords)
            .map(PathBuf::as_path)
            .collect()
    }
}

/// Output directory and config file shared by every subcommand.
pub struct Context {
    pub out: PathBuf,
    pub file: FileConfig,
}

impl Context {
    pub fn new(common: Common) -> Result<Self, CliError> {
        let file = FileConfig::load(common.config.as_deref())?;
        let out = file
            .value(common.out, "out")?
            .ok_or_else(|| CliError::input("no output directory: pass --out DIR or set `out` in the config file"))?;
        Ok(Context { out, file })
    }

    fn or_out(&self, flag: Option<PathBuf>, name: &str) -> PathBuf {
        flag.unwrap_or_else(|| self.out.join(name))
    }

    /// An explicit path, or the default artifact when a previous stage left one.
    fn if_present(&self, flag: Option<PathBuf>, name: &str) -> Option<PathBuf> {
        flag.or_else(|| Some(self.out.join(name)).filter(|p| p.is_file()))
    }

    pub fn ingest(&self, o: IngestOpts) -> Result<IngestConfig, CliError> {
        let f = &self.file;
        let inputs = f.paths(o.inputs, "input");
        if inputs.is_empty() {
            return Err(CliError::input(
                "no input files: pass --input FILE or set `input` in the config file",
            ));
        }
        let parsed_at = match f.value(o.parsed_at, "parsed_at")? {
            Some(t) => Some(t),
            None => std::env::var("SOURCE_DATE_EPOCH").ok().filter(|s| !s.trim().is_empty()),
        };
        Ok(IngestConfig {
            inputs,
            format: f.choice(o.format, "format")?.unwrap_or(InputFormat::Auto),
            doc_types: f.list(o.doc_types, "doc_types")?.unwrap_or_default(),
            parsed_at,
        })
    }

    pub fn dedupe(&self, corpus: Option<PathBuf>, o: DedupeOpts) -> Result<DedupeConfig, CliError> {
        Ok(DedupeConfig {
            corpus: self.or_out(corpus, files::CORPUS),
            threshold: self.file.value(o.threshold, "threshold")?.unwrap_or(95.0),
        })
    }

    pub fn build(&self, corpus: Option<PathBuf>, o: BuildOpts) -> Result<BuildConfig, CliError> {
        let f = &self.file;
        Ok(BuildConfig {
            corpus: self.or_out(corpus, files::DEDUPED),
            network: f.choice(o.network, "network")?.unwrap_or(NetworkArg::Ca),
            level: f.choice(o.level, "level")?.unwrap_or(LevelArg::Author),
            counting: f.choice(o.counting, "counting")?.unwrap_or(CountingArg::Full),
            min_shared: f.value(o.min_shared, "min_shared")?.unwrap_or(1),
            stoplist: f.value(o.stoplist, "stoplist")?,
            aliases: f.value(o.aliases, "aliases")?,
            author_keywords_only: f
                .value(o.author_keywords_only, "author_keywords_only")?
                .unwrap_or(false),
        })
    }

    pub fn analyze(&self, edges: Option<PathBuf>, seed: SeedOpt, o: AnalyzeOpts) -> Result<AnalyzeConfig, CliError> {
        let f = &self.file;
        let d = AnalysisParams::default();
        let apl_policy = match f.choice(o.apl_policy, "apl_policy")? {
            Some(AplArg::LargestComponent) => AplPolicy::LargestComponent,
            Some(AplArg::ReachablePairs) => AplPolicy::ReachablePairs,
            None => d.apl_policy,
        };
        Ok(AnalyzeConfig {
            edges: self.or_out(edges, files::NETWORK),
            params: AnalysisParams {
                resolution: f.value(o.resolution, "resolution")?.unwrap_or(d.resolution),
                seed: f.seed(seed.seed)?,
                restarts: f.value(o.restarts, "restarts")?.unwrap_or(d.restarts),
                max_passes: f.value(o.max_passes, "max_passes")?.unwrap_or(d.max_passes),
                weighted_betweenness: f.value(o.weighted, "weighted")?.unwrap_or(d.weighted_betweenness),
                normalized_betweenness: f.value(o.normalized, "normalized")?.unwrap_or(d.normalized_betweenness),
                apl_policy,
                top_k: f.value(o.top_k, "top_k")?.unwrap_or(d.top_k),
            },
        })
    }

    pub fn layout(&self, edges: Option<PathBuf>, seed: SeedOpt, o: LayoutOpts) -> Result<LayoutConfig, CliError> {
        let f = &self.file;
        let d = LayoutParams::default();
        let seed = match f.value(o.layout_seed, "layout_seed")? {
            Some(s) => s,
            None => f.seed(seed.seed)?,
        };
        Ok(LayoutConfig {
            edges: self.or_out(edges, files::NETWORK),
            params: LayoutParams {
                width: f.value(o.width, "width")?.unwrap_or(d.width),
                height: f.value(o.height, "height")?.unwrap_or(d.height),
                iterations: f.value(o.iterations, "iterations")?.unwrap_or(d.iterations),
                seed,
                spring_scale: f.value(o.spring_scale, "spring_scale")?.unwrap_or(d.spring_scale),
                weighted_attraction: f
                    .value(o.weighted_attraction, "weighted_attraction")?
                    .unwrap_or(d.weighted_attraction),
            },
        })
    }

    pub fn export(
        &self,
        edges: Option<PathBuf>,
        partition: Option<PathBuf>,
        centrality: Option<PathBuf>,
        coords: Option<PathBuf>,
        o: ExportOpts,
    ) -> Result<ExportConfig, CliError> {
        let mut formats = self
            .file
            .list(o.formats, "formats")?
            .unwrap_or_else(|| vec![ExportFormat::Gexf, ExportFormat::Graphml]);
        formats.dedup();
        Ok(ExportConfig {
            edges: self.or_out(edges, files::NETWORK),
            partition: self.if_present(partition, files::PARTITION),
            centrality: self.if_present(centrality, files::CENTRALITY),
            coords: self.if_present(coords, files::LAYOUT),
            formats,
        })
    }
}
