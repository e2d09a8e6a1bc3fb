//! One function per stage. Stages talk only through files in the output
//! directory, and each leaves a `<stage>.log.json` behind.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use scimap::community::Partition;
use scimap::corpus::{dedupe, parse_bibtex, parse_scopus_csv, AliasTable, DocType, ParseOptions, Rejection};
use scimap::network::{
    build_bibliographic_coupling, build_coauthorship, build_coword, Counting, CowordOptions, EntityLevel,
};
use scimap::report::{
    analyze_full, export_edgelist_csv, export_gexf, export_graphml, import_edgelist_csv, read_centrality_csv,
    read_partition_csv, render_report_json, render_report_markdown, write_centrality_csv, write_partition_csv,
    AnalysisParams, Decorations,
};
use scimap::{fruchterman_reingold, CentralityVector, Corpus, LayoutCoords, Network};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{CountingArg, DocTypeArg, ExportFormat, InputFormat, LevelArg, NetworkArg};
use crate::error::CliError;
use crate::io::{read_bytes, read_text, write_file};
use crate::resolve::*;

pub mod files {
    pub const CORPUS: &str = "corpus.json";
    pub const DEDUPED: &str = "corpus.dedup.json";
    pub const DEDUP_REPORT: &str = "dedup_report.json";
    pub const NETWORK: &str = "network.csv";
    pub const REPORT_JSON: &str = "report.json";
    pub const REPORT_MD: &str = "report.md";
    pub const PARTITION: &str = "partition.csv";
    pub const CENTRALITY: &str = "centrality.csv";
    pub const LAYOUT: &str = "layout.json";
    pub const GEXF: &str = "network.gexf";
    pub const GRAPHML: &str = "network.graphml";
}

#[derive(Serialize)]
struct StageLog<'a, C> {
    stage: &'a str,
    config: &'a C,
    counts: Value,
    outputs: Vec<String>,
    elapsed_ms: f64,
    /// Command line that redoes this stage without any config file.
    replay: Vec<String>,
}

/// What a stage reports back: counts for the log and a line for the user.
pub struct Outcome {
    pub counts: Value,
    pub outputs: Vec<PathBuf>,
    pub summary: String,
}

fn record<C: Serialize + Replay>(
    stage: &str,
    out: &Path,
    config: &C,
    run: impl FnOnce() -> Result<Outcome, CliError>,
) -> Result<Value, CliError> {
    let start = Instant::now();
    let outcome = run()?;
    let elapsed_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    let mut replay = vec![
        "scimap".to_string(),
        stage.to_string(),
        "--out".into(),
        out.display().to_string(),
    ];
    replay.extend(config.flags());
    let log = StageLog {
        stage,
        config,
        counts: outcome.counts,
        outputs: outcome.outputs.iter().map(|p| p.display().to_string()).collect(),
        elapsed_ms,
        replay,
    };
    let value = serde_json::to_value(&log).map_err(|e| CliError::internal(e.to_string()))?;
    write_json(&out.join(format!("{stage}.log.json")), &value)?;
    println!("{stage}: {}", outcome.summary);
    Ok(value)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::internal(e.to_string()))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn render(f: impl FnOnce(&mut Vec<u8>) -> scimap::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| CliError::internal(e.to_string()))?;
    Ok(buf)
}

fn located(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::input(format!("{}: {e}", path.display()))
}

fn read_corpus(path: &Path) -> Result<Corpus, CliError> {
    Corpus::from_json(&read_text(path)?).map_err(|e| located(path, e))
}

fn read_network(path: &Path) -> Result<Network, CliError> {
    import_edgelist_csv(&read_bytes(path)?[..]).map_err(|e| located(path, e))
}

fn doc_type(d: DocTypeArg) -> DocType {
    match d {
        DocTypeArg::Article => DocType::Article,
        DocTypeArg::Review => DocType::Review,
        DocTypeArg::ConferencePaper => DocType::ConferencePaper,
        DocTypeArg::Book => DocType::Book,
        DocTypeArg::BookChapter => DocType::BookChapter,
        DocTypeArg::Other => DocType::Other,
    }
}

fn is_bibtex(format: InputFormat, path: &Path) -> bool {
    match format {
        InputFormat::Bibtex => true,
        InputFormat::Scopus => false,
        InputFormat::Auto => path.extension().is_some_and(|e| e.eq_ignore_ascii_case("bib")),
    }
}

pub fn ingest(out: &Path, cfg: &IngestConfig) -> Result<Value, CliError> {
    record("ingest", out, cfg, || {
        let several = cfg.inputs.len() > 1;
        let mut corpus: Option<Corpus> = None;
        for (i, path) in cfg.inputs.iter().enumerate() {
            let bytes = read_bytes(path)?;
            let at = |e| located(path, e);
            let part = if is_bibtex(cfg.format, path) {
                let mut c = parse_bibtex(&bytes).map_err(at)?;
                c.provenance.sources = vec![path.display().to_string()];
                c.provenance.parsed_at = cfg.parsed_at.clone();
                if several {
                    for r in &mut c.records {
                        r.record_id = format!("S{}-{}", i + 1, r.record_id);
                    }
                }
                c
            } else {
                let options = ParseOptions {
                    source_name: path.display().to_string(),
                    // Distinct prefixes keep row-based ids unique across files.
                    id_prefix: if several { format!("S{}-R", i + 1) } else { "R".into() },
                    parsed_at: cfg.parsed_at.clone(),
                };
                parse_scopus_csv(&bytes[..], &options).map_err(at)?
            };
            match &mut corpus {
                None => corpus = Some(part),
                Some(c) => c.extend(part)?,
            }
        }
        let mut corpus = corpus.expect("at least one input");
        let read = corpus.provenance.read;
        let parsed = corpus.len();

        if !cfg.doc_types.is_empty() {
            let keep: BTreeSet<DocType> = cfg.doc_types.iter().copied().map(doc_type).collect();
            let (kept, dropped): (Vec<_>, Vec<_>) = corpus.records.drain(..).partition(|r| keep.contains(&r.doc_type));
            corpus.records = kept;
            let p = &mut corpus.provenance;
            p.kept -= dropped.len();
            p.rejected += dropped.len();
            p.rejections.extend(dropped.iter().map(|r| Rejection {
                row: 0,
                reason: format!("{}: document type {} not selected", r.record_id, r.doc_type.as_scopus()),
            }));
            corpus.validate()?;
        }

        let path = out.join(files::CORPUS);
        let mut text = corpus.to_json()?;
        text.push('\n');
        write_file(&path, text.as_bytes())?;
        Ok(Outcome {
            counts: json!({
                "files": cfg.inputs.len(),
                "rows_read": read,
                "records_parsed": parsed,
                "records_kept": corpus.len(),
                "rejected": corpus.provenance.rejected,
            }),
            outputs: vec![path],
            summary: format!(
                "{} records kept of {read} read from {} file(s), {} rejected",
                corpus.len(),
                cfg.inputs.len(),
                corpus.provenance.rejected
            ),
        })
    })
}

pub fn dedupe_stage(out: &Path, cfg: &DedupeConfig) -> Result<Value, CliError> {
    record("dedupe", out, cfg, || {
        let corpus = read_corpus(&cfg.corpus)?;
        let (kept, report) = dedupe(&corpus, cfg.threshold)?;
        let path = out.join(files::DEDUPED);
        let mut text = kept.to_json()?;
        text.push('\n');
        write_file(&path, text.as_bytes())?;
        let report_path = out.join(files::DEDUP_REPORT);
        write_json(&report_path, &report)?;
        Ok(Outcome {
            counts: json!({
                "records_in": corpus.len(),
                "records_out": kept.len(),
                "merged_pairs": report.merged_pairs.len(),
            }),
            outputs: vec![path, report_path],
            summary: format!(
                "{} -> {} records ({} merged at {}%)",
                corpus.len(),
                kept.len(),
                report.merged_pairs.len(),
                cfg.threshold
            ),
        })
    })
}

fn read_stoplist(path: &Path) -> Result<Vec<String>, CliError> {
    Ok(read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

pub fn build(out: &Path, cfg: &BuildConfig) -> Result<Value, CliError> {
    record("build", out, cfg, || {
        let corpus = read_corpus(&cfg.corpus)?;
        let net = match cfg.network {
            NetworkArg::Ca => {
                let aliases = match &cfg.aliases {
                    Some(p) => AliasTable::from_csv(&read_bytes(p)?[..]).map_err(|e| located(p, e))?,
                    None => AliasTable::default(),
                };
                let level = match cfg.level {
                    LevelArg::Author => EntityLevel::Author,
                    LevelArg::Institution => EntityLevel::Institution,
                };
                let counting = match cfg.counting {
                    CountingArg::Full => Counting::Full,
                    CountingArg::Fractional => Counting::Fractional,
                };
                build_coauthorship(&corpus, level, counting, &aliases)?
            }
            NetworkArg::Bc => build_bibliographic_coupling(&corpus, cfg.min_shared)?,
            NetworkArg::Cw => {
                let mut options = CowordOptions {
                    author_keywords_only: cfg.author_keywords_only,
                    ..CowordOptions::default()
                };
                if let Some(p) = &cfg.stoplist {
                    options = options.with_stoplist(read_stoplist(p)?);
                }
                build_coword(&corpus, &options)?
            }
        };
        let path = out.join(files::NETWORK);
        write_file(&path, &render(|s| export_edgelist_csv(&net, s))?)?;
        Ok(Outcome {
            counts: json!({
                "records": corpus.len(),
                "nodes": net.node_count(),
                "edges": net.edge_count(),
                "components": net.connected_components().len(),
            }),
            outputs: vec![path],
            summary: format!("{}: {} nodes, {} edges", net.name(), net.node_count(), net.edge_count()),
        })
    })
}

pub fn analyze(out: &Path, cfg: &AnalyzeConfig) -> Result<Value, CliError> {
    record("analyze", out, cfg, || {
        let net = read_network(&cfg.edges)?;
        let analysis = analyze_full(&net, &cfg.params)?;
        let report = &analysis.report;
        let paths = [
            files::REPORT_JSON,
            files::REPORT_MD,
            files::PARTITION,
            files::CENTRALITY,
        ]
        .map(|f| out.join(f));
        write_file(&paths[0], &render(|s| render_report_json(report, s))?)?;
        write_file(&paths[1], &render(|s| render_report_markdown(report, s))?)?;
        write_file(
            &paths[2],
            &render(|s| write_partition_csv(&net, &analysis.partition, s))?,
        )?;
        write_file(&paths[3], &render(|s| write_centrality_csv(&analysis.centrality, s))?)?;
        Ok(Outcome {
            counts: json!({
                "nodes": report.n_nodes,
                "edges": report.n_edges,
                "clusters": report.meso.cluster_count,
            }),
            outputs: paths.to_vec(),
            summary: format!(
                "density {:.4}, average path length {:.4}, modularity {:.4} over {} clusters",
                report.macro_scores.density,
                report.macro_scores.average_path_length,
                report.meso.modularity,
                report.meso.cluster_count
            ),
        })
    })
}

pub fn layout(out: &Path, cfg: &LayoutConfig) -> Result<Value, CliError> {
    record("layout", out, cfg, || {
        let net = read_network(&cfg.edges)?;
        let coords = fruchterman_reingold(&net, &cfg.params)?;
        let path = out.join(files::LAYOUT);
        write_json(&path, &coords)?;
        Ok(Outcome {
            counts: json!({ "nodes": net.node_count(), "iterations": coords.iterations_run }),
            outputs: vec![path],
            summary: format!(
                "{} nodes placed in {} iterations",
                net.node_count(),
                coords.iterations_run
            ),
        })
    })
}

pub fn export(out: &Path, cfg: &ExportConfig) -> Result<Value, CliError> {
    record("export", out, cfg, || {
        let net = read_network(&cfg.edges)?;
        // Export only draws cluster ids and raw scores, so the analysis
        // settings attached to these structures do not reach the output.
        let defaults = AnalysisParams::default();
        let partition: Option<Partition> = cfg
            .partition
            .as_deref()
            .map(|p| {
                read_partition_csv(&net, &read_bytes(p)?[..], defaults.resolution, defaults.seed)
                    .map_err(|e| located(p, e))
            })
            .transpose()?;
        let centrality: Option<CentralityVector> = cfg
            .centrality
            .as_deref()
            .map(|p| {
                read_centrality_csv(
                    &net,
                    &read_bytes(p)?[..],
                    defaults.normalized_betweenness,
                    defaults.weighted_betweenness,
                )
                .map_err(|e| located(p, e))
            })
            .transpose()?;
        let coords: Option<LayoutCoords> = cfg
            .coords
            .as_deref()
            .map(|p| serde_json::from_str(&read_text(p)?).map_err(|e| located(p, e)))
            .transpose()?;
        let deco = Decorations {
            partition: partition.as_ref(),
            coords: coords.as_ref(),
            centrality: centrality.as_ref(),
        };
        let mut outputs = Vec::new();
        for format in &cfg.formats {
            let (name, bytes) = match format {
                ExportFormat::Gexf => (files::GEXF, render(|s| export_gexf(&net, &deco, s))),
                ExportFormat::Graphml => (files::GRAPHML, render(|s| export_graphml(&net, &deco, s))),
            };
            // Decorations that do not match the network are an input problem.
            let bytes = bytes.map_err(|e| CliError::input(e.to_string()))?;
            let path = out.join(name);
            write_file(&path, &bytes)?;
            outputs.push(path);
        }
        Ok(Outcome {
            counts: json!({
                "nodes": net.node_count(),
                "edges": net.edge_count(),
                "files": outputs.len(),
                "with_clusters": partition.is_some(),
                "with_betweenness": centrality.is_some(),
                "with_positions": coords.is_some(),
            }),
            summary: format!("{} file(s) for {} nodes", outputs.len(), net.node_count()),
            outputs,
        })
    })
}
