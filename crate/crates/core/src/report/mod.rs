//! Macro → meso → micro analysis reports and interchange exports.

mod export;

use std::io::Write;

use serde::{Deserialize, Serialize};

pub use export::{
    export_edgelist_csv, export_gexf, export_graphml, import_edgelist_csv, read_centrality_csv, read_partition_csv,
    write_centrality_csv, write_partition_csv, Decorations,
};

use crate::community::{cluster_census, louvain_best, CensusRow, LouvainParams, Partition};
use crate::error::Result;
use crate::metrics::{average_path_length, betweenness, density, top_k, AplPolicy, CentralityVector, RankedNode};
use crate::network::{Network, NodeKind};

/// Every knob that influences a report. Echoed verbatim into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisParams {
    pub resolution: f64,
    pub seed: u64,
    pub restarts: usize,
    pub max_passes: usize,
    pub weighted_betweenness: bool,
    pub normalized_betweenness: bool,
    pub apl_policy: AplPolicy,
    pub top_k: usize,
}

impl Default for AnalysisParams {
    fn default() -> Self {
        AnalysisParams {
            resolution: 1.0,
            seed: 42,
            restarts: 1,
            max_passes: 32,
            weighted_betweenness: false,
            normalized_betweenness: true,
            apl_policy: AplPolicy::ReachablePairs,
            top_k: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroScores {
    pub density: f64,
    pub average_path_length: f64,
    pub apl_policy: AplPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MesoScores {
    pub modularity: f64,
    pub cluster_count: usize,
    pub resolution: f64,
    /// Seed of the Louvain run that was kept.
    pub seed: u64,
    pub census: Vec<CensusRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicroScores {
    pub top_betweenness: Vec<RankedNode>,
    pub normalized: bool,
    pub weighted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub network_name: String,
    pub node_kind: NodeKind,
    pub n_nodes: usize,
    pub n_edges: usize,
    #[serde(rename = "macro")]
    pub macro_scores: MacroScores,
    pub meso: MesoScores,
    pub micro: MicroScores,
    pub config_echo: AnalysisParams,
}

/// A report together with the full partition and centrality it summarizes.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub partition: Partition,
    pub centrality: CentralityVector,
}

pub fn analyze(net: &Network, params: &AnalysisParams) -> Result<AnalysisReport> {
    analyze_full(net, params).map(|a| a.report)
}

/// Runs every score on `net`. Errors name the metric that is undefined.
pub fn analyze_full(net: &Network, params: &AnalysisParams) -> Result<Analysis> {
    let density = density(net)?;
    let apl = average_path_length(net, params.apl_policy)?;
    let partition = louvain_best(
        net,
        &LouvainParams {
            resolution: params.resolution,
            seed: params.seed,
            max_passes: params.max_passes,
            restarts: params.restarts,
        },
    )?;
    let census = cluster_census(net, &partition)?;
    let centrality = betweenness(net, params.weighted_betweenness, params.normalized_betweenness)?;

    let report = AnalysisReport {
        network_name: net.name().to_string(),
        node_kind: net.kind(),
        n_nodes: net.node_count(),
        n_edges: net.edge_count(),
        macro_scores: MacroScores {
            density,
            average_path_length: apl,
            apl_policy: params.apl_policy,
        },
        meso: MesoScores {
            modularity: partition.modularity,
            cluster_count: partition.community_count(),
            resolution: params.resolution,
            seed: partition.seed,
            census,
        },
        micro: MicroScores {
            top_betweenness: top_k(&centrality, params.top_k),
            normalized: centrality.normalized,
            weighted: centrality.weighted,
        },
        config_echo: params.clone(),
    };
    Ok(Analysis {
        report,
        partition,
        centrality,
    })
}

/// Pretty JSON with keys in declaration order.
pub fn render_report_json(report: &AnalysisReport, sink: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *sink, report)?;
    sink.write_all(b"\n")?;
    Ok(())
}

pub fn report_from_json(s: &str) -> Result<AnalysisReport> {
    Ok(serde_json::from_str(s)?)
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

/// Markdown narrative in macro → meso → micro order.
pub fn render_report_markdown(report: &AnalysisReport, sink: &mut dyn Write) -> Result<()> {
    let r = report;
    let kind = r.node_kind.as_str();
    writeln!(sink, "# {}", r.network_name)?;
    writeln!(sink)?;
    writeln!(sink, "{} {kind} nodes, {} edges.", r.n_nodes, r.n_edges)?;
    writeln!(sink)?;

    writeln!(sink, "## Macro")?;
    writeln!(sink)?;
    writeln!(sink, "- density: {:.4}", r.macro_scores.density)?;
    writeln!(
        sink,
        "- average path length: {:.4} ({})",
        r.macro_scores.average_path_length,
        r.macro_scores.apl_policy.as_str()
    )?;
    writeln!(sink)?;

    writeln!(sink, "## Meso")?;
    writeln!(sink)?;
    writeln!(
        sink,
        "The network had modularity of {:.4} and is composed of {} clusters (resolution {}, seed {}).",
        r.meso.modularity, r.meso.cluster_count, r.meso.resolution, r.meso.seed
    )?;
    writeln!(sink)?;
    writeln!(sink, "| Cluster | Size | Share | Top members |")?;
    writeln!(sink, "|---:|---:|---:|---|")?;
    for row in &r.meso.census {
        writeln!(
            sink,
            "| {} | {} | {:.2}% | {} |",
            row.community,
            row.size,
            row.share_percent,
            md_cell(&row.top_members.join("; "))
        )?;
    }
    writeln!(sink)?;

    writeln!(sink, "## Micro")?;
    writeln!(sink)?;
    writeln!(
        sink,
        "Top betweenness ({}, {}):",
        if r.micro.normalized { "normalized" } else { "raw" },
        if r.micro.weighted { "weighted" } else { "unweighted" }
    )?;
    writeln!(sink)?;
    writeln!(sink, "| Rank | {} | Betweenness |", capitalize(kind))?;
    writeln!(sink, "|---:|---|---:|")?;
    for row in &r.micro.top_betweenness {
        writeln!(sink, "| {} | {} | {:.6} |", row.rank, md_cell(&row.label), row.score)?;
    }
    writeln!(sink)?;

    let c = &r.config_echo;
    writeln!(sink, "## Configuration")?;
    writeln!(sink)?;
    writeln!(sink, "```")?;
    writeln!(sink, "resolution = {}", c.resolution)?;
    writeln!(sink, "seed = {}", c.seed)?;
    writeln!(sink, "restarts = {}", c.restarts)?;
    writeln!(sink, "max_passes = {}", c.max_passes)?;
    writeln!(sink, "weighted_betweenness = {}", c.weighted_betweenness)?;
    writeln!(sink, "normalized_betweenness = {}", c.normalized_betweenness)?;
    writeln!(sink, "apl_policy = {}", c.apl_policy.as_str())?;
    writeln!(sink, "top_k = {}", c.top_k)?;
    writeln!(sink, "```")?;
    Ok(())
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;

    fn params(seed: u64) -> AnalysisParams {
        AnalysisParams {
            seed,
            ..AnalysisParams::default()
        }
    }

    #[test]
    fn complete_graph_report() {
        let r = analyze(&complete(4), &params(7)).unwrap();
        assert_eq!(r.macro_scores.density, 1.0);
        assert_eq!(r.macro_scores.average_path_length, 1.0);
        assert_eq!(r.meso.cluster_count, 1);
        assert!(r.micro.top_betweenness.iter().all(|t| t.score == 0.0));

        let mut md = Vec::new();
        render_report_markdown(&r, &mut md).unwrap();
        let md = String::from_utf8(md).unwrap();
        assert!(md.contains("density: 1.0000"), "{md}");
        assert!(md.contains("| 0 | 4 | 100.00% |"));
    }

    #[test]
    fn barbell_report() {
        let r = analyze(&barbell(5), &params(1)).unwrap();
        assert_eq!(r.meso.cluster_count, 2);
        let top: Vec<&str> = r.micro.top_betweenness[..2].iter().map(|t| t.id.as_str()).collect();
        assert_eq!(top, vec!["n04", "n05"]);
    }

    #[test]
    fn too_small_network_names_density() {
        let err = analyze(&unweighted(1, &[]), &params(1)).unwrap_err();
        assert!(err.to_string().starts_with("metric undefined: density"));
        let err = analyze(&Network::empty("e", NodeKind::Keyword), &params(1)).unwrap_err();
        assert!(err.to_string().starts_with("metric undefined: density"));
    }

    #[test]
    fn json_round_trip() {
        let r = analyze(&barbell(4), &params(3)).unwrap();
        let mut buf = Vec::new();
        render_report_json(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(report_from_json(&text).unwrap(), r);
        let macro_at = text.find("\"macro\"").unwrap();
        let meso_at = text.find("\"meso\"").unwrap();
        let micro_at = text.find("\"micro\"").unwrap();
        assert!(macro_at < meso_at && meso_at < micro_at);
    }

    #[test]
    fn top_table_is_bounded_and_descending() {
        let r = analyze(
            &path(8),
            &AnalysisParams {
                top_k: 3,
                ..AnalysisParams::default()
            },
        )
        .unwrap();
        let t = &r.micro.top_betweenness;
        assert_eq!(t.len(), 3);
        assert!(t.windows(2).all(|w| w[0].score >= w[1].score));
    }
}
