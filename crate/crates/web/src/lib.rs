//! Browser demo: sample networks, a clustered force-directed map, the
//! analysis report and title similarity. Everything crosses the JS boundary
//! as strings or numbers; the `js` module holds the bindings.

use scimap::community::louvain;
use scimap::corpus::{title_similarity as similarity, AliasTable};
use scimap::network::{
    build_bibliographic_coupling, build_coauthorship, build_coword, Counting, CowordOptions, EntityLevel,
};
use scimap::report::{analyze, export_edgelist_csv, import_edgelist_csv, render_report_markdown, AnalysisParams};
use scimap::synth::{synthetic_corpus, CorpusSpec};
use scimap::{fruchterman_reingold, LayoutParams, Network};
use serde::Serialize;

type Result<T> = std::result::Result<T, String>;

fn text(e: scimap::Error) -> String {
    e.to_string()
}

fn parse(edges_csv: &str) -> Result<Network> {
    import_edgelist_csv(edges_csv.as_bytes()).map_err(text)
}

/// Edge list of a synthetic network: `kind` is `ca` (institutions), `bc` or `cw`.
pub fn sample_network(kind: &str, records: u32, seed: u32) -> Result<String> {
    let corpus = synthetic_corpus(&CorpusSpec::scale(records.clamp(2, 2000) as usize, seed as u64)).map_err(text)?;
    let net = match kind {
        "ca" => build_coauthorship(
            &corpus,
            EntityLevel::Institution,
            Counting::Full,
            &AliasTable::default(),
        ),
        "bc" => build_bibliographic_coupling(&corpus, 2),
        "cw" => build_coword(&corpus, &CowordOptions::default()),
        other => return Err(format!("unknown network kind {other:?}; expected ca, bc or cw")),
    }
    .map_err(text)?;
    let mut out = Vec::new();
    export_edgelist_csv(&net, &mut out).map_err(text)?;
    String::from_utf8(out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct MapNode<'a> {
    id: &'a str,
    label: &'a str,
    x: f64,
    y: f64,
    cluster: usize,
    degree: usize,
}

#[derive(Serialize)]
struct Map<'a> {
    width: f64,
    height: f64,
    clusters: usize,
    modularity: Option<f64>,
    nodes: Vec<MapNode<'a>>,
    edges: Vec<(usize, usize, f64)>,
}

/// Positions plus Louvain clusters, as JSON for drawing.
pub fn map_network(edges_csv: &str, width: f64, height: f64, iterations: u32, seed: u32) -> Result<String> {
    let net = parse(edges_csv)?;
    let params = LayoutParams {
        width,
        height,
        iterations: iterations as usize,
        seed: seed as u64,
        ..LayoutParams::default()
    };
    let coords = fruchterman_reingold(&net, &params).map_err(text)?;
    // Without edges there is nothing to cluster; draw one colour.
    let (assignment, clusters, modularity) = if net.edge_count() == 0 {
        (vec![0; net.node_count()], net.node_count().min(1), None)
    } else {
        let p = louvain(&net, 1.0, seed as u64, 32).map_err(text)?;
        let count = p.community_count();
        (p.assignment, count, Some(p.modularity))
    };
    let nodes = net
        .nodes()
        .iter()
        .zip(&coords.positions)
        .enumerate()
        .map(|(i, (n, p))| MapNode {
            id: &n.id,
            label: &n.label,
            x: p.x,
            y: p.y,
            cluster: assignment[i],
            degree: net.degree(i),
        })
        .collect();
    let map = Map {
        width,
        height,
        clusters,
        modularity,
        nodes,
        edges: net.edges().iter().map(|e| (e.source, e.target, e.weight)).collect(),
    };
    serde_json::to_string(&map).map_err(|e| e.to_string())
}

/// The Markdown analysis report for an edge list.
pub fn report_markdown(edges_csv: &str, resolution: f64, seed: u32) -> Result<String> {
    let net = parse(edges_csv)?;
    let params = AnalysisParams {
        resolution,
        seed: seed as u64,
        ..AnalysisParams::default()
    };
    let report = analyze(&net, &params).map_err(text)?;
    let mut out = Vec::new();
    render_report_markdown(&report, &mut out).map_err(text)?;
    String::from_utf8(out).map_err(|e| e.to_string())
}

/// Title similarity in percent; NaN when both titles are empty.
pub fn title_similarity(a: &str, b: &str) -> f64 {
    similarity(a, b).unwrap_or(f64::NAN)
}

#[cfg(target_arch = "wasm32")]
mod js {
    use wasm_bindgen::prelude::*;

    fn js(r: super::Result<String>) -> Result<String, JsError> {
        r.map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = sampleNetwork)]
    pub fn sample_network(kind: &str, records: u32, seed: u32) -> Result<String, JsError> {
        js(super::sample_network(kind, records, seed))
    }

    #[wasm_bindgen(js_name = mapNetwork)]
    pub fn map_network(
        edges_csv: &str,
        width: f64,
        height: f64,
        iterations: u32,
        seed: u32,
    ) -> Result<String, JsError> {
        js(super::map_network(edges_csv, width, height, iterations, seed))
    }

    #[wasm_bindgen(js_name = reportMarkdown)]
    pub fn report_markdown(edges_csv: &str, resolution: f64, seed: u32) -> Result<String, JsError> {
        js(super::report_markdown(edges_csv, resolution, seed))
    }

    #[wasm_bindgen(js_name = titleSimilarity)]
    pub fn title_similarity(a: &str, b: &str) -> f64 {
        super::title_similarity(a, b)
    }
}
