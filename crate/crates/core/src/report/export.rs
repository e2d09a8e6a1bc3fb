//! GEXF, GraphML and edge-list CSV writers, plus the small CSV side files
//! (partition, centrality) that travel between pipeline stages.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{Read, Write};

use quick_xml::escape::escape;

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::layout::LayoutCoords;
use crate::metrics::{CentralityEntry, CentralityVector};
use crate::network::{Network, Node, NodeKind};

/// Optional per-node decorations for graph exports. Each must cover every
/// node of the exported network, in node order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Decorations<'a> {
    pub partition: Option<&'a Partition>,
    pub coords: Option<&'a LayoutCoords>,
    pub centrality: Option<&'a CentralityVector>,
}

impl Decorations<'_> {
    fn check(&self, net: &Network) -> Result<()> {
        let n = net.node_count();
        if let Some(p) = self.partition {
            if p.assignment.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "partition covers {} nodes, network has {n}",
                    p.assignment.len()
                )));
            }
        }
        if let Some(c) = self.coords {
            if c.positions.len() != n || c.positions.iter().zip(net.nodes()).any(|(p, n)| p.id != n.id) {
                return Err(Error::InvalidArgument("coordinates do not match network nodes".into()));
            }
        }
        if let Some(c) = self.centrality {
            if c.entries.len() != n || c.entries.iter().zip(net.nodes()).any(|(e, n)| e.id != n.id) {
                return Err(Error::InvalidArgument("centrality does not match network nodes".into()));
            }
        }
        Ok(())
    }

    /// Node size: 1 plus up to 99 in proportion to betweenness.
    fn size(&self, i: usize) -> Option<f64> {
        let c = self.centrality?;
        let max = c.max_score();
        let s = c.entries[i].score;
        Some(if max > 0.0 { 1.0 + 99.0 * s / max } else { 1.0 })
    }
}

/// Cluster colours by size rank; communities are numbered largest first.
const PALETTE: [(u8, u8, u8); 12] = [
    (228, 26, 28),
    (55, 126, 184),
    (77, 175, 74),
    (152, 78, 163),
    (255, 127, 0),
    (166, 86, 40),
    (247, 129, 191),
    (23, 190, 207),
    (188, 189, 34),
    (31, 119, 180),
    (214, 39, 40),
    (44, 160, 44),
];
const OTHER_COLOUR: (u8, u8, u8) = (153, 153, 153);

fn colour(community: usize) -> (u8, u8, u8) {
    PALETTE.get(community).copied().unwrap_or(OTHER_COLOUR)
}

pub fn export_gexf(net: &Network, deco: &Decorations, sink: &mut dyn Write) -> Result<()> {
    deco.check(net)?;
    let mut w = String::new();
    let s = &mut w;
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<gexf xmlns=\"http://gexf.net/1.3\" xmlns:viz=\"http://gexf.net/1.3/viz\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://gexf.net/1.3 http://gexf.net/1.3/gexf.xsd\" version=\"1.3\">\n",
    );
    s.push_str("  <meta>\n    <creator>scimap</creator>\n");
    s.push_str(&format!("    <description>{}</description>\n", escape(net.name())));
    s.push_str("  </meta>\n");
    s.push_str("  <graph mode=\"static\" defaultedgetype=\"undirected\">\n");
    s.push_str("    <attributes class=\"node\">\n");
    s.push_str("      <attribute id=\"kind\" title=\"kind\" type=\"string\"/>\n");
    if deco.partition.is_some() {
        s.push_str("      <attribute id=\"cluster\" title=\"cluster\" type=\"integer\"/>\n");
    }
    if deco.centrality.is_some() {
        s.push_str("      <attribute id=\"betweenness\" title=\"betweenness\" type=\"double\"/>\n");
    }
    s.push_str("    </attributes>\n");

    s.push_str("    <nodes>\n");
    for (i, node) in net.nodes().iter().enumerate() {
        s.push_str(&format!(
            "      <node id=\"{}\" label=\"{}\">\n",
            escape(&node.id),
            escape(&node.label)
        ));
        s.push_str("        <attvalues>\n");
        s.push_str(&format!(
            "          <attvalue for=\"kind\" value=\"{}\"/>\n",
            net.kind().as_str()
        ));
        if let Some(p) = deco.partition {
            s.push_str(&format!(
                "          <attvalue for=\"cluster\" value=\"{}\"/>\n",
                p.assignment[i]
            ));
        }
        if let Some(c) = deco.centrality {
            s.push_str(&format!(
                "          <attvalue for=\"betweenness\" value=\"{}\"/>\n",
                c.entries[i].score
            ));
        }
        s.push_str("        </attvalues>\n");
        if let Some(p) = deco.partition {
            let (r, g, b) = colour(p.assignment[i]);
            s.push_str(&format!("        <viz:color r=\"{r}\" g=\"{g}\" b=\"{b}\"/>\n"));
        }
        if let Some(c) = deco.coords {
            let pos = &c.positions[i];
            s.push_str(&format!(
                "        <viz:position x=\"{}\" y=\"{}\" z=\"0\"/>\n",
                pos.x, pos.y
            ));
        }
        if let Some(size) = deco.size(i) {
            s.push_str(&format!("        <viz:size value=\"{size}\"/>\n"));
        }
        s.push_str("      </node>\n");
    }
    s.push_str("    </nodes>\n");

    s.push_str("    <edges>\n");
    for (i, e) in net.edges().iter().enumerate() {
        s.push_str(&format!(
            "      <edge id=\"{i}\" source=\"{}\" target=\"{}\" weight=\"{}\"/>\n",
            escape(&net.node(e.source).id),
            escape(&net.node(e.target).id),
            e.weight
        ));
    }
    s.push_str("    </edges>\n");
    s.push_str("  </graph>\n</gexf>\n");
    sink.write_all(w.as_bytes())?;
    Ok(())
}

/// GraphML. Node ids in GraphML must be XML name tokens, so nodes are
/// numbered `n0..` and the network id is carried in the `d_id` key.
pub fn export_graphml(net: &Network, deco: &Decorations, sink: &mut dyn Write) -> Result<()> {
    deco.check(net)?;
    let mut w = String::new();
    let s = &mut w;
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns \
         http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    let mut keys = vec![("d_id", "node", "id", "string"), ("d_label", "node", "label", "string")];
    if deco.partition.is_some() {
        keys.push(("d_cluster", "node", "cluster", "int"));
    }
    if deco.centrality.is_some() {
        keys.push(("d_betweenness", "node", "betweenness", "double"));
        keys.push(("d_size", "node", "size", "double"));
    }
    if deco.coords.is_some() {
        keys.push(("d_x", "node", "x", "double"));
        keys.push(("d_y", "node", "y", "double"));
    }
    keys.push(("d_weight", "edge", "weight", "double"));
    for (id, target, name, ty) in &keys {
        s.push_str(&format!(
            "  <key id=\"{id}\" for=\"{target}\" attr.name=\"{name}\" attr.type=\"{ty}\"/>\n"
        ));
    }
    s.push_str(&format!(
        "  <graph id=\"{}\" edgedefault=\"undirected\">\n",
        escape(net.kind().as_str())
    ));
    for (i, node) in net.nodes().iter().enumerate() {
        s.push_str(&format!("    <node id=\"n{i}\">\n"));
        let mut data = |key: &str, value: String| {
            s.push_str(&format!("      <data key=\"{key}\">{}</data>\n", escape(&value)));
        };
        data("d_id", node.id.clone());
        data("d_label", node.label.clone());
        if let Some(p) = deco.partition {
            data("d_cluster", p.assignment[i].to_string());
        }
        if let Some(c) = deco.centrality {
            data("d_betweenness", c.entries[i].score.to_string());
            data("d_size", deco.size(i).unwrap_or(1.0).to_string());
        }
        if let Some(c) = deco.coords {
            data("d_x", c.positions[i].x.to_string());
            data("d_y", c.positions[i].y.to_string());
        }
        s.push_str("    </node>\n");
    }
    for (i, e) in net.edges().iter().enumerate() {
        s.push_str(&format!(
            "    <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\">\n      <data key=\"d_weight\">{}</data>\n    </edge>\n",
            e.source, e.target, e.weight
        ));
    }
    s.push_str("  </graph>\n</graphml>\n");
    sink.write_all(w.as_bytes())?;
    Ok(())
}

const EDGE_HEADER: [&str; 3] = ["source", "target", "weight"];

/// Edge list with a trailing node block so isolated nodes, labels and
/// attributes survive the round trip:
///
/// ```text
/// source,target,weight
/// a,b,2
/// #network,<name>,<kind>
/// #node,<id>,<label>[,<key>,<value>]...
/// ```
///
/// Weights are written in shortest round-trip form, so import is exact.
pub fn export_edgelist_csv(net: &Network, sink: &mut dyn Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(sink);
    w.write_record(EDGE_HEADER)?;
    for e in net.edges() {
        w.write_record([
            net.node(e.source).id.as_str(),
            net.node(e.target).id.as_str(),
            &e.weight.to_string(),
        ])?;
    }
    w.write_record(["#network", net.name(), net.kind().as_str()])?;
    for node in net.nodes() {
        let mut row = vec!["#node", node.id.as_str(), node.label.as_str()];
        for (k, v) in &node.attributes {
            row.push(k);
            row.push(v);
        }
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an edge list written by [`export_edgelist_csv`] or any plain
/// `source,target,weight` file. Nodes absent from the node block are created
/// with their id as label. Any malformed row is fatal and names its line.
pub fn import_edgelist_csv(source: impl Read) -> Result<Network> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(source);
    let mut name = String::from("network");
    let mut kind = NodeKind::Keyword;
    let mut nodes: BTreeMap<String, Node> = BTreeMap::new();
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    let mut seen_pairs = HashSet::new();
    let mut header_seen = false;

    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |reason: String| Error::Line { line, reason };
        if !header_seen {
            let fields: Vec<&str> = rec.iter().map(str::trim).collect();
            let fields: Vec<String> = fields
                .iter()
                .map(|f| f.trim_start_matches('\u{feff}').to_lowercase())
                .collect();
            if fields != EDGE_HEADER {
                return Err(bad("expected header source,target,weight".into()));
            }
            header_seen = true;
            continue;
        }
        match rec.get(0) {
            Some("#network") => {
                if rec.len() != 3 {
                    return Err(bad("#network needs name and kind".into()));
                }
                name = rec[1].to_string();
                kind = NodeKind::parse(&rec[2]).ok_or_else(|| bad(format!("unknown node kind {:?}", &rec[2])))?;
            }
            Some("#node") => {
                if rec.len() < 3 || rec.len() % 2 == 0 {
                    return Err(bad("#node needs id, label and key/value pairs".into()));
                }
                let mut node = Node::new(&rec[1], &rec[2]);
                for i in (3..rec.len()).step_by(2) {
                    node.attributes.insert(rec[i].to_string(), rec[i + 1].to_string());
                }
                if nodes.insert(node.id.clone(), node).is_some() {
                    return Err(bad(format!("node {:?} listed twice", &rec[1])));
                }
            }
            _ => {
                if rec.len() == 1 && rec[0].trim().is_empty() {
                    continue;
                }
                if rec.len() != 3 {
                    return Err(bad(format!("expected 3 fields, found {}", rec.len())));
                }
                let (u, v) = (rec[0].to_string(), rec[1].to_string());
                if u.is_empty() || v.is_empty() {
                    return Err(bad("empty endpoint".into()));
                }
                if u == v {
                    return Err(bad(format!("self-loop on {u:?}")));
                }
                let weight: f64 = rec[2]
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("invalid weight {:?}", &rec[2])))?;
                if !(weight.is_finite() && weight > 0.0) {
                    return Err(bad(format!("weight must be positive, found {weight}")));
                }
                let key = if u < v {
                    (u.clone(), v.clone())
                } else {
                    (v.clone(), u.clone())
                };
                if !seen_pairs.insert(key) {
                    return Err(bad(format!("duplicate edge {u:?}-{v:?}")));
                }
                edges.push((u, v, weight));
            }
        }
    }
    if !header_seen {
        return Err(Error::Line {
            line: 1,
            reason: "expected header source,target,weight".into(),
        });
    }
    for (u, v, _) in &edges {
        for id in [u, v] {
            nodes
                .entry(id.clone())
                .or_insert_with(|| Node::new(id.as_str(), id.as_str()));
        }
    }
    Network::from_parts(name, kind, nodes.into_values().collect(), edges)
}

pub fn write_partition_csv(net: &Network, partition: &Partition, sink: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["id", "label", "community"])?;
    for (node, c) in net.nodes().iter().zip(&partition.assignment) {
        w.write_record([node.id.as_str(), node.label.as_str(), &c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `id,label,community` rows and rebuilds the partition on `net`.
pub fn read_partition_csv(net: &Network, source: impl Read, resolution: f64, seed: u64) -> Result<Partition> {
    let mut r = csv::Reader::from_reader(source);
    let mut map = HashMap::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let id = rec.get(0).ok_or(Error::MissingColumn("id"))?;
        let c = rec
            .get(2)
            .and_then(|c| c.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Line {
                line,
                reason: "invalid community".into(),
            })?;
        map.insert(id.to_string(), c);
    }
    Partition::from_map(net, &map, resolution, seed)
}

pub fn write_centrality_csv(centrality: &CentralityVector, sink: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["id", "label", "betweenness"])?;
    for e in &centrality.entries {
        w.write_record([e.id.as_str(), e.label.as_str(), &e.score.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `id,label,betweenness` rows back, reordered to match `net`.
pub fn read_centrality_csv(
    net: &Network,
    source: impl Read,
    normalized: bool,
    weighted: bool,
) -> Result<CentralityVector> {
    let mut r = csv::Reader::from_reader(source);
    let mut scores = HashMap::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let score = rec
            .get(2)
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::Line {
                line,
                reason: "invalid score".into(),
            })?;
        scores.insert(rec[0].to_string(), score);
    }
    let entries = net
        .nodes()
        .iter()
        .map(|n| {
            scores
                .get(&n.id)
                .map(|&score| CentralityEntry {
                    id: n.id.clone(),
                    label: n.label.clone(),
                    score,
                })
                .ok_or_else(|| Error::InvalidArgument(format!("node {:?} has no centrality", n.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CentralityVector {
        entries,
        normalized,
        weighted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;

    fn to_string(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    fn labelled() -> Network {
        let mut a = Node::new("a&b", "A <&> B");
        a.attributes.insert("year".into(), "2015".into());
        let nodes = vec![a, Node::new("c,d", "C \"quoted\""), Node::new("lonely", "Lonely")];
        Network::from_parts("demo", NodeKind::Institution, nodes, [("a&b", "c,d", 0.1 + 0.2)]).unwrap()
    }

    #[test]
    fn edgelist_round_trip_keeps_isolates_and_attributes() {
        let net = labelled();
        let text = to_string(|b| export_edgelist_csv(&net, b));
        assert!(text.starts_with("source,target,weight\n"));
        let back = import_edgelist_csv(text.as_bytes()).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.weight("a&b", "c,d"), Some(0.1 + 0.2));
    }

    #[test]
    fn plain_edgelist_without_node_block() {
        let net = import_edgelist_csv("source,target,weight\nx,y,2\ny,z,1.5\n".as_bytes()).unwrap();
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.node(0).label, "x");
    }

    #[test]
    fn malformed_rows_name_their_line() {
        for (text, line) in [
            ("source,target,weight\na,b,1\nb,c,-2\n", 3),
            ("source,target,weight\na,b,1\nb,c\n", 3),
            ("source,target,weight\na,b,zero\n", 2),
            ("source,target,weight\na,b,1\nb,a,1\n", 3),
            ("source,target,weight\na,a,1\n", 2),
            ("from,to\n", 1),
        ] {
            match import_edgelist_csv(text.as_bytes()) {
                Err(Error::Line { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn header_only_file_is_an_empty_network() {
        let net = import_edgelist_csv("source,target,weight\n".as_bytes()).unwrap();
        assert_eq!(net.node_count(), 0);
    }

    #[test]
    fn gexf_escapes_and_decorates() {
        let net = labelled();
        let p = Partition::from_assignment(&net, &[0, 0, 1], 1.0, 1).unwrap();
        let text = to_string(|b| {
            export_gexf(
                &net,
                &Decorations {
                    partition: Some(&p),
                    ..Decorations::default()
                },
                b,
            )
        });
        assert!(text.contains("label=\"A &lt;&amp;&gt; B\""));
        assert!(text.contains("<attvalue for=\"cluster\" value=\"1\"/>"));
        assert!(!text.contains("viz:position"));
    }

    #[test]
    fn mismatched_decorations_are_rejected() {
        let net = path(3);
        let other = path(4);
        let p = Partition::from_assignment(&other, &[0, 0, 1, 1], 1.0, 1).unwrap();
        let deco = Decorations {
            partition: Some(&p),
            ..Decorations::default()
        };
        assert!(export_gexf(&net, &deco, &mut Vec::new()).is_err());
        assert!(export_graphml(&net, &deco, &mut Vec::new()).is_err());
    }

    #[test]
    fn graphml_carries_weights() {
        let net = from_edges(3, &[(0, 1, 2.5), (1, 2, 1.0)]);
        let text = to_string(|b| export_graphml(&net, &Decorations::default(), b));
        assert!(text.contains("<data key=\"d_weight\">2.5</data>"));
        assert_eq!(text.matches("<edge ").count(), 2);
    }

    #[test]
    fn side_files_round_trip() {
        let net = barbell(3);
        let p = Partition::from_assignment(&net, &[0, 0, 0, 1, 1, 1], 1.0, 9).unwrap();
        let text = to_string(|b| write_partition_csv(&net, &p, b));
        assert_eq!(read_partition_csv(&net, text.as_bytes(), 1.0, 9).unwrap(), p);

        let c = crate::metrics::betweenness(&net, false, true).unwrap();
        let text = to_string(|b| write_centrality_csv(&c, b));
        assert_eq!(read_centrality_csv(&net, text.as_bytes(), true, false).unwrap(), c);
    }
}
