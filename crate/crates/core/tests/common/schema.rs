//! Structural validators for GEXF 1.3 and GraphML, covering the parts of
//! each XSD that our writers use: namespaces, element order, required
//! attributes, enumerations, typed values and id references.

use std::collections::{HashMap, HashSet};

use roxmltree::{Document, Node};

const GEXF_NS: &str = "http://gexf.net/1.3";
const VIZ_NS: &str = "http://gexf.net/1.3/viz";
const GRAPHML_NS: &str = "http://graphml.graphdrawing.org/xmlns";

#[derive(Debug, PartialEq)]
pub struct Counts {
    pub nodes: usize,
    pub edges: usize,
}

type Check<T = ()> = Result<T, String>;

fn elements<'a, 'i>(n: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> {
    n.children().filter(|c| c.is_element())
}

fn req<'a>(n: Node<'a, '_>, attr: &str) -> Check<&'a str> {
    n.attribute(attr)
        .ok_or_else(|| format!("<{}> missing attribute {attr}", n.tag_name().name()))
}

fn is(n: Node, ns: &str, name: &str) -> bool {
    n.tag_name().namespace() == Some(ns) && n.tag_name().name() == name
}

fn typed(value: &str, ty: &str) -> bool {
    match ty {
        "integer" | "int" | "long" => value.parse::<i64>().is_ok(),
        "double" | "float" => value.parse::<f64>().is_ok_and(f64::is_finite),
        "boolean" => matches!(value, "true" | "false"),
        "string" | "liststring" | "anyURI" => true,
        _ => false,
    }
}

fn is_nmtoken(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '.' | '-' | '_' | ':'))
}

pub fn validate_gexf(xml: &str) -> Check<Counts> {
    let doc = Document::parse(xml).map_err(|e| e.to_string())?;
    let root = doc.root_element();
    if !is(root, GEXF_NS, "gexf") {
        return Err("root is not gexf in the 1.3 namespace".into());
    }
    if req(root, "version")? != "1.3" {
        return Err("gexf version must be 1.3".into());
    }
    let kids: Vec<Node> = elements(root).collect();
    let graph = match kids.as_slice() {
        [meta, g] if is(*meta, GEXF_NS, "meta") && is(*g, GEXF_NS, "graph") => *g,
        [g] if is(*g, GEXF_NS, "graph") => *g,
        _ => return Err("gexf must hold [meta] graph".into()),
    };
    if let Some(t) = graph.attribute("defaultedgetype") {
        if !matches!(t, "directed" | "undirected" | "mutual") {
            return Err(format!("bad defaultedgetype {t}"));
        }
    }
    if let Some(m) = graph.attribute("mode") {
        if !matches!(m, "static" | "dynamic") {
            return Err(format!("bad mode {m}"));
        }
    }

    let mut declared: HashMap<String, String> = HashMap::new();
    let mut stage = 0;
    let mut node_ids = HashSet::new();
    let mut counts = Counts { nodes: 0, edges: 0 };
    for section in elements(graph) {
        match section.tag_name().name() {
            "attributes" if stage == 0 => {
                if !matches!(req(section, "class")?, "node" | "edge") {
                    return Err("attributes class must be node or edge".into());
                }
                for a in elements(section) {
                    if !is(a, GEXF_NS, "attribute") {
                        return Err("attributes may only hold attribute".into());
                    }
                    let ty = req(a, "type")?;
                    if !matches!(
                        ty,
                        "integer" | "long" | "double" | "float" | "boolean" | "string" | "liststring" | "anyURI"
                    ) {
                        return Err(format!("unknown attribute type {ty}"));
                    }
                    req(a, "title")?;
                    if declared.insert(req(a, "id")?.to_string(), ty.to_string()).is_some() {
                        return Err("duplicate attribute id".into());
                    }
                }
            }
            "nodes" if stage <= 1 => {
                stage = 2;
                for node in elements(section) {
                    if !is(node, GEXF_NS, "node") {
                        return Err("nodes may only hold node".into());
                    }
                    if !node_ids.insert(req(node, "id")?.to_string()) {
                        return Err("duplicate node id".into());
                    }
                    check_gexf_node(node, &declared)?;
                    counts.nodes += 1;
                }
            }
            "edges" if stage == 2 => {
                stage = 3;
                let mut edge_ids = HashSet::new();
                for edge in elements(section) {
                    if !is(edge, GEXF_NS, "edge") {
                        return Err("edges may only hold edge".into());
                    }
                    if !edge_ids.insert(req(edge, "id")?.to_string()) {
                        return Err("duplicate edge id".into());
                    }
                    for end in ["source", "target"] {
                        if !node_ids.contains(req(edge, end)?) {
                            return Err(format!("edge {end} is not a node"));
                        }
                    }
                    if let Some(w) = edge.attribute("weight") {
                        if !typed(w, "double") {
                            return Err(format!("bad weight {w}"));
                        }
                    }
                    counts.edges += 1;
                }
            }
            other => return Err(format!("unexpected <{other}> in graph")),
        }
    }
    Ok(counts)
}

fn check_gexf_node(node: Node, declared: &HashMap<String, String>) -> Check {
    for child in elements(node) {
        let name = child.tag_name().name();
        if is(child, GEXF_NS, "attvalues") {
            for v in elements(child) {
                let key = req(v, "for")?;
                let ty = declared
                    .get(key)
                    .ok_or_else(|| format!("attvalue for undeclared {key}"))?;
                if !typed(req(v, "value")?, ty) {
                    return Err(format!("attvalue {key} is not {ty}"));
                }
            }
        } else if child.tag_name().namespace() == Some(VIZ_NS) {
            match name {
                "color" => {
                    for c in ["r", "g", "b"] {
                        if req(child, c)?.parse::<u8>().is_err() {
                            return Err("colour channel outside 0..255".into());
                        }
                    }
                }
                "position" => {
                    for c in ["x", "y", "z"] {
                        if let Some(v) = child.attribute(c) {
                            if !typed(v, "float") {
                                return Err(format!("bad position {c}"));
                            }
                        }
                    }
                }
                "size" => {
                    let v: f64 = req(child, "value")?.parse().map_err(|_| "bad size")?;
                    if !(v >= 0.0) {
                        return Err("negative size".into());
                    }
                }
                _ => return Err(format!("unexpected viz:{name}")),
            }
        } else {
            return Err(format!("unexpected <{name}> in node"));
        }
    }
    Ok(())
}

pub fn validate_graphml(xml: &str) -> Check<Counts> {
    let doc = Document::parse(xml).map_err(|e| e.to_string())?;
    let root = doc.root_element();
    if !is(root, GRAPHML_NS, "graphml") {
        return Err("root is not graphml".into());
    }
    let mut keys: HashMap<String, (String, String)> = HashMap::new();
    let mut graph = None;
    for child in elements(root) {
        if is(child, GRAPHML_NS, "key") {
            if graph.is_some() {
                return Err("key after graph".into());
            }
            let target = req(child, "for")?;
            if !matches!(target, "node" | "edge" | "graph" | "all") {
                return Err(format!("bad key target {target}"));
            }
            let ty = req(child, "attr.type")?;
            if !matches!(ty, "boolean" | "int" | "long" | "float" | "double" | "string") {
                return Err(format!("bad key type {ty}"));
            }
            req(child, "attr.name")?;
            let id = req(child, "id")?;
            if !is_nmtoken(id) || keys.insert(id.into(), (target.into(), ty.into())).is_some() {
                return Err(format!("bad or duplicate key id {id}"));
            }
        } else if is(child, GRAPHML_NS, "graph") {
            if graph.replace(child).is_some() {
                return Err("more than one graph".into());
            }
        } else {
            return Err(format!("unexpected <{}>", child.tag_name().name()));
        }
    }
    let graph = graph.ok_or("no graph")?;
    if !matches!(req(graph, "edgedefault")?, "directed" | "undirected") {
        return Err("bad edgedefault".into());
    }
    let data_ok = |el: Node, target: &str| -> Check {
        for d in elements(el) {
            if !is(d, GRAPHML_NS, "data") {
                return Err(format!("unexpected <{}>", d.tag_name().name()));
            }
            let key = req(d, "key")?;
            let (for_, ty) = keys.get(key).ok_or_else(|| format!("undeclared key {key}"))?;
            if for_ != target && for_ != "all" {
                return Err(format!("key {key} is not for {target}"));
            }
            if !typed(d.text().unwrap_or(""), ty) {
                return Err(format!("data {key} is not {ty}"));
            }
        }
        Ok(())
    };
    let mut node_ids = HashSet::new();
    let mut edge_ids = HashSet::new();
    let mut counts = Counts { nodes: 0, edges: 0 };
    let mut seen_edge = false;
    for el in elements(graph) {
        if is(el, GRAPHML_NS, "node") {
            if seen_edge {
                // Allowed by the schema, but our writer never interleaves.
                return Err("node after edge".into());
            }
            let id = req(el, "id")?;
            if !is_nmtoken(id) || !node_ids.insert(id.to_string()) {
                return Err(format!("bad or duplicate node id {id}"));
            }
            data_ok(el, "node")?;
            counts.nodes += 1;
        } else if is(el, GRAPHML_NS, "edge") {
            seen_edge = true;
            if let Some(id) = el.attribute("id") {
                if !edge_ids.insert(id.to_string()) {
                    return Err("duplicate edge id".into());
                }
            }
            for end in ["source", "target"] {
                if !node_ids.contains(req(el, end)?) {
                    return Err(format!("edge {end} is not a node"));
                }
            }
            data_ok(el, "edge")?;
            counts.edges += 1;
        } else {
            return Err(format!("unexpected <{}> in graph", el.tag_name().name()));
        }
    }
    Ok(counts)
}
