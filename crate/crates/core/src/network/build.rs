use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Network, Node, NodeKind};
use crate::corpus::{normalize_institution, AliasTable, BibRecord, Corpus};
use crate::error::{Error, Result};
use crate::text::{collapse_whitespace, normalize_keyword, normalize_loose, strip_diacritics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntityLevel {
    #[default]
    Author,
    Institution,
}

/// How a document's co-appearances are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Counting {
    /// Every co-appearing pair gains 1 per document.
    #[default]
    Full,
    /// Every pair gains `1 / (k - 1)` where `k` is the number of distinct
    /// entities on the document.
    Fractional,
}

#[derive(Debug, Clone, Default)]
pub struct CowordOptions {
    /// Ignore index keywords.
    pub author_keywords_only: bool,
    /// Keywords to leave out, compared after keyword normalization.
    pub stoplist: BTreeSet<String>,
}

impl CowordOptions {
    pub fn with_stoplist<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.stoplist = words
            .into_iter()
            .map(|w| normalize_keyword(w.as_ref()))
            .filter(|w| !w.is_empty())
            .collect();
        self
    }
}

/// Nodes keyed by id, each remembering the raw spellings it was built from
/// and how many documents mention it.
#[derive(Default)]
struct Entities {
    seen: BTreeMap<String, (BTreeSet<String>, usize)>,
}

impl Entities {
    fn note(&mut self, id: &str, raw: &str) {
        let e = self.seen.entry(id.to_string()).or_default();
        e.0.insert(raw.to_string());
    }

    fn count_document(&mut self, id: &str) {
        if let Some(e) = self.seen.get_mut(id) {
            e.1 += 1;
        }
    }

    /// Label = lexicographically smallest raw spelling, so the result does not
    /// depend on record order.
    fn into_nodes(self) -> Vec<Node> {
        self.seen
            .into_iter()
            .map(|(id, (raws, docs))| {
                let label = raws.into_iter().next().unwrap_or_else(|| id.clone());
                let mut node = Node::new(id, label);
                node.attributes.insert("doc_count".into(), docs.to_string());
                node
            })
            .collect()
    }
}

/// Pair weights accumulated as contribution counts per document size, so the
/// final floating-point sum is independent of document order.
#[derive(Default)]
struct PairWeights {
    pairs: BTreeMap<(String, String), BTreeMap<usize, u64>>,
}

impl PairWeights {
    /// Adds every unordered pair of `members` (sorted, distinct).
    fn add_clique(&mut self, members: &[&String]) {
        let k = members.len();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                *self
                    .pairs
                    .entry(((*a).clone(), (*b).clone()))
                    .or_default()
                    .entry(k)
                    .or_default() += 1;
            }
        }
    }

    fn into_edges(self, counting: Counting) -> Vec<(String, String, f64)> {
        self.pairs
            .into_iter()
            .map(|((a, b), by_size)| {
                let w = by_size
                    .iter()
                    .map(|(&k, &count)| match counting {
                        Counting::Full => count as f64,
                        Counting::Fractional => count as f64 / (k - 1) as f64,
                    })
                    .sum();
                (a, b, w)
            })
            .collect()
    }
}

fn require_records(corpus: &Corpus) -> Result<()> {
    if corpus.is_empty() {
        return Err(Error::InvalidArgument("corpus has no records".into()));
    }
    Ok(())
}

/// Co-authorship network at author or institution level.
///
/// Node ids are normalized names (authors: lowercase, no diacritics,
/// collapsed whitespace; institutions: [`normalize_institution`]). An entity
/// listed twice on one document counts once for that document.
pub fn build_coauthorship(
    corpus: &Corpus,
    level: EntityLevel,
    counting: Counting,
    aliases: &AliasTable,
) -> Result<Network> {
    require_records(corpus)?;
    let mut entities = Entities::default();
    let mut pairs = PairWeights::default();

    for rec in &corpus.records {
        let mut on_doc: BTreeSet<String> = BTreeSet::new();
        for author in &rec.authors {
            match level {
                EntityLevel::Author => {
                    let raw = collapse_whitespace(&author.name);
                    let id = strip_diacritics(&raw).to_lowercase();
                    entities.note(&id, &raw);
                    on_doc.insert(id);
                }
                EntityLevel::Institution => {
                    for aff in &author.affiliations {
                        let raw = collapse_whitespace(aff);
                        if raw.is_empty() {
                            continue;
                        }
                        let id = normalize_institution(&raw, aliases);
                        entities.note(&id, &raw);
                        on_doc.insert(id);
                    }
                }
            }
        }
        for id in &on_doc {
            entities.count_document(id);
        }
        let members: Vec<&String> = on_doc.iter().collect();
        if members.len() >= 2 {
            pairs.add_clique(&members);
        }
    }

    let (name, kind) = match level {
        EntityLevel::Author => ("co-authorship (authors)", NodeKind::Author),
        EntityLevel::Institution => ("co-authorship (institutions)", NodeKind::Institution),
    };
    Network::from_parts(name, kind, entities.into_nodes(), pairs.into_edges(counting))
}

/// Short document label in the style `Hall S., 2009, Prog Hum Geogr`.
pub(crate) fn document_label(rec: &BibRecord) -> String {
    let mut parts = vec![rec
        .authors
        .first()
        .map(|a| a.name.clone())
        .unwrap_or_else(|| "Anonymous".into())];
    if rec.year != 0 {
        parts.push(rec.year.to_string());
    }
    if !rec.source_title.is_empty() {
        parts.push(rec.source_title.clone());
    } else {
        parts.push(rec.title.clone());
    }
    parts.join(", ")
}

fn document_node(rec: &BibRecord) -> Node {
    let mut node = Node::new(rec.record_id.clone(), document_label(rec));
    node.attributes.insert("title".into(), rec.title.clone());
    node.attributes.insert("year".into(), rec.year.to_string());
    node.attributes
        .insert("references".into(), rec.references.len().to_string());
    node
}

/// Bibliographic coupling: one node per document, edge weight = number of
/// shared references (exact match after lowercasing, punctuation stripping
/// and whitespace collapsing). Pairs sharing fewer than `min_shared`
/// references get no edge.
pub fn build_bibliographic_coupling(corpus: &Corpus, min_shared: usize) -> Result<Network> {
    require_records(corpus)?;
    if min_shared == 0 {
        return Err(Error::InvalidArgument("min_shared must be at least 1".into()));
    }
    let mut citing: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, rec) in corpus.records.iter().enumerate() {
        let refs: BTreeSet<String> = rec
            .references
            .iter()
            .map(|r| normalize_loose(r))
            .filter(|r| !r.is_empty())
            .collect();
        for r in refs {
            citing.entry(r).or_default().push(i);
        }
    }

    let mut shared: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for docs in citing.values() {
        for (k, &a) in docs.iter().enumerate() {
            for &b in &docs[k + 1..] {
                *shared.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
    }

    let nodes = corpus.records.iter().map(document_node).collect();
    let edges: Vec<(&str, &str, f64)> = shared
        .into_iter()
        .filter(|&(_, count)| count >= min_shared as u64)
        .map(|((a, b), count)| {
            (
                corpus.records[a].record_id.as_str(),
                corpus.records[b].record_id.as_str(),
                count as f64,
            )
        })
        .collect();
    Network::from_parts("bibliographic coupling", NodeKind::Document, nodes, edges)
}

/// Co-word network: one node per keyword outside the stoplist, edge weight =
/// number of documents listing both keywords.
pub fn build_coword(corpus: &Corpus, options: &CowordOptions) -> Result<Network> {
    require_records(corpus)?;
    let mut entities = Entities::default();
    let mut pairs = PairWeights::default();
    for rec in &corpus.records {
        let words: BTreeSet<String> = if options.author_keywords_only {
            rec.author_keywords.iter().cloned().collect()
        } else {
            rec.keywords().into_iter().map(str::to_string).collect()
        };
        let words: Vec<String> = words
            .into_iter()
            .map(|w| normalize_keyword(&w))
            .filter(|w| !w.is_empty() && !options.stoplist.contains(w))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for w in &words {
            entities.note(w, w);
            entities.count_document(w);
        }
        let members: Vec<&String> = words.iter().collect();
        pairs.add_clique(&members);
    }
    Network::from_parts(
        "co-word",
        NodeKind::Keyword,
        entities.into_nodes(),
        pairs.into_edges(Counting::Full),
    )
}
