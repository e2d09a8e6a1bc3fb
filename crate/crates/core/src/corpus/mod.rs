//! Bibliographic records: parsing, entity normalization and deduplication.

mod bibtex;
mod dedupe;
mod distance;
mod institution;
mod scopus;

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

pub use bibtex::parse_bibtex;
pub use dedupe::{dedupe, title_similarity};
pub use distance::{damerau_levenshtein, damerau_levenshtein_within};
pub use institution::{normalize_institution, AliasTable, UNKNOWN_INSTITUTION};
pub use scopus::{parse_scopus_csv, ParseOptions};

use crate::error::{Error, Result};

/// Publication category, mirroring the document types of a Scopus export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocType {
    Article,
    Review,
    ConferencePaper,
    Book,
    BookChapter,
    Other,
}

impl DocType {
    /// Maps a Scopus "Document Type" cell.
    pub fn from_scopus(s: &str) -> DocType {
        match s.trim().to_lowercase().as_str() {
            "article" => DocType::Article,
            "review" => DocType::Review,
            "conference paper" => DocType::ConferencePaper,
            "book" => DocType::Book,
            "book chapter" => DocType::BookChapter,
            _ => DocType::Other,
        }
    }

    /// The Scopus spelling of this type.
    pub fn as_scopus(self) -> &'static str {
        match self {
            DocType::Article => "Article",
            DocType::Review => "Review",
            DocType::ConferencePaper => "Conference Paper",
            DocType::Book => "Book",
            DocType::BookChapter => "Book Chapter",
            DocType::Other => "Other",
        }
    }

    /// Maps a BibTeX entry type.
    pub fn from_bibtex(entry_type: &str) -> DocType {
        match entry_type.to_lowercase().as_str() {
            "article" => DocType::Article,
            "inproceedings" | "conference" => DocType::ConferencePaper,
            "book" => DocType::Book,
            _ => DocType::Other,
        }
    }
}

/// One author of a record and the institutions listed for them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRef {
    pub name: String,
    /// Source order is preserved.
    pub affiliations: Vec<String>,
    pub country: Option<String>,
}

impl AuthorRef {
    pub fn new(name: impl Into<String>) -> Self {
        AuthorRef {
            name: name.into(),
            affiliations: Vec::new(),
            country: None,
        }
    }

    pub fn with_affiliations<I, S>(mut self, affiliations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.affiliations = affiliations.into_iter().map(Into::into).collect();
        self
    }
}

/// A single bibliographic document.
///
/// Keywords are stored normalized (lowercase, collapsed whitespace) and
/// split by origin so the co-word builder can restrict itself to author
/// keywords.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BibRecord {
    pub record_id: String,
    pub title: String,
    /// Calendar year, 0 when unknown.
    pub year: i32,
    pub doc_type: DocType,
    pub authors: Vec<AuthorRef>,
    pub author_keywords: BTreeSet<String>,
    pub index_keywords: BTreeSet<String>,
    pub references: Vec<String>,
    pub source_title: String,
    pub doi: Option<String>,
}

impl BibRecord {
    pub fn new(record_id: impl Into<String>, title: impl Into<String>) -> Self {
        BibRecord {
            record_id: record_id.into(),
            title: title.into(),
            year: 0,
            doc_type: DocType::Other,
            authors: Vec::new(),
            author_keywords: BTreeSet::new(),
            index_keywords: BTreeSet::new(),
            references: Vec::new(),
            source_title: String::new(),
            doi: None,
        }
    }

    /// Union of author and index keywords.
    pub fn keywords(&self) -> BTreeSet<&str> {
        self.author_keywords
            .iter()
            .chain(&self.index_keywords)
            .map(String::as_str)
            .collect()
    }
}

/// A row or entry that could not be turned into a record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    /// 1-based data row (CSV) or entry ordinal (BibTeX); 0 when the
    /// rejection happened after parsing (deduplication).
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub sources: Vec<String>,
    /// Only set when the caller supplies one, so corpus files stay
    /// byte-identical across reruns.
    pub parsed_at: Option<String>,
    pub read: usize,
    pub kept: usize,
    pub rejected: usize,
    pub rejections: Vec<Rejection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub records: Vec<BibRecord>,
    pub provenance: Provenance,
}

impl Corpus {
    /// Builds a corpus from already-parsed records; every record counts as
    /// read and kept.
    pub fn from_records(records: Vec<BibRecord>) -> Result<Self> {
        let n = records.len();
        let corpus = Corpus {
            records,
            provenance: Provenance {
                read: n,
                kept: n,
                ..Provenance::default()
            },
        };
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Checks the corpus invariants: unique ids, non-empty titles and
    /// author names, no empty keywords, and read = kept + rejected.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for r in &self.records {
            if !seen.insert(r.record_id.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate record_id {}", r.record_id)));
            }
            if crate::text::collapse_whitespace(&r.title).is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "record {} has an empty title",
                    r.record_id
                )));
            }
            if r.keywords().contains("") {
                return Err(Error::InvalidArgument(format!(
                    "record {} has an empty keyword",
                    r.record_id
                )));
            }
            if r.authors.iter().any(|a| a.name.trim().is_empty()) {
                return Err(Error::InvalidArgument(format!(
                    "record {} has an unnamed author",
                    r.record_id
                )));
            }
        }
        let p = &self.provenance;
        if p.read != p.kept + p.rejected {
            return Err(Error::InvalidArgument(format!(
                "provenance counts disagree: read {} != kept {} + rejected {}",
                p.read, p.kept, p.rejected
            )));
        }
        Ok(())
    }

    /// Appends another corpus, e.g. a second export file. Record ids must
    /// stay unique.
    pub fn extend(&mut self, other: Corpus) -> Result<()> {
        self.records.extend(other.records);
        let p = &mut self.provenance;
        p.sources.extend(other.provenance.sources);
        p.read += other.provenance.read;
        p.kept += other.provenance.kept;
        p.rejected += other.provenance.rejected;
        p.rejections.extend(other.provenance.rejections);
        self.validate()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Corpus = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }
}

/// Outcome of [`dedupe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DedupReport {
    pub threshold_percent: f64,
    pub merged_pairs: Vec<MergedPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedPair {
    pub kept_id: String,
    pub dropped_id: String,
    pub similarity_percent: f64,
}
