use std::collections::HashMap;
use std::io::Read;

use crate::error::Result;
use crate::text::{collapse_whitespace, strip_diacritics};

pub const UNKNOWN_INSTITUTION: &str = "unknown institution";

/// Exact-match substitutions applied after institution normalization,
/// e.g. `mit -> massachusetts institute of technology`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasTable {
    map: HashMap<String, String>,
}

impl AliasTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Both sides are normalized, so `"MIT"` and `"mit "` are the same key.
    pub fn insert(&mut self, raw: &str, canonical: &str) {
        self.map.insert(base_normalize(raw), base_normalize(canonical));
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Reads a two-column `raw,canonical` CSV. A first row of exactly
    /// `raw,canonical` is treated as a header.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut table = AliasTable::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let (raw, canonical) = (&rec[0], rec.get(1).unwrap_or(""));
            if i == 0 && raw.eq_ignore_ascii_case("raw") && canonical.eq_ignore_ascii_case("canonical") {
                continue;
            }
            table.insert(raw, canonical);
        }
        Ok(table)
    }

    fn resolve(&self, key: String) -> String {
        self.map.get(&key).cloned().unwrap_or(key)
    }
}

/// Canonical institution name: lowercase, diacritics removed, whitespace
/// collapsed, trailing parenthesized acronyms removed, then aliased.
///
/// Returns [`UNKNOWN_INSTITUTION`] if nothing is left.
pub fn normalize_institution(raw: &str, aliases: &AliasTable) -> String {
    let base = base_normalize(raw);
    if base.is_empty() {
        return UNKNOWN_INSTITUTION.to_string();
    }
    aliases.resolve(base)
}

fn base_normalize(raw: &str) -> String {
    let mut s = collapse_whitespace(&strip_diacritics(raw).to_lowercase());
    loop {
        let trimmed = s.trim_end_matches(|c: char| c == '.' || c == ',' || c.is_whitespace());
        if trimmed.ends_with(')') {
            if let Some(open) = trimmed.rfind('(') {
                s = trimmed[..open].to_string();
                continue;
            }
        }
        s = trimmed.to_string();
        break;
    }
    s
}
