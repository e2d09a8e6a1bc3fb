//! Minimal BibTeX reader.
//!
//! Understands `@type{key, field = {value} | "value" | bare, ...}` with `#`
//! concatenation. `@comment`, `@preamble` and `@string` blocks are skipped;
//! string macros are not expanded. Only `title`, `author`, `year`,
//! `keywords`, `journal` and `doi` reach the record.

use std::collections::{BTreeMap, HashSet};

use super::{AuthorRef, BibRecord, Corpus, DocType, Provenance, Rejection};
use crate::error::{Error, Result};
use crate::text::{collapse_whitespace, normalize_keyword};

struct RawEntry {
    entry_type: String,
    key: String,
    fields: BTreeMap<String, String>,
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn syntax(&self, reason: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            reason: reason.into(),
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_alphanumeric() || "_-:.+/'".contains(c))
        {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.syntax(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.syntax(format!("expected {want:?}, found end of input"))),
        }
    }

    /// Consumes `{ ... }` starting at an opening brace and returns the inner
    /// text.
    fn braced(&mut self) -> Result<&'a str> {
        let open = self.pos;
        self.expect('{')?;
        let start = self.pos;
        let mut depth = 1usize;
        while let Some(c) = self.bump() {
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(&self.src[start..self.pos - 1]);
                    }
                }
                _ => {}
            }
        }
        Err(Error::UnbalancedBraces { offset: open })
    }

    fn quoted(&mut self) -> Result<&'a str> {
        let open = self.pos;
        self.expect('"')?;
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(c) = self.bump() {
            match c {
                '{' => depth += 1,
                '}' if depth == 0 => return Err(Error::UnbalancedBraces { offset: self.pos - 1 }),
                '}' => depth -= 1,
                '"' if depth == 0 => return Ok(&self.src[start..self.pos - 1]),
                _ => {}
            }
        }
        if depth > 0 {
            Err(Error::UnbalancedBraces { offset: open })
        } else {
            Err(Error::Syntax {
                offset: open,
                reason: "unterminated quoted value".into(),
            })
        }
    }

    fn value(&mut self) -> Result<String> {
        let mut out = String::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('{') => out.push_str(self.braced()?),
                Some('"') => out.push_str(self.quoted()?),
                Some(c) if c.is_alphanumeric() => out.push_str(self.ident()),
                Some(c) => return Err(self.syntax(format!("unexpected {c:?} in field value"))),
                None => return Err(self.syntax("unexpected end of input in field value")),
            }
            self.skip_ws();
            if self.peek() == Some('#') {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    /// Parses the body after `@type{`, up to and including the closing brace.
    fn entry_body(&mut self, open: usize) -> Result<(String, BTreeMap<String, String>)> {
        self.skip_ws();
        let key_start = self.pos;
        while self.peek().is_some_and(|c| c != ',' && c != '}') {
            if self.peek() == Some('{') {
                return Err(self.syntax("unexpected '{' in entry key"));
            }
            self.bump();
        }
        let key = self.src[key_start..self.pos].trim().to_string();
        let mut fields = BTreeMap::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('}') => {
                    self.bump();
                    return Ok((key, fields));
                }
                Some(',') => {
                    self.bump();
                }
                None => return Err(Error::UnbalancedBraces { offset: open }),
                Some(_) => {}
            }
            self.skip_ws();
            if self.peek() == Some('}') {
                continue;
            }
            if self.peek().is_none() {
                return Err(Error::UnbalancedBraces { offset: open });
            }
            let name = self.ident().to_lowercase();
            if name.is_empty() {
                return Err(self.syntax("expected field name"));
            }
            self.skip_ws();
            self.expect('=')?;
            let v = self.value()?;
            fields.insert(name, v);
        }
    }
}

fn raw_entries(src: &str) -> Result<Vec<RawEntry>> {
    let mut sc = Scanner { src, pos: 0 };
    let mut out = Vec::new();
    while let Some(at) = sc.src[sc.pos..].find('@') {
        sc.pos += at + 1;
        let entry_type = sc.ident().to_lowercase();
        sc.skip_ws();
        let open = sc.pos;
        if sc.peek() != Some('{') {
            // Stray '@' in free text between entries.
            continue;
        }
        match entry_type.as_str() {
            "comment" | "preamble" | "string" => {
                sc.braced()?;
            }
            _ => {
                sc.bump();
                let (key, fields) = sc.entry_body(open)?;
                out.push(RawEntry {
                    entry_type,
                    key,
                    fields,
                });
            }
        }
    }
    Ok(out)
}

/// Parses BibTeX text. Unbalanced braces are fatal; entries that cannot
/// become a record (missing title or key, bad year, duplicate key) are
/// rejected with a reason.
pub fn parse_bibtex(stream: &[u8]) -> Result<Corpus> {
    let src = std::str::from_utf8(stream).map_err(|e| Error::Syntax {
        offset: e.valid_up_to(),
        reason: "invalid UTF-8".into(),
    })?;
    let entries = raw_entries(src)?;

    let mut records = Vec::new();
    let mut rejections = Vec::new();
    let mut keys = HashSet::new();
    for (i, e) in entries.iter().enumerate() {
        let row = i + 1;
        match record_from_entry(e) {
            Ok(r) if !keys.insert(r.record_id.clone()) => rejections.push(Rejection {
                row,
                reason: format!("duplicate key {}", r.record_id),
            }),
            Ok(r) => records.push(r),
            Err(reason) => rejections.push(Rejection { row, reason }),
        }
    }
    let corpus = Corpus {
        provenance: Provenance {
            sources: vec!["<bibtex>".into()],
            parsed_at: None,
            read: entries.len(),
            kept: records.len(),
            rejected: rejections.len(),
            rejections,
        },
        records,
    };
    corpus.validate()?;
    Ok(corpus)
}

fn clean(v: &str) -> String {
    collapse_whitespace(&v.replace(['{', '}'], ""))
}

fn record_from_entry(e: &RawEntry) -> Result<BibRecord, String> {
    if e.key.is_empty() {
        return Err("missing key".into());
    }
    let title = e.fields.get("title").map(|t| clean(t)).unwrap_or_default();
    if title.is_empty() {
        return Err("missing title".into());
    }
    let mut rec = BibRecord::new(e.key.clone(), title);
    rec.doc_type = DocType::from_bibtex(&e.entry_type);
    if let Some(y) = e.fields.get("year") {
        let y = clean(y);
        if !y.is_empty() {
            rec.year = y.parse().map_err(|_| format!("invalid year {y:?}"))?;
        }
    }
    if let Some(a) = e.fields.get("author") {
        rec.authors = split_authors(&clean(a)).into_iter().map(AuthorRef::new).collect();
    }
    if let Some(k) = e.fields.get("keywords") {
        rec.author_keywords = clean(k)
            .split([',', ';'])
            .map(normalize_keyword)
            .filter(|k| !k.is_empty())
            .collect();
    }
    if let Some(j) = e.fields.get("journal") {
        rec.source_title = clean(j);
    }
    rec.doi = e.fields.get("doi").map(|d| clean(d)).filter(|d| !d.is_empty());
    Ok(rec)
}

/// Splits on the standalone word `and`.
fn split_authors(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur: Vec<&str> = Vec::new();
    for tok in s.split_whitespace() {
        if tok.eq_ignore_ascii_case("and") {
            if !cur.is_empty() {
                out.push(cur.join(" "));
                cur.clear();
            }
        } else {
            cur.push(tok);
        }
    }
    if !cur.is_empty() {
        out.push(cur.join(" "));
    }
    out
}
