//! Scopus-style CSV export reader.

use std::collections::HashMap;
use std::io::Read;

use super::{AuthorRef, BibRecord, Corpus, DocType, Provenance, Rejection};
use crate::error::{Error, Result};
use crate::text::{collapse_whitespace, normalize_keyword};

#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Recorded in the corpus provenance.
    pub source_name: String,
    /// Record ids are `{id_prefix}{row}`; use distinct prefixes when
    /// merging several files.
    pub id_prefix: String,
    pub parsed_at: Option<String>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            source_name: String::from("<stream>"),
            id_prefix: String::from("R"),
            parsed_at: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Column {
    Authors,
    AuthorIds,
    Title,
    Year,
    SourceTitle,
    AuthorKeywords,
    IndexKeywords,
    Affiliations,
    AuthorsWithAffiliations,
    References,
    Doi,
    DocumentType,
}

impl Column {
    fn from_header(h: &str) -> Option<Column> {
        Some(match h.trim().to_lowercase().as_str() {
            "authors" => Column::Authors,
            "author(s) id" => Column::AuthorIds,
            "title" => Column::Title,
            "year" => Column::Year,
            "source title" => Column::SourceTitle,
            "author keywords" => Column::AuthorKeywords,
            "index keywords" => Column::IndexKeywords,
            "affiliations" => Column::Affiliations,
            "authors with affiliations" => Column::AuthorsWithAffiliations,
            "references" => Column::References,
            "doi" => Column::Doi,
            "document type" => Column::DocumentType,
            _ => return None,
        })
    }
}

/// Parses a Scopus CSV export.
///
/// Rows that cannot become a record are listed in
/// `provenance.rejections`; only a missing `Title` header is fatal.
pub fn parse_scopus_csv<R: Read>(stream: R, options: &ParseOptions) -> Result<Corpus> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .has_headers(true)
        .from_reader(stream);

    let headers = rdr.byte_headers()?.clone();
    let mut columns: HashMap<Column, usize> = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        let h = String::from_utf8_lossy(h);
        let h = h.trim_start_matches('\u{feff}');
        if let Some(c) = Column::from_header(h) {
            columns.entry(c).or_insert(i);
        }
    }
    if !columns.contains_key(&Column::Title) {
        return Err(Error::MissingColumn("Title"));
    }

    let mut records = Vec::new();
    let mut rejections = Vec::new();
    let mut read = 0usize;
    for (idx, row) in rdr.byte_records().enumerate() {
        let row_no = idx + 1;
        read += 1;
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                rejections.push(Rejection {
                    row: row_no,
                    reason: format!("malformed row: {e}"),
                });
                continue;
            }
        };
        if row.len() != headers.len() {
            rejections.push(Rejection {
                row: row_no,
                reason: format!("expected {} fields, found {}", headers.len(), row.len()),
            });
            continue;
        }
        let mut fields: HashMap<Column, &str> = HashMap::new();
        let mut bad_utf8 = false;
        for (&col, &i) in &columns {
            match std::str::from_utf8(&row[i]) {
                Ok(s) => {
                    fields.insert(col, s);
                }
                Err(_) => bad_utf8 = true,
            }
        }
        if bad_utf8 {
            rejections.push(Rejection {
                row: row_no,
                reason: "invalid UTF-8".into(),
            });
            continue;
        }
        match record_from_row(&fields, format!("{}{}", options.id_prefix, row_no)) {
            Ok(r) => records.push(r),
            Err(reason) => rejections.push(Rejection { row: row_no, reason }),
        }
    }

    let corpus = Corpus {
        provenance: Provenance {
            sources: vec![options.source_name.clone()],
            parsed_at: options.parsed_at.clone(),
            read,
            kept: records.len(),
            rejected: rejections.len(),
            rejections,
        },
        records,
    };
    corpus.validate()?;
    Ok(corpus)
}

fn record_from_row(fields: &HashMap<Column, &str>, record_id: String) -> Result<BibRecord, String> {
    let get = |c: Column| fields.get(&c).copied().unwrap_or("");

    let title = collapse_whitespace(get(Column::Title));
    if title.is_empty() {
        return Err("empty title".into());
    }
    let year = match get(Column::Year).trim() {
        "" => 0,
        y => y.parse::<i32>().map_err(|_| format!("invalid year {y:?}"))?,
    };

    let mut rec = BibRecord::new(record_id, title);
    rec.year = year;
    rec.doc_type = DocType::from_scopus(get(Column::DocumentType));
    rec.source_title = collapse_whitespace(get(Column::SourceTitle));
    rec.doi = Some(get(Column::Doi).trim().to_string()).filter(|d| !d.is_empty());
    rec.author_keywords = split_list(get(Column::AuthorKeywords))
        .map(|k| normalize_keyword(&k))
        .collect();
    rec.index_keywords = split_list(get(Column::IndexKeywords))
        .map(|k| normalize_keyword(&k))
        .collect();
    rec.references = split_list(get(Column::References)).collect();
    rec.authors = authors_with_affiliations(
        get(Column::Authors),
        get(Column::AuthorsWithAffiliations),
        get(Column::Affiliations),
    );
    Ok(rec)
}

/// Semicolon-separated, trimmed, whitespace-collapsed, empties dropped.
fn split_list(cell: &str) -> impl Iterator<Item = String> + '_ {
    cell.split(';').map(collapse_whitespace).filter(|s| !s.is_empty())
}

/// Pairs authors with institutions.
///
/// `keyed` entries look like `Taylor D., Universidad del Rosario, Bogotá,
/// Colombia`; an entry that does not start with a known author name extends
/// the previous author's list. Authors without a keyed entry fall back to
/// every institution of the shared `Affiliations` column.
fn authors_with_affiliations(authors: &str, keyed: &str, shared: &str) -> Vec<AuthorRef> {
    let mut out: Vec<AuthorRef> = Vec::new();
    for name in split_list(authors) {
        if !out.iter().any(|a| a.name == name) {
            out.push(AuthorRef::new(name));
        }
    }

    let mut keyed_any = vec![false; out.len()];
    let mut last: Option<usize> = None;
    for entry in split_list(keyed) {
        let owner = out.iter().position(|a| {
            entry
                .strip_prefix(a.name.as_str())
                .is_some_and(|rest| rest.is_empty() || rest.starts_with(','))
        });
        let (target, rest) = match owner {
            Some(i) => (Some(i), entry[out[i].name.len()..].trim_start_matches(',').trim()),
            None => (last, entry.as_str()),
        };
        let Some(i) = target else { continue };
        last = Some(i);
        keyed_any[i] = true;
        if let Some((inst, country)) = split_affiliation(rest) {
            push_unique(&mut out[i].affiliations, inst);
            if out[i].country.is_none() {
                out[i].country = country;
            }
        }
    }

    let shared: Vec<(String, Option<String>)> = split_list(shared).filter_map(|e| split_affiliation(&e)).collect();
    for (author, has_keyed) in out.iter_mut().zip(keyed_any) {
        if has_keyed {
            continue;
        }
        for (inst, country) in &shared {
            push_unique(&mut author.affiliations, inst.clone());
            if author.country.is_none() {
                author.country = country.clone();
            }
        }
    }
    out
}

fn push_unique(v: &mut Vec<String>, s: String) {
    if !v.contains(&s) {
        v.push(s);
    }
}

const INSTITUTION_MARKERS: &[&str] = &[
    "univ",
    "institut",
    "college",
    "school",
    "academy",
    "academia",
    "hospital",
    "centre",
    "center",
    "centro",
    "laborator",
    "cnrs",
    "ecole",
    "école",
    "hochschule",
    "polytechn",
    "foundation",
    "fundación",
    "council",
    "ministry",
    "agency",
];

/// Picks the institution segment and the country out of a comma-separated
/// affiliation string. The institution is the first segment that looks like
/// one, otherwise the first segment; the country is the last segment when
/// there are at least two.
fn split_affiliation(aff: &str) -> Option<(String, Option<String>)> {
    let segments: Vec<String> = aff
        .split(',')
        .map(collapse_whitespace)
        .filter(|s| !s.is_empty())
        .collect();
    let first = segments.first()?;
    let inst = segments
        .iter()
        .find(|s| {
            let lower = s.to_lowercase();
            INSTITUTION_MARKERS.iter().any(|m| lower.contains(m))
        })
        .unwrap_or(first)
        .clone();
    let country = (segments.len() >= 2)
        .then(|| segments.last().cloned())
        .flatten()
        .filter(|c| *c != inst);
    Some((inst, country))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "Authors,Title,Year,Source title,Author Keywords,Index Keywords,Authors with affiliations,Affiliations,References,DOI,Document Type\n";

    fn parse(body: &str) -> Corpus {
        parse_scopus_csv(format!("{HEADER}{body}").as_bytes(), &ParseOptions::default()).unwrap()
    }

    #[test]
    fn two_valid_rows() {
        let c = parse(
            "A B.,First title,2020,J,kw1; kw2,,,,r1; r2,10.1/x,Article\n\
             C D.,Second title,2019,J,,,,,,,Review\n",
        );
        assert_eq!(c.len(), 2);
        assert_eq!(c.provenance.read, 2);
        assert_eq!(c.provenance.rejected, 0);
        assert_eq!(c.records[0].references, vec!["r1", "r2"]);
        assert_eq!(c.records[0].doi.as_deref(), Some("10.1/x"));
        assert_eq!(c.records[1].doc_type, DocType::Review);
    }

    #[test]
    fn empty_title_is_rejected_with_reason() {
        let c = parse("A B.,,2020,J,,,,,,,Article\nC D.,Kept,2019,J,,,,,,,Article\n");
        assert_eq!(c.len(), 1);
        assert_eq!(c.provenance.rejected, 1);
        assert_eq!(c.provenance.rejections[0].row, 1);
        assert_eq!(c.provenance.rejections[0].reason, "empty title");
        c.validate().unwrap();
    }

    #[test]
    fn header_only_and_missing_title() {
        let c = parse("");
        assert_eq!(c.len(), 0);
        assert_eq!(c.provenance.read, 0);

        let err = parse_scopus_csv("Authors,Year\nA,2020\n".as_bytes(), &ParseOptions::default());
        assert!(matches!(err, Err(Error::MissingColumn("Title"))));
    }

    #[test]
    fn malformed_rows_are_counted() {
        let c = parse("A B.,T1,20x0,J,,,,,,,Article\nshort,row\n");
        assert_eq!(c.len(), 0);
        assert_eq!(c.provenance.rejected, 2);
        assert!(c.provenance.rejections[0].reason.contains("invalid year"));
        assert!(c.provenance.rejections[1].reason.contains("expected 11 fields"));
    }

    #[test]
    fn case_insensitive_headers_and_bom() {
        let csv = "\u{feff}TITLE,year,Unknown Column\nHello,2001,zzz\n";
        let c = parse_scopus_csv(csv.as_bytes(), &ParseOptions::default()).unwrap();
        assert_eq!(c.records[0].title, "Hello");
        assert_eq!(c.records[0].year, 2001);
    }

    #[test]
    fn keyed_affiliations_follow_authors() {
        let c = parse(
            "Taylor D.; Starr R.,T,2020,J,,,\
             \"Taylor D., Universidad del Rosario, Bogotá, Colombia; California Institute of Technology (CalTech), Pasadena, United States; Starr R., Department of Music, University of Liverpool, Liverpool, United Kingdom\",,,,Article\n",
        );
        let a = &c.records[0].authors;
        assert_eq!(a.len(), 2);
        assert_eq!(
            a[0].affiliations,
            vec![
                "Universidad del Rosario",
                "California Institute of Technology (CalTech)"
            ]
        );
        assert_eq!(a[0].country.as_deref(), Some("Colombia"));
        assert_eq!(a[1].affiliations, vec!["University of Liverpool"]);
    }

    #[test]
    fn shared_affiliations_apply_to_unkeyed_authors() {
        let c = parse("A X.; B Y.,T,2020,J,,,,\"Univ One, City, France; Univ Two, Town, Japan\",,,Article\n");
        for a in &c.records[0].authors {
            assert_eq!(a.affiliations, vec!["Univ One", "Univ Two"]);
            assert_eq!(a.country.as_deref(), Some("France"));
        }
    }
}
