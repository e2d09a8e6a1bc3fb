//! String normalization shared by the parsers, the deduplicator and the
//! network builders.

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Trims and collapses every run of whitespace into a single space.
pub fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Lowercase, drop punctuation and collapse whitespace.
///
/// Used for title similarity and reference matching, where case and
/// punctuation differences must not count as edits.
pub fn normalize_loose(s: &str) -> String {
    let stripped: String = s
        .chars()
        .filter(|c| !(c.is_ascii_punctuation() || is_unicode_punctuation(*c)))
        .flat_map(char::to_lowercase)
        .collect();
    collapse_whitespace(&stripped)
}

/// Lowercased, whitespace-collapsed keyword. Empty input stays empty.
pub fn normalize_keyword(s: &str) -> String {
    collapse_whitespace(&s.to_lowercase())
}

/// Removes diacritics via NFKD decomposition.
pub fn strip_diacritics(s: &str) -> String {
    s.nfkd().filter(|c| !is_combining_mark(*c)).collect()
}

fn is_unicode_punctuation(c: char) -> bool {
    matches!(
        c,
        '\u{2010}'..='\u{2027}' | '\u{2030}'..='\u{205E}' | '\u{00A1}' | '\u{00A7}' | '\u{00AB}'
            | '\u{00B6}' | '\u{00B7}' | '\u{00BB}' | '\u{00BF}' | '\u{3001}'..='\u{3003}'
    )
}
