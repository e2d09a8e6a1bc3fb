use std::collections::HashSet;

use super::distance::{damerau_levenshtein, damerau_levenshtein_within};
use super::{Corpus, DedupReport, MergedPair, Rejection};
use crate::error::{Error, Result};
use crate::text::normalize_loose;

/// Percent similarity of two titles, `100 * (1 - d / max(|a|, |b|))`, where
/// `d` is the restricted Damerau-Levenshtein distance between the titles
/// after lowercasing, punctuation stripping and whitespace collapsing.
pub fn title_similarity(a: &str, b: &str) -> Result<f64> {
    let a = normalize_loose(a);
    let b = normalize_loose(b);
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return Err(Error::NothingToCompare);
    }
    let d = damerau_levenshtein(&a, &b);
    Ok(percent(d, longest))
}

fn percent(distance: usize, longest: usize) -> f64 {
    100.0 * (1.0 - distance as f64 / longest as f64)
}

/// Merges records whose titles are at least `threshold_percent` similar.
///
/// Similar pairs are grouped transitively; each group keeps its earliest
/// record in corpus order and absorbs the keywords and references of the
/// others.
pub fn dedupe(corpus: &Corpus, threshold_percent: f64) -> Result<(Corpus, DedupReport)> {
    if !(threshold_percent > 0.0 && threshold_percent <= 100.0) {
        return Err(Error::InvalidArgument(format!(
            "dedupe threshold must be in (0, 100], got {threshold_percent}"
        )));
    }
    let titles: Vec<Vec<char>> = corpus
        .records
        .iter()
        .map(|r| normalize_loose(&r.title).chars().collect())
        .collect();
    let n = titles.len();

    let links = similar_pairs(&titles, threshold_percent);

    let mut groups = UnionFind::new(n);
    for &(i, j, _) in &links {
        groups.union(i, j);
    }

    // For each dropped record, the strongest link into its group.
    let mut best_link = vec![f64::NEG_INFINITY; n];
    for &(i, j, sim) in &links {
        best_link[i] = best_link[i].max(sim);
        best_link[j] = best_link[j].max(sim);
    }

    let mut records = corpus.records.clone();
    let mut merged_pairs = Vec::new();
    let mut dropped = HashSet::new();
    for i in 0..n {
        let root = groups.find(i);
        if root == i {
            continue;
        }
        let donor = corpus.records[i].clone();
        let survivor = &mut records[root];
        survivor.author_keywords.extend(donor.author_keywords);
        survivor.index_keywords.extend(donor.index_keywords);
        for r in donor.references {
            if !survivor.references.contains(&r) {
                survivor.references.push(r);
            }
        }
        merged_pairs.push(MergedPair {
            kept_id: survivor.record_id.clone(),
            dropped_id: donor.record_id,
            similarity_percent: best_link[i],
        });
        dropped.insert(i);
    }

    let records: Vec<_> = records
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !dropped.contains(i))
        .map(|(_, r)| r)
        .collect();
    // Dropped duplicates count as rejections so read = kept + rejected holds.
    let mut provenance = corpus.provenance.clone();
    provenance.kept = records.len();
    provenance.rejected += merged_pairs.len();
    provenance.rejections.extend(merged_pairs.iter().map(|p| Rejection {
        row: 0,
        reason: format!(
            "duplicate of {} ({:.2}% similar): {}",
            p.kept_id, p.similarity_percent, p.dropped_id
        ),
    }));
    Ok((
        Corpus { records, provenance },
        DedupReport {
            threshold_percent,
            merged_pairs,
        },
    ))
}

/// All pairs `(i, j, similarity)` with `i < j` at or above the threshold.
fn similar_pairs(titles: &[Vec<char>], threshold_percent: f64) -> Vec<(usize, usize, f64)> {
    let row = |i: usize| -> Vec<(usize, usize, f64)> {
        let a = &titles[i];
        let mut out = Vec::new();
        for (j, b) in titles.iter().enumerate().skip(i + 1) {
            let longest = a.len().max(b.len());
            if longest == 0 {
                // Titles that normalize to nothing carry no evidence.
                continue;
            }
            // sim >= t  <=>  d <= longest * (100 - t) / 100
            let budget = (longest as f64 * (100.0 - threshold_percent) / 100.0 + 1e-9).floor();
            let Some(d) = damerau_levenshtein_within(a, b, budget as usize) else {
                continue;
            };
            let sim = percent(d, longest);
            if sim >= threshold_percent {
                out.push((i, j, sim));
            }
        }
        out
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..titles.len()).into_par_iter().flat_map_iter(row).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..titles.len()).flat_map(row).collect()
    }
}

/// Disjoint sets whose representative is always the smallest member.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
