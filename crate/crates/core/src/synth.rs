//! Seeded generators for test fixtures and benchmarks: bibliographic corpora
//! with a controlled number of near-duplicate titles, and random networks.

use std::collections::BTreeSet;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{damerau_levenshtein_within, AuthorRef, BibRecord, Corpus, DocType};
use crate::error::{Error, Result};
use crate::network::{Network, Node, NodeKind};
use crate::text::normalize_loose;

const TITLE_WORDS: &[&str] = &[
    "adaptive",
    "analysis",
    "approach",
    "assessment",
    "bibliometric",
    "citation",
    "cluster",
    "collaboration",
    "comparative",
    "complex",
    "computational",
    "coupling",
    "dynamics",
    "emerging",
    "empirical",
    "evaluation",
    "evidence",
    "evolution",
    "framework",
    "global",
    "growth",
    "impact",
    "innovation",
    "integrated",
    "knowledge",
    "landscape",
    "learning",
    "longitudinal",
    "mapping",
    "measurement",
    "method",
    "model",
    "modelling",
    "music",
    "network",
    "patterns",
    "performance",
    "perspective",
    "policy",
    "practice",
    "quantitative",
    "regional",
    "research",
    "review",
    "science",
    "scientific",
    "social",
    "sound",
    "spatial",
    "statistical",
    "structure",
    "study",
    "systematic",
    "systems",
    "temporal",
    "theory",
    "therapy",
    "trends",
    "understanding",
    "visual",
    "acoustic",
    "cognitive",
    "cultural",
    "digital",
    "education",
    "health",
    "listening",
    "memory",
    "perception",
    "rhythm",
    "signal",
    "strategy",
    "teaching",
    "urban",
    "voice",
    "wellbeing",
    "community",
    "semantic",
];

const KEYWORD_ROOTS: &[&str] = &[
    "music",
    "education",
    "therapy",
    "perception",
    "cognition",
    "emotion",
    "memory",
    "performance",
    "rhythm",
    "harmony",
    "melody",
    "composition",
    "improvisation",
    "listening",
    "health",
    "wellbeing",
    "culture",
    "identity",
    "technology",
    "software",
    "signal",
    "acoustics",
    "voice",
    "singing",
    "instrument",
    "learning",
    "teaching",
    "practice",
    "creativity",
    "analysis",
    "network",
    "citation",
    "collaboration",
    "science",
    "policy",
    "history",
    "theory",
    "neuroscience",
    "brain",
    "children",
    "adolescents",
    "elderly",
    "dementia",
    "anxiety",
    "stress",
    "pain",
    "movement",
    "dance",
    "film",
    "media",
    "recording",
    "industry",
    "economics",
    "heritage",
    "ethnography",
    "sociology",
    "gender",
    "community",
    "language",
    "speech",
    "hearing",
    "timbre",
    "tempo",
    "synchronization",
    "attention",
    "motivation",
    "expertise",
    "training",
    "assessment",
    "curriculum",
];

const KEYWORD_MODIFIERS: &[&str] = &[
    "",
    "applied",
    "clinical",
    "cognitive",
    "computational",
    "cultural",
    "digital",
    "early",
    "empirical",
    "formal",
    "higher",
    "informal",
    "social",
    "musical",
    "neural",
    "popular",
    "public",
    "school",
    "visual",
    "vocal",
    "urban",
    "rural",
    "global",
    "local",
    "online",
    "group",
    "individual",
    "adaptive",
    "embodied",
    "collective",
    "critical",
    "experimental",
    "historical",
    "interactive",
    "mobile",
    "narrative",
    "participatory",
    "qualitative",
    "quantitative",
    "therapeutic",
];

const SURNAMES: &[&str] = &[
    "Taylor",
    "Starr",
    "Garcia",
    "Müller",
    "Rossi",
    "Silva",
    "Kim",
    "Nguyen",
    "Okafor",
    "Larsen",
    "Novak",
    "Kowalski",
    "Tanaka",
    "Dubois",
    "Martin",
    "Lopez",
    "Ivanova",
    "Haddad",
    "Cohen",
    "Singh",
    "Patel",
    "Murphy",
    "O'Brien",
    "Schmidt",
    "Fischer",
    "Bianchi",
    "Moreau",
    "Jensen",
    "Andersson",
    "Virtanen",
    "Horvat",
    "Popescu",
    "Yilmaz",
    "Sato",
    "Wang",
    "Chen",
    "Liu",
    "Zhang",
    "Santos",
    "Pereira",
    "Costa",
    "Mendes",
    "Ramírez",
    "Torres",
    "Vargas",
    "Castro",
    "Ortiz",
    "Rojas",
    "Herrera",
    "Medina",
];

const PLACES: &[(&str, &str)] = &[
    ("Cambridge", "United Kingdom"),
    ("Liverpool", "United Kingdom"),
    ("Oxford", "United Kingdom"),
    ("Edinburgh", "United Kingdom"),
    ("Bogotá", "Colombia"),
    ("Medellín", "Colombia"),
    ("Pasadena", "United States"),
    ("Boston", "United States"),
    ("Chicago", "United States"),
    ("Toronto", "Canada"),
    ("Montreal", "Canada"),
    ("Madrid", "Spain"),
    ("Barcelona", "Spain"),
    ("Lisbon", "Portugal"),
    ("Porto", "Portugal"),
    ("Paris", "France"),
    ("Lyon", "France"),
    ("Berlin", "Germany"),
    ("Munich", "Germany"),
    ("Vienna", "Austria"),
    ("Helsinki", "Finland"),
    ("Oslo", "Norway"),
    ("Stockholm", "Sweden"),
    ("Copenhagen", "Denmark"),
    ("Amsterdam", "Netherlands"),
    ("Rome", "Italy"),
    ("Milan", "Italy"),
    ("Warsaw", "Poland"),
    ("Prague", "Czech Republic"),
    ("Tokyo", "Japan"),
    ("Kyoto", "Japan"),
    ("Seoul", "South Korea"),
    ("Beijing", "China"),
    ("Shanghai", "China"),
    ("Sydney", "Australia"),
    ("Melbourne", "Australia"),
    ("São Paulo", "Brazil"),
    ("Santiago", "Chile"),
    ("Mexico City", "Mexico"),
    ("Lagos", "Nigeria"),
];

const INSTITUTION_PATTERNS: &[&str] = &[
    "University of {}",
    "{} Institute of Technology",
    "{} College of Music",
    "{} School of Medicine",
    "{} Polytechnic University",
    "National Academy of {}",
    "{} Research Centre",
    "{} University Hospital",
];

const SOURCES: &[&str] = &[
    "Psychology of Music",
    "Journal of Music Therapy",
    "Music Perception",
    "Scientometrics",
    "Frontiers in Psychology",
    "International Journal of Music Education",
    "Musicae Scientiae",
    "Journal of New Music Research",
];

/// Shape of a generated corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    /// Total records, duplicates included.
    pub records: usize,
    /// Records that are one-character title edits of an earlier record.
    pub near_duplicates: usize,
    pub institutions: usize,
    pub authors: usize,
    pub keyword_pool: usize,
    pub reference_pool: usize,
    pub seed: u64,
}

impl CorpusSpec {
    /// 312 records of which 2 are near-duplicates, over 203 institutions.
    pub fn synthetic312() -> Self {
        CorpusSpec {
            records: 312,
            near_duplicates: 2,
            institutions: 203,
            authors: 520,
            keyword_pool: 900,
            reference_pool: 1200,
            seed: 312,
        }
    }

    /// A larger corpus for timing runs.
    pub fn scale(records: usize, seed: u64) -> Self {
        CorpusSpec {
            records,
            near_duplicates: 0,
            institutions: (records / 2).max(4),
            authors: (records * 2).max(8),
            keyword_pool: (records * 4).max(16),
            reference_pool: (records * 4).max(16),
            seed,
        }
    }
}

/// Titles of distinct records are kept below this similarity, well clear of
/// any sensible dedupe threshold.
const DISTINCT_SIMILARITY: f64 = 85.0;

/// Generates a corpus. Distinct titles are pairwise below 85% similar;
/// each near-duplicate differs from its original by one substituted letter,
/// so it is at least 98% similar given titles of 50+ characters.
pub fn synthetic_corpus(spec: &CorpusSpec) -> Result<Corpus> {
    if spec.near_duplicates * 2 > spec.records || spec.institutions == 0 || spec.authors == 0 {
        return Err(Error::InvalidArgument("corpus spec is not satisfiable".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let institutions = institution_names(spec.institutions);
    let authors: Vec<AuthorRef> = (0..spec.authors)
        .map(|i| {
            let surname = SURNAMES[i % SURNAMES.len()];
            let initials = initials(i / SURNAMES.len());
            let home = rng.gen_range(0..institutions.len());
            let mut affs = vec![institutions[home].0.clone()];
            if rng.gen_bool(0.15) {
                let other = rng.gen_range(0..institutions.len());
                if other != home {
                    affs.push(institutions[other].0.clone());
                }
            }
            let mut a = AuthorRef::new(format!("{surname} {initials}")).with_affiliations(affs);
            a.country = Some(institutions[home].2.to_string());
            a
        })
        .collect();
    let keywords: Vec<String> = (0..spec.keyword_pool).map(keyword_term).collect();
    let references: Vec<String> = (0..spec.reference_pool)
        .map(|i| {
            format!(
                "{} {}, {}, {}, {}",
                SURNAMES[(i * 7) % SURNAMES.len()],
                initials(i / SURNAMES.len()),
                title_case(&words(&mut ChaCha8Rng::seed_from_u64(i as u64 ^ 0x5eed), 5)),
                SOURCES[i % SOURCES.len()],
                1970 + (i % 50)
            )
        })
        .collect();

    let originals = spec.records - spec.near_duplicates;
    let mut titles: Vec<Vec<char>> = Vec::with_capacity(originals);
    let mut records = Vec::with_capacity(spec.records);
    for i in 0..originals {
        let title = loop {
            let n_words = rng.gen_range(7..=11);
            let candidate = title_case(&words(&mut rng, n_words));
            let norm: Vec<char> = normalize_loose(&candidate).chars().collect();
            if norm.len() >= 50 && is_distinct(&norm, &titles) {
                titles.push(norm);
                break candidate;
            }
        };
        let mut rec = BibRecord::new(format!("S{i}"), title);
        rec.year = rng.gen_range(1995..=2020);
        rec.doc_type = if rng.gen_bool(0.85) {
            DocType::Article
        } else {
            DocType::Review
        };
        rec.source_title = SOURCES[rng.gen_range(0..SOURCES.len())].to_string();
        rec.doi = Some(format!("10.5555/synth.{}.{i}", spec.seed));
        let n_authors = rng.gen_range(1..=5);
        let mut picked = BTreeSet::new();
        while picked.len() < n_authors.min(authors.len()) {
            picked.insert(skewed(&mut rng, authors.len()));
        }
        let mut picked: Vec<usize> = picked.into_iter().collect();
        picked.shuffle(&mut rng);
        rec.authors = picked.into_iter().map(|a| authors[a].clone()).collect();
        for _ in 0..rng.gen_range(3..=6) {
            rec.author_keywords
                .insert(keywords[skewed(&mut rng, keywords.len())].clone());
        }
        for _ in 0..rng.gen_range(1..=3) {
            rec.index_keywords
                .insert(keywords[skewed(&mut rng, keywords.len())].clone());
        }
        let mut refs = BTreeSet::new();
        for _ in 0..rng.gen_range(8..=25) {
            refs.insert(skewed(&mut rng, references.len()));
        }
        rec.references = refs.into_iter().map(|r| references[r].clone()).collect();
        records.push(rec);
    }

    let mut sources: Vec<usize> = (0..originals).collect();
    sources.shuffle(&mut rng);
    for (d, &src) in sources.iter().take(spec.near_duplicates).enumerate() {
        let mut dup = records[src].clone();
        dup.record_id = format!("D{d}");
        dup.title = one_letter_edit(&dup.title, &mut rng);
        let at = rng.gen_range(src + 1..=records.len());
        records.insert(at, dup);
    }
    Corpus::from_records(records)
}

/// The 312-record corpus with exactly two near-duplicate pairs.
pub fn synthetic312() -> Corpus {
    synthetic_corpus(&CorpusSpec::synthetic312()).expect("fixed spec is satisfiable")
}

fn is_distinct(title: &[char], others: &[Vec<char>]) -> bool {
    others.iter().all(|o| {
        let longest = title.len().max(o.len());
        // Similarity >= DISTINCT_SIMILARITY iff distance <= budget.
        let budget = (longest as f64 * (100.0 - DISTINCT_SIMILARITY) / 100.0).floor() as usize;
        damerau_levenshtein_within(title, o, budget).is_none()
    })
}

fn words(rng: &mut impl Rng, n: usize) -> String {
    (0..n)
        .map(|_| TITLE_WORDS[rng.gen_range(0..TITLE_WORDS.len())])
        .collect::<Vec<_>>()
        .join(" ")
}

fn title_case(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

/// Replaces one interior ASCII letter with a different letter.
fn one_letter_edit(title: &str, rng: &mut impl Rng) -> String {
    let mut chars: Vec<char> = title.chars().collect();
    let letters: Vec<usize> = (1..chars.len()).filter(|&i| chars[i].is_ascii_lowercase()).collect();
    let at = letters[rng.gen_range(0..letters.len())];
    let old = chars[at];
    chars[at] = if old == 'z' {
        'q'
    } else {
        ((old as u8 - b'a' + 1) % 26 + b'a') as char
    };
    chars.into_iter().collect()
}

fn initials(i: usize) -> String {
    let a = (b'A' + (i % 26) as u8) as char;
    if i < 26 {
        format!("{a}.")
    } else {
        let b = (b'A' + ((i / 26) % 26) as u8) as char;
        format!("{b}.{a}.")
    }
}

fn keyword_term(i: usize) -> String {
    let root = KEYWORD_ROOTS[i % KEYWORD_ROOTS.len()];
    let m = i / KEYWORD_ROOTS.len();
    let first = KEYWORD_MODIFIERS[m % KEYWORD_MODIFIERS.len()];
    let second = m / KEYWORD_MODIFIERS.len();
    let mut term = if first.is_empty() {
        root.to_string()
    } else {
        format!("{first} {root}")
    };
    if second > 0 {
        term = format!("{} {term}", KEYWORD_MODIFIERS[second % KEYWORD_MODIFIERS.len()]);
        if second >= KEYWORD_MODIFIERS.len() {
            term.push_str(&format!(" {}", second / KEYWORD_MODIFIERS.len()));
        }
    }
    term
}

/// `(name, city, country)` triples.
fn institution_names(n: usize) -> Vec<(String, &'static str, &'static str)> {
    (0..n)
        .map(|i| {
            let (place, country) = PLACES[i % PLACES.len()];
            let pattern = INSTITUTION_PATTERNS[(i / PLACES.len()) % INSTITUTION_PATTERNS.len()];
            let round = i / (PLACES.len() * INSTITUTION_PATTERNS.len());
            let name = pattern.replace("{}", place);
            let name = if round == 0 {
                name
            } else {
                format!("{name} {}", round + 1)
            };
            (name, place, country)
        })
        .collect()
}

/// Index in `0..n` biased towards small values, giving a long-tailed
/// popularity as in real keyword and citation data.
fn skewed(rng: &mut impl Rng, n: usize) -> usize {
    let u: f64 = rng.gen();
    ((u * u * n as f64) as usize).min(n - 1)
}

/// Writes a corpus as a Scopus-style CSV that `parse_scopus_csv` reads back.
pub fn write_scopus_csv(corpus: &Corpus, sink: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        "Authors",
        "Title",
        "Year",
        "Source title",
        "Author Keywords",
        "Index Keywords",
        "Authors with affiliations",
        "References",
        "DOI",
        "Document Type",
    ])?;
    for r in &corpus.records {
        let authors: Vec<&str> = r.authors.iter().map(|a| a.name.as_str()).collect();
        let keyed: Vec<String> = r
            .authors
            .iter()
            .flat_map(|a| {
                a.affiliations.iter().map(move |aff| match &a.country {
                    Some(c) => format!("{}, {aff}, {c}", a.name),
                    None => format!("{}, {aff}", a.name),
                })
            })
            .collect();
        let join = |set: &BTreeSet<String>| set.iter().cloned().collect::<Vec<_>>().join("; ");
        w.write_record([
            authors.join("; ").as_str(),
            &r.title,
            &if r.year == 0 { String::new() } else { r.year.to_string() },
            &r.source_title,
            &join(&r.author_keywords),
            &join(&r.index_keywords),
            &keyed.join("; "),
            &r.references.join("; "),
            r.doi.as_deref().unwrap_or(""),
            r.doc_type.as_scopus(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Uniform random simple graph with `n` nodes and `m` edges. With
/// `connected`, a random spanning tree is laid down first (needs
/// `m >= n - 1`). Weights are 1, or uniform in `[0.5, 5)` when `weighted`.
pub fn random_network(n: usize, m: usize, connected: bool, weighted: bool, seed: u64) -> Result<Network> {
    let max = n * n.saturating_sub(1) / 2;
    if m > max || (connected && n > 0 && m < n - 1) {
        return Err(Error::InvalidArgument(format!("cannot place {m} edges on {n} nodes")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = BTreeSet::new();
    if connected {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for i in 1..n {
            let j = order[rng.gen_range(0..i)];
            let (a, b) = (order[i].min(j), order[i].max(j));
            pairs.insert((a, b));
        }
    }
    if m * 3 > max * 2 {
        // Dense: sample from the full pair list.
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|p| !pairs.contains(p))
            .collect();
        all.shuffle(&mut rng);
        let need = m - pairs.len();
        pairs.extend(all.into_iter().take(need));
    } else {
        while pairs.len() < m {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    let width = n.to_string().len();
    let id = |i: usize| format!("v{i:0width$}");
    let nodes = (0..n).map(|i| Node::new(id(i), format!("node {i}"))).collect();
    let mut edges = Vec::with_capacity(m);
    for (a, b) in pairs {
        let w = if weighted { rng.gen_range(0.5..5.0) } else { 1.0 };
        edges.push((id(a), id(b), w));
    }
    Network::from_parts(format!("random-{n}-{m}-{seed}"), NodeKind::Keyword, nodes, edges)
}

/// Edge count whose density over `n` nodes rounds to `density`:
/// `round(density * n (n - 1) / 2)`.
pub fn edges_for_density(n: usize, density: f64) -> usize {
    (density * (n * n.saturating_sub(1)) as f64 / 2.0).round() as usize
}

/// Random graph with `n` nodes tuned to the given density.
pub fn density_fixture(n: usize, density: f64, seed: u64) -> Result<Network> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!("density {density} outside [0, 1]")));
    }
    random_network(n, edges_for_density(n, density), false, false, seed)
}

/// Disjoint cliques of the given sizes, nodes numbered consecutively.
pub fn clique_fixture(sizes: &[usize]) -> Network {
    let n: usize = sizes.iter().sum();
    let width = n.to_string().len();
    let id = |i: usize| format!("i{i:0width$}");
    let nodes = (0..n).map(|i| Node::new(id(i), format!("Institution {i}"))).collect();
    let mut edges = Vec::new();
    let mut start = 0;
    for &s in sizes {
        for a in start..start + s {
            for b in a + 1..start + s {
                edges.push((id(a), id(b), 1.0));
            }
        }
        start += s;
    }
    Network::from_parts("cliques", NodeKind::Institution, nodes, edges).expect("cliques are valid")
}

/// 203 institutions whose largest cluster holds 12 of them.
pub fn census_fixture() -> Network {
    let mut sizes = vec![12];
    sizes.extend(std::iter::repeat_n(11, 17));
    sizes.push(4);
    clique_fixture(&sizes)
}
