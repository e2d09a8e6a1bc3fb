//! Independent reference implementations shared by the integration tests.
//! None of them reuse library code beyond reading a network's edges.

#![allow(dead_code)]

pub mod schema;

use scimap::corpus::{AuthorRef, BibRecord, Corpus};
use scimap::Network;

/// Plain edge list view of a network: `(n, [(u, v, w)])`.
pub fn edge_view(net: &Network) -> (usize, Vec<(usize, usize, f64)>) {
    (
        net.node_count(),
        net.edges().iter().map(|e| (e.source, e.target, e.weight)).collect(),
    )
}

/// Full-table optimal string alignment distance.
pub fn osa_oracle(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let (n, m) = (a.len(), b.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=m {
        d[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut best = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                best = best.min(d[i - 2][j - 2] + 1);
            }
            d[i][j] = best;
        }
    }
    d[n][m]
}

/// All-pairs hop distances by Floyd-Warshall; `None` when unreachable.
pub fn hop_distances(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<Option<usize>>> {
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(u, v, _) in edges {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Mean hop distance over reachable unordered pairs.
pub fn apl_oracle(n: usize, edges: &[(usize, usize, f64)]) -> Option<f64> {
    let d = hop_distances(n, edges);
    let (mut sum, mut count) = (0usize, 0usize);
    for i in 0..n {
        for j in i + 1..n {
            if let Some(x) = d[i][j] {
                sum += x;
                count += 1;
            }
        }
    }
    (count > 0).then(|| sum as f64 / count as f64)
}

/// Betweenness by enumerating every simple path between every pair and
/// keeping the shortest ones. Path length is the hop count, or the sum of
/// `1 / w` when `weighted`. Unordered pairs; optionally divided by
/// `(n-1)(n-2)/2`.
pub fn betweenness_oracle(n: usize, edges: &[(usize, usize, f64)], weighted: bool, normalized: bool) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        let cost = if weighted { 1.0 / w } else { 1.0 };
        adj[u].push((v, cost));
        adj[v].push((u, cost));
    }
    let mut score = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let mut paths: Vec<(f64, Vec<usize>)> = Vec::new();
            let mut stack = vec![s];
            let mut on_path = vec![false; n];
            on_path[s] = true;
            simple_paths(&adj, t, 0.0, &mut stack, &mut on_path, &mut paths);
            let Some(best) = paths.iter().map(|p| p.0).reduce(f64::min) else {
                continue;
            };
            let tol = 1e-12 * best.max(1.0);
            let shortest: Vec<&Vec<usize>> = paths.iter().filter(|p| p.0 <= best + tol).map(|p| &p.1).collect();
            let total = shortest.len() as f64;
            for p in &shortest {
                for &v in &p[1..p.len() - 1] {
                    score[v] += 1.0 / total;
                }
            }
        }
    }
    if normalized && n > 2 {
        let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
        for s in &mut score {
            *s /= norm;
        }
    }
    score
}

fn simple_paths(
    adj: &[Vec<(usize, f64)>],
    target: usize,
    cost: f64,
    stack: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<(f64, Vec<usize>)>,
) {
    let here = *stack.last().unwrap();
    if here == target {
        out.push((cost, stack.clone()));
        return;
    }
    for &(next, c) in &adj[here] {
        if !on_path[next] {
            on_path[next] = true;
            stack.push(next);
            simple_paths(adj, target, cost + c, stack, on_path, out);
            stack.pop();
            on_path[next] = false;
        }
    }
}

/// Modularity from its pairwise definition,
/// `Q = 1/2W Σ_ij [A_ij - γ k_i k_j / 2W] δ(c_i, c_j)`.
pub fn modularity_oracle(n: usize, edges: &[(usize, usize, f64)], assignment: &[usize], gamma: f64) -> f64 {
    let mut a = vec![vec![0.0; n]; n];
    for &(u, v, w) in edges {
        a[u][v] += w;
        a[v][u] += w;
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_w: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] == assignment[j] {
                q += a[i][j] - gamma * k[i] * k[j] / two_w;
            }
        }
    }
    q / two_w
}

/// Highest modularity over every set partition of `0..n` (restricted
/// growth strings; Bell(8) = 4140 candidates at n = 8).
pub fn exhaustive_best_modularity(n: usize, edges: &[(usize, usize, f64)], gamma: f64) -> f64 {
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == labels.len() {
            f(labels);
            return;
        }
        for c in 0..=max + 1 {
            labels[i] = c;
            rec(i + 1, max.max(c), labels, f);
        }
    }
    let mut best = f64::NEG_INFINITY;
    let mut labels = vec![0; n];
    if n == 0 {
        return 0.0;
    }
    // labels[0] is always 0.
    rec(1, 0, &mut labels, &mut |l| {
        best = best.max(modularity_oracle(n, edges, l, gamma));
    });
    best
}

pub fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

fn author(name: &str, affs: &[&str]) -> AuthorRef {
    AuthorRef::new(name).with_affiliations(affs.iter().copied())
}

/// One paper by five authors from four institutions; the first author lists
/// three of them.
pub fn figure1_corpus() -> Corpus {
    let mut rec = BibRecord::new("F1", "Sound and collaboration across institutions");
    rec.year = 2019;
    rec.authors = vec![
        author(
            "Taylor D.",
            &[
                "University of Cambridge",
                "California Institute of Technology (CalTech)",
                "Universidad del Rosario",
            ],
        ),
        author("Starr R.", &["University of Liverpool"]),
        author("Moreau L.", &["University of Cambridge"]),
        author("Jensen K.", &["University of Cambridge"]),
        author("Okafor N.", &["University of Liverpool"]),
    ];
    Corpus::from_records(vec![rec]).unwrap()
}

/// Two articles sharing one of their references.
pub fn figure2_corpus() -> Corpus {
    let mut a = BibRecord::new("A", "Listening networks");
    a.references = vec!["Smith J., Music and mind, 2001".into(), "Ruiz P., Tempo, 1999".into()];
    let mut b = BibRecord::new("B", "Rhythm in schools");
    b.references = vec!["Smith J.,  music and MIND, 2001".into(), "Lee K., Pitch, 2010".into()];
    Corpus::from_records(vec![a, b]).unwrap()
}

/// One document with three keywords.
pub fn figure3_corpus() -> Corpus {
    let mut rec = BibRecord::new("K", "Keywords in context");
    rec.author_keywords = ["music therapy", "dementia", "wellbeing"]
        .into_iter()
        .map(String::from)
        .collect();
    Corpus::from_records(vec![rec]).unwrap()
}

/// Two `k`-cliques joined by one bridge edge, as index edges.
pub fn barbell_edges(k: usize) -> Vec<(usize, usize, f64)> {
    let mut e = Vec::new();
    for off in [0, k] {
        for a in 0..k {
            for b in a + 1..k {
                e.push((off + a, off + b, 1.0));
            }
        }
    }
    e.push((k - 1, k, 1.0));
    e
}

pub fn network_from(n: usize, edges: &[(usize, usize, f64)]) -> Network {
    use scimap::network::Node;
    let id = |i: usize| format!("n{i:02}");
    let nodes = (0..n).map(|i| Node::new(id(i), format!("node {i}"))).collect();
    Network::from_parts(
        "fixture",
        scimap::NodeKind::Keyword,
        nodes,
        edges.iter().map(|&(u, v, w)| (id(u), id(v), w)),
    )
    .unwrap()
}

/// Re-derives every number of `report` from an exported edge list and the
/// report's own configuration echo. Returns the largest absolute deviation.
pub fn recompute_deviation(report: &scimap::AnalysisReport, edgelist_csv: &[u8]) -> Result<f64, String> {
    let net = scimap::report::import_edgelist_csv(edgelist_csv).map_err(|e| e.to_string())?;
    let again = scimap::analyze(&net, &report.config_echo).map_err(|e| e.to_string())?;
    if (again.n_nodes, again.n_edges) != (report.n_nodes, report.n_edges) {
        return Err("node or edge count differs".into());
    }
    // Density straight from the counts, independent of the library.
    let n = net.node_count() as f64;
    let direct_density = 2.0 * net.edge_count() as f64 / (n * (n - 1.0));
    let mut dev: f64 = (direct_density - report.macro_scores.density).abs();
    let mut cmp = |a: f64, b: f64| dev = dev.max((a - b).abs());
    cmp(again.macro_scores.density, report.macro_scores.density);
    cmp(
        again.macro_scores.average_path_length,
        report.macro_scores.average_path_length,
    );
    cmp(again.meso.modularity, report.meso.modularity);
    cmp(again.meso.cluster_count as f64, report.meso.cluster_count as f64);
    if again.meso.census.len() != report.meso.census.len()
        || again.micro.top_betweenness.len() != report.micro.top_betweenness.len()
    {
        return Err("table lengths differ".into());
    }
    for (a, b) in again.meso.census.iter().zip(&report.meso.census) {
        cmp(a.size as f64, b.size as f64);
        cmp(a.share_percent, b.share_percent);
        if a.top_members != b.top_members {
            return Err("census members differ".into());
        }
    }
    for (a, b) in again.micro.top_betweenness.iter().zip(&report.micro.top_betweenness) {
        if a.id != b.id {
            return Err("betweenness ranking differs".into());
        }
        cmp(a.score, b.score);
    }
    Ok(dev)
}
