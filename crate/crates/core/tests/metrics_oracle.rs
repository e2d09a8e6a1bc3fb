mod common;

use proptest::prelude::*;
use scimap::metrics::{average_path_length, betweenness, betweenness_with, density, AplPolicy, Execution};
use scimap::synth::random_network;

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn brandes_matches_path_enumeration_on_random_graphs() {
    for seed in 0..200u64 {
        let n = 3 + (seed % 6) as usize;
        let max = n * (n - 1) / 2;
        let m = (n - 1) + (seed as usize * 7) % (max - n + 2);
        let net = random_network(n, m, true, seed % 2 == 0, seed).unwrap();
        let (n, edges) = common::edge_view(&net);
        for weighted in [false, true] {
            for normalized in [false, true] {
                let got = betweenness(&net, weighted, normalized).unwrap().scores();
                let want = common::betweenness_oracle(n, &edges, weighted, normalized);
                assert!(
                    close(&got, &want, 1e-9),
                    "seed {seed} w={weighted}: {got:?} vs {want:?}"
                );
            }
        }
    }
}

#[test]
fn brandes_on_disconnected_graphs() {
    for seed in 0..50u64 {
        let net = random_network(8, 5, false, false, seed).unwrap();
        let (n, edges) = common::edge_view(&net);
        let got = betweenness(&net, false, false).unwrap().scores();
        assert!(close(&got, &common::betweenness_oracle(n, &edges, false, false), 1e-9));
    }
}

#[test]
fn apl_matches_floyd_warshall() {
    for seed in 0..100u64 {
        let net = random_network(9, 6 + (seed % 20) as usize, false, false, seed).unwrap();
        let (n, edges) = common::edge_view(&net);
        let got = average_path_length(&net, AplPolicy::ReachablePairs).unwrap();
        assert!((got - common::apl_oracle(n, &edges).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn parallel_and_serial_are_bit_identical() {
    let net = random_network(300, 1200, true, true, 3).unwrap();
    let a = betweenness_with(&net, true, true, Execution::Parallel).unwrap();
    let b = betweenness_with(&net, true, true, Execution::Serial).unwrap();
    assert_eq!(a, b);
}

#[test]
fn density_of_random_graphs() {
    for (n, m) in [(2, 1), (10, 0), (10, 45), (203, 205)] {
        let net = random_network(n, m, false, false, 1).unwrap();
        let expected = 2.0 * m as f64 / (n * (n - 1)) as f64;
        assert_eq!(density(&net).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tree_betweenness_sums_to_distance_excess(n in 3usize..40, seed in 0u64..10_000) {
        // On a tree every pair has one geodesic, so raw scores sum to
        // Σ_{s<t} (d(s,t) - 1).
        let net = random_network(n, n - 1, true, false, seed).unwrap();
        let (n, edges) = common::edge_view(&net);
        let d = common::hop_distances(n, &edges);
        let mut excess = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                excess += d[i][j].unwrap() - 1;
            }
        }
        let total: f64 = betweenness(&net, false, false).unwrap().scores().iter().sum();
        prop_assert!((total - excess as f64).abs() < 1e-9);
    }

    #[test]
    fn normalized_scores_stay_in_unit_interval(n in 3usize..30, extra in 0usize..40, seed in 0u64..1000) {
        let m = (n - 1 + extra).min(n * (n - 1) / 2);
        let net = random_network(n, m, true, true, seed).unwrap();
        for w in [false, true] {
            for s in betweenness(&net, w, true).unwrap().scores() {
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&s));
            }
        }
    }
}
