mod common;

use scimap::layout::{energy_at, fruchterman_reingold, fruchterman_reingold_observed, LayoutParams};
use scimap::Network;

fn params(seed: u64) -> LayoutParams {
    LayoutParams {
        seed,
        ..LayoutParams::default()
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Mean pairwise distance within the two cliques and across them.
pub fn barbell_separation(points: &[[f64; 2]], k: usize) -> (f64, f64) {
    let (mut intra, mut ni, mut inter, mut nx) = (0.0, 0, 0.0, 0);
    for i in 0..2 * k {
        for j in i + 1..2 * k {
            let d = dist(points[i], points[j]);
            if (i < k) == (j < k) {
                intra += d;
                ni += 1;
            } else {
                inter += d;
                nx += 1;
            }
        }
    }
    (intra / ni as f64, inter / nx as f64)
}

fn barbell() -> Network {
    common::network_from(10, &common::barbell_edges(5))
}

#[test]
fn barbell_cliques_separate() {
    let net = barbell();
    let passing = (0..20)
        .filter(|&seed| {
            let c = fruchterman_reingold(&net, &params(seed)).unwrap();
            let (intra, inter) = barbell_separation(&c.points(), 5);
            intra < inter
        })
        .count();
    assert!(passing >= 18, "{passing}/20");
}

#[test]
fn frame_containment_at_every_step() {
    let net = barbell();
    for seed in 0..5 {
        let p = LayoutParams {
            width: 300.0,
            height: 120.0,
            iterations: 200,
            ..params(seed)
        };
        fruchterman_reingold_observed(&net, &p, None, |_, pos| {
            for q in pos {
                assert!((0.0..=300.0).contains(&q[0]) && (0.0..=120.0).contains(&q[1]));
            }
        })
        .unwrap();
    }
}

#[test]
fn bit_determinism() {
    let net = barbell();
    let a = fruchterman_reingold(&net, &params(9)).unwrap();
    let b = fruchterman_reingold(&net, &params(9)).unwrap();
    let bits = |c: &scimap::LayoutCoords| -> Vec<u64> {
        c.positions
            .iter()
            .flat_map(|p| [p.x.to_bits(), p.y.to_bits()])
            .collect()
    };
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn energy_usually_decreases() {
    let net = barbell();
    let decreasing = (0..20)
        .filter(|&seed| {
            let p = params(seed);
            let mut first = None;
            let c = fruchterman_reingold_observed(&net, &p, None, |it, pos| {
                if it == 0 {
                    first = Some(energy_at(&net, &p, pos).total());
                }
            })
            .unwrap();
            energy_at(&net, &p, &c.points()).total() <= first.unwrap()
        })
        .count();
    assert!(decreasing >= 16, "{decreasing}/20");
}

#[test]
fn unlinked_pair_only_moves_apart() {
    let net = common::network_from(2, &[]);
    for seed in 0..20 {
        let p = LayoutParams {
            iterations: 50,
            ..params(seed)
        };
        let mut initial = None;
        let c = fruchterman_reingold_observed(&net, &p, None, |it, pos| {
            if it == 0 {
                initial = Some(dist(pos[0], pos[1]));
            }
        })
        .unwrap();
        let pts = c.points();
        assert!(dist(pts[0], pts[1]) >= initial.unwrap());
    }
}

#[test]
fn forces_are_translation_invariant() {
    // Few iterations from a compact start, so clamping never triggers.
    let net = barbell();
    let p = LayoutParams {
        iterations: 3,
        ..params(4)
    };
    let start: Vec<[f64; 2]> = (0..10)
        .map(|i| [450.0 + (i * 37 % 100) as f64, 450.0 + (i * 53 % 100) as f64])
        .collect();
    let shifted: Vec<[f64; 2]> = start.iter().map(|q| [q[0] + 30.0, q[1] - 20.0]).collect();
    let a = fruchterman_reingold_observed(&net, &p, Some(start), |_, _| {})
        .unwrap()
        .points();
    let b = fruchterman_reingold_observed(&net, &p, Some(shifted), |_, _| {})
        .unwrap()
        .points();
    for i in 0..10 {
        for axis in 0..2 {
            let ra = a[i][axis] - a[0][axis];
            let rb = b[i][axis] - b[0][axis];
            assert!((ra - rb).abs() < 1e-6, "node {i}: {ra} vs {rb}");
        }
        assert!(a[i].iter().all(|&v| v > 0.0 && v < 1000.0));
    }
}

/// Per seed: (gap at the end of the last 10% of iterations is at least the
/// gap at its start, gap never shrinks step to step, ends on the frame edge).
pub fn isolated_drift(seed: u64) -> (bool, bool, bool) {
    let net = common::network_from(11, &common::barbell_edges(5));
    let p = params(seed);
    let tail = p.iterations - p.iterations / 10;
    let mut gaps = Vec::new();
    let c = fruchterman_reingold_observed(&net, &p, None, |it, pos| {
        if it + 1 >= tail {
            let cx = pos[..10].iter().map(|q| q[0]).sum::<f64>() / 10.0;
            let cy = pos[..10].iter().map(|q| q[1]).sum::<f64>() / 10.0;
            gaps.push(dist(pos[10], [cx, cy]));
        }
    })
    .unwrap();
    let (x, y) = (c.positions[10].x, c.positions[10].y);
    let on_edge = x == 0.0 || y == 0.0 || x == p.width || y == p.height;
    (
        gaps.last() >= gaps.first(),
        gaps.windows(2).all(|w| w[1] >= w[0]),
        on_edge,
    )
}

#[test]
fn isolated_node_ends_on_the_frame_boundary() {
    let on_edge = (0..20).filter(|&s| isolated_drift(s).2).count();
    assert!(on_edge >= 15, "{on_edge}/20");
}

// The connected mass keeps jittering by about the current temperature while
// the isolated node sits clamped in a corner, so the gap is not monotone
// over the final iterations. Kept as a record of the unmet property.
#[test]
#[ignore = "isolated node is pinned at the frame edge; gap follows centroid jitter"]
fn isolated_node_gap_is_monotone_over_the_tail() {
    let monotone = (0..20).filter(|&s| isolated_drift(s).1).count();
    assert!(monotone >= 15, "{monotone}/20");
}
