//! Seeded random instances for the property suites and the CLI.

use alloc::format;
use alloc::vec::Vec;

use crate::game::BimatrixGame;
use crate::incentive::{Element, IncentiveInstance, SetFamily};
use crate::matching::{EdgePermutation, Multigraph, PermMatchInstance, ThreeDmInstance};
use crate::rng::XorShift64Star;

/// `rows × cols` game with every payoff uniform in `[0, 1)`. Zero sizes
/// are raised to 1.
pub fn random_bimatrix(rng: &mut XorShift64Star, rows: usize, cols: usize) -> BimatrixGame {
    let (rows, cols) = (rows.max(1), cols.max(1));
    let leader = (0..rows * cols).map(|_| rng.next_f64()).collect();
    let follower = (0..rows * cols).map(|_| rng.next_f64()).collect();
    BimatrixGame::new(rows, cols, leader, follower).expect("sizes are positive")
}

/// Multigraph on `vertices ≥ 2` vertices with `edges` uniformly drawn
/// non-loop edges (parallel edges allowed) and a uniform random `π`.
pub fn random_pm(rng: &mut XorShift64Star, vertices: usize, edges: usize) -> PermMatchInstance {
    assert!(vertices >= 2 || edges == 0, "edges need two distinct endpoints");
    let list = (0..edges)
        .map(|_| {
            let u = rng.below(vertices);
            let v = (u + 1 + rng.below(vertices - 1)) % vertices;
            (u, v)
        })
        .collect();
    let mut image: Vec<usize> = (0..edges).collect();
    rng.shuffle(&mut image);
    let graph = Multigraph::new(vertices, list).expect("endpoints are in range and distinct");
    PermMatchInstance::new(graph, EdgePermutation::new(image).expect("shuffle is a bijection")).expect("sizes agree")
}

/// Instance from the small-graph corpus: 2 to 6 vertices, 1 to `max_edges` edges.
pub fn random_small_pm(rng: &mut XorShift64Star, max_edges: usize) -> PermMatchInstance {
    let vertices = 2 + rng.below(5);
    let edges = 1 + rng.below(max_edges.max(1));
    random_pm(rng, vertices, edges)
}

/// 3DM instance keeping each triple of `A × B × C` independently with
/// probability `density`.
pub fn random_3dm_density(
    rng: &mut XorShift64Star,
    n_a: usize,
    n_b: usize,
    n_c: usize,
    density: f64,
) -> ThreeDmInstance {
    let mut triples = Vec::new();
    for a in 0..n_a {
        for b in 0..n_b {
            for c in 0..n_c {
                if rng.next_f64() < density {
                    triples.push([a, b, c]);
                }
            }
        }
    }
    ThreeDmInstance::new(n_a, n_b, n_c, triples).expect("indices in range")
}

/// 3DM instance with `count` uniformly drawn triples (repeats allowed).
pub fn random_3dm(rng: &mut XorShift64Star, n_a: usize, n_b: usize, n_c: usize, count: usize) -> ThreeDmInstance {
    let count = if n_a * n_b * n_c == 0 { 0 } else { count };
    let triples = (0..count)
        .map(|_| [rng.below(n_a), rng.below(n_b), rng.below(n_c)])
        .collect();
    ThreeDmInstance::new(n_a, n_b, n_c, triples).expect("indices in range")
}

/// Explicit incentive instance with `elements` elements and `sets` random
/// nonempty sets. Rewards are uniform in `[-1, 1)`.
pub fn random_explicit_incentive(rng: &mut XorShift64Star, elements: usize, sets: usize) -> IncentiveInstance {
    assert!(elements > 0 && sets > 0, "need at least one element and one set");
    let elems = (0..elements)
        .map(|i| Element::new(format!("e{i}"), 2.0 * rng.next_f64() - 1.0, 2.0 * rng.next_f64() - 1.0))
        .collect();
    let family = (0..sets)
        .map(|_| loop {
            let members: Vec<usize> = (0..elements).filter(|_| rng.below(2) == 1).collect();
            if !members.is_empty() {
                break members;
            }
        })
        .collect();
    IncentiveInstance::new(elems, SetFamily::Explicit(family)).expect("generated instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = random_bimatrix(&mut XorShift64Star::new(7), 3, 3);
        let b = random_bimatrix(&mut XorShift64Star::new(7), 3, 3);
        assert_eq!(a, b);
        assert!(a.leader_matrix().iter().all(|v| (0.0..1.0).contains(v)));
    }

    #[test]
    fn pm_shape() {
        let mut rng = XorShift64Star::new(3);
        for _ in 0..50 {
            let inst = random_small_pm(&mut rng, 8);
            assert!(inst.num_edges() >= 1 && inst.num_edges() <= 8);
            assert!(inst.graph().edges().iter().all(|&(u, v)| u != v));
        }
        let inst = random_pm(&mut rng, 4, 6);
        let mut seen = inst.pi().image().to_vec();
        seen.sort_unstable();
        assert_eq!(seen, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn three_dm() {
        let mut rng = XorShift64Star::new(1);
        assert!(random_3dm_density(&mut rng, 3, 3, 3, 0.0).triples.is_empty());
        assert_eq!(random_3dm_density(&mut rng, 2, 2, 2, 1.0).triples.len(), 8);
        assert_eq!(random_3dm(&mut rng, 2, 3, 4, 5).triples.len(), 5);
        assert!(random_3dm(&mut rng, 0, 3, 4, 5).triples.is_empty());
    }

    #[test]
    fn incentive_instances() {
        let mut rng = XorShift64Star::new(11);
        let inst = random_explicit_incentive(&mut rng, 4, 6);
        assert_eq!(inst.elements().len(), 4);
        match inst.family() {
            SetFamily::Explicit(sets) => assert!(sets.iter().all(|s| !s.is_empty())),
            SetFamily::Path(_) => unreachable!(),
        }
    }
}
