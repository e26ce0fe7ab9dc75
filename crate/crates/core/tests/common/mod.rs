#![allow(dead_code)]

use stackelberg_core::incentive::{IncentiveInstance, SetFamily};
use stackelberg_core::lp::LinearProgram;
use stackelberg_core::matching::{Multigraph, ThreeDmInstance};
use stackelberg_core::rng::XorShift64Star;

/// Largest number of pairwise disjoint triples, by subset enumeration.
pub fn brute_force_3dm(tdm: &ThreeDmInstance) -> usize {
    let t = tdm.triples.len();
    let mut best = 0;
    for mask in 0u32..(1 << t) {
        let chosen: Vec<[usize; 3]> = (0..t).filter(|i| mask >> i & 1 == 1).map(|i| tdm.triples[i]).collect();
        let disjoint = (0..3).all(|k| {
            let mut seen: Vec<usize> = chosen.iter().map(|tr| tr[k]).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        });
        if disjoint {
            best = best.max(chosen.len());
        }
    }
    best
}

fn is_matching_mask(graph: &Multigraph, mask: u64) -> bool {
    let mut used = vec![false; graph.num_vertices()];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if mask >> e & 1 == 1 {
            if used[u] || used[v] {
                return false;
            }
            used[u] = true;
            used[v] = true;
        }
    }
    true
}

/// Every matching as a bitmask over edge ids.
pub fn matching_masks(graph: &Multigraph) -> Vec<u64> {
    (0u64..(1 << graph.num_edges()))
        .filter(|&m| is_matching_mask(graph, m))
        .collect()
}

/// Matching count by the edge recursion `N(G) = N(G - e) + N(G - u - v)`.
pub fn count_matchings(graph: &Multigraph) -> u64 {
    fn go(edges: &[(usize, usize)]) -> u64 {
        match edges.split_first() {
            None => 1,
            Some((&(u, v), rest)) => {
                let apart: Vec<(usize, usize)> = rest
                    .iter()
                    .copied()
                    .filter(|&(a, b)| a != u && a != v && b != u && b != v)
                    .collect();
                go(rest) + go(&apart)
            }
        }
    }
    go(graph.edges())
}

/// Maximum matching weight by scanning every edge subset.
pub fn exhaustive_max_weight(graph: &Multigraph, weights: &[f64]) -> f64 {
    matching_masks(graph)
        .into_iter()
        .map(|m| {
            (0..graph.num_edges())
                .filter(|e| m >> e & 1 == 1)
                .map(|e| weights[e])
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

/// Optimum of a 2-variable LP (`x >= 0`, `<=` rows only) by checking every
/// intersection of two boundary lines. `None` when nothing is feasible.
pub fn vertex_enumeration_2d(lp: &LinearProgram) -> Option<f64> {
    assert_eq!(lp.num_vars(), 2);
    let mut lines: Vec<([f64; 2], f64)> = lp
        .leq_rows()
        .iter()
        .map(|r| ([r.coeffs[0], r.coeffs[1]], r.rhs))
        .collect();
    lines.push(([1.0, 0.0], 0.0));
    lines.push(([0.0, 1.0], 0.0));
    let feasible = |p: [f64; 2]| {
        p[0] >= -1e-9
            && p[1] >= -1e-9
            && lp
                .leq_rows()
                .iter()
                .all(|r| r.coeffs[0] * p[0] + r.coeffs[1] * p[1] <= r.rhs + 1e-9)
    };
    let c = lp.objective();
    let mut best: Option<f64> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let ([a, b], e) = lines[i];
            let ([c2, d], f) = lines[j];
            let det = a * d - b * c2;
            if det.abs() < 1e-12 {
                continue;
            }
            let p = [(e * d - b * f) / det, (a * f - e * c2) / det];
            if feasible(p) {
                let value = c[0] * p[0] + c[1] * p[1];
                best = Some(best.map_or(value, |b: f64| b.max(value)));
            }
        }
    }
    best
}

/// Random bounded 2-variable LP whose origin is feasible.
pub fn random_lp_2d(rng: &mut XorShift64Star) -> LinearProgram {
    let mut lp = LinearProgram::new(2);
    lp.maximize(vec![4.0 * rng.next_f64() - 2.0, 4.0 * rng.next_f64() - 2.0]);
    for _ in 0..2 + rng.below(4) {
        lp.add_leq(
            vec![4.0 * rng.next_f64() - 2.0, 4.0 * rng.next_f64() - 2.0],
            0.5 + 4.0 * rng.next_f64(),
        );
    }
    lp.add_leq(vec![1.0, 0.0], 10.0);
    lp.add_leq(vec![0.0, 1.0], 10.0);
    lp
}

/// Best leader payoff over `x` on the grid of step `1/steps` and incentives
/// `V` on the grid of the same step placed on any one set.
///
/// For a fixed `x` and target `T` the leader payoff only depends on `V`
/// through which set the follower picks, so scanning `V` reduces to `V = 0`
/// and the smallest grid value at which `T` wins.
pub fn incentive_grid_search(inst: &IncentiveInstance, steps: u64) -> f64 {
    let SetFamily::Explicit(sets) = inst.family() else {
        panic!("grid search needs an explicit family");
    };
    let n = inst.len();
    let c: Vec<f64> = inst.elements().iter().map(|e| e.follower_reward).collect();
    let cl: Vec<f64> = inst.elements().iter().map(|e| e.leader_reward).collect();
    let step = 1.0 / steps as f64;
    let mut best = f64::NEG_INFINITY;
    let mut num = vec![0u64; n];
    compositions(steps, n, &mut num, 0, &mut |num| {
        let x: Vec<f64> = num.iter().map(|&a| a as f64 * step).collect();
        let own: f64 = x.iter().zip(&cl).map(|(p, v)| p * v).sum();
        let hit: Vec<f64> = sets.iter().map(|s| s.iter().map(|&e| x[e]).sum()).collect();
        let base: Vec<f64> = sets
            .iter()
            .zip(&hit)
            .map(|(s, h)| s.iter().map(|&e| c[e]).sum::<f64>() - h)
            .collect();
        let outcome = |target: usize, v: f64| -> f64 {
            let value = |i: usize| base[i] + if i == target { v } else { 0.0 };
            let lead = |i: usize| hit[i] - if i == target { v } else { 0.0 };
            let top = (0..sets.len()).map(value).fold(f64::NEG_INFINITY, f64::max);
            (0..sets.len())
                .filter(|&i| value(i) >= top - 1e-9)
                .map(lead)
                .fold(f64::NEG_INFINITY, f64::max)
                + own
        };
        best = best.max(outcome(0, 0.0));
        for t in 0..sets.len() {
            let others = (0..sets.len())
                .filter(|&i| i != t)
                .map(|i| base[i])
                .fold(f64::NEG_INFINITY, f64::max);
            let needed = (others - base[t]).max(0.0);
            let v = (needed / step - 1e-9).ceil().max(0.0) * step;
            best = best.max(outcome(t, v));
        }
    });
    best
}

fn compositions(k: u64, n: usize, num: &mut Vec<u64>, at: usize, visit: &mut impl FnMut(&[u64])) {
    if at == n - 1 {
        num[at] = k;
        visit(num);
        return;
    }
    for a in 0..=k {
        num[at] = a;
        compositions(k - a, n, num, at + 1, visit);
    }
}

/// Random point of the simplex.
pub fn random_simplex_point(rng: &mut XorShift64Star, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.next_f64() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}
