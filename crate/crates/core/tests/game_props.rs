mod common;

use proptest::prelude::*;
use stackelberg_core::game::{
    expected_utilities, follower_best_response, solve_maximin, solve_nash_support_enumeration, solve_stackelberg,
    BimatrixGame, MixedStrategy, Player,
};
use stackelberg_core::gen::random_bimatrix;
use stackelberg_core::rng::XorShift64Star;

fn game(seed: u64, n: usize, m: usize) -> BimatrixGame {
    random_bimatrix(&mut XorShift64Star::new(seed), n, m)
}

/// Leader value of the best point on a uniform grid over 2-action
/// strategies, with the follower breaking ties for the leader.
fn grid_value(g: &BimatrixGame, steps: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..=steps {
        let p = i as f64 / steps as f64;
        let lead: Vec<f64> = (0..g.cols())
            .map(|j| p * g.leader(0, j) + (1.0 - p) * g.leader(1, j))
            .collect();
        let foll: Vec<f64> = (0..g.cols())
            .map(|j| p * g.follower(0, j) + (1.0 - p) * g.follower(1, j))
            .collect();
        let top = foll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let value = (0..g.cols())
            .filter(|&j| foll[j] >= top - 1e-9)
            .map(|j| lead[j])
            .fold(f64::NEG_INFINITY, f64::max);
        best = best.max(value);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn best_response_is_best(seed in any::<u64>(), n in 1usize..5, m in 1usize..5, w in proptest::collection::vec(0.01f64..1.0, 4)) {
        let g = game(seed, n, m);
        let total: f64 = w[..n].iter().sum();
        let x = MixedStrategy::new(w[..n].iter().map(|v| v / total).collect()).unwrap();
        let j = follower_best_response(&g, &x).unwrap();
        let (_, foll) = g.column_values(&x).unwrap();
        prop_assert!(foll.iter().all(|&v| foll[j] >= v - 1e-9));
    }

    #[test]
    fn stackelberg_matches_grid_search(seed in any::<u64>(), m in 1usize..4) {
        let g = game(seed, 2, m);
        let se = solve_stackelberg(&g).unwrap();
        let grid = grid_value(&g, 1000);
        prop_assert!(se.leader_payoff >= grid - 1e-9, "{} < {}", se.leader_payoff, grid);
        prop_assert!(se.leader_payoff <= grid + 2e-3, "{} > {}", se.leader_payoff, grid);
    }

    #[test]
    fn stackelberg_dominates_nash_and_maximin(seed in any::<u64>(), n in 2usize..4) {
        let g = game(seed, n, n);
        let se = solve_stackelberg(&g).unwrap();
        for (x, y) in solve_nash_support_enumeration(&g).unwrap() {
            let (lead, _) = expected_utilities(&g, &x, &y).unwrap();
            prop_assert!(se.leader_payoff >= lead - 1e-9);
        }
        let (_, guaranteed) = solve_maximin(&g, Player::Leader).unwrap();
        prop_assert!(se.leader_payoff >= guaranteed - 1e-9);
    }

    #[test]
    fn solution_is_consistent(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let g = game(seed, n, m);
        let se = solve_stackelberg(&g).unwrap();
        let (lead, foll) = g.column_values(&se.leader).unwrap();
        let j = se.follower_response;
        prop_assert!((lead[j] - se.leader_payoff).abs() < 1e-9);
        prop_assert!((foll[j] - se.follower_payoff).abs() < 1e-9);
        prop_assert!(foll.iter().all(|&v| foll[j] >= v - 1e-7));
    }

    #[test]
    fn affine_rescaling_of_leader(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, a in 0.1f64..10.0, b in -5.0f64..5.0) {
        let g = game(seed, n, m);
        let scaled = BimatrixGame::new(n, m, g.leader_matrix().iter().map(|v| a * v + b).collect(), g.follower_matrix().to_vec()).unwrap();
        let base = solve_stackelberg(&g).unwrap().leader_payoff;
        let other = solve_stackelberg(&scaled).unwrap().leader_payoff;
        prop_assert!((a * base + b - other).abs() < 1e-9 * (1.0 + a), "{} vs {}", a * base + b, other);
    }

    #[test]
    fn nash_profiles_are_equilibria(seed in any::<u64>(), n in 2usize..4) {
        let g = game(seed, n, n);
        for (x, y) in solve_nash_support_enumeration(&g).unwrap() {
            let (lead, foll) = expected_utilities(&g, &x, &y).unwrap();
            for i in 0..n {
                let (dev, _) = expected_utilities(&g, &MixedStrategy::pure(n, i), &y).unwrap();
                prop_assert!(dev <= lead + 1e-7);
            }
            for j in 0..n {
                let (_, dev) = expected_utilities(&g, &x, &MixedStrategy::pure(n, j)).unwrap();
                prop_assert!(dev <= foll + 1e-7);
            }
        }
    }
}

#[test]
fn random_games_always_have_a_nash_profile() {
    // nondegenerate random games have an odd number of equilibria
    let mut rng = XorShift64Star::new(99);
    for _ in 0..50 {
        let g = random_bimatrix(&mut rng, 3, 3);
        assert!(!solve_nash_support_enumeration(&g).unwrap().is_empty());
    }
}
