use proptest::prelude::*;
use stackelberg_core::discretize::{
    almost_best_responses, discretized_se, discretized_se_with_slack, grid_numerators, grid_size, max_abs_payoff,
    verify_eps_approx, GridParams, DEFAULT_GRID_CAP,
};
use stackelberg_core::game::{solve_stackelberg, BimatrixGame};
use stackelberg_core::gen::random_bimatrix;
use stackelberg_core::rng::XorShift64Star;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_count_is_stars_and_bars(n in 1usize..5, k in 1u64..12) {
        let params = GridParams::new(k).unwrap();
        let points: Vec<Vec<u64>> = grid_numerators(n, params, DEFAULT_GRID_CAP).unwrap().collect();
        let expected = binomial(n as u64 + k - 1, n as u64 - 1);
        prop_assert_eq!(points.len() as u64, expected);
        prop_assert_eq!(grid_size(n, params), Some(expected));
        prop_assert!(points.iter().all(|p| p.iter().sum::<u64>() == k));
    }

    #[test]
    fn bound_and_grid_membership(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, k in 1u64..9) {
        let g = random_bimatrix(&mut XorShift64Star::new(seed), n, m);
        let sol = discretized_se(&g, GridParams::new(k).unwrap(), DEFAULT_GRID_CAP).unwrap();
        let exact = solve_stackelberg(&g).unwrap().leader_payoff;
        prop_assert!((sol.slack - 2.0 * n as f64 * max_abs_payoff(&g) / k as f64).abs() < 1e-12);
        prop_assert!(verify_eps_approx(&g, &sol, exact));
        prop_assert!(almost_best_responses(&g, &sol.leader, sol.slack).unwrap().contains(&sol.follower_response));
        for (p, &a) in sol.leader.probs().iter().zip(&sol.numerators) {
            prop_assert_eq!(*p, a as f64 / k as f64);
        }
    }

    #[test]
    fn halving_eps_keeps_both_bounds(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, k in 1u64..6) {
        let g = random_bimatrix(&mut XorShift64Star::new(seed), n, m);
        let exact = solve_stackelberg(&g).unwrap().leader_payoff;
        let bound = 2.0 * n as f64 * max_abs_payoff(&g) / k as f64;
        let coarse = discretized_se(&g, GridParams::new(k).unwrap(), DEFAULT_GRID_CAP).unwrap();
        let fine = discretized_se(&g, GridParams::new(2 * k).unwrap(), DEFAULT_GRID_CAP).unwrap();
        prop_assert!(coarse.leader_payoff >= exact - bound - 1e-9);
        prop_assert!(fine.leader_payoff >= exact - bound / 2.0 - 1e-9);
    }

    #[test]
    fn zero_slack_on_pure_optimum(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        // the optimum of a follower-indifferent game is a pure leader row
        let g = random_bimatrix(&mut XorShift64Star::new(seed), n, m);
        let flat = BimatrixGame::new(n, m, g.leader_matrix().to_vec(), vec![0.0; n * m]).unwrap();
        let sol = discretized_se_with_slack(&flat, GridParams::new(1).unwrap(), 100, 0.0).unwrap();
        let exact = solve_stackelberg(&flat).unwrap().leader_payoff;
        prop_assert!((sol.leader_payoff - exact).abs() < 1e-12);
    }
}

#[test]
fn symmetric_game_exact_on_half_grid() {
    // the SE is the pure row (1, 0) worth 2, which lies on the k = 2 grid
    let g = BimatrixGame::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]], &[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
    let exact = solve_stackelberg(&g).unwrap();
    let sol = discretized_se_with_slack(&g, GridParams::new(2).unwrap(), 100, 0.0).unwrap();
    assert!((sol.leader_payoff - exact.leader_payoff).abs() < 1e-12);
}

#[test]
fn one_by_one_exact() {
    let g = BimatrixGame::new(1, 1, vec![5.0], vec![3.0]).unwrap();
    let sol = discretized_se(&g, GridParams::new(7).unwrap(), 10).unwrap();
    assert_eq!(sol.leader_payoff, 5.0);
    assert_eq!(sol.grid_size, 1);
}

#[test]
fn halving_eps_can_drop_more_than_the_old_slack() {
    // one leader row: slack 0.5 admits the leader-friendly column, 0.25 does not
    let g = BimatrixGame::new(1, 2, vec![0.0, 1.0], vec![1.0, 0.7]).unwrap();
    let coarse = discretized_se(&g, GridParams::new(4).unwrap(), 10).unwrap();
    let fine = discretized_se(&g, GridParams::new(8).unwrap(), 10).unwrap();
    assert_eq!((coarse.leader_payoff, fine.leader_payoff), (1.0, 0.0));
    assert!(coarse.leader_payoff - fine.leader_payoff > coarse.slack);
}
