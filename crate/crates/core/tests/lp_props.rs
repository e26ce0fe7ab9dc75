mod common;

use proptest::prelude::*;
use stackelberg_core::lp::{self, LinearProgram, LpStatus};
use stackelberg_core::rng::XorShift64Star;

/// Random bounded LP in `n` variables with the origin feasible.
fn random_lp(rng: &mut XorShift64Star, n: usize, rows: usize) -> LinearProgram {
    let mut prog = LinearProgram::new(n);
    prog.maximize((0..n).map(|_| 2.0 * rng.next_f64() - 1.0).collect());
    for _ in 0..rows {
        prog.add_leq(
            (0..n).map(|_| 2.0 * rng.next_f64() - 1.0).collect(),
            0.1 + rng.next_f64(),
        );
    }
    prog.add_leq(vec![1.0; n], 5.0);
    prog
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn matches_vertex_enumeration(seed in any::<u64>()) {
        let prog = common::random_lp_2d(&mut XorShift64Star::new(seed));
        let sol = lp::solve(&prog).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        let best = common::vertex_enumeration_2d(&prog).unwrap();
        prop_assert!((sol.objective_value - best).abs() < 1e-8);
    }

    #[test]
    fn optimum_is_feasible(seed in any::<u64>(), n in 1usize..6, rows in 0usize..8) {
        let prog = random_lp(&mut XorShift64Star::new(seed), n, rows);
        let sol = lp::solve(&prog).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(prog.max_violation(&sol.values) <= 1e-8);
        prop_assert!((prog.objective_at(&sol.values) - sol.objective_value).abs() < 1e-8);
    }

    #[test]
    fn redundant_rows_change_nothing(seed in any::<u64>(), n in 1usize..5, rows in 1usize..6, scale in 1.0f64..3.0) {
        let mut rng = XorShift64Star::new(seed);
        let prog = random_lp(&mut rng, n, rows);
        let before = lp::solve(&prog).unwrap();
        let mut looser = prog.clone();
        let row = &prog.leq_rows()[rng.below(prog.leq_rows().len())];
        looser.add_leq(row.coeffs.clone(), row.rhs * scale);
        looser.add_leq(row.coeffs.iter().map(|c| c * scale).collect(), row.rhs * scale);
        let after = lp::solve(&looser).unwrap();
        prop_assert!((before.objective_value - after.objective_value).abs() < 1e-8);
    }

    #[test]
    fn generation_matches_full_lp(seed in any::<u64>(), n in 1usize..5, rows in 1usize..12) {
        let full = random_lp(&mut XorShift64Star::new(seed), n, rows);
        let all = lp::solve(&full).unwrap();
        let mut base = LinearProgram::new(n);
        base.maximize(full.objective().to_vec());
        let last = full.leq_rows().last().unwrap();
        base.add_leq(last.coeffs.clone(), last.rhs);
        let pool = full.leq_rows().to_vec();
        let mut oracle = |point: &[f64]| {
            pool.iter()
                .map(|r| (r, r.activity(point) - r.rhs))
                .filter(|(_, v)| *v > 1e-9)
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(r, v)| lp::Cut { coeffs: r.coeffs.clone(), rhs: r.rhs, violation: v })
        };
        let generated = lp::solve_with_generation(&base, &mut oracle, 1e-9, 100).unwrap();
        prop_assert!((generated.objective_value - all.objective_value).abs() < 1e-8);
    }
}
