//! Re-validation of solver output before anything is printed.

use stackelberg_core::discretize::{almost_best_responses, ApproxSolution};
use stackelberg_core::game::{expected_utilities, BimatrixGame, MaximinProfile, MixedStrategy, StackelbergSolution};
use stackelberg_core::incentive::{
    check_incentive_lower_bound, follower_best_set, leader_payoff, IncentiveInstance, IncentiveSolution,
};
use stackelberg_core::matching::{pitim_value, Matching, PermMatchInstance, PmApproxSolution};

use crate::error::CliError;

const CHECK_TOL: f64 = 1e-7;

fn ensure(ok: bool, what: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::internal(format!("self-check failed: {what}")))
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CHECK_TOL * (1.0 + a.abs().max(b.abs()))
}

pub fn stackelberg(game: &BimatrixGame, sol: &StackelbergSolution) -> Result<(), CliError> {
    let (lead, foll) = game.column_values(&sol.leader)?;
    let j = sol.follower_response;
    ensure(j < game.cols(), "response index in range")?;
    ensure(close(lead[j], sol.leader_payoff), "leader payoff matches the profile")?;
    ensure(
        close(foll[j], sol.follower_payoff),
        "follower payoff matches the profile",
    )?;
    ensure(
        foll.iter().all(|&v| v <= foll[j] + CHECK_TOL),
        "response is a best response",
    )
}

pub fn nash(game: &BimatrixGame, x: &MixedStrategy, y: &MixedStrategy) -> Result<(), CliError> {
    let (lead, foll) = expected_utilities(game, x, y)?;
    for i in 0..game.rows() {
        let (dev, _) = expected_utilities(game, &MixedStrategy::pure(game.rows(), i), y)?;
        ensure(dev <= lead + CHECK_TOL, "no profitable leader deviation")?;
    }
    for j in 0..game.cols() {
        let (_, dev) = expected_utilities(game, x, &MixedStrategy::pure(game.cols(), j))?;
        ensure(dev <= foll + CHECK_TOL, "no profitable follower deviation")?;
    }
    Ok(())
}

pub fn maximin(game: &BimatrixGame, profile: &MaximinProfile) -> Result<(), CliError> {
    let (lead, foll) = expected_utilities(game, &profile.leader, &profile.follower)?;
    ensure(close(lead, profile.leader_payoff), "realized leader payoff")?;
    ensure(close(foll, profile.follower_payoff), "realized follower payoff")
}

pub fn discretized(game: &BimatrixGame, sol: &ApproxSolution) -> Result<(), CliError> {
    ensure(sol.numerators.iter().sum::<u64>() == sol.k, "grid numerators sum to k")?;
    ensure(
        sol.leader
            .probs()
            .iter()
            .zip(&sol.numerators)
            .all(|(&p, &a)| p == a as f64 / sol.k as f64),
        "leader strategy lies on the grid",
    )?;
    let allowed = almost_best_responses(game, &sol.leader, sol.slack)?;
    ensure(
        allowed.contains(&sol.follower_response),
        "response is an almost best response",
    )?;
    let (lead, _) = game.column_values(&sol.leader)?;
    ensure(
        close(lead[sol.follower_response], sol.leader_payoff),
        "leader payoff matches the profile",
    )
}

pub fn incentive(inst: &IncentiveInstance, sol: &IncentiveSolution) -> Result<(), CliError> {
    ensure(sol.incentive >= 0.0, "incentive is nonnegative")?;
    let chosen = follower_best_set(inst, &sol.strategy)?;
    let realized = leader_payoff(inst, &sol.strategy, &chosen)?;
    ensure(
        close(realized, sol.leader_payoff),
        "follower picks a set worth the reported payoff",
    )?;
    ensure(
        check_incentive_lower_bound(inst, &sol.strategy)?,
        "incentive lower bound",
    )
}

pub fn pm_approx(inst: &PermMatchInstance, sol: &PmApproxSolution) -> Result<(), CliError> {
    ensure(
        inst.transform(&sol.x_prime) == sol.x.edges(),
        "greedy pair satisfies x = pi(x')",
    )?;
    ensure(
        Matching::new(inst.graph(), sol.follower.matching.edges().to_vec()).is_ok(),
        "follower response is a matching",
    )?;
    if sol.follower.leader_favoring {
        ensure(sol.leader_payoff >= sol.payoff_floor - CHECK_TOL, "payoff floor")?;
    }
    Ok(())
}

pub fn pitim(inst: &PermMatchInstance, m: &Matching, value: usize) -> Result<(), CliError> {
    ensure(pitim_value(inst, m)? == value, "reported value matches the matching")
}
