//! Epsilon-grid approximation of a Stackelberg equilibrium.
//!
//! Every leader strategy whose probabilities are multiples of `eps = 1/k`
//! is tried; against each, the follower may pick any action within
//! `2nεM` of its best response, and the pick that helps the leader most
//! is recorded. The best recorded pair is returned.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::game::{BimatrixGame, GameError, MixedStrategy};
use crate::TIE_TOL;

/// Default cap on the number of grid points.
pub const DEFAULT_GRID_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscretizeError {
    #[error("eps must be 1/k for a positive integer k")]
    InvalidEps,
    #[error("grid has {count} points, cap is {cap}")]
    GridTooLarge { count: u64, cap: u64 },
    #[error("slack must be finite and nonnegative")]
    InvalidSlack,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Grid resolution, kept as the integer `k = 1/eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridParams {
    k: u64,
}

impl GridParams {
    pub fn new(k: u64) -> Result<Self, DiscretizeError> {
        if k == 0 {
            return Err(DiscretizeError::InvalidEps);
        }
        Ok(Self { k })
    }

    /// `eps = p/q`; accepted only when it reduces to `1/k`.
    pub fn from_ratio(p: u64, q: u64) -> Result<Self, DiscretizeError> {
        if p == 0 || q == 0 || !q.is_multiple_of(p) {
            return Err(DiscretizeError::InvalidEps);
        }
        Self::new(q / p)
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn eps(&self) -> f64 {
        1.0 / self.k as f64
    }
}

/// `C(n + k - 1, n - 1)`, or `None` on overflow.
pub fn grid_size(n: usize, params: GridParams) -> Option<u64> {
    let k = params.k as u128;
    let mut count: u128 = 1;
    for i in 1..n as u128 {
        count = count.checked_mul(k + i)? / i;
        if count > u64::MAX as u128 {
            return None;
        }
    }
    Some(count as u64)
}

/// Compositions of `k` into `n` parts in ascending lexicographic order.
#[derive(Debug, Clone)]
pub struct GridIter {
    current: Option<Vec<u64>>,
}

impl GridIter {
    fn new(n: usize, k: u64) -> Self {
        let current = (n > 0).then(|| {
            let mut first = vec![0; n];
            first[n - 1] = k;
            first
        });
        Self { current }
    }
}

impl Iterator for GridIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let n = out.len();
        let mut next = out.clone();
        // rightmost position (before the last) with mass somewhere to its right
        let mut tail = next[n - 1];
        let mut i = n - 1;
        while i > 0 {
            i -= 1;
            if tail > 0 {
                next[i] += 1;
                for v in &mut next[i + 1..] {
                    *v = 0;
                }
                next[n - 1] = tail - 1;
                self.current = Some(next);
                break;
            }
            tail += next[i];
        }
        Some(out)
    }
}

/// Grid points as integer numerators over `k`, after checking the count
/// against `cap`.
pub fn grid_numerators(n: usize, params: GridParams, cap: u64) -> Result<GridIter, DiscretizeError> {
    if n == 0 {
        return Err(GameError::Empty { rows: 0, cols: 0 }.into());
    }
    match grid_size(n, params) {
        Some(count) if count <= cap => Ok(GridIter::new(n, params.k)),
        count => Err(DiscretizeError::GridTooLarge {
            count: count.unwrap_or(u64::MAX),
            cap,
        }),
    }
}

/// All grid strategies, materialized.
pub fn grid_strategies(n: usize, params: GridParams, cap: u64) -> Result<Vec<MixedStrategy>, DiscretizeError> {
    Ok(grid_numerators(n, params, cap)?
        .map(|num| to_strategy(&num, params.k))
        .collect())
}

fn to_strategy(num: &[u64], k: u64) -> MixedStrategy {
    MixedStrategy::new(num.iter().map(|&a| a as f64 / k as f64).collect()).expect("grid point is a distribution")
}

/// Largest absolute entry over both payoff matrices.
pub fn max_abs_payoff(game: &BimatrixGame) -> f64 {
    game.leader_matrix()
        .iter()
        .chain(game.follower_matrix())
        .fold(0.0, |m, v| f64::max(m, v.abs()))
}

/// Follower actions within `slack` of the best response against `x`.
pub fn almost_best_responses(
    game: &BimatrixGame,
    x: &MixedStrategy,
    slack: f64,
) -> Result<Vec<usize>, DiscretizeError> {
    if !slack.is_finite() || slack < 0.0 {
        return Err(DiscretizeError::InvalidSlack);
    }
    let (_, foll) = game.column_values(x)?;
    Ok(almost_best(&foll, slack))
}

fn almost_best(foll: &[f64], slack: f64) -> Vec<usize> {
    let top = foll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..foll.len()).filter(|&j| foll[j] >= top - slack - 1e-12).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxSolution {
    pub leader: MixedStrategy,
    /// `leader[i] = numerators[i] / k`.
    pub numerators: Vec<u64>,
    pub k: u64,
    pub follower_response: usize,
    pub leader_payoff: f64,
    pub follower_payoff: f64,
    /// Follower's exact best-response payoff against `leader`.
    pub best_response_payoff: f64,
    pub slack: f64,
    pub max_abs_payoff: f64,
    pub grid_size: u64,
    /// Total size of the almost-best-response sets scanned.
    pub candidates_examined: u64,
}

/// Grid search with slack `2nεM`.
pub fn discretized_se(game: &BimatrixGame, params: GridParams, cap: u64) -> Result<ApproxSolution, DiscretizeError> {
    let m = max_abs_payoff(game);
    let slack = 2.0 * game.rows() as f64 * params.eps() * m;
    discretized_se_with_slack(game, params, cap, slack)
}

/// Grid search with an explicit slack. Ties between grid points go to the
/// lexicographically first one, ties within a point to the lowest action.
pub fn discretized_se_with_slack(
    game: &BimatrixGame,
    params: GridParams,
    cap: u64,
    slack: f64,
) -> Result<ApproxSolution, DiscretizeError> {
    if !slack.is_finite() || slack < 0.0 {
        return Err(DiscretizeError::InvalidSlack);
    }
    let grid = grid_numerators(game.rows(), params, cap)?;
    let mut examined = 0u64;
    let mut points = 0u64;
    let mut best: Option<ApproxSolution> = None;
    for num in grid {
        points += 1;
        let x = to_strategy(&num, params.k);
        let (lead, foll) = game.column_values(&x)?;
        let candidates = almost_best(&foll, slack);
        examined += candidates.len() as u64;
        let mut pick = candidates[0];
        for &j in &candidates[1..] {
            if lead[j] > lead[pick] {
                pick = j;
            }
        }
        if best.as_ref().is_some_and(|b| lead[pick] <= b.leader_payoff + TIE_TOL) {
            continue;
        }
        best = Some(ApproxSolution {
            leader: x,
            numerators: num,
            k: params.k,
            follower_response: pick,
            leader_payoff: lead[pick],
            follower_payoff: foll[pick],
            best_response_payoff: foll.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            slack,
            max_abs_payoff: max_abs_payoff(game),
            grid_size: 0,
            candidates_examined: 0,
        });
    }
    let mut sol = best.expect("grid is nonempty");
    sol.grid_size = points;
    sol.candidates_examined = examined;
    Ok(sol)
}

/// Rechecks a solution: the leader lies on its grid, reported payoffs match
/// the game, the follower is within `slack` of its best response, and the
/// leader is no worse than `exact_leader_payoff - slack`.
pub fn verify_eps_approx(game: &BimatrixGame, sol: &ApproxSolution, exact_leader_payoff: f64) -> bool {
    const TOL: f64 = 1e-9;
    if sol.k == 0
        || sol.numerators.len() != game.rows()
        || sol.leader.len() != game.rows()
        || sol.numerators.iter().sum::<u64>() != sol.k
        || sol.follower_response >= game.cols()
    {
        return false;
    }
    let on_grid = sol
        .numerators
        .iter()
        .zip(sol.leader.probs())
        .all(|(&a, &p)| p == a as f64 / sol.k as f64);
    if !on_grid {
        return false;
    }
    let Ok((lead, foll)) = game.column_values(&sol.leader) else {
        return false;
    };
    let j = sol.follower_response;
    let top = foll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lead[j] - sol.leader_payoff).abs() <= TOL
        && (foll[j] - sol.follower_payoff).abs() <= TOL
        && foll[j] >= top - sol.slack - TOL
        && lead[j] >= exact_leader_payoff - sol.slack - TOL
}
