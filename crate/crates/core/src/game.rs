//! Explicit two-player general-sum games and their exact solvers.
//!
//! The row player is the leader, the column player the follower. Follower
//! best responses break payoff ties in the leader's favor, then by lowest
//! column index.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::linalg::solve_square;
use crate::lp::{self, LinearProgram, LpError, LpStatus};
use crate::TIE_TOL;

/// Largest side for [`solve_nash_support_enumeration`].
pub const NASH_SIZE_LIMIT: usize = 8;

const PROB_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("a game needs at least one strategy per player (got {rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("payoff matrix has {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error("payoff entries must be finite")]
    NonFinite,
    #[error("strategy has {got} entries, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(&'static str),
    #[error("game is {rows}x{cols}, support enumeration is limited to {limit}x{limit}")]
    SizeLimit { rows: usize, cols: usize, limit: usize },
    #[error("no follower action admits a feasible leader commitment")]
    NoFeasibleColumn,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Leader and follower payoff matrices, both `rows × cols`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame {
    rows: usize,
    cols: usize,
    leader: Vec<f64>,
    follower: Vec<f64>,
}

impl BimatrixGame {
    pub fn new(rows: usize, cols: usize, leader: Vec<f64>, follower: Vec<f64>) -> Result<Self, GameError> {
        if rows == 0 || cols == 0 {
            return Err(GameError::Empty { rows, cols });
        }
        for m in [&leader, &follower] {
            if m.len() != rows * cols {
                return Err(GameError::Shape {
                    expected: rows * cols,
                    got: m.len(),
                });
            }
            if m.iter().any(|v| !v.is_finite()) {
                return Err(GameError::NonFinite);
            }
        }
        Ok(Self {
            rows,
            cols,
            leader,
            follower,
        })
    }

    /// Builds a game from nested rows; all rows must have equal length.
    pub fn from_rows(leader: &[Vec<f64>], follower: &[Vec<f64>]) -> Result<Self, GameError> {
        let rows = leader.len();
        let cols = leader.first().map_or(0, Vec::len);
        if follower.len() != rows {
            return Err(GameError::Shape {
                expected: rows,
                got: follower.len(),
            });
        }
        for r in leader.iter().chain(follower) {
            if r.len() != cols {
                return Err(GameError::Shape {
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Self::new(rows, cols, leader.concat(), follower.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn leader(&self, i: usize, j: usize) -> f64 {
        self.leader[i * self.cols + j]
    }

    pub fn follower(&self, i: usize, j: usize) -> f64 {
        self.follower[i * self.cols + j]
    }

    pub fn leader_matrix(&self) -> &[f64] {
        &self.leader
    }

    pub fn follower_matrix(&self) -> &[f64] {
        &self.follower
    }

    /// Expected (leader, follower) payoff of every column against `x`.
    pub fn column_values(&self, x: &MixedStrategy) -> Result<(Vec<f64>, Vec<f64>), GameError> {
        self.check_len(x.len(), self.rows)?;
        let mut lead = vec![0.0; self.cols];
        let mut foll = vec![0.0; self.cols];
        for (i, &p) in x.probs().iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for j in 0..self.cols {
                lead[j] += p * self.leader(i, j);
                foll[j] += p * self.follower(i, j);
            }
        }
        Ok((lead, foll))
    }

    fn check_len(&self, got: usize, expected: usize) -> Result<(), GameError> {
        if got == expected {
            Ok(())
        } else {
            Err(GameError::DimensionMismatch { expected, got })
        }
    }
}

/// A probability vector over pure strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self, GameError> {
        if probs.is_empty() {
            return Err(GameError::InvalidStrategy("empty"));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(GameError::InvalidStrategy("entries must be finite and nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(GameError::InvalidStrategy("entries must sum to 1"));
        }
        Ok(Self(probs))
    }

    pub fn pure(len: usize, index: usize) -> Self {
        let mut probs = vec![0.0; len];
        probs[index] = 1.0;
        Self(probs)
    }

    pub fn uniform(len: usize) -> Self {
        Self(vec![1.0 / len as f64; len])
    }

    /// Clamps solver noise (tiny negatives) and renormalizes.
    pub(crate) fn from_solver(values: &[f64]) -> Self {
        let mut probs: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
        let total: f64 = probs.iter().sum();
        if total > 0.0 {
            probs.iter_mut().for_each(|p| *p /= total);
        }
        Self(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Leader,
    Follower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StackelbergSolution {
    pub leader: MixedStrategy,
    pub follower_response: usize,
    pub leader_payoff: f64,
    pub follower_payoff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximinProfile {
    pub leader: MixedStrategy,
    pub follower: MixedStrategy,
    pub leader_payoff: f64,
    pub follower_payoff: f64,
}

pub fn expected_utilities(game: &BimatrixGame, x: &MixedStrategy, y: &MixedStrategy) -> Result<(f64, f64), GameError> {
    game.check_len(y.len(), game.cols)?;
    let (lead, foll) = game.column_values(x)?;
    let dot = |v: &[f64]| v.iter().zip(y.probs()).map(|(a, b)| a * b).sum::<f64>();
    Ok((dot(&lead), dot(&foll)))
}

/// Follower pure best response to `x`; ties go to the leader, then the
/// lowest index.
pub fn follower_best_response(game: &BimatrixGame, x: &MixedStrategy) -> Result<usize, GameError> {
    let (lead, foll) = game.column_values(x)?;
    Ok(best_column(&lead, &foll))
}

pub(crate) fn best_column(lead: &[f64], foll: &[f64]) -> usize {
    let top = foll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best: Option<usize> = None;
    for j in 0..foll.len() {
        if foll[j] < top - TIE_TOL {
            continue;
        }
        match best {
            Some(b) if lead[j] <= lead[b] + TIE_TOL => {}
            _ => best = Some(j),
        }
    }
    best.unwrap_or(0)
}

/// Exact Stackelberg equilibrium by solving one LP per follower action.
///
/// For column `j` the LP maximizes the leader's payoff against `j` over
/// leader mixed strategies that make `j` a (weak) best response. Columns
/// whose best conceivable leader payoff cannot beat the incumbent are
/// skipped without changing the result.
pub fn solve_stackelberg(game: &BimatrixGame) -> Result<StackelbergSolution, GameError> {
    let n = game.rows;
    let m = game.cols;

    let mut order: Vec<(usize, f64)> = (0..m)
        .map(|j| {
            let ub = (0..n).map(|i| game.leader(i, j)).fold(f64::NEG_INFINITY, f64::max);
            (j, ub)
        })
        .collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut best: Option<(f64, Vec<f64>)> = None;
    for (j, upper) in order {
        if let Some((value, _)) = &best {
            if upper <= *value {
                break;
            }
        }
        let mut lp = LinearProgram::new(n);
        lp.maximize((0..n).map(|i| game.leader(i, j)).collect());
        lp.add_eq(vec![1.0; n], 1.0);
        for other in (0..m).filter(|&k| k != j) {
            let row = (0..n).map(|i| game.follower(i, other) - game.follower(i, j)).collect();
            lp.add_leq(row, 0.0);
        }
        let sol = lp::solve(&lp)?;
        if sol.status != LpStatus::Optimal {
            continue;
        }
        let improves = match &best {
            Some((value, _)) => sol.objective_value > *value,
            None => true,
        };
        if improves {
            best = Some((sol.objective_value, sol.values));
        }
    }

    let (_, values) = best.ok_or(GameError::NoFeasibleColumn)?;
    let leader = MixedStrategy::from_solver(&values);
    let (lead, foll) = game.column_values(&leader)?;
    let response = best_column(&lead, &foll);
    Ok(StackelbergSolution {
        leader_payoff: lead[response],
        follower_payoff: foll[response],
        follower_response: response,
        leader,
    })
}

/// The strategy maximizing `player`'s worst-case own payoff, with that
/// guaranteed value.
pub fn solve_maximin(game: &BimatrixGame, player: Player) -> Result<(MixedStrategy, f64), GameError> {
    let (own, opposing) = match player {
        Player::Leader => (game.rows, game.cols),
        Player::Follower => (game.cols, game.rows),
    };
    let payoff = |mine: usize, theirs: usize| match player {
        Player::Leader => game.leader(mine, theirs),
        Player::Follower => game.follower(theirs, mine),
    };
    // variables: own strategy probabilities, then the free value v
    let mut lp = LinearProgram::new(own + 1);
    let mut objective = vec![0.0; own + 1];
    objective[own] = 1.0;
    lp.maximize(objective).set_free(own);
    let mut simplex = vec![1.0; own + 1];
    simplex[own] = 0.0;
    lp.add_eq(simplex, 1.0);
    for theirs in 0..opposing {
        let mut row: Vec<f64> = (0..own).map(|mine| -payoff(mine, theirs)).collect();
        row.push(1.0);
        lp.add_leq(row, 0.0);
    }
    let sol = lp::solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(GameError::NoFeasibleColumn);
    }
    let strategy = MixedStrategy::from_solver(&sol.values[..own]);
    let guaranteed = (0..opposing)
        .map(|theirs| {
            (0..own)
                .map(|mine| strategy.probs()[mine] * payoff(mine, theirs))
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    Ok((strategy, guaranteed))
}

/// Both players play their maximin strategies; returns the realized payoffs.
pub fn realized_maximin_profile(game: &BimatrixGame) -> Result<MaximinProfile, GameError> {
    let (leader, _) = solve_maximin(game, Player::Leader)?;
    let (follower, _) = solve_maximin(game, Player::Follower)?;
    let (leader_payoff, follower_payoff) = expected_utilities(game, &leader, &follower)?;
    Ok(MaximinProfile {
        leader,
        follower,
        leader_payoff,
        follower_payoff,
    })
}

/// All Nash equilibria found by enumerating equal-size support pairs.
///
/// Complete for nondegenerate games. Limited to
/// [`NASH_SIZE_LIMIT`] strategies per player.
pub fn solve_nash_support_enumeration(game: &BimatrixGame) -> Result<Vec<(MixedStrategy, MixedStrategy)>, GameError> {
    let (n, m) = (game.rows, game.cols);
    if n > NASH_SIZE_LIMIT || m > NASH_SIZE_LIMIT {
        return Err(GameError::SizeLimit {
            rows: n,
            cols: m,
            limit: NASH_SIZE_LIMIT,
        });
    }
    let mut found: Vec<(MixedStrategy, MixedStrategy)> = Vec::new();
    for size in 1..=n.min(m) {
        for rows in subsets(n, size) {
            for cols in subsets(m, size) {
                let Some(y) = indifferent(&rows, &cols, m, |i, j| game.leader(i, j)) else {
                    continue;
                };
                let Some(x) = indifferent(&cols, &rows, n, |j, i| game.follower(i, j)) else {
                    continue;
                };
                let (x, y) = (MixedStrategy(x), MixedStrategy(y));
                if !is_nash(game, &x, &y) {
                    continue;
                }
                let duplicate = found
                    .iter()
                    .any(|(fx, fy)| close(fx.probs(), x.probs()) && close(fy.probs(), y.probs()));
                if !duplicate {
                    found.push((x, y));
                }
            }
        }
    }
    Ok(found)
}

/// Distribution over `mix` (embedded into a vector of length `len`) that
/// makes every strategy in `indiff` earn the same payoff. `payoff(a, b)`
/// is the payoff of `a ∈ indiff` against `b ∈ mix`.
fn indifferent(indiff: &[usize], mix: &[usize], len: usize, payoff: impl Fn(usize, usize) -> f64) -> Option<Vec<f64>> {
    let k = mix.len();
    let dim = k + 1;
    let mut a = vec![0.0; dim * dim];
    let mut b = vec![0.0; dim];
    for (r, &s) in indiff.iter().enumerate() {
        for (c, &t) in mix.iter().enumerate() {
            a[r * dim + c] = payoff(s, t);
        }
        a[r * dim + k] = -1.0;
    }
    for c in 0..k {
        a[k * dim + c] = 1.0;
    }
    b[k] = 1.0;
    let sol = solve_square(a, b)?;
    if sol[..k].iter().any(|&p| p < -PROB_TOL) {
        return None;
    }
    let mut full = vec![0.0; len];
    for (c, &t) in mix.iter().enumerate() {
        full[t] = sol[c].max(0.0);
    }
    let total: f64 = full.iter().sum();
    full.iter_mut().for_each(|p| *p /= total);
    Some(full)
}

fn is_nash(game: &BimatrixGame, x: &MixedStrategy, y: &MixedStrategy) -> bool {
    let Ok((value_l, value_f)) = expected_utilities(game, x, y) else {
        return false;
    };
    let (_, foll) = match game.column_values(x) {
        Ok(v) => v,
        Err(_) => return false,
    };
    if foll.iter().any(|&f| f > value_f + TIE_TOL) {
        return false;
    }
    (0..game.rows).all(|i| {
        let row: f64 = (0..game.cols).map(|j| y.probs()[j] * game.leader(i, j)).sum();
        row <= value_l + TIE_TOL
    })
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(p, q)| (p - q).abs() <= 1e-9)
}

/// All `size`-element subsets of `0..n` in lexicographic order.
fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..size).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (0..size).rev().find(|&i| current[i] < n - size + i) else {
            return out;
        };
        current[i] += 1;
        for k in i + 1..size {
            current[k] = current[k - 1] + 1;
        }
    }
}
