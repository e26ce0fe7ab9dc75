//! Linear programming: a dense two-phase simplex and a cutting-plane
//! wrapper that grows the constraint set from a separation oracle.
//!
//! Problems are always stated as maximization. Variables default to
//! `x >= 0`; use [`LinearProgram::set_bounds`] or [`LinearProgram::set_free`]
//! to change that.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

/// Feasibility tolerance used when checking a solution against its rows.
pub const FEAS_TOL: f64 = 1e-8;

/// Default violation threshold for [`solve_with_generation`].
pub const DEFAULT_GENERATION_TOL: f64 = 1e-7;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-10;
const DROP_TOL: f64 = 1e-14;
const DEGENERATE_STREAK: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("row {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch { row: usize, got: usize, expected: usize },
    #[error("variable {var} has lower bound {lower} above upper bound {upper}")]
    InvalidBounds { var: usize, lower: f64, upper: f64 },
    #[error("non-finite data in the linear program")]
    NonFinite,
    #[error("simplex iteration guard exceeded ({iterations} pivots)")]
    IterationLimit { iterations: usize },
    #[error("constraint generation did not converge in {rounds} rounds")]
    RoundsExhausted { rounds: usize, last: LpSolution },
}

/// A single linear row `coeffs · x (<= or =) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    leq_rows: Vec<Row>,
    eq_rows: Vec<Row>,
    lower: Vec<Option<f64>>,
    upper: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Variable values; empty unless `status` is `Optimal`.
    pub values: Vec<f64>,
    pub objective_value: f64,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        let objective_value = match status {
            LpStatus::Unbounded => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        };
        Self {
            status,
            values: Vec::new(),
            objective_value,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl LinearProgram {
    /// An LP over `num_vars` nonnegative variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            leq_rows: Vec::new(),
            eq_rows: Vec::new(),
            lower: vec![Some(0.0); num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn leq_rows(&self) -> &[Row] {
        &self.leq_rows
    }

    pub fn eq_rows(&self) -> &[Row] {
        &self.eq_rows
    }

    pub fn bounds(&self, var: usize) -> (Option<f64>, Option<f64>) {
        (self.lower[var], self.upper[var])
    }

    pub fn maximize(&mut self, objective: Vec<f64>) -> &mut Self {
        self.objective = objective;
        self
    }

    pub fn add_leq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.leq_rows.push(Row::new(coeffs, rhs));
        self
    }

    /// Adds `coeffs · x >= rhs`, stored as its negated `<=` form.
    pub fn add_geq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        let negated = coeffs.into_iter().map(|a| -a).collect();
        self.leq_rows.push(Row::new(negated, -rhs));
        self
    }

    pub fn add_eq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.eq_rows.push(Row::new(coeffs, rhs));
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<f64>, upper: Option<f64>) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, None, None)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.num_vars {
            return Err(LpError::DimensionMismatch {
                row: usize::MAX,
                got: self.objective.len(),
                expected: self.num_vars,
            });
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite);
        }
        for (i, row) in self.leq_rows.iter().chain(&self.eq_rows).enumerate() {
            if row.coeffs.len() != self.num_vars {
                return Err(LpError::DimensionMismatch {
                    row: i,
                    got: row.coeffs.len(),
                    expected: self.num_vars,
                });
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|a| !a.is_finite()) {
                return Err(LpError::NonFinite);
            }
        }
        for var in 0..self.num_vars {
            match (self.lower[var], self.upper[var]) {
                (Some(l), Some(u)) if l > u => {
                    return Err(LpError::InvalidBounds {
                        var,
                        lower: l,
                        upper: u,
                    })
                }
                (l, u) if l.is_some_and(|l| !l.is_finite()) || u.is_some_and(|u| !u.is_finite()) => {
                    return Err(LpError::NonFinite)
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Largest violation of any row or bound at `x` (0 when feasible).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.leq_rows {
            worst = worst.max(row.activity(x) - row.rhs);
        }
        for row in &self.eq_rows {
            worst = worst.max((row.activity(x) - row.rhs).abs());
        }
        for (j, &v) in x.iter().enumerate() {
            if let Some(l) = self.lower[j] {
                worst = worst.max(l - v);
            }
            if let Some(u) = self.upper[j] {
                worst = worst.max(v - u);
            }
        }
        worst
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

/// Solves `lp` exactly up to floating-point tolerance.
///
/// Infeasible and unbounded problems are reported through
/// [`LpSolution::status`]; only malformed input and a runaway pivot count
/// are errors.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let standard = StandardForm::build(lp);
    let mut tableau = Tableau::new(&standard);

    if !tableau.phase_one()? {
        return Ok(LpSolution::without_point(LpStatus::Infeasible));
    }
    if !tableau.phase_two(&standard.costs)? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded));
    }

    let z = tableau.primal();
    let values = standard.recover(&z);
    let objective_value = lp.objective_at(&values);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        values,
        objective_value,
    })
}

/// A violated `<=` constraint reported by a [`SeparationOracle`].
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
    /// `coeffs · point - rhs` at the queried point.
    pub violation: f64,
}

/// Finds a constraint of an implicit family that the candidate point violates.
///
/// Implementations return the most violated member they can find, or `None`
/// when no member is violated. The reported violation must be honest: the
/// returned row is violated by at least that amount at `point`.
pub trait SeparationOracle {
    fn separate(&mut self, point: &[f64]) -> Option<Cut>;
}

impl<F> SeparationOracle for F
where
    F: FnMut(&[f64]) -> Option<Cut>,
{
    fn separate(&mut self, point: &[f64]) -> Option<Cut> {
        self(point)
    }
}

/// Cutting-plane loop: solve, ask the oracle for a violated row, add it,
/// repeat until no reported violation exceeds `tol`.
///
/// An infeasible or unbounded intermediate LP is returned as-is. The base
/// LP must already be bounded; the oracle only tightens it.
pub fn solve_with_generation<O: SeparationOracle + ?Sized>(
    base: &LinearProgram,
    oracle: &mut O,
    tol: f64,
    max_rounds: usize,
) -> Result<LpSolution, LpError> {
    let mut lp = base.clone();
    let mut last = None;
    for _ in 0..max_rounds {
        let sol = solve(&lp)?;
        if !sol.is_optimal() {
            return Ok(sol);
        }
        match oracle.separate(&sol.values) {
            Some(cut) if cut.violation > tol => {
                lp.add_leq(cut.coeffs, cut.rhs);
                last = Some(sol);
            }
            _ => return Ok(sol),
        }
    }
    let last = match last {
        Some(sol) => sol,
        None => solve(&lp)?,
    };
    Err(LpError::RoundsExhausted {
        rounds: max_rounds,
        last,
    })
}

/// `x_j = offset + sum(sign * z_col)` for each original variable.
struct VarMap {
    offset: f64,
    parts: Vec<(usize, f64)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sense {
    Le,
    Ge,
    Eq,
}

struct StandardForm {
    num_struct: usize,
    rows: Vec<(Vec<f64>, Sense, f64)>,
    costs: Vec<f64>,
    vars: Vec<VarMap>,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut vars = Vec::with_capacity(lp.num_vars);
        let mut num_struct = 0;
        let mut bound_rows = Vec::new();
        for j in 0..lp.num_vars {
            let map = match (lp.lower[j], lp.upper[j]) {
                (Some(l), u) => {
                    let col = num_struct;
                    num_struct += 1;
                    if let Some(u) = u {
                        bound_rows.push((col, u - l));
                    }
                    VarMap {
                        offset: l,
                        parts: vec![(col, 1.0)],
                    }
                }
                (None, Some(u)) => {
                    let col = num_struct;
                    num_struct += 1;
                    VarMap {
                        offset: u,
                        parts: vec![(col, -1.0)],
                    }
                }
                (None, None) => {
                    let col = num_struct;
                    num_struct += 2;
                    VarMap {
                        offset: 0.0,
                        parts: vec![(col, 1.0), (col + 1, -1.0)],
                    }
                }
            };
            vars.push(map);
        }

        let translate = |row: &Row| -> (Vec<f64>, f64) {
            let mut coeffs = vec![0.0; num_struct];
            let mut rhs = row.rhs;
            for (j, &a) in row.coeffs.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                rhs -= a * vars[j].offset;
                for &(col, sign) in &vars[j].parts {
                    coeffs[col] += a * sign;
                }
            }
            (coeffs, rhs)
        };

        let mut rows = Vec::new();
        for row in &lp.leq_rows {
            let (c, b) = translate(row);
            rows.push((c, Sense::Le, b));
        }
        for row in &lp.eq_rows {
            let (c, b) = translate(row);
            rows.push((c, Sense::Eq, b));
        }
        for (col, width) in bound_rows {
            let mut c = vec![0.0; num_struct];
            c[col] = 1.0;
            rows.push((c, Sense::Le, width));
        }
        for row in &mut rows {
            if row.2 < 0.0 {
                row.0.iter_mut().for_each(|a| *a = -*a);
                row.2 = -row.2;
                row.1 = match row.1 {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
            }
        }

        let mut costs = vec![0.0; num_struct];
        for (j, &c) in lp.objective.iter().enumerate() {
            for &(col, sign) in &vars[j].parts {
                costs[col] += c * sign;
            }
        }

        Self {
            num_struct,
            rows,
            costs,
            vars,
        }
    }

    fn recover(&self, z: &[f64]) -> Vec<f64> {
        self.vars
            .iter()
            .map(|m| m.offset + m.parts.iter().map(|&(col, s)| s * z[col]).sum::<f64>())
            .collect()
    }
}

struct Tableau {
    /// Row-major, `width + 1` entries per row; the last entry is the rhs.
    cells: Vec<f64>,
    width: usize,
    basis: Vec<usize>,
    active: Vec<bool>,
    num_struct: usize,
    first_artificial: usize,
    reduced: Vec<f64>,
    pivots: usize,
    max_pivots: usize,
}

impl Tableau {
    fn new(sf: &StandardForm) -> Self {
        let m = sf.rows.len();
        let num_slack = sf.rows.iter().filter(|r| r.1 != Sense::Eq).count();
        let num_art = sf.rows.iter().filter(|r| r.1 != Sense::Le).count();
        let first_artificial = sf.num_struct + num_slack;
        let width = first_artificial + num_art;
        let stride = width + 1;
        let mut cells = vec![0.0; m * stride];
        let mut basis = vec![0; m];
        let mut slack = sf.num_struct;
        let mut art = first_artificial;
        for (i, (coeffs, sense, rhs)) in sf.rows.iter().enumerate() {
            let row = &mut cells[i * stride..(i + 1) * stride];
            row[..sf.num_struct].copy_from_slice(coeffs);
            row[width] = *rhs;
            match sense {
                Sense::Le => {
                    row[slack] = 1.0;
                    basis[i] = slack;
                    slack += 1;
                }
                Sense::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
                Sense::Eq => {
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        Self {
            cells,
            width,
            basis,
            active: vec![true; m],
            num_struct: sf.num_struct,
            first_artificial,
            reduced: vec![0.0; width],
            pivots: 0,
            max_pivots: 10_000 + 50 * (m + width),
        }
    }

    fn stride(&self) -> usize {
        self.width + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.stride() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width)
    }

    fn rows(&self) -> usize {
        self.basis.len()
    }

    /// Recomputes reduced costs `c_j - c_B B^-1 A_j` from scratch.
    fn price(&mut self, costs: &[f64]) {
        let mut reduced = costs.to_vec();
        reduced.resize(self.width, 0.0);
        for i in 0..self.rows() {
            if !self.active[i] {
                continue;
            }
            let cb = costs.get(self.basis[i]).copied().unwrap_or(0.0);
            if cb == 0.0 {
                continue;
            }
            for (j, r) in reduced.iter_mut().enumerate() {
                *r -= cb * self.at(i, j);
            }
        }
        self.reduced = reduced;
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let stride = self.stride();
        let p = self.cells[r * stride + q];
        {
            let row = &mut self.cells[r * stride..(r + 1) * stride];
            row.iter_mut().for_each(|a| *a /= p);
            row[q] = 1.0;
        }
        let pivot_row: Vec<f64> = self.cells[r * stride..(r + 1) * stride].to_vec();
        for i in 0..self.rows() {
            if i == r || !self.active[i] {
                continue;
            }
            let f = self.cells[i * stride + q];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.cells[i * stride..(i + 1) * stride];
            for (a, &b) in row.iter_mut().zip(&pivot_row) {
                *a -= f * b;
                if a.abs() < DROP_TOL {
                    *a = 0.0;
                }
            }
            row[q] = 0.0;
        }
        let f = self.reduced[q];
        if f != 0.0 {
            for (d, &b) in self.reduced.iter_mut().zip(&pivot_row) {
                *d -= f * b;
            }
            self.reduced[q] = 0.0;
        }
        self.basis[r] = q;
        self.pivots += 1;
    }

    /// Runs primal simplex over columns `< limit`. Returns `false` when unbounded.
    fn optimize(&mut self, limit: usize) -> Result<bool, LpError> {
        let mut bland = false;
        let mut streak = 0;
        loop {
            if self.pivots > self.max_pivots {
                return Err(LpError::IterationLimit {
                    iterations: self.pivots,
                });
            }
            let entering = if bland {
                (0..limit).find(|&j| self.reduced[j] > COST_TOL)
            } else {
                (0..limit)
                    .filter(|&j| self.reduced[j] > COST_TOL)
                    .fold(None, |best: Option<usize>, j| match best {
                        Some(b) if self.reduced[b] >= self.reduced[j] => Some(b),
                        _ => Some(j),
                    })
            };
            let Some(q) = entering else {
                return Ok(true);
            };

            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows() {
                if !self.active[i] {
                    continue;
                }
                let a = self.at(i, q);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[k]
                            } else {
                                a > self.at(k, q)
                            }
                        } else {
                            ratio < best
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((r, ratio)) = leave else {
                return Ok(false);
            };
            if ratio <= 1e-12 {
                streak += 1;
                if streak >= DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                streak = 0;
            }
            self.pivot(r, q);
        }
    }

    /// Drives artificial variables to zero. Returns `false` when infeasible.
    fn phase_one(&mut self) -> Result<bool, LpError> {
        if self.first_artificial == self.width {
            return Ok(true);
        }
        let costs: Vec<f64> = (0..self.width)
            .map(|j| if j >= self.first_artificial { -1.0 } else { 0.0 })
            .collect();
        self.price(&costs);
        self.optimize(self.width)?;

        let scale = (0..self.rows()).map(|i| self.rhs(i).abs()).fold(1.0, f64::max);
        let infeasibility: f64 = (0..self.rows())
            .filter(|&i| self.basis[i] >= self.first_artificial)
            .map(|i| self.rhs(i))
            .sum();
        if infeasibility > 1e-9 * scale {
            return Ok(false);
        }

        for i in 0..self.rows() {
            if self.basis[i] < self.first_artificial {
                continue;
            }
            let replacement = (0..self.first_artificial)
                .filter(|&j| self.at(i, j).abs() > PIVOT_TOL)
                .max_by(|&a, &b| self.at(i, a).abs().total_cmp(&self.at(i, b).abs()));
            match replacement {
                Some(j) => self.pivot(i, j),
                None => self.active[i] = false,
            }
        }
        Ok(true)
    }

    fn phase_two(&mut self, costs: &[f64]) -> Result<bool, LpError> {
        self.price(costs);
        self.optimize(self.first_artificial)
    }

    fn primal(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.num_struct];
        for (i, &b) in self.basis.iter().enumerate() {
            if self.active[i] && b < self.num_struct {
                z[b] = self.rhs(i).max(0.0);
            }
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9
    }

    #[test]
    fn single_upper_bound() {
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![1.0]).add_leq(vec![1.0], 3.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(approx(sol.values[0], 3.0));
        assert!(approx(sol.objective_value, 3.0));
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![1.0]).add_leq(vec![1.0], 1.0).add_leq(vec![-1.0], -2.0);
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![1.0, 1.0]).add_leq(vec![1.0, -1.0], 1.0);
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_boxed_variables() {
        // max -y s.t. y >= x - 2, y >= 2 - x, x in [0, 5], y free -> y = 0 at x = 2
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![0.0, -1.0])
            .add_geq(vec![-1.0, 1.0], -2.0)
            .add_geq(vec![1.0, 1.0], 2.0)
            .set_bounds(0, Some(0.0), Some(5.0))
            .set_free(1);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(approx(sol.objective_value, 0.0));
        assert!(approx(sol.values[0], 2.0));

        // a variable with only an upper bound
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![-1.0])
            .set_bounds(0, None, Some(4.0))
            .add_geq(vec![1.0], -3.0);
        let sol = solve(&lp).unwrap();
        assert!(approx(sol.values[0], -3.0));
    }

    #[test]
    fn equality_rows_and_redundancy() {
        let mut lp = LinearProgram::new(3);
        lp.maximize(vec![1.0, 2.0, 3.0])
            .add_eq(vec![1.0, 1.0, 1.0], 1.0)
            .add_eq(vec![2.0, 2.0, 2.0], 2.0)
            .add_leq(vec![0.0, 0.0, 1.0], 0.5);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(approx(sol.objective_value, 2.5));
        assert!(lp.max_violation(&sol.values) <= FEAS_TOL);
    }

    #[test]
    fn bad_input_is_rejected() {
        let mut lp = LinearProgram::new(2);
        lp.add_leq(vec![1.0], 1.0);
        assert!(matches!(solve(&lp), Err(LpError::DimensionMismatch { .. })));

        let mut lp = LinearProgram::new(1);
        lp.set_bounds(0, Some(2.0), Some(1.0));
        assert!(matches!(solve(&lp), Err(LpError::InvalidBounds { .. })));

        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![f64::NAN]);
        assert_eq!(solve(&lp), Err(LpError::NonFinite));
    }

    #[test]
    fn degenerate_vertex() {
        // Klee-Minty-like degenerate corner: many constraints through the origin.
        let mut lp = LinearProgram::new(3);
        lp.maximize(vec![10.0, -57.0, -9.0])
            .add_leq(vec![0.5, -5.5, -2.5], 0.0)
            .add_leq(vec![0.5, -1.5, -0.5], 0.0)
            .add_leq(vec![1.0, 0.0, 0.0], 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(approx(sol.objective_value, 1.0));
    }

    #[test]
    fn vacuous_oracle_matches_plain_solve() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![1.0, 1.0])
            .add_leq(vec![1.0, 2.0], 4.0)
            .add_leq(vec![3.0, 1.0], 6.0);
        let mut never = |_: &[f64]| -> Option<Cut> { None };
        let generated = solve_with_generation(&lp, &mut never, DEFAULT_GENERATION_TOL, 10).unwrap();
        assert_eq!(generated, solve(&lp).unwrap());
    }

    #[test]
    fn generation_reports_exhaustion() {
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![1.0]).add_leq(vec![1.0], 10.0);
        // Always claims a violation but never cuts the optimum off.
        let mut liar = |_: &[f64]| -> Option<Cut> {
            Some(Cut {
                coeffs: vec![0.0],
                rhs: 1.0,
                violation: 1.0,
            })
        };
        match solve_with_generation(&lp, &mut liar, 1e-7, 3) {
            Err(LpError::RoundsExhausted { rounds: 3, last }) => {
                assert!(approx(last.objective_value, 10.0))
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
