//! Dense two-phase primal simplex for `max cᵀx` s.t. `Ax ≤ b`, `x ≥ 0`.
//!
//! Pivoting follows Bland's rule (lowest eligible index enters, ties in the
//! ratio test broken by lowest basic index), so the iteration sequence is a
//! pure function of the input and degenerate problems cannot cycle.

use crate::error::{Error, Result};

pub const PIVOT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    // row-major, n_constraints x n_vars
    matrix: Vec<f64>,
    bounds: Vec<f64>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>, rows: Vec<Vec<f64>>, bounds: Vec<f64>) -> Result<Self> {
        let n = objective.len();
        if rows.len() != bounds.len() {
            return Err(Error::Shape {
                what: "constraint bounds",
                expected: rows.len(),
                found: bounds.len(),
            });
        }
        let mut matrix = Vec::with_capacity(rows.len() * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Shape {
                    what: "constraint row",
                    expected: n,
                    found: row.len(),
                });
            }
            matrix.extend(row);
        }
        Self::from_dense(objective, matrix, bounds)
    }

    /// Builds a problem from an already flattened row-major matrix.
    pub fn from_dense(objective: Vec<f64>, matrix: Vec<f64>, bounds: Vec<f64>) -> Result<Self> {
        let expected = objective.len() * bounds.len();
        if matrix.len() != expected {
            return Err(Error::Shape {
                what: "constraint matrix",
                expected,
                found: matrix.len(),
            });
        }
        if objective
            .iter()
            .chain(&matrix)
            .chain(&bounds)
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidArgument("non-finite LP coefficient".into()));
        }
        Ok(Self {
            objective,
            matrix,
            bounds,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.bounds.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n_vars();
        &self.matrix[i * n..(i + 1) * n]
    }

    /// Largest violation of `Ax ≤ b` and `x ≥ 0` at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let neg = x.iter().map(|v| -v).fold(0.0, f64::max);
        (0..self.n_constraints())
            .map(|i| {
                let lhs: f64 = self.row(i).iter().zip(x).map(|(a, v)| a * v).sum();
                lhs - self.bounds[i]
            })
            .fold(neg, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    LimitExceeded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value at `solution`; meaningful only when optimal.
    pub optimum: f64,
    pub solution: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn into_optimal(self) -> Result<Self> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            LpStatus::LimitExceeded => Err(Error::IterationLimit(self.iterations)),
            other => Err(Error::Solver(other)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    pub pivot_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            pivot_tol: PIVOT_TOL,
        }
    }
}

pub fn solve_lp(problem: &LpProblem) -> LpSolution {
    solve_lp_with(problem, SimplexOptions::default())
}

pub fn solve_lp_with(problem: &LpProblem, opts: SimplexOptions) -> LpSolution {
    Tableau::build(problem, opts).run()
}

enum Phase {
    Done,
    Unbounded,
    Limit,
}

/// Columns: original variables, one slack per row, then artificials for rows
/// whose bound is negative. The last column is the right-hand side.
struct Tableau {
    n: usize,
    m: usize,
    n_art: usize,
    width: usize,
    cells: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    objective: Vec<f64>,
    opts: SimplexOptions,
    iterations: usize,
}

impl Tableau {
    fn build(p: &LpProblem, opts: SimplexOptions) -> Self {
        let n = p.n_vars();
        let m = p.n_constraints();
        let n_art = p.bounds.iter().filter(|b| **b < 0.0).count();
        let width = n + m + n_art + 1;
        let mut cells = vec![0.0; m * width];
        let mut basis = Vec::with_capacity(m);
        let mut next_art = n + m;
        for i in 0..m {
            let row = &mut cells[i * width..(i + 1) * width];
            let flip = if p.bounds[i] < 0.0 { -1.0 } else { 1.0 };
            for (dst, a) in row[..n].iter_mut().zip(p.row(i)) {
                *dst = flip * a;
            }
            row[n + i] = flip;
            row[width - 1] = flip * p.bounds[i];
            if flip < 0.0 {
                row[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            } else {
                basis.push(n + i);
            }
        }
        Self {
            n,
            m,
            n_art,
            width,
            cells,
            obj: vec![0.0; width],
            basis,
            objective: p.objective.clone(),
            opts,
            iterations: 0,
        }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    fn run(mut self) -> LpSolution {
        if self.n_art > 0 {
            // phase 1: maximise -(sum of artificials)
            self.obj.iter_mut().for_each(|v| *v = 0.0);
            for j in self.n + self.m..self.width - 1 {
                self.obj[j] = -1.0;
            }
            self.price_out();
            match self.iterate(self.width - 1) {
                Phase::Limit => return self.finish(LpStatus::LimitExceeded),
                Phase::Unbounded => unreachable!("phase 1 objective is bounded above by 0"),
                Phase::Done => {}
            }
            // obj rhs holds -(phase objective) = sum of artificials
            if self.obj[self.width - 1] > self.feasibility_tol() {
                return self.finish(LpStatus::Infeasible);
            }
            self.drive_out_artificials();
        }

        self.obj.iter_mut().for_each(|v| *v = 0.0);
        self.obj[..self.n].copy_from_slice(&self.objective);
        self.price_out();
        let status = match self.iterate(self.n + self.m) {
            Phase::Done => LpStatus::Optimal,
            Phase::Unbounded => LpStatus::Unbounded,
            Phase::Limit => LpStatus::LimitExceeded,
        };
        self.finish(status)
    }

    fn feasibility_tol(&self) -> f64 {
        let scale = (0..self.m).map(|i| self.rhs(i).abs()).fold(1.0, f64::max);
        1e-9 * scale
    }

    /// Makes the objective row consistent with the current basis.
    fn price_out(&mut self) {
        for i in 0..self.m {
            let c = self.obj[self.basis[i]];
            if c != 0.0 {
                let row = &self.cells[i * self.width..(i + 1) * self.width];
                for (o, a) in self.obj.iter_mut().zip(row) {
                    *o -= c * a;
                }
            }
        }
    }

    /// Runs Bland pivots; columns at or beyond `col_limit` may not enter.
    fn iterate(&mut self, col_limit: usize) -> Phase {
        let tol = self.opts.pivot_tol;
        loop {
            let Some(enter) = (0..col_limit).find(|&j| self.obj[j] > tol) else {
                return Phase::Done;
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, enter);
                if a > tol {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) => {
                            if ratio < best - tol
                                || (ratio <= best + tol && self.basis[i] < self.basis[r])
                            {
                                Some((i, ratio.min(best)))
                            } else {
                                Some((r, best))
                            }
                        }
                    };
                }
            }
            let Some((leave, _)) = leave else {
                return Phase::Unbounded;
            };
            if self.iterations >= self.opts.max_iterations {
                return Phase::Limit;
            }
            self.pivot(leave, enter);
            self.iterations += 1;
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.at(r, c);
        for v in &mut self.cells[r * w..(r + 1) * w] {
            *v /= p;
        }
        // exact unit column avoids drift in the basis columns
        self.cells[r * w + c] = 1.0;
        let pivot_row: Vec<f64> = self.cells[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.cells[i * w + c];
            if f != 0.0 {
                let row = &mut self.cells[i * w..(i + 1) * w];
                for (v, pr) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
                row[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pr) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// After phase 1, replaces zero-level basic artificials by structural or
    /// slack columns where the row allows it. Rows that only contain the
    /// artificial are redundant and keep it at zero.
    fn drive_out_artificials(&mut self) {
        let first_art = self.n + self.m;
        for i in 0..self.m {
            if self.basis[i] < first_art {
                continue;
            }
            if let Some(j) = (0..first_art).find(|&j| self.at(i, j).abs() > self.opts.pivot_tol) {
                self.pivot(i, j);
            }
        }
    }

    fn finish(self, status: LpStatus) -> LpSolution {
        let mut solution = vec![0.0; self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                solution[b] = self.rhs(i);
            }
        }
        let optimum = solution
            .iter()
            .zip(&self.objective)
            .map(|(x, c)| x * c)
            .sum();
        LpSolution {
            status,
            optimum,
            solution,
            iterations: self.iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(c: &[f64], a: &[&[f64]], b: &[f64]) -> LpProblem {
        LpProblem::new(
            c.to_vec(),
            a.iter().map(|r| r.to_vec()).collect(),
            b.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn single_bound() {
        let s = solve_lp(&lp(&[1.0], &[&[1.0]], &[1.0]));
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.optimum, 1.0);
        assert_eq!(s.solution, vec![1.0]);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y; x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let s = solve_lp(&lp(
            &[3.0, 5.0],
            &[&[1.0, 0.0], &[0.0, 2.0], &[3.0, 2.0]],
            &[4.0, 12.0, 18.0],
        ));
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.optimum - 36.0).abs() < 1e-12);
        assert!((s.solution[0] - 2.0).abs() < 1e-12);
        assert!((s.solution[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded() {
        let s = solve_lp(&lp(&[1.0, 1.0], &[&[1.0, -1.0]], &[1.0]));
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn negative_bound_needs_phase_one() {
        // max -x - y s.t. -x - y <= -2 (x + y >= 2), x <= 3
        let s = solve_lp(&lp(
            &[-1.0, -1.0],
            &[&[-1.0, -1.0], &[1.0, 0.0]],
            &[-2.0, 3.0],
        ));
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.optimum + 2.0).abs() < 1e-12);
        assert!(
            lp(&[-1.0, -1.0], &[&[-1.0, -1.0], &[1.0, 0.0]], &[-2.0, 3.0])
                .max_violation(&s.solution)
                < 1e-12
        );
    }

    #[test]
    fn infeasible() {
        // x <= 1 and x >= 2
        let s = solve_lp(&lp(&[1.0], &[&[1.0], &[-1.0]], &[1.0, -2.0]));
        assert_eq!(s.status, LpStatus::Infeasible);
        assert!(matches!(
            s.into_optimal(),
            Err(Error::Solver(LpStatus::Infeasible))
        ));
    }

    #[test]
    fn iteration_limit() {
        let p = lp(
            &[3.0, 5.0],
            &[&[1.0, 0.0], &[0.0, 2.0], &[3.0, 2.0]],
            &[4.0, 12.0, 18.0],
        );
        let s = solve_lp_with(
            &p,
            SimplexOptions {
                max_iterations: 1,
                ..Default::default()
            },
        );
        assert_eq!(s.status, LpStatus::LimitExceeded);
        assert!(matches!(s.into_optimal(), Err(Error::IterationLimit(1))));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example (stated as a max problem); Bland's rule must terminate.
        let p = lp(
            &[0.75, -150.0, 0.02, -6.0],
            &[
                &[0.25, -60.0, -0.04, 9.0],
                &[0.5, -90.0, -0.02, 3.0],
                &[0.0, 0.0, 1.0, 0.0],
            ],
            &[0.0, 0.0, 1.0],
        );
        let s = solve_lp(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.optimum - 0.05).abs() < 1e-12);
    }

    #[test]
    fn shape_errors() {
        assert!(LpProblem::new(vec![1.0], vec![vec![1.0, 2.0]], vec![1.0]).is_err());
        assert!(LpProblem::new(vec![1.0], vec![vec![1.0]], vec![]).is_err());
        assert!(LpProblem::new(vec![f64::NAN], vec![vec![1.0]], vec![1.0]).is_err());
    }
}
