//! Contextual fraction via linear programming.
//!
//! The noncontextual fraction of a model `e` is the largest mass of a
//! sub-normalised global distribution whose marginal on every context is
//! dominated by the corresponding row of `e`:
//!
//! ```text
//! maximise   Σ_g d(g)
//! subject to Σ_{g|_C = s} d(g) ≤ e_C(s)   for every context C and outcome s
//!            d ≥ 0
//! ```
//!
//! A noncontextual model of weight `λ` in a convex decomposition of `e` is the
//! same thing as such a `d` with mass `λ`, so the optimum is `NCF(e)` and
//! `CF(e) = 1 - NCF(e)`.

use crate::error::Result;
use crate::lp::{solve_lp, LpProblem};
use crate::scenario::{EmpiricalModel, GlobalDistribution};

/// Default threshold below which a model counts as noncontextual.
pub const DEFAULT_NONCONTEXTUAL_TOL: f64 = 1e-6;

/// Fractions below this are treated as exactly zero when building the
/// decomposition parts.
const DEGENERATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CfResult {
    pub cf: f64,
    pub ncf: f64,
    /// Optimal sub-normalised global distribution, with mass `ncf`.
    pub witness: GlobalDistribution,
    /// `e^NC`, absent when `ncf` is zero.
    pub noncontextual_part: Option<EmpiricalModel>,
    /// `e'`, absent when `cf` is zero.
    pub residual_part: Option<EmpiricalModel>,
    pub iterations: usize,
}

/// Builds the NCF linear program for `model`: one variable per global
/// assignment and one `≤` constraint per (context, joint outcome).
pub fn build_cf_lp(model: &EmpiricalModel) -> Result<LpProblem> {
    let sc = model.scenario();
    let n_vars = sc.global_assignment_count()?;
    let n_rows: usize = model.rows().iter().map(Vec::len).sum();
    let mut matrix = vec![0.0; n_rows * n_vars];
    let mut bounds = Vec::with_capacity(n_rows);
    let mut offset = 0;
    for (ci, row) in model.rows().iter().enumerate() {
        let map = sc.restriction_map(sc.context(ci)?)?;
        for (g, &s) in map.iter().enumerate() {
            matrix[(offset + s) * n_vars + g] = 1.0;
        }
        bounds.extend_from_slice(row);
        offset += row.len();
    }
    LpProblem::from_dense(vec![1.0; n_vars], matrix, bounds)
}

pub fn contextual_fraction(model: &EmpiricalModel) -> Result<CfResult> {
    model.ensure_valid()?;
    let lp = build_cf_lp(model)?;
    let sol = solve_lp(&lp).into_optimal()?;

    let ncf = sol.optimum.clamp(0.0, 1.0);
    let cf = 1.0 - ncf;
    let weights: Vec<f64> = sol.solution.iter().map(|w| w.max(0.0)).collect();
    let witness = GlobalDistribution::new(model.scenario().clone(), weights)?;
    let marginals = witness.marginal_model()?;

    let noncontextual_part = if ncf > DEGENERATE_TOL {
        let mass = witness.total_mass();
        let rows = marginals
            .rows()
            .iter()
            .map(|r| r.iter().map(|p| p / mass).collect())
            .collect();
        Some(EmpiricalModel::new(model.scenario().clone(), rows)?)
    } else {
        None
    };

    let residual_part = if cf > DEGENERATE_TOL {
        let rows = model
            .rows()
            .iter()
            .zip(marginals.rows())
            .map(|(e, m)| {
                let r: Vec<f64> = e.iter().zip(m).map(|(a, b)| (a - b).max(0.0)).collect();
                let sum: f64 = r.iter().sum();
                r.into_iter().map(|p| p / sum).collect()
            })
            .collect();
        Some(EmpiricalModel::new(model.scenario().clone(), rows)?)
    } else {
        None
    };

    Ok(CfResult {
        cf,
        ncf,
        witness,
        noncontextual_part,
        residual_part,
        iterations: sol.iterations,
    })
}

/// True when the contextual fraction is at most `tol`.
pub fn is_noncontextual(model: &EmpiricalModel, tol: f64) -> Result<bool> {
    Ok(contextual_fraction(model)?.cf <= tol)
}
