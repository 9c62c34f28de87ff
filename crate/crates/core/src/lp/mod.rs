//! Linear programming: problem type, standardization, and a dense revised
//! simplex returning basic (vertex) optimal solutions with dual values.

pub(crate) mod dense;
mod simplex;
mod standard;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use standard::{standardize, StandardShape, StandardizedLp, StdVar};

pub(crate) use simplex::{Engine, Outcome, SimplexOptions};

/// Relative strong-duality gap accepted at optimality.
pub const DUAL_GAP_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintSense {
    Le,
    Eq,
    Ge,
}

/// A linear program over continuous variables with per-variable bounds.
/// Lower bounds default to zero and upper bounds to infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub objective_const: f64,
    pub rows: Vec<Vec<f64>>,
    pub senses: Vec<ConstraintSense>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub direction: Direction,
}

impl LinearProgram {
    /// A minimization problem over `n` nonnegative variables with no rows.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; n],
            objective_const: 0.0,
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            direction: Direction::Minimize,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, sense: ConstraintSense, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.num_vars());
        self.rows.push(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
    }

    /// Objective value of a point, in the problem's own sense.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        dense::dot(&self.objective, x) + self.objective_const
    }

    /// Greatest constraint violation of a point (rows and bounds).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (row, (&sense, &b)) in self.rows.iter().zip(self.senses.iter().zip(&self.rhs)) {
            let lhs = dense::dot(row, x);
            let v = match sense {
                ConstraintSense::Le => lhs - b,
                ConstraintSense::Ge => b - lhs,
                ConstraintSense::Eq => (lhs - b).abs(),
            };
            worst = worst.max(v);
        }
        for j in 0..self.num_vars() {
            worst = worst.max(self.lower[j] - x[j]).max(x[j] - self.upper[j]);
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of a simplex solve. At `Optimal` the primal point is a vertex
/// (basic feasible solution) and `|objective - dual_objective|` is within
/// [`DUAL_GAP_TOL`] relative.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Values of the original variables (empty unless optimal).
    pub primal: Vec<f64>,
    /// One dual value per standardized row: the original constraint rows in
    /// order, then one row per finite variable upper bound.
    pub duals: Vec<f64>,
    pub objective: f64,
    pub dual_objective: f64,
    /// Basic column indices of the standardized form.
    pub basis: Vec<usize>,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

fn assemble(std: &StandardizedLp, eng: simplex::EngineSolution) -> LpSolution {
    let status = match eng.outcome {
        Outcome::Optimal => LpStatus::Optimal,
        Outcome::Infeasible => LpStatus::Infeasible,
        Outcome::Unbounded => LpStatus::Unbounded,
    };
    if status != LpStatus::Optimal {
        return LpSolution {
            status,
            primal: Vec::new(),
            duals: Vec::new(),
            objective: 0.0,
            dual_objective: 0.0,
            basis: Vec::new(),
            pivots: eng.pivots,
        };
    }
    let sense_flip = if std.maximize { -1.0 } else { 1.0 };
    let duals = eng
        .duals
        .iter()
        .zip(&std.row_sign)
        .map(|(&y, &s)| sense_flip * s * y)
        .collect();
    LpSolution {
        status,
        primal: std.original_point(&eng.z),
        duals,
        objective: sense_flip * eng.objective,
        dual_objective: sense_flip * eng.dual_objective,
        basis: eng.basis,
        pivots: eng.pivots,
    }
}

/// Solve a linear program from a cold start.
///
/// Deterministic: identical input pivots identically and yields a
/// bit-identical primal vector.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let std = standardize(lp)?;
    let mut engine = Engine::new(&std, SimplexOptions::default());
    let sol = engine.cold_solve()?;
    Ok(assemble(&std, sol))
}

/// Re-solve starting from a known basis of the standardized form.
///
/// The basis must be structurally valid (right size, nonsingular). If it is
/// primal feasible the primal simplex continues from it; if only dual
/// feasible (the common case after a rhs change) the dual simplex restores
/// feasibility. A basis that is neither is rejected — silently falling back
/// to a cold start would mask caller bugs.
pub fn solve_lp_from(lp: &LinearProgram, warm_basis: &[usize]) -> Result<LpSolution> {
    let std = standardize(lp)?;
    let mut engine = Engine::new(&std, SimplexOptions::default());
    let sol = engine.warm_solve(warm_basis)?;
    Ok(assemble(&std, sol))
}
