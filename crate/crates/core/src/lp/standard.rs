//! Conversion of a general linear program to the standard equality form
//! `min c'z, Az = b, z >= 0` used by the simplex engine, keeping the mapping
//! back to the original variables and rows.

use serde::{Deserialize, Serialize};

use super::{ConstraintSense, Direction, LinearProgram};
use crate::error::{Error, Result};

/// How one original variable maps into the standardized column space.
#[derive(Clone, Debug, PartialEq)]
pub enum StdVar {
    /// `x = offset + z[col]` (finite lower bound shifted to zero).
    Shifted { col: usize, offset: f64 },
    /// `x = offset - z[col]` (only an upper bound is finite).
    Negated { col: usize, offset: f64 },
    /// `x = z[pos] - z[neg]` (free variable).
    Split { pos: usize, neg: usize },
}

/// A linear program in standard equality form together with the bookkeeping
/// needed to translate solutions and duals back to the original model.
#[derive(Clone, Debug)]
pub struct StandardizedLp {
    /// Minimization objective over the standardized variables.
    pub objective: Vec<f64>,
    /// Equality rows; every row has rhs >= 0.
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    /// Constant folded out of the objective by bound shifts (plus the
    /// original objective constant).
    pub objective_const: f64,
    /// True when the original problem maximized; results are negated back.
    pub maximize: bool,
    /// Number of leading rows that correspond one-to-one with the original
    /// constraint rows (the remainder encode finite upper bounds).
    pub main_rows: usize,
    /// +1/-1 per row: rows multiplied by -1 to make the rhs nonnegative have
    /// their dual values flipped back on extraction.
    pub row_sign: Vec<f64>,
    pub var_map: Vec<StdVar>,
    /// Number of structural columns (excludes slack/surplus columns).
    pub structural_cols: usize,
}

impl StandardizedLp {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }

    /// Recover the original variable vector from a standardized point.
    pub fn original_point(&self, z: &[f64]) -> Vec<f64> {
        self.var_map
            .iter()
            .map(|m| match *m {
                StdVar::Shifted { col, offset } => offset + z[col],
                StdVar::Negated { col, offset } => offset - z[col],
                StdVar::Split { pos, neg } => z[pos] - z[neg],
            })
            .collect()
    }

    /// Objective value of a standardized point, in the original sense.
    pub fn original_objective(&self, z: &[f64]) -> f64 {
        let v = super::dense::dot(&self.objective, z) + self.objective_const;
        if self.maximize {
            -v
        } else {
            v
        }
    }

    /// Render the standardized problem as a plain `LinearProgram` (all rows
    /// equalities, all variables nonnegative).
    pub fn to_lp(&self) -> LinearProgram {
        let n = self.num_cols();
        LinearProgram {
            objective: self.objective.clone(),
            objective_const: self.objective_const,
            rows: self.rows.clone(),
            senses: vec![ConstraintSense::Eq; self.rows.len()],
            rhs: self.rhs.clone(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            direction: Direction::Minimize,
        }
    }
}

/// Convert `lp` to standard equality form.
///
/// Inequalities gain a slack or surplus column, finite lower bounds are
/// shifted to zero, upper-bounded variables get an extra bound row, and free
/// variables are split into a difference of nonnegatives.
pub fn standardize(lp: &LinearProgram) -> Result<StandardizedLp> {
    lp.validate()?;
    let n = lp.num_vars();

    let sense_flip = if lp.direction == Direction::Maximize {
        -1.0
    } else {
        1.0
    };

    let mut var_map = Vec::with_capacity(n);
    let mut objective = Vec::new();
    let mut objective_const = sense_flip * lp.objective_const;
    // (column, upper-bound value) pairs that become extra rows below.
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();

    for j in 0..n {
        let (lo, hi) = (lp.lower[j], lp.upper[j]);
        let c = sense_flip * lp.objective[j];
        if lo.is_finite() {
            // x = lo + z, so c*x = c*lo + c*z.
            let col = objective.len();
            objective.push(c);
            objective_const += c * lo;
            var_map.push(StdVar::Shifted { col, offset: lo });
            if hi.is_finite() {
                upper_rows.push((col, hi - lo));
            }
        } else if hi.is_finite() {
            // x = hi - z, so c*x = c*hi - c*z.
            let col = objective.len();
            objective.push(-c);
            objective_const += c * hi;
            var_map.push(StdVar::Negated { col, offset: hi });
        } else {
            let pos = objective.len();
            objective.push(c);
            objective.push(-c);
            var_map.push(StdVar::Split { pos, neg: pos + 1 });
        }
    }
    let structural_cols = objective.len();

    // Main rows: substitute the variable transforms, then append slack or
    // surplus columns for inequalities.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(lp.rows.len() + upper_rows.len());
    let mut rhs: Vec<f64> = Vec::with_capacity(lp.rows.len() + upper_rows.len());
    let mut slack_senses: Vec<ConstraintSense> = Vec::new();

    for (i, orig_row) in lp.rows.iter().enumerate() {
        let mut row = vec![0.0; structural_cols];
        let mut b = lp.rhs[i];
        for (j, &a) in orig_row.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match var_map[j] {
                StdVar::Shifted { col, offset } => {
                    row[col] += a;
                    b -= a * offset;
                }
                StdVar::Negated { col, offset } => {
                    row[col] -= a;
                    b -= a * offset;
                }
                StdVar::Split { pos, neg } => {
                    row[pos] += a;
                    row[neg] -= a;
                }
            }
        }
        rows.push(row);
        rhs.push(b);
        slack_senses.push(lp.senses[i]);
    }

    for &(col, bound) in &upper_rows {
        let mut row = vec![0.0; structural_cols];
        row[col] = 1.0;
        rows.push(row);
        rhs.push(bound);
        slack_senses.push(ConstraintSense::Le);
    }

    // One slack/surplus column per inequality row.
    let mut slack_count = 0;
    for sense in &slack_senses {
        if *sense != ConstraintSense::Eq {
            slack_count += 1;
        }
    }
    let total_cols = structural_cols + slack_count;
    let mut next_slack = structural_cols;
    for (row, sense) in rows.iter_mut().zip(&slack_senses) {
        row.resize(total_cols, 0.0);
        match sense {
            ConstraintSense::Le => {
                row[next_slack] = 1.0;
                next_slack += 1;
            }
            ConstraintSense::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
            }
            ConstraintSense::Eq => {}
        }
    }
    objective.resize(total_cols, 0.0);

    // Normalize to rhs >= 0 so phase one can start from an artificial basis.
    let mut row_sign = vec![1.0; rows.len()];
    for i in 0..rows.len() {
        if rhs[i] < 0.0 {
            rhs[i] = -rhs[i];
            row_sign[i] = -1.0;
            for a in rows[i].iter_mut() {
                *a = -*a;
            }
        }
    }

    Ok(StandardizedLp {
        objective,
        rows,
        rhs,
        objective_const,
        maximize: lp.direction == Direction::Maximize,
        main_rows: lp.rows.len(),
        row_sign,
        var_map,
        structural_cols,
    })
}

/// Serializable summary of the standardization (exposed for reports).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StandardShape {
    pub rows: usize,
    pub cols: usize,
    pub structural_cols: usize,
}

impl From<&StandardizedLp> for StandardShape {
    fn from(s: &StandardizedLp) -> Self {
        StandardShape {
            rows: s.num_rows(),
            cols: s.num_cols(),
            structural_cols: s.structural_cols,
        }
    }
}

impl LinearProgram {
    pub(crate) fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.rows.len() != self.rhs.len() || self.rows.len() != self.senses.len() {
            return Err(Error::InvalidModel(format!(
                "{} rows, {} rhs entries, {} senses",
                self.rows.len(),
                self.rhs.len(),
                self.senses.len()
            )));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::InvalidModel(
                "bound vectors do not match variable count".into(),
            ));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidModel(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.len()
                )));
            }
        }
        for j in 0..n {
            if self.lower[j] > self.upper[j] {
                return Err(Error::InvalidModel(format!(
                    "variable {j}: lower bound {} exceeds upper bound {}",
                    self.lower[j], self.upper[j]
                )));
            }
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&self.objective) || !finite(&self.rhs) || !self.rows.iter().all(|r| finite(r)) {
            return Err(Error::InvalidModel("non-finite coefficient".into()));
        }
        Ok(())
    }
}
