//! Revised primal/dual simplex on the standardized equality form, with an
//! explicit dense basis inverse.
//!
//! Pivot selection is the Dantzig rule with ties broken by lowest column
//! index; after a pivot-count threshold the engine falls back to Bland's rule
//! so degenerate instances terminate. The basis inverse is refreshed from
//! scratch every `refresh_every` pivots.

use super::dense;
use super::standard::StandardizedLp;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub(crate) struct SimplexOptions {
    pub feas_tol: f64,
    pub rc_tol: f64,
    pub ratio_tol: f64,
    pub pivot_limit: usize,
    pub refresh_every: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            feas_tol: 1e-8,
            rc_tol: 1e-9,
            ratio_tol: 1e-9,
            pivot_limit: 100_000,
            refresh_every: 50,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub(crate) struct EngineSolution {
    pub outcome: Outcome,
    /// Standardized point (length = standardized column count).
    pub z: Vec<f64>,
    /// Basic column indices, sorted.
    pub basis: Vec<usize>,
    /// Dual value per standardized row, in the orientation of the rows as
    /// stored in `StandardizedLp` (sign normalization not yet undone).
    pub duals: Vec<f64>,
    /// Min-form objective including the folded constant.
    pub objective: f64,
    pub dual_objective: f64,
    pub pivots: usize,
    /// Standardized row indices still active after redundant rows were
    /// eliminated in phase one.
    pub active_rows: Vec<usize>,
}

/// Working state for one solve. Instances are single-use.
pub(crate) struct Engine<'a> {
    std: &'a StandardizedLp,
    opts: SimplexOptions,
    /// Active rows (a redundant row detected in phase one is removed).
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    /// Map from active row index to index in the standardized row list.
    row_origin: Vec<usize>,
    ncols: usize,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    b_inv: Vec<Vec<f64>>,
    x_b: Vec<f64>,
    pivots: usize,
    bland_threshold: usize,
    /// Artificial columns live at indices >= ncols during phase one.
    artificial_active: bool,
}

impl<'a> Engine<'a> {
    pub fn new(std: &'a StandardizedLp, opts: SimplexOptions) -> Self {
        let m = std.num_rows();
        let n = std.num_cols();
        Engine {
            std,
            opts,
            rows: std.rows.clone(),
            rhs: std.rhs.clone(),
            row_origin: (0..m).collect(),
            ncols: n,
            basis: Vec::new(),
            in_basis: Vec::new(),
            b_inv: Vec::new(),
            x_b: Vec::new(),
            pivots: 0,
            bland_threshold: 100 + 10 * (m + n),
            artificial_active: false,
        }
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    /// Entry of column `j` in active row `i`; artificial columns form an
    /// identity block after the real columns.
    fn col_entry(&self, i: usize, j: usize) -> f64 {
        if j < self.ncols {
            self.rows[i][j]
        } else if j - self.ncols == i {
            1.0
        } else {
            0.0
        }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        (0..self.m()).map(|i| self.col_entry(i, j)).collect()
    }

    /// `B^-1 * column(j)`.
    fn ftran(&self, j: usize) -> Vec<f64> {
        if j >= self.ncols {
            // Artificial: B^-1 e_i is a column of the inverse.
            let i = j - self.ncols;
            return self.b_inv.iter().map(|row| row[i]).collect();
        }
        let col = self.column(j);
        dense::mat_vec(&self.b_inv, &col)
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m();
        let mut a_b = vec![vec![0.0; m]; m];
        for (k, &j) in self.basis.iter().enumerate() {
            for i in 0..m {
                a_b[i][k] = self.col_entry(i, j);
            }
        }
        // invert gives A_B^-1 column-assembled; we need B^-1 with
        // B^-1 A_B = I, which is exactly the inverse of a_b.
        let inv = dense::invert(&a_b).ok_or_else(|| {
            Error::InvalidBasis("basis matrix is singular".into())
        })?;
        self.b_inv = inv;
        self.x_b = dense::mat_vec(&self.b_inv, &self.rhs);
        Ok(())
    }

    fn pivot(&mut self, leave: usize, enter: usize, w: &[f64]) -> Result<()> {
        let theta = self.x_b[leave].max(0.0) / w[leave];
        let m = self.m();
        let piv = w[leave];
        for v in self.b_inv[leave].iter_mut() {
            *v /= piv;
        }
        for r in 0..m {
            if r == leave {
                continue;
            }
            let factor = w[r];
            if factor == 0.0 {
                continue;
            }
            let (head, tail) = self.b_inv.split_at_mut(leave.max(r));
            let (pivot_row, other_row) = if r < leave {
                (&tail[0], &mut head[r])
            } else {
                (&head[leave], &mut tail[0])
            };
            for (o, p) in other_row.iter_mut().zip(pivot_row.iter()) {
                *o -= factor * p;
            }
            self.x_b[r] -= theta * factor;
        }
        self.x_b[leave] = theta;
        self.in_basis[self.basis[leave]] = false;
        self.in_basis[enter] = true;
        self.basis[leave] = enter;

        self.pivots += 1;
        if self.pivots > self.opts.pivot_limit {
            return Err(Error::IterationLimit);
        }
        if self.pivots % self.opts.refresh_every == 0 {
            self.refactor()?;
        }
        Ok(())
    }

    fn reduced_costs(&self, costs: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let c_b: Vec<f64> = self.basis.iter().map(|&j| costs[j]).collect();
        let y = dense::vec_mat(&c_b, &self.b_inv);
        let total = if self.artificial_active {
            self.ncols + self.m()
        } else {
            self.ncols
        };
        let mut d = vec![0.0; total];
        for j in 0..total {
            if self.in_basis[j] {
                continue;
            }
            let a_dot = if j < self.ncols {
                (0..self.m()).map(|i| y[i] * self.rows[i][j]).sum::<f64>()
            } else {
                y[j - self.ncols]
            };
            d[j] = costs[j] - a_dot;
        }
        (y, d)
    }

    /// Primal simplex on the current basis. `enterable` restricts candidate
    /// entering columns (used to ban artificials in phase two).
    fn primal(&mut self, costs: &[f64], enterable: usize) -> Result<Outcome> {
        loop {
            let (_, d) = self.reduced_costs(costs);
            let bland = self.pivots >= self.bland_threshold;
            let mut enter: Option<usize> = None;
            let mut best = -self.opts.rc_tol;
            for j in 0..enterable {
                if self.in_basis[j] || d[j] >= -self.opts.rc_tol {
                    continue;
                }
                if bland {
                    enter = Some(j);
                    break;
                }
                if d[j] < best {
                    best = d[j];
                    enter = Some(j);
                }
            }
            let enter = match enter {
                Some(j) => j,
                None => return Ok(Outcome::Optimal),
            };
            let w = self.ftran(enter);
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for i in 0..self.m() {
                if w[i] <= self.opts.ratio_tol {
                    continue;
                }
                let ratio = self.x_b[i].max(0.0) / w[i];
                let better = ratio < best_ratio - self.opts.ratio_tol
                    || (ratio < best_ratio + self.opts.ratio_tol
                        && leave.map_or(true, |l| self.basis[i] < self.basis[l]));
                if better {
                    best_ratio = ratio.min(best_ratio);
                    leave = Some(i);
                }
            }
            let leave = match leave {
                Some(i) => i,
                None => return Ok(Outcome::Unbounded),
            };
            self.pivot(leave, enter, &w)?;
        }
    }

    /// Dual simplex: requires dual-feasible reduced costs, restores primal
    /// feasibility. Used for warm starts after a rhs change.
    fn dual(&mut self, costs: &[f64]) -> Result<Outcome> {
        loop {
            let bland = self.pivots >= self.bland_threshold;
            let mut leave: Option<usize> = None;
            let mut most_negative = -self.opts.feas_tol;
            for i in 0..self.m() {
                if self.x_b[i] >= -self.opts.feas_tol {
                    continue;
                }
                if bland {
                    if leave.map_or(true, |l| self.basis[i] < self.basis[l]) {
                        leave = Some(i);
                    }
                } else if self.x_b[i] < most_negative {
                    most_negative = self.x_b[i];
                    leave = Some(i);
                }
            }
            let leave = match leave {
                Some(i) => i,
                None => return Ok(Outcome::Optimal),
            };
            let (_, d) = self.reduced_costs(costs);
            // Row of B^-1 A for the leaving basic.
            let mut enter: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for j in 0..self.ncols {
                if self.in_basis[j] {
                    continue;
                }
                let alpha: f64 = (0..self.m())
                    .map(|r| self.b_inv[leave][r] * self.rows[r][j])
                    .sum();
                if alpha >= -self.opts.ratio_tol {
                    continue;
                }
                let ratio = d[j].max(0.0) / -alpha;
                let better = ratio < best_ratio - self.opts.ratio_tol
                    || (ratio < best_ratio + self.opts.ratio_tol
                        && enter.map_or(true, |e| j < e));
                if better {
                    best_ratio = ratio.min(best_ratio);
                    enter = Some(j);
                }
            }
            let enter = match enter {
                Some(j) => j,
                None => return Ok(Outcome::Infeasible),
            };
            let w = self.ftran(enter);
            // Generic pivot update: theta may be negative here, recompute x_b
            // from scratch to keep the update simple and robust.
            self.pivot_dual(leave, enter, &w)?;
        }
    }

    fn pivot_dual(&mut self, leave: usize, enter: usize, w: &[f64]) -> Result<()> {
        let theta = self.x_b[leave] / w[leave];
        let m = self.m();
        let piv = w[leave];
        for v in self.b_inv[leave].iter_mut() {
            *v /= piv;
        }
        for r in 0..m {
            if r == leave {
                continue;
            }
            let factor = w[r];
            if factor != 0.0 {
                let (head, tail) = self.b_inv.split_at_mut(leave.max(r));
                let (pivot_row, other_row) = if r < leave {
                    (&tail[0], &mut head[r])
                } else {
                    (&head[leave], &mut tail[0])
                };
                for (o, p) in other_row.iter_mut().zip(pivot_row.iter()) {
                    *o -= factor * p;
                }
                self.x_b[r] -= theta * factor;
            }
        }
        self.x_b[leave] = theta;
        self.in_basis[self.basis[leave]] = false;
        self.in_basis[enter] = true;
        self.basis[leave] = enter;

        self.pivots += 1;
        if self.pivots > self.opts.pivot_limit {
            return Err(Error::IterationLimit);
        }
        if self.pivots % self.opts.refresh_every == 0 {
            self.refactor()?;
        }
        Ok(())
    }

    /// Phase one: start from the all-artificial basis and drive the
    /// artificial columns out; removes genuinely redundant rows.
    fn phase_one(&mut self) -> Result<Outcome> {
        let m = self.m();
        self.artificial_active = true;
        self.basis = (self.ncols..self.ncols + m).collect();
        self.in_basis = vec![false; self.ncols + m];
        for &j in &self.basis {
            self.in_basis[j] = true;
        }
        self.b_inv = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        self.x_b = self.rhs.clone();

        let mut costs = vec![0.0; self.ncols + m];
        for c in costs.iter_mut().skip(self.ncols) {
            *c = 1.0;
        }
        let outcome = self.primal(&costs, self.ncols)?;
        if outcome != Outcome::Optimal {
            // Phase one is bounded below by zero; anything else is numerics.
            return Err(Error::InvalidBasis("phase one failed to terminate".into()));
        }

        let infeasibility: f64 = self
            .basis
            .iter()
            .zip(&self.x_b)
            .filter(|(&j, _)| j >= self.ncols)
            .map(|(_, &v)| v.max(0.0))
            .sum();
        let scale = 1.0 + self.rhs.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if infeasibility > self.opts.feas_tol * scale {
            return Ok(Outcome::Infeasible);
        }

        // Pivot remaining artificials out of the basis; a row where no real
        // column can pivot is redundant and gets removed.
        let mut redundant: Vec<usize> = Vec::new();
        for i in 0..self.m() {
            if self.basis[i] < self.ncols {
                continue;
            }
            let mut entered = false;
            for j in 0..self.ncols {
                if self.in_basis[j] {
                    continue;
                }
                let w = self.ftran(j);
                if w[i].abs() > 1e-7 {
                    self.pivot_degenerate(i, j, &w)?;
                    entered = true;
                    break;
                }
            }
            if !entered {
                redundant.push(i);
            }
        }
        if !redundant.is_empty() {
            self.drop_rows(&redundant)?;
        }
        self.artificial_active = false;
        self.in_basis.truncate(self.ncols);
        Ok(Outcome::Optimal)
    }

    /// Pivot on a zero-valued basic artificial; feasibility is unaffected.
    fn pivot_degenerate(&mut self, leave: usize, enter: usize, w: &[f64]) -> Result<()> {
        self.pivot_dual(leave, enter, w)
    }

    fn drop_rows(&mut self, rows_to_drop: &[usize]) -> Result<()> {
        let mut drop_set = vec![false; self.m()];
        for &i in rows_to_drop {
            drop_set[i] = true;
        }
        fn retain_kept<T>(v: &mut Vec<T>, drop_set: &[bool]) {
            let mut i = 0;
            v.retain(|_| {
                let keep = !drop_set[i];
                i += 1;
                keep
            });
        }
        retain_kept(&mut self.rows, &drop_set);
        retain_kept(&mut self.rhs, &drop_set);
        retain_kept(&mut self.row_origin, &drop_set);
        retain_kept(&mut self.basis, &drop_set);
        self.refactor()
    }

    pub fn cold_solve(&mut self) -> Result<EngineSolution> {
        if self.m() == 0 {
            return self.solve_unconstrained();
        }
        if self.phase_one()? == Outcome::Infeasible {
            return Ok(self.finish(Outcome::Infeasible));
        }
        let costs = self.phase_two_costs();
        let outcome = self.primal(&costs, self.ncols)?;
        Ok(self.finish(outcome))
    }

    pub fn warm_solve(&mut self, basis: &[usize]) -> Result<EngineSolution> {
        let m = self.m();
        if basis.len() != m {
            return Err(Error::InvalidBasis(format!(
                "basis has {} columns, expected {m}",
                basis.len()
            )));
        }
        if basis.iter().any(|&j| j >= self.ncols) {
            return Err(Error::InvalidBasis("basis references an unknown column".into()));
        }
        self.basis = basis.to_vec();
        self.in_basis = vec![false; self.ncols];
        for &j in &self.basis {
            if self.in_basis[j] {
                return Err(Error::InvalidBasis("duplicate column in basis".into()));
            }
            self.in_basis[j] = true;
        }
        self.refactor()
            .map_err(|_| Error::InvalidBasis("basis matrix is singular".into()))?;

        let costs = self.phase_two_costs();
        let primal_feasible = self.x_b.iter().all(|&v| v >= -self.opts.feas_tol);
        let outcome = if primal_feasible {
            self.primal(&costs, self.ncols)?
        } else {
            let (_, d) = self.reduced_costs(&costs);
            let dual_feasible = d.iter().all(|&v| v >= -self.opts.rc_tol);
            if !dual_feasible {
                return Err(Error::InvalidBasis(
                    "warm basis is neither primal nor dual feasible".into(),
                ));
            }
            self.dual(&costs)?
        };
        Ok(self.finish(outcome))
    }

    fn phase_two_costs(&self) -> Vec<f64> {
        let mut costs = self.std.objective.clone();
        costs.resize(self.ncols + self.m(), 0.0);
        costs
    }

    fn solve_unconstrained(&mut self) -> Result<EngineSolution> {
        // No rows: each variable sits at zero; negative costs mean unbounded.
        let unbounded = self.std.objective.iter().any(|&c| c < -self.opts.rc_tol);
        let outcome = if unbounded {
            Outcome::Unbounded
        } else {
            Outcome::Optimal
        };
        Ok(EngineSolution {
            outcome,
            z: vec![0.0; self.ncols],
            basis: Vec::new(),
            duals: Vec::new(),
            objective: self.std.objective_const,
            dual_objective: self.std.objective_const,
            pivots: self.pivots,
            active_rows: Vec::new(),
        })
    }

    fn finish(&mut self, outcome: Outcome) -> EngineSolution {
        if outcome != Outcome::Optimal {
            return EngineSolution {
                outcome,
                z: Vec::new(),
                basis: Vec::new(),
                duals: Vec::new(),
                objective: 0.0,
                dual_objective: 0.0,
                pivots: self.pivots,
                active_rows: self.row_origin.clone(),
            };
        }
        let mut z = vec![0.0; self.ncols];
        for (i, &j) in self.basis.iter().enumerate() {
            if j < self.ncols {
                z[j] = self.x_b[i].max(0.0);
            }
        }
        let costs = self.phase_two_costs();
        let (y, _) = self.reduced_costs(&costs);
        let mut duals = vec![0.0; self.std.num_rows()];
        for (active, &orig) in self.row_origin.iter().enumerate() {
            duals[orig] = y[active];
        }
        let objective = dense::dot(&self.std.objective, &z) + self.std.objective_const;
        let dual_objective = dense::dot(&y, &self.rhs) + self.std.objective_const;
        let mut basis = self.basis.clone();
        basis.sort_unstable();
        EngineSolution {
            outcome,
            z,
            basis,
            duals,
            objective,
            dual_objective,
            pivots: self.pivots,
            active_rows: self.row_origin.clone(),
        }
    }
}
