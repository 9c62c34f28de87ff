//! The single-cut Benders loop: alternate master solves and value-function
//! evaluations, adding one supporting cut per iteration until the master's
//! theta matches Q at the incumbent.

use serde::{Deserialize, Serialize};

use crate::bip::MixedBinaryProgram;
use crate::error::{Error, Result};
use crate::lp::{dense, ConstraintSense, LinearProgram};
use crate::two_stage::{
    evaluate_q_warm, first_stage_cost, Model, ScenarioBasisCache, TwoStageProblem,
};

/// An affine lower bound on the value function: `Q(x) >= alpha + beta'x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub alpha: f64,
    pub beta: Vec<f64>,
    /// The first-stage point whose subproblem solve produced this cut; the
    /// cut is tight there.
    pub generating_x: Vec<f64>,
}

impl Cut {
    pub fn new(alpha: f64, beta: Vec<f64>, generating_x: Vec<f64>) -> Self {
        debug_assert!(alpha.is_finite() && beta.iter().all(|b| b.is_finite()));
        Cut {
            alpha,
            beta,
            generating_x,
        }
    }

    pub fn value_at(&self, x: &[f64]) -> f64 {
        self.alpha + dense::dot(&self.beta, x)
    }

    fn dedupe_key(&self) -> Vec<i64> {
        // Quantize at 1e-9; two cuts identical at that resolution are
        // duplicates for pooling purposes.
        let quantize = |v: f64| (v / 1e-9).round() as i64;
        let mut key = Vec::with_capacity(1 + self.beta.len());
        key.push(quantize(self.alpha));
        key.extend(self.beta.iter().copied().map(quantize));
        key
    }
}

/// Ordered collection of cuts with duplicate suppression.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CutPool {
    cuts: Vec<Cut>,
    #[serde(skip)]
    seen: std::collections::HashSet<Vec<i64>>,
}

impl CutPool {
    pub fn new() -> Self {
        CutPool::default()
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    /// Greatest cut value at a point: the pooled approximation of Q.
    pub fn approx_q(&self, x: &[f64]) -> f64 {
        self.cuts
            .iter()
            .map(|c| c.value_at(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Append a cut unless an identical one (after rounding) is already pooled.
/// Returns whether the pool grew.
pub fn add_cut(pool: &mut CutPool, cut: Cut) -> bool {
    let key = cut.dedupe_key();
    if pool.seen.contains(&key) {
        return false;
    }
    pool.seen.insert(key);
    pool.cuts.push(cut);
    true
}

/// One row of the structured iteration log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Master objective g(x) + theta: a valid lower bound on the optimum.
    pub master_objective: f64,
    /// True Q at the master's incumbent.
    pub q_value: f64,
    /// |theta - Q(x)|.
    pub gap: f64,
    /// Whether the iteration's cut was new to the pool; a duplicate while
    /// unconverged signals a tolerance mismatch.
    pub cut_added: bool,
    pub stall_warning: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BendersResult {
    pub x_star: Vec<f64>,
    /// Master theta at termination.
    pub theta: f64,
    /// g(x*) + theta.
    pub z_star: f64,
    pub cut_pool: CutPool,
    pub iterations: usize,
    pub converged: bool,
    pub log: Vec<IterationRecord>,
}

#[derive(Clone, Copy, Debug)]
pub struct BendersOptions {
    /// Absolute tolerance on |theta - Q(x)| for termination.
    pub tol: f64,
    pub iter_limit: usize,
}

impl Default for BendersOptions {
    fn default() -> Self {
        BendersOptions {
            tol: 1e-6,
            iter_limit: 200,
        }
    }
}

/// Build the master problem for a cut pool: minimize g(x) + theta over X,
/// subject to theta >= alpha + beta'x for every pooled cut and the theta
/// floor. Theta is the final variable.
pub fn build_master(p: &TwoStageProblem, pool: &CutPool) -> Result<Model> {
    let n1 = p.num_first_stage();
    let theta = n1;
    let mut lp = LinearProgram::new(n1 + 1);
    lp.objective[..n1].copy_from_slice(&p.g.coeffs);
    lp.objective[theta] = 1.0;
    lp.objective_const = p.g.constant;
    lp.lower[theta] = p.require_theta_floor()?;
    for (j, dom) in p.x_set.domains.iter().enumerate() {
        match dom {
            crate::two_stage::VarDomain::Continuous => {}
            crate::two_stage::VarDomain::Binary => lp.upper[j] = 1.0,
            crate::two_stage::VarDomain::Free => lp.lower[j] = f64::NEG_INFINITY,
        }
    }
    for (row, (&sense, &b)) in p
        .x_set
        .rows
        .iter()
        .zip(p.x_set.senses.iter().zip(&p.x_set.rhs))
    {
        let mut full = vec![0.0; n1 + 1];
        full[..n1].copy_from_slice(row);
        lp.add_row(full, sense, b);
    }
    for cut in pool.cuts() {
        // theta - beta'x >= alpha
        let mut full: Vec<f64> = cut.beta.iter().map(|b| -b).collect();
        full.push(1.0);
        lp.add_row(full, ConstraintSense::Ge, cut.alpha);
    }
    if p.has_binary_first_stage() {
        Ok(Model::Mip(MixedBinaryProgram::new(lp, p.binary_indices())?))
    } else {
        Ok(Model::Lp(lp))
    }
}

/// Run the Benders loop.
///
/// Hitting the iteration limit is not an error: the partial result comes back
/// with `converged == false` so callers can inspect the trace.
pub fn solve_benders(p: &TwoStageProblem, opts: &BendersOptions) -> Result<BendersResult> {
    p.validate()?;
    p.require_theta_floor()?;
    let n1 = p.num_first_stage();
    let mut pool = CutPool::new();
    let mut log = Vec::new();
    let mut cache = ScenarioBasisCache::new(p.scenarios.len());

    let mut iteration = 0;
    loop {
        iteration += 1;
        let master = build_master(p, &pool)?;
        let master_sol = master.solve()?;
        if !master_sol.is_optimal() {
            return Err(Error::InvalidModel(format!(
                "master problem is {:?}; X is empty or the theta floor is missing",
                master_sol.status
            )));
        }
        let x = master_sol.primal[..n1].to_vec();
        let theta = master_sol.primal[n1];
        let vf = evaluate_q_warm(p, &x, &mut cache)?;
        let gap = (theta - vf.q_value).abs();
        let converged = gap <= opts.tol;

        let mut cut_added = false;
        let mut stall_warning = false;
        if !converged {
            cut_added = add_cut(&mut pool, vf.cut.clone());
            stall_warning = !cut_added;
        }
        log.push(IterationRecord {
            iteration,
            master_objective: master_sol.objective,
            q_value: vf.q_value,
            gap,
            cut_added,
            stall_warning,
        });

        if converged {
            return Ok(BendersResult {
                z_star: first_stage_cost(p, &x) + theta,
                x_star: x,
                theta,
                cut_pool: pool,
                iterations: iteration,
                converged: true,
                log,
            });
        }
        if iteration >= opts.iter_limit || stall_warning {
            // A duplicate cut while unconverged cannot make progress either.
            return Ok(BendersResult {
                z_star: first_stage_cost(p, &x) + theta,
                x_star: x,
                theta,
                cut_pool: pool,
                iterations: iteration,
                converged: false,
                log,
            });
        }
    }
}
