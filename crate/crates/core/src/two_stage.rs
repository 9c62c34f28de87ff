//! The canonical two-stage problem: a first-stage feasible set with an affine
//! cost, plus a list of scenario subproblems. Evaluating the expected
//! second-stage value function also extracts a supporting cut for the Benders
//! master problem.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::benders::Cut;
use crate::bip::MixedBinaryProgram;
use crate::error::{Error, Result};
use crate::lp::{
    dense, solve_lp, solve_lp_from, ConstraintSense, LinearProgram, LpSolution,
    LpStatus,
};

/// Tolerance used when checking that a candidate first-stage point actually
/// lies in X; candidates arrive from enumeration kernels and are checked
/// rather than trusted.
pub const X_FEAS_TOL: f64 = 1e-7;

/// First-stage variable domains. `Continuous` variables are nonnegative;
/// bounds beyond that (including lower bounds for `Free` variables) belong in
/// the constraint rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarDomain {
    Continuous,
    Binary,
    Free,
}

/// How cut coefficients are extracted from a scenario subproblem.
///
/// * `DualStandard` — the subproblem is `min q'y : Wy {sense} h - Tx, y >= 0`
///   and the cut comes from the optimal duals.
/// * `PrimalPath` — the max-min (interdiction) shape: the subproblem is
///   `min (q + Tx)'y : Wy {sense} h, y >= 0`, the value function is the
///   negated optimum, and the cut comes from the optimal primal vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutForm {
    DualStandard,
    PrimalPath,
}

/// Affine first-stage cost `g(x) = coeffs'x + constant`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineCost {
    pub coeffs: Vec<f64>,
    #[serde(rename = "const", default)]
    pub constant: f64,
}

/// The first-stage feasible set: linear rows over x plus per-variable
/// domains.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FirstStageSet {
    #[serde(rename = "A")]
    pub rows: Vec<Vec<f64>>,
    pub senses: Vec<ConstraintSense>,
    #[serde(rename = "b")]
    pub rhs: Vec<f64>,
    pub domains: Vec<VarDomain>,
}

/// One scenario of the second stage.
///
/// For `DualStandard` problems `t` maps first-stage decisions into the row
/// right-hand sides (one row per constraint); for `PrimalPath` problems it
/// maps them into the cost vector (one row per second-stage variable).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(rename = "p")]
    pub probability: f64,
    pub q: Vec<f64>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<f64>>,
    pub h: Vec<f64>,
    pub senses: Vec<ConstraintSense>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoStageProblem {
    pub g: AffineCost,
    #[serde(rename = "X")]
    pub x_set: FirstStageSet,
    pub scenarios: Vec<Scenario>,
    pub cut_form: CutForm,
    /// Valid lower bound on Q over X; bounds the master objective while the
    /// cut pool is still empty.
    pub theta_floor: Option<f64>,
}

impl Scenario {
    pub fn num_vars(&self) -> usize {
        self.q.len()
    }

    pub fn num_rows(&self) -> usize {
        self.w.len()
    }
}

impl TwoStageProblem {
    pub fn num_first_stage(&self) -> usize {
        self.g.coeffs.len()
    }

    pub fn has_binary_first_stage(&self) -> bool {
        self.x_set.domains.iter().any(|d| *d == VarDomain::Binary)
    }

    pub fn binary_indices(&self) -> Vec<usize> {
        self.x_set
            .domains
            .iter()
            .enumerate()
            .filter(|(_, d)| **d == VarDomain::Binary)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn require_theta_floor(&self) -> Result<f64> {
        self.theta_floor.ok_or_else(|| {
            Error::InvalidInput("theta_floor: a finite lower bound on Q is required".into())
        })
    }

    pub fn validate(&self) -> Result<()> {
        let n1 = self.num_first_stage();
        let field = |name: &str, msg: String| Error::InvalidInput(format!("{name}: {msg}"));
        if self.x_set.domains.len() != n1 {
            return Err(field(
                "X.domains",
                format!("{} entries for {n1} variables", self.x_set.domains.len()),
            ));
        }
        if self.x_set.rows.len() != self.x_set.rhs.len()
            || self.x_set.rows.len() != self.x_set.senses.len()
        {
            return Err(field("X", "rows, senses and b have mismatched lengths".into()));
        }
        for (i, row) in self.x_set.rows.iter().enumerate() {
            if row.len() != n1 {
                return Err(field("X.A", format!("row {i} has {} entries", row.len())));
            }
        }
        if self.scenarios.is_empty() {
            return Err(field("scenarios", "at least one scenario required".into()));
        }
        let mut prob_sum = 0.0;
        for (k, sc) in self.scenarios.iter().enumerate() {
            let name = format!("scenarios[{k}]");
            if sc.probability < 0.0 {
                return Err(field(&name, "negative probability".into()));
            }
            prob_sum += sc.probability;
            let (n2, m) = (sc.num_vars(), sc.num_rows());
            if sc.h.len() != m || sc.senses.len() != m {
                return Err(field(&name, "W, h and senses have mismatched lengths".into()));
            }
            for (i, row) in sc.w.iter().enumerate() {
                if row.len() != n2 {
                    return Err(field(&name, format!("W row {i} has {} entries", row.len())));
                }
            }
            let expected_t_rows = match self.cut_form {
                CutForm::DualStandard => m,
                CutForm::PrimalPath => n2,
            };
            if sc.t.len() != expected_t_rows {
                return Err(field(
                    &name,
                    format!("T has {} rows, expected {expected_t_rows}", sc.t.len()),
                ));
            }
            for (i, row) in sc.t.iter().enumerate() {
                if row.len() != n1 {
                    return Err(field(&name, format!("T row {i} has {} entries", row.len())));
                }
            }
        }
        if (prob_sum - 1.0).abs() > 1e-12 {
            return Err(field(
                "scenarios",
                format!("probabilities sum to {prob_sum}, expected 1"),
            ));
        }
        Ok(())
    }

    /// Whether a point satisfies the first-stage constraints and domains.
    pub fn x_feasible(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.num_first_stage() {
            return false;
        }
        for (row, (&sense, &b)) in self
            .x_set
            .rows
            .iter()
            .zip(self.x_set.senses.iter().zip(&self.x_set.rhs))
        {
            let lhs = dense::dot(row, x);
            let ok = match sense {
                ConstraintSense::Le => lhs <= b + tol,
                ConstraintSense::Ge => lhs >= b - tol,
                ConstraintSense::Eq => (lhs - b).abs() <= tol,
            };
            if !ok {
                return false;
            }
        }
        for (xj, dom) in x.iter().zip(&self.x_set.domains) {
            let ok = match dom {
                VarDomain::Continuous => *xj >= -tol,
                VarDomain::Binary => (*xj - xj.round()).abs() <= tol && (-tol..=1.0 + tol).contains(xj),
                VarDomain::Free => true,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// The scenario subproblem as a linear program with x fixed.
    pub fn scenario_lp(&self, scenario: usize, x: &[f64]) -> LinearProgram {
        let sc = &self.scenarios[scenario];
        let n2 = sc.num_vars();
        let mut lp = LinearProgram::new(n2);
        match self.cut_form {
            CutForm::DualStandard => {
                lp.objective = sc.q.clone();
                for (i, row) in sc.w.iter().enumerate() {
                    let rhs = sc.h[i] - dense::dot(&sc.t[i], x);
                    lp.add_row(row.clone(), sc.senses[i], rhs);
                }
            }
            CutForm::PrimalPath => {
                lp.objective = sc
                    .q
                    .iter()
                    .zip(&sc.t)
                    .map(|(&qj, t_row)| qj + dense::dot(t_row, x))
                    .collect();
                for (i, row) in sc.w.iter().enumerate() {
                    lp.add_row(row.clone(), sc.senses[i], sc.h[i]);
                }
            }
        }
        lp
    }
}

/// Result of evaluating the expected value function at one point.
#[derive(Clone, Debug)]
pub struct ValueFunctionResult {
    /// Q(x): the expected second-stage cost (minimization form).
    pub q_value: f64,
    /// Supporting cut: a global lower bound on Q that is tight at the
    /// generating point.
    pub cut: Cut,
    /// One vertex solution per scenario subproblem.
    pub per_scenario_primals: Vec<Vec<f64>>,
    /// The unweighted per-scenario values whose probability mix is q_value.
    pub per_scenario_values: Vec<f64>,
}

/// Per-scenario warm-start bases, keyed by scenario index. The Benders loop
/// re-solves the same subproblems with new first-stage points; costs or rhs
/// change but the standardized shape does not, so the previous basis is
/// always a valid restart.
#[derive(Clone, Debug, Default)]
pub struct ScenarioBasisCache {
    bases: Vec<Option<Vec<usize>>>,
}

impl ScenarioBasisCache {
    pub fn new(num_scenarios: usize) -> Self {
        ScenarioBasisCache {
            bases: vec![None; num_scenarios],
        }
    }
}

fn solve_scenario(
    p: &TwoStageProblem,
    scenario: usize,
    x: &[f64],
    warm: Option<&Vec<usize>>,
) -> Result<(f64, f64, Vec<f64>, Vec<f64>, Vec<usize>)> {
    let sc = &p.scenarios[scenario];
    let lp = p.scenario_lp(scenario, x);
    let sol: LpSolution = match warm {
        Some(basis) => solve_lp_from(&lp, basis)?,
        None => solve_lp(&lp)?,
    };
    match sol.status {
        LpStatus::Infeasible => return Err(Error::ScenarioInfeasible { scenario }),
        LpStatus::Unbounded => return Err(Error::ScenarioUnbounded { scenario }),
        LpStatus::Optimal => {}
    }
    let n1 = p.num_first_stage();
    let (q_value, alpha, beta) = match p.cut_form {
        CutForm::DualStandard => {
            // beta = -T' pi over the main rows; alpha chosen so the cut is
            // exact at the generating point (robust to bound shifts).
            let pi = &sol.duals[..sc.num_rows()];
            let mut beta = vec![0.0; n1];
            for (t_row, &pi_i) in sc.t.iter().zip(pi) {
                for (b, &t) in beta.iter_mut().zip(t_row) {
                    *b -= t * pi_i;
                }
            }
            let q_value = sol.objective;
            let alpha = q_value - dense::dot(&beta, x);
            (q_value, alpha, beta)
        }
        CutForm::PrimalPath => {
            // Value function is the negated best response; the optimal vertex
            // itself supplies the cut: Q(x) >= -q'y - (T'y)'x for any
            // feasible y, with equality at the generating point.
            let y = &sol.primal;
            let mut beta = vec![0.0; n1];
            for (t_row, &yj) in sc.t.iter().zip(y) {
                for (b, &t) in beta.iter_mut().zip(t_row) {
                    *b -= t * yj;
                }
            }
            let alpha = -dense::dot(&sc.q, y);
            (-sol.objective, alpha, beta)
        }
    };
    Ok((q_value, alpha, beta, sol.primal, sol.basis))
}

/// Evaluate Q with warm-start bases carried across calls.
pub fn evaluate_q_warm(
    p: &TwoStageProblem,
    x: &[f64],
    cache: &mut ScenarioBasisCache,
) -> Result<ValueFunctionResult> {
    if !p.x_feasible(x, X_FEAS_TOL) {
        return Err(Error::InvalidModel(format!(
            "point {x:?} violates the first-stage constraints"
        )));
    }
    if cache.bases.len() != p.scenarios.len() {
        *cache = ScenarioBasisCache::new(p.scenarios.len());
    }
    let results: Vec<Result<_>> = p
        .scenarios
        .par_iter()
        .enumerate()
        .map(|(k, _)| solve_scenario(p, k, x, cache.bases[k].as_ref()))
        .collect();

    let n1 = p.num_first_stage();
    let mut q_value = 0.0;
    let mut alpha = 0.0;
    let mut beta = vec![0.0; n1];
    let mut primals = Vec::with_capacity(p.scenarios.len());
    let mut values = Vec::with_capacity(p.scenarios.len());
    for (k, res) in results.into_iter().enumerate() {
        let (qk, ak, bk, primal, basis) = res?;
        let pk = p.scenarios[k].probability;
        q_value += pk * qk;
        alpha += pk * ak;
        for (b, &bkj) in beta.iter_mut().zip(&bk) {
            *b += pk * bkj;
        }
        primals.push(primal);
        values.push(qk);
        cache.bases[k] = Some(basis);
    }

    let cut = Cut::new(alpha, beta, x.to_vec());
    debug_assert!(
        (q_value - cut.value_at(x)).abs() <= 1e-7 * (1.0 + q_value.abs()),
        "cut not tight at its generating point"
    );
    Ok(ValueFunctionResult {
        q_value,
        cut,
        per_scenario_primals: primals,
        per_scenario_values: values,
    })
}

/// Evaluate the expected value function Q at a first-stage point, returning
/// the value, a supporting cut, and the per-scenario vertex solutions.
pub fn evaluate_q(p: &TwoStageProblem, x: &[f64]) -> Result<ValueFunctionResult> {
    let mut cache = ScenarioBasisCache::new(p.scenarios.len());
    evaluate_q_warm(p, x, &mut cache)
}

/// First-stage cost g(x).
pub fn first_stage_cost(p: &TwoStageProblem, x: &[f64]) -> f64 {
    dense::dot(&p.g.coeffs, x) + p.g.constant
}

/// Either a plain LP or a mixed-binary program, depending on the first-stage
/// domains.
#[derive(Clone, Debug)]
pub enum Model {
    Lp(LinearProgram),
    Mip(MixedBinaryProgram),
}

impl Model {
    pub fn lp(&self) -> &LinearProgram {
        match self {
            Model::Lp(lp) => lp,
            Model::Mip(mip) => &mip.base_lp,
        }
    }

    pub fn solve(&self) -> Result<LpSolution> {
        match self {
            Model::Lp(lp) => solve_lp(lp),
            Model::Mip(mip) => crate::bip::solve_bip(mip),
        }
    }
}

/// The extensive form together with the variable layout.
#[derive(Clone, Debug)]
pub struct ExtensiveForm {
    pub model: Model,
    /// First-stage variables occupy columns `0..x_count`.
    pub x_count: usize,
    /// Column offset of each scenario's second-stage (or dual) block.
    pub scenario_offsets: Vec<usize>,
}

impl ExtensiveForm {
    pub fn split_solution<'a>(&self, full: &'a [f64]) -> (&'a [f64], Vec<&'a [f64]>) {
        let x = &full[..self.x_count];
        let mut blocks = Vec::with_capacity(self.scenario_offsets.len());
        for (k, &off) in self.scenario_offsets.iter().enumerate() {
            let end = self
                .scenario_offsets
                .get(k + 1)
                .copied()
                .unwrap_or(full.len());
            blocks.push(&full[off..end]);
        }
        (x, blocks)
    }
}

fn apply_domain_bounds(lp: &mut LinearProgram, domains: &[VarDomain]) {
    for (j, dom) in domains.iter().enumerate() {
        match dom {
            VarDomain::Continuous => {}
            VarDomain::Binary => lp.upper[j] = 1.0,
            VarDomain::Free => lp.lower[j] = f64::NEG_INFINITY,
        }
    }
}

/// Build the monolithic model over first- and second-stage variables.
///
/// For `DualStandard` problems this is the direct coupled formulation; for
/// `PrimalPath` (max-min) problems the inner best response is replaced by its
/// LP dual so the whole thing is linear in the joint variables.
pub fn build_extensive_form(p: &TwoStageProblem) -> Result<ExtensiveForm> {
    p.validate()?;
    let n1 = p.num_first_stage();

    let mut offsets = Vec::with_capacity(p.scenarios.len());
    let mut total = n1;
    for sc in &p.scenarios {
        offsets.push(total);
        total += match p.cut_form {
            CutForm::DualStandard => sc.num_vars(),
            CutForm::PrimalPath => sc.num_rows(),
        };
    }

    let mut lp = LinearProgram::new(total);
    lp.objective_const = p.g.constant;
    lp.objective[..n1].copy_from_slice(&p.g.coeffs);
    apply_domain_bounds(&mut lp, &p.x_set.domains);

    for (row, (&sense, &b)) in p
        .x_set
        .rows
        .iter()
        .zip(p.x_set.senses.iter().zip(&p.x_set.rhs))
    {
        let mut full = vec![0.0; total];
        full[..n1].copy_from_slice(row);
        lp.add_row(full, sense, b);
    }

    for (k, sc) in p.scenarios.iter().enumerate() {
        let off = offsets[k];
        match p.cut_form {
            CutForm::DualStandard => {
                for (j, &qj) in sc.q.iter().enumerate() {
                    lp.objective[off + j] = sc.probability * qj;
                }
                for (i, w_row) in sc.w.iter().enumerate() {
                    let mut full = vec![0.0; total];
                    full[..n1].copy_from_slice(&sc.t[i]);
                    for (j, &wij) in w_row.iter().enumerate() {
                        full[off + j] = wij;
                    }
                    lp.add_row(full, sc.senses[i], sc.h[i]);
                }
            }
            CutForm::PrimalPath => {
                // Scenario contributes -p * h'pi to the objective, with dual
                // rows W'pi - Tx <= q and pi signed by the primal row sense.
                for (i, &hi) in sc.h.iter().enumerate() {
                    lp.objective[off + i] = -sc.probability * hi;
                    match sc.senses[i] {
                        ConstraintSense::Eq => lp.lower[off + i] = f64::NEG_INFINITY,
                        ConstraintSense::Ge => {}
                        ConstraintSense::Le => {
                            lp.lower[off + i] = f64::NEG_INFINITY;
                            lp.upper[off + i] = 0.0;
                        }
                    }
                }
                for j in 0..sc.num_vars() {
                    let mut full = vec![0.0; total];
                    for (x_col, &t) in full[..n1].iter_mut().zip(&sc.t[j]) {
                        *x_col = -t;
                    }
                    for (i, w_row) in sc.w.iter().enumerate() {
                        full[off + i] = w_row[j];
                    }
                    lp.add_row(full, ConstraintSense::Le, sc.q[j]);
                }
            }
        }
    }

    let model = if p.has_binary_first_stage() {
        Model::Mip(MixedBinaryProgram::new(lp, p.binary_indices())?)
    } else {
        Model::Lp(lp)
    };
    Ok(ExtensiveForm {
        model,
        x_count: n1,
        scenario_offsets: offsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Q(x) = |x| built from one equality row: y1 - y2 = x, costs (1, 1).
    pub(crate) fn abs_value_problem() -> TwoStageProblem {
        TwoStageProblem {
            g: AffineCost {
                coeffs: vec![0.0],
                constant: 0.0,
            },
            x_set: FirstStageSet {
                rows: vec![vec![1.0], vec![-1.0]],
                senses: vec![ConstraintSense::Le, ConstraintSense::Le],
                rhs: vec![1.0, 1.0],
                domains: vec![VarDomain::Free],
            },
            scenarios: vec![Scenario {
                probability: 1.0,
                q: vec![1.0, 1.0],
                w: vec![vec![1.0, -1.0]],
                t: vec![vec![-1.0]],
                h: vec![0.0],
                senses: vec![ConstraintSense::Eq],
            }],
            cut_form: CutForm::DualStandard,
            theta_floor: Some(-1.0),
        }
    }

    #[test]
    fn abs_value_function() {
        let p = abs_value_problem();
        for (x, expected) in [(-1.0, 1.0), (-0.5, 0.5), (0.0, 0.0), (0.75, 0.75)] {
            let vf = evaluate_q(&p, &[x]).unwrap();
            assert!(
                (vf.q_value - expected).abs() < 1e-9,
                "Q({x}) = {}, expected {expected}",
                vf.q_value
            );
            // The cut supports Q at the generating point.
            assert!((vf.cut.value_at(&[x]) - vf.q_value).abs() < 1e-9);
        }
    }

    #[test]
    fn cuts_underestimate_q_everywhere() {
        let p = abs_value_problem();
        let generators = [-1.0, -0.3, 0.4, 1.0];
        let samples: Vec<f64> = (0..41).map(|i| -1.0 + 0.05 * i as f64).collect();
        for gx in generators {
            let cut = evaluate_q(&p, &[gx]).unwrap().cut;
            for &x in &samples {
                let q = evaluate_q(&p, &[x]).unwrap().q_value;
                assert!(
                    cut.value_at(&[x]) <= q + 1e-6,
                    "cut from {gx} overestimates at {x}"
                );
            }
        }
    }

    #[test]
    fn first_stage_cost_is_affine() {
        let mut p = abs_value_problem();
        p.g = AffineCost {
            coeffs: vec![2.0],
            constant: 3.0,
        };
        assert_eq!(first_stage_cost(&p, &[0.0]), 3.0);
        assert_eq!(first_stage_cost(&p, &[2.0]), 7.0);
    }

    #[test]
    fn extensive_form_matches_value_function() {
        let p = abs_value_problem();
        let ef = build_extensive_form(&p).unwrap();
        let sol = ef.model.solve().unwrap();
        assert!(sol.is_optimal());
        assert!(sol.objective.abs() < 1e-9); // min |x| over [-1, 1]
    }

    #[test]
    fn infeasible_scenario_names_itself() {
        let mut p = abs_value_problem();
        // Force an infeasible second stage: y1 + y2 = -1 with y >= 0.
        p.scenarios[0].w = vec![vec![1.0, 1.0]];
        p.scenarios[0].h = vec![-1.0];
        p.scenarios[0].t = vec![vec![0.0]];
        let err = evaluate_q(&p, &[0.0]).unwrap_err();
        assert_eq!(err, Error::ScenarioInfeasible { scenario: 0 });
    }

    #[test]
    fn probabilities_must_sum_to_one() {
        let mut p = abs_value_problem();
        p.scenarios[0].probability = 0.5;
        assert!(matches!(p.validate(), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn json_round_trip() {
        let p = abs_value_problem();
        let json = serde_json::to_string(&p).unwrap();
        let back: TwoStageProblem = serde_json::from_str(&json).unwrap();
        back.validate().unwrap();
        assert_eq!(back.scenarios[0].q, p.scenarios[0].q);
        assert_eq!(back.cut_form, p.cut_form);
    }
}
