//! Independent brute-force ground truth.
//!
//! Everything here recomputes answers through a second route: exhaustive
//! binary enumeration with label-correcting shortest paths (no simplex),
//! direct extensive-form solves, active-set vertex enumeration for small
//! polytopes, and a worked instance with a kinked value function whose
//! single-slope approximations are analyzed in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{dense, ConstraintSense, LinearProgram};
use crate::two_stage::{
    build_extensive_form, first_stage_cost, AffineCost, CutForm, FirstStageSet, Scenario,
    TwoStageProblem, VarDomain,
};

const BINARY_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    BinaryExhaustive,
    EfDirect,
    VertexBruteforce,
}

/// Ground-truth membership list for a level set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleReport {
    pub tau: f64,
    /// First-stage points with true objective at most tau, with objectives.
    pub exact_set: Vec<(Vec<f64>, f64)>,
    pub method: OracleMethod,
}

/// A directed graph recovered from flow-balance rows: one row per node
/// except the sink, each column touching a +1 (tail) and optionally a -1
/// (head); columns missing a -1 point at the sink.
struct RecoveredNetwork {
    source: usize,
    /// Index of the virtual sink (one past the last row).
    sink: usize,
    /// (tail, head) per arc.
    arcs: Vec<(usize, usize)>,
}

fn recover_network(sc: &Scenario) -> Result<RecoveredNetwork> {
    let m = sc.num_rows();
    if sc.senses.iter().any(|s| *s != ConstraintSense::Eq) {
        return Err(Error::InvalidModel(
            "oracle: flow rows must be equalities".into(),
        ));
    }
    let mut source = None;
    for (i, &hi) in sc.h.iter().enumerate() {
        if (hi - 1.0).abs() < 1e-12 {
            if source.replace(i).is_some() {
                return Err(Error::InvalidModel("oracle: multiple source rows".into()));
            }
        } else if hi.abs() > 1e-12 {
            return Err(Error::InvalidModel(
                "oracle: flow rhs must be the source indicator".into(),
            ));
        }
    }
    let source =
        source.ok_or_else(|| Error::InvalidModel("oracle: no source row found".into()))?;
    let mut arcs = Vec::with_capacity(sc.num_vars());
    for k in 0..sc.num_vars() {
        let mut tail = None;
        let mut head = None;
        for i in 0..m {
            let v = sc.w[i][k];
            if (v - 1.0).abs() < 1e-12 {
                if tail.replace(i).is_some() {
                    return Err(Error::InvalidModel("oracle: column with two tails".into()));
                }
            } else if (v + 1.0).abs() < 1e-12 {
                if head.replace(i).is_some() {
                    return Err(Error::InvalidModel("oracle: column with two heads".into()));
                }
            } else if v.abs() > 1e-12 {
                return Err(Error::InvalidModel(
                    "oracle: rows are not an incidence structure".into(),
                ));
            }
        }
        let tail =
            tail.ok_or_else(|| Error::InvalidModel("oracle: column without a tail".into()))?;
        arcs.push((tail, head.unwrap_or(m)));
    }
    Ok(RecoveredNetwork {
        source,
        sink: m,
        arcs,
    })
}

fn shortest_path(net: &RecoveredNetwork, costs: &[f64]) -> Option<f64> {
    let n = net.sink + 1;
    let mut dist = vec![f64::INFINITY; n];
    dist[net.source] = 0.0;
    for _ in 0..n {
        let mut changed = false;
        for (&(u, v), &cost) in net.arcs.iter().zip(costs) {
            if dist[u] + cost < dist[v] - 1e-12 {
                dist[v] = dist[u] + cost;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dist[net.sink].is_finite().then_some(dist[net.sink])
}

/// Enumerate every feasible binary first-stage point and keep those whose
/// true objective is at most tau.
///
/// The value function is recomputed by label-correcting shortest paths over
/// the network recovered from the flow rows, deliberately avoiding the
/// simplex path so agreement is a genuine cross-check. Only max-min models
/// with binary first stages qualify.
pub fn brute_force_binary(p: &TwoStageProblem, tau: f64) -> Result<OracleReport> {
    p.validate()?;
    if p.cut_form != CutForm::PrimalPath {
        return Err(Error::InvalidModel(
            "oracle: binary brute force expects the max-min form".into(),
        ));
    }
    let n1 = p.num_first_stage();
    if p.x_set.domains.iter().any(|d| *d != VarDomain::Binary) {
        return Err(Error::InvalidModel(
            "oracle: first stage must be all binary".into(),
        ));
    }
    if n1 > BINARY_LIMIT {
        return Err(Error::TooManyBinaries {
            count: n1,
            limit: BINARY_LIMIT,
        });
    }
    let networks: Vec<RecoveredNetwork> = p
        .scenarios
        .iter()
        .map(recover_network)
        .collect::<Result<_>>()?;

    let mut exact_set = Vec::new();
    let accept = tau + crate::pipeline::cert_tol(tau);
    for mask in 0u64..(1 << n1) {
        let x: Vec<f64> = (0..n1).map(|j| ((mask >> j) & 1) as f64).collect();
        if !p.x_feasible(&x, 1e-9) {
            continue;
        }
        let mut objective = first_stage_cost(p, &x);
        let mut reachable = true;
        for (sc, net) in p.scenarios.iter().zip(&networks) {
            let costs: Vec<f64> = sc
                .q
                .iter()
                .zip(&sc.t)
                .map(|(&qk, t_row)| qk + dense::dot(t_row, &x))
                .collect();
            match shortest_path(net, &costs) {
                Some(best) => objective += sc.probability * -best,
                None => {
                    reachable = false;
                    break;
                }
            }
        }
        if reachable && objective <= accept {
            exact_set.push((x, objective));
        }
    }
    exact_set.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .unwrap()
            .then_with(|| a.0.partial_cmp(&b.0).unwrap())
    });
    Ok(OracleReport {
        tau,
        exact_set,
        method: OracleMethod::BinaryExhaustive,
    })
}

/// Solve the monolithic extensive form directly, independent of the
/// decomposition loop.
pub fn solve_ef_direct(p: &TwoStageProblem) -> Result<(f64, Vec<f64>)> {
    let ef = build_extensive_form(p)?;
    let sol = ef.model.solve()?;
    match sol.status {
        crate::lp::LpStatus::Optimal => Ok((sol.objective, sol.primal)),
        crate::lp::LpStatus::Infeasible => {
            Err(Error::InvalidModel("extensive form infeasible".into()))
        }
        crate::lp::LpStatus::Unbounded => Err(Error::Unbounded),
    }
}

/// Brute-force vertex enumeration of a small polytope by active sets: every
/// n-subset of the constraint rows (bound rows included) is solved as an
/// equality system, and solutions feasible for the whole program are
/// vertices. Linear algebra is a local Gaussian elimination, independent of
/// the simplex machinery this oracle audits.
pub fn brute_force_vertices(lp: &LinearProgram, tol: f64) -> Vec<Vec<f64>> {
    let n = lp.num_vars();
    // Collect every constraint as a (coeffs, rhs) hyperplane candidate.
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for (row, &b) in lp.rows.iter().zip(&lp.rhs) {
        planes.push((row.clone(), b));
    }
    for j in 0..n {
        if lp.lower[j].is_finite() {
            let mut row = vec![0.0; n];
            row[j] = 1.0;
            planes.push((row, lp.lower[j]));
        }
        if lp.upper[j].is_finite() {
            let mut row = vec![0.0; n];
            row[j] = 1.0;
            planes.push((row, lp.upper[j]));
        }
    }

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut keys: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
    let mut subset = vec![0usize; n];
    enumerate_subsets(planes.len(), n, 0, &mut subset, &mut |chosen| {
        let a: Vec<Vec<f64>> = chosen.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<f64> = chosen.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = gaussian_solve(a, b) {
            if lp.max_violation(&x) <= tol {
                let key: Vec<i64> = x.iter().map(|v| (v / 1e-6).round() as i64).collect();
                if keys.insert(key) {
                    vertices.push(x);
                }
            }
        }
    });
    vertices
}

fn enumerate_subsets(
    total: usize,
    want: usize,
    start: usize,
    current: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    let depth = current.len() - want;
    if want == 0 {
        visit(current);
        return;
    }
    for i in start..total {
        current[depth] = i;
        enumerate_subsets(total, want - 1, i + 1, current, visit);
    }
}

fn gaussian_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            b[row] -= f * b[col];
            let (source, target) = if row < col {
                let (head, tail) = a.split_at_mut(col);
                (&tail[0], &mut head[row])
            } else {
                let (head, tail) = a.split_at_mut(row);
                (&head[col], &mut tail[0])
            };
            for (t, s) in target.iter_mut().zip(source.iter()) {
                *t -= f * s;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// The worked instance with Q(x) = |x|: one balance row y1 - y2 = x with
/// unit costs. Its two dual vertices are -1 and +1; dropping either slope
/// lets points sneak under the approximate value function.
pub struct AbsQInstance {
    pub problem: TwoStageProblem,
    pub dual_vertices: [f64; 2],
}

impl AbsQInstance {
    /// Q in closed form.
    pub fn q_true(&self, x: f64) -> f64 {
        x.abs()
    }

    /// The pooled approximation from a subset of the dual vertices.
    pub fn q_hat(&self, subset: &[f64], x: f64) -> f64 {
        subset
            .iter()
            .map(|&pi| pi * x)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn in_x(&self, x: f64) -> bool {
        (-1.0..=1.0).contains(&x)
    }

    pub fn epi_q_contains(&self, x: f64, theta: f64) -> bool {
        self.in_x(x) && theta >= self.q_true(x)
    }

    pub fn epi_q_hat_contains(&self, subset: &[f64], x: f64, theta: f64) -> bool {
        self.in_x(x) && theta >= self.q_hat(subset, x)
    }

    /// Level-set membership for the master built on a vertex subset.
    pub fn level_bm_contains(&self, subset: &[f64], tau: f64, x: f64, theta: f64) -> bool {
        self.epi_q_hat_contains(subset, x, theta) && theta <= tau
    }

    /// Level-set membership for the exact epigraph formulation.
    pub fn level_ev_contains(&self, tau: f64, x: f64, theta: f64) -> bool {
        self.epi_q_contains(x, theta) && theta <= tau
    }

    /// Level-set membership for the projected problem g + Q <= tau.
    pub fn level_pv_contains(&self, tau: f64, x: f64) -> bool {
        self.in_x(x) && self.q_true(x) <= tau
    }

    /// Whether the full-space level set at tau is empty, via a direct solve.
    pub fn level_ef_is_empty(&self, tau: f64) -> Result<bool> {
        let (z_star, _) = solve_ef_direct(&self.problem)?;
        Ok(tau < z_star - 1e-9)
    }
}

/// Build the |x| instance.
pub fn counterexample_abs_q() -> AbsQInstance {
    AbsQInstance {
        problem: TwoStageProblem {
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
        },
        dual_vertices: [-1.0, 1.0],
    }
}
