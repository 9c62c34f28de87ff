//! Alternative-solution generators, both running in "optimal" search mode:
//! solutions come out in nondecreasing objective order, subject to a sublevel
//! bound `tau` and a solution limit.
//!
//! * [`enumerate_linear_solutions`] walks the feasible-basis graph of the
//!   tau-sublevel polytope outward from the optimal basis, so with a bounded
//!   polytope and enough budget it returns every vertex.
//! * [`enumerate_binary_solutions`] re-solves a mixed-binary model under
//!   accumulating no-good cuts until the model goes infeasible or the
//!   objective passes tau.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bip::{solve_bip_with_extra_cuts, LinearCut, MixedBinaryProgram};
use crate::error::{Error, Result};
use crate::lp::{
    dense, standardize, ConstraintSense, Direction, Engine, LinearProgram, LpStatus, Outcome,
    SimplexOptions, StandardizedLp,
};
use crate::two_stage::Model;

/// A request to enumerate alternative solutions of a model.
#[derive(Clone, Debug)]
pub struct EnumerationRequest {
    pub model: Model,
    /// Absolute objective bound; only solutions with objective <= tau count.
    pub tau: f64,
    /// Maximum number of solutions to return (>= 1).
    pub k_limit: usize,
    /// Coordinate tolerance for deduplication.
    pub dedupe_tol: f64,
}

impl EnumerationRequest {
    pub fn new(model: Model, tau: f64, k_limit: usize) -> Self {
        EnumerationRequest {
            model,
            tau,
            k_limit,
            dedupe_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidatePoint {
    pub solution: Vec<f64>,
    pub objective: f64,
}

/// Solutions in nondecreasing objective order.
///
/// `exhausted` is true exactly when the search space ran out: every solution
/// of the sublevel set has been returned. When the solution limit stopped the
/// search first, `exhausted` is false.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateSet {
    pub points: Vec<CandidatePoint>,
    pub exhausted: bool,
}

fn round_key(values: impl Iterator<Item = f64>, tol: f64) -> Vec<i64> {
    values.map(|v| (v / tol).round() as i64).collect()
}

fn lex_less(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap_or(Ordering::Equal) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

struct FrontierEntry {
    objective: f64,
    solution: Vec<f64>,
    basis: Vec<usize>,
}

impl PartialEq for FrontierEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for FrontierEntry {}
impl PartialOrd for FrontierEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FrontierEntry {
    // Reversed: BinaryHeap pops the entry with the LOWEST objective first,
    // ties broken lexicographically by solution then by basis for
    // deterministic output.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .objective
            .partial_cmp(&self.objective)
            .unwrap_or(Ordering::Equal)
            .then_with(|| lex_less(&other.solution, &self.solution))
            .then_with(|| other.basis.cmp(&self.basis))
    }
}

/// The tau-sublevel polytope of an LP: the model's rows plus an explicit
/// objective row `c'x <= tau`. Vertices created by that face count as
/// alternative solutions.
fn sublevel_lp(lp: &LinearProgram, tau: f64) -> Result<LinearProgram> {
    if lp.direction != Direction::Minimize {
        return Err(Error::InvalidModel(
            "enumeration expects a minimization model".into(),
        ));
    }
    let mut bounded = lp.clone();
    bounded.add_row(
        lp.objective.clone(),
        ConstraintSense::Le,
        tau - lp.objective_const,
    );
    Ok(bounded)
}

/// Reject sublevel polytopes with unbounded directions: exhaustive vertex
/// enumeration is meaningless there. A polyhedron is bounded iff every
/// coordinate is bounded in both directions, probed one LP per direction in
/// the model's own space (a standardized probe would trip over the rays that
/// splitting free variables introduces).
fn check_bounded(sublevel: &LinearProgram) -> Result<()> {
    for j in 0..sublevel.num_vars() {
        for sign in [1.0, -1.0] {
            if sign > 0.0 && sublevel.upper[j].is_finite() {
                continue;
            }
            if sign < 0.0 && sublevel.lower[j].is_finite() {
                continue;
            }
            let mut probe = sublevel.clone();
            probe.objective = vec![0.0; probe.num_vars()];
            probe.objective[j] = -sign;
            probe.objective_const = 0.0;
            let sol = crate::lp::solve_lp(&probe)?;
            if sol.status == LpStatus::Unbounded {
                return Err(Error::UnboundedSublevelSet);
            }
        }
    }
    Ok(())
}

struct VertexWalker<'a> {
    std: &'a StandardizedLp,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    ratio_tol: f64,
}

impl<'a> VertexWalker<'a> {
    fn new(std: &'a StandardizedLp, active_rows: &[usize]) -> Self {
        let rows = active_rows.iter().map(|&i| std.rows[i].clone()).collect();
        let rhs = active_rows.iter().map(|&i| std.rhs[i]).collect();
        VertexWalker {
            std,
            rows,
            rhs,
            ratio_tol: 1e-9,
        }
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    fn basis_matrix(&self, basis: &[usize]) -> Vec<Vec<f64>> {
        (0..self.m())
            .map(|i| basis.iter().map(|&j| self.rows[i][j]).collect())
            .collect()
    }

    /// Basic point of a basis, or None when singular/infeasible.
    fn basic_point(&self, basis: &[usize]) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
        let b_inv = dense::invert(&self.basis_matrix(basis))?;
        let x_b = dense::mat_vec(&b_inv, &self.rhs);
        if x_b.iter().any(|&v| v < -1e-7) {
            return None;
        }
        let mut z = vec![0.0; self.std.num_cols()];
        for (&j, &v) in basis.iter().zip(&x_b) {
            z[j] = v.max(0.0);
        }
        Some((z, b_inv))
    }

    /// All bases one pivot away, honoring degenerate ratio ties so the whole
    /// feasible-basis graph stays connected.
    fn neighbors(&self, basis: &[usize], b_inv: &[Vec<f64>]) -> Vec<Vec<usize>> {
        let in_basis: HashSet<usize> = basis.iter().copied().collect();
        let x_b = dense::mat_vec(b_inv, &self.rhs);
        let mut out = Vec::new();
        for j in 0..self.std.num_cols() {
            if in_basis.contains(&j) {
                continue;
            }
            let col: Vec<f64> = (0..self.m()).map(|i| self.rows[i][j]).collect();
            let w = dense::mat_vec(b_inv, &col);
            let mut best_ratio = f64::INFINITY;
            for (i, &wi) in w.iter().enumerate() {
                if wi > self.ratio_tol {
                    best_ratio = best_ratio.min(x_b[i].max(0.0) / wi);
                }
            }
            if !best_ratio.is_finite() {
                // Unbounded edge; excluded by the boundedness probe, but be
                // defensive about degenerate numerics.
                continue;
            }
            for (i, &wi) in w.iter().enumerate() {
                if wi > self.ratio_tol {
                    let ratio = x_b[i].max(0.0) / wi;
                    if ratio <= best_ratio + 1e-9 {
                        let mut next = basis.to_vec();
                        next[i] = j;
                        next.sort_unstable();
                        out.push(next);
                    }
                }
            }
        }
        out
    }
}

/// Enumerate vertices of the tau-sublevel polytope of an LP in nondecreasing
/// objective order.
///
/// Returns an empty exhausted set when the sublevel set is infeasible and an
/// error when it is unbounded.
pub fn enumerate_linear_solutions(req: &EnumerationRequest) -> Result<CandidateSet> {
    let lp = match &req.model {
        Model::Lp(lp) => lp,
        Model::Mip(_) => {
            return Err(Error::InvalidModel(
                "enumerate_linear_solutions expects a continuous model".into(),
            ))
        }
    };
    if req.k_limit == 0 {
        return Err(Error::InvalidModel("k_limit must be at least 1".into()));
    }
    let bounded = sublevel_lp(lp, req.tau)?;
    let std = standardize(&bounded)?;

    let mut engine = Engine::new(&std, SimplexOptions::default());
    let first = engine.cold_solve()?;
    match first.outcome {
        Outcome::Infeasible => {
            return Ok(CandidateSet {
                points: Vec::new(),
                exhausted: true,
            })
        }
        Outcome::Unbounded => return Err(Error::UnboundedSublevelSet),
        Outcome::Optimal => {}
    }
    check_bounded(&bounded)?;

    let walker = VertexWalker::new(&std, &first.active_rows);
    let mut heap: BinaryHeap<FrontierEntry> = BinaryHeap::new();
    let mut seen_bases: HashSet<Vec<usize>> = HashSet::new();
    let mut seen_vertices: HashSet<Vec<i64>> = HashSet::new();
    let mut points: Vec<CandidatePoint> = Vec::new();

    fn push(
        heap: &mut BinaryHeap<FrontierEntry>,
        seen: &mut HashSet<Vec<usize>>,
        walker: &VertexWalker,
        basis: Vec<usize>,
    ) {
        if seen.contains(&basis) {
            return;
        }
        if let Some((z, _)) = walker.basic_point(&basis) {
            let solution = walker.std.original_point(&z);
            let objective = walker.std.original_objective(&z);
            seen.insert(basis.clone());
            heap.push(FrontierEntry {
                objective,
                solution,
                basis,
            });
        }
    }

    push(&mut heap, &mut seen_bases, &walker, first.basis.clone());

    // Vertices on one objective plateau can be discovered in any order, so
    // the whole plateau is drained before emission and sorted
    // lexicographically; output order is then deterministic regardless of
    // which optimal basis the cold solve happened to land on.
    let mut plateau: Vec<FrontierEntry> = Vec::new();
    let mut truncated = false;
    'search: while let Some(front) = heap.peek() {
        let level = front.objective;
        let level_tol = 1e-9 * (1.0 + level.abs());
        while heap
            .peek()
            .is_some_and(|e| e.objective <= level + level_tol)
        {
            let entry = heap.pop().unwrap();
            let key = round_key(entry.solution.iter().copied(), req.dedupe_tol);
            let b_inv = walker.basic_point(&entry.basis).map(|(_, inv)| inv);
            if let Some(b_inv) = b_inv {
                for next in walker.neighbors(&entry.basis, &b_inv) {
                    push(&mut heap, &mut seen_bases, &walker, next);
                }
            }
            if seen_vertices.insert(key) {
                plateau.push(entry);
            }
        }
        plateau.sort_by(|a, b| lex_less(&a.solution, &b.solution));
        for entry in plateau.drain(..) {
            if points.len() == req.k_limit {
                // At least this entry goes undelivered.
                truncated = true;
                break;
            }
            points.push(CandidatePoint {
                solution: entry.solution,
                objective: entry.objective,
            });
        }
        if truncated {
            break 'search;
        }
        if points.len() == req.k_limit {
            truncated = !heap.is_empty();
            break 'search;
        }
    }
    let exhausted = !truncated;

    debug_assert!(points
        .windows(2)
        .all(|p| p[1].objective >= p[0].objective - 1e-6 * (1.0 + p[0].objective.abs())));
    Ok(CandidateSet { points, exhausted })
}

/// Enumerate binary solutions of a mixed-binary model by repeated solves
/// under no-good cuts.
///
/// Continuous helper variables (such as the master's theta) are allowed;
/// deduplication and the excluding cuts run over the binary coordinates only.
pub fn enumerate_binary_solutions(req: &EnumerationRequest) -> Result<CandidateSet> {
    let mip = match &req.model {
        Model::Mip(mip) => mip,
        Model::Lp(_) => {
            return Err(Error::InvalidModel(
                "enumerate_binary_solutions expects a model with binary variables".into(),
            ))
        }
    };
    if req.k_limit == 0 {
        return Err(Error::InvalidModel("k_limit must be at least 1".into()));
    }
    if mip.base_lp.direction != Direction::Minimize {
        return Err(Error::InvalidModel(
            "enumeration expects a minimization model".into(),
        ));
    }
    let accept_tol = 1e-7 * (1.0 + req.tau.abs());

    let mut cuts: Vec<LinearCut> = Vec::new();
    let mut points: Vec<CandidatePoint> = Vec::new();
    let exhausted = loop {
        let sol = solve_bip_with_extra_cuts(mip, &cuts)?;
        match sol.status {
            LpStatus::Infeasible => break true,
            LpStatus::Unbounded => return Err(Error::Unbounded),
            LpStatus::Optimal => {}
        }
        if sol.objective > req.tau + accept_tol {
            // Optimal search mode: everything still feasible is worse.
            break true;
        }
        if let Some(last) = points.last() {
            debug_assert!(sol.objective >= last.objective - 1e-9);
        }
        points.push(CandidatePoint {
            solution: sol.primal.clone(),
            objective: sol.objective,
        });
        if points.len() == req.k_limit {
            break false;
        }
        cuts.push(no_good_cut(mip, &sol.primal));
    };
    Ok(CandidateSet { points, exhausted })
}

/// The cut excluding exactly one binary point: flipping any single binary
/// coordinate satisfies it again.
fn no_good_cut(mip: &MixedBinaryProgram, point: &[f64]) -> LinearCut {
    let n = mip.base_lp.num_vars();
    let mut coeffs = vec![0.0; n];
    let mut ones = 0.0;
    for &j in &mip.binary_vars {
        if point[j].round() >= 1.0 {
            coeffs[j] = -1.0;
            ones += 1.0;
        } else {
            coeffs[j] = 1.0;
        }
    }
    LinearCut {
        coeffs,
        sense: ConstraintSense::Ge,
        rhs: 1.0 - ones,
    }
}
