//! Exact solver for programs with binary variables plus continuous helpers,
//! via branch-and-bound over LP relaxations.
//!
//! Node selection is best-bound, so incumbents improve monotonically and the
//! first incumbent matching the best bound is optimal. Branching picks the
//! most fractional binary, ties broken by lowest index, which keeps candidate
//! ordering reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::lp::{solve_lp, ConstraintSense, LinearProgram, LpSolution, LpStatus};

/// Integrality tolerance; binaries within this of 0/1 are rounded on
/// extraction.
pub const INT_TOL: f64 = 1e-6;

/// A linear program in which a subset of the variables is constrained to
/// {0, 1}. The bounds of those variables in `base_lp` must lie inside [0, 1].
#[derive(Clone, Debug)]
pub struct MixedBinaryProgram {
    pub base_lp: LinearProgram,
    /// Sorted indices of the binary variables.
    pub binary_vars: Vec<usize>,
}

/// An extra inequality appended on top of a model, e.g. a no-good cut.
#[derive(Clone, Debug)]
pub struct LinearCut {
    pub coeffs: Vec<f64>,
    pub sense: ConstraintSense,
    pub rhs: f64,
}

impl MixedBinaryProgram {
    pub fn new(base_lp: LinearProgram, mut binary_vars: Vec<usize>) -> Result<Self> {
        binary_vars.sort_unstable();
        binary_vars.dedup();
        let n = base_lp.num_vars();
        for &j in &binary_vars {
            if j >= n {
                return Err(Error::InvalidModel(format!(
                    "binary variable index {j} out of range ({n} variables)"
                )));
            }
            if base_lp.lower[j] < -INT_TOL || base_lp.upper[j] > 1.0 + INT_TOL {
                return Err(Error::InvalidModel(format!(
                    "binary variable {j} has bounds [{}, {}] outside [0, 1]",
                    base_lp.lower[j], base_lp.upper[j]
                )));
            }
        }
        Ok(MixedBinaryProgram {
            base_lp,
            binary_vars,
        })
    }
}

struct Node {
    bound: f64,
    seq: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // BinaryHeap is a max-heap; invert so the lowest bound pops first, with
    // insertion order as the deterministic tie-break.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn most_fractional(binaries: &[usize], x: &[f64]) -> Option<usize> {
    let mut pick: Option<(usize, f64)> = None;
    for &j in binaries {
        let frac = (x[j] - x[j].round()).abs();
        if frac <= INT_TOL {
            continue;
        }
        let dist = frac.min(1.0 - frac);
        match pick {
            Some((_, best)) if dist <= best => {}
            _ => pick = Some((j, dist)),
        }
    }
    pick.map(|(j, _)| j)
}

/// Solve a mixed-binary program to optimality.
///
/// The returned solution has every binary integral (rounded within
/// [`INT_TOL`]); `status` is `Infeasible` when no binary assignment is
/// feasible. An unbounded relaxation is an input error: the models built in
/// this crate always bound the continuous helper from below.
pub fn solve_bip(p: &MixedBinaryProgram) -> Result<LpSolution> {
    p.base_lp.validate()?;
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    heap.push(Node {
        bound: f64::NEG_INFINITY,
        seq,
        lower: p.base_lp.lower.clone(),
        upper: p.base_lp.upper.clone(),
    });

    let maximize = p.base_lp.direction == crate::lp::Direction::Maximize;
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };

    let mut incumbent: Option<LpSolution> = None;
    let node_limit = 1usize << (p.binary_vars.len().min(20) + 1);
    let mut nodes = 0usize;

    while let Some(node) = heap.pop() {
        nodes += 1;
        if nodes > node_limit {
            return Err(Error::InvalidModel(
                "branch-and-bound node limit exceeded".into(),
            ));
        }
        if let Some(inc) = &incumbent {
            // Best-bound order: once the bound reaches the incumbent the
            // remaining nodes cannot improve on it.
            if node.bound.is_finite() && !better(node.bound, inc.objective + 1e-12) {
                break;
            }
        }
        let mut relax = p.base_lp.clone();
        relax.lower = node.lower.clone();
        relax.upper = node.upper.clone();
        let sol = solve_lp(&relax)?;
        match sol.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => return Err(Error::Unbounded),
            LpStatus::Optimal => {}
        }
        if let Some(inc) = &incumbent {
            if !better(sol.objective, inc.objective + 1e-12) {
                continue;
            }
        }
        match most_fractional(&p.binary_vars, &sol.primal) {
            None => {
                let mut rounded = sol;
                for &j in &p.binary_vars {
                    rounded.primal[j] = rounded.primal[j].round();
                }
                incumbent = Some(rounded);
            }
            Some(j) => {
                for fix in [0.0, 1.0] {
                    let mut lower = node.lower.clone();
                    let mut upper = node.upper.clone();
                    lower[j] = fix;
                    upper[j] = fix;
                    seq += 1;
                    heap.push(Node {
                        bound: sol.objective,
                        seq,
                        lower,
                        upper,
                    });
                }
            }
        }
    }

    Ok(incumbent.unwrap_or(LpSolution {
        status: LpStatus::Infeasible,
        primal: Vec::new(),
        duals: Vec::new(),
        objective: 0.0,
        dual_objective: 0.0,
        basis: Vec::new(),
        pivots: 0,
    }))
}

/// Solve `p` intersected with extra linear cuts, without mutating `p`.
///
/// Infeasibility here is an ordinary status, not an error: it is the
/// termination signal of no-good-cut enumeration.
pub fn solve_bip_with_extra_cuts(p: &MixedBinaryProgram, cuts: &[LinearCut]) -> Result<LpSolution> {
    let mut extended = p.clone();
    for cut in cuts {
        if cut.coeffs.len() != extended.base_lp.num_vars() {
            return Err(Error::InvalidModel(format!(
                "cut has {} coefficients, expected {}",
                cut.coeffs.len(),
                extended.base_lp.num_vars()
            )));
        }
        extended
            .base_lp
            .add_row(cut.coeffs.clone(), cut.sense, cut.rhs);
    }
    solve_bip(&extended)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Direction;

    fn knapsack_pair() -> MixedBinaryProgram {
        // max x1 + x2 subject to x1 + x2 <= 1, binaries.
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![1.0, 1.0];
        lp.direction = Direction::Maximize;
        lp.upper = vec![1.0, 1.0];
        lp.add_row(vec![1.0, 1.0], ConstraintSense::Le, 1.0);
        MixedBinaryProgram::new(lp, vec![0, 1]).unwrap()
    }

    #[test]
    fn all_binary_knapsack() {
        let sol = solve_bip(&knapsack_pair()).unwrap();
        assert!(sol.is_optimal());
        assert!((sol.objective - 1.0).abs() < 1e-9);
        let total: f64 = sol.primal.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_cuts_matches_plain_solve() {
        let p = knapsack_pair();
        let a = solve_bip(&p).unwrap();
        let b = solve_bip_with_extra_cuts(&p, &[]).unwrap();
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.primal, b.primal);
    }

    #[test]
    fn exhausting_cuts_reports_infeasible() {
        let p = knapsack_pair();
        // Exclude every feasible point of the knapsack: (0,0), (1,0), (0,1).
        let cuts = vec![
            LinearCut {
                coeffs: vec![1.0, 1.0],
                sense: ConstraintSense::Ge,
                rhs: 1.0,
            },
            LinearCut {
                coeffs: vec![-1.0, 1.0],
                sense: ConstraintSense::Ge,
                rhs: 0.0,
            },
            LinearCut {
                coeffs: vec![1.0, -1.0],
                sense: ConstraintSense::Ge,
                rhs: 0.0,
            },
            LinearCut {
                coeffs: vec![1.0, 1.0],
                sense: ConstraintSense::Le,
                rhs: 0.0,
            },
        ];
        let sol = solve_bip_with_extra_cuts(&p, &cuts).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn no_good_cut_moves_to_next_best() {
        // min 2a + 3b subject to a + b >= 1: optimum (1,0) cost 2,
        // next-best binary point (0,1) cost 3 (brute force over 4 points).
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![2.0, 3.0];
        lp.upper = vec![1.0, 1.0];
        lp.add_row(vec![1.0, 1.0], ConstraintSense::Ge, 1.0);
        let p = MixedBinaryProgram::new(lp, vec![0, 1]).unwrap();
        let first = solve_bip(&p).unwrap();
        assert_eq!(first.primal, vec![1.0, 0.0]);
        // No-good cut excluding (1,0): (1 - a) + b >= 1.
        let cut = LinearCut {
            coeffs: vec![-1.0, 1.0],
            sense: ConstraintSense::Ge,
            rhs: 0.0,
        };
        let second = solve_bip_with_extra_cuts(&p, &[cut]).unwrap();
        assert_eq!(second.primal, vec![0.0, 1.0]);
        assert!((second.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn mixed_continuous_and_binary() {
        // min t subject to t >= 1 - b, b binary, t >= 0: optimum b=1, t=0.
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![0.0, 1.0];
        lp.upper[0] = 1.0;
        lp.add_row(vec![1.0, 1.0], ConstraintSense::Ge, 1.0);
        let p = MixedBinaryProgram::new(lp, vec![0]).unwrap();
        let sol = solve_bip(&p).unwrap();
        assert!(sol.is_optimal());
        assert_eq!(sol.primal[0], 1.0);
        assert!(sol.primal[1].abs() < 1e-9);
    }

    #[test]
    fn exhaustive_agreement_small_instances() {
        // Deterministic sweep over a family of 2..=4 variable programs,
        // compared against enumeration of all binary points.
        let coeff_sets: [&[f64]; 3] = [
            &[3.0, -2.0],
            &[1.0, 2.0, -1.5],
            &[2.0, -1.0, 4.0, -3.0],
        ];
        for (case, coeffs) in coeff_sets.iter().enumerate() {
            let n = coeffs.len();
            let mut lp = LinearProgram::new(n);
            lp.objective = coeffs.to_vec();
            lp.upper = vec![1.0; n];
            lp.add_row(vec![1.0; n], ConstraintSense::Le, (n as f64) - 1.0);
            let p = MixedBinaryProgram::new(lp.clone(), (0..n).collect()).unwrap();
            let sol = solve_bip(&p).unwrap();

            let mut best = f64::INFINITY;
            for mask in 0..(1u32 << n) {
                let x: Vec<f64> = (0..n).map(|j| ((mask >> j) & 1) as f64).collect();
                let total: f64 = x.iter().sum();
                if total > (n as f64) - 1.0 + 1e-9 {
                    continue;
                }
                best = best.min(lp.objective_value(&x));
            }
            assert!(
                (sol.objective - best).abs() < 1e-9,
                "case {case}: got {}, brute force {best}",
                sol.objective
            );
        }
    }
}
