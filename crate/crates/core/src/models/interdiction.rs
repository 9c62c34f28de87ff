//! Shortest-path network interdiction (max-min): an attacker raises arc
//! costs on a budget to maximize the defender's best s-t traversal.
//!
//! Everything internal is expressed in minimization form: the value function
//! is the negated shortest-path cost, so optima come out negative and the
//! reporting layer flips the sign back to path costs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::ConstraintSense;
use crate::two_stage::{AffineCost, CutForm, FirstStageSet, Scenario, TwoStageProblem, VarDomain};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InterdictionArc {
    pub from: String,
    pub to: String,
    /// Base traversal cost.
    pub c: f64,
    /// Added cost when interdicted.
    pub d: f64,
    /// Interdiction cost against the budget.
    pub r: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InterdictionGraph {
    pub nodes: Vec<String>,
    #[serde(rename = "s")]
    pub source: String,
    #[serde(rename = "t")]
    pub sink: String,
    pub arcs: Vec<InterdictionArc>,
    pub budget: f64,
}

impl InterdictionGraph {
    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn arc_index(&self, from: &str, to: &str) -> Option<usize> {
        self.arcs.iter().position(|a| a.from == from && a.to == to)
    }

    /// Arc names for the arcs selected by a 0/1 vector.
    pub fn arc_names(&self, x: &[f64]) -> Vec<String> {
        self.arcs
            .iter()
            .zip(x)
            .filter(|(_, &v)| v > 0.5)
            .map(|(a, _)| format!("{}->{}", a.from, a.to))
            .collect()
    }

    /// Follow a unit path flow from source to sink; `None` when the flow is
    /// not a simple 0/1 path.
    pub fn path_nodes(&self, flow: &[f64]) -> Option<Vec<String>> {
        let mut next: HashMap<&str, &str> = HashMap::new();
        for (arc, &f) in self.arcs.iter().zip(flow) {
            if f > 0.5 {
                if (f - 1.0).abs() > 1e-6 || next.insert(&arc.from, &arc.to).is_some() {
                    return None;
                }
            } else if f.abs() > 1e-6 {
                return None;
            }
        }
        let mut path = vec![self.source.clone()];
        let mut here: &str = &self.source;
        for _ in 0..=self.arcs.len() {
            if here == self.sink {
                return Some(path);
            }
            here = next.get(here)?;
            path.push(here.to_string());
        }
        None
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for n in &self.nodes {
            if !seen.insert(n) {
                return Err(Error::InvalidInput(format!("duplicate node {n}")));
            }
        }
        for name in [&self.source, &self.sink] {
            if self.node_index(name).is_none() {
                return Err(Error::InvalidInput(format!("node {name} not in node list")));
            }
        }
        if self.budget < 0.0 {
            return Err(Error::InvalidInput("budget must be nonnegative".into()));
        }
        for (k, a) in self.arcs.iter().enumerate() {
            if self.node_index(&a.from).is_none() || self.node_index(&a.to).is_none() {
                return Err(Error::InvalidInput(format!(
                    "arc {k} references unknown node"
                )));
            }
            if !(a.c >= 0.0 && a.d >= 1.0 && a.r >= 1.0) {
                return Err(Error::InvalidInput(format!(
                    "arc {}->{}: need c >= 0, d >= 1, r >= 1",
                    a.from, a.to
                )));
            }
        }
        // Dual non-emptiness: the defender must be able to cross at all.
        if self.shortest_path_cost(&vec![0.0; self.arcs.len()]).is_none() {
            return Err(Error::InvalidInput(format!(
                "no path from {} to {}",
                self.source, self.sink
            )));
        }
        Ok(())
    }

    /// Label-correcting shortest path under interdicted costs c + x*d.
    /// Independent of the LP machinery; used by the brute-force oracle.
    pub fn shortest_path_cost(&self, x: &[f64]) -> Option<f64> {
        let n = self.nodes.len();
        let src = self.node_index(&self.source)?;
        let dst = self.node_index(&self.sink)?;
        let arcs: Vec<(usize, usize, f64)> = self
            .arcs
            .iter()
            .zip(x)
            .map(|(a, &xk)| {
                (
                    self.node_index(&a.from).unwrap(),
                    self.node_index(&a.to).unwrap(),
                    a.c + xk * a.d,
                )
            })
            .collect();
        let mut dist = vec![f64::INFINITY; n];
        dist[src] = 0.0;
        for _ in 0..n {
            let mut changed = false;
            for &(u, v, cost) in &arcs {
                if dist[u] + cost < dist[v] - 1e-12 {
                    dist[v] = dist[u] + cost;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        dist[dst].is_finite().then_some(dist[dst])
    }

    /// Longest s-t path under fully interdicted costs, for the theta floor.
    /// Falls back to the total interdicted arc cost when the graph has a
    /// cycle.
    fn full_interdiction_path_bound(&self) -> f64 {
        let total: f64 = self.arcs.iter().map(|a| a.c + a.d).sum();
        let n = self.nodes.len();
        let Some(order) = self.topological_order() else {
            return total;
        };
        let src = self.node_index(&self.source).unwrap();
        let dst = self.node_index(&self.sink).unwrap();
        let mut out = vec![Vec::new(); n];
        for a in &self.arcs {
            out[self.node_index(&a.from).unwrap()]
                .push((self.node_index(&a.to).unwrap(), a.c + a.d));
        }
        let mut dist = vec![f64::NEG_INFINITY; n];
        dist[src] = 0.0;
        for &u in &order {
            if dist[u] == f64::NEG_INFINITY {
                continue;
            }
            for &(v, cost) in &out[u] {
                dist[v] = dist[v].max(dist[u] + cost);
            }
        }
        if dist[dst].is_finite() {
            dist[dst]
        } else {
            total
        }
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        let mut out = vec![Vec::new(); n];
        for a in &self.arcs {
            let u = self.node_index(&a.from).unwrap();
            let v = self.node_index(&a.to).unwrap();
            out[u].push(v);
            indegree[v] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop() {
            order.push(u);
            for &v in &out[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push(v);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

/// Build the max-min interdiction model in minimization form.
///
/// The second stage is the defender's shortest-path LP over flow-balance
/// rows (the redundant sink row is dropped); interdiction decisions raise
/// the arc costs, so cuts are extracted from the optimal primal path.
pub fn build_mxsp(g: &InterdictionGraph) -> Result<TwoStageProblem> {
    g.validate()?;
    let n_arcs = g.arcs.len();
    let sink = g.node_index(&g.sink).unwrap();
    let source = g.node_index(&g.source).unwrap();

    // Flow balance for every node except the sink: out - in = 1 at the
    // source, 0 elsewhere.
    let mut w = Vec::new();
    let mut h = Vec::new();
    for (i, _) in g.nodes.iter().enumerate() {
        if i == sink {
            continue;
        }
        let mut row = vec![0.0; n_arcs];
        for (k, a) in g.arcs.iter().enumerate() {
            if g.node_index(&a.from).unwrap() == i {
                row[k] += 1.0;
            }
            if g.node_index(&a.to).unwrap() == i {
                row[k] -= 1.0;
            }
        }
        w.push(row);
        h.push(if i == source { 1.0 } else { 0.0 });
    }
    let senses = vec![ConstraintSense::Eq; w.len()];

    let q: Vec<f64> = g.arcs.iter().map(|a| a.c).collect();
    let t: Vec<Vec<f64>> = (0..n_arcs)
        .map(|k| {
            let mut row = vec![0.0; n_arcs];
            row[k] = g.arcs[k].d;
            row
        })
        .collect();

    Ok(TwoStageProblem {
        g: AffineCost {
            coeffs: vec![0.0; n_arcs],
            constant: 0.0,
        },
        x_set: FirstStageSet {
            rows: vec![g.arcs.iter().map(|a| a.r).collect()],
            senses: vec![ConstraintSense::Le],
            rhs: vec![g.budget],
            domains: vec![VarDomain::Binary; n_arcs],
        },
        scenarios: vec![Scenario {
            probability: 1.0,
            q,
            w,
            t,
            h,
            senses,
        }],
        cut_form: CutForm::PrimalPath,
        theta_floor: Some(-g.full_interdiction_path_bound()),
    })
}

/// The same model with the defender LP replaced by its dual, expressed in
/// the standard rhs-coupled form. Cuts then come from dual vertices instead
/// of primal paths; both routes must agree, which the tests exercise.
pub fn build_mxsp_dual_standard(g: &InterdictionGraph) -> Result<TwoStageProblem> {
    g.validate()?;
    let n_arcs = g.arcs.len();
    let sink = g.node_index(&g.sink).unwrap();
    let source = g.node_index(&g.source).unwrap();

    // Node potentials pi (sink pinned at zero) are free: split into
    // nonnegative pairs. Columns: u_i, v_i per non-sink node, pi_i = u - v.
    let mut col_of_node: HashMap<usize, usize> = HashMap::new();
    let mut col = 0;
    for i in 0..g.nodes.len() {
        if i != sink {
            col_of_node.insert(i, col);
            col += 2;
        }
    }
    let n_vars = col;

    // Value function: min -pi_source subject to pi_i - pi_j <= c_k + d_k x_k.
    let mut q = vec![0.0; n_vars];
    let sc = col_of_node[&source];
    q[sc] = -1.0;
    q[sc + 1] = 1.0;

    let mut w = Vec::with_capacity(n_arcs);
    let mut t = Vec::with_capacity(n_arcs);
    let mut h = Vec::with_capacity(n_arcs);
    for (k, a) in g.arcs.iter().enumerate() {
        let mut row = vec![0.0; n_vars];
        let from = g.node_index(&a.from).unwrap();
        let to = g.node_index(&a.to).unwrap();
        if let Some(&c) = col_of_node.get(&from) {
            row[c] += 1.0;
            row[c + 1] -= 1.0;
        }
        if let Some(&c) = col_of_node.get(&to) {
            row[c] -= 1.0;
            row[c + 1] += 1.0;
        }
        w.push(row);
        h.push(a.c);
        let mut t_row = vec![0.0; n_arcs];
        t_row[k] = -a.d;
        t.push(t_row);
    }

    let base = build_mxsp(g)?;
    Ok(TwoStageProblem {
        scenarios: vec![Scenario {
            probability: 1.0,
            q,
            w,
            t,
            h,
            senses: vec![ConstraintSense::Le; n_arcs],
        }],
        cut_form: CutForm::DualStandard,
        ..base
    })
}

/// The reference network: a diamond of parallel entries and exits around the
/// single chokepoint c->d. Unit base costs, interdiction adds 3, unit
/// interdiction prices.
pub fn reference_graph(budget: f64) -> InterdictionGraph {
    let nodes = ["s", "a", "b", "c", "d", "e", "f", "t"];
    let arcs = [
        ("s", "a"),
        ("s", "b"),
        ("s", "c"),
        ("a", "c"),
        ("b", "c"),
        ("c", "d"),
        ("d", "e"),
        ("d", "f"),
        ("d", "t"),
        ("e", "t"),
        ("f", "t"),
    ];
    InterdictionGraph {
        nodes: nodes.iter().map(|s| s.to_string()).collect(),
        source: "s".into(),
        sink: "t".into(),
        arcs: arcs
            .iter()
            .map(|(from, to)| InterdictionArc {
                from: from.to_string(),
                to: to.to_string(),
                c: 1.0,
                d: 3.0,
                r: 1.0,
            })
            .collect(),
        budget,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_stage::evaluate_q;

    /// Every simple s-t path of the reference graph, by depth-first search.
    /// This is the hand-auditable ground truth for the small examples.
    pub(crate) fn all_paths(g: &InterdictionGraph) -> Vec<Vec<usize>> {
        fn dfs(
            g: &InterdictionGraph,
            here: &str,
            used: &mut Vec<usize>,
            visited: &mut Vec<String>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if here == g.sink {
                out.push(used.clone());
                return;
            }
            for (k, a) in g.arcs.iter().enumerate() {
                if a.from == here && !visited.contains(&a.to) {
                    visited.push(a.to.clone());
                    used.push(k);
                    dfs(g, &a.to, used, visited, out);
                    used.pop();
                    visited.pop();
                }
            }
        }
        let mut out = Vec::new();
        dfs(
            g,
            &g.source.clone(),
            &mut Vec::new(),
            &mut vec![g.source.clone()],
            &mut out,
        );
        out
    }

    fn path_cost(g: &InterdictionGraph, path: &[usize], x: &[f64]) -> f64 {
        path.iter().map(|&k| g.arcs[k].c + x[k] * g.arcs[k].d).sum()
    }

    #[test]
    fn reference_graph_shape() {
        let g = reference_graph(1.0);
        assert_eq!(g.arcs.len(), 11);
        assert_eq!(all_paths(&g).len(), 9);
        // The chokepoint appears in every path.
        let cd = g.arc_index("c", "d").unwrap();
        assert!(all_paths(&g).iter().all(|p| p.contains(&cd)));
    }

    #[test]
    fn uninterdicted_value_matches_path_enumeration() {
        let g = reference_graph(1.0);
        let p = build_mxsp(&g).unwrap();
        let x = vec![0.0; 11];
        let vf = evaluate_q(&p, &x).unwrap();
        let best = all_paths(&g)
            .iter()
            .map(|path| path_cost(&g, path, &x))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best, 3.0);
        assert!((vf.q_value - (-3.0)).abs() < 1e-9, "Q(0) = {}", vf.q_value);
    }

    #[test]
    fn value_function_matches_label_correcting_oracle() {
        let g = reference_graph(2.0);
        let p = build_mxsp(&g).unwrap();
        let cd = g.arc_index("c", "d").unwrap();
        let sc = g.arc_index("s", "c").unwrap();
        let mut x = vec![0.0; 11];
        x[cd] = 1.0;
        x[sc] = 1.0;
        let vf = evaluate_q(&p, &x).unwrap();
        let oracle = g.shortest_path_cost(&x).unwrap();
        assert!((vf.q_value + oracle).abs() < 1e-9);
        assert_eq!(oracle, 7.0);
    }

    #[test]
    fn subproblem_vertices_are_unit_paths() {
        // Total unimodularity: the defender LP's optimal vertex is 0/1 and
        // traces a simple path.
        let g = reference_graph(1.0);
        let p = build_mxsp(&g).unwrap();
        let mut x = vec![0.0; 11];
        x[g.arc_index("c", "d").unwrap()] = 1.0;
        let vf = evaluate_q(&p, &x).unwrap();
        let flow = &vf.per_scenario_primals[0];
        assert!(flow
            .iter()
            .all(|&y| y.abs() < 1e-6 || (y - 1.0).abs() < 1e-6));
        assert!(g.path_nodes(flow).is_some());
    }

    #[test]
    fn dual_standard_variant_agrees_on_values() {
        let g = reference_graph(3.0);
        let primal_form = build_mxsp(&g).unwrap();
        let dual_form = build_mxsp_dual_standard(&g).unwrap();
        for arcs in [vec![], vec![5], vec![2, 5], vec![2, 5, 8]] {
            let mut x = vec![0.0; 11];
            for k in arcs {
                x[k] = 1.0;
            }
            let a = evaluate_q(&primal_form, &x).unwrap();
            let b = evaluate_q(&dual_form, &x).unwrap();
            assert!(
                (a.q_value - b.q_value).abs() < 1e-9,
                "forms disagree at {x:?}: {} vs {}",
                a.q_value,
                b.q_value
            );
            // The cuts are the same affine function via LP duality.
            assert!((a.cut.alpha - b.cut.alpha).abs() < 1e-9);
            for (ba, bb) in a.cut.beta.iter().zip(&b.cut.beta) {
                assert!((ba - bb).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn no_path_is_rejected() {
        let mut g = reference_graph(1.0);
        g.arcs.retain(|a| a.from != "c");
        assert!(matches!(g.validate(), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn theta_floor_is_the_fully_interdicted_long_route() {
        let g = reference_graph(3.0);
        let p = build_mxsp(&g).unwrap();
        // Longest path s->{a|b}->c->d->{e|f}->t has 5 arcs at cost 4 each.
        assert_eq!(p.theta_floor.unwrap(), -20.0);
    }
}
