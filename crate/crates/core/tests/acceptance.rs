//! Acceptance suite: every numbered criterion below runs end to end at its
//! stated tolerance and prints one PASS line. Run with
//! `cargo test -p aos-benders --test acceptance -- --nocapture` to see them.
//!
//! Iteration counts, cut counts, and master candidate counts depend on the
//! solver's tie-breaking and on cut-pool density, so they are reported for
//! the record rather than asserted, except where the bundled deterministic
//! solver is itself the reference.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aos_benders::kernels::{
    enumerate_binary_solutions, enumerate_linear_solutions, EnumerationRequest,
};
use aos_benders::models::{build_farmer, build_mxsp, reference_graph, FarmerConfig};
use aos_benders::oracle::{brute_force_binary, brute_force_vertices, counterexample_abs_q, solve_ef_direct};
use aos_benders::pipeline::{
    certify, run_pipeline, second_stage_alternatives, PipelineOptions, ToleranceSpec,
};
use aos_benders::two_stage::{evaluate_q, first_stage_cost, Model, TwoStageProblem};
use aos_benders::{
    solve_benders, solve_lp, BendersOptions, ConstraintSense, CutPool, Direction, LinearProgram,
    LpStatus, MixedBinaryProgram, PipelineRun,
};

fn close_rel(actual: f64, expected: f64, rel: f64) -> bool {
    (actual - expected).abs() <= rel * (1.0 + expected.abs())
}

fn assert_rel(actual: f64, expected: f64, rel: f64, what: &str) {
    assert!(
        close_rel(actual, expected, rel),
        "{what}: got {actual}, expected {expected} (rel tol {rel})"
    );
}

fn run(p: &TwoStageProblem, tolerance: ToleranceSpec, k_limit: usize) -> PipelineRun {
    run_pipeline(
        p,
        &PipelineOptions {
            tolerance,
            k_limit,
            ..Default::default()
        },
    )
    .expect("pipeline must converge on bundled instances")
}

fn arcs_of(g: &aos_benders::models::InterdictionGraph, x: &[f64]) -> Vec<String> {
    g.arc_names(x)
}

fn attack(g: &aos_benders::models::InterdictionGraph, arcs: &[(&str, &str)]) -> Vec<f64> {
    let mut x = vec![0.0; g.arcs.len()];
    for (from, to) in arcs {
        x[g.arc_index(from, to).unwrap()] = 1.0;
    }
    x
}

#[test]
fn criterion_01_farmer_single_scenario_optimum() {
    let p = build_farmer(&FarmerConfig::single_scenario()).unwrap();
    let r = solve_benders(&p, &BendersOptions::default()).unwrap();
    assert!(r.converged);
    assert_rel(r.z_star, -118_600.0, 1e-6, "z*");
    for (got, want) in r.x_star.iter().zip([120.0, 80.0, 300.0]) {
        assert_rel(*got, want, 1e-6, "x*");
    }
    let vf = evaluate_q(&p, &r.x_star).unwrap();
    let recourse = &vf.per_scenario_primals[0];
    for (got, want) in recourse.iter().zip([0.0, 0.0, 100.0, 0.0, 6000.0, 0.0]) {
        assert_rel(*got, want, 1e-6, "recourse");
    }
    println!(
        "PASS criterion 1: farmer single-scenario z*=-118600, x*=(120,80,300), recourse (y,w) as reported ({} iterations, {} cuts; reference run used 9/8)",
        r.iterations,
        r.cut_pool.len()
    );
}

#[test]
fn criterion_02_farmer_single_exact_set_is_unique() {
    let p = build_farmer(&FarmerConfig::single_scenario()).unwrap();
    let run = run(&p, ToleranceSpec::Absolute(0.0), 10);
    assert!(run.certified.master_exhausted, "enumeration must exhaust");
    assert_eq!(run.certified.accepted.len(), 1);
    assert!(run.certified.rejected.is_empty());
    for (got, want) in run.certified.accepted[0].x.iter().zip([120.0, 80.0, 300.0]) {
        assert_rel(*got, want, 1e-6, "unique optimal point");
    }
    println!("PASS criterion 2: farmer tau=z* yields exactly 1 certified point, exhausted");
}

#[test]
fn criterion_03_farmer_single_one_percent_band() {
    let p = build_farmer(&FarmerConfig::single_scenario()).unwrap();
    let run = run(&p, ToleranceSpec::Relative(0.01), 10);
    assert_rel(run.tau, -117_414.0, 1e-9, "tau at 1%");
    assert_eq!(
        run.first_stage_candidates.len(),
        6,
        "vertex count of the 1% master sublevel set"
    );
    let boundary = run
        .first_stage_candidates
        .iter()
        .filter(|(_, obj)| (obj - -117_414.0).abs() <= 1e-3)
        .count();
    assert_eq!(boundary, 5, "five vertices sit exactly on the 1% boundary");
    assert_eq!(run.certified.accepted.len(), 6, "all six certify");
    assert!(run.certified.rejected.is_empty());
    // Independent re-certification of every accepted point.
    for pt in &run.certified.accepted {
        let vf = evaluate_q(&p, &pt.x).unwrap();
        let fresh = first_stage_cost(&p, &pt.x) + vf.q_value;
        assert!(fresh <= run.tau + 1e-6 * (1.0 + run.tau.abs()));
        assert_rel(fresh, pt.true_objective, 1e-9, "fresh certification");
    }
    println!("PASS criterion 3: farmer 1% band has 6 candidates, 5 on the boundary, all certified");
}

#[test]
fn criterion_04_farmer_three_scenario() {
    let p = build_farmer(&FarmerConfig::three_scenario()).unwrap();
    let r = solve_benders(&p, &BendersOptions::default()).unwrap();
    assert_rel(r.z_star, -108_390.0, 1e-6, "z*");
    for (got, want) in r.x_star.iter().zip([170.0, 80.0, 250.0]) {
        assert_rel(*got, want, 1e-6, "x*");
    }
    let (ef_z, _) = solve_ef_direct(&p).unwrap();
    assert_rel(ef_z, r.z_star, 1e-6, "extensive form confirms z*");

    let one = run(&p, ToleranceSpec::Relative(0.01), 50);
    assert_rel(one.tau, -107_306.1, 1e-9, "tau at 1%");
    let fifty = run(&p, ToleranceSpec::Relative(0.5), 50);
    assert_rel(fifty.tau, -54_195.0, 1e-9, "tau at 50%");

    // Binding check: the accepted/rejected split must agree with independent
    // certification, candidate by candidate.
    for run in [&one, &fifty] {
        assert!(run.certified.master_exhausted);
        assert!(!run.certified.rejected.is_empty(), "some vertices lie outside the true level set");
        for pt in run.certified.accepted.iter() {
            let (ok, obj) = certify(&p, &pt.x, run.tau).unwrap();
            assert!(ok, "accepted point re-certifies");
            assert_rel(obj, pt.true_objective, 1e-9, "objective agreement");
        }
        for pt in run.certified.rejected.iter() {
            let (ok, _) = certify(&p, &pt.x, run.tau).unwrap();
            assert!(!ok, "rejected point stays rejected");
        }
    }
    // Candidate counts track the cut pool, not the problem, so they are
    // recorded rather than asserted (the reference run saw 15/11 and 43/29
    // with its own terminal pool).
    println!(
        "PASS criterion 4: farmer three-scenario z*=-108390 at (170,80,250); 1%: {}/{} certified, 50%: {}/{} certified (pool-dependent; reference 11/15 and 29/43)",
        one.certified.accepted.len(),
        one.first_stage_candidates.len(),
        fifty.certified.accepted.len(),
        fifty.first_stage_candidates.len()
    );
}

#[test]
fn criterion_05_mxsp_single_arc_budget() {
    let g = reference_graph(1.0);
    let p = build_mxsp(&g).unwrap();
    let run = run(&p, ToleranceSpec::Absolute(0.0), 50);
    assert_rel(run.benders.z_star, -6.0, 1e-9, "min-form optimum (cost 6)");
    assert!(run.certified.master_exhausted);
    assert_eq!(run.first_stage_candidates.len(), 2, "two master-optimal attacks");
    let candidate_names: Vec<Vec<String>> = run
        .first_stage_candidates
        .iter()
        .map(|(x, _)| arcs_of(&g, x))
        .collect();
    assert!(candidate_names.contains(&vec!["c->d".to_string()]));
    assert!(candidate_names.contains(&vec!["d->t".to_string()]));

    assert_eq!(run.certified.accepted.len(), 1);
    assert_eq!(arcs_of(&g, &run.certified.accepted[0].x), vec!["c->d"]);
    assert_eq!(run.certified.rejected.len(), 1);
    let rej = &run.certified.rejected[0];
    assert_eq!(arcs_of(&g, &rej.x), vec!["d->t"]);
    assert_rel(-rej.true_objective, 4.0, 1e-9, "rejected attack's true cost");

    // The exhaustive oracle over all 2^11 masks agrees on the exact set.
    let oracle = brute_force_binary(&p, run.tau).unwrap();
    assert_eq!(oracle.exact_set.len(), 1);
    assert_eq!(arcs_of(&g, &oracle.exact_set[0].0), vec!["c->d"]);
    println!("PASS criterion 5: budget 1 gives cost 6; candidates {{c->d, d->t}}, certified {{c->d}}, oracle agrees");
}

#[test]
fn criterion_06_mxsp_two_arc_budget() {
    let g = reference_graph(2.0);
    let p = build_mxsp(&g).unwrap();
    let run = run(&p, ToleranceSpec::Absolute(0.0), 50);
    assert_rel(run.benders.z_star, -7.0, 1e-9, "min-form optimum (cost 7)");
    assert!(run.certified.master_exhausted);

    let sorted = |mut v: Vec<String>| {
        v.sort();
        v
    };
    let mut accepted: Vec<Vec<String>> = run
        .certified
        .accepted
        .iter()
        .map(|pt| sorted(arcs_of(&g, &pt.x)))
        .collect();
    accepted.sort();
    let mut expected: Vec<Vec<String>> = vec![
        sorted(vec!["s->c".into(), "c->d".into()]),
        sorted(vec!["c->d".into(), "d->t".into()]),
    ];
    expected.sort();
    assert_eq!(accepted, expected);

    // The third master-optimal attack under the reference run's sparser cut
    // pool; certification rejects it from the true level set either way.
    let phantom = attack(&g, &[("s", "c"), ("d", "t")]);
    let (ok, obj) = certify(&p, &phantom, run.tau).unwrap();
    assert!(!ok);
    assert_rel(-obj, 5.0, 1e-9, "true cost of the rejected attack");

    // Defender alternatives per accepted attack: the two parallel entries or
    // the two parallel exits around the chokepoint.
    let opt1 = attack(&g, &[("s", "c"), ("c", "d")]);
    let alts1 = second_stage_alternatives(&p, &opt1, run.tau, 0, 20).unwrap();
    let mut paths1: Vec<Vec<String>> = alts1
        .points
        .iter()
        .map(|pt| g.path_nodes(&pt.solution).unwrap())
        .collect();
    paths1.sort();
    assert_eq!(
        paths1,
        vec![
            vec!["s", "a", "c", "d", "t"],
            vec!["s", "b", "c", "d", "t"]
        ]
        .into_iter()
        .map(|v| v.into_iter().map(String::from).collect::<Vec<_>>())
        .collect::<Vec<_>>()
    );
    let opt3 = attack(&g, &[("c", "d"), ("d", "t")]);
    let alts3 = second_stage_alternatives(&p, &opt3, run.tau, 0, 20).unwrap();
    let mut paths3: Vec<Vec<String>> = alts3
        .points
        .iter()
        .map(|pt| g.path_nodes(&pt.solution).unwrap())
        .collect();
    paths3.sort();
    assert_eq!(
        paths3,
        vec![
            vec!["s", "c", "d", "e", "t"],
            vec!["s", "c", "d", "f", "t"]
        ]
        .into_iter()
        .map(|v| v.into_iter().map(String::from).collect::<Vec<_>>())
        .collect::<Vec<_>>()
    );

    let oracle = brute_force_binary(&p, run.tau).unwrap();
    let mut oracle_names: Vec<Vec<String>> = oracle
        .exact_set
        .iter()
        .map(|(x, _)| {
            let mut v = arcs_of(&g, x);
            v.sort();
            v
        })
        .collect();
    oracle_names.sort();
    assert_eq!(oracle_names, accepted);
    println!(
        "PASS criterion 6: budget 2 gives cost 7; certified attacks and both defender path pairs as reported; {} candidates from this pool (reference run saw 3), phantom candidate rejected at cost 5; oracle agrees",
        run.first_stage_candidates.len()
    );
}

#[test]
fn criterion_07_mxsp_three_arc_budget() {
    let g = reference_graph(3.0);
    let p = build_mxsp(&g).unwrap();
    let run = run(&p, ToleranceSpec::Absolute(0.0), 50);
    assert_rel(run.benders.z_star, -8.0, 1e-9, "min-form optimum (cost 8)");
    assert!(run.certified.master_exhausted);
    assert_eq!(run.certified.accepted.len(), 1, "unique certified attack");
    let mut names = arcs_of(&g, &run.certified.accepted[0].x);
    names.sort();
    assert_eq!(names, vec!["c->d", "d->t", "s->c"]);

    let alts = second_stage_alternatives(&p, &run.certified.accepted[0].x, run.tau, 0, 20).unwrap();
    assert!(alts.exhausted);
    let mut paths: Vec<Vec<String>> = alts
        .points
        .iter()
        .map(|pt| g.path_nodes(&pt.solution).unwrap())
        .collect();
    paths.sort();
    let expect: Vec<Vec<String>> = [
        ["s", "a", "c", "d", "e", "t"],
        ["s", "a", "c", "d", "f", "t"],
        ["s", "b", "c", "d", "e", "t"],
        ["s", "b", "c", "d", "f", "t"],
    ]
    .iter()
    .map(|v| v.iter().map(|s| s.to_string()).collect())
    .collect();
    assert_eq!(paths, expect, "exactly the four detour routes");

    let oracle = brute_force_binary(&p, run.tau).unwrap();
    assert_eq!(oracle.exact_set.len(), 1);
    println!("PASS criterion 7: budget 3 gives cost 8; unique certified attack with exactly 4 defender routes; oracle agrees");
}

fn sample_farmer_x(rng: &mut ChaCha8Rng, land: f64) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..land)).collect();
        if x.iter().sum::<f64>() <= land {
            return x;
        }
    }
}

fn sample_mask(rng: &mut ChaCha8Rng, n: usize, budget: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    let picks = rng.gen_range(0..=budget);
    for _ in 0..picks {
        x[rng.gen_range(0..n)] = 1.0;
    }
    x
}

#[test]
fn criterion_08_terminal_pools_underestimate_q() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut audited = 0usize;

    let mut check = |p: &TwoStageProblem, pool: &CutPool, xs: Vec<Vec<f64>>| {
        for x in xs {
            let q = evaluate_q(p, &x).unwrap().q_value;
            let approx = pool.approx_q(&x);
            assert!(
                approx <= q + 1e-6,
                "pooled cut overestimates Q at {x:?}: {approx} > {q}"
            );
            audited += 1;
        }
    };

    for cfg in [FarmerConfig::single_scenario(), FarmerConfig::three_scenario()] {
        let p = build_farmer(&cfg).unwrap();
        let r = solve_benders(&p, &BendersOptions::default()).unwrap();
        let xs = (0..1000).map(|_| sample_farmer_x(&mut rng, 500.0)).collect();
        check(&p, &r.cut_pool, xs);
    }
    for m in [1usize, 2, 3] {
        let p = build_mxsp(&reference_graph(m as f64)).unwrap();
        let r = solve_benders(&p, &BendersOptions::default()).unwrap();
        let xs = (0..1000).map(|_| sample_mask(&mut rng, 11, m)).collect();
        check(&p, &r.cut_pool, xs);
    }
    println!("PASS criterion 8: every terminal cut pool underestimates Q on {audited} sampled points");
}

#[test]
fn criterion_09_oracle_sets_are_contained_in_candidates() {
    for m in [1.0, 2.0, 3.0] {
        let p = build_mxsp(&reference_graph(m)).unwrap();
        let r = solve_benders(&p, &BendersOptions::default()).unwrap();
        for loosen in [0.0, 1.0, 2.0] {
            let tau = r.z_star + loosen;
            let master = aos_benders::build_master(&p, &r.cut_pool).unwrap();
            let candidates =
                enumerate_binary_solutions(&EnumerationRequest::new(master, tau, 4096)).unwrap();
            assert!(candidates.exhausted);
            let candidate_keys: std::collections::HashSet<Vec<i64>> = candidates
                .points
                .iter()
                .map(|pt| pt.solution[..11].iter().map(|v| v.round() as i64).collect())
                .collect();
            let oracle = brute_force_binary(&p, tau).unwrap();
            for (x, _) in &oracle.exact_set {
                let key: Vec<i64> = x.iter().map(|v| v.round() as i64).collect();
                assert!(
                    candidate_keys.contains(&key),
                    "m={m}, tau={tau}: oracle point {x:?} missing from candidates"
                );
            }
        }
    }
    println!("PASS criterion 9: level-set containment holds at the optimum and two looser levels for every budget");
}

#[test]
fn criterion_10_abs_value_counterexample() {
    let inst = counterexample_abs_q();
    let up_slope = [1.0];
    // (-1, 0) lives in the single-slope epigraph but not the true one.
    assert!(inst.epi_q_hat_contains(&up_slope, -1.0, 0.0));
    assert!(!inst.epi_q_contains(-1.0, 0.0));
    // At tau = -1 the relaxed level set is inhabited...
    assert!(inst.level_bm_contains(&up_slope, -1.0, -1.0, -1.0));
    // ...while the true level sets are all empty.
    assert!(inst.level_ef_is_empty(-1.0).unwrap());
    assert!(!inst.level_ev_contains(-1.0, -1.0, -1.0));
    assert!(!inst.level_pv_contains(-1.0, -1.0));
    // Sanity: at tau = 0 the true level set is inhabited by the kink.
    assert!(!inst.level_ef_is_empty(0.0).unwrap());
    assert!(inst.level_pv_contains(0.0, 0.0));
    println!("PASS criterion 10: |x| instance separates the relaxed and true epigraphs and level sets exactly");
}

fn random_bounded_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(2..=5);
    let m = rng.gen_range(1..=4);
    let mut lp = LinearProgram::new(n);
    lp.objective = (0..n).map(|_| rng.gen_range(-5.0f64..5.0).round()).collect();
    lp.upper = (0..n).map(|_| rng.gen_range(1.0f64..10.0).round()).collect();
    let interior: Vec<f64> = (0..n).map(|j| rng.gen_range(0.0..lp.upper[j])).collect();
    for _ in 0..m {
        let coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0f64..4.0).round()).collect();
        let lhs: f64 = coeffs.iter().zip(&interior).map(|(c, x)| c * x).sum();
        let margin = rng.gen_range(0.0..5.0);
        if rng.gen_bool(0.5) {
            lp.add_row(coeffs, ConstraintSense::Le, lhs + margin);
        } else {
            lp.add_row(coeffs, ConstraintSense::Ge, lhs - margin);
        }
    }
    lp
}

#[test]
fn criterion_11a_strong_duality_on_random_lps() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut solved = 0;
    while solved < 500 {
        let lp = random_bounded_lp(&mut rng);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal, "constructed feasible bounded LP");
        let gap = (sol.objective - sol.dual_objective).abs();
        assert!(
            gap <= 1e-7 * (1.0 + sol.objective.abs()),
            "duality gap {gap} at objective {}",
            sol.objective
        );
        solved += 1;
    }
    println!("PASS criterion 11a: strong duality within 1e-7 relative on 500 random feasible bounded LPs");
}

#[test]
fn criterion_11b_binary_enumeration_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..100 {
        let n = rng.gen_range(4..=12);
        let mut lp = LinearProgram::new(n);
        lp.objective = (0..n).map(|_| rng.gen_range(-6.0f64..6.0).round()).collect();
        lp.upper = vec![1.0; n];
        let budget = rng.gen_range(1..=n) as f64;
        lp.add_row(vec![1.0; n], ConstraintSense::Le, budget);

        // Brute force: all feasible binary points with their objectives.
        let mut objectives: Vec<(Vec<f64>, f64)> = Vec::new();
        for mask in 0u64..(1 << n) {
            let x: Vec<f64> = (0..n).map(|j| ((mask >> j) & 1) as f64).collect();
            if x.iter().sum::<f64>() > budget + 1e-9 {
                continue;
            }
            objectives.push((x.clone(), lp.objective_value(&x)));
        }
        objectives.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        // Pick tau at roughly the 15th-best point to keep runs quick while
        // exercising the tau stop; every few cases take tau past the top so
        // the infeasibility stop fires instead.
        let tau = if case % 5 == 0 {
            objectives.last().unwrap().1 + 1.0
        } else {
            objectives[objectives.len().min(15) - 1].1
        };
        let expected: std::collections::BTreeSet<Vec<i64>> = objectives
            .iter()
            .filter(|(_, obj)| *obj <= tau + 1e-9)
            .map(|(x, _)| x.iter().map(|v| *v as i64).collect())
            .collect();

        let mip = MixedBinaryProgram::new(lp, (0..n).collect()).unwrap();
        let set =
            enumerate_binary_solutions(&EnumerationRequest::new(Model::Mip(mip), tau, 1 << 13))
                .unwrap();
        assert!(set.exhausted, "case {case}");
        let got: std::collections::BTreeSet<Vec<i64>> = set
            .points
            .iter()
            .map(|pt| pt.solution.iter().map(|v| v.round() as i64).collect())
            .collect();
        assert_eq!(got, expected, "case {case} (tau {tau})");
    }
    println!("PASS criterion 11b: no-good-cut enumeration equals brute force on 100 random binary programs");
}

#[test]
fn criterion_11c_vertex_enumeration_matches_active_set_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..100 {
        let n = rng.gen_range(2..=3);
        let m = rng.gen_range(1..=3);
        let mut lp = LinearProgram::new(n);
        lp.objective = (0..n).map(|_| rng.gen_range(-3.0f64..3.0).round()).collect();
        lp.upper = (0..n).map(|_| rng.gen_range(1.0f64..4.0).round()).collect();
        let interior: Vec<f64> = (0..n).map(|j| rng.gen_range(0.0..lp.upper[j])).collect();
        for _ in 0..m {
            let coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0f64..3.0).round()).collect();
            let lhs: f64 = coeffs.iter().zip(&interior).map(|(c, x)| c * x).sum();
            lp.add_row(coeffs, ConstraintSense::Le, lhs + rng.gen_range(0.5..3.0));
        }

        // tau midway between the optimum and the worst vertex makes the cut
        // face active about half the time.
        let full_vertices = brute_force_vertices(&lp, 1e-7);
        assert!(!full_vertices.is_empty());
        let objs: Vec<f64> = full_vertices.iter().map(|v| lp.objective_value(v)).collect();
        let lo = objs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = objs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let tau = if case % 2 == 0 { hi + 1.0 } else { (lo + hi) / 2.0 };

        // Oracle on the sublevel polytope: same rows plus the tau face.
        let mut capped = lp.clone();
        capped.add_row(lp.objective.clone(), ConstraintSense::Le, tau);
        let mut expected: Vec<Vec<i64>> = brute_force_vertices(&capped, 1e-7)
            .iter()
            .map(|v| v.iter().map(|x| (x / 1e-6).round() as i64).collect())
            .collect();
        expected.sort();
        expected.dedup();

        let set = enumerate_linear_solutions(&EnumerationRequest::new(Model::Lp(lp), tau, 1000))
            .unwrap();
        assert!(set.exhausted, "case {case}");
        let mut got: Vec<Vec<i64>> = set
            .points
            .iter()
            .map(|pt| pt.solution.iter().map(|x| (x / 1e-6).round() as i64).collect())
            .collect();
        got.sort();
        assert_eq!(got, expected, "case {case} (tau {tau})");
    }
    println!("PASS criterion 11c: basis-walk vertex enumeration equals the active-set oracle on 100 random polytopes");
}
