//! Two-stage optimization by Benders decomposition, with post-processing that
//! extracts exact and approximate alternative optimal solutions.
//!
//! The crate is organized around a classic single-cut Benders loop:
//!
//! * [`lp`] — a dense revised-simplex solver returning vertex solutions and
//!   dual values; everything else is built on it.
//! * [`bip`] — branch-and-bound for programs with binary variables (the
//!   interdiction master-problem shape).
//! * [`two_stage`] — the canonical two-stage problem, value-function
//!   evaluation and extensive-form construction.
//! * [`benders`] — the decomposition loop and its cut pool.
//! * [`kernels`] — alternative-solution generators: exhaustive LP vertex
//!   enumeration and no-good-cut enumeration for binary programs.
//! * [`pipeline`] — the three-step post-processing pass (solve, generate
//!   candidates, certify) plus second-stage alternatives and extensive-form
//!   reconstruction.
//! * [`models`] — builders for the two bundled applications: a farm planning
//!   problem and shortest-path network interdiction.
//! * [`oracle`] — independent brute-force ground truth used by tests and
//!   certification audits.

pub mod benders;
pub mod bip;
pub mod error;
pub mod kernels;
pub mod lp;
pub mod models;
pub mod oracle;
pub mod pipeline;
pub mod two_stage;

pub use benders::{
    add_cut, build_master, solve_benders, BendersOptions, BendersResult, Cut, CutPool,
};
pub use bip::{solve_bip, solve_bip_with_extra_cuts, LinearCut, MixedBinaryProgram};
pub use error::Error;
pub use kernels::{
    enumerate_binary_solutions, enumerate_linear_solutions, CandidatePoint, CandidateSet,
    EnumerationRequest,
};
pub use lp::{
    solve_lp, solve_lp_from, standardize, ConstraintSense, Direction, LinearProgram, LpSolution,
    LpStatus,
};
pub use pipeline::{
    aos_benders, certify, reconstruct_ef, run_pipeline, second_stage_alternatives, CertifiedPoint,
    CertifiedSet, EfReconstruction, PipelineOptions, PipelineRun, ToleranceSpec,
};
pub use two_stage::{
    build_extensive_form, evaluate_q, first_stage_cost, CutForm, Model, Scenario, TwoStageProblem,
    ValueFunctionResult, VarDomain,
};
