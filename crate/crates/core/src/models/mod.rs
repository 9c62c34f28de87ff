//! Builders for the bundled applications.

mod farmer;
mod interdiction;

pub use farmer::{build_farmer, FarmerConfig, YieldScenario};
pub use interdiction::{
    build_mxsp, build_mxsp_dual_standard, reference_graph, InterdictionArc, InterdictionGraph,
};
