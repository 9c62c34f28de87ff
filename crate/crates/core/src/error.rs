//! Error type shared across the crate.

use std::fmt;

/// An error raised while building or solving a model.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A model failed validation (dimension mismatch, bad bounds, ...).
    InvalidModel(String),
    /// The simplex pivot limit was exceeded; with the Bland-rule fallback in
    /// place this indicates a bug rather than ordinary cycling.
    IterationLimit,
    /// A warm-start basis was rejected (wrong size, singular, or neither
    /// primal nor dual feasible). Falling back to a cold start silently is
    /// not allowed; the caller must decide.
    InvalidBasis(String),
    /// A second-stage subproblem was infeasible at a first-stage point that
    /// satisfies the first-stage constraints. This violates the relatively
    /// complete recourse assumption and is a modelling error.
    ScenarioInfeasible { scenario: usize },
    /// A second-stage subproblem was unbounded below, violating the finite
    /// solution assumption.
    ScenarioUnbounded { scenario: usize },
    /// The sublevel polytope handed to the vertex enumerator is unbounded,
    /// so exhaustive enumeration is impossible.
    UnboundedSublevelSet,
    /// The enumerated model was unbounded (master without a theta floor, or
    /// a malformed user model).
    Unbounded,
    /// Second-stage alternatives were requested for a point that does not
    /// certify at the given level.
    UncertifiedPoint { true_objective: f64, tau: f64 },
    /// An assembled extensive-form point exceeded the requested level.
    ReconstructionAboveLevel { objective: f64, tau: f64 },
    /// The Benders loop did not converge within its iteration limit; the
    /// partial result is attached for diagnostics.
    NotConverged(Box<crate::benders::BendersResult>),
    /// The brute-force oracle refuses instances beyond desk scale.
    TooManyBinaries { count: usize, limit: usize },
    /// An input file failed schema validation; the message names the field.
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidModel(msg) => write!(f, "invalid model: {msg}"),
            Error::IterationLimit => write!(f, "simplex pivot limit exceeded"),
            Error::InvalidBasis(msg) => write!(f, "invalid warm-start basis: {msg}"),
            Error::ScenarioInfeasible { scenario } => write!(
                f,
                "scenario {scenario}: second stage infeasible; relatively complete recourse violated"
            ),
            Error::ScenarioUnbounded { scenario } => write!(
                f,
                "scenario {scenario}: second stage unbounded below; finite solution assumption violated"
            ),
            Error::UnboundedSublevelSet => {
                write!(f, "sublevel polytope is unbounded; cannot enumerate exhaustively")
            }
            Error::Unbounded => write!(f, "model is unbounded"),
            Error::UncertifiedPoint { true_objective, tau } => write!(
                f,
                "point does not certify at level {tau}: true objective {true_objective}"
            ),
            Error::ReconstructionAboveLevel { objective, tau } => write!(
                f,
                "assembled extensive-form objective {objective} exceeds level {tau}"
            ),
            Error::NotConverged(r) => write!(
                f,
                "Benders did not converge within {} iterations (gap at exit not closed)",
                r.iterations
            ),
            Error::TooManyBinaries { count, limit } => {
                write!(f, "brute force refused: {count} binaries exceeds limit {limit}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
