//! Zero-error structure of quantum channels given by Kraus operators.
//!
//! The pipeline: a channel, an input ensemble `S` and a measurement `P` give
//! a classical channel whose characteristic graph joins perfectly
//! distinguishable inputs ([`adjacency`]). Clique numbers of its disjunctive
//! powers are the sizes of zero-error block codes ([`graph`], [`capacity`]),
//! and the Lovász theta of the confusability graph bounds them from above
//! ([`theta`]). [`search`] looks for good `(S, P)` pairs.
//!
//! With the default `parallel` feature, batch loops (pairwise adjacency,
//! product-graph rows, clique branches, candidate evaluation) run on rayon.

pub mod adjacency;
pub mod capacity;
pub mod channel;
pub mod error;
pub mod exec;
pub mod graph;
pub mod numerics;
pub mod random;
pub mod search;
pub mod theta;

use serde::{Deserialize, Serialize};

pub use adjacency::{
    characteristic_graph, has_positive_capacity, non_adjacent, outcome_set, CharacteristicGraph,
    InputEnsemble, InputState, OutcomeSet,
};
pub use capacity::{
    rate_table, witness_code, zero_error_rate, RateOptions, RateReport, Verdict, WitnessCode,
};
pub use channel::{
    coarse_grain, pentagon, support_projector, transition_row, DensityOperator, KrausChannel,
    Measurement, MeasurementKind, PureState,
};
pub use error::{Error, Result};
pub use graph::{clique_number, independence_number, product, Graph, ProductGraph};
pub use numerics::{
    hermitian_eig, orthonormalize, trace_abs_half, ComplexMatrix, EigenDecomposition, C64,
};
pub use search::{candidate_pairs, search_optimum, SearchResult, SearchStrategy, StrategyKind};
pub use theta::lovasz_theta;

/// Numerical thresholds shared by the pipeline. All are caller-overridable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Probability below which an outcome counts as impossible.
    pub eps_adj: f64,
    /// Eigenvalue cutoff for output supports.
    pub eig_cutoff: f64,
    pub theta_tol: f64,
    /// Hermiticity, positivity and completeness checks on inputs.
    pub validation_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_adj: adjacency::DEFAULT_EPS_ADJ,
            eig_cutoff: adjacency::DEFAULT_EIG_CUTOFF,
            theta_tol: theta::DEFAULT_THETA_TOL,
            validation_tol: numerics::DEFAULT_TOL,
        }
    }
}
