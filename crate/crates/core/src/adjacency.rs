//! Non-adjacency of channel inputs and the characteristic graph of an
//! (ensemble, measurement) pair.
//!
//! Two inputs are non-adjacent when no measurement outcome can be produced by
//! both of them. "Can be produced" means probability at least `eps`; every
//! decision keeps the probabilities it was based on so borderline calls can be
//! audited.

use serde::Serialize;

use crate::channel::{
    outcome_probabilities, projector_onto, DensityOperator, KrausChannel, Measurement, PureState,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::Graph;
use crate::numerics::ComplexMatrix;

/// Default probability threshold below which an outcome counts as impossible.
pub const DEFAULT_EPS_ADJ: f64 = 1e-7;
/// Default eigenvalue cutoff for output supports.
pub const DEFAULT_EIG_CUTOFF: f64 = 1e-7;
/// Bound on `tr(P1 P2)` expected for non-adjacent outputs.
pub const SUPPORT_OVERLAP_TOL: f64 = 1e-6;
/// Decisions whose smallest retained probability is below `NEAR_BAND · eps` are flagged.
pub const NEAR_BAND: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub enum InputState {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl InputState {
    pub fn density(&self) -> DensityOperator {
        match self {
            InputState::Pure(v) => v.density(),
            InputState::Mixed(rho) => rho.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            InputState::Pure(v) => v.dim(),
            InputState::Mixed(rho) => rho.dim(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            InputState::Pure(v) => Some(v),
            InputState::Mixed(_) => None,
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        match (self, other) {
            (InputState::Pure(a), InputState::Pure(b)) => InputState::Pure(a.tensor(b)),
            _ => InputState::Mixed(self.density().tensor(&other.density())),
        }
    }
}

impl From<PureState> for InputState {
    fn from(v: PureState) -> Self {
        InputState::Pure(v)
    }
}

impl From<DensityOperator> for InputState {
    fn from(rho: DensityOperator) -> Self {
        InputState::Mixed(rho)
    }
}

/// The input alphabet `S`: states of one dimension, each with a label.
#[derive(Debug, Clone)]
pub struct InputEnsemble {
    states: Vec<InputState>,
    labels: Vec<String>,
}

impl InputEnsemble {
    /// Labels default to `v1, v2, ...`.
    pub fn new(states: Vec<InputState>) -> Result<Self> {
        let labels = (1..=states.len()).map(|i| format!("v{i}")).collect();
        Self::with_labels(states, labels)
    }

    pub fn with_labels(states: Vec<InputState>, labels: Vec<String>) -> Result<Self> {
        let first = states.first().ok_or(Error::EmptyEnsemble)?;
        let dim = first.dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        if labels.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: labels.len(),
            });
        }
        Ok(Self { states, labels })
    }

    pub fn from_pure(states: Vec<PureState>) -> Result<Self> {
        Self::new(states.into_iter().map(InputState::Pure).collect())
    }

    pub fn computational_basis(dim: usize) -> Self {
        Self::from_pure((0..dim).map(|i| PureState::basis(dim, i)).collect())
            .expect("basis is non-empty")
    }

    /// Orthonormal columns of a unitary as pure input states.
    pub fn from_basis(basis: &ComplexMatrix) -> Result<Self> {
        Self::from_pure(
            basis
                .columns()
                .into_iter()
                .map(PureState::normalized)
                .collect::<Result<_>>()?,
        )
    }

    pub fn states(&self) -> &[InputState] {
        &self.states
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }
}

/// `A = { j : p(j) ≥ eps }` together with the full probability row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeSet {
    pub indices: Vec<usize>,
    pub probabilities: Vec<f64>,
    pub eps: f64,
    /// Entries clamped from negative round-off to zero.
    pub clamped: usize,
}

impl OutcomeSet {
    fn from_probabilities(probabilities: Vec<f64>, eps: f64, clamped: usize) -> Self {
        let indices = probabilities
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= eps)
            .map(|(j, _)| j)
            .collect();
        Self {
            indices,
            probabilities,
            eps,
            clamped,
        }
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        let (mut i, mut k) = (0, 0);
        while i < self.indices.len() && k < other.indices.len() {
            match self.indices[i].cmp(&other.indices[k]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => k += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Smallest probability that was counted as possible.
    pub fn min_retained(&self) -> Option<f64> {
        self.indices
            .iter()
            .map(|&j| self.probabilities[j])
            .min_by(f64::total_cmp)
    }

    /// True when some retained probability lies in `[eps, NEAR_BAND·eps]`.
    pub fn near_threshold(&self) -> bool {
        self.min_retained()
            .is_some_and(|p| p <= NEAR_BAND * self.eps)
    }
}

pub fn outcome_set(
    channel: &KrausChannel,
    state: &InputState,
    meas: &Measurement,
    eps: f64,
) -> Result<OutcomeSet> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let rho = state.density();
    let (p, clamped) = outcome_probabilities(channel, rho.matrix(), meas)?;
    Ok(OutcomeSet::from_probabilities(p, eps, clamped))
}

/// Evidence behind a non-adjacency decision.
#[derive(Debug, Clone, Serialize)]
pub struct AdjacencyCertificate {
    pub first: OutcomeSet,
    pub second: OutcomeSet,
    /// `tr(P1 P2)` of the output support projectors, computed for non-adjacent pairs.
    pub support_overlap: Option<f64>,
}

impl AdjacencyCertificate {
    pub fn near_threshold(&self) -> bool {
        self.first.near_threshold() || self.second.near_threshold()
    }

    /// False when a non-adjacent verdict is contradicted by overlapping supports.
    pub fn supports_consistent(&self) -> bool {
        self.support_overlap.is_none_or(|o| o < SUPPORT_OVERLAP_TOL)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjacencyDecision {
    pub non_adjacent: bool,
    pub certificate: AdjacencyCertificate,
}

fn support_overlap(
    channel: &KrausChannel,
    a: &InputState,
    b: &InputState,
    cutoff: f64,
) -> Result<f64> {
    let pa = output_support_projector(channel, a, cutoff)?;
    let pb = output_support_projector(channel, b, cutoff)?;
    Ok(pa.trace_product(&pb).re)
}

fn output_support_projector(
    channel: &KrausChannel,
    state: &InputState,
    cutoff: f64,
) -> Result<ComplexMatrix> {
    let sigma = channel.apply(&state.density())?;
    projector_onto(&sigma.support_vectors(cutoff)?, sigma.dim())
}

/// Decides whether two inputs can never produce a common outcome.
pub fn non_adjacent(
    channel: &KrausChannel,
    a: &InputState,
    b: &InputState,
    meas: &Measurement,
    eps: f64,
) -> Result<AdjacencyDecision> {
    let first = outcome_set(channel, a, meas, eps)?;
    let second = outcome_set(channel, b, meas, eps)?;
    let disjoint = first.is_disjoint(&second);
    let support_overlap = if disjoint {
        Some(support_overlap(channel, a, b, DEFAULT_EIG_CUTOFF)?)
    } else {
        None
    };
    Ok(AdjacencyDecision {
        non_adjacent: disjoint,
        certificate: AdjacencyCertificate {
            first,
            second,
            support_overlap,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub states: Vec<String>,
    pub measurement_outcomes: usize,
    pub eps: f64,
}

/// A flagged decision on the pair `(first, second)` of vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjacencyWarning {
    pub first: usize,
    pub second: usize,
    pub kind: WarningKind,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WarningKind {
    NearThreshold,
    SupportOverlap,
}

/// Vertices are ensemble members; edges join non-adjacent (distinguishable) pairs.
#[derive(Debug, Clone)]
pub struct CharacteristicGraph {
    pub graph: Graph,
    pub outcome_sets: Vec<OutcomeSet>,
    pub provenance: Provenance,
    pub warnings: Vec<AdjacencyWarning>,
}

impl CharacteristicGraph {
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
}

pub fn characteristic_graph(
    channel: &KrausChannel,
    ensemble: &InputEnsemble,
    meas: &Measurement,
    eps: f64,
) -> Result<CharacteristicGraph> {
    characteristic_graph_with_cutoff(channel, ensemble, meas, eps, DEFAULT_EIG_CUTOFF)
}

/// As [`characteristic_graph`], with an explicit eigenvalue cutoff for the
/// support-consistency check.
pub fn characteristic_graph_with_cutoff(
    channel: &KrausChannel,
    ensemble: &InputEnsemble,
    meas: &Measurement,
    eps: f64,
    eig_cutoff: f64,
) -> Result<CharacteristicGraph> {
    let outcome_sets =
        exec::try_map_slice(ensemble.states(), |s| outcome_set(channel, s, meas, eps))?;
    let n = ensemble.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |k| (i, k)))
        .collect();
    let disjoint: Vec<bool> = exec::map_slice(&pairs, |&(i, k)| {
        outcome_sets[i].is_disjoint(&outcome_sets[k])
    });

    let mut graph = Graph::empty(n);
    let mut edges = Vec::new();
    for (&(i, k), &d) in pairs.iter().zip(&disjoint) {
        if d {
            graph.add_edge(i, k);
            edges.push((i, k));
        }
    }

    let mut warnings = Vec::new();
    // Support projectors are only needed for states that have an edge.
    let mut involved: Vec<usize> = edges.iter().flat_map(|&(i, k)| [i, k]).collect();
    involved.sort_unstable();
    involved.dedup();
    let projectors = exec::try_map_slice(&involved, |&i| {
        output_support_projector(channel, &ensemble.states()[i], eig_cutoff)
    })?;
    let slot = |i: usize| involved.binary_search(&i).expect("endpoint was collected");
    for &(i, k) in &edges {
        let overlap = projectors[slot(i)].trace_product(&projectors[slot(k)]).re;
        if overlap >= SUPPORT_OVERLAP_TOL {
            warnings.push(AdjacencyWarning {
                first: i,
                second: k,
                kind: WarningKind::SupportOverlap,
                detail: format!("tr(P1 P2) = {overlap:.3e} for a non-adjacent pair"),
            });
        }
    }
    for &(i, k) in &pairs {
        let (a, b) = (&outcome_sets[i], &outcome_sets[k]);
        if a.near_threshold() || b.near_threshold() {
            let m = a
                .min_retained()
                .into_iter()
                .chain(b.min_retained())
                .fold(f64::INFINITY, f64::min);
            warnings.push(AdjacencyWarning {
                first: i,
                second: k,
                kind: WarningKind::NearThreshold,
                detail: format!(
                    "smallest retained probability {m:.3e} within {NEAR_BAND}x of eps {eps:.1e}"
                ),
            });
        }
    }

    Ok(CharacteristicGraph {
        graph,
        outcome_sets,
        provenance: Provenance {
            states: ensemble.labels().to_vec(),
            measurement_outcomes: meas.outcomes(),
            eps,
        },
        warnings,
    })
}

/// True iff some pair of inputs is non-adjacent, i.e. the zero-error rate of
/// this (ensemble, measurement) is positive.
pub fn has_positive_capacity(
    channel: &KrausChannel,
    ensemble: &InputEnsemble,
    meas: &Measurement,
    eps: f64,
) -> Result<bool> {
    Ok(characteristic_graph(channel, ensemble, meas, eps)?.edge_count() > 0)
}
