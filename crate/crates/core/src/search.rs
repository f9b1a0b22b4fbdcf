//! Heuristic search over (ensemble, measurement) pairs.
//!
//! Candidates are always an orthonormal basis of pure input states paired
//! with a rank-one projective measurement; pure states and von Neumann
//! measurements lose nothing for zero-error rates, so the search never
//! generates mixed states or general POVMs. Results are lower bounds.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adjacency::{InputEnsemble, DEFAULT_EIG_CUTOFF, DEFAULT_EPS_ADJ};
use crate::capacity::{zero_error_rate, RateOptions, RateReport};
use crate::channel::{KrausChannel, Measurement};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::DEFAULT_VERTEX_CAP;
use crate::numerics::{
    complete_basis, extend_basis, hermitian_eig, unitary_exp, ComplexMatrix, DEFAULT_TOL,
};
use crate::random::{random_hermitian, random_unitary, seeded};

/// Rotation angles tried by the refine strategy.
pub const REFINE_STEPS: [f64; 2] = [0.05, 0.01];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Canonical,
    OutputEigenbasis,
    RandomBasis,
    Refine,
}

impl StrategyKind {
    fn stream_salt(self) -> u64 {
        match self {
            StrategyKind::Canonical => 0,
            StrategyKind::OutputEigenbasis => 0x9e37_79b9_7f4a_7c15,
            StrategyKind::RandomBasis => 0xbf58_476d_1ce4_e5b9,
            StrategyKind::Refine => 0x94d0_49bb_1331_11eb,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Canonical => "canonical",
            StrategyKind::OutputEigenbasis => "output-eigenbasis",
            StrategyKind::RandomBasis => "random-basis",
            StrategyKind::Refine => "refine",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(StrategyKind::Canonical),
            "output-eigenbasis" => Ok(StrategyKind::OutputEigenbasis),
            "random-basis" => Ok(StrategyKind::RandomBasis),
            "refine" => Ok(StrategyKind::Refine),
            other => Err(Error::InvalidArgument(format!(
                "unknown strategy '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchStrategy {
    pub kinds: Vec<StrategyKind>,
    pub trials: usize,
    pub seed: u64,
    pub max_n: usize,
    pub eps: f64,
    pub eig_cutoff: f64,
    pub vertex_cap: usize,
    pub clique_budget: Option<u64>,
}

impl Default for SearchStrategy {
    fn default() -> Self {
        Self {
            kinds: vec![StrategyKind::Canonical, StrategyKind::OutputEigenbasis],
            trials: 8,
            seed: 0,
            max_n: 2,
            eps: DEFAULT_EPS_ADJ,
            eig_cutoff: DEFAULT_EIG_CUTOFF,
            vertex_cap: DEFAULT_VERTEX_CAP,
            clique_budget: None,
        }
    }
}

impl SearchStrategy {
    fn rate_options(&self) -> RateOptions {
        RateOptions {
            max_n: self.max_n,
            eps: self.eps,
            eig_cutoff: self.eig_cutoff,
            vertex_cap: self.vertex_cap,
            clique_budget: self.clique_budget,
            ..RateOptions::default()
        }
    }
}

/// An orthonormal input basis with a rank-one projective measurement.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub origin: String,
    pub input_basis: ComplexMatrix,
    pub measurement_basis: ComplexMatrix,
    pub ensemble: InputEnsemble,
    pub measurement: Measurement,
}

impl Candidate {
    fn new(
        origin: String,
        input_basis: ComplexMatrix,
        measurement_basis: ComplexMatrix,
    ) -> Result<Self> {
        let ensemble = InputEnsemble::from_basis(&input_basis)?;
        let measurement = Measurement::from_basis(&measurement_basis, 1e-8)?;
        Ok(Self {
            origin,
            input_basis,
            measurement_basis,
            ensemble,
            measurement,
        })
    }
}

/// Measurement basis assembled from the output supports of the given inputs,
/// in input order: each output's support eigenvectors are orthogonalized
/// against the basis collected so far, then the basis is completed.
pub fn output_eigenbasis(channel: &KrausChannel, inputs: &ComplexMatrix) -> Result<ComplexMatrix> {
    let states: Vec<ComplexMatrix> = inputs
        .columns()
        .iter()
        .map(|v| ComplexMatrix::outer(v))
        .collect();
    output_eigenbasis_of(channel, &states)
}

/// As [`output_eigenbasis`] for arbitrary (possibly mixed) input density
/// matrices. The first block of the basis spans the support of the first
/// output, so two inputs are non-adjacent under this measurement exactly when
/// their outputs have orthogonal supports.
pub fn output_eigenbasis_of(
    channel: &KrausChannel,
    inputs: &[ComplexMatrix],
) -> Result<ComplexMatrix> {
    let d = channel.dim();
    let mut basis = Vec::with_capacity(d);
    for rho in inputs {
        let sigma = channel.apply_matrix(rho)?;
        let eig = hermitian_eig(&sigma.hermitian_part(), DEFAULT_TOL)?;
        for (k, &l) in eig.values.iter().enumerate() {
            if l > DEFAULT_EIG_CUTOFF && basis.len() < d {
                extend_basis(&mut basis, &eig.vector(k), 1e-6);
            }
        }
    }
    ComplexMatrix::from_columns(&complete_basis(basis, d))
}

fn perturb<R: Rng + ?Sized>(rng: &mut R, u: &ComplexMatrix, step: f64) -> Result<ComplexMatrix> {
    let h = random_hermitian(rng, u.rows());
    let norm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    Ok(&unitary_exp(&h.scale_real(1.0 / norm), step)? * u)
}

fn refine_batch(
    rng: &mut crate::random::SeededRng,
    incumbent: &Candidate,
    round: usize,
) -> Result<Vec<Candidate>> {
    REFINE_STEPS
        .iter()
        .map(|&step| {
            let u = perturb(rng, &incumbent.input_basis, step)?;
            let w = perturb(rng, &incumbent.measurement_basis, step)?;
            Candidate::new(format!("refine[{round}] step {step}"), u, w)
        })
        .collect()
}

/// Candidates for the non-adaptive strategies, in the order of `strategy.kinds`.
/// `Refine` alone yields perturbations of the canonical pair.
pub fn candidate_pairs(
    channel: &KrausChannel,
    strategy: &SearchStrategy,
) -> Result<Vec<Candidate>> {
    if strategy.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let d = channel.dim();
    let id = ComplexMatrix::identity(d);
    let mut out = Vec::new();
    for &kind in &strategy.kinds {
        let mut rng = seeded(strategy.seed ^ kind.stream_salt());
        match kind {
            StrategyKind::Canonical => {
                out.push(Candidate::new("canonical".into(), id.clone(), id.clone())?);
            }
            StrategyKind::OutputEigenbasis => {
                for t in 0..strategy.trials {
                    let inputs = if t == 0 {
                        id.clone()
                    } else {
                        random_unitary(&mut rng, d)
                    };
                    let meas = output_eigenbasis(channel, &inputs)?;
                    out.push(Candidate::new(
                        format!("output-eigenbasis[{t}]"),
                        inputs,
                        meas,
                    )?);
                }
            }
            StrategyKind::RandomBasis => {
                for t in 0..strategy.trials {
                    let u = random_unitary(&mut rng, d);
                    let w = random_unitary(&mut rng, d);
                    out.push(Candidate::new(format!("random-basis[{t}]"), u, w)?);
                }
            }
            StrategyKind::Refine => {
                if strategy.kinds.len() == 1 {
                    let base = Candidate::new("canonical".into(), id.clone(), id.clone())?;
                    for round in 0..strategy.trials {
                        out.extend(refine_batch(&mut rng, &base, round)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateLog {
    pub index: usize,
    pub origin: String,
    pub clique_numbers: Vec<usize>,
    pub best_rate: f64,
    pub edges: usize,
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best: Candidate,
    pub best_index: usize,
    pub report: RateReport,
    pub log: Vec<CandidateLog>,
}

fn score(r: &RateReport) -> (f64, usize) {
    (r.best_rate, r.graph.edge_count())
}

fn better(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 > b.1)
}

/// Evaluates every candidate and returns the incumbent with the best rate
/// (ties: more characteristic-graph edges, then lowest index). With `Refine`
/// among the kinds, the incumbent is then improved greedily by small random
/// rotations of both bases.
pub fn search_optimum(channel: &KrausChannel, strategy: &SearchStrategy) -> Result<SearchResult> {
    let opts = strategy.rate_options();
    let refine = strategy.kinds.contains(&StrategyKind::Refine);
    let mut candidates = candidate_pairs(channel, strategy)?;
    let adaptive_refine = refine && strategy.kinds.len() > 1;
    if candidates.is_empty() {
        let d = channel.dim();
        let id = ComplexMatrix::identity(d);
        candidates.push(Candidate::new("canonical".into(), id.clone(), id)?);
    }

    let reports = exec::try_map_slice(&candidates, |c| {
        zero_error_rate(channel, &c.ensemble, &c.measurement, &opts)
    })?;
    let mut log: Vec<CandidateLog> = Vec::new();
    let mut best_index = 0;
    for (i, (c, r)) in candidates.iter().zip(&reports).enumerate() {
        log.push(entry(i, c, r));
        if better(score(r), score(&reports[best_index])) {
            best_index = i;
        }
    }
    let mut best = candidates[best_index].clone();
    let mut best_report = reports[best_index].clone();

    if adaptive_refine {
        let mut rng = seeded(strategy.seed ^ StrategyKind::Refine.stream_salt());
        for round in 0..strategy.trials {
            let batch = refine_batch(&mut rng, &best, round)?;
            let batch_reports = exec::try_map_slice(&batch, |c| {
                zero_error_rate(channel, &c.ensemble, &c.measurement, &opts)
            })?;
            let mut pick: Option<usize> = None;
            for (k, (c, r)) in batch.iter().zip(&batch_reports).enumerate() {
                let index = log.len();
                log.push(entry(index, c, r));
                let reference = pick.map_or(score(&best_report), |p| score(&batch_reports[p]));
                if better(score(r), reference) {
                    pick = Some(k);
                }
            }
            if let Some(k) = pick {
                best = batch[k].clone();
                best_report = batch_reports[k].clone();
                best_index = log.len() - batch.len() + k;
            }
        }
    }

    Ok(SearchResult {
        best,
        best_index,
        report: best_report,
        log,
    })
}

fn entry(index: usize, c: &Candidate, r: &RateReport) -> CandidateLog {
    CandidateLog {
        index,
        origin: c.origin.clone(),
        clique_numbers: r.rows.iter().map(|row| row.clique_number).collect(),
        best_rate: r.best_rate,
        edges: r.graph.edge_count(),
        exact: r.all_exact(),
    }
}
