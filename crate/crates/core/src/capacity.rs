//! Zero-error rates over block lengths, witness codes, and the theta bound.
//!
//! Rates are in bits per channel use: `rate_n = log2(K(n)) / n` with
//! `K(n) = ω(G^n)`, the clique number of the n-th disjunctive power of the
//! characteristic graph.

use serde::Serialize;

use crate::adjacency::{
    characteristic_graph_with_cutoff, non_adjacent, AdjacencyWarning, InputEnsemble, InputState,
};
use crate::channel::{KrausChannel, Measurement};
use crate::error::Result;
use crate::exec;
use crate::graph::{clique_number_with_budget, product_with_cap, Graph, DEFAULT_VERTEX_CAP};
use crate::theta::{lovasz_theta, ThetaResult, DEFAULT_THETA_TOL};

/// `best_rate` and `log2 θ` closer than this certify the capacity.
pub const TIGHTNESS_TOL: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct RateOptions {
    pub max_n: usize,
    pub eps: f64,
    pub eig_cutoff: f64,
    pub vertex_cap: usize,
    /// Branch-and-bound node budget per block length; `None` is unbounded.
    pub clique_budget: Option<u64>,
    pub theta: bool,
    pub theta_tol: f64,
}

impl Default for RateOptions {
    fn default() -> Self {
        Self {
            max_n: 2,
            eps: crate::adjacency::DEFAULT_EPS_ADJ,
            eig_cutoff: crate::adjacency::DEFAULT_EIG_CUTOFF,
            vertex_cap: DEFAULT_VERTEX_CAP,
            clique_budget: None,
            theta: false,
            theta_tol: DEFAULT_THETA_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub n: usize,
    /// K(n) = ω(G^n); a lower bound when `exact` is false.
    pub clique_number: usize,
    pub rate: f64,
    pub exact: bool,
    /// Maximum clique as n-tuples of input indices.
    pub witness: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaBound {
    pub theta: f64,
    /// `log2 θ` in bits per use.
    pub rate_bound: f64,
    pub solver: ThetaResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Lower and upper bounds meet: the capacity of this (S, P) is known.
    Tight,
    /// Only bounds are known.
    Gap,
    /// No upper bound was computed.
    LowerBound,
}

#[derive(Debug, Clone)]
pub struct RateReport {
    pub labels: Vec<String>,
    /// Characteristic graph (edges = distinguishable pairs).
    pub graph: Graph,
    pub rows: Vec<RateRow>,
    pub best_n: usize,
    pub best_rate: f64,
    pub theta: Option<ThetaBound>,
    pub warnings: Vec<AdjacencyWarning>,
}

impl RateReport {
    pub fn best_row(&self) -> &RateRow {
        &self.rows[self.best_n - 1]
    }

    pub fn all_exact(&self) -> bool {
        self.rows.iter().all(|r| r.exact)
    }

    pub fn verdict(&self) -> Verdict {
        match self.theta {
            None => Verdict::LowerBound,
            Some(t)
                if self.all_exact() && (t.rate_bound - self.best_rate).abs() <= TIGHTNESS_TOL =>
            {
                Verdict::Tight
            }
            Some(_) => Verdict::Gap,
        }
    }
}

fn log2_count(k: usize) -> f64 {
    (k as f64).log2()
}

/// Rate table for an already built characteristic graph.
pub fn rate_table(graph: &Graph, labels: Vec<String>, opts: &RateOptions) -> Result<RateReport> {
    if opts.max_n == 0 {
        return Err(crate::error::Error::InvalidArgument(
            "max_n must be at least 1".into(),
        ));
    }
    let rows = exec::try_map_range(opts.max_n, |i| {
        let n = i + 1;
        let pg = product_with_cap(graph, n, opts.vertex_cap)?;
        let clique = clique_number_with_budget(&pg.graph, opts.clique_budget);
        Ok(RateRow {
            n,
            clique_number: clique.size,
            rate: log2_count(clique.size) / n as f64,
            exact: clique.exact,
            witness: clique.witness.iter().map(|&v| pg.tuple(v)).collect(),
        })
    })?;
    let (best_n, best_rate) = rows.iter().fold((1, f64::NEG_INFINITY), |(bn, br), r| {
        if r.rate > br {
            (r.n, r.rate)
        } else {
            (bn, br)
        }
    });
    let theta = if opts.theta {
        let t = lovasz_theta(&graph.complement(), opts.theta_tol)?;
        Some(ThetaBound {
            theta: t.theta,
            rate_bound: t.theta.log2(),
            solver: t,
        })
    } else {
        None
    };
    Ok(RateReport {
        labels,
        graph: graph.clone(),
        rows,
        best_n,
        best_rate,
        theta,
        warnings: Vec::new(),
    })
}

/// Achievable zero-error rates of `channel` used with inputs `ensemble` and
/// measurement `meas`, for block lengths `1..=opts.max_n`.
pub fn zero_error_rate(
    channel: &KrausChannel,
    ensemble: &InputEnsemble,
    meas: &Measurement,
    opts: &RateOptions,
) -> Result<RateReport> {
    let cg = characteristic_graph_with_cutoff(channel, ensemble, meas, opts.eps, opts.eig_cutoff)?;
    let mut report = rate_table(&cg.graph, ensemble.labels().to_vec(), opts)?;
    report.warnings = cg.warnings;
    Ok(report)
}

/// A block code decoded to input labels, re-checked on the n-fold channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessCode {
    pub n: usize,
    pub codewords: Vec<Vec<usize>>,
    pub labels: Vec<Vec<String>>,
    /// Every codeword pair was found non-adjacent for the channel `E^{⊗n}`
    /// measured with `P^{⊗n}`.
    pub verified: bool,
    pub pairs_checked: usize,
}

/// Decodes the witness clique at the best block length and verifies that
/// all codeword pairs are perfectly distinguishable through the tensor-power
/// channel and product measurement.
pub fn witness_code(
    report: &RateReport,
    channel: &KrausChannel,
    ensemble: &InputEnsemble,
    meas: &Measurement,
    eps: f64,
) -> Result<WitnessCode> {
    let row = report.best_row();
    let n = row.n;
    let codewords = row.witness.clone();
    let labels = codewords
        .iter()
        .map(|t| t.iter().map(|&i| ensemble.labels()[i].clone()).collect())
        .collect();

    let big_channel = channel.tensor_power(n);
    let big_meas = meas.tensor_power(n);
    let words: Vec<InputState> = codewords
        .iter()
        .map(|t| {
            t[1..]
                .iter()
                .fold(ensemble.states()[t[0]].clone(), |acc, &i| {
                    acc.tensor(&ensemble.states()[i])
                })
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..words.len())
        .flat_map(|i| ((i + 1)..words.len()).map(move |k| (i, k)))
        .collect();
    let verdicts = exec::try_map_slice(&pairs, |&(i, k)| {
        non_adjacent(&big_channel, &words[i], &words[k], &big_meas, eps).map(|d| d.non_adjacent)
    })?;
    Ok(WitnessCode {
        n,
        codewords,
        labels,
        verified: verdicts.iter().all(|&v| v),
        pairs_checked: pairs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjacency::DEFAULT_EPS_ADJ;
    use crate::channel::pentagon;

    fn canonical(ch: &KrausChannel, opts: &RateOptions) -> RateReport {
        let d = ch.dim();
        zero_error_rate(
            ch,
            &InputEnsemble::computational_basis(d),
            &Measurement::computational(d),
            opts,
        )
        .unwrap()
    }

    #[test]
    fn pentagon_rates() {
        let r = canonical(&pentagon(0.35, 0.35).unwrap(), &RateOptions::default());
        let ks: Vec<usize> = r.rows.iter().map(|r| r.clique_number).collect();
        assert_eq!(ks, vec![2, 5]);
        assert_eq!(r.best_n, 2);
        assert_eq!(r.best_rate, 5f64.log2() / 2.0);
        assert!((r.best_rate - 1.160964).abs() < 1e-6);
    }

    #[test]
    fn identity_qubit_rates() {
        let r = canonical(&KrausChannel::identity(2), &RateOptions::default());
        let ks: Vec<usize> = r.rows.iter().map(|r| r.clique_number).collect();
        assert_eq!(ks, vec![2, 4]);
        assert_eq!(r.best_rate, 1.0);
        assert_eq!(r.best_n, 1);
    }

    #[test]
    fn mixing_channel_rates() {
        let r = canonical(&KrausChannel::completely_mixing(3), &RateOptions::default());
        assert!(r.rows.iter().all(|r| r.clique_number == 1));
        assert_eq!(r.best_rate, 0.0);
    }

    #[test]
    fn pentagon_witness_and_theta() {
        let ch = pentagon(0.35, 0.35).unwrap();
        let opts = RateOptions {
            theta: true,
            ..RateOptions::default()
        };
        let r = canonical(&ch, &opts);
        let t = r.theta.unwrap();
        assert!((t.theta - 5f64.sqrt()).abs() < 1e-4);
        assert_eq!(r.verdict(), Verdict::Tight);
        let w = witness_code(
            &r,
            &ch,
            &InputEnsemble::computational_basis(5),
            &Measurement::computational(5),
            DEFAULT_EPS_ADJ,
        )
        .unwrap();
        assert_eq!(w.codewords.len(), 5);
        assert_eq!(w.pairs_checked, 10);
        assert!(w.verified);
    }

    #[test]
    fn trivial_witnesses() {
        let id = KrausChannel::identity(2);
        let r = canonical(&id, &RateOptions::default());
        let w = witness_code(
            &r,
            &id,
            &InputEnsemble::computational_basis(2),
            &Measurement::computational(2),
            DEFAULT_EPS_ADJ,
        )
        .unwrap();
        assert_eq!(
            w.labels,
            vec![vec!["v1".to_string()], vec!["v2".to_string()]]
        );
        assert!(w.verified);

        let mix = KrausChannel::completely_mixing(2);
        let r = canonical(&mix, &RateOptions::default());
        let w = witness_code(
            &r,
            &mix,
            &InputEnsemble::computational_basis(2),
            &Measurement::computational(2),
            DEFAULT_EPS_ADJ,
        )
        .unwrap();
        assert_eq!(w.codewords.len(), 1);
        assert!(w.verified);
    }

    #[test]
    fn verdict_without_theta_is_lower_bound() {
        let r = canonical(&KrausChannel::identity(2), &RateOptions::default());
        assert_eq!(r.verdict(), Verdict::LowerBound);
    }

    #[test]
    fn zero_max_n_is_rejected() {
        let opts = RateOptions {
            max_n: 0,
            ..RateOptions::default()
        };
        assert!(rate_table(&Graph::cycle(5), vec![], &opts).is_err());
    }
}
