//! Report document and its text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qzec::adjacency::WarningKind;
use qzec::capacity::{RateRow, ThetaBound};
use qzec::search::CandidateLog;
use qzec::{Graph, RateReport, Tolerances, Verdict, WitnessCode};
use serde::Serialize;

pub const UNITS: &str = "bits per channel use";

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Self {
            name: "qzec",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Where an input came from. Files carry their SHA-256.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    Canonical,
    OutputEigenbasis,
    Builtin { name: String },
    File { path: String, sha256: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct Inputs {
    pub channel: Source,
    pub parameters: BTreeMap<String, f64>,
    pub states: Source,
    pub measurement: Source,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<Source>,
    pub options: Options,
}

#[derive(Debug, Clone, Serialize)]
pub struct Options {
    pub max_n: usize,
    pub theta: bool,
    pub vertex_cap: usize,
    pub node_budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSection {
    pub vertices: usize,
    pub labels: Vec<String>,
    /// Distinguishable pairs.
    pub edges: Vec<[usize; 2]>,
    pub adjacency: Vec<Vec<usize>>,
}

impl GraphSection {
    pub fn new(graph: &Graph, labels: &[String]) -> Self {
        let n = graph.vertex_count();
        Self {
            vertices: n,
            labels: labels.to_vec(),
            edges: graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            adjacency: (0..n)
                .map(|v| graph.neighbors(v).iter().collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WarningCategory {
    NearThreshold,
    SupportOverlap,
    InexactClique,
    WitnessUnverified,
}

#[derive(Debug, Clone, Serialize)]
pub struct Warning {
    pub kind: WarningCategory,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchSection {
    pub best_index: usize,
    pub best_origin: String,
    pub input_basis: Vec<Vec<[f64; 2]>>,
    pub measurement_basis: Vec<Vec<[f64; 2]>>,
    pub candidates: Vec<CandidateLog>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoSection {
    pub reference_code: Vec<Vec<String>>,
    /// Equal to the reference code up to graph automorphisms applied per
    /// coordinate and a swap of the two coordinates.
    pub matches_reference: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: Tool,
    pub command: String,
    pub units: &'static str,
    pub inputs: Inputs,
    pub tolerances: Tolerances,
    pub graph: GraphSection,
    pub rates: Vec<RateRow>,
    pub best_n: usize,
    pub best_rate: f64,
    pub all_exact: bool,
    pub theta: Option<ThetaBound>,
    pub verdict: Verdict,
    pub witness_code: Option<WitnessCode>,
    pub warnings: Vec<Warning>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub demo: Option<DemoSection>,
}

impl Report {
    pub fn new(
        command: &str,
        inputs: Inputs,
        tolerances: Tolerances,
        rates: &RateReport,
        witness: Option<WitnessCode>,
    ) -> Self {
        let mut warnings: Vec<Warning> = rates
            .warnings
            .iter()
            .map(|w| Warning {
                kind: match w.kind {
                    WarningKind::NearThreshold => WarningCategory::NearThreshold,
                    WarningKind::SupportOverlap => WarningCategory::SupportOverlap,
                },
                pair: Some([w.first, w.second]),
                n: None,
                detail: w.detail.clone(),
            })
            .collect();
        warnings.extend(rates.rows.iter().filter(|r| !r.exact).map(|r| Warning {
            kind: WarningCategory::InexactClique,
            pair: None,
            n: Some(r.n),
            detail: format!("node budget exhausted; K({}) >= {}", r.n, r.clique_number),
        }));
        if let Some(w) = &witness {
            if !w.verified {
                warnings.push(Warning {
                    kind: WarningCategory::WitnessUnverified,
                    pair: None,
                    n: Some(w.n),
                    detail: "some codeword pair is not distinguishable on the n-fold channel"
                        .into(),
                });
            }
        }
        Self {
            tool: Tool::default(),
            command: command.into(),
            units: UNITS,
            inputs,
            tolerances,
            graph: GraphSection::new(&rates.graph, &rates.labels),
            rates: rates.rows.clone(),
            best_n: rates.best_n,
            best_rate: rates.best_rate,
            all_exact: rates.all_exact(),
            theta: rates.theta,
            verdict: rates.verdict(),
            witness_code: witness,
            warnings,
            search: None,
            demo: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let source = |s: &Source| match s {
            Source::Canonical => "canonical".to_string(),
            Source::OutputEigenbasis => "output eigenbasis".to_string(),
            Source::Builtin { name } => format!("built-in {name}"),
            Source::File { path, sha256 } => format!("{path} (sha256 {})", &sha256[..12]),
        };
        let _ = writeln!(w, "command      {}", self.command);
        let _ = writeln!(w, "channel      {}", source(&self.inputs.channel));
        if !self.inputs.parameters.is_empty() {
            let ps: Vec<String> = self
                .inputs
                .parameters
                .iter()
                .map(|(k, v)| format!("{k} = {v}"))
                .collect();
            let _ = writeln!(w, "parameters   {}", ps.join(", "));
        }
        let _ = writeln!(w, "states       {}", source(&self.inputs.states));
        let _ = writeln!(w, "measurement  {}", source(&self.inputs.measurement));
        let label = |v: usize| self.graph.labels[v].as_str();
        let edges: Vec<String> = self
            .graph
            .edges
            .iter()
            .map(|[u, v]| format!("{}-{}", label(*u), label(*v)))
            .collect();
        let _ = writeln!(
            w,
            "graph        {} vertices, {} edges: {}",
            self.graph.vertices,
            edges.len(),
            if edges.is_empty() {
                "none".into()
            } else {
                edges.join(" ")
            }
        );
        let _ = writeln!(w);
        let _ = writeln!(w, "   n      K(n)   rate ({})   exact", UNITS);
        for r in &self.rates {
            let _ = writeln!(
                w,
                "{:>4}  {:>8}   {:>28.6}   {}",
                r.n,
                r.clique_number,
                r.rate,
                if r.exact { "yes" } else { "no" }
            );
        }
        let _ = writeln!(w);
        let _ = writeln!(
            w,
            "best         n = {}, {:.6} {UNITS}",
            self.best_n, self.best_rate
        );
        if let Some(t) = &self.theta {
            let _ = writeln!(
                w,
                "theta        {:.6}, upper bound {:.6} {UNITS}",
                t.theta, t.rate_bound
            );
        }
        let verdict = match self.verdict {
            Verdict::Tight => "tight",
            Verdict::Gap => "gap",
            Verdict::LowerBound => "lower bound only",
        };
        let _ = writeln!(w, "verdict      {verdict}");
        let tuple = |t: &[String]| format!("({})", t.join(","));
        if let Some(code) = &self.witness_code {
            let words: Vec<String> = code.labels.iter().map(|t| tuple(t)).collect();
            let _ = writeln!(
                w,
                "code         {} [{}]",
                words.join(" "),
                if code.verified {
                    "verified"
                } else {
                    "NOT verified"
                }
            );
        }
        if let Some(demo) = &self.demo {
            let words: Vec<String> = demo.reference_code.iter().map(|t| tuple(t)).collect();
            let _ = writeln!(
                w,
                "reference    {} [{}]",
                words.join(" "),
                if demo.matches_reference {
                    "equivalent"
                } else {
                    "NOT equivalent"
                }
            );
        }
        if let Some(s) = &self.search {
            let _ = writeln!(
                w,
                "search       {} candidates, best #{} ({})",
                s.candidates.len(),
                s.best_index,
                s.best_origin
            );
        }
        if self.warnings.is_empty() {
            let _ = writeln!(w, "warnings     none");
        } else {
            for warn in &self.warnings {
                let _ = writeln!(w, "warning      {}", warn.detail);
            }
        }
        out
    }
}
