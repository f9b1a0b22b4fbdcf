//! JSON channel, state and measurement files.
//!
//! Complex entries are `[re, im]` pairs or bare reals. Any number may instead
//! be an expression string over the file's named parameters, e.g.
//! `"sqrt(1 - 4*alpha^2)"`. Integer literals follow integer arithmetic, so
//! write `0.5` rather than `1/2`.

use std::collections::BTreeMap;
use std::path::Path;

use evalexpr::{
    ContextWithMutableFunctions, ContextWithMutableVariables, DefaultNumericTypes, EvalexprError,
    Function, HashMapContext, Value,
};
use qzec::numerics::{ComplexMatrix, C64};
use qzec::{Error, InputEnsemble, InputState, KrausChannel, Measurement, PureState};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Expr(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([Scalar; 2]),
    Real(Scalar),
}

pub type MatrixSpec = Vec<Vec<Entry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameter {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    /// Excludes `min` and `max` themselves.
    #[serde(default)]
    pub open: bool,
}

impl Parameter {
    fn check(&self, name: &str) -> Result<(), Error> {
        let v = self.value;
        let low_ok = self
            .min
            .is_none_or(|m| if self.open { v > m } else { v >= m });
        let high_ok = self
            .max
            .is_none_or(|m| if self.open { v < m } else { v <= m });
        if low_ok && high_ok && v.is_finite() {
            return Ok(());
        }
        let (l, r) = if self.open { ('(', ')') } else { ('[', ']') };
        let bound = |b: Option<f64>, inf: &str| b.map_or(inf.to_string(), |x| x.to_string());
        Err(Error::ParameterOutOfRange {
            name: name.into(),
            value: v,
            range: format!(
                "{l}{}, {}{r}",
                bound(self.min, "-inf"),
                bound(self.max, "inf")
            ),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, Parameter>,
    pub kraus: Vec<MatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSpec {
    Pure(Vec<Entry>),
    Density(MatrixSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatesFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub states: Vec<StateSpec>,
}

/// Either general POVM elements or the vectors of an orthonormal basis
/// (a rank-one projective measurement).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementFile {
    Povm(Vec<MatrixSpec>),
    Basis(Vec<Vec<Entry>>),
}

pub fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_json<T: DeserializeOwned>(bytes: &[u8], origin: &str) -> CliResult<T> {
    serde_json::from_slice(bytes).map_err(|e| {
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = e.to_string();
        CliError::Parse {
            path: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: message
                .strip_suffix(&suffix)
                .unwrap_or(&message)
                .to_string(),
        }
    })
}

/// Expression context: the file's parameters plus `sqrt`.
pub struct Evaluator {
    ctx: HashMapContext<DefaultNumericTypes>,
}

impl Evaluator {
    pub fn new(params: &BTreeMap<String, Parameter>) -> Self {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        for (name, p) in params {
            ctx.set_value(name.clone(), Value::Float(p.value))
                .expect("hash map context accepts values");
        }
        ctx.set_function(
            "sqrt".into(),
            Function::new(|arg: &Value<DefaultNumericTypes>| {
                let x = arg.as_number()?;
                if x < 0.0 {
                    return Err(EvalexprError::CustomMessage(format!(
                        "sqrt of negative {x}"
                    )));
                }
                Ok(Value::Float(x.sqrt()))
            }),
        )
        .expect("hash map context accepts functions");
        Self { ctx }
    }

    pub fn scalar(&self, s: &Scalar, location: &str) -> CliResult<f64> {
        let (value, expr) = match s {
            Scalar::Number(x) => (*x, x.to_string()),
            Scalar::Expr(e) => {
                let v = evalexpr::eval_number_with_context(e, &self.ctx).map_err(|err| {
                    CliError::Expression {
                        location: location.into(),
                        expr: e.clone(),
                        message: err.to_string(),
                    }
                })?;
                (v, e.clone())
            }
        };
        if !value.is_finite() {
            return Err(CliError::Expression {
                location: location.into(),
                expr,
                message: "value is not finite".into(),
            });
        }
        Ok(value)
    }

    pub fn entry(&self, e: &Entry, location: &str) -> CliResult<C64> {
        match e {
            Entry::Real(s) => Ok(C64::new(self.scalar(s, location)?, 0.0)),
            Entry::Complex([re, im]) => Ok(C64::new(
                self.scalar(re, location)?,
                self.scalar(im, location)?,
            )),
        }
    }

    pub fn vector(&self, v: &[Entry], dim: usize, location: &str) -> CliResult<Vec<C64>> {
        if v.len() != dim {
            return Err(CliError::Spec(format!(
                "{location}: expected {dim} entries, found {}",
                v.len()
            )));
        }
        v.iter()
            .enumerate()
            .map(|(i, e)| self.entry(e, &format!("{location}[{i}]")))
            .collect()
    }

    pub fn matrix(&self, m: &MatrixSpec, dim: usize, location: &str) -> CliResult<ComplexMatrix> {
        if m.len() != dim {
            return Err(CliError::Spec(format!(
                "{location}: expected {dim} rows, found {}",
                m.len()
            )));
        }
        let rows = m
            .iter()
            .enumerate()
            .map(|(i, row)| self.vector(row, dim, &format!("{location}[{i}]")))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(ComplexMatrix::from_rows(&rows)?)
    }
}

impl ChannelSpecFile {
    pub fn parse(bytes: &[u8], origin: &str) -> CliResult<Self> {
        parse_json(bytes, origin)
    }

    /// Applies `name=value` overrides.
    pub fn set_parameter(&mut self, name: &str, value: f64) -> CliResult<()> {
        match self.parameters.get_mut(name) {
            Some(p) => {
                p.value = value;
                Ok(())
            }
            None => Err(CliError::Usage(format!(
                "channel has no parameter '{name}'"
            ))),
        }
    }

    pub fn check_parameters(&self) -> CliResult<()> {
        for (name, p) in &self.parameters {
            p.check(name)?;
        }
        Ok(())
    }

    pub fn parameter_values(&self) -> BTreeMap<String, f64> {
        self.parameters
            .iter()
            .map(|(k, p)| (k.clone(), p.value))
            .collect()
    }

    pub fn evaluator(&self) -> Evaluator {
        Evaluator::new(&self.parameters)
    }

    pub fn operators(&self) -> CliResult<Vec<ComplexMatrix>> {
        self.check_parameters()?;
        let ev = self.evaluator();
        self.kraus
            .iter()
            .enumerate()
            .map(|(k, m)| ev.matrix(m, self.dimension, &format!("kraus[{k}]")))
            .collect()
    }

    /// Evaluates the templates and validates completeness.
    pub fn build(&self, tol: f64) -> CliResult<KrausChannel> {
        Ok(KrausChannel::new(self.operators()?, tol)?)
    }

    /// Numeric spec of an existing channel (no parameters).
    pub fn from_channel(channel: &KrausChannel) -> Self {
        Self {
            name: None,
            dimension: channel.dim(),
            parameters: BTreeMap::new(),
            kraus: channel.operators().iter().map(matrix_to_spec).collect(),
        }
    }
}

fn number_pair(z: C64) -> Entry {
    Entry::Complex([Scalar::Number(z.re), Scalar::Number(z.im)])
}

pub fn matrix_to_spec(m: &ComplexMatrix) -> MatrixSpec {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&z| number_pair(z)).collect())
        .collect()
}

/// `[re, im]` pairs, row-major.
pub fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

impl StatesFile {
    pub fn ensemble(&self, ev: &Evaluator, dim: usize, tol: f64) -> CliResult<InputEnsemble> {
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let loc = format!("states[{i}]");
                Ok(match s {
                    StateSpec::Pure(v) => PureState::new(ev.vector(v, dim, &loc)?, tol)?.into(),
                    StateSpec::Density(m) => {
                        qzec::DensityOperator::new(ev.matrix(m, dim, &loc)?, tol)?.into()
                    }
                })
            })
            .collect::<CliResult<Vec<InputState>>>()?;
        Ok(match &self.labels {
            Some(labels) => InputEnsemble::with_labels(states, labels.clone())?,
            None => InputEnsemble::new(states)?,
        })
    }
}

impl MeasurementFile {
    pub fn measurement(&self, ev: &Evaluator, dim: usize, tol: f64) -> CliResult<Measurement> {
        match self {
            MeasurementFile::Povm(elements) => {
                let ms = elements
                    .iter()
                    .enumerate()
                    .map(|(k, m)| ev.matrix(m, dim, &format!("povm[{k}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(Measurement::povm(ms, tol)?)
            }
            MeasurementFile::Basis(vectors) => {
                let cols = vectors
                    .iter()
                    .enumerate()
                    .map(|(k, v)| ev.vector(v, dim, &format!("basis[{k}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(Measurement::from_basis(
                    &ComplexMatrix::from_columns(&cols)?,
                    tol,
                )?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions_and_pairs() {
        let text = br#"{"dimension": 1, "parameters": {"a": {"value": 0.6}},
                        "kraus": [[["a"]], [[[0, "sqrt(1 - a^2)"]]]]}"#;
        let spec = ChannelSpecFile::parse(text, "t").unwrap();
        let ops = spec.operators().unwrap();
        assert!((ops[0][(0, 0)].re - 0.6).abs() < 1e-15);
        assert!((ops[1][(0, 0)].im - 0.8).abs() < 1e-15);
        assert!(spec.build(1e-10).is_ok());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err =
            ChannelSpecFile::parse(b"{\n  \"dimension\": 2,\n  \"kraus\": [oops]\n}", "f.json")
                .unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (3, 13)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ranges_are_enforced() {
        let p = Parameter {
            value: 0.0,
            min: Some(0.0),
            max: Some(0.5),
            open: true,
        };
        assert!(p.check("alpha").is_err());
        let p = Parameter { open: false, ..p };
        assert!(p.check("alpha").is_ok());
    }

    #[test]
    fn bad_expressions_are_reported() {
        let ev = Evaluator::new(&BTreeMap::new());
        assert!(ev.scalar(&Scalar::Expr("sqrt(-1)".into()), "x").is_err());
        assert!(ev.scalar(&Scalar::Expr("beta".into()), "x").is_err());
        assert_eq!(ev.scalar(&Scalar::Expr("1/2".into()), "x").unwrap(), 0.0);
    }
}
