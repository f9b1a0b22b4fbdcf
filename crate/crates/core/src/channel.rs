//! Kraus-operator channels, states and measurements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, inner, norm, ComplexMatrix, C64};

/// Probabilities more negative than this are reported as errors, not clamped.
pub const MAX_CLAMP: f64 = 1e-6;

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A quantum channel `ρ ↦ Σ_a E_a ρ E_a^dagger` given by its Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates a Kraus set: non-empty, square, equal dimensions, and
    /// `||Σ E^dagger E − I||_F ≤ tol`.
    pub fn new(operators: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let first = operators.first().ok_or(Error::EmptyChannel)?;
        let dim = first.rows();
        for op in &operators {
            if !op.is_square() {
                return Err(Error::NotSquare {
                    rows: op.rows(),
                    cols: op.cols(),
                });
            }
            check_dim(dim, op.rows())?;
        }
        let residual = completeness_residual(&operators);
        if residual > tol {
            return Err(Error::NotTracePreserving { residual, tol });
        }
        Ok(Self { dim, operators })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// The channel sending every input to `I/d`, with Kraus operators `|i><j|/√d`.
    pub fn completely_mixing(dim: usize) -> Self {
        let s = 1.0 / (dim as f64).sqrt();
        let mut operators = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut e = ComplexMatrix::zeros(dim, dim);
                e[(i, j)] = C64::new(s, 0.0);
                operators.push(e);
            }
        }
        Self { dim, operators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `||Σ E^dagger E − I||_F`.
    pub fn completeness_residual(&self) -> f64 {
        completeness_residual(&self.operators)
    }

    /// Applies the channel to a raw matrix without state validation.
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.dim, rho.rows())?;
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for e in &self.operators {
            let term = &(e * rho) * &e.adjoint();
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let out = self.apply_matrix(rho.matrix())?;
        Ok(DensityOperator {
            matrix: out.hermitian_part(),
        })
    }

    /// Channel acting on `n` independent uses: Kraus set `{E_a ⊗ E_b ⊗ ...}`.
    pub fn tensor_power(&self, n: usize) -> Self {
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.tensor(self);
        }
        acc
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let operators = self
            .operators
            .iter()
            .flat_map(|a| other.operators.iter().map(move |b| a.kron(b)))
            .collect();
        Self {
            dim: self.dim * other.dim,
            operators,
        }
    }
}

fn completeness_residual(operators: &[ComplexMatrix]) -> f64 {
    let dim = operators[0].rows();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for e in operators {
        sum = &sum + &(&e.adjoint() * e);
    }
    (&sum - &ComplexMatrix::identity(dim)).frobenius_norm()
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let eig = hermitian_eig(&matrix, tol)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::NotDensityOperator(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::NotDensityOperator(format!(
                "trace {:.12}{:+.3e}i",
                tr.re, tr.im
            )));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Convex combination `w·self + (1−w)·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self {
            matrix: &self.matrix.scale_real(w) + &other.matrix.scale_real(1.0 - w),
        })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// Orthonormal eigenvectors with eigenvalue above `cutoff`.
    pub fn support_vectors(&self, cutoff: f64) -> Result<Vec<Vec<C64>>> {
        let eig = hermitian_eig(&self.matrix, crate::numerics::DEFAULT_TOL)?;
        Ok(eig
            .values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > cutoff)
            .map(|(k, _)| eig.vector(k))
            .collect())
    }
}

impl From<&PureState> for DensityOperator {
    fn from(v: &PureState) -> Self {
        Self {
            matrix: ComplexMatrix::outer(&v.amplitudes),
        }
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm; fails only for the zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / n).collect(),
        })
    }

    /// Computational basis vector `|e_index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from(self)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self { amplitudes }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurementKind {
    GeneralPovm,
    Projective,
}

/// A POVM `{M_j}`; projective when the elements are orthogonal projectors.
#[derive(Debug, Clone)]
pub struct Measurement {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    kind: MeasurementKind,
}

impl Measurement {
    /// General POVM: every element PSD and `Σ M_j = I`, within `tol`.
    pub fn povm(elements: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidMeasurement("no elements".into()))?;
        let dim = first.rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (j, m) in elements.iter().enumerate() {
            if !m.is_square() {
                return Err(Error::NotSquare {
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            check_dim(dim, m.rows())?;
            let eig = hermitian_eig(m, tol)?;
            let min = eig.values.last().copied().unwrap_or(0.0);
            if min < -tol {
                return Err(Error::InvalidMeasurement(format!(
                    "element {j} has negative eigenvalue {min:.3e}"
                )));
            }
            sum = &sum + m;
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > tol {
            return Err(Error::InvalidMeasurement(format!(
                "elements sum to identity only within {dev:.3e}"
            )));
        }
        Ok(Self {
            dim,
            elements,
            kind: MeasurementKind::GeneralPovm,
        })
    }

    /// Projective measurement: a POVM whose elements are idempotent and
    /// mutually orthogonal.
    pub fn projective(elements: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let mut m = Self::povm(elements, tol)?;
        for (j, p) in m.elements.iter().enumerate() {
            if (p * p).max_abs_diff(p) > tol {
                return Err(Error::InvalidMeasurement(format!(
                    "element {j} is not idempotent"
                )));
            }
            for (k, q) in m.elements.iter().enumerate().skip(j + 1) {
                if (p * q).max_abs_diff(&ComplexMatrix::zeros(m.dim, m.dim)) > tol {
                    return Err(Error::InvalidMeasurement(format!(
                        "elements {j} and {k} are not orthogonal"
                    )));
                }
            }
        }
        m.kind = MeasurementKind::Projective;
        Ok(m)
    }

    pub fn computational(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|i| {
                let mut p = ComplexMatrix::zeros(dim, dim);
                p[(i, i)] = C64::new(1.0, 0.0);
                p
            })
            .collect();
        Self {
            dim,
            elements,
            kind: MeasurementKind::Projective,
        }
    }

    /// Rank-one projectors onto the columns of a unitary.
    pub fn from_basis(basis: &ComplexMatrix, tol: f64) -> Result<Self> {
        let elements = basis
            .columns()
            .iter()
            .map(|c| ComplexMatrix::outer(c))
            .collect();
        Self::projective(elements, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    /// Product measurement `{M_j ⊗ N_k}` with outcome index `j·|N| + k`.
    pub fn tensor(&self, other: &Self) -> Self {
        let elements = self
            .elements
            .iter()
            .flat_map(|a| other.elements.iter().map(move |b| a.kron(b)))
            .collect();
        let kind = if self.kind == MeasurementKind::Projective
            && other.kind == MeasurementKind::Projective
        {
            MeasurementKind::Projective
        } else {
            MeasurementKind::GeneralPovm
        };
        Self {
            dim: self.dim * other.dim,
            elements,
            kind,
        }
    }

    pub fn tensor_power(&self, n: usize) -> Self {
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.tensor(self);
        }
        acc
    }
}

/// Outcome probabilities `p(k) = tr(E(ρ) M_k)` plus the number of entries
/// that were clamped from tiny negative round-off to zero.
pub(crate) fn outcome_probabilities(
    channel: &KrausChannel,
    rho: &ComplexMatrix,
    meas: &Measurement,
) -> Result<(Vec<f64>, usize)> {
    check_dim(channel.dim(), rho.rows())?;
    check_dim(channel.dim(), meas.dim())?;
    let sigma = channel.apply_matrix(rho)?;
    let mut clamped = 0;
    let probs = meas
        .elements
        .iter()
        .map(|m| {
            let p = sigma.trace_product(m).re;
            if p < -MAX_CLAMP {
                Err(Error::NegativeProbability { value: p })
            } else if p < 0.0 {
                clamped += 1;
                Ok(0.0)
            } else {
                Ok(p.min(1.0))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((probs, clamped))
}

/// One row of the classical transition matrix: `p(k|ρ) = tr(E(ρ) M_k)`.
pub fn transition_row(
    channel: &KrausChannel,
    rho: &DensityOperator,
    meas: &Measurement,
) -> Result<Vec<f64>> {
    outcome_probabilities(channel, rho.matrix(), meas).map(|(p, _)| p)
}

/// Projector onto the span of eigenvectors of `sigma` with eigenvalue above `cutoff`.
pub fn support_projector(sigma: &DensityOperator, cutoff: f64) -> Result<ComplexMatrix> {
    projector_onto(&sigma.support_vectors(cutoff)?, sigma.dim())
}

pub(crate) fn projector_onto(vectors: &[Vec<C64>], dim: usize) -> Result<ComplexMatrix> {
    let mut p = ComplexMatrix::zeros(dim, dim);
    for v in vectors {
        p = &p + &ComplexMatrix::outer(v);
    }
    Ok(p)
}

/// Merges outcomes: element `g` of the result is `Σ_{j ∈ groups[g]} M_j`.
pub fn coarse_grain(meas: &Measurement, groups: &[Vec<usize>]) -> Result<Measurement> {
    let m = meas.outcomes();
    let mut seen = vec![false; m];
    for group in groups {
        if group.is_empty() {
            return Err(Error::NotAPartition {
                outcomes: m,
                reason: "empty group".into(),
            });
        }
        for &j in group {
            if j >= m {
                return Err(Error::NotAPartition {
                    outcomes: m,
                    reason: format!("index {j} out of range"),
                });
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::NotAPartition {
                    outcomes: m,
                    reason: format!("index {j} appears twice"),
                });
            }
        }
    }
    if let Some(j) = seen.iter().position(|s| !s) {
        return Err(Error::NotAPartition {
            outcomes: m,
            reason: format!("index {j} is not covered"),
        });
    }
    let elements = groups
        .iter()
        .map(|g| {
            g.iter()
                .fold(ComplexMatrix::zeros(meas.dim, meas.dim), |acc, &j| {
                    &acc + &meas.elements[j]
                })
        })
        .collect();
    Ok(Measurement {
        dim: meas.dim,
        elements,
        kind: meas.kind,
    })
}

/// The family of 5-dimensional channels whose canonical characteristic graph
/// is the pentagon. Requires `0 < alpha, beta < 0.5`: on the boundary some
/// Kraus entries vanish and the column supports, hence the graph, change.
pub fn pentagon(alpha: f64, beta: f64) -> Result<KrausChannel> {
    for (name, value) in [("alpha", alpha), ("beta", beta)] {
        if !(value > 0.0 && value < 0.5) {
            return Err(Error::ParameterOutOfRange {
                name: name.into(),
                value,
                range: "(0, 0.5)".into(),
            });
        }
    }
    let (a, b) = (alpha, beta);
    let e1 = ComplexMatrix::from_real_rows(&[
        vec![a, 0.0, 0.0, 0.0, b],
        vec![a, b, 0.0, 0.0, 0.0],
        vec![0.0, a, b, 0.0, 0.0],
        vec![0.0, 0.0, a, b, 0.0],
        vec![0.0, 0.0, 0.0, a, b],
    ])?;
    let e2 = ComplexMatrix::from_real_rows(&[
        vec![a, 0.0, 0.0, 0.0, -b],
        vec![a, -b, 0.0, 0.0, 0.0],
        vec![0.0, a, -b, 0.0, 0.0],
        vec![0.0, 0.0, a, -b, 0.0],
        vec![0.0, 0.0, 0.0, a, -b],
    ])?;
    let mid = (1.0 - 2.0 * a * a - 2.0 * b * b).sqrt();
    let e3 = ComplexMatrix::diagonal(&[
        (1.0 - 4.0 * a * a).sqrt(),
        mid,
        mid,
        mid,
        (1.0 - 4.0 * b * b).sqrt(),
    ]);
    KrausChannel::new(vec![e1, e2, e3], 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::trace_abs_half;
    use crate::random::{random_channel, random_density, seeded};

    fn basis_density(dim: usize, i: usize) -> DensityOperator {
        PureState::basis(dim, i).density()
    }

    #[test]
    fn validate_examples() {
        assert!(KrausChannel::new(vec![ComplexMatrix::identity(3)], 1e-8).is_ok());
        assert!(pentagon(0.35, 0.35).is_ok());
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        match KrausChannel::new(vec![half], 1e-8) {
            Err(Error::NotTracePreserving { residual, .. }) => {
                // ||0.25 I - I||_F = 0.75·√2
                assert!((residual - 0.75 * 2f64.sqrt()).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            KrausChannel::new(
                vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)],
                1e-8
            ),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            KrausChannel::new(vec![], 1e-8),
            Err(Error::EmptyChannel)
        ));
    }

    #[test]
    fn identity_channel_is_noop() {
        let mut rng = seeded(3);
        let rho = random_density(&mut rng, 4, 2);
        let out = KrausChannel::identity(4).apply(&rho).unwrap();
        assert!(out.matrix().approx_eq(rho.matrix(), 1e-15));
    }

    #[test]
    fn pentagon_output_support_of_first_input() {
        let ch = pentagon(0.35, 0.35).unwrap();
        let out = ch.apply(&basis_density(5, 0)).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                if i >= 2 || j >= 2 {
                    assert_eq!(out.matrix()[(i, j)], C64::new(0.0, 0.0));
                }
            }
        }
        // 2α²|e1+e2><e1+e2| + (1-4α²)|e1><e1|
        assert!((out.matrix()[(0, 0)].re - (1.0 - 2.0 * 0.35 * 0.35)).abs() < 1e-15);
        assert!((out.matrix()[(0, 1)].re - 2.0 * 0.35 * 0.35).abs() < 1e-15);
    }

    #[test]
    fn apply_is_linear() {
        let mut rng = seeded(11);
        let ch = random_channel(&mut rng, 3, 2);
        let r1 = random_density(&mut rng, 3, 3);
        let r2 = random_density(&mut rng, 3, 1);
        let lhs = ch.apply(&r1.mix(&r2, 0.5).unwrap()).unwrap();
        let rhs = ch
            .apply(&r1)
            .unwrap()
            .mix(&ch.apply(&r2).unwrap(), 0.5)
            .unwrap();
        assert!(lhs.matrix().approx_eq(rhs.matrix(), 1e-9));
    }

    #[test]
    fn transition_row_examples() {
        let ch = pentagon(0.35, 0.35).unwrap();
        let row =
            transition_row(&ch, &basis_density(5, 0), &Measurement::computational(5)).unwrap();
        let expected = [0.755, 0.245, 0.0, 0.0, 0.0];
        for (p, e) in row.iter().zip(expected) {
            assert!((p - e).abs() < 1e-12, "{row:?}");
        }

        let row = transition_row(
            &KrausChannel::identity(3),
            &basis_density(3, 1),
            &Measurement::computational(3),
        )
        .unwrap();
        assert_eq!(row, vec![0.0, 1.0, 0.0]);

        let mut rng = seeded(5);
        for _ in 0..20 {
            let ch = random_channel(&mut rng, 4, 3);
            let rho = random_density(&mut rng, 4, 2);
            let row = transition_row(&ch, &rho, &Measurement::computational(4)).unwrap();
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn transition_row_dimension_mismatch() {
        let err = transition_row(
            &KrausChannel::identity(3),
            &basis_density(2, 0),
            &Measurement::computational(3),
        );
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn support_projector_examples() {
        let p = support_projector(&basis_density(3, 0), 1e-7).unwrap();
        assert!(p.approx_eq(&ComplexMatrix::diagonal(&[1.0, 0.0, 0.0]), 1e-12));

        let half = DensityOperator::new(ComplexMatrix::diagonal(&[0.5, 0.5, 0.0]), 1e-8).unwrap();
        let p = support_projector(&half, 1e-7).unwrap();
        assert!(p.approx_eq(&ComplexMatrix::diagonal(&[1.0, 1.0, 0.0]), 1e-12));

        let ch = pentagon(0.35, 0.35).unwrap();
        let out = ch.apply(&basis_density(5, 2)).unwrap();
        let p = support_projector(&out, 1e-7).unwrap();
        assert!(p.approx_eq(&ComplexMatrix::diagonal(&[0.0, 0.0, 1.0, 1.0, 0.0]), 1e-10));
    }

    #[test]
    fn coarse_grain_examples() {
        let comp = Measurement::computational(5);
        let same = coarse_grain(&comp, &[vec![0], vec![1], vec![2], vec![3], vec![4]]).unwrap();
        for (a, b) in same.elements().iter().zip(comp.elements()) {
            assert_eq!(a, b);
        }

        let two = coarse_grain(&comp, &[vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert_eq!(two.kind(), MeasurementKind::Projective);
        assert_eq!(
            two.elements()[0],
            ComplexMatrix::diagonal(&[1.0, 1.0, 0.0, 0.0, 0.0])
        );
        assert_eq!(
            two.elements()[1],
            ComplexMatrix::diagonal(&[0.0, 0.0, 1.0, 1.0, 1.0])
        );

        // Outcome sets of v1 and v3 are {0,1} and {2,3}; coarse-graining
        // into M1 = A_1 and M2 = rest separates them perfectly.
        let ch = pentagon(0.35, 0.35).unwrap();
        let m = coarse_grain(&comp, &[vec![0, 1], vec![2, 3, 4]]).unwrap();
        let r1 = transition_row(&ch, &basis_density(5, 0), &m).unwrap();
        let r3 = transition_row(&ch, &basis_density(5, 2), &m).unwrap();
        assert!((r1[0] - 1.0).abs() < 1e-12 && r1[1].abs() < 1e-12);
        assert!(r3[0].abs() < 1e-12 && (r3[1] - 1.0).abs() < 1e-12);

        for bad in [
            vec![vec![0, 1], vec![1, 2, 3, 4]],
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0, 1, 2, 3, 4, 5]],
        ] {
            assert!(matches!(
                coarse_grain(&comp, &bad),
                Err(Error::NotAPartition { .. })
            ));
        }
    }

    #[test]
    fn measurement_validation() {
        let bad = vec![
            ComplexMatrix::diagonal(&[1.0, 0.0]),
            ComplexMatrix::diagonal(&[0.0, 0.5]),
        ];
        assert!(Measurement::povm(bad, 1e-8).is_err());
        let trine_like = vec![
            ComplexMatrix::diagonal(&[0.5, 0.5]),
            ComplexMatrix::diagonal(&[0.5, 0.5]),
        ];
        assert!(Measurement::povm(trine_like.clone(), 1e-8).is_ok());
        assert!(Measurement::projective(trine_like, 1e-8).is_err());
    }

    #[test]
    fn pentagon_rejects_boundary() {
        assert!(matches!(
            pentagon(0.0, 0.35),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(pentagon(0.35, 0.5).is_err());
        assert!(pentagon(0.1, 0.4).is_ok());
    }

    #[test]
    fn trace_distance_contracts_on_a_sample() {
        let mut rng = seeded(7);
        let ch = random_channel(&mut rng, 3, 2);
        let a = random_density(&mut rng, 3, 3);
        let b = random_density(&mut rng, 3, 1);
        let before = trace_abs_half(a.matrix(), b.matrix()).unwrap();
        let after = trace_abs_half(
            ch.apply(&a).unwrap().matrix(),
            ch.apply(&b).unwrap().matrix(),
        )
        .unwrap();
        assert!(after <= before + 1e-9);
    }
}
