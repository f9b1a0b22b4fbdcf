//! Lovász theta by a first-order SDP method.
//!
//! θ(G) = max ⟨J, X⟩  s.t.  tr X = 1,  X_ij = 0 for every edge {i, j} of G,  X ⪰ 0.
//!
//! Solved as `min ⟨C, X⟩` with `C = −J` by the alternating direction
//! augmented Lagrangian method on the dual: each sweep projects onto the
//! affine constraints (closed form, since the constraint matrices are
//! mutually orthogonal) and then onto the PSD cone by eigenvalue clipping.
//! The primal iterate is the multiplier of the cone projection.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numerics::{hermitian_eig, ComplexMatrix, C64};

pub const DEFAULT_THETA_TOL: f64 = 1e-5;
pub const MAX_THETA_VERTICES: usize = 64;
const ITERATION_CAP: usize = 50_000;
const RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaResult {
    pub theta: f64,
    pub iterations: usize,
    /// Relative residual of the affine constraints at the returned iterate.
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
}

struct Constraints {
    n: usize,
    edges: Vec<(usize, usize)>,
}

const SQRT_2: f64 = std::f64::consts::SQRT_2;

impl Constraints {
    /// `A(X) = [tr X, √2·X_e for each edge]`.
    fn apply(&self, x: &ComplexMatrix) -> Vec<f64> {
        let mut out = Vec::with_capacity(1 + self.edges.len());
        out.push(x.trace().re);
        out.extend(self.edges.iter().map(|&(i, j)| SQRT_2 * x[(i, j)].re));
        out
    }

    /// `A*(y) = y_0·I + Σ y_e (E_ij + E_ji)/√2`.
    fn adjoint(&self, y: &[f64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(self.n).scale_real(y[0]);
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            let v = C64::new(y[k + 1] / SQRT_2, 0.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }

    /// Diagonal of `A A*`.
    fn gram(&self, k: usize) -> f64 {
        if k == 0 {
            self.n as f64
        } else {
            1.0
        }
    }
}

fn inner_re(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x.conj() * y).re)
        .sum()
}

/// θ of `graph` to within roughly `tol`. `graph` is the confusability graph:
/// its edges are the pairs that may be confused.
pub fn lovasz_theta(graph: &Graph, tol: f64) -> Result<ThetaResult> {
    let n = graph.vertex_count();
    if n > MAX_THETA_VERTICES {
        return Err(Error::InvalidArgument(format!(
            "theta is limited to {MAX_THETA_VERTICES} vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(ThetaResult {
            theta: 0.0,
            iterations: 0,
            primal_residual: 0.0,
            dual_residual: 0.0,
            gap: 0.0,
        });
    }
    let cons = Constraints {
        n,
        edges: graph.edges(),
    };
    let m = 1 + cons.edges.len();
    let mut b = vec![0.0; m];
    b[0] = 1.0;
    let c = {
        let mut c = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                c[(i, j)] = C64::new(-1.0, 0.0);
            }
        }
        c
    };
    let c_norm = c.frobenius_norm();
    let target = (0.1 * tol).min(RESIDUAL_TOL);

    let mut x = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
    let mut s = ComplexMatrix::zeros(n, n);
    let mut mu = 1.0;
    let mut y = vec![0.0; m];
    let mut last = (f64::INFINITY, f64::INFINITY, f64::INFINITY);

    for iter in 1..=ITERATION_CAP {
        let ax = cons.apply(&x);
        let a_sc = cons.apply(&(&s - &c));
        for k in 0..m {
            y[k] = -(mu * (ax[k] - b[k]) + a_sc[k]) / cons.gram(k);
        }
        let v = &(&c - &cons.adjoint(&y)) - &x.scale_real(mu);
        let eig = hermitian_eig(&v.hermitian_part(), 1e-6)?;
        s = eig.map_spectrum(|l| C64::new(l.max(0.0), 0.0));
        x = eig.map_spectrum(|l| C64::new((-l).max(0.0) / mu, 0.0));

        let ax = cons.apply(&x);
        let primal = ax
            .iter()
            .zip(&b)
            .map(|(a, bb)| (a - bb).powi(2))
            .sum::<f64>()
            .sqrt()
            / 2.0;
        let dual = (&(&c - &cons.adjoint(&y)) - &s).frobenius_norm() / (1.0 + c_norm);
        let pobj = inner_re(&c, &x);
        let dobj = y[0];
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        last = (primal, dual, gap);
        if primal < target && dual < target && gap < target {
            // X / tr X satisfies the trace constraint exactly
            return Ok(ThetaResult {
                theta: -pobj / ax[0],
                iterations: iter,
                primal_residual: primal,
                dual_residual: dual,
                gap,
            });
        }
        // keep primal and dual infeasibility balanced
        if iter % 20 == 0 {
            if primal > 5.0 * dual {
                mu = (mu * 1.6).min(1e4);
            } else if dual > 5.0 * primal {
                mu = (mu / 1.6).max(1e-4);
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: ITERATION_CAP,
        residual: last.0.max(last.1).max(last.2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form for odd cycles.
    fn odd_cycle_theta(n: usize) -> f64 {
        let c = (std::f64::consts::PI / n as f64).cos();
        n as f64 * c / (1.0 + c)
    }

    #[test]
    fn empty_graph() {
        let t = lovasz_theta(&Graph::empty(4), DEFAULT_THETA_TOL).unwrap();
        assert!((t.theta - 4.0).abs() < 1e-4, "{t:?}");
    }

    #[test]
    fn complete_graph() {
        let t = lovasz_theta(&Graph::complete(5), DEFAULT_THETA_TOL).unwrap();
        assert!((t.theta - 1.0).abs() < 1e-4, "{t:?}");
    }

    #[test]
    fn odd_cycles_match_closed_form() {
        for n in [5, 7] {
            let t = lovasz_theta(&Graph::cycle(n), DEFAULT_THETA_TOL).unwrap();
            assert!((t.theta - odd_cycle_theta(n)).abs() < 1e-4, "C{n}: {t:?}");
        }
        assert!((odd_cycle_theta(5) - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn perfect_graphs_equal_independence_number() {
        // a tree on five vertices with α = 3; once stalled with μ at its floor
        let g = Graph::from_edges(5, &[(0, 1), (0, 3), (0, 4), (1, 2)]).unwrap();
        let t = lovasz_theta(&g, DEFAULT_THETA_TOL).unwrap();
        assert!((t.theta - 3.0).abs() < 1e-4, "{t:?}");
        assert!(t.iterations < 1_000);
    }

    #[test]
    fn rejects_large_graphs() {
        assert!(lovasz_theta(&Graph::empty(65), DEFAULT_THETA_TOL).is_err());
    }
}
