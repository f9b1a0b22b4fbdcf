//! Seeded generators for random unitaries, channels and states. Used by the
//! search strategies and by the property suites.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{DensityOperator, KrausChannel, PureState};
use crate::numerics::{orthonormalize, ComplexMatrix, C64};

pub use rand_chacha::ChaCha8Rng as SeededRng;

pub fn seeded(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_vec(rows, cols, gaussian_vector(rng, rows * cols))
        .expect("shape matches data length")
}

/// Unitary from Gram-Schmidt on Gaussian columns (QR with positive R diagonal).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    loop {
        let g = gaussian_matrix(rng, dim, dim);
        if let Ok(q) = orthonormalize(&g.columns(), 1e-300) {
            return q;
        }
    }
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    gaussian_matrix(rng, dim, dim).hermitian_part()
}

/// Random channel with `kraus` operators: the first `dim` columns of a random
/// `dim·kraus` unitary form an isometry, cut into `kraus` row blocks.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, dim: usize, kraus: usize) -> KrausChannel {
    let u = random_unitary(rng, dim * kraus);
    let ops = (0..kraus)
        .map(|a| {
            let mut e = ComplexMatrix::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    e[(i, j)] = u[(a * dim + i, j)];
                }
            }
            e
        })
        .collect();
    KrausChannel::new(ops, 1e-8).expect("isometry blocks are complete")
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    let v = gaussian_vector(rng, dim);
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// Random density operator of the given rank (`G G^dagger / tr`).
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityOperator {
    let g = gaussian_matrix(rng, dim, rank.max(1));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m.scale_real(1.0 / tr), 1e-8).expect("G G^dagger is a valid state")
}
