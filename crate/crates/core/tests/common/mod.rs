//! Shared helpers for the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symsense::fullspace::{DenseOp, DenseState};
use symsense::symcore::SymState;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-like random symmetric state: i.i.d. complex Gaussian-ish amplitudes.
pub fn random_sym_state<R: Rng>(n: u64, rng: &mut R) -> SymState {
    let amps = (0..=n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    SymState::new(amps).unwrap().normalized().unwrap()
}

pub fn random_dense_state<R: Rng>(n: usize, rng: &mut R) -> DenseState {
    let amps = (0..1usize << n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    DenseState::from_unnormalized(n, amps).unwrap()
}

/// Dense `exp(-iθ J^z)` acting on a full-register state, with `J^z = Σ σ^z/2`
/// and `|0⟩` as spin up.
pub fn dense_signal(state: &DenseState, theta: f64) -> DenseState {
    let n = state.n_qubits();
    let amps = state
        .amps()
        .iter()
        .enumerate()
        .map(|(x, a)| {
            let jz = n as f64 / 2.0 - x.count_ones() as f64;
            a * Complex64::from_polar(1.0, -theta * jz)
        })
        .collect();
    DenseState::new(n, amps).unwrap()
}

/// QFI of a dense operator under `exp(-iθJ^z)`, from its spectral decomposition.
pub fn dense_qfi(rho: &DenseOp, n: usize) -> f64 {
    let dim = rho.nrows();
    let herm = (rho + rho.adjoint()) * Complex64::from(0.5);
    let eig = herm.symmetric_eigen();
    let jz: Vec<f64> = (0..dim).map(|x| n as f64 / 2.0 - x.count_ones() as f64).collect();
    let v = &eig.eigenvectors;
    let mut f = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let (li, lj) = (eig.eigenvalues[i].max(0.0), eig.eigenvalues[j].max(0.0));
            if li + lj <= 1e-13 {
                continue;
            }
            let elem: Complex64 = (0..dim).map(|x| v[(x, i)].conj() * jz[x] * v[(x, j)]).sum();
            f += 2.0 * (li - lj).powi(2) / (li + lj) * elem.norm_sqr();
        }
    }
    f
}
