//! Full `2^N` Hilbert-space layer for small `N`, used to certify the
//! Dicke-basis results: dense states, channel oracles, Young-tableau
//! combinatorics, the sequentially coupled (Schur) basis, symmetrization,
//! Knill–Laflamme checks and the general recovery procedure.
//!
//! Qubit `q` (0-based) is bit `q` of a basis index; `|1⟩` counts towards the
//! Dicke weight.

mod kl;
mod schur;
mod young;

pub use kl::{
    apply_kraus, apply_pauli, general_qec_small_n, kl_check, paulis_up_to_weight, BlockReport, KlReport, KrausOp,
    Pauli, PauliString, QecReport,
};
pub use schur::{
    j2_apply, j2_outcomes, j2_prefix_matrix, j2_spectral_projector, permute_matrix, schur_basis, sequential_j2_measure,
    symmetrize_channel, tableau_project, J2Outcome, SchurBasis, SchurBlock,
};
pub use young::{diagrams, enumerate_syt, enumerate_syt_brute_force, StandardTableau, YoungDiagram2};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, precondition, Result};
use crate::noise::{ADOutcome, Decomposition, DeletionOutcome};
use crate::symcore::{binom_f64, SymState};

/// Largest supported register.
pub const MAX_QUBITS: usize = 12;

/// Dense complex operator on `2^N` dimensions.
pub type DenseOp = DMatrix<Complex64>;

pub(crate) fn check_size(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(precondition(format!("{n} qubits exceeds the dense limit of {cap}")));
    }
    Ok(())
}

/// Normalized pure state on the full register.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// Wraps and validates an amplitude vector of length `2^n`.
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n, MAX_QUBITS)?;
        if amps.len() != 1 << n {
            return Err(invalid(format!("expected {} amplitudes, got {}", 1usize << n, amps.len())));
        }
        let s = Self { n, amps };
        if (s.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("state not normalized: norm² = {}", s.norm_sqr())));
        }
        Ok(s)
    }

    /// Normalizes a nonzero vector.
    pub fn from_unnormalized(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let nrm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if nrm == 0.0 {
            return Err(invalid("zero vector cannot be normalized"));
        }
        amps.iter_mut().for_each(|a| *a /= nrm);
        Self::new(n, amps)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_size(n, MAX_QUBITS)?;
        let mut amps = vec![Complex64::default(); 1 << n];
        *amps.get_mut(index).ok_or_else(|| invalid("basis index out of range"))? = Complex64::from(1.0);
        Ok(Self { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DenseState) -> Complex64 {
        inner(&self.amps, &other.amps)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DenseOp {
        outer(&self.amps, &self.amps)
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn outer(a: &[Complex64], b: &[Complex64]) -> DenseOp {
    DenseOp::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
}

/// Embeds a symmetric state: `a_w / √C(N,w)` on every string of weight `w`.
pub fn embed(state: &SymState) -> Result<DenseState> {
    let n = state.n_qubits() as usize;
    check_size(n, MAX_QUBITS)?;
    let scale: Vec<f64> = (0..=n).map(|w| binom_f64(n as u64, w as u64).sqrt()).collect();
    let amps = (0..1usize << n).map(|x| state.amp(x.count_ones() as u64) / scale[x.count_ones() as usize]).collect();
    Ok(DenseState { n, amps })
}

/// Traces out the listed qubits of an `n`-qubit operator. The remaining
/// qubits keep their relative order.
pub fn partial_trace(rho: &DenseOp, n: usize, traced: &[usize]) -> Result<DenseOp> {
    check_size(n, MAX_QUBITS)?;
    if traced.iter().any(|&q| q >= n) {
        return Err(invalid("traced qubit out of range"));
    }
    let kept: Vec<usize> = (0..n).filter(|q| !traced.contains(q)).collect();
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let compose = |k: usize, t: usize| {
        let mut x = 0usize;
        for (i, &q) in kept.iter().enumerate() {
            x |= ((k >> i) & 1) << q;
        }
        for (i, &q) in traced.iter().enumerate() {
            x |= ((t >> i) & 1) << q;
        }
        x
    };
    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    Ok(DenseOp::from_fn(dk, dk, |a, b| (0..dt).map(|t| rho[(compose(a, t), compose(b, t))]).sum()))
}

/// Dense operator of a list of weighted symmetric branches.
fn mixture(n: usize, branches: impl Iterator<Item = (f64, DenseState)>) -> DenseOp {
    let mut rho = DenseOp::zeros(1 << n, 1 << n);
    for (p, s) in branches {
        rho += s.density() * Complex64::from(p);
    }
    rho
}

/// Reassembles the deletion channel output on the `N − t` remaining qubits.
pub fn deletion_density(decomp: &Decomposition<DeletionOutcome>, n_remaining: usize) -> Result<DenseOp> {
    let mut branches = Vec::new();
    for o in &decomp.outcomes {
        branches.push((o.weight, embed(&o.state)?));
    }
    Ok(mixture(n_remaining, branches.into_iter()))
}

/// Reassembles the amplitude-damping output on all `N` qubits: each branch
/// `|φ_x⟩` is padded with `x` qubits in `|0⟩`, averaged over the
/// `C(N, x)` insertion sets.
pub fn ad_density(decomp: &Decomposition<ADOutcome>, n: usize) -> Result<DenseOp> {
    check_size(n, MAX_QUBITS)?;
    let mut rho = DenseOp::zeros(1 << n, 1 << n);
    for o in &decomp.outcomes {
        let x = o.damped as usize;
        let phi = embed(&o.state)?;
        let sets: Vec<usize> = (0..1usize << n).filter(|m| m.count_ones() as usize == x).collect();
        let p = o.weight / sets.len() as f64;
        for mask in sets {
            let free: Vec<usize> = (0..n).filter(|q| mask & (1 << q) == 0).collect();
            let mut v = vec![Complex64::default(); 1 << n];
            for (k, a) in phi.amps().iter().enumerate() {
                let mut idx = 0usize;
                for (i, &q) in free.iter().enumerate() {
                    idx |= ((k >> i) & 1) << q;
                }
                v[idx] = *a;
            }
            rho += outer(&v, &v) * Complex64::from(p);
        }
    }
    Ok(rho)
}

/// Brute-force amplitude damping of a pure state: sums the outer products
/// of all `2^N` Kraus strings `A_{s_1} ⊗ … ⊗ A_{s_N}` with
/// `A_0 = |0⟩⟨0| + √(1−γ)|1⟩⟨1|` and `A_1 = √γ |0⟩⟨1|`.
pub fn amplitude_damp_dense(state: &DenseState, gamma: f64) -> Result<DenseOp> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(invalid("damping probability must lie in [0, 1]"));
    }
    let n = state.n_qubits();
    let dim = 1usize << n;
    let mut rho = DenseOp::zeros(dim, dim);
    for string in 0..dim {
        let mut v = state.amps().to_vec();
        for q in 0..n {
            let bit = 1usize << q;
            let mut next = vec![Complex64::default(); dim];
            for (x, a) in v.iter().enumerate() {
                let one = x & bit != 0;
                match (string & bit != 0, one) {
                    (false, false) => next[x] += a,
                    (false, true) => next[x] += a * (1.0 - gamma).sqrt(),
                    (true, true) => next[x ^ bit] += a * gamma.sqrt(),
                    (true, false) => {}
                }
            }
            v = next;
        }
        rho += outer(&v, &v);
    }
    Ok(rho)
}

/// `½‖a − b‖₁` for Hermitian operators.
pub fn trace_distance(a: &DenseOp, b: &DenseOp) -> f64 {
    let d = a - b;
    let herm = (&d + d.adjoint()) * Complex64::from(0.5);
    0.5 * herm.symmetric_eigenvalues().iter().map(|l| l.abs()).sum::<f64>()
}
