//! Symmetric pure states in the Dicke basis and mixtures of them.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, SymError};

/// Pure symmetric state `Σ_w a_w |D^N_w⟩`, indexed by Dicke weight `w = 0..N`.
///
/// `J^z` acts on `|D^N_w⟩` with eigenvalue `N/2 - w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymState {
    amps: Vec<Complex64>,
}

/// First two weight moments of a state and the resulting `J^z` variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JzMoments {
    /// `Σ |a_w|² w`
    pub m1: f64,
    /// `Σ |a_w|² w²`
    pub m2: f64,
    /// `m2 - m1²`, evaluated in centered form so it never goes negative.
    pub variance: f64,
}

impl SymState {
    /// Wraps an amplitude vector of length `N + 1`. No normalization is applied.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(invalid("amplitude vector must have length N+1 >= 1"));
        }
        Ok(Self { amps })
    }

    /// All-zero (unnormalized) vector on `n` qubits.
    pub fn zeros(n: u64) -> Self {
        Self { amps: vec![Complex64::zero(); n as usize + 1] }
    }

    /// The Dicke state `|D^n_w⟩`.
    pub fn dicke(n: u64, w: u64) -> Result<Self> {
        if w > n {
            return Err(invalid(format!("weight {w} exceeds qubit count {n}")));
        }
        let mut s = Self::zeros(n);
        s.amps[w as usize] = Complex64::from(1.0);
        Ok(s)
    }

    /// Builds the normalized state from `(weight, amplitude)` pairs.
    pub fn from_weights(n: u64, entries: &[(u64, Complex64)]) -> Result<Self> {
        let mut s = Self::zeros(n);
        for &(w, a) in entries {
            if w > n {
                return Err(invalid(format!("weight {w} exceeds qubit count {n}")));
            }
            s.amps[w as usize] += a;
        }
        s.normalized()
    }

    /// Number of qubits `N`.
    pub fn n_qubits(&self) -> u64 {
        self.amps.len() as u64 - 1
    }

    /// Amplitudes indexed by weight.
    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Mutable access to the amplitudes.
    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Amplitude at weight `w`, zero outside `0..=N`.
    pub fn amp(&self, w: u64) -> Complex64 {
        self.amps.get(w as usize).copied().unwrap_or_default()
    }

    /// `Σ |a_w|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `true` when the norm² is within `tol` of one.
    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Copy rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(SymError::ZeroProbability("cannot normalize a zero vector".into()));
        }
        Ok(self.scaled(Complex64::from(1.0 / n2.sqrt())))
    }

    /// Copy multiplied by a scalar.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self { amps: self.amps.iter().map(|a| a * c).collect() }
    }

    /// `a·x + b·y` for states on the same qubit count.
    pub fn combine(a: Complex64, x: &Self, b: Complex64, y: &Self) -> Result<Self> {
        if x.amps.len() != y.amps.len() {
            return Err(invalid("cannot combine states on different qubit counts"));
        }
        Ok(Self { amps: x.amps.iter().zip(&y.amps).map(|(p, q)| a * p + b * q).collect() })
    }

    /// Inner product `⟨self|other⟩`; zero if the qubit counts differ.
    pub fn inner(&self, other: &Self) -> Complex64 {
        if self.amps.len() != other.amps.len() {
            return Complex64::zero();
        }
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Weights with amplitude magnitude above `tol`.
    pub fn support(&self, tol: f64) -> Vec<u64> {
        (0..self.amps.len() as u64).filter(|&w| self.amps[w as usize].norm() > tol).collect()
    }

    /// `J^z` eigenvalue of `|D^n_w⟩`.
    pub fn jz_eigenvalue(n: u64, w: u64) -> f64 {
        n as f64 / 2.0 - w as f64
    }

    /// Applies `exp(-iΔ J^z)`: each amplitude picks up `exp(-iΔ(N/2 - w))`.
    pub fn apply_signal(&self, delta: f64) -> Self {
        let n = self.n_qubits();
        Self {
            amps: self
                .amps
                .iter()
                .enumerate()
                .map(|(w, a)| a * Complex64::from_polar(1.0, -delta * Self::jz_eigenvalue(n, w as u64)))
                .collect(),
        }
    }

    /// `J^z |ψ⟩` (unnormalized).
    pub fn apply_jz(&self) -> Self {
        let n = self.n_qubits();
        Self { amps: self.amps.iter().enumerate().map(|(w, a)| a * Self::jz_eigenvalue(n, w as u64)).collect() }
    }

    /// Weight moments and variance of the (assumed normalized) state.
    pub fn jz_moments(&self) -> JzMoments {
        let p: Vec<f64> = self.amps.iter().map(|a| a.norm_sqr()).collect();
        let m1: f64 = p.iter().enumerate().map(|(w, q)| q * w as f64).sum();
        let m2: f64 = p.iter().enumerate().map(|(w, q)| q * (w as f64).powi(2)).sum();
        let variance = p.iter().enumerate().map(|(w, q)| q * (w as f64 - m1).powi(2)).sum();
        JzMoments { m1, m2, variance }
    }

    /// `⟨J^z⟩ = N/2 - m1`.
    pub fn jz_mean(&self) -> f64 {
        self.n_qubits() as f64 / 2.0 - self.jz_moments().m1
    }
}

/// One component of a [`SymEnsemble`].
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub prob: f64,
    pub state: SymState,
}

/// Probabilistic mixture `Σ p_i |ψ_i⟩⟨ψ_i|` of normalized symmetric states.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEnsemble {
    branches: Vec<Branch>,
}

impl SymEnsemble {
    /// Validates that probabilities sum to one and every branch is normalized.
    pub fn new(branches: Vec<Branch>) -> Result<Self> {
        let total: f64 = branches.iter().map(|b| b.prob).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("branch probabilities sum to {total}, not 1")));
        }
        if let Some(b) = branches.iter().find(|b| !b.state.is_normalized(1e-12)) {
            return Err(invalid(format!("branch state has norm² {}", b.state.norm_sqr())));
        }
        if branches.iter().any(|b| b.prob < 0.0) {
            return Err(invalid("negative branch probability"));
        }
        Ok(Self { branches })
    }

    /// Single pure state as an ensemble.
    pub fn pure(state: SymState) -> Self {
        Self { branches: vec![Branch { prob: 1.0, state }] }
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Density matrix on the Dicke block; every branch must share a qubit count.
    pub fn density_matrix(&self) -> Result<nalgebra::DMatrix<Complex64>> {
        let dim = self.branches.first().map(|b| b.state.amps().len()).unwrap_or(1);
        if self.branches.iter().any(|b| b.state.amps().len() != dim) {
            return Err(invalid("branches live on different qubit counts"));
        }
        let mut rho = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
        for b in &self.branches {
            let v = nalgebra::DVector::from_column_slice(b.state.amps());
            rho += (&v * v.adjoint()) * Complex64::from(b.prob);
        }
        Ok(rho)
    }
}
