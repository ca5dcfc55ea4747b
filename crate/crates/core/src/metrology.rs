//! Quantum Fisher information, the symmetric logarithmic derivative and the
//! classical Fisher information of the readout schemes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::codes::GnuParams;
use crate::error::{Result, SymError};
use crate::symcore::{binom_f64, SymEnsemble, SymState};

/// QFI of a pure state under `exp(-iθJ^z)`: `4 Var(J^z)`.
pub fn qfi_pure(state: &SymState) -> f64 {
    4.0 * state.jz_moments().variance
}

/// QFI of a mixed state on one Dicke block,
/// `2 Σ_{λ_i+λ_j>0} (λ_i-λ_j)²/(λ_i+λ_j) |⟨i|J^z|j⟩|²`.
pub fn qfi_mixed(ensemble: &SymEnsemble) -> Result<f64> {
    let rho = ensemble.density_matrix()?;
    let dim = rho.nrows();
    let n = dim as u64 - 1;
    let eig = rho.symmetric_eigen();
    let jz = DVector::from_iterator(dim, (0..dim).map(|w| SymState::jz_eigenvalue(n, w as u64)));
    let vecs = &eig.eigenvectors;
    let mut f = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let (li, lj) = (eig.eigenvalues[i].max(0.0), eig.eigenvalues[j].max(0.0));
            if li + lj <= 1e-14 {
                continue;
            }
            let elem: Complex64 = (0..dim).map(|w| vecs[(w, i)].conj() * jz[w] * vecs[(w, j)]).sum();
            f += 2.0 * (li - lj).powi(2) / (li + lj) * elem.norm_sqr();
        }
    }
    Ok(f)
}

/// Spectral form of the SLD of a pure symmetric state.
#[derive(Debug, Clone, PartialEq)]
pub struct SLDDecomposition {
    pub eigvec_plus: SymState,
    pub eigvec_minus: SymState,
    pub eigval_plus: f64,
    pub eigval_minus: f64,
    /// `|b⟩ = (Σ a_w w |D_w⟩ - m1 |ψ⟩)/√v`, orthogonal to `|ψ⟩`.
    pub b_vector: SymState,
}

impl SLDDecomposition {
    /// Dense SLD on the Dicke block.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let p = DVector::from_column_slice(self.eigvec_plus.amps());
        let m = DVector::from_column_slice(self.eigvec_minus.amps());
        (&p * p.adjoint()) * Complex64::from(self.eigval_plus) + (&m * m.adjoint()) * Complex64::from(self.eigval_minus)
    }
}

/// Rank-two SLD of a pure state: eigenvectors `(|ψ⟩ ± i|b⟩)/√2` with
/// eigenvalues `±2√v`.
pub fn sld(state: &SymState) -> Result<SLDDecomposition> {
    let mom = state.jz_moments();
    if mom.variance <= 1e-15 {
        return Err(SymError::ZeroVariance);
    }
    let sd = mom.variance.sqrt();
    let mut b = SymState::zeros(state.n_qubits());
    for (w, (out, a)) in b.amps_mut().iter_mut().zip(state.amps()).enumerate() {
        *out = a * ((w as f64 - mom.m1) / sd);
    }
    let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    let i = Complex64::new(0.0, 1.0);
    Ok(SLDDecomposition {
        eigvec_plus: SymState::combine(h, state, h * i, &b)?,
        eigvec_minus: SymState::combine(h, state, -h * i, &b)?,
        eigval_plus: 2.0 * sd,
        eigval_minus: -2.0 * sd,
        b_vector: b,
    })
}

/// Largest entry of `dρ/dθ - (Lρ + ρL)/2` with `dρ/dθ = -i[J^z, ρ]`.
pub fn lyapunov_residual(state: &SymState, dec: &SLDDecomposition) -> f64 {
    let dim = state.amps().len();
    let n = state.n_qubits();
    let v = DVector::from_column_slice(state.amps());
    let rho = &v * v.adjoint();
    let jz = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        (0..dim).map(|w| Complex64::from(SymState::jz_eigenvalue(n, w as u64))),
    ));
    let minus_i = Complex64::new(0.0, -1.0);
    let drho = (&jz * &rho - &rho * &jz) * minus_i;
    let l = dec.matrix();
    let sym = (&l * &rho + &rho * &l) * Complex64::from(0.5);
    (drho - sym).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Fisher information of the logical plus/minus readout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeBasisFi {
    /// Using only the plus and minus outcomes.
    pub two_outcome: f64,
    /// Also counting the out-of-code outcome.
    pub three_outcome: f64,
}

/// Readout probabilities `(p+, p-)` of `exp(-iθJ^z)|+_L⟩`:
/// `cos^{2n}(gθ/2)` and `sin^{2n}(gθ/2)`.
pub fn code_basis_probabilities(params: &GnuParams, theta: f64) -> (f64, f64) {
    let x = params.g() as f64 * theta / 2.0;
    let n = params.n() as i32;
    (x.cos().powi(2 * n), x.sin().powi(2 * n))
}

/// Fisher information of θ from the plus/minus readout of the signal-rotated
/// logical plus state, in closed form so no division by a vanishing
/// probability occurs.
pub fn fi_code_basis(params: &GnuParams, theta: f64) -> CodeBasisFi {
    let g = params.g() as f64;
    let n = params.n();
    let x = g * theta / 2.0;
    let (sn, cs) = x.sin_cos();
    let nf = n as f64;
    let ni = n as i32;
    // (dp±/dθ)²/p± simplified analytically.
    let two = g * g * nf * nf * (sn * sn * cs.powi(2 * ni - 2) + cs * cs * sn.powi(2 * ni - 2));
    let leak = if n < 2 {
        0.0
    } else {
        // p_o = Σ_{k=1}^{n-1} C(n,k) cos^{2k} sin^{2(n-k)}; its θ-derivative is
        // (g/2) d/dx of the same sum.
        let (p_o, dp_dx) = (1..n).fold((0.0, 0.0), |(p, d), k| {
            let c = binom_f64(n, k);
            let (ki, mi) = (k as i32, (n - k) as i32);
            let term = c * cs.powi(2 * ki) * sn.powi(2 * mi);
            let dterm = c
                * (2.0 * mi as f64 * cs.powi(2 * ki + 1) * sn.powi(2 * mi - 1)
                    - 2.0 * ki as f64 * cs.powi(2 * ki - 1) * sn.powi(2 * mi + 1));
            (p + term, d + dterm)
        });
        if p_o <= 1e-300 {
            // Limit at the poles x ∈ (π/2)·ℤ, where p_o ≈ n (δx)².
            g * g * nf
        } else {
            (g / 2.0 * dp_dx).powi(2) / p_o
        }
    };
    CodeBasisFi { two_outcome: two, three_outcome: two + leak }
}

/// Fisher information of θ from the phase readout of `cos φ|0⟩ + sin φ e^{iΦ}|1⟩`
/// measured in the plus/minus basis:
/// `sin²2φ sin²Φ / (1 - sin²2φ cos²Φ) · (dΦ/dθ)²`.
///
/// The denominator is evaluated as `sin²Φ + cos²2φ cos²Φ` to avoid
/// cancellation. At the `0/0` point (`cos 2φ = 0`, `Φ = 0`) the continuous
/// limit `sin²2φ · (dΦ/dθ)²` is returned; rounding-level residues of
/// `cos 2φ` and `sin Φ` count as that point.
pub fn fi_phase_readout(phi_amp: f64, phase: f64, dphase_dtheta: f64) -> f64 {
    let s2 = (2.0 * phi_amp).sin().powi(2);
    let c2 = (2.0 * phi_amp).cos().powi(2);
    let (sp, cp) = phase.sin_cos();
    let num = s2 * sp * sp;
    let den = sp * sp + c2 * cp * cp;
    // Below this both terms of the ratio sit at rounding level.
    let at_limit = sp.abs() < 1e-14 && c2 < 1e-28;
    let prefactor = if at_limit { s2 } else { num / den };
    prefactor * dphase_dtheta * dphase_dtheta
}

/// Readout probabilities `p± = (1 ± sin 2φ cos Φ)/2` behind [`fi_phase_readout`].
pub fn phase_readout_probabilities(phi_amp: f64, phase: f64) -> (f64, f64) {
    let v = (2.0 * phi_amp).sin() * phase.cos();
    ((1.0 + v) / 2.0, (1.0 - v) / 2.0)
}
