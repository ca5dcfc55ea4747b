//! Symmetric-subspace error correction: modulo measurement, deletion
//! recovery, the sensing round that projects onto the code and its
//! first-order error space, the teleportation decode rule, and closed-form
//! phases with their perturbation bounds.

mod bounds;
mod phases;
mod teleport;

pub use bounds::{bound_checkers, BoundReport};
pub use phases::{
    phase_formulas, projection_probabilities, sandwich, sandwich_closed, zeta, PhaseFormulas, ProjectionProbabilities,
};
pub use teleport::teleport_decode;

use num_complex::Complex64;
use rand::Rng;

use crate::codes::{codeword, GnuParams};
use crate::error::{precondition, Result, SymError};
use crate::noise::deletion_branch;
use crate::symcore::{binom_f64, Parity, SymState};

/// Result of measuring the Dicke weight modulo `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuloOutcome {
    pub residue: u64,
    pub probability: f64,
    /// Normalized restriction of the input to weights `≡ residue (mod g)`.
    pub post_state: SymState,
}

/// Every residue with nonzero probability, in increasing residue order.
pub fn modulo_outcomes(state: &SymState, g: u64) -> Result<Vec<ModuloOutcome>> {
    if g == 0 {
        return Err(precondition("modulus g must be positive"));
    }
    let mut out = Vec::new();
    for r in 0..g {
        let mut part = SymState::zeros(state.n_qubits());
        for w in (r..=state.n_qubits()).step_by(g as usize) {
            part.amps_mut()[w as usize] = state.amp(w);
        }
        let p = part.norm_sqr();
        if p > 0.0 {
            out.push(ModuloOutcome { residue: r, probability: p, post_state: part.normalized()? });
        }
    }
    Ok(out)
}

/// Samples the modulo-`g` weight measurement.
pub fn modulo_meas<R: Rng + ?Sized>(state: &SymState, g: u64, rng: &mut R) -> Result<ModuloOutcome> {
    let outcomes = modulo_outcomes(state, g)?;
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    let mut u = rng.random::<f64>() * total;
    let last = outcomes.len().saturating_sub(1);
    for (i, o) in outcomes.into_iter().enumerate() {
        if u < o.probability || i == last {
            return Ok(o);
        }
        u -= o.probability;
    }
    Err(SymError::ZeroProbability("empty state has no residue".into()))
}

/// Normalized first-order error vector `|q_j⟩ ∝ J^z|j_L⟩ - ⟨J^z⟩_j |j_L⟩`.
pub fn q_vector(params: &GnuParams, parity: Parity) -> SymState {
    let c = codeword(params, parity);
    let mean = c.jz_mean();
    let jz = c.apply_jz();
    let q = SymState::combine(1.0.into(), &jz, (-mean).into(), &c).expect("same qubit count");
    q.normalized().unwrap_or(q)
}

/// Unnormalized primed codeword: `t` deletions of `|j_L⟩` with shift `sigma`,
/// scaled by `√C(t, σ)` so that branch probabilities sum correctly.
pub fn primed_codeword(params: &GnuParams, parity: Parity, t: u64, sigma: u64) -> SymState {
    let c = codeword(params, parity);
    if t == 0 {
        return c;
    }
    deletion_branch(&c, t, sigma).scaled(binom_f64(t, sigma).sqrt().into())
}

/// Code left after `t` deletions with shift syndrome `sigma`, if it fits.
pub fn surviving_code(params: &GnuParams, t: u64, sigma: u64) -> Option<GnuParams> {
    if sigma > t || sigma > params.s() || t > params.n_qubits() {
        return None;
    }
    params.shifted(params.n_qubits() - t, params.s() - sigma).ok()
}

/// Shift syndrome implied by a residue: the `σ` with `s - σ ≡ residue (mod g)`.
fn shift_from_residue(params: &GnuParams, residue: u64) -> u64 {
    let g = params.g();
    (params.s() % g + g - residue % g) % g
}

/// Output of the deletion-recovery step.
#[derive(Debug, Clone, PartialEq)]
pub struct DeletionQecResult {
    /// Normalized state of the shift-`(s - a)` code on `N - t` qubits.
    pub corrected: SymState,
    pub code: GnuParams,
    /// Deletion syndrome `a`.
    pub syndrome: u64,
    /// Probability mass of the input outside the two reference directions.
    pub leak: f64,
}

/// Corrects a post-deletion branch on `N - t` qubits: the modulo-`g`
/// measurement yields the syndrome `a`, then the map taking the normalized
/// `|0_L⟩_a`, `|1_L⟩_a` to the shift-`(s - a)` codewords is applied.
pub fn deletion_qec(branch: &SymState, params: &GnuParams, t: u64) -> Result<DeletionQecResult> {
    if t >= params.distance() {
        return Err(precondition(format!("t = {t} must be below the distance {}", params.distance())));
    }
    if t > params.s() {
        return Err(precondition(format!("shift s = {} must be at least t = {t}", params.s())));
    }
    if branch.n_qubits() + t != params.n_qubits() {
        return Err(precondition("branch qubit count does not match N - t"));
    }
    let outcomes = modulo_outcomes(branch, params.g())?;
    let [only] = outcomes.as_slice() else {
        return Err(precondition("branch is not supported on a single residue class"));
    };
    let a = shift_from_residue(params, only.residue);
    if a > t {
        return Err(precondition(format!("syndrome a = {a} inconsistent with {t} deletions")));
    }
    let code =
        surviving_code(params, t, a).ok_or_else(|| precondition("surviving code does not fit on N - t qubits"))?;
    let mut coef = [Complex64::default(); 2];
    for (j, parity) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
        let reference = primed_codeword(params, parity, t, a).normalized()?;
        coef[j] = reference.inner(branch);
    }
    let kept: f64 = coef.iter().map(|c| c.norm_sqr()).sum();
    let corrected = SymState::combine(coef[0], &codeword(&code, Parity::Even), coef[1], &codeword(&code, Parity::Odd))?
        .normalized()?;
    Ok(DeletionQecResult { corrected, code, syndrome: a, leak: branch.norm_sqr() - kept })
}

/// Recovery signs `ε_j` applied with `|q_j⟩ → ε_j |j_L⟩`.
///
/// After a deletion the `Δ = 0` overlaps `⟨q_j|j'⟩` are real but may differ in
/// sign; the recovery absorbs that known sign so the logical phase starts at
/// zero. Without deletions both signs are `+1`.
pub fn syn1_signs(params: &GnuParams, t: u64, sigma: u64) -> [f64; 2] {
    let Some(code) = surviving_code(params, t, sigma) else { return [1.0, 1.0] };
    if t == 0 {
        return [1.0, 1.0];
    }
    let mut r = [0.0; 2];
    for (j, parity) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
        r[j] = q_vector(&code, parity).inner(&primed_codeword(params, parity, t, sigma)).re;
    }
    if r[0] == 0.0 || r[1] == 0.0 || r[0].signum() == r[1].signum() {
        [1.0, 1.0]
    } else {
        [1.0, -1.0]
    }
}

/// One non-flag outcome of the sensing round.
#[derive(Debug, Clone, PartialEq)]
pub struct SenseBranch {
    pub sigma: u64,
    pub syn: u8,
    pub probability: f64,
    /// Code after the round.
    pub code: GnuParams,
    /// Normalized logical coefficients `(c0, c1)` of the post-state.
    pub logical: [Complex64; 2],
}

/// All outcomes of one sensing round, with the residual flag probability.
#[derive(Debug, Clone, PartialEq)]
pub struct SenseOutcomes {
    pub branches: Vec<SenseBranch>,
    pub p_flag: f64,
}

/// Sampled result of one sensing round.
#[derive(Debug, Clone, PartialEq)]
pub struct QecSenseResult {
    /// Post-state; on `flag = 1` this is the input left untouched.
    pub post_state: SymState,
    pub code: GnuParams,
    pub new_shift: u64,
    pub sigma: u64,
    pub syn: u8,
    pub flag: u8,
    pub logical: [Complex64; 2],
}

fn check_sense_params(params: &GnuParams) -> Result<()> {
    if params.n() < 3 || params.n().is_multiple_of(2) {
        return Err(precondition(format!("sensing round needs odd n >= 3, got n = {}", params.n())));
    }
    Ok(())
}

/// Enumerates the sensing round on `state`, a signal-evolved branch of the
/// code `params` that may have lost `params.N - state.N` qubits.
///
/// Step 1 measures the weight modulo `g` to learn the shift `σ`; step 2
/// projects onto the code (`syn = 0`) or onto the span of the `|q_j⟩`
/// (`syn = 1`), everything else raising the flag; step 3 maps `|q_j⟩` back
/// to `|j_L⟩`.
pub fn qec_sense_outcomes(state: &SymState, params: &GnuParams) -> Result<SenseOutcomes> {
    check_sense_params(params)?;
    if state.n_qubits() > params.n_qubits() {
        return Err(precondition("state has more qubits than the code"));
    }
    let t = params.n_qubits() - state.n_qubits();
    let total = state.norm_sqr();
    let mut branches = Vec::new();
    let mut kept = 0.0;
    for m in modulo_outcomes(state, params.g())? {
        let sigma = shift_from_residue(params, m.residue);
        let Some(code) = surviving_code(params, t, sigma) else { continue };
        let part = m.post_state.scaled((m.probability.sqrt()).into());
        let signs = syn1_signs(params, t, sigma);
        for syn in 0..2u8 {
            let mut coef = [Complex64::default(); 2];
            for (j, parity) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
                let reference = if syn == 0 { codeword(&code, parity) } else { q_vector(&code, parity) };
                let eps = if syn == 0 { 1.0 } else { signs[j] };
                coef[j] = reference.inner(&part) * eps;
            }
            let p: f64 = coef.iter().map(|c| c.norm_sqr()).sum();
            if p <= 0.0 {
                continue;
            }
            kept += p;
            let nrm = p.sqrt();
            branches.push(SenseBranch {
                sigma,
                syn,
                probability: p / total,
                code,
                logical: [coef[0] / nrm, coef[1] / nrm],
            });
        }
    }
    Ok(SenseOutcomes { branches, p_flag: ((total - kept) / total).max(0.0) })
}

/// Samples one sensing round.
pub fn qec_sense<R: Rng + ?Sized>(state: &SymState, params: &GnuParams, rng: &mut R) -> Result<QecSenseResult> {
    let outcomes = qec_sense_outcomes(state, params)?;
    let mut u = rng.random::<f64>();
    for b in &outcomes.branches {
        if u < b.probability {
            let post = SymState::combine(
                b.logical[0],
                &codeword(&b.code, Parity::Even),
                b.logical[1],
                &codeword(&b.code, Parity::Odd),
            )?;
            return Ok(QecSenseResult {
                post_state: post,
                code: b.code,
                new_shift: b.code.s(),
                sigma: b.sigma,
                syn: b.syn,
                flag: 0,
                logical: b.logical,
            });
        }
        u -= b.probability;
    }
    Ok(QecSenseResult {
        post_state: state.clone(),
        code: *params,
        new_shift: params.s(),
        sigma: 0,
        syn: 0,
        flag: 1,
        logical: [Complex64::default(); 2],
    })
}

/// Linear action of one (deletion, signal, sensing) round on the logical
/// coefficients for a fixed outcome `(σ, syn)`.
///
/// Code parity is conserved by every step, so the map is diagonal:
/// `c_j → d_j c_j` with `d_j = ε_j ⟨ref_j| U_Δ |j'⟩`. The outcome probability
/// is `Σ_j |d_j c_j|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundMap {
    pub sigma: u64,
    pub syn: u8,
    pub code: GnuParams,
    pub diag: [Complex64; 2],
    /// `∂ d_j / ∂Δ`.
    pub diag_deriv: [Complex64; 2],
}

/// All outcome maps of a round with `t` deletions and signal `Δ`.
pub fn round_maps(params: &GnuParams, t: u64, delta: f64) -> Result<Vec<RoundMap>> {
    check_sense_params(params)?;
    let mut maps = Vec::new();
    for sigma in 0..=t.min(params.g() - 1) {
        let Some(code) = surviving_code(params, t, sigma) else { continue };
        let src = [
            primed_codeword(params, Parity::Even, t, sigma).apply_signal(delta),
            primed_codeword(params, Parity::Odd, t, sigma).apply_signal(delta),
        ];
        let dsrc =
            [src[0].apply_jz().scaled(Complex64::new(0.0, -1.0)), src[1].apply_jz().scaled(Complex64::new(0.0, -1.0))];
        let signs = syn1_signs(params, t, sigma);
        for syn in 0..2u8 {
            let mut diag = [Complex64::default(); 2];
            let mut diag_deriv = [Complex64::default(); 2];
            for (j, parity) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
                let reference = if syn == 0 { codeword(&code, parity) } else { q_vector(&code, parity) };
                let eps = if syn == 0 { 1.0 } else { signs[j] };
                diag[j] = reference.inner(&src[j]) * eps;
                diag_deriv[j] = reference.inner(&dsrc[j]) * eps;
            }
            maps.push(RoundMap { sigma, syn, code, diag, diag_deriv });
        }
    }
    Ok(maps)
}
