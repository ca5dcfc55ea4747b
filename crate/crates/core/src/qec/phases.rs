//! Logical phases acquired during one sensing round.

use num_complex::Complex64;

use super::{primed_codeword, q_vector, surviving_code, syn1_signs};
use crate::codes::{codeword, GnuParams};
use crate::error::{precondition, Result};
use crate::symcore::{Parity, SymState};

/// `ζ_j = 2 arctan((-1)^j i^{n-1} tan^{n-2j}(x))` for odd `n`, `x = gΔ/2`.
pub fn zeta(n: u64, j: u8, x: f64) -> f64 {
    assert!(n % 2 == 1, "closed form is real only for odd n");
    let i_pow = if ((n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let sign = if j == 0 { 1.0 } else { -1.0 };
    2.0 * (sign * i_pow * x.tan().powi(n as i32 - 2 * j as i32)).atan()
}

/// Exact `⟨j_L| U_Δ |j_L⟩` by summation over the code lattice.
pub fn sandwich(params: &GnuParams, parity: Parity, delta: f64) -> Complex64 {
    let c = codeword(params, parity);
    c.inner(&c.apply_signal(delta))
}

/// Closed form `e^{-iΔ(N/2-s)} e^{ignΔ/2} (cos^n x ± (-i)^n sin^n x)`, `x = gΔ/2`.
pub fn sandwich_closed(params: &GnuParams, parity: Parity, delta: f64) -> Complex64 {
    let (g, n, s, nq) = (params.g() as f64, params.n() as i32, params.s() as f64, params.n_qubits() as f64);
    let x = g * delta / 2.0;
    let global = Complex64::from_polar(1.0, -delta * (nq / 2.0 - s) + g * n as f64 * delta / 2.0);
    let bracket =
        Complex64::from(x.cos().powi(n)) + Complex64::new(0.0, -1.0).powi(n) * (parity.sign() * x.sin().powi(n));
    global * bracket
}

/// Phases and amplitude ratios of one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFormulas {
    /// Closed-form relative phase for `syn = 0` without deletion.
    pub zeta0: f64,
    /// Closed-form relative phase for `syn = 1` without deletion.
    pub zeta1: f64,
    /// `arctan(Im u_0 / Re u_0)` from exact inner products.
    pub phi10: f64,
    /// `arctan(Im u_1 / Re u_1)` from exact inner products.
    pub phi11: f64,
    /// Ratios `u_syn = d_1 / d_0` of the logical amplitude factors.
    pub u_syn: [Complex64; 2],
}

fn atan_ratio(u: Complex64) -> f64 {
    if u.re == 0.0 {
        return if u.im == 0.0 { 0.0 } else { u.im.signum() * std::f64::consts::FRAC_PI_2 };
    }
    (u.im / u.re).atan()
}

/// Evaluates the phase formulas for signal `Δ`; with `sigma = Some(σ)` the
/// ratios are built from the once-deleted primed codewords with shift `σ`.
pub fn phase_formulas(params: &GnuParams, delta: f64, sigma: Option<u64>) -> Result<PhaseFormulas> {
    let n = params.n();
    if n < 3 || n.is_multiple_of(2) {
        return Err(precondition("phase formulas need odd n >= 3"));
    }
    let x = params.g() as f64 * delta / 2.0;
    let (t, sg) = match sigma {
        None => (0, 0),
        Some(s) => (1, s),
    };
    let code = surviving_code(params, t, sg).ok_or_else(|| precondition("surviving code does not fit"))?;
    let signs = syn1_signs(params, t, sg);
    let mut d = [[Complex64::default(); 2]; 2];
    for (j, parity) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
        let src: SymState = primed_codeword(params, parity, t, sg).apply_signal(delta);
        d[0][j] = codeword(&code, parity).inner(&src);
        d[1][j] = q_vector(&code, parity).inner(&src) * signs[j];
    }
    let u_syn = [d[0][1] / d[0][0], d[1][1] / d[1][0]];
    Ok(PhaseFormulas {
        zeta0: zeta(n, 0, x),
        zeta1: zeta(n, 1, x),
        phi10: atan_ratio(u_syn[0]),
        phi11: atan_ratio(u_syn[1]),
        u_syn,
    })
}

/// Closed-form outcome probabilities of a clean sensing round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionProbabilities {
    /// `‖Π U|ψ⟩‖²`, the return to the code space.
    pub code: f64,
    /// `‖Π₁ U|ψ⟩‖²`, the first-order error space.
    pub first_order: f64,
    /// Everything else, `Σ_{k=2}^{n-2} C(n,k) cos^{2k}x sin^{2(n-k)}x`.
    pub flag: f64,
}

/// Outcome probabilities after signal `x = gΔ/2` on any logical state of an
/// `n`-block code. The flag term is summed directly, so it vanishes exactly
/// for `n ≤ 3`.
pub fn projection_probabilities(n: u64, x: f64) -> ProjectionProbabilities {
    let (c2, s2) = (x.cos().powi(2), x.sin().powi(2));
    let m = n as i32;
    let code = c2.powi(m) + s2.powi(m);
    let first_order =
        if n >= 2 { n as f64 / 4.0 * (2.0 * x).sin().powi(2) * (s2.powi(m - 2) + c2.powi(m - 2)) } else { 0.0 };
    let flag = (2..n.saturating_sub(1))
        .map(|k| crate::symcore::binom_f64(n, k) * c2.powi(k as i32) * s2.powi(m - k as i32))
        .sum();
    ProjectionProbabilities { code, first_order, flag }
}
