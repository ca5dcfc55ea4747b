//! Numerical checks of the single-deletion perturbation bounds.

use super::{phase_formulas, primed_codeword, projection_probabilities, q_vector, surviving_code};
use crate::codes::{codeword, GnuParams};
use crate::error::{precondition, Result};
use crate::symcore::Parity;

/// Both sides of one inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn new(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { name, lhs, rhs, pass: lhs <= rhs }
    }
}

/// All bound evaluations at one point of parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
    /// `φ_{1,1} / (g τ θ)`, expected near `4√2` for a centred shift.
    pub phi11_ratio: f64,
    /// Probability that the once-deleted plus state leaves both projectors.
    pub p_flag_deleted: f64,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Evaluates the perturbation bounds for one deletion with shift `sigma`
/// under signal `Δ = τθ`.
///
/// The assumption region is enforced: `|θ| ≤ 1`, `g n τ ≤ 1/2`,
/// `gΔ/2 ≤ π/6`, odd `n ≥ 3`, and the code centred so that both
/// `N - s - gn/2` and `s + gn/2` are at least `N/4`.
pub fn bound_checkers(params: &GnuParams, tau: f64, theta: f64, sigma: u64) -> Result<BoundReport> {
    let (g, n, s, nq) = (params.g() as f64, params.n() as f64, params.s() as f64, params.n_qubits() as f64);
    let delta = tau * theta;
    if theta.abs() > 1.0 || g * n * tau > 0.5 || (g * delta / 2.0).abs() > std::f64::consts::PI / 6.0 {
        return Err(precondition("signal parameters outside the bound assumptions"));
    }
    if params.n() < 3 || params.n().is_multiple_of(2) {
        return Err(precondition("bounds need odd n >= 3"));
    }
    if nq - s - g * n / 2.0 < nq / 4.0 || s + g * n / 2.0 < nq / 4.0 {
        return Err(precondition("code lattice is not centred enough for the bounds"));
    }
    let ph = phase_formulas(params, delta, Some(sigma))?;
    let root = g * n.sqrt() / nq;
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let amp_after = |u: f64| a / (a * a + a * a * u * u).sqrt();
    let gd = g * delta;
    let mut checks = vec![
        BoundCheck::new("u_modulus", (ph.u_syn[0].norm() - 1.0).abs(), 3.0 * root),
        BoundCheck::new("amplitude_syn0", (amp_after(ph.u_syn[0].norm()) - a).abs(), 12.0 * root),
        BoundCheck::new("amplitude_syn1", (amp_after(ph.u_syn[1].norm()) - a).abs(), 12.0 * root),
        BoundCheck::new("phase_syn0", (ph.phi10 - ph.zeta0).abs(), 10.0 * root + 98.0 * g * g * n / (nq * nq)),
        BoundCheck::new("zeta1_taylor", (ph.zeta1 - gd).abs(), 3.0 / 16.0 * gd.abs().powi(3)),
    ];
    // Failure probability of the round on the deleted plus state.
    let mut kept = 0.0;
    let mut total = 0.0;
    for sg in 0..=1u64.min(params.s()) {
        let Some(c) = surviving_code(params, 1, sg) else { continue };
        for parity in [Parity::Even, Parity::Odd] {
            let src = primed_codeword(params, parity, 1, sg).apply_signal(delta);
            total += 0.5 * src.norm_sqr();
            kept += 0.5 * codeword(&c, parity).inner(&src).norm_sqr();
            kept += 0.5 * q_vector(&c, parity).inner(&src).norm_sqr();
        }
    }
    let p_flag_deleted = (1.0 - kept / total).max(0.0);
    let p_flag_clean = projection_probabilities(params.n(), gd / 2.0).flag;
    checks.push(BoundCheck::new(
        "flag_after_deletion",
        p_flag_deleted,
        p_flag_clean.max(0.0) + 2.0 * g * g * n / (nq * nq),
    ));
    Ok(BoundReport { checks, phi11_ratio: ph.phi11 / gd, p_flag_deleted })
}
