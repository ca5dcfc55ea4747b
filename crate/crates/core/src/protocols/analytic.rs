//! Closed-form protocol quantities: the expected Protocol 1 FI, the failure
//! bound, the Protocol 2/3 exponent recursions and the classical baselines.

use num_rational::BigRational;
use serde::Serialize;

use super::simulate::{EnsembleSummary, ProtocolConfig};
use crate::error::Result;
use crate::optimizer::{p2_exponent, to_f64, LPInstance};
use crate::qec::{projection_probabilities, round_maps};

/// Candidate values of `E[F_P1]`, all sharing the scale `X = r²g⁶τ⁶θ⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectedFiP1 {
    /// `r²g⁶τ⁶θ⁴`.
    pub scale: f64,
    /// Published leading order, `(37/64)·X`, built on a `−1/8` cubic
    /// coefficient of the syn-0 phase.
    pub published: f64,
    /// Same derivation chain with the `−1/4` coefficient, `(7/16)·X`.
    pub arbitrated: f64,
    /// Value for trajectories without any `syn = 1` round, `(9/16)·X`.
    pub no_event: f64,
    /// Variance contribution of rare `syn = 1` rounds,
    /// `r·p₁·(gτ)²` with `p₁ = (3/4)(gτθ)²`.
    pub rare_event: f64,
    /// Exact mean without deletions: `r·Var + r²·Mean²` of the iid per-round
    /// phase derivative, from exact round maps.
    pub exact_clean: f64,
}

/// Evaluates every candidate for `E[F_P1]` at `config`.
pub fn expected_fi_p1(config: &ProtocolConfig) -> Result<ExpectedFiP1> {
    let g = config.params.g() as f64;
    let (r, tau, theta) = (config.r as f64, config.tau(), config.theta);
    let gt = g * tau;
    let scale = r * r * gt.powi(6) * theta.powi(4);
    let p1 = 0.75 * (gt * theta).powi(2);
    Ok(ExpectedFiP1 {
        scale,
        published: 37.0 / 64.0 * scale,
        arbitrated: 7.0 / 16.0 * scale,
        no_event: 9.0 / 16.0 * scale,
        rare_event: r * p1 * gt * gt,
        exact_clean: exact_clean_mean(config)?,
    })
}

/// Exact `E[(dΦ/dθ)²]` for a deletion-free run. Clean rounds keep the logical
/// amplitudes balanced, so the readout FI equals `(dΦ/dθ)²`, and the rounds
/// are independent with identical outcome law.
fn exact_clean_mean(config: &ProtocolConfig) -> Result<f64> {
    let maps = round_maps(&config.params, 0, config.delta())?;
    let tau = config.tau();
    let mut law = [(0.0, 0.0); 2];
    for m in &maps {
        // Outcomes at rounding level carry no probability; their phase
        // slope is noise.
        if m.diag.iter().any(|d| d.norm_sqr() < 1e-24) {
            continue;
        }
        let p = 0.5 * (m.diag[0].norm_sqr() + m.diag[1].norm_sqr());
        let slope = tau * ((m.diag_deriv[1] / m.diag[1]).im - (m.diag_deriv[0] / m.diag[0]).im);
        law[m.syn as usize] = (p, slope);
    }
    let mean = law[0].0 * law[0].1 + law[1].0 * law[1].1;
    let second = law[0].0 * law[0].1.powi(2) + law[1].0 * law[1].1.powi(2);
    let r = config.r as f64;
    Ok(r * (second - mean * mean) + r * r * mean * mean)
}

/// Failure probability bound `r·p_flag + r·2g²n/N² + r·n_del·N·τ`.
pub fn failure_bound(config: &ProtocolConfig) -> f64 {
    let p = &config.params;
    let (g, n, nq) = (p.g() as f64, p.n() as f64, p.n_qubits() as f64);
    let r = config.r as f64;
    let x = g * config.delta() / 2.0;
    r * projection_probabilities(p.n(), x).flag + r * 2.0 * g * g * n / (nq * nq) + r * config.n_del * nq * config.tau()
}

/// Protocol 2 estimate from a Protocol 1 ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Protocol2Estimate {
    pub repetitions: f64,
    pub failure_rate: f64,
    pub fi_p1: f64,
    /// `r^{q−1}(1 − f₁)E[F_P1]`.
    pub fi: f64,
}

/// Combines `r^{q−1}` independent Protocol 1 runs. `mean_fi_success` is
/// used for `E[F_P1]` since failures are accounted for by `1 − f₁`.
pub fn run_protocol2(config: &ProtocolConfig, summary: &EnsembleSummary) -> Protocol2Estimate {
    let repetitions = (config.r as f64).powf(config.q - 1.0);
    let failure_rate = summary.p_flag_emp;
    Protocol2Estimate {
        repetitions,
        failure_rate,
        fi_p1: summary.mean_fi_success,
        fi: repetitions * (1.0 - failure_rate) * summary.mean_fi_success,
    }
}

/// Precision-exponent trajectory `c₁, c₂, …, c_{k+1}` of Protocol 3 with
/// `c_{j+1} = p2_exponent(c_j)/2`.
pub fn run_protocol3(
    c1: &BigRational,
    k: u32,
    q: &BigRational,
    e1: &BigRational,
    e2: &BigRational,
) -> Result<Vec<BigRational>> {
    let one = BigRational::from_integer(1.into());
    let mut cs = vec![c1.clone()];
    for _ in 0..k {
        let c = cs.last().expect("non-empty").clone();
        let inst = LPInstance::new(c, q.clone(), one.clone(), e1.clone(), e2.clone())?;
        cs.push(p2_exponent(&inst) / BigRational::from_integer(2.into()));
    }
    Ok(cs)
}

/// Float view of [`run_protocol3`].
pub fn run_protocol3_f64(
    c1: &BigRational,
    k: u32,
    q: &BigRational,
    e1: &BigRational,
    e2: &BigRational,
) -> Result<Vec<f64>> {
    Ok(run_protocol3(c1, k, q, e1, e2)?.iter().map(to_f64).collect())
}

/// FI exponents of the reference strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Baselines {
    /// `N` classical probes for duration `r^{1−q}`: `1 + 2γ(1 − q)`.
    pub snl: f64,
    /// Repeated GHZ states: `max{2 − 2η, −2γ(q − 1)}`.
    pub ghz: f64,
    /// Level the Protocol 1 exponent must reach for the LP's shot-noise
    /// constraint, `3 − 2q` (the SNL exponent at `γ = 1`).
    pub lp_shot_noise_level: f64,
    /// Level behind the LP's GHZ constraint of record, `−2η`.
    pub lp_ghz_level: f64,
}

pub fn baselines(eta: f64, q: f64, gamma_rounds: f64) -> Baselines {
    Baselines {
        snl: 1.0 + 2.0 * gamma_rounds * (1.0 - q),
        ghz: (2.0 - 2.0 * eta).max(-2.0 * gamma_rounds * (q - 1.0)),
        lp_shot_noise_level: 3.0 - 2.0 * q,
        lp_ghz_level: -2.0 * eta,
    }
}
