//! Exact trajectory simulation of Protocol 1.
//!
//! Between rounds the probe is always a code state `c0|0_L⟩ + c1|1_L⟩`, and
//! each round acts on `(c0, c1)` through a diagonal map (see
//! [`crate::qec::RoundMap`]). Maps depend only on the current qubit count,
//! shift and deletion count, so they are computed once from the full
//! Dicke-basis vectors and cached; the tracking itself involves no
//! approximation.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::GnuParams;
use crate::error::{invalid, Result};
use crate::metrology::fi_phase_readout;
use crate::qec::{round_maps, RoundMap};

/// Configuration of a Protocol 1 run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub params: GnuParams,
    /// Number of sensing rounds.
    pub r: u64,
    /// Time-step exponent, `τ = r^{-q}`.
    pub q: f64,
    /// Signal per unit time.
    pub theta: f64,
    /// Deletions per qubit per unit time.
    pub n_del: f64,
    pub seed: u64,
    /// Factor by which `syn = 1` outcomes are oversampled. Trajectories carry
    /// the matching likelihood ratio, so estimates stay unbiased; `1` gives
    /// plain Monte-Carlo.
    pub syn1_boost: f64,
}

impl ProtocolConfig {
    /// Validates the configuration; Protocol 1 requires `n = 3`.
    pub fn new(params: GnuParams, r: u64, q: f64, theta: f64, n_del: f64, seed: u64) -> Result<Self> {
        if params.n() != 3 {
            return Err(invalid(format!("Protocol 1 needs n = 3, got n = {}", params.n())));
        }
        if r == 0 {
            return Err(invalid("at least one round is required"));
        }
        if q.is_nan() || q < 1.0 || !theta.is_finite() || n_del.is_nan() || n_del < 0.0 {
            return Err(invalid("need q >= 1, finite theta and n_del >= 0"));
        }
        Ok(Self { params, r, q, theta, n_del, seed, syn1_boost: 1.0 })
    }

    /// Same configuration with importance sampling of `syn = 1` outcomes.
    pub fn with_syn1_boost(mut self, boost: f64) -> Result<Self> {
        if boost.is_nan() || boost < 1.0 {
            return Err(invalid("syn1 boost must be at least 1"));
        }
        self.syn1_boost = boost;
        Ok(self)
    }

    /// Duration of one round, `r^{-q}`.
    pub fn tau(&self) -> f64 {
        (self.r as f64).powf(-self.q)
    }

    /// Signal phase per round, `τθ`.
    pub fn delta(&self) -> f64 {
        self.tau() * self.theta
    }
}

/// Outcome of one round, enough to replay the trajectory at another θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub deletions: u8,
    pub sigma: u8,
    pub syn: u8,
}

/// Log of one Protocol 1 trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub index: u64,
    /// `counts[t][j]`: rounds with `t` deletions and syndrome `j`.
    pub counts: [[u64; 2]; 2],
    /// Final relative logical phase `Φ`.
    pub phi: f64,
    pub dphi_dtheta: f64,
    /// Sum of the per-round phase increments, for bookkeeping checks.
    pub phase_sum: f64,
    pub flag: bool,
    /// Set when the qubit count fell below half its initial value.
    pub invalid_regime: bool,
    pub final_qubits: u64,
    pub final_shift: u64,
    /// `|c0|` of the final state.
    pub final_amp_a: f64,
    pub deletions: u64,
    /// Readout FI of the final state; zero when flagged.
    pub fi: f64,
    /// Likelihood ratio from importance sampling (1 for plain sampling).
    pub weight: f64,
    pub rounds: Vec<RoundOutcome>,
}

type MapKey = (u64, u64, u64);

/// Protocol 1 simulator with a shared cache of round maps.
pub struct Simulator {
    config: ProtocolConfig,
    cache: RwLock<HashMap<MapKey, Arc<Vec<RoundMap>>>>,
}

/// Per-trajectory seed stream: the master seed selects the key, the index the
/// stream, so parallel and serial runs draw identical numbers.
pub fn derive_seed(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

impl Simulator {
    pub fn new(config: ProtocolConfig) -> Self {
        Self { config, cache: RwLock::new(HashMap::new()) }
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    fn maps(&self, code: &GnuParams, t: u64) -> Result<Arc<Vec<RoundMap>>> {
        let key = (code.n_qubits(), code.s(), t);
        if let Some(m) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(m.clone());
        }
        let maps = Arc::new(round_maps(code, t, self.config.delta())?);
        self.cache.write().expect("cache lock").insert(key, maps.clone());
        Ok(maps)
    }

    /// Runs trajectory `index` with its own random stream.
    pub fn trajectory(&self, index: u64) -> Result<TrajectoryRecord> {
        let mut rng = derive_seed(self.config.seed, index);
        self.run_with(index, &mut rng, None)
    }

    fn run_with(&self, index: u64, rng: &mut ChaCha8Rng, script: Option<&[RoundOutcome]>) -> Result<TrajectoryRecord> {
        let cfg = &self.config;
        let tau = cfg.tau();
        let n0 = cfg.params.n_qubits();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut c = [Complex64::from(h), Complex64::from(h)];
        let mut dc = [Complex64::default(); 2];
        let mut code = cfg.params;
        let mut rec = TrajectoryRecord {
            index,
            counts: [[0; 2]; 2],
            phi: 0.0,
            dphi_dtheta: 0.0,
            phase_sum: 0.0,
            flag: false,
            invalid_regime: false,
            final_qubits: n0,
            final_shift: code.s(),
            final_amp_a: h,
            deletions: 0,
            fi: 0.0,
            weight: 1.0,
            rounds: Vec::with_capacity(cfg.r as usize),
        };
        let rounds = script.map_or(cfg.r as usize, |s| s.len());
        for round in 0..rounds {
            let t = match script {
                Some(s) => s[round].deletions as u64,
                None => {
                    let rate = cfg.n_del * code.n_qubits() as f64 * tau;
                    if rate > 0.0 {
                        Poisson::new(rate).map_err(|e| invalid(e.to_string()))?.sample(rng) as u64
                    } else {
                        0
                    }
                }
            };
            rec.deletions += t;
            if t >= 2 {
                rec.flag = true;
                break;
            }
            let maps = self.maps(&code, t)?;
            let probs: Vec<f64> =
                maps.iter().map(|m| (m.diag[0] * c[0]).norm_sqr() + (m.diag[1] * c[1]).norm_sqr()).collect();
            let chosen = match script {
                Some(s) => maps.iter().position(|m| m.sigma == s[round].sigma as u64 && m.syn == s[round].syn),
                None => self.sample(&maps, &probs, rng, &mut rec.weight),
            };
            let Some(k) = chosen else {
                rec.flag = true;
                break;
            };
            let m = &maps[k];
            let mut nc = [Complex64::default(); 2];
            let mut ndc = [Complex64::default(); 2];
            for j in 0..2 {
                nc[j] = m.diag[j] * c[j];
                ndc[j] = m.diag_deriv[j] * tau * c[j] + m.diag[j] * dc[j];
            }
            let nrm = probs[k].sqrt();
            c = [nc[0] / nrm, nc[1] / nrm];
            dc = [ndc[0] / nrm, ndc[1] / nrm];
            rec.phase_sum += (m.diag[1] / m.diag[0]).arg();
            rec.counts[t as usize][m.syn as usize] += 1;
            rec.rounds.push(RoundOutcome { deletions: t as u8, sigma: m.sigma as u8, syn: m.syn });
            code = m.code;
            if 2 * code.n_qubits() < n0 {
                rec.invalid_regime = true;
            }
        }
        rec.final_qubits = code.n_qubits();
        rec.final_shift = code.s();
        if !rec.flag {
            rec.phi = (c[1] / c[0]).arg();
            rec.dphi_dtheta = (dc[1] / c[1]).im - (dc[0] / c[0]).im;
            rec.final_amp_a = c[0].norm();
            let phi_amp = c[1].norm().atan2(c[0].norm());
            rec.fi = fi_phase_readout(phi_amp, rec.phi, rec.dphi_dtheta);
        }
        Ok(rec)
    }

    /// Chooses an outcome index, or `None` for the flag. Updates the
    /// importance weight.
    fn sample(&self, maps: &[RoundMap], probs: &[f64], rng: &mut ChaCha8Rng, weight: &mut f64) -> Option<usize> {
        let boost = self.config.syn1_boost;
        let tilt: Vec<f64> = maps.iter().zip(probs).map(|(m, p)| if m.syn == 1 { p * boost } else { *p }).collect();
        let p_flag = (1.0 - probs.iter().sum::<f64>()).max(0.0);
        let z: f64 = tilt.iter().sum::<f64>() + p_flag;
        let mut u = rng.random::<f64>() * z;
        for (k, q) in tilt.iter().enumerate() {
            if u < *q {
                *weight *= probs[k] * z / q;
                return Some(k);
            }
            u -= q;
        }
        *weight *= z;
        None
    }
}

/// Runs one trajectory of Protocol 1.
pub fn run_protocol1(config: &ProtocolConfig, index: u64) -> Result<TrajectoryRecord> {
    Simulator::new(*config).trajectory(index)
}

/// Replays a recorded outcome sequence at signal `theta` and returns `Φ`.
///
/// Used for finite-difference checks of `dΦ/dθ` with matched randomness.
pub fn replay_phase(config: &ProtocolConfig, outcomes: &[RoundOutcome], theta: f64) -> Result<f64> {
    let sim = Simulator::new(ProtocolConfig { theta, ..*config });
    let mut rng = derive_seed(config.seed, 0);
    Ok(sim.run_with(0, &mut rng, Some(outcomes))?.phi)
}

/// Aggregate statistics of an ensemble of trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub trials: u64,
    /// `E[F_P1]` with flagged runs counted as zero.
    pub mean_fi: f64,
    pub se_fi: f64,
    /// Mean FI over unflagged runs only.
    pub mean_fi_success: f64,
    pub p_flag_emp: f64,
    pub se_p_flag: f64,
    pub p_flag_bound: f64,
    /// Number of trajectories containing at least one `syn = 1` round.
    pub syn1_trajectories: u64,
    pub successes: u64,
    pub invalid_regime: u64,
}

/// Runs `trials` trajectories in parallel. Records are returned in index
/// order so aggregation is independent of thread scheduling.
pub fn run_ensemble(
    sim: &Simulator,
    trials: u64,
    keep_records: bool,
) -> Result<(EnsembleSummary, Vec<TrajectoryRecord>)> {
    let mut records: Vec<TrajectoryRecord> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = sim.trajectory(i)?;
            if !keep_records {
                r.rounds = Vec::new();
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.index);
    let nt = trials.max(1) as f64;
    let wf: Vec<f64> = records.iter().map(|r| r.weight * r.fi).collect();
    let mean_fi = wf.iter().sum::<f64>() / nt;
    let var = wf.iter().map(|x| (x - mean_fi).powi(2)).sum::<f64>() / (nt - 1.0).max(1.0);
    let flags: Vec<f64> = records.iter().map(|r| if r.flag { r.weight } else { 0.0 }).collect();
    let p_flag_emp = flags.iter().sum::<f64>() / nt;
    let var_flag = flags.iter().map(|x| (x - p_flag_emp).powi(2)).sum::<f64>() / (nt - 1.0).max(1.0);
    let ok: Vec<&TrajectoryRecord> = records.iter().filter(|r| !r.flag).collect();
    let ok_weight: f64 = ok.iter().map(|r| r.weight).sum();
    let mean_fi_success =
        if ok_weight > 0.0 { ok.iter().map(|r| r.weight * r.fi).sum::<f64>() / ok_weight } else { 0.0 };
    let summary = EnsembleSummary {
        trials,
        mean_fi,
        se_fi: (var / nt).sqrt(),
        mean_fi_success,
        p_flag_emp,
        se_p_flag: (var_flag / nt).sqrt(),
        p_flag_bound: super::failure_bound(sim.config()),
        syn1_trajectories: records.iter().filter(|r| r.counts[0][1] + r.counts[1][1] > 0).count() as u64,
        successes: ok.len() as u64,
        invalid_regime: records.iter().filter(|r| r.invalid_regime).count() as u64,
    };
    Ok((summary, records))
}
