//! Deletion and amplitude-damping channels on symmetric states, in their
//! block-decomposed forms.

use crate::codes::{make_logical, GnuParams, Label};
use crate::error::{invalid, precondition, Result};
use crate::symcore::{binom_f64, binom_ratio, ln_binom, SymState};

/// Branches with probability below this are dropped and their mass reported.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Channel output as a list of branches plus the mass removed by pruning.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<T> {
    pub outcomes: Vec<T>,
    pub pruned_mass: f64,
}

impl<T> Decomposition<T> {
    fn prune(raw: Vec<(f64, T)>) -> (Vec<T>, f64) {
        let mut kept = Vec::with_capacity(raw.len());
        let mut pruned = 0.0;
        for (w, o) in raw {
            if w < PRUNE_THRESHOLD {
                pruned += w;
            } else {
                kept.push(o);
            }
        }
        (kept, pruned)
    }
}

/// Branch of the deletion channel labelled by the shift `a` (the number of
/// deleted qubits that were in state `|1⟩`).
#[derive(Debug, Clone, PartialEq)]
pub struct DeletionOutcome {
    pub shift: u64,
    /// `C(t, a) · n_a`, the branch probability.
    pub weight: f64,
    /// Normalized state on `N - t` qubits.
    pub state: SymState,
}

/// Unnormalized branch `|ψ⟩_a = Σ_w a_w √(C(N-t, w-a)/C(N, w)) |D^{N-t}_{w-a}⟩`.
pub fn deletion_branch(state: &SymState, t: u64, a: u64) -> SymState {
    let n = state.n_qubits();
    let mut out = SymState::zeros(n - t);
    for (w, amp) in state.amps().iter().enumerate() {
        let w = w as u64;
        if w < a || w - a > n - t {
            continue;
        }
        out.amps_mut()[(w - a) as usize] = amp * binom_ratio(n, t, w, a).sqrt();
    }
    out
}

/// Traces out `t` qubits of a symmetric state, returning the `t + 1` branches.
pub fn delete(state: &SymState, t: u64) -> Result<Decomposition<DeletionOutcome>> {
    let n = state.n_qubits();
    if t > n {
        return Err(precondition(format!("cannot delete {t} of {n} qubits")));
    }
    let raw = (0..=t)
        .filter_map(|a| {
            let branch = deletion_branch(state, t, a);
            let weight = binom_f64(t, a) * branch.norm_sqr();
            let st = branch.normalized().ok()?;
            Some((weight, DeletionOutcome { shift: a, weight, state: st }))
        })
        .collect::<Vec<_>>();
    let (outcomes, pruned_mass) = Decomposition::prune(raw);
    Ok(Decomposition { outcomes, pruned_mass })
}

/// Branch of the amplitude-damping channel labelled by the number `x` of
/// decayed excitations. Insertion positions of the decayed qubits are
/// averaged out; they only symmetrize the branch and never change `|φ_x⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ADOutcome {
    pub damped: u64,
    /// `n_x = ‖φ_x‖²`.
    pub weight: f64,
    /// Normalized `|φ_x⟩` on `N - x` qubits.
    pub state: SymState,
}

/// `p_w(x) = C(w, x) γ^x (1-γ)^{w-x}`, the chance that `x` of `w` excitations decay.
pub fn decay_probability(w: u64, x: u64, gamma: f64) -> f64 {
    if x > w {
        return 0.0;
    }
    let lhs = if x == 0 { 0.0 } else { x as f64 * gamma.ln() };
    let rhs = if w == x { 0.0 } else { (w - x) as f64 * (1.0 - gamma).ln() };
    if lhs == f64::NEG_INFINITY || rhs == f64::NEG_INFINITY {
        return 0.0;
    }
    (ln_binom(w, x) + lhs + rhs).exp()
}

/// Unnormalized `|φ_x⟩ = Σ_{w ≥ x} a_w √p_w(x) |D^{N-x}_{w-x}⟩`.
pub fn damped_branch(state: &SymState, gamma: f64, x: u64) -> SymState {
    let n = state.n_qubits();
    let mut out = SymState::zeros(n - x);
    for w in x..=n {
        let p = decay_probability(w, x, gamma);
        out.amps_mut()[(w - x) as usize] = state.amp(w) * p.sqrt();
    }
    out
}

/// Applies `γ`-amplitude damping to every qubit.
pub fn amplitude_damp(state: &SymState, gamma: f64) -> Result<Decomposition<ADOutcome>> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(invalid(format!("damping probability {gamma} outside [0, 1]")));
    }
    let raw = (0..=state.n_qubits())
        .filter_map(|x| {
            let branch = damped_branch(state, gamma, x);
            let weight = branch.norm_sqr();
            let st = branch.normalized().ok()?;
            Some((weight, ADOutcome { damped: x, weight, state: st }))
        })
        .collect::<Vec<_>>();
    let (outcomes, pruned_mass) = Decomposition::prune(raw);
    Ok(Decomposition { outcomes, pruned_mass })
}

/// Variance of the weight distribution `probs[i]` over `weights[i]`, after
/// normalizing the probabilities. Returns `(total mass, variance)`.
fn weighted_variance(entries: &[(f64, f64)]) -> (f64, f64) {
    let mass: f64 = entries.iter().map(|(p, _)| p).sum();
    if mass <= 0.0 {
        return (0.0, 0.0);
    }
    let mean = entries.iter().map(|(p, w)| p * w).sum::<f64>() / mass;
    let var = entries.iter().map(|(p, w)| p * (w - mean).powi(2)).sum::<f64>() / mass;
    (mass, var)
}

/// QFI of `|+_L⟩` after `t` deletions, `4 Σ_a C(t,a) n_a v_a`.
///
/// Valid because the branches for different `a` are supported on distinct
/// weights modulo `g` whenever `t < min(g, n)`, so the mixture is block diagonal.
pub fn deletion_qfi(params: &GnuParams, t: u64) -> Result<f64> {
    if t >= params.distance() {
        return Err(precondition(format!(
            "deletion QFI formula needs t < min(g, n) = {}, got t = {t}",
            params.distance()
        )));
    }
    let plus = make_logical(params, Label::Plus).state;
    let n_tot = params.n_qubits();
    let mut qfi = 0.0;
    for a in 0..=t {
        let entries: Vec<(f64, f64)> = (0..=params.n())
            .map(|k| params.lattice_weight(k))
            .filter(|&w| w >= a && w - a <= n_tot - t)
            .map(|w| (plus.amp(w).norm_sqr() * binom_ratio(n_tot, t, w, a), (w - a) as f64))
            .collect();
        let (mass, var) = weighted_variance(&entries);
        qfi += 4.0 * binom_f64(t, a) * mass * var;
    }
    Ok(qfi)
}

/// Convexity upper bound `4 Σ_x n_x q_x` on the QFI of `|+_L⟩` after damping.
pub fn ad_qfi_bound(params: &GnuParams, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(invalid(format!("damping probability {gamma} outside [0, 1]")));
    }
    let plus = make_logical(params, Label::Plus).state;
    let weights: Vec<u64> = (0..=params.n()).map(|k| params.lattice_weight(k)).collect();
    let top = *weights.last().unwrap_or(&0);
    let mut bound = 0.0;
    for x in 0..=top {
        let entries: Vec<(f64, f64)> = weights
            .iter()
            .filter(|&&w| w >= x)
            .map(|&w| (plus.amp(w).norm_sqr() * decay_probability(w, x, gamma), (w - x) as f64))
            .collect();
        let (mass, var) = weighted_variance(&entries);
        bound += 4.0 * mass * var;
    }
    Ok(bound)
}

/// Sum of branch probabilities, for conservation checks.
pub fn total_weight<T>(d: &Decomposition<T>, weight: impl Fn(&T) -> f64) -> f64 {
    d.outcomes.iter().map(weight).sum::<f64>() + d.pruned_mass
}
