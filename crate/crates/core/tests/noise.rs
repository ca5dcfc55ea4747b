mod common;

use proptest::prelude::*;

use symsense::codes::{make_logical, GnuParams, Label};
use symsense::fullspace::{ad_density, amplitude_damp_dense, deletion_density, embed, partial_trace, trace_distance};
use symsense::metrology::qfi_mixed;
use symsense::noise::{ad_qfi_bound, amplitude_damp, delete, deletion_qfi, total_weight};
use symsense::symcore::{Branch, SymEnsemble, SymState};

use common::{dense_qfi, random_sym_state, rng};

fn code(g: u64, n: u64, u: u64, s: u64) -> GnuParams {
    GnuParams::with_integer_scale(g, n, u, s).unwrap()
}

#[test]
fn double_deletion_of_code_yields_distinct_residues() {
    let p = code(3, 3, 1, 1);
    let d = delete(&make_logical(&p, Label::Plus).state, 2).unwrap();
    assert_eq!(d.outcomes.len(), 3);
    for (i, x) in d.outcomes.iter().enumerate() {
        let residues: Vec<u64> = x.state.support(1e-14).iter().map(|w| w % 3).collect();
        assert!(residues.windows(2).all(|r| r[0] == r[1]));
        for y in &d.outcomes[i + 1..] {
            assert!(x.state.inner(&y.state).norm() < 1e-14);
            assert_ne!(residues[0], y.state.support(1e-14)[0] % 3);
        }
    }
}

#[test]
fn symmetric_deletion_matches_dense_partial_trace() {
    let mut r = rng(3);
    for k in 0..20u64 {
        let n = 3 + k % 6;
        let st = random_sym_state(n, &mut r);
        let rho = embed(&st).unwrap().density();
        for t in 1..=3.min(n - 1) {
            let sym = deletion_density(&delete(&st, t).unwrap(), (n - t) as usize).unwrap();
            let traced: Vec<usize> = (0..t as usize).collect();
            let dense = partial_trace(&rho, n as usize, &traced).unwrap();
            assert!(trace_distance(&sym, &dense) < 1e-12, "N={n} t={t}");
        }
    }
}

#[test]
fn symmetric_damping_matches_kraus_strings() {
    let mut r = rng(4);
    for k in 0..8u64 {
        let n = 2 + k % 5;
        let st = random_sym_state(n, &mut r);
        let dense_in = embed(&st).unwrap();
        for gamma in [0.0, 0.3, 1.0] {
            let sym = ad_density(&amplitude_damp(&st, gamma).unwrap(), n as usize).unwrap();
            let dense = amplitude_damp_dense(&dense_in, gamma).unwrap();
            assert!(trace_distance(&sym, &dense) < 1e-12, "N={n} gamma={gamma}");
        }
    }
}

#[test]
fn total_damping_leaves_vacuum() {
    let st = random_sym_state(5, &mut rng(5));
    let d = amplitude_damp(&st, 1.0).unwrap();
    for o in &d.outcomes {
        assert_eq!(o.state.n_qubits(), 5 - o.damped);
        assert_eq!(o.state.support(1e-15), vec![0]);
        assert!((o.weight - st.amp(o.damped).norm_sqr()).abs() < 1e-14);
    }
}

#[test]
fn deletion_qfi_matches_dense_mixture() {
    for (g, n, u, s, t) in [(3, 3, 1, 0, 1), (3, 3, 1, 0, 2), (3, 3, 1, 1, 2), (2, 4, 1, 1, 1)] {
        let p = code(g, n, u, s);
        let plus = make_logical(&p, Label::Plus).state;
        let n_rem = (p.n_qubits() - t) as usize;
        let rho = deletion_density(&delete(&plus, t).unwrap(), n_rem).unwrap();
        let oracle = dense_qfi(&rho, n_rem);
        let formula = deletion_qfi(&p, t).unwrap();
        assert!((formula - oracle).abs() < 1e-8 * oracle.max(1.0), "{p} t={t}: {formula} vs {oracle}");
    }
}

#[test]
fn deletion_qfi_matches_block_spectral_route() {
    for (g, n, u, s) in [(5, 5, 1, 4), (6, 4, 2, 3), (3, 7, 1, 2)] {
        let p = code(g, n, u, s);
        let plus = make_logical(&p, Label::Plus).state;
        for t in 0..p.distance() {
            let d = delete(&plus, t).unwrap();
            let branches = d.outcomes.into_iter().map(|o| Branch { prob: o.weight, state: o.state }).collect();
            let mixed = qfi_mixed(&SymEnsemble::new(branches).unwrap()).unwrap();
            let formula = deletion_qfi(&p, t).unwrap();
            assert!((formula - mixed).abs() < 1e-8 * mixed.max(1.0), "{p} t={t}");
        }
        assert!(deletion_qfi(&p, p.distance()).is_err());
    }
}

#[test]
fn deletion_qfi_decreases_with_each_deletion() {
    for (g, n) in [(4, 4), (6, 6), (5, 8), (9, 7)] {
        let p = code(g, n, 2, 1);
        let qfis: Vec<f64> = (0..p.distance()).map(|t| deletion_qfi(&p, t).unwrap()).collect();
        assert!((qfis[0] - (g * g * n) as f64).abs() < 1e-8);
        assert!(qfis.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{p}: {qfis:?}");
    }
}

#[test]
fn damping_bound_dominates_dense_qfi() {
    let p = code(3, 3, 1, 0);
    let plus = make_logical(&p, Label::Plus).state;
    let n = p.n_qubits() as usize;
    for gamma in [0.0, 0.1, 0.4, 0.9] {
        let rho = ad_density(&amplitude_damp(&plus, gamma).unwrap(), n).unwrap();
        let exact = dense_qfi(&rho, n);
        let bound = ad_qfi_bound(&p, gamma).unwrap();
        assert!(exact <= bound + 1e-9, "gamma={gamma}: {exact} > {bound}");
    }
    assert!((ad_qfi_bound(&p, 0.0).unwrap() - 27.0).abs() < 1e-10);
    assert!(ad_qfi_bound(&p, 1.0).unwrap().abs() < 1e-12);
}

#[test]
fn damping_bound_by_branch_variances() {
    // Per-branch variances recomputed from the damped states themselves.
    let p = code(3, 3, 1, 0);
    let plus = make_logical(&p, Label::Plus).state;
    let d = amplitude_damp(&plus, 0.1).unwrap();
    let direct: f64 = d.outcomes.iter().map(|o| 4.0 * o.weight * o.state.jz_moments().variance).sum();
    assert!((ad_qfi_bound(&p, 0.1).unwrap() - direct).abs() < 1e-10);
}

fn state_strategy() -> impl Strategy<Value = SymState> {
    (1u64..30, any::<u64>()).prop_map(|(n, seed)| random_sym_state(n, &mut rng(seed)))
}

proptest! {
    #[test]
    fn deletion_conserves_probability(st in state_strategy(), t in 0u64..30) {
        let t = t.min(st.n_qubits());
        let d = delete(&st, t).unwrap();
        prop_assert!((total_weight(&d, |o| o.weight) - 1.0).abs() < 1e-12);
        for o in &d.outcomes {
            prop_assert_eq!(o.state.n_qubits(), st.n_qubits() - t);
            prop_assert!(o.state.is_normalized(1e-12));
        }
    }

    #[test]
    fn damping_conserves_probability(st in state_strategy(), gamma in 0.0f64..=1.0) {
        let d = amplitude_damp(&st, gamma).unwrap();
        prop_assert!((total_weight(&d, |o| o.weight) - 1.0).abs() < 1e-12);
        for o in &d.outcomes {
            prop_assert_eq!(o.state.n_qubits(), st.n_qubits() - o.damped);
        }
    }
}
