mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use symsense::codes::{code_projector_overlap, make_logical, GnuParams, Label};
use symsense::fullspace::{embed, DenseOp};
use symsense::metrology::{
    code_basis_probabilities, fi_code_basis, fi_phase_readout, lyapunov_residual, phase_readout_probabilities,
    qfi_mixed, qfi_pure, sld,
};
use symsense::symcore::{Branch, SymEnsemble, SymState};

use common::{dense_qfi, random_sym_state, rng};

fn code(g: u64, n: u64, u: u64, s: u64) -> GnuParams {
    GnuParams::with_integer_scale(g, n, u, s).unwrap()
}

/// Classical Fisher information of a probability vector by central differences.
fn fd_fisher(probs: impl Fn(f64) -> Vec<f64>, theta: f64, h: f64) -> f64 {
    let (lo, mid, hi) = (probs(theta - h), probs(theta), probs(theta + h));
    mid.iter()
        .zip(lo.iter().zip(&hi))
        .filter(|(p, _)| **p > 1e-12)
        .map(|(p, (a, b))| ((b - a) / (2.0 * h)).powi(2) / p)
        .sum()
}

#[test]
fn plus_state_qfi_is_g_squared_n() {
    for (g, n, u, s) in [(1, 1, 1, 0), (3, 3, 1, 0), (21, 43, 2, 21), (40, 50, 1, 940)] {
        let p = code(g, n, u, s);
        let q = qfi_pure(&make_logical(&p, Label::Plus).state);
        let expect = (g * g * n) as f64;
        assert!((q - expect).abs() < 1e-9 * expect, "{p}");
    }
    assert_eq!(qfi_pure(&SymState::dicke(9, 4).unwrap()), 0.0);
}

#[test]
fn mixed_qfi_agrees_with_dense_spectral_oracle() {
    let mut r = rng(21);
    for k in 0..10u64 {
        let n = 2 + k % 6;
        let branches: Vec<Branch> =
            [0.6, 0.3, 0.1].into_iter().map(|prob| Branch { prob, state: random_sym_state(n, &mut r) }).collect();
        let dim = 1usize << n;
        let mut rho = DenseOp::zeros(dim, dim);
        for b in &branches {
            rho += embed(&b.state).unwrap().density() * Complex64::from(b.prob);
        }
        let sym = qfi_mixed(&SymEnsemble::new(branches).unwrap()).unwrap();
        let dense = dense_qfi(&rho, n as usize);
        assert!((sym - dense).abs() < 1e-9 * dense.max(1.0), "N={n}: {sym} vs {dense}");
    }
}

#[test]
fn mixed_qfi_of_pure_state_reduces_to_variance() {
    let st = random_sym_state(17, &mut rng(22));
    let mixed = qfi_mixed(&SymEnsemble::pure(st.clone())).unwrap();
    assert!((mixed - qfi_pure(&st)).abs() < 1e-9 * mixed);
}

#[test]
fn sld_of_rotated_code_state() {
    let p = code(3, 3, 1, 0);
    let st = make_logical(&p, Label::Plus).state.apply_signal(0.3);
    let dec = sld(&st).unwrap();
    let v = st.jz_moments().variance;
    assert!((dec.eigval_plus - 2.0 * v.sqrt()).abs() < 1e-12);
    assert!((dec.eigval_minus + 2.0 * v.sqrt()).abs() < 1e-12);
    assert!(dec.b_vector.inner(&st).norm() < 1e-12);
    assert!((dec.b_vector.norm_sqr() - 1.0).abs() < 1e-12);
    assert!(lyapunov_residual(&st, &dec) < 1e-12);
}

#[test]
fn lyapunov_residual_vanishes_on_random_states() {
    let mut r = rng(23);
    for k in 0..100u64 {
        let n = 1 + k % 32;
        let st = random_sym_state(n, &mut r);
        let dec = sld(&st).unwrap();
        assert!(lyapunov_residual(&st, &dec) < 1e-10, "N={n}");
        // QFI equals ⟨L²⟩ for a pure state.
        let l = dec.matrix();
        let v = nalgebra::DVector::from_column_slice(st.amps());
        let l2 = (v.adjoint() * &l * &l * &v)[(0, 0)].re;
        assert!((l2 - qfi_pure(&st)).abs() < 1e-9 * l2.max(1.0), "N={n}");
    }
}

#[test]
fn code_basis_probabilities_match_projection() {
    for (g, n, s) in [(2, 2, 0), (3, 5, 1), (4, 3, 2)] {
        let p = code(g, n, 1, s);
        let plus = make_logical(&p, Label::Plus).state;
        for i in 0..25 {
            let theta = 0.13 * i as f64;
            let o = code_projector_overlap(&p, &plus.apply_signal(theta));
            let (pp, pm) = code_basis_probabilities(&p, theta);
            assert!((o.p_plus - pp).abs() < 1e-12 && (o.p_minus - pm).abs() < 1e-12, "{p} θ={theta}");
        }
    }
}

#[test]
fn code_basis_fi_matches_finite_differences_of_projection() {
    for (g, n, s) in [(2, 3, 0), (3, 3, 1), (5, 4, 0)] {
        let p = code(g, n, 1, s);
        let plus = make_logical(&p, Label::Plus).state;
        let probs = |t: f64| {
            let o = code_projector_overlap(&p, &plus.apply_signal(t));
            vec![o.p_plus, o.p_minus, o.p_other]
        };
        for theta in [0.05, 0.2, 0.37, 0.6] {
            let fd3 = fd_fisher(probs, theta, 1e-5);
            let fd2 = fd_fisher(|t| probs(t)[..2].to_vec(), theta, 1e-5);
            let f = fi_code_basis(&p, theta);
            assert!((f.three_outcome - fd3).abs() < 1e-5 * fd3.max(1.0), "{p} θ={theta}: {} vs {fd3}", f.three_outcome);
            assert!((f.two_outcome - fd2).abs() < 1e-5 * fd2.max(1.0), "{p} θ={theta}");
        }
    }
}

#[test]
fn code_basis_fi_is_ordered_and_bounded_by_qfi() {
    for (g, n) in [(2, 2), (3, 5), (7, 4), (1, 9)] {
        let p = code(g, n, 1, 0);
        let qfi = (g * g * n) as f64;
        for i in 0..60 {
            let f = fi_code_basis(&p, 0.05 * i as f64);
            assert!(f.two_outcome <= f.three_outcome + 1e-9);
            assert!(f.three_outcome <= qfi * (1.0 + 1e-9), "{p}");
        }
        assert_eq!(fi_code_basis(&p, 0.0).two_outcome, 0.0);
    }
    let single = fi_code_basis(&code(5, 1, 1, 0), 0.4);
    assert!((single.two_outcome - 25.0).abs() < 1e-10);
}

#[test]
fn phase_readout_fi_matches_finite_differences() {
    let dphi = 1.7;
    for phi_amp in [std::f64::consts::FRAC_PI_4 + 0.05, 0.3, 1.1] {
        for phase in [0.2, 1.0, 2.5, -0.8] {
            let probs = |t: f64| {
                let (a, b) = phase_readout_probabilities(phi_amp, phase + dphi * t);
                vec![a, b]
            };
            let fd = fd_fisher(probs, 0.0, 1e-6);
            let f = fi_phase_readout(phi_amp, phase, dphi);
            assert!((f - fd).abs() < 1e-6 * fd.max(1.0), "φ={phi_amp} Φ={phase}: {f} vs {fd}");
        }
    }
}

#[test]
fn phase_readout_probabilities_from_amplitudes() {
    // Project cos φ|0⟩ + sin φ e^{iΦ}|1⟩ onto |±⟩ directly.
    for (phi_amp, phase) in [(0.3, 0.9), (1.2, -2.0), (0.0, 1.0)] {
        let (c, s) = (f64::cos(phi_amp), f64::sin(phi_amp));
        let one = Complex64::from_polar(s, phase);
        let plus = ((c + one) / 2f64.sqrt()).norm_sqr();
        let minus = ((c - one) / 2f64.sqrt()).norm_sqr();
        let (pp, pm) = phase_readout_probabilities(phi_amp, phase);
        assert!((pp - plus).abs() < 1e-14 && (pm - minus).abs() < 1e-14);
    }
}

proptest! {
    #[test]
    fn phase_readout_fi_never_exceeds_derivative_squared(
        phi_amp in 0.0f64..std::f64::consts::PI,
        phase in -4.0f64..4.0,
        d in -3.0f64..3.0,
    ) {
        let f = fi_phase_readout(phi_amp, phase, d);
        prop_assert!(f >= 0.0 && f <= d * d * (1.0 + 1e-12));
    }

    #[test]
    fn sld_eigenvectors_are_orthonormal(n in 1u64..40, seed in any::<u64>()) {
        let st = random_sym_state(n, &mut rng(seed));
        let dec = sld(&st).unwrap();
        prop_assert!(dec.eigvec_plus.inner(&dec.eigvec_minus).norm() < 1e-12);
        prop_assert!((dec.eigvec_plus.norm_sqr() - 1.0).abs() < 1e-12);
        let v = st.jz_moments().variance;
        prop_assert!((dec.eigval_plus * dec.eigval_plus - 4.0 * v).abs() < 1e-9 * v.max(1.0));
    }
}
