use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;

use symsense::codes::{code_projector_overlap, codeword, make_logical, CodewordRecord, GnuParams, Label};
use symsense::symcore::{Parity, SymState};

/// Moment `Σ |a_w|² w^k`, computed straight from the amplitudes.
fn weight_moment(st: &SymState, k: i32) -> f64 {
    st.amps().iter().enumerate().map(|(w, a)| a.norm_sqr() * (w as f64).powi(k)).sum()
}

#[test]
fn overlap_tracks_signal_on_smallest_code() {
    let p = GnuParams::with_integer_scale(2, 2, 1, 0).unwrap();
    let delta = 0.4f64;
    let st = make_logical(&p, Label::Plus).state.apply_signal(delta);
    let o = code_projector_overlap(&p, &st);
    assert!((o.p_plus - delta.cos().powi(4)).abs() < 1e-14);
    assert!((o.p_minus - delta.sin().powi(4)).abs() < 1e-14);
    assert!((o.p_plus + o.p_minus + o.p_other - 1.0).abs() < 1e-14);
}

#[test]
fn off_lattice_dicke_state_leaves_code_space() {
    let p = GnuParams::with_integer_scale(3, 3, 2, 1).unwrap();
    let o = code_projector_overlap(&p, &SymState::dicke(p.n_qubits(), 5).unwrap());
    assert_eq!((o.p_plus, o.p_minus), (0.0, 0.0));
    assert!((o.p_other - 1.0).abs() < 1e-15);
}

#[test]
fn codewords_share_first_moment_and_second_from_three() {
    for g in 1..=5u64 {
        for n in 2..=8u64 {
            let p = GnuParams::with_integer_scale(g, n, 1, g).unwrap();
            let zero = codeword(&p, Parity::Even);
            let one = codeword(&p, Parity::Odd);
            assert!((weight_moment(&zero, 1) - weight_moment(&one, 1)).abs() < 1e-10, "g={g} n={n}");
            if n >= 3 {
                assert!((weight_moment(&zero, 2) - weight_moment(&one, 2)).abs() < 1e-9, "g={g} n={n}");
            }
        }
    }
    // n = 2 splits the second moments.
    let p = GnuParams::with_integer_scale(2, 2, 1, 0).unwrap();
    let gap = weight_moment(&codeword(&p, Parity::Even), 2) - weight_moment(&codeword(&p, Parity::Odd), 2);
    assert!((gap - 4.0).abs() < 1e-12);
}

#[test]
fn plus_variance_over_parameter_sweep() {
    for i in 0..50u64 {
        let g = 1 + i % 7;
        let n = 1 + (i * 3) % 11;
        let u = 1 + i % 3;
        let s = (i * 5) % 9;
        let p = GnuParams::with_integer_scale(g, n, u, s).unwrap();
        let plus = make_logical(&p, Label::Plus).state;
        let var = weight_moment(&plus, 2) - weight_moment(&plus, 1).powi(2);
        let expect = (g * g * n) as f64 / 4.0;
        assert!((var - expect).abs() < 1e-9 * expect.max(1.0), "{p}");
        assert!((plus.jz_moments().variance - expect).abs() < 1e-9 * expect.max(1.0), "{p}");
    }
}

#[test]
fn record_round_trips_through_json() {
    let p = GnuParams::new(3, 3, Ratio::new(4, 3), 1).unwrap();
    let rec = CodewordRecord::from(&make_logical(&p, Label::Minus));
    let text = serde_json::to_string(&rec).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["u"], "4/3");
    assert_eq!(value["label"], "Minus");
    let weights: Vec<u64> = rec.amps.iter().map(|a| a.w).collect();
    assert_eq!(weights, vec![1, 4, 7, 10]);
    assert!(rec.amps.iter().skip(1).step_by(2).all(|a| a.re < 0.0));
    let back: CodewordRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(back, rec);
}

#[test]
fn lattice_constructor_derives_scale() {
    let p = GnuParams::from_lattice(945, 21, 43, 21).unwrap();
    assert_eq!(p.u(), Ratio::new(44, 43));
    assert!(GnuParams::from_lattice(10, 3, 3, 2).is_err());
    assert!(GnuParams::with_integer_scale(0, 3, 1, 0).is_err());
}

fn params_strategy() -> impl Strategy<Value = GnuParams> {
    (1u64..8, 1u64..12, 0u64..6, 0u64..10)
        .prop_map(|(g, n, extra, s)| GnuParams::from_lattice(g * n + extra + s, g, n, s).unwrap())
}

proptest! {
    #[test]
    fn codewords_are_orthonormal_on_their_lattice(p in params_strategy()) {
        let zero = codeword(&p, Parity::Even);
        let one = codeword(&p, Parity::Odd);
        prop_assert!(zero.is_normalized(1e-12));
        prop_assert!(one.is_normalized(1e-12));
        prop_assert_eq!(zero.inner(&one), Complex64::new(0.0, 0.0));
        for (st, parity) in [(&zero, Parity::Even), (&one, Parity::Odd)] {
            for w in st.support(0.0) {
                prop_assert!(w >= p.s() && (w - p.s()) % p.g() == 0);
                prop_assert!(parity.contains((w - p.s()) / p.g()));
            }
        }
    }

    #[test]
    fn logical_labels_project_cleanly(p in params_strategy()) {
        for (label, plus) in [(Label::Plus, true), (Label::Minus, false)] {
            let o = code_projector_overlap(&p, &make_logical(&p, label).state);
            let (hit, miss) = if plus { (o.p_plus, o.p_minus) } else { (o.p_minus, o.p_plus) };
            prop_assert!((hit - 1.0).abs() < 1e-12 && miss.abs() < 1e-12 && o.p_other.abs() < 1e-12);
        }
    }
}
