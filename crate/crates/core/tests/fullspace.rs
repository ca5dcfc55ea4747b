mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use symsense::codes::{codeword, GnuParams};
use symsense::fullspace::{
    diagrams, embed, enumerate_syt, enumerate_syt_brute_force, general_qec_small_n, j2_outcomes, j2_prefix_matrix,
    kl_check, paulis_up_to_weight, permute_matrix, schur_basis, sequential_j2_measure, symmetrize_channel,
    tableau_project, DenseOp, DenseState, KrausOp, Pauli, PauliString, StandardTableau, YoungDiagram2,
};
use symsense::symcore::Parity;

use common::{dense_signal, random_dense_state, random_sym_state, rng};

fn code_states(g: u64, n: u64, s: u64) -> Vec<DenseState> {
    let p = GnuParams::with_integer_scale(g, n, 1, s).unwrap();
    [Parity::Even, Parity::Odd].into_iter().map(|q| embed(&codeword(&p, q)).unwrap()).collect()
}

fn jz_matrix(n: usize) -> DenseOp {
    DenseOp::from_fn(1 << n, 1 << n, |r, c| {
        if r == c {
            Complex64::from(n as f64 / 2.0 - r.count_ones() as f64)
        } else {
            Complex64::default()
        }
    })
}

#[test]
fn tableau_counts_agree_three_ways() {
    for n in 1..=12usize {
        let fast = enumerate_syt(n);
        let brute = enumerate_syt_brute_force(n);
        assert_eq!(fast, brute, "N={n}");
        let mut dim = 0u128;
        for (d, ts) in &fast {
            assert_eq!(ts.len() as u128, d.syt_count(), "N={n} {d:?}");
            assert_eq!(d.syt_count(), d.syt_count_hook());
            assert!(ts.iter().all(|t| t.diagram() == *d && t.block_dim() == d.j_doubled() + 1));
            dim += d.syt_count() * d.ssyt_count();
        }
        assert_eq!(dim, 1u128 << n, "N={n}");
    }
    let six = YoungDiagram2::new(4, 2).unwrap();
    assert_eq!(enumerate_syt(6).into_iter().find(|(d, _)| *d == six).unwrap().1.len(), 9);
}

#[test]
fn two_box_diagrams() {
    let d = diagrams(2);
    assert_eq!(d, vec![YoungDiagram2::new(2, 0).unwrap(), YoungDiagram2::new(1, 1).unwrap()]);
    assert!(YoungDiagram2::new(1, 2).is_err());
    assert_eq!(StandardTableau::symmetric(5).block_dim(), 6);
    assert_eq!(StandardTableau::from_rows(&[0, 1, 0]).unwrap().block_dim(), 2);
    assert!(StandardTableau::from_path(vec![1, 3]).is_err());
}

#[test]
fn symmetric_input_selects_one_row_tableau() {
    let mut r = rng(41);
    for n in 1..=8u64 {
        let out = j2_outcomes(&embed(&random_sym_state(n, &mut r)).unwrap()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].tableau, StandardTableau::symmetric(n as usize));
        assert!((out[0].probability - 1.0).abs() < 1e-12);
        let (t, _) = sequential_j2_measure(&embed(&random_sym_state(n, &mut r)).unwrap(), &mut r).unwrap();
        assert_eq!(t, StandardTableau::symmetric(n as usize));
    }
}

#[test]
fn prefix_casimirs_commute_with_each_other_and_jz() {
    for n in 2..=7usize {
        let jz = jz_matrix(n);
        let mats: Vec<DenseOp> = (1..=n).map(|k| j2_prefix_matrix(n, k).unwrap()).collect();
        for (i, a) in mats.iter().enumerate() {
            assert!((a * &jz - &jz * a).norm() < 1e-10, "N={n} k={}", i + 1);
            for b in &mats[i + 1..] {
                assert!((a * b - b * a).norm() < 1e-9, "N={n}");
            }
        }
    }
}

#[test]
fn tableau_outcomes_partition_random_states() {
    let mut r = rng(42);
    for n in 2..=7usize {
        let st = random_dense_state(n, &mut r);
        let out = j2_outcomes(&st).unwrap();
        let total: f64 = out.iter().map(|o| o.probability).sum();
        assert!((total - 1.0).abs() < 1e-12, "N={n}");
        for o in &out {
            let v = tableau_project(&o.tableau, st.amps()).unwrap();
            let p: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            assert!((p - o.probability).abs() < 1e-12);
        }
    }
}

#[test]
fn coupled_basis_diagonalizes_every_prefix() {
    for n in 1..=6usize {
        let basis = schur_basis(n).unwrap();
        let u = basis.matrix();
        let dim = 1 << n;
        assert!((u.adjoint() * &u - DenseOp::identity(dim, dim)).norm() < 1e-11);
        for b in &basis.blocks {
            assert_eq!(b.vectors.len(), b.tableau.block_dim());
            for k in 1..=n {
                let m = j2_prefix_matrix(n, k).unwrap();
                let j = b.tableau.j_path()[k - 1] as f64 / 2.0;
                for v in &b.vectors {
                    let x = nalgebra::DVector::from_column_slice(v);
                    assert!((&m * &x - &x * Complex64::from(j * (j + 1.0))).norm() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn symmetrization_examples() {
    let rho = DenseState::basis(3, 0b001).unwrap().density();
    let s = symmetrize_channel(&rho, 3).unwrap();
    for x in [0b001, 0b010, 0b100] {
        assert!((s[(x, x)].re - 1.0 / 3.0).abs() < 1e-14);
    }
    assert!((s.trace().re - 1.0).abs() < 1e-14);
    // A symmetric state is a fixed point.
    let sym = embed(&random_sym_state(4, &mut rng(43))).unwrap().density();
    assert!((symmetrize_channel(&sym, 4).unwrap() - &sym).norm() < 1e-12);
}

#[test]
fn symmetrization_ignores_input_order() {
    let mut r = rng(44);
    for n in 2..=6usize {
        let rho = random_dense_state(n, &mut r).density();
        let base = symmetrize_channel(&rho, n).unwrap();
        let perm: Vec<usize> = (0..n).map(|q| (q + 1) % n).collect();
        let shuffled = symmetrize_channel(&permute_matrix(&rho, n, &perm).unwrap(), n).unwrap();
        assert!((base.clone() - shuffled).norm() < 1e-12, "N={n}");
        let after = permute_matrix(&base, n, &perm).unwrap();
        assert!((base - after).norm() < 1e-12, "N={n}");
    }
    assert!(permute_matrix(&DenseOp::identity(4, 4), 2, &[0, 0]).is_err());
}

#[test]
fn rotated_code_satisfies_knill_laflamme() {
    let rotated: Vec<DenseState> = code_states(3, 3, 0).iter().map(|c| dense_signal(c, 0.7)).collect();
    let r = kl_check(&rotated, 1).unwrap();
    assert!(r.max_violation < 1e-10, "{}", r.max_violation);
    assert_eq!(r.checked, paulis_up_to_weight(9, 2).len());
}

#[test]
fn short_code_fails_knill_laflamme() {
    let r = kl_check(&code_states(2, 2, 0), 1).unwrap();
    assert!(r.max_violation > 0.1, "{}", r.max_violation);
    assert!(r.worst.weight() <= 2);
}

#[test]
fn pauli_enumeration_counts() {
    for (n, w) in [(3, 1), (5, 2), (9, 2)] {
        let expect: usize =
            (0..=w).map(|k| symsense::symcore::binom_f64(n as u64, k as u64) as usize * 3usize.pow(k as u32)).sum();
        assert_eq!(paulis_up_to_weight(n, w).len(), expect);
    }
    assert_eq!(PauliString::single(2, Pauli::Y).to_string(), "Y3");
}

#[test]
fn identity_channel_is_recovered_perfectly() {
    let id: Vec<KrausOp> = vec![vec![(Complex64::from(1.0), PauliString::identity())]];
    let r = general_qec_small_n(&code_states(2, 2, 0), &id, false).unwrap();
    assert!((r.fidelity - 1.0).abs() < 1e-12);
    assert!((r.channel_trace - 1.0).abs() < 1e-12);
    assert!(r.kl_consistent);
    assert!(r.blocks.iter().all(|b| b.rank_ok));
}

#[test]
fn single_qubit_errors_are_corrected() {
    let n = 9usize;
    let p = 0.2f64;
    let mut kraus: Vec<KrausOp> = vec![vec![(Complex64::from((1.0 - p).sqrt()), PauliString::identity())]];
    for q in 0..n {
        for o in [Pauli::X, Pauli::Y, Pauli::Z] {
            kraus.push(vec![(Complex64::from((p / (3 * n) as f64).sqrt()), PauliString::single(q, o))]);
        }
    }
    let code = code_states(3, 3, 0);
    for symmetrize in [false, true] {
        let r = general_qec_small_n(&code, &kraus, symmetrize).unwrap();
        assert!((r.channel_trace - 1.0).abs() < 1e-12);
        assert!((r.fidelity - 1.0).abs() < 1e-9, "symmetrize={symmetrize}: {}", r.fidelity);
        assert!(r.kl_consistent && r.blocks.iter().all(|b| b.rank_ok));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coupled_basis_coefficients_preserve_norm(n in 1usize..7, seed in any::<u64>()) {
        let st = random_dense_state(n, &mut rng(seed));
        let basis = schur_basis(n).unwrap();
        let total: f64 = basis.coefficients(st.amps()).iter().flatten().map(|c| c.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tableau_rows_round_trip(rows in prop::collection::vec(0u8..2, 1..12)) {
        if let Ok(t) = StandardTableau::from_rows(&rows) {
            prop_assert_eq!(t.rows(), rows);
            prop_assert_eq!(t.diagram().n_boxes(), t.n_boxes());
        }
    }
}
