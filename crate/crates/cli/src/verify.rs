//! Small-N oracle suite: each check compares a library route against an
//! independent brute-force computation.

use num_rational::BigRational;

use symsense::codes::{codeword, make_logical, GnuParams, Label};
use symsense::fullspace::{
    ad_density, amplitude_damp_dense, deletion_density, embed, kl_check, partial_trace, trace_distance, DenseState,
};
use symsense::metrology::{lyapunov_residual, qfi_pure, sld};
use symsense::noise::{amplitude_damp, delete};
use symsense::optimizer::{closed_form, solve_lp, LPInstance};
use symsense::protocols::run_protocol3;
use symsense::symcore::Parity;

use crate::commands::num;
use crate::output::{Output, Table};

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> symsense::Result<(bool, String)>) -> Check {
    match f() {
        Ok((pass, detail)) => Check { name, pass, detail },
        Err(e) => Check { name, pass: false, detail: format!("error: {e}") },
    }
}

fn code(g: u64, n: u64, u: u64, s: u64) -> symsense::Result<GnuParams> {
    GnuParams::with_integer_scale(g, n, u, s)
}

/// `QFI = g²n` against the direct variance.
fn qfi_closed_form() -> symsense::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (g, n, u, s) in [(2, 2, 1, 0), (3, 3, 1, 0), (3, 3, 2, 1), (5, 5, 1, 4)] {
        let p = code(g, n, u, s)?;
        let q = qfi_pure(&make_logical(&p, Label::Plus).state);
        worst = worst.max((q - (g * g * n) as f64).abs());
    }
    Ok((worst < 1e-9, format!("max |QFI - g^2 n| = {}", num(worst))))
}

/// SLD eigenvalues at `±2√v` with a vanishing Lyapunov residual.
fn sld_spectrum() -> symsense::Result<(bool, String)> {
    let p = code(3, 3, 1, 0)?;
    let st = make_logical(&p, Label::Plus).state.apply_signal(0.3);
    let dec = sld(&st)?;
    let v = st.jz_moments().variance;
    let err = (dec.eigval_plus - 2.0 * v.sqrt()).abs() + (dec.eigval_minus + 2.0 * v.sqrt()).abs();
    let res = lyapunov_residual(&st, &dec);
    Ok((err < 1e-9 && res < 1e-9, format!("eigenvalue error {}, residual {}", num(err), num(res))))
}

/// Symmetric deletion branches against a dense partial trace.
fn deletion_vs_partial_trace() -> symsense::Result<(bool, String)> {
    let p = code(2, 3, 1, 1)?;
    let plus = make_logical(&p, Label::Plus).state;
    let n = p.n_qubits() as usize;
    let mut worst = 0.0f64;
    for t in 1..=2usize {
        let sym = deletion_density(&delete(&plus, t as u64)?, n - t)?;
        let traced: Vec<usize> = (n - t..n).collect();
        let dense = partial_trace(&embed(&plus)?.density(), n, &traced)?;
        worst = worst.max(trace_distance(&sym, &dense));
    }
    Ok((worst < 1e-10, format!("max trace distance {}", num(worst))))
}

/// Symmetric damping branches against all `2^N` Kraus strings.
fn damping_vs_kraus() -> symsense::Result<(bool, String)> {
    let p = code(2, 2, 1, 1)?;
    let plus = make_logical(&p, Label::Plus).state;
    let n = p.n_qubits() as usize;
    let mut worst = 0.0f64;
    for gamma in [0.05, 0.3, 0.8] {
        let sym = ad_density(&amplitude_damp(&plus, gamma)?, n)?;
        let dense = amplitude_damp_dense(&embed(&plus)?, gamma)?;
        worst = worst.max(trace_distance(&sym, &dense));
    }
    Ok((worst < 1e-10, format!("max trace distance {}", num(worst))))
}

/// The `(3, 3, 1)` code satisfies the Knill-Laflamme conditions for one error.
fn knill_laflamme() -> symsense::Result<(bool, String)> {
    let p = code(3, 3, 1, 0)?;
    let states: Vec<DenseState> =
        [Parity::Even, Parity::Odd].into_iter().map(|q| embed(&codeword(&p, q))).collect::<Result<_, _>>()?;
    let r = kl_check(&states, 1)?;
    Ok((r.max_violation < 1e-10, format!("max violation {} over {} Paulis", num(r.max_violation), r.checked)))
}

/// `{|000⟩, |111⟩}` must fail the same test.
fn knill_laflamme_negative() -> symsense::Result<(bool, String)> {
    let states = vec![DenseState::basis(3, 0)?, DenseState::basis(3, 7)?];
    let r = kl_check(&states, 1)?;
    Ok((r.max_violation > 0.5, format!("violation {}", num(r.max_violation))))
}

/// LP vertex enumeration agrees with the closed-form optimum.
fn lp_optimum() -> symsense::Result<(bool, String)> {
    let inst = LPInstance::parse("1/2", "3/2", "1", "0", "0")?;
    let sol = solve_lp(&inst)?;
    let cf = closed_form(&inst);
    let pass = (sol.alpha.clone(), sol.gamma.clone()) == cf;
    Ok((pass, format!("LP ({}, {}), closed form ({}, {})", sol.alpha, sol.gamma, cf.0, cf.1)))
}

/// The iterated prior exponent approaches 1 from below.
fn protocol3_fixed_point() -> symsense::Result<(bool, String)> {
    let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    let cs = run_protocol3(&r(1, 2), 60, &r(3, 2), &r(0, 1), &r(0, 1))?;
    let last = cs.last().map(symsense::optimizer::to_f64).unwrap_or(0.0);
    let monotone = cs.windows(2).all(|w| w[0] <= w[1]);
    Ok((monotone && (1.0 - last).abs() < 1e-6, format!("c_60 = {}", num(last))))
}

pub fn run() -> Output {
    let checks = [
        check("qfi_closed_form", qfi_closed_form),
        check("sld_spectrum", sld_spectrum),
        check("deletion_vs_partial_trace", deletion_vs_partial_trace),
        check("damping_vs_kraus", damping_vs_kraus),
        check("knill_laflamme_331", knill_laflamme),
        check("knill_laflamme_repetition_fails", knill_laflamme_negative),
        check("lp_vertex_vs_closed_form", lp_optimum),
        check("protocol3_fixed_point", protocol3_fixed_point),
    ];
    let mut t = Table::new("verify", &["check", "pass", "detail"]);
    for c in &checks {
        t.push(vec![c.name.to_string(), c.pass.to_string(), c.detail.clone()]);
    }
    Output { failed: checks.iter().any(|c| !c.pass), tables: vec![t], ..Default::default() }
}
