//! Shifted gnu codes: parameters, logical codewords and code-basis readout.

use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::symcore::{binom_f64, Parity, SymState};

/// Code parameters `(g, n, u, s)` with `N = g·n·u + s` qubits.
///
/// `u` is held as an exact rational so the integrality of `N` is checked
/// without rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GnuParams {
    g: u64,
    n: u64,
    u: Ratio<u64>,
    s: u64,
    n_qubits: u64,
}

impl GnuParams {
    /// Validates `g, n ≥ 1`, `u ≥ 1` and that `g·n·u` is an integer.
    pub fn new(g: u64, n: u64, u: Ratio<u64>, s: u64) -> Result<Self> {
        if g == 0 || n == 0 {
            return Err(invalid("g and n must be positive"));
        }
        if *u.denom() == 0 || u < Ratio::from_integer(1) {
            return Err(invalid(format!("scale u = {u} must be at least 1")));
        }
        let span = u * Ratio::from_integer(g * n);
        if !span.is_integer() {
            return Err(invalid(format!("g*n*u = {span} is not an integer")));
        }
        Ok(Self { g, n, u, s, n_qubits: span.to_integer() + s })
    }

    /// Integer-scale convenience constructor.
    pub fn with_integer_scale(g: u64, n: u64, u: u64, s: u64) -> Result<Self> {
        Self::new(g, n, Ratio::from_integer(u), s)
    }

    /// Code on `n_qubits` qubits with lattice `g k + s`; `u` is derived.
    pub fn from_lattice(n_qubits: u64, g: u64, n: u64, s: u64) -> Result<Self> {
        if g == 0 || n == 0 {
            return Err(invalid("g and n must be positive"));
        }
        if n_qubits < g * n + s {
            return Err(invalid(format!("lattice g*n + s = {} exceeds N = {n_qubits}", g * n + s)));
        }
        Self::new(g, n, Ratio::new(n_qubits - s, g * n), s)
    }

    pub fn g(&self) -> u64 {
        self.g
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn u(&self) -> Ratio<u64> {
        self.u
    }
    pub fn s(&self) -> u64 {
        self.s
    }
    /// Total qubit count `N`.
    pub fn n_qubits(&self) -> u64 {
        self.n_qubits
    }
    /// Code distance `min(g, n)`.
    pub fn distance(&self) -> u64 {
        self.g.min(self.n)
    }
    /// Weight of the `k`-th lattice site, `g k + s`.
    pub fn lattice_weight(&self, k: u64) -> u64 {
        self.g * k + self.s
    }

    /// Same gap and occupancy on a different qubit count and shift.
    pub fn shifted(&self, n_qubits: u64, s: u64) -> Result<Self> {
        Self::from_lattice(n_qubits, self.g, self.n, s)
    }

    /// `u` formatted as `"p/q"`.
    pub fn u_string(&self) -> String {
        format!("{}/{}", self.u.numer(), self.u.denom())
    }

    /// `u` as a float.
    pub fn u_f64(&self) -> f64 {
        self.u.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for GnuParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} n={} u={} s={} N={}", self.g, self.n, self.u_string(), self.s, self.n_qubits)
    }
}

/// Logical basis labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Zero,
    One,
    Plus,
    Minus,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::Zero => "zero",
            Label::One => "one",
            Label::Plus => "plus",
            Label::Minus => "minus",
        };
        f.write_str(s)
    }
}

/// A labelled logical state of a gnu code.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalState {
    pub params: GnuParams,
    pub state: SymState,
    pub label: Label,
}

/// Logical codeword `|j_L⟩` for `j = 0` (even `k`) or `j = 1` (odd `k`).
pub fn codeword(params: &GnuParams, parity: Parity) -> SymState {
    let n = params.n();
    let scale = 0.5f64.powf((n as f64 - 1.0) / 2.0);
    let mut st = SymState::zeros(params.n_qubits());
    for k in (0..=n).filter(|&k| parity.contains(k)) {
        st.amps_mut()[params.lattice_weight(k) as usize] = Complex64::from(scale * binom_f64(n, k).sqrt());
    }
    st
}

/// `c0 |0_L⟩ + c1 |1_L⟩` (not renormalized).
pub fn logical_combination(params: &GnuParams, c0: Complex64, c1: Complex64) -> SymState {
    let zero = codeword(params, Parity::Even);
    let one = codeword(params, Parity::Odd);
    SymState::combine(c0, &zero, c1, &one).expect("codewords share a qubit count")
}

/// Builds the labelled logical state.
pub fn make_logical(params: &GnuParams, label: Label) -> LogicalState {
    let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    let (c0, c1) = match label {
        Label::Zero => (Complex64::from(1.0), Complex64::zero()),
        Label::One => (Complex64::zero(), Complex64::from(1.0)),
        Label::Plus => (h, h),
        Label::Minus => (h, -h),
    };
    LogicalState { params: *params, state: logical_combination(params, c0, c1), label }
}

/// Readout probabilities in the logical plus/minus basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeOverlap {
    pub p_plus: f64,
    pub p_minus: f64,
    /// Probability of leaving the code space.
    pub p_other: f64,
}

/// Projects `state` onto `|+_L⟩`, `|−_L⟩` and the complement.
pub fn code_projector_overlap(params: &GnuParams, state: &SymState) -> CodeOverlap {
    let plus = make_logical(params, Label::Plus).state;
    let minus = make_logical(params, Label::Minus).state;
    let p_plus = plus.inner(state).norm_sqr();
    let p_minus = minus.inner(state).norm_sqr();
    CodeOverlap { p_plus, p_minus, p_other: state.norm_sqr() - p_plus - p_minus }
}

/// Serializable codeword record `{g, n, u: "p/q", s, label, amps: [{w, re, im}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodewordRecord {
    pub g: u64,
    pub n: u64,
    pub u: String,
    pub s: u64,
    pub label: Label,
    pub amps: Vec<AmpEntry>,
}

/// One nonzero amplitude of a [`CodewordRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmpEntry {
    pub w: u64,
    pub re: f64,
    pub im: f64,
}

impl From<&LogicalState> for CodewordRecord {
    fn from(l: &LogicalState) -> Self {
        let amps = l
            .state
            .amps()
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(w, a)| AmpEntry { w: w as u64, re: a.re, im: a.im })
            .collect();
        Self { g: l.params.g(), n: l.params.n(), u: l.params.u_string(), s: l.params.s(), label: l.label, amps }
    }
}
