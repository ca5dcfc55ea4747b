//! Dicke-basis state engine and the exact combinatorics layer.

mod combinatorics;
mod state;

pub use combinatorics::{
    binom, binom_exp_sum, binom_exp_sum_direct, binom_f64, binom_parity_sum, binom_ratio, falling_factorial, ln_binom,
    stirling2, Parity,
};
pub use state::{Branch, JzMoments, SymEnsemble, SymState};
