//! Monte-Carlo simulation of the sensing protocols and their analytic
//! companions.

mod analytic;
mod simulate;

pub use analytic::{
    baselines, expected_fi_p1, failure_bound, run_protocol2, run_protocol3, run_protocol3_f64, Baselines, ExpectedFiP1,
    Protocol2Estimate,
};
pub use simulate::{
    derive_seed, replay_phase, run_ensemble, run_protocol1, EnsembleSummary, ProtocolConfig, RoundOutcome, Simulator,
    TrajectoryRecord,
};
