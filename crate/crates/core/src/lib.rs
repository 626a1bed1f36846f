//! Sparse system identification with LMS-family adaptive filters.
//!
//! Four stochastic-gradient update rules live in [`filter`]: plain LMS, leaky
//! LMS, LMS with an lp-norm sparsity penalty, and the leaky variant of the
//! latter. [`signal`] produces the seeded input, noise and sparse-plant
//! streams, [`experiment`] averages mean-square-deviation curves over many
//! independent trials, and [`io`] covers config files, CSV output and the
//! command-line front end.

pub mod error;
pub mod experiment;
pub mod filter;
pub mod io;
pub mod signal;

pub use error::{Error, Result};
pub use experiment::{
    estimate_lambda_max, msd, run_experiment, run_experiment_with, run_trial, steady_state,
    AlgorithmSpec, ExecutionMode, ExperimentConfig, ExperimentResult, MsdCurve, ScheduleSource,
    StabilityDiagnostic, SteadyStateReport, TrialOutcome,
};
pub use filter::{
    llms_update, lms_update, lp_llms_update, lp_lms_update, lp_norm, lp_penalty_gradient, predict,
    sgn, Algorithm, FilterParams, LeakSign, UpdateResult,
};
pub use signal::{
    build_paper_schedule, gen_ar1_input, gen_noise, gen_sparse_system, synthesize_desired,
    Ar1Config, NoiseConfig, NormalizeMode, Phase, PhaseSchedule, RngStream, ScheduleSpec,
    SparseSystemSpec, StreamPurpose, TapDelayLine,
};
