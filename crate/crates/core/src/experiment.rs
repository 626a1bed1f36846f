//! Monte-Carlo harness: paired trials of every configured filter against the
//! same input, noise and plant streams, averaged into MSD learning curves.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filter::{Algorithm, FilterParams, LeakSign};
use crate::signal::{
    gen_ar1_input, gen_noise, synthesize_desired, Ar1Config, NoiseConfig, PhaseSchedule, RngStream,
    ScheduleSpec, StreamPurpose, TapDelayLine,
};

/// Trials held in memory at once by [`run_experiment_with`].
const TRIAL_BATCH: usize = 64;

/// One filter taking part in an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSpec {
    pub name: String,
    pub algorithm: Algorithm,
    pub params: FilterParams,
}

impl AlgorithmSpec {
    pub fn new(algorithm: Algorithm, params: FilterParams) -> Self {
        AlgorithmSpec {
            name: algorithm.key().to_string(),
            algorithm,
            params,
        }
    }

    /// Reference parameters: mu = 0.015 everywhere, gamma = 0.005 for the
    /// leaky rules, epsilon = 10 and p = 0.5 for the lp rules. The lp rules
    /// start at rho = 5e-4; the reference schedule overrides it per phase.
    pub fn paper_default(algorithm: Algorithm) -> Self {
        let mut params = FilterParams {
            mu: 0.015,
            gamma: 0.0,
            rho_p: 0.0,
            epsilon_p: 10.0,
            p: 0.5,
            leak_sign: LeakSign::Plus,
        };
        if algorithm.is_leaky() {
            params.gamma = 0.005;
        }
        if algorithm.is_penalized() {
            params.rho_p = 0.0005;
        }
        AlgorithmSpec::new(algorithm, params)
    }
}

/// Where each trial's unknown plant comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleSource {
    /// Fresh random sparse plants per trial and per phase.
    Random(ScheduleSpec),
    /// The same plants in every trial.
    Fixed(PhaseSchedule),
}

impl ScheduleSource {
    pub fn for_trial(&self, seed: u64, trial: u64) -> Result<PhaseSchedule> {
        match self {
            ScheduleSource::Random(spec) => spec.draw(seed, trial),
            ScheduleSource::Fixed(schedule) => Ok(schedule.clone()),
        }
    }

    pub fn spans(&self) -> Vec<usize> {
        match self {
            ScheduleSource::Random(spec) => spec.spans.clone(),
            ScheduleSource::Fixed(schedule) => schedule.spans(),
        }
    }

    pub fn n_taps(&self) -> usize {
        match self {
            ScheduleSource::Random(spec) => spec.n_taps,
            ScheduleSource::Fixed(schedule) => schedule.n_taps(),
        }
    }

    fn rho_overrides(&self) -> Vec<f64> {
        match self {
            ScheduleSource::Random(spec) => spec.rho_p.clone(),
            ScheduleSource::Fixed(schedule) => schedule
                .phases()
                .iter()
                .filter_map(|p| p.rho_p_override)
                .collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ScheduleSource::Random(spec) => spec.validate(),
            ScheduleSource::Fixed(_) => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub ar1: Ar1Config,
    pub noise: NoiseConfig,
    pub schedule: ScheduleSource,
    pub algorithms: Vec<AlgorithmSpec>,
    pub n_trials: usize,
    pub seed: u64,
    /// Trailing iterations of each phase averaged into the steady-state MSD.
    pub steady_state_window: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig::paper()
    }
}

impl ExperimentConfig {
    pub const DEFAULT_SEED: u64 = 2015;

    /// The reference experiment: four filters, 200 trials, three 8000-iteration
    /// phases of a 16-tap plant with 1, 4 and 8 nonzero taps.
    pub fn paper() -> Self {
        ExperimentConfig {
            ar1: Ar1Config::default(),
            noise: NoiseConfig::default(),
            schedule: ScheduleSource::Random(ScheduleSpec::paper()),
            algorithms: Algorithm::ALL
                .into_iter()
                .map(AlgorithmSpec::paper_default)
                .collect(),
            n_trials: 200,
            seed: Self::DEFAULT_SEED,
            steady_state_window: 1000,
        }
    }

    pub fn total_len(&self) -> usize {
        self.schedule.spans().iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::param("trials", "must be >= 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::param("algorithms", "need at least one algorithm"));
        }
        for (i, spec) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].iter().any(|o| o.name == spec.name) {
                return Err(Error::param(
                    "algorithms",
                    format!("duplicate algorithm name `{}`", spec.name),
                ));
            }
            spec.algorithm.validate(&spec.params)?;
            if spec.algorithm.is_penalized() {
                for rho_p in self.schedule.rho_overrides() {
                    spec.algorithm.validate(&FilterParams {
                        rho_p,
                        ..spec.params
                    })?;
                }
            }
        }
        self.ar1.validate()?;
        if !(self.noise.variance.is_finite() && self.noise.variance >= 0.0) {
            return Err(Error::param(
                "noise.variance",
                "must be a finite value >= 0",
            ));
        }
        self.schedule.validate()?;
        let spans = self.schedule.spans();
        let shortest = spans.iter().copied().min().unwrap_or(0);
        if self.steady_state_window == 0 || self.steady_state_window > shortest {
            return Err(Error::param(
                "steady_state_window",
                format!(
                    "must lie in [1, {shortest}] (shortest phase), got {}",
                    self.steady_state_window
                ),
            ));
        }
        Ok(())
    }
}

/// `||w - w_hat||^2`.
pub fn msd(true_w: &[f64], est_w: &[f64]) -> Result<f64> {
    if true_w.len() != est_w.len() {
        return Err(Error::Dimension {
            expected: true_w.len(),
            actual: est_w.len(),
        });
    }
    Ok(squared_deviation(true_w, est_w))
}

#[inline]
fn squared_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Squared-deviation trace of one filter over one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmTrace {
    pub name: String,
    /// `||w - w_k||^2` after the update at each iteration. Entries from the
    /// divergence point on are `+inf`.
    pub squared_deviation: Vec<f64>,
    /// Zero-based iteration at which the filter produced a non-finite weight.
    pub diverged_at: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub traces: Vec<AlgorithmTrace>,
}

/// Runs every configured filter over one trial's shared streams.
///
/// Weights start at zero and carry over phase boundaries. At the start of each
/// phase the lp rules switch to that phase's penalty step, if it has one.
pub fn run_trial(cfg: &ExperimentConfig, trial_index: usize) -> Result<TrialOutcome> {
    cfg.validate()?;
    run_trial_unchecked(cfg, trial_index)
}

struct FilterState {
    algorithm: Algorithm,
    params: FilterParams,
    weights: Vec<f64>,
    trace: Vec<f64>,
    diverged_at: Option<usize>,
}

fn run_trial_unchecked(cfg: &ExperimentConfig, trial_index: usize) -> Result<TrialOutcome> {
    let trial = trial_index as u64;
    let schedule = cfg.schedule.for_trial(cfg.seed, trial)?;
    let total = schedule.total_len();
    let n_taps = schedule.n_taps();
    let input = gen_ar1_input(
        &cfg.ar1,
        total,
        RngStream::new(cfg.seed, trial, StreamPurpose::Input),
    )?;
    let noise = gen_noise(
        &cfg.noise,
        total,
        RngStream::new(cfg.seed, trial, StreamPurpose::Noise),
    )?;

    let mut states: Vec<FilterState> = cfg
        .algorithms
        .iter()
        .map(|spec| FilterState {
            algorithm: spec.algorithm,
            params: spec.params,
            weights: vec![0.0; n_taps],
            trace: Vec::with_capacity(total),
            diverged_at: None,
        })
        .collect();

    let mut line = TapDelayLine::new(n_taps);
    let mut k = 0;
    for phase in schedule.phases() {
        if let Some(rho_p) = phase.rho_p_override {
            for state in states.iter_mut().filter(|s| s.algorithm.is_penalized()) {
                state.params.rho_p = rho_p;
            }
        }
        for _ in 0..phase.span {
            line.push(input[k]);
            let x = line.as_slice();
            let desired = synthesize_desired(&phase.system, x, noise[k])?;
            for state in &mut states {
                if state.diverged_at.is_some() {
                    state.trace.push(f64::INFINITY);
                    continue;
                }
                match state
                    .algorithm
                    .step(&mut state.weights, x, desired, &state.params)
                {
                    Ok(_) => {
                        let dev = squared_deviation(&phase.system, &state.weights);
                        if dev.is_finite() {
                            state.trace.push(dev);
                        } else {
                            state.diverged_at = Some(k);
                            state.trace.push(f64::INFINITY);
                        }
                    }
                    Err(Error::Divergence { .. }) => {
                        state.diverged_at = Some(k);
                        state.trace.push(f64::INFINITY);
                    }
                    Err(other) => return Err(other),
                }
            }
            k += 1;
        }
    }

    Ok(TrialOutcome {
        trial: trial_index,
        traces: states
            .into_iter()
            .zip(&cfg.algorithms)
            .map(|(state, spec)| AlgorithmTrace {
                name: spec.name.clone(),
                squared_deviation: state.trace,
                diverged_at: state.diverged_at,
            })
            .collect(),
    })
}

/// Trial-averaged MSD of one filter.
#[derive(Debug, Clone, PartialEq)]
pub struct MsdCurve {
    pub name: String,
    /// One value per iteration; NaN everywhere when no trial survived.
    pub values: Vec<f64>,
    pub n_trials_used: usize,
    /// `(trial, iteration)` of every excluded trial.
    pub diverged: Vec<(usize, usize)>,
}

impl MsdCurve {
    pub fn is_valid(&self) -> bool {
        self.n_trials_used > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateEntry {
    pub name: String,
    pub linear: f64,
    /// `10 log10(linear)`; `None` unless `linear > 0`.
    pub db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSteadyState {
    /// Zero-based phase index.
    pub phase: usize,
    /// Iteration range `[start, end)` the window covers.
    pub start: usize,
    pub end: usize,
    pub entries: Vec<SteadyStateEntry>,
}

impl PhaseSteadyState {
    /// Entries ordered from lowest to highest MSD; invalid entries last.
    pub fn ranking(&self) -> Vec<&SteadyStateEntry> {
        let mut ranked: Vec<&SteadyStateEntry> = self.entries.iter().collect();
        ranked.sort_by(|a, b| match (a.linear.is_nan(), b.linear.is_nan()) {
            (false, false) => a.linear.total_cmp(&b.linear),
            (x, y) => x.cmp(&y),
        });
        ranked
    }

    pub fn get(&self, name: &str) -> Option<&SteadyStateEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateReport {
    pub window: usize,
    pub phases: Vec<PhaseSteadyState>,
}

/// Mean of each curve over the last `window` iterations of every phase.
pub fn steady_state(
    curves: &[MsdCurve],
    spans: &[usize],
    window: usize,
) -> Result<SteadyStateReport> {
    let total: usize = spans.iter().sum();
    if window == 0 || spans.iter().any(|&s| window > s) {
        return Err(Error::param(
            "steady_state_window",
            format!("window {window} must be >= 1 and fit inside every phase {spans:?}"),
        ));
    }
    if let Some(c) = curves.iter().find(|c| c.values.len() != total) {
        return Err(Error::Dimension {
            expected: total,
            actual: c.values.len(),
        });
    }
    let mut phases = Vec::with_capacity(spans.len());
    let mut end = 0;
    for (phase, &span) in spans.iter().enumerate() {
        end += span;
        let start = end - window;
        let entries = curves
            .iter()
            .map(|c| {
                let linear = c.values[start..end].iter().sum::<f64>() / window as f64;
                SteadyStateEntry {
                    name: c.name.clone(),
                    linear,
                    db: (linear > 0.0).then(|| 10.0 * linear.log10()),
                }
            })
            .collect();
        phases.push(PhaseSteadyState {
            phase,
            start,
            end,
            entries,
        });
    }
    Ok(SteadyStateReport { window, phases })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub curves: Vec<MsdCurve>,
    pub report: SteadyStateReport,
    pub spans: Vec<usize>,
    pub n_trials: usize,
}

impl ExperimentResult {
    pub fn curve(&self, name: &str) -> Option<&MsdCurve> {
        self.curves.iter().find(|c| c.name == name)
    }

    /// Names of filters for which every trial diverged.
    pub fn fully_diverged(&self) -> Vec<String> {
        self.curves
            .iter()
            .filter(|c| !c.is_valid())
            .map(|c| c.name.clone())
            .collect()
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(cfg, ExecutionMode::Parallel)
}

/// Averages `n_trials` paired trials.
///
/// Trials are summed in ascending index order whatever the execution mode, so
/// serial and parallel runs agree bit for bit. Diverged trials are dropped
/// from a filter's average and listed in its curve.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    mode: ExecutionMode,
) -> Result<ExperimentResult> {
    cfg.validate()?;
    let total = cfg.total_len();
    let n_alg = cfg.algorithms.len();
    let mut sums = vec![vec![0.0f64; total]; n_alg];
    let mut used = vec![0usize; n_alg];
    let mut diverged: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_alg];

    let mut start = 0;
    while start < cfg.n_trials {
        let end = (start + TRIAL_BATCH).min(cfg.n_trials);
        let outcomes: Vec<Result<TrialOutcome>> = match mode {
            ExecutionMode::Serial => (start..end).map(|t| run_trial_unchecked(cfg, t)).collect(),
            ExecutionMode::Parallel => (start..end)
                .into_par_iter()
                .map(|t| run_trial_unchecked(cfg, t))
                .collect(),
        };
        for outcome in outcomes {
            let outcome = outcome?;
            for (a, trace) in outcome.traces.iter().enumerate() {
                match trace.diverged_at {
                    Some(k) => diverged[a].push((outcome.trial, k)),
                    None => {
                        used[a] += 1;
                        for (acc, v) in sums[a].iter_mut().zip(&trace.squared_deviation) {
                            *acc += v;
                        }
                    }
                }
            }
        }
        start = end;
    }

    let curves: Vec<MsdCurve> = cfg
        .algorithms
        .iter()
        .zip(sums)
        .zip(used)
        .zip(diverged)
        .map(|(((spec, sum), n), div)| MsdCurve {
            name: spec.name.clone(),
            values: if n == 0 {
                vec![f64::NAN; total]
            } else {
                sum.into_iter().map(|s| s / n as f64).collect()
            },
            n_trials_used: n,
            diverged: div,
        })
        .collect();
    let spans = cfg.schedule.spans();
    let report = steady_state(&curves, &spans, cfg.steady_state_window)?;
    Ok(ExperimentResult {
        curves,
        report,
        spans,
        n_trials: cfg.n_trials,
    })
}

/// Largest eigenvalue of the input covariance and the step-size bound it
/// implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityDiagnostic {
    pub lambda_max: f64,
    /// `1 / lambda_max`; step sizes below this keep LMS stable in the mean.
    pub mu_bound: f64,
}

impl StabilityDiagnostic {
    pub fn admits(&self, mu: f64) -> bool {
        mu > 0.0 && mu < self.mu_bound
    }
}

/// Eigen-solves the `n_taps x n_taps` Toeplitz covariance `a^|i-j|` of the
/// unit-variance AR(1) input.
pub fn estimate_lambda_max(ar1: &Ar1Config, n_taps: usize) -> Result<StabilityDiagnostic> {
    if ar1.a.is_nan() || ar1.a.abs() >= 1.0 {
        return Err(Error::param(
            "ar1.a",
            format!("|a| must be < 1, got {}", ar1.a),
        ));
    }
    if n_taps == 0 {
        return Err(Error::param("taps", "must be >= 1"));
    }
    let a = ar1.a;
    let cov = DMatrix::from_fn(n_taps, n_taps, |i, j| a.powi(i.abs_diff(j) as i32));
    let lambda_max = cov
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityDiagnostic {
        lambda_max,
        mu_bound: 1.0 / lambda_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Phase;

    fn curve(name: &str, values: Vec<f64>) -> MsdCurve {
        MsdCurve {
            name: name.into(),
            values,
            n_trials_used: 1,
            diverged: vec![],
        }
    }

    fn small_config(n_trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            schedule: ScheduleSource::Random(ScheduleSpec {
                n_taps: 16,
                spans: vec![300, 300],
                n_nonzero: vec![1, 8],
                rho_p: vec![0.0005, 0.0001],
            }),
            n_trials,
            steady_state_window: 50,
            ..ExperimentConfig::paper()
        }
    }

    #[test]
    fn msd_examples() {
        assert_eq!(msd(&[0.3, -1.0], &[0.3, -1.0]).unwrap(), 0.0);
        assert_eq!(msd(&[1.0, 0.0], &[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(msd(&[1.0, -1.0], &[0.5, -0.5]).unwrap(), 0.5);
        assert!(msd(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn steady_state_examples() {
        let spans = [4, 6];
        let constant = steady_state(&[curve("c", vec![2.5; 10])], &spans, 3).unwrap();
        for phase in &constant.phases {
            assert_eq!(phase.entries[0].linear, 2.5);
        }

        let ramp: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let whole = steady_state(&[curve("r", ramp.clone())], &[10], 10).unwrap();
        assert_eq!(whole.phases[0].entries[0].linear, 4.5);

        let tail = steady_state(&[curve("r", ramp)], &[10], 2).unwrap();
        assert_eq!(tail.phases[0].entries[0].linear, 8.5);
        assert_eq!((tail.phases[0].start, tail.phases[0].end), (8, 10));
    }

    #[test]
    fn steady_state_rejects_oversized_window() {
        let err = steady_state(&[curve("c", vec![1.0; 10])], &[4, 6], 5).unwrap_err();
        assert!(matches!(
            err,
            Error::Parameter {
                name: "steady_state_window",
                ..
            }
        ));
    }

    #[test]
    fn steady_state_db_and_ranking() {
        let report = steady_state(
            &[
                curve("a", vec![0.01; 4]),
                curve("b", vec![0.0; 4]),
                curve("c", vec![f64::NAN; 4]),
                curve("d", vec![0.001; 4]),
            ],
            &[4],
            2,
        )
        .unwrap();
        let phase = &report.phases[0];
        assert!((phase.get("a").unwrap().db.unwrap() + 20.0).abs() < 1e-12);
        assert_eq!(phase.get("b").unwrap().db, None);
        let names: Vec<&str> = phase.ranking().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, vec!["b", "d", "a", "c"]);
    }

    #[test]
    fn zero_plant_without_noise_stays_at_zero() {
        let schedule = PhaseSchedule::new(vec![Phase {
            system: vec![0.0; 8],
            span: 200,
            rho_p_override: None,
        }])
        .unwrap();
        let cfg = ExperimentConfig {
            noise: NoiseConfig { variance: 0.0 },
            schedule: ScheduleSource::Fixed(schedule),
            n_trials: 1,
            steady_state_window: 10,
            ..ExperimentConfig::paper()
        };
        let outcome = run_trial(&cfg, 0).unwrap();
        assert_eq!(outcome.traces.len(), 4);
        for trace in outcome.traces {
            assert!(trace.squared_deviation.iter().all(|v| *v == 0.0));
            assert_eq!(trace.diverged_at, None);
        }
    }

    #[test]
    fn trial_is_deterministic() {
        let cfg = small_config(2);
        assert_eq!(run_trial(&cfg, 1).unwrap(), run_trial(&cfg, 1).unwrap());
        assert_ne!(run_trial(&cfg, 0).unwrap(), run_trial(&cfg, 1).unwrap());
    }

    #[test]
    fn adding_algorithms_does_not_perturb_streams() {
        let full = small_config(1);
        let mut lms_only = full.clone();
        lms_only
            .algorithms
            .retain(|a| a.algorithm == Algorithm::Lms);
        let mut twin = AlgorithmSpec::paper_default(Algorithm::Lms);
        twin.name = "lms_twin".into();
        lms_only.algorithms.push(twin);

        let a = run_trial(&full, 0).unwrap();
        let b = run_trial(&lms_only, 0).unwrap();
        assert_eq!(a.traces[0].squared_deviation, b.traces[0].squared_deviation);
        assert_eq!(b.traces[0].squared_deviation, b.traces[1].squared_deviation);
    }

    #[test]
    fn single_trial_curve_equals_trace() {
        let cfg = small_config(1);
        let result = run_experiment_with(&cfg, ExecutionMode::Serial).unwrap();
        let trial = run_trial(&cfg, 0).unwrap();
        for (c, t) in result.curves.iter().zip(&trial.traces) {
            assert_eq!(c.values, t.squared_deviation);
            assert_eq!(c.n_trials_used, 1);
        }
    }

    #[test]
    fn averaging_matches_manual_reduction() {
        let cfg = small_config(3);
        let result = run_experiment_with(&cfg, ExecutionMode::Parallel).unwrap();
        let trials: Vec<TrialOutcome> = (0..3).map(|t| run_trial(&cfg, t).unwrap()).collect();
        for (a, c) in result.curves.iter().enumerate() {
            for k in [0, 17, 599] {
                let mut s = 0.0;
                for t in &trials {
                    s += t.traces[a].squared_deviation[k];
                }
                assert_eq!(c.values[k], s / 3.0);
            }
        }
    }

    #[test]
    fn diverging_filter_is_excluded_and_others_continue() {
        let mut cfg = small_config(2);
        cfg.algorithms.push(AlgorithmSpec {
            name: "blowup".into(),
            algorithm: Algorithm::Lms,
            params: FilterParams::with_mu(5.0),
        });
        let result = run_experiment(&cfg).unwrap();
        let bad = result.curve("blowup").unwrap();
        assert!(!bad.is_valid());
        assert_eq!(bad.diverged.len(), 2);
        assert!(bad.values.iter().all(|v| v.is_nan()));
        assert_eq!(result.fully_diverged(), vec!["blowup".to_string()]);
        assert!(result.curve("lms").unwrap().is_valid());

        let trial = run_trial(&cfg, 0).unwrap();
        let trace = &trial.traces[4];
        let k = trace.diverged_at.unwrap();
        assert!(trace.squared_deviation[k..]
            .iter()
            .all(|v| *v == f64::INFINITY));
        assert!(trace.squared_deviation[..k].iter().all(|v| v.is_finite()));
    }

    #[test]
    fn config_validation() {
        let mut cfg = small_config(0);
        assert!(cfg.validate().is_err());
        cfg.n_trials = 1;
        cfg.algorithms
            .push(AlgorithmSpec::paper_default(Algorithm::Lms));
        assert!(cfg.validate().is_err());
        cfg.algorithms.pop();
        cfg.steady_state_window = 301;
        assert!(cfg.validate().is_err());
        cfg.steady_state_window = 300;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn lambda_max_white_input_is_one() {
        let white = Ar1Config {
            a: 0.0,
            ..Default::default()
        };
        let diag = estimate_lambda_max(&white, 16).unwrap();
        assert!((diag.lambda_max - 1.0).abs() < 1e-12);
        assert!(estimate_lambda_max(&Ar1Config { a: 1.0, ..white }, 4).is_err());
    }
}
