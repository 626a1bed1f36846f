//! Seeded generators for the identification experiment: correlated AR(1)
//! input, white Gaussian observation noise, random sparse plants and the
//! piecewise-constant phase schedule.
//!
//! Every generator draws from an [`RngStream`], which maps
//! `(seed, trial, purpose)` to an independent ChaCha8 stream. Results depend
//! only on that triple, never on the order in which trials are run.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::filter::predict;

/// What a stream is used for within a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamPurpose {
    Input,
    Noise,
    /// Sparse plant for the given zero-based phase.
    System(u16),
}

impl StreamPurpose {
    fn code(self) -> u64 {
        match self {
            StreamPurpose::Input => 0,
            StreamPurpose::Noise => 1,
            StreamPurpose::System(phase) => 2 + phase as u64,
        }
    }
}

/// Identifies one reproducible random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub trial: u64,
    pub purpose: StreamPurpose,
}

impl RngStream {
    pub fn new(seed: u64, trial: u64, purpose: StreamPurpose) -> Self {
        RngStream {
            seed,
            trial,
            purpose,
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        // 48 bits of trial index, 16 bits of purpose.
        rng.set_stream((self.trial << 16) ^ self.purpose.code());
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NormalizeMode {
    /// Scale by the closed-form stationary standard deviation.
    #[default]
    Theoretical,
    /// Divide by the realization's sample standard deviation.
    Empirical,
}

impl NormalizeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NormalizeMode::Theoretical => "theoretical",
            NormalizeMode::Empirical => "empirical",
        }
    }
}

impl fmt::Display for NormalizeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormalizeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "theoretical" => Ok(NormalizeMode::Theoretical),
            "empirical" => Ok(NormalizeMode::Empirical),
            other => Err(Error::param(
                "normalize_mode",
                format!("expected `theoretical` or `empirical`, got `{other}`"),
            )),
        }
    }
}

/// First-order autoregressive input `x[k+1] = a x[k] + u[k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Config {
    pub a: f64,
    pub innovation_variance: f64,
    pub normalize: NormalizeMode,
}

impl Default for Ar1Config {
    fn default() -> Self {
        Ar1Config {
            a: 0.8,
            innovation_variance: 1e-3,
            normalize: NormalizeMode::Theoretical,
        }
    }
}

impl Ar1Config {
    pub fn validate(&self) -> Result<()> {
        if self.a.is_nan() || self.a.abs() >= 1.0 {
            return Err(Error::param(
                "ar1.a",
                format!("|a| must be < 1 for a stationary process, got {}", self.a),
            ));
        }
        if !(self.innovation_variance.is_finite() && self.innovation_variance > 0.0) {
            return Err(Error::param(
                "ar1.innovation_variance",
                format!("must be > 0, got {}", self.innovation_variance),
            ));
        }
        Ok(())
    }

    /// `sigma_u^2 / (1 - a^2)`.
    pub fn stationary_variance(&self) -> f64 {
        self.innovation_variance / (1.0 - self.a * self.a)
    }

    /// Factor that maps the raw process to unit variance.
    pub fn theoretical_scale(&self) -> f64 {
        1.0 / self.stationary_variance().sqrt()
    }
}

/// `length` samples of the AR(1) process, scaled to unit variance.
///
/// The first sample comes from the stationary distribution, so there is no
/// start-up transient.
pub fn gen_ar1_input(cfg: &Ar1Config, length: usize, stream: RngStream) -> Result<Vec<f64>> {
    cfg.validate()?;
    if length == 0 {
        return Err(Error::param("length", "must be >= 1"));
    }
    let mut rng = stream.rng();
    let innovation_sd = cfg.innovation_variance.sqrt();
    let mut out = Vec::with_capacity(length);
    let mut state = cfg.stationary_variance().sqrt() * rng.sample::<f64, _>(StandardNormal);
    out.push(state);
    for _ in 1..length {
        state = cfg.a * state + innovation_sd * rng.sample::<f64, _>(StandardNormal);
        out.push(state);
    }

    let scale = match cfg.normalize {
        NormalizeMode::Theoretical => cfg.theoretical_scale(),
        NormalizeMode::Empirical => {
            let sd = sample_variance(&out).sqrt();
            if sd.is_nan() || sd <= 0.0 {
                return Err(Error::param(
                    "normalize_mode",
                    "empirical normalization needs a realization with nonzero spread",
                ));
            }
            1.0 / sd
        }
    };
    out.iter_mut().for_each(|v| *v *= scale);
    Ok(out)
}

fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n
}

/// White zero-mean Gaussian observation noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    pub variance: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig { variance: 1e-2 }
    }
}

pub fn gen_noise(cfg: &NoiseConfig, length: usize, stream: RngStream) -> Result<Vec<f64>> {
    if !(cfg.variance.is_finite() && cfg.variance >= 0.0) {
        return Err(Error::param(
            "noise.variance",
            format!("must be a finite value >= 0, got {}", cfg.variance),
        ));
    }
    if length == 0 {
        return Err(Error::param("length", "must be >= 1"));
    }
    if cfg.variance == 0.0 {
        return Ok(vec![0.0; length]);
    }
    let sd = cfg.variance.sqrt();
    let mut rng = stream.rng();
    Ok((0..length)
        .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
        .collect())
}

/// Shape of a random sparse plant with +/-1 taps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparseSystemSpec {
    pub n_taps: usize,
    pub n_nonzero: usize,
}

impl SparseSystemSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_taps == 0 {
            return Err(Error::param("taps", "must be >= 1"));
        }
        if self.n_nonzero == 0 || self.n_nonzero > self.n_taps {
            return Err(Error::param(
                "sparsity",
                format!(
                    "nonzero tap count must lie in [1, {}], got {}",
                    self.n_taps, self.n_nonzero
                ),
            ));
        }
        Ok(())
    }

    pub fn sparsity_ratio(&self) -> f64 {
        self.n_nonzero as f64 / self.n_taps as f64
    }
}

/// Exactly `n_nonzero` taps set to +1 or -1 at uniformly chosen positions.
pub fn gen_sparse_system(spec: &SparseSystemSpec, stream: RngStream) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = stream.rng();
    let support = index::sample(&mut rng, spec.n_taps, spec.n_nonzero);
    let mut w = vec![0.0; spec.n_taps];
    for pos in support.iter() {
        w[pos] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    }
    Ok(w)
}

/// `system . x + noise`.
pub fn synthesize_desired(system: &[f64], x: &[f64], noise_sample: f64) -> Result<f64> {
    Ok(predict(system, x)? + noise_sample)
}

/// One stretch of iterations during which the unknown plant is fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase {
    pub system: Vec<f64>,
    pub span: usize,
    /// Penalty step used by the lp rules during this phase, if set.
    pub rho_p_override: Option<f64>,
}

/// Piecewise-constant unknown plant.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSchedule {
    phases: Vec<Phase>,
}

impl PhaseSchedule {
    pub fn new(phases: Vec<Phase>) -> Result<Self> {
        let Some(first) = phases.first() else {
            return Err(Error::param("phases", "schedule needs at least one phase"));
        };
        let n = first.system.len();
        if n == 0 {
            return Err(Error::param("taps", "must be >= 1"));
        }
        for phase in &phases {
            if phase.span == 0 {
                return Err(Error::param("phase_lengths", "every span must be >= 1"));
            }
            if phase.system.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    actual: phase.system.len(),
                });
            }
            if phase.system.iter().any(|v| !v.is_finite()) {
                return Err(Error::param("system", "plant taps must be finite"));
            }
            if let Some(rho) = phase.rho_p_override {
                if !(rho.is_finite() && rho >= 0.0) {
                    return Err(Error::param(
                        "phase_rho",
                        format!("must be >= 0, got {rho}"),
                    ));
                }
            }
        }
        Ok(PhaseSchedule { phases })
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn n_taps(&self) -> usize {
        self.phases[0].system.len()
    }

    pub fn total_len(&self) -> usize {
        self.phases.iter().map(|p| p.span).sum()
    }

    pub fn spans(&self) -> Vec<usize> {
        self.phases.iter().map(|p| p.span).collect()
    }
}

/// Recipe for drawing a fresh random [`PhaseSchedule`] per trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleSpec {
    pub n_taps: usize,
    pub spans: Vec<usize>,
    pub n_nonzero: Vec<usize>,
    /// Per-phase penalty steps; empty means no overrides.
    pub rho_p: Vec<f64>,
}

impl ScheduleSpec {
    /// 16 taps; 1, 4 then 8 nonzero taps for 8000 iterations each, with
    /// penalty steps 5e-4, 2e-4, 1e-4.
    pub fn paper() -> Self {
        ScheduleSpec {
            n_taps: 16,
            spans: vec![8000; 3],
            n_nonzero: vec![1, 4, 8],
            rho_p: vec![0.0005, 0.0002, 0.0001],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.spans.is_empty() {
            return Err(Error::param("phase_lengths", "need at least one phase"));
        }
        if self.spans.len() != self.n_nonzero.len() {
            return Err(Error::param(
                "sparsity",
                format!(
                    "{} sparsity counts for {} phases",
                    self.n_nonzero.len(),
                    self.spans.len()
                ),
            ));
        }
        if !self.rho_p.is_empty() && self.rho_p.len() != self.spans.len() {
            return Err(Error::param(
                "phase_rho",
                format!(
                    "{} values for {} phases",
                    self.rho_p.len(),
                    self.spans.len()
                ),
            ));
        }
        if self.spans.len() > u16::MAX as usize {
            return Err(Error::param("phase_lengths", "too many phases"));
        }
        if self.spans.contains(&0) {
            return Err(Error::param("phase_lengths", "every span must be >= 1"));
        }
        if let Some(rho) = self.rho_p.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::param(
                "phase_rho",
                format!("must be >= 0, got {rho}"),
            ));
        }
        for &n_nonzero in &self.n_nonzero {
            SparseSystemSpec {
                n_taps: self.n_taps,
                n_nonzero,
            }
            .validate()?;
        }
        Ok(())
    }

    pub fn total_len(&self) -> usize {
        self.spans.iter().sum()
    }

    /// Draws each phase's plant from its own stream of `(seed, trial)`.
    pub fn draw(&self, seed: u64, trial: u64) -> Result<PhaseSchedule> {
        self.validate()?;
        let phases = self
            .spans
            .iter()
            .zip(&self.n_nonzero)
            .enumerate()
            .map(|(i, (&span, &n_nonzero))| {
                let spec = SparseSystemSpec {
                    n_taps: self.n_taps,
                    n_nonzero,
                };
                let stream = RngStream::new(seed, trial, StreamPurpose::System(i as u16));
                Ok(Phase {
                    system: gen_sparse_system(&spec, stream)?,
                    span,
                    rho_p_override: self.rho_p.get(i).copied(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PhaseSchedule::new(phases)
    }
}

/// The three-phase 16-tap schedule of the reference experiment, drawn for one
/// trial.
pub fn build_paper_schedule(seed: u64, trial: u64) -> PhaseSchedule {
    ScheduleSpec::paper()
        .draw(seed, trial)
        .expect("reference schedule is valid")
}

/// Regressor `[x[k], x[k-1], ..., x[k-N+1]]`, zero before the first sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TapDelayLine {
    taps: Vec<f64>,
}

impl TapDelayLine {
    pub fn new(n_taps: usize) -> Self {
        TapDelayLine {
            taps: vec![0.0; n_taps],
        }
    }

    /// Shifts every tap one position back and writes `sample` at position 0.
    pub fn push(&mut self, sample: f64) {
        if self.taps.is_empty() {
            return;
        }
        self.taps.rotate_right(1);
        self.taps[0] = sample;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.taps
    }
}
