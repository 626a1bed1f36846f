//! Flat `key = value` experiment files.
//!
//! ```text
//! # comments start with '#'
//! seed = 2015
//! trials = 200
//! taps = 16
//! phase_lengths = 8000, 8000, 8000
//! sparsity = 1, 4, 8
//! phase_rho = 0.0005, 0.0002, 0.0001   # or `none`
//! ar1.a = 0.8
//! ar1.innovation_variance = 0.001
//! normalize_mode = theoretical         # or `empirical`
//! noise.variance = 0.01
//! steady_state_window = 1000
//! algorithms = lms, llms, lp_lms, lp_llms
//! lms.mu = 0.015
//! llms.mu = 0.015
//! llms.gamma = 0.005
//! lp_lms.mu = 0.015
//! lp_lms.rho = 0.0005                  # or lp_lms.gamma_p = rho / mu
//! lp_lms.epsilon = 10
//! lp_lms.p = 0.5
//! lp_llms.mu = 0.015
//! lp_llms.gamma = 0.005
//! lp_llms.rho = 0.0005
//! lp_llms.epsilon = 10
//! lp_llms.p = 0.5
//! lp_llms.leak_sign = plus             # or `minus`
//! ```
//!
//! Every key is optional; missing keys take the reference values shown above.
//! Per-algorithm keys are only accepted for algorithms listed in
//! `algorithms`, and only for parameters that algorithm reads.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiment::{AlgorithmSpec, ExperimentConfig, ScheduleSource};
use crate::filter::{Algorithm, FilterParams, LeakSign};
use crate::signal::{NormalizeMode, ScheduleSpec};

const GLOBAL_KEYS: &[&str] = &[
    "seed",
    "trials",
    "taps",
    "phase_lengths",
    "sparsity",
    "phase_rho",
    "ar1.a",
    "ar1.innovation_variance",
    "normalize_mode",
    "noise.variance",
    "steady_state_window",
    "algorithms",
];

/// Parameter suffixes each algorithm accepts.
fn param_keys(algorithm: Algorithm) -> &'static [&'static str] {
    match algorithm {
        Algorithm::Lms => &["mu"],
        Algorithm::Llms => &["mu", "gamma"],
        Algorithm::LpLms => &["mu", "rho", "gamma_p", "epsilon", "p"],
        Algorithm::LpLlms => &["mu", "gamma", "rho", "gamma_p", "epsilon", "p", "leak_sign"],
    }
}

struct Entry {
    line: usize,
    value: String,
}

struct Entries {
    map: HashMap<String, Entry>,
}

impl Entries {
    fn line_of(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |e| e.line)
    }

    fn err(&self, key: &str, reason: impl Into<String>) -> Error {
        Error::Config {
            line: self.line_of(key),
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    fn scalar<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(entry) => entry
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|_| self.err(key, format!("cannot parse `{}`", entry.value))),
        }
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(entry) => {
                let trimmed = entry.value.trim();
                if trimmed.is_empty() || trimmed.eq_ignore_ascii_case("none") {
                    return Ok(Some(Vec::new()));
                }
                trimmed
                    .split(',')
                    .map(|item| {
                        item.trim().parse::<T>().map_err(|_| {
                            self.err(key, format!("cannot parse list item `{}`", item.trim()))
                        })
                    })
                    .collect::<Result<Vec<T>>>()
                    .map(Some)
            }
        }
    }
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut map: HashMap<String, Entry> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Config {
                line,
                key: content.to_string(),
                reason: "expected `key = value`".into(),
            });
        };
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(Error::Config {
                line,
                key,
                reason: "empty key".into(),
            });
        }
        if let Some(prev) = map.get(&key) {
            return Err(Error::Config {
                line,
                key,
                reason: format!("duplicate key (first set on line {})", prev.line),
            });
        }
        map.insert(
            key,
            Entry {
                line,
                value: value.trim().to_string(),
            },
        );
    }
    Ok(Entries { map })
}

/// Parses a config document, filling every missing key with its reference
/// value. An empty document yields [`ExperimentConfig::paper`].
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let entries = tokenize(text)?;
    let mut cfg = ExperimentConfig::paper();

    let algorithms: Vec<Algorithm> = match entries.list::<Algorithm>("algorithms")? {
        Some(list) if list.is_empty() => {
            return Err(entries.err("algorithms", "need at least one algorithm"))
        }
        Some(list) => list,
        None => Algorithm::ALL.to_vec(),
    };
    for (i, alg) in algorithms.iter().enumerate() {
        if algorithms[..i].contains(alg) {
            return Err(entries.err("algorithms", format!("`{}` listed twice", alg.key())));
        }
    }

    // Reject unknown keys before interpreting anything else.
    let mut keys: Vec<&String> = entries.map.keys().collect();
    keys.sort_by_key(|k| entries.line_of(k));
    for key in keys {
        if GLOBAL_KEYS.contains(&key.as_str()) {
            continue;
        }
        let known = key.split_once('.').and_then(|(prefix, suffix)| {
            let alg = prefix.parse::<Algorithm>().ok()?;
            (alg.key() == prefix && param_keys(alg).contains(&suffix)).then_some(alg)
        });
        match known {
            Some(alg) if algorithms.contains(&alg) => {}
            Some(alg) => {
                return Err(entries.err(
                    key,
                    format!("algorithm `{}` is not listed in `algorithms`", alg.key()),
                ))
            }
            None => return Err(entries.err(key, "unknown key")),
        }
    }

    if let Some(seed) = entries.scalar::<u64>("seed")? {
        cfg.seed = seed;
    }
    if let Some(trials) = entries.scalar::<usize>("trials")? {
        cfg.n_trials = trials;
    }
    if let Some(window) = entries.scalar::<usize>("steady_state_window")? {
        cfg.steady_state_window = window;
    }
    if let Some(a) = entries.scalar::<f64>("ar1.a")? {
        cfg.ar1.a = a;
    }
    if let Some(v) = entries.scalar::<f64>("ar1.innovation_variance")? {
        cfg.ar1.innovation_variance = v;
    }
    if let Some(mode) = entries.scalar::<NormalizeMode>("normalize_mode")? {
        cfg.ar1.normalize = mode;
    }
    if let Some(v) = entries.scalar::<f64>("noise.variance")? {
        cfg.noise.variance = v;
    }

    let mut schedule = ScheduleSpec::paper();
    if let Some(taps) = entries.scalar::<usize>("taps")? {
        schedule.n_taps = taps;
    }
    if let Some(spans) = entries.list::<usize>("phase_lengths")? {
        schedule.spans = spans;
    }
    if let Some(counts) = entries.list::<usize>("sparsity")? {
        schedule.n_nonzero = counts;
    }
    if let Some(rho) = entries.list::<f64>("phase_rho")? {
        schedule.rho_p = rho;
    }
    schedule
        .validate()
        .map_err(|e| to_config_error(&entries, e, ""))?;
    cfg.schedule = ScheduleSource::Random(schedule);

    cfg.algorithms = algorithms
        .iter()
        .map(|&alg| parse_algorithm(&entries, alg))
        .collect::<Result<Vec<_>>>()?;

    cfg.validate()
        .map_err(|e| to_config_error(&entries, e, ""))?;
    Ok(cfg)
}

fn parse_algorithm(entries: &Entries, algorithm: Algorithm) -> Result<AlgorithmSpec> {
    let prefix = algorithm.key();
    let key = |suffix: &str| format!("{prefix}.{suffix}");
    let mut spec = AlgorithmSpec::paper_default(algorithm);
    let params = &mut spec.params;

    if let Some(mu) = entries.scalar::<f64>(&key("mu"))? {
        params.mu = mu;
    }
    if let Some(gamma) = entries.scalar::<f64>(&key("gamma"))? {
        params.gamma = gamma;
    }
    if let Some(eps) = entries.scalar::<f64>(&key("epsilon"))? {
        params.epsilon_p = eps;
    }
    if let Some(p) = entries.scalar::<f64>(&key("p"))? {
        params.p = p;
    }
    if let Some(sign) = entries.scalar::<LeakSign>(&key("leak_sign"))? {
        params.leak_sign = sign;
    }
    let rho = entries.scalar::<f64>(&key("rho"))?;
    let gamma_p = entries.scalar::<f64>(&key("gamma_p"))?;
    if let Some(rho_p) = FilterParams::resolve_rho_p(params.mu, rho, gamma_p)
        .map_err(|e| entries.err(&key("rho"), e.to_string()))?
    {
        params.rho_p = rho_p;
    }
    algorithm
        .validate(params)
        .map_err(|e| to_config_error(entries, e, prefix))?;
    Ok(spec)
}

/// Maps a validation error onto the config key that caused it.
fn to_config_error(entries: &Entries, err: Error, prefix: &str) -> Error {
    match err {
        Error::Parameter { name, reason } => {
            let suffix = match name {
                "rho_p" if !prefix.is_empty() => "rho",
                "epsilon_p" => "epsilon",
                other => other,
            };
            let key = if prefix.is_empty() {
                suffix.to_string()
            } else {
                format!("{prefix}.{suffix}")
            };
            entries.err(&key, reason)
        }
        other => entries.err(prefix, other.to_string()),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn float(v: f64) -> String {
    format!("{v:?}")
}

/// Writes `cfg` back out in the format [`parse_config`] reads.
///
/// Only configs with a random schedule and algorithms named by their keys can
/// be expressed.
pub fn render_config(cfg: &ExperimentConfig) -> Result<String> {
    let ScheduleSource::Random(schedule) = &cfg.schedule else {
        return Err(Error::param(
            "schedule",
            "fixed plant schedules have no config-file representation",
        ));
    };
    if let Some(spec) = cfg.algorithms.iter().find(|s| s.name != s.algorithm.key()) {
        return Err(Error::param(
            "algorithms",
            format!(
                "custom algorithm name `{}` has no config-file representation",
                spec.name
            ),
        ));
    }

    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "seed = {}", cfg.seed);
    let _ = writeln!(w, "trials = {}", cfg.n_trials);
    let _ = writeln!(w, "taps = {}", schedule.n_taps);
    let _ = writeln!(w, "phase_lengths = {}", join(&schedule.spans));
    let _ = writeln!(w, "sparsity = {}", join(&schedule.n_nonzero));
    if schedule.rho_p.is_empty() {
        let _ = writeln!(w, "phase_rho = none");
    } else {
        let rho: Vec<String> = schedule.rho_p.iter().map(|v| float(*v)).collect();
        let _ = writeln!(w, "phase_rho = {}", rho.join(", "));
    }
    let _ = writeln!(w, "ar1.a = {}", float(cfg.ar1.a));
    let _ = writeln!(
        w,
        "ar1.innovation_variance = {}",
        float(cfg.ar1.innovation_variance)
    );
    let _ = writeln!(w, "normalize_mode = {}", cfg.ar1.normalize);
    let _ = writeln!(w, "noise.variance = {}", float(cfg.noise.variance));
    let _ = writeln!(w, "steady_state_window = {}", cfg.steady_state_window);
    let names: Vec<&str> = cfg.algorithms.iter().map(|s| s.algorithm.key()).collect();
    let _ = writeln!(w, "algorithms = {}", names.join(", "));
    for spec in &cfg.algorithms {
        let k = spec.algorithm.key();
        let p = &spec.params;
        for &suffix in param_keys(spec.algorithm) {
            let value = match suffix {
                "mu" => float(p.mu),
                "gamma" => float(p.gamma),
                "rho" => float(p.rho_p),
                "epsilon" => float(p.epsilon_p),
                "p" => float(p.p),
                "leak_sign" => p.leak_sign.as_str().to_string(),
                // Derived from rho.
                _ => continue,
            };
            let _ = writeln!(w, "{k}.{suffix} = {value}");
        }
    }
    Ok(out)
}
