use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::{parse_config, render_config};
use super::csv::{read_curve_csv, write_curve_csv};
use super::plot::{phase_boundaries, render_plot_script};
use crate::error::{Error, Result};
use crate::experiment::{
    estimate_lambda_max, run_experiment_with, ExecutionMode, ExperimentConfig, ExperimentResult,
    ScheduleSource, SteadyStateReport,
};
use crate::filter::Algorithm;

/// Trial count used by [`cmd_demo`].
pub const DEMO_TRIALS: usize = 20;

/// Process exit status for an error: 1 config, 2 I/O, 3 divergence.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. } | Error::Parameter { .. } | Error::Dimension { .. } => 1,
        Error::Io(_) | Error::Csv { .. } => 2,
        Error::Divergence { .. } | Error::AllDiverged { .. } => 3,
    }
}

fn io_err(path: &Path, err: std::io::Error) -> Error {
    Error::Io(format!("{}: {err}", path.display()))
}

pub fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        None => Ok(ExperimentConfig::paper()),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            parse_config(&text)
        }
    }
}

fn display_name(name: &str) -> String {
    name.parse::<Algorithm>()
        .map(|a| a.label().to_string())
        .unwrap_or_else(|_| name.to_string())
}

/// Aligned table with one row per (phase, algorithm).
pub fn format_steady_state(report: &SteadyStateReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# steady-state MSD: mean of the last {} iterations of each phase",
        report.window
    );
    let _ = writeln!(
        s,
        "{:<6} {:<12} {:>12} {:>24}",
        "phase", "algorithm", "msd_db", "msd_linear"
    );
    for phase in &report.phases {
        for entry in &phase.entries {
            let db = entry
                .db
                .map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
            let _ = writeln!(
                s,
                "{:<6} {:<12} {:>12} {:>24}",
                phase.phase + 1,
                entry.name,
                db,
                format!("{:.9e}", entry.linear)
            );
        }
    }
    s
}

fn format_run_meta(cfg: &ExperimentConfig, result: &ExperimentResult) -> Result<String> {
    let mut s = String::from("# resolved configuration\n");
    s.push_str(&render_config(cfg)?);
    let diag = estimate_lambda_max(&cfg.ar1, cfg.schedule.n_taps())?;
    let _ = writeln!(s, "# diagnostics");
    let _ = writeln!(s, "lambda_max = {:?}", diag.lambda_max);
    let _ = writeln!(s, "mu_bound = {:?}", diag.mu_bound);
    for (spec, curve) in cfg.algorithms.iter().zip(&result.curves) {
        let name = &spec.name;
        let _ = writeln!(s, "{name}.mu_admissible = {}", diag.admits(spec.params.mu));
        let _ = writeln!(s, "{name}.trials_used = {}", curve.n_trials_used);
        let _ = writeln!(s, "{name}.diverged_trials = {}", curve.diverged.len());
        if let Some((trial, iteration)) = curve.diverged.first() {
            let _ = writeln!(
                s,
                "{name}.first_divergence = trial {trial}, iteration {}",
                iteration + 1
            );
        }
    }
    Ok(s)
}

/// Runs the configured experiment and writes `msd.csv`, `steady_state.txt`
/// and `run_meta.txt` into `out_dir`.
///
/// Output files are written even when some filter diverged in every trial;
/// that case is then reported as [`Error::AllDiverged`].
pub fn cmd_run(
    config_path: Option<&Path>,
    seed: Option<u64>,
    out_dir: &Path,
    mode: ExecutionMode,
) -> Result<ExperimentResult> {
    let mut cfg = load_config(config_path)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let result = run_experiment_with(&cfg, mode)?;

    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let csv_path = out_dir.join("msd.csv");
    let file = fs::File::create(&csv_path).map_err(|e| io_err(&csv_path, e))?;
    write_curve_csv(&result.curves, std::io::BufWriter::new(file))?;

    let ss_path = out_dir.join("steady_state.txt");
    fs::write(&ss_path, format_steady_state(&result.report)).map_err(|e| io_err(&ss_path, e))?;

    let meta_path = out_dir.join("run_meta.txt");
    fs::write(&meta_path, format_run_meta(&cfg, &result)?).map_err(|e| io_err(&meta_path, e))?;

    let dead = result.fully_diverged();
    if !dead.is_empty() {
        return Err(Error::AllDiverged { algorithms: dead });
    }
    Ok(result)
}

/// Reads `phase_lengths` from a `run_meta.txt` beside the CSV, if present.
fn sibling_phase_lengths(csv_path: &Path) -> Option<Vec<usize>> {
    let meta = csv_path.parent()?.join("run_meta.txt");
    let text = fs::read_to_string(meta).ok()?;
    let line = text.lines().find_map(|l| {
        l.split_once('=')
            .filter(|(k, _)| k.trim() == "phase_lengths")
    })?;
    line.1
        .split(',')
        .map(|v| v.trim().parse::<usize>().ok())
        .collect()
}

/// Writes a plotting script for `csv_path` to `out_path`. The script renders
/// to `out_path` with a `.png` extension.
///
/// Phase markers come from `phase_lengths`, falling back to the
/// `run_meta.txt` written next to the CSV by [`cmd_run`].
pub fn cmd_plot(
    csv_path: &Path,
    out_path: &Path,
    phase_lengths: Option<&[usize]>,
) -> Result<PathBuf> {
    let text = fs::read_to_string(csv_path).map_err(|e| io_err(csv_path, e))?;
    let table = read_curve_csv(&text)?;
    let spans = match phase_lengths {
        Some(spans) => spans.to_vec(),
        None => sibling_phase_lengths(csv_path).unwrap_or_default(),
    };
    let boundaries: Vec<usize> = phase_boundaries(&spans)
        .into_iter()
        .filter(|b| *b < table.len())
        .collect();
    let image = out_path.with_extension("png");
    let script = render_plot_script(
        &table,
        &csv_path.to_string_lossy(),
        &image.to_string_lossy(),
        &boundaries,
    );
    fs::write(out_path, script).map_err(|e| io_err(out_path, e))?;
    Ok(image)
}

/// Reference experiment with [`DEMO_TRIALS`] trials. Returns the result and a
/// per-phase ranking for printing.
pub fn cmd_demo(seed: Option<u64>) -> Result<(ExperimentResult, String)> {
    let mut cfg = ExperimentConfig {
        n_trials: DEMO_TRIALS,
        ..ExperimentConfig::paper()
    };
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let result = run_experiment_with(&cfg, ExecutionMode::Parallel)?;
    let dead = result.fully_diverged();
    if !dead.is_empty() {
        return Err(Error::AllDiverged { algorithms: dead });
    }

    let (n_taps, sparsity) = match &cfg.schedule {
        ScheduleSource::Random(spec) => (spec.n_taps, spec.n_nonzero.clone()),
        ScheduleSource::Fixed(_) => unreachable!("demo uses the random reference schedule"),
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} trials, seed {}, steady state = last {} iterations of each phase",
        cfg.n_trials, cfg.seed, result.report.window
    );
    for (phase, nnz) in result.report.phases.iter().zip(sparsity) {
        let _ = writeln!(
            s,
            "\nPhase {} (SR = {nnz}/{n_taps}, iterations {}-{})",
            phase.phase + 1,
            phase.start + 1,
            phase.end
        );
        for (rank, entry) in phase.ranking().into_iter().enumerate() {
            let db = entry
                .db
                .map_or_else(|| "n/a".to_string(), |v| format!("{v:.2} dB"));
            let _ = writeln!(
                s,
                "  {}. {:<10} {:>12}",
                rank + 1,
                display_name(&entry.name),
                db
            );
        }
    }
    Ok((result, s))
}
