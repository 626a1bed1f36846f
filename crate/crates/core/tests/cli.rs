use std::fs;
use std::path::Path;
use std::process::Command;

use sparse_lms::experiment::ExecutionMode;
use sparse_lms::io::{cmd_demo, cmd_plot, cmd_run, exit_code, read_curve_csv};

const BIN: &str = env!("CARGO_BIN_EXE_sparse-lms");

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("exp.cfg");
    fs::write(&path, text).unwrap();
    path
}

const TINY: &str =
    "trials = 1\nphase_lengths = 10\nsparsity = 2\nphase_rho = 0.0005\nsteady_state_window = 5\n";

#[test]
fn tiny_run_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TINY);
    let out = dir.path().join("out");
    let result = cmd_run(Some(&cfg), None, &out, ExecutionMode::Serial).unwrap();
    assert_eq!(result.curves.len(), 4);

    let csv = fs::read_to_string(out.join("msd.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(
        lines[0],
        "iteration,msd_lms,msd_llms,msd_lp_lms,msd_lp_llms"
    );
    let table = read_curve_csv(&csv).unwrap();
    for (col, curve) in table.columns.iter().zip(&result.curves) {
        assert_eq!(col, &curve.values);
    }

    let ss = fs::read_to_string(out.join("steady_state.txt")).unwrap();
    assert_eq!(ss.lines().filter(|l| l.starts_with("1 ")).count(), 4);

    let meta = fs::read_to_string(out.join("run_meta.txt")).unwrap();
    assert!(meta.contains("trials = 1"));
    assert!(meta.contains("phase_lengths = 10"));
    assert!(meta.contains("lambda_max = "));
    assert!(meta.contains("lms.mu_admissible = true"));
    assert!(meta.contains("lp_llms.diverged_trials = 0"));
}

#[test]
fn seed_override_changes_output_and_repeats_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "trials = 3\nphase_lengths = 200, 200\nsparsity = 1, 4\nphase_rho = 0.0005, 0.0002\nsteady_state_window = 50\n");
    let read = |name: &str, seed: u64| {
        let out = dir.path().join(name);
        cmd_run(Some(&cfg), Some(seed), &out, ExecutionMode::Parallel).unwrap();
        fs::read(out.join("msd.csv")).unwrap()
    };
    let a = read("a", 5);
    let b = read("b", 5);
    let c = read("c", 6);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn config_errors_map_to_exit_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "p = 1.5\n");
    let err = cmd_run(
        Some(&cfg),
        None,
        &dir.path().join("o"),
        ExecutionMode::Serial,
    )
    .unwrap_err();
    assert_eq!(exit_code(&err), 1);

    let status = Command::new(BIN)
        .args(["run", "--config"])
        .arg(write_config(dir.path(), "lp_lms.p = 1.5\n"))
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&status.stderr);
    assert!(stderr.contains("lp_lms.p"), "{stderr}");
    assert!(stderr.contains("line 1"), "{stderr}");
}

#[test]
fn unreadable_config_is_exit_code_two() {
    let output = Command::new(BIN)
        .args(["run", "--config", "/no/such/file.cfg", "--out", "/tmp"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn total_divergence_is_exit_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "trials = 2\nphase_lengths = 500\nsparsity = 1\nphase_rho = none\nsteady_state_window = 10\nalgorithms = lms\nlms.mu = 5\n",
    );
    let out = dir.path().join("o");
    let output = Command::new(BIN)
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    let meta = fs::read_to_string(out.join("run_meta.txt")).unwrap();
    assert!(meta.contains("lms.trials_used = 0"));
    assert!(meta.contains("lms.diverged_trials = 2"));
    assert!(meta.contains("lms.mu_admissible = false"));
}

#[test]
fn binary_run_then_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "trials = 2\nphase_lengths = 100, 100, 100\nsteady_state_window = 20\n",
    );
    let out = dir.path().join("run");
    let status = Command::new(BIN)
        .args(["run", "--serial", "--seed", "4", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let script = dir.path().join("fig.py");
    let status = Command::new(BIN)
        .arg("plot")
        .arg("--csv")
        .arg(out.join("msd.csv"))
        .arg("--out")
        .arg(&script)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&script).unwrap();
    assert_eq!(text.matches("(\"msd_").count(), 4);
    assert!(text.contains("PHASE_BOUNDARIES = [100, 200]"));
    assert!(text.contains("fig.png"));
}

#[test]
fn plot_rejects_bad_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("msd.csv");
    fs::write(&csv, "iteration,msd_lms\n").unwrap();
    let err = cmd_plot(&csv, &dir.path().join("p.py"), None).unwrap_err();
    assert_eq!(exit_code(&err), 2);

    fs::write(&csv, "iteration,msd_lms\n1,0.5\n2,zz\n").unwrap();
    let err = cmd_plot(&csv, &dir.path().join("p.py"), None).unwrap_err();
    assert!(err.to_string().contains("row 3"), "{err}");
}

#[test]
fn plot_single_series_with_explicit_phases() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    fs::write(&csv, "iteration,msd_lms\n1,0.5\n2,0.25\n3,0.125\n4,0.1\n").unwrap();
    let script = dir.path().join("p.py");
    cmd_plot(&csv, &script, Some(&[2, 2])).unwrap();
    let text = fs::read_to_string(&script).unwrap();
    assert_eq!(text.matches("(\"msd_").count(), 1);
    assert!(text.contains("PHASE_BOUNDARIES = [2]"));
}

#[test]
fn demo_ranks_lp_llms_first_in_sparse_phase() {
    let (result, text) = cmd_demo(None).unwrap();
    assert_eq!(result.n_trials, 20);
    assert_eq!(text.matches("Phase ").count(), 3);
    for phase in &result.report.phases {
        assert_eq!(phase.ranking().len(), 4);
    }
    assert_eq!(result.report.phases[0].ranking()[0].name, "lp_llms");
    let (_, again) = cmd_demo(None).unwrap();
    assert_eq!(text, again);
}
