//! Generates a matplotlib script that draws MSD learning curves in dB.

use std::fmt::Write as _;

use super::csv::CurveTable;
use crate::filter::Algorithm;

fn label_for(name: &str) -> String {
    name.parse::<Algorithm>()
        .map(|a| a.label().to_string())
        .unwrap_or_else(|_| name.to_string())
}

fn py_str(s: &str) -> String {
    let escaped = s.replace('\\', "\\\\").replace('"', "\\\"");
    format!("\"{escaped}\"")
}

/// Phase-boundary iterations for the given phase lengths, excluding the end of
/// the run.
pub fn phase_boundaries(spans: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::new();
    for span in spans.iter().take(spans.len().saturating_sub(1)) {
        acc += span;
        out.push(acc);
    }
    out
}

/// Script that reads `csv_path`, plots each column as `10 log10(MSD)` against
/// iteration, marks `boundaries` with dashed vertical lines and saves the
/// figure to `image_path`.
pub fn render_plot_script(
    table: &CurveTable,
    csv_path: &str,
    image_path: &str,
    boundaries: &[usize],
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "#!/usr/bin/env python3");
    let _ = writeln!(s, "# MSD learning curves, generated by sparse-lms plot.");
    let _ = writeln!(s, "import csv");
    let _ = writeln!(s, "import math");
    let _ = writeln!(s);
    let _ = writeln!(s, "import matplotlib");
    let _ = writeln!(s, "matplotlib.use(\"Agg\")");
    let _ = writeln!(s, "import matplotlib.pyplot as plt");
    let _ = writeln!(s);
    let _ = writeln!(s, "CSV_PATH = {}", py_str(csv_path));
    let _ = writeln!(s, "IMAGE_PATH = {}", py_str(image_path));
    let _ = writeln!(s, "SERIES = [");
    for name in &table.names {
        let _ = writeln!(
            s,
            "    ({}, {}),",
            py_str(&format!("msd_{name}")),
            py_str(&label_for(name))
        );
    }
    let _ = writeln!(s, "]");
    let marks: Vec<String> = boundaries.iter().map(|b| b.to_string()).collect();
    let _ = writeln!(s, "PHASE_BOUNDARIES = [{}]", marks.join(", "));
    s.push_str(
        r#"

def to_db(v):
    return 10.0 * math.log10(v) if v > 0 else float("nan")


def main():
    with open(CSV_PATH, newline="") as fh:
        rows = list(csv.DictReader(fh))
    iterations = [int(r["iteration"]) for r in rows]
    fig, ax = plt.subplots(figsize=(9, 5))
    for column, label in SERIES:
        ax.plot(iterations, [to_db(float(r[column])) for r in rows], label=label, linewidth=1.0)
    for boundary in PHASE_BOUNDARIES:
        ax.axvline(boundary, color="gray", linestyle="--", linewidth=0.8)
    ax.set_xlabel("Iteration")
    ax.set_ylabel("MSD (dB)")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(IMAGE_PATH, dpi=150)


if __name__ == "__main__":
    main()
"#,
    );
    s
}
