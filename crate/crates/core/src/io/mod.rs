//! File formats and the command implementations behind the `sparse-lms`
//! binary.

pub mod commands;
pub mod config;
pub mod csv;
pub mod plot;

pub use commands::{cmd_demo, cmd_plot, cmd_run, exit_code, DEMO_TRIALS};
pub use config::{parse_config, render_config};
pub use csv::{curve_csv_string, read_curve_csv, write_curve_csv, CurveTable};
pub use plot::{phase_boundaries, render_plot_script};
