//! Monte Carlo BLER experiments: per-trial seeding, early stopping, Wilson
//! intervals, curve comparison and CSV / SVG output.

mod compare;
mod config;
mod export;
mod runner;
mod trial;

pub use compare::{compare, snr_at_bler, Crossing, GainReport, BLER_FLOOR};
pub use config::{
    McsScheme, SimConfig, SnrReference, Technology, DEFAULT_MAX_TRIALS, DEFAULT_PAYLOAD_BYTES, DEFAULT_TARGET_ERRORS,
};
pub use export::{csv_string, export_csv, export_plot, parse_csv, plot_svg, read_csv, CSV_HEADER};
pub use runner::{
    run_point, run_sweep, run_sweep_with_workers, wilson_interval, BlerCurve, BlerPoint, CurveSummary, ErrorBreakdown,
    BATCH_SIZE,
};
pub use trial::{run_trial, trial_rng, TrialError, TrialSetup, DOT11P_GUARD_SAMPLES};
