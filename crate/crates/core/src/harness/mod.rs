//! Configuration, orchestration, slope fits and reports for experiments.

mod config;
mod report;
mod run;
mod verify;

pub use config::{BumpParams, EpsPolicy, ExperimentConfig, ExperimentKind, TGrid};
pub use report::{
    emit_report, fit_slope, fit_slope_from, read_report, summary_path, summary_text, write_csv,
    FitReport, ResultRow, CSV_HEADER,
};
pub use run::{
    monotone_after, run, Check, RunOutput, BALANCE_TOLERANCE, DECAY_SLOPE_THRESHOLD,
    FOLD_TOLERANCE, INTERPOLATION_TOLERANCE, ORBIT_TOLERANCE,
};
pub use verify::{verify, Suite};
