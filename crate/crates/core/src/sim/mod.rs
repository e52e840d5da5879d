//! Monte-Carlo experiments: configuration, channel draws, runs and CSV
//! tables.

mod channels;
mod config;
mod experiment;
mod table;

pub use channels::{sample_channels, trial_seed};
pub use config::{load_config, ExperimentConfig, Mode, REFERENCE_GAINS_DOWN, REFERENCE_GAINS_UP};
pub use experiment::{draw_gains, preamble, run, run_fig4a, run_fig4b, run_oracle, run_single, solve};
pub use table::{
    emit_csv, parse_csv, read_csv, sort_rows, to_csv_string, AllocationDump, Method, ResultRow, RowKind, COLUMNS,
    VERBOSE_COLUMNS,
};
