//! Monte-Carlo harness: configuration, seeded trials, aggregation, result
//! files and the complexity table.

mod config;
mod output;
mod runner;
mod table;

pub use config::{parse_snr_list, DecoderRow, RunConfig};
pub use output::{jsonl_path, read_csv, write_csv, write_results, CSV_HEADER};
pub use runner::{
    run_point, run_rows_at_snr, run_sweep, run_trial_outcomes, trial_rngs, wilson_interval,
    ResultRow, TrialResult,
};
pub use table::{
    budget_deviation, format_table1, matches_reference, reproduce_table1, Table1Row,
    REFERENCE_TABLE1,
};
