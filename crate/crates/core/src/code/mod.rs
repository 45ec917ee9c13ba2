//! Code construction: QC lifting, spatial coupling with termination, and the
//! randomly sampled period-`T` ensemble.

mod exponent;
mod realization;
mod spec;

pub use exponent::{has_four_cycle, lift, ExponentMatrix, LiftedPcm};
pub use realization::{
    build_coupled, sample_realization, sample_realization_with_limit, BlockEdge, CodeRealization,
    SubCodeShifts, DEFAULT_RESAMPLE_LIMIT,
};
pub use spec::{CodeRates, CodeSpec};
