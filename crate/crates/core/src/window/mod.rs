//! Windowed and full block decoding under a shared message-update budget.
//!
//! All complexity figures count block edges of the coupled exponent matrix;
//! the lifting factor does not enter them.

mod budget;
mod decode;
mod schedule;

pub use budget::{derive_imax, i1_per_iteration, nmsg_middle, BudgetSpec, WindowConfig};
pub use decode::{decode_fbd, decode_windowed, decode_windowed_observed, DecodeOutcome};
pub use schedule::{et_layer_set, num_positions, update_mask, window_layers, EtSet, Strategy};
