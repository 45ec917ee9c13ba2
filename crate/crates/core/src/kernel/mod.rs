//! Layered message-passing kernel.
//!
//! Check-node updates use the blend of SPA and min-sum: the edge carrying the
//! weakest incoming message gets the exact extrinsic box-plus value, every
//! other edge gets the magnitude of the box-plus over all inputs with its own
//! extrinsic sign. The same layer engine runs in 10-bit fixed point
//! ([`Fixed`]) or in `f64` ([`Reference`]).

mod fixed;
mod layer;
pub mod reference;

pub use fixed::{
    box_plus, cn_update_blend, cn_update_msa, cn_update_spa, FixedLlr, LLR_STEP, MAX_MAGNITUDE,
};
pub use layer::{
    hard_decisions, process_layer, DecoderState, Fixed, LayerOutcome, LlrDomain, Reference,
    UpdateMask,
};
