//! Terminated quasi-cyclic spatially coupled LDPC codes, a fixed-point layered
//! decoder, and a windowed decoder whose iteration caps are normalized to the
//! same maximal number of message updates as a full block decoder.
//!
//! The crate is organized bottom-up:
//!
//! - [`code`]: exponent matrices, lifting, spatial coupling, ensemble sampling
//!   with 4-cycle rejection, and structural queries.
//! - [`channel`]: scrambled all-zero transmission over 16-QAM with Rayleigh/MRC
//!   fading and AWGN, followed by exact log-MAP demapping.
//! - [`kernel`]: fixed-point LLR arithmetic, box-plus, min-sum and the blended
//!   check-node update, and serial layer processing.
//! - [`window`]: window scheduling, update masks, early-termination sets,
//!   complexity budgeting, and the windowed / full block decoders.
//! - [`sim`]: Monte-Carlo runner, INI configuration, CSV/JSON-lines output and
//!   the complexity table.

pub mod channel;
pub mod code;
pub mod error;
pub mod kernel;
pub mod sim;
pub mod window;

pub use error::{Error, Result};
