use serde::{Deserialize, Serialize};

use super::budget::{BudgetSpec, WindowConfig};
use super::schedule::{et_layer_set, num_positions, update_mask, EtSet, Strategy};
use crate::channel::LlrBlock;
use crate::code::CodeRealization;
use crate::kernel::{hard_decisions, process_layer, DecoderState, Fixed, LlrDomain};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    /// Estimated information bits, instant by instant.
    pub info_bits: Vec<u8>,
    /// All information bits match the transmitted all-zero word.
    pub success: bool,
    /// Block-edge message updates consumed.
    pub nmu: u64,
    /// Iterations run at each window position.
    pub per_window_iters: Vec<u32>,
}

/// Fixed-point windowed decode of an all-zero transmission.
pub fn decode_windowed(
    llrs: &LlrBlock,
    code: &CodeRealization,
    cfg: &WindowConfig,
) -> Result<DecodeOutcome> {
    decode_windowed_observed::<Fixed, _>(llrs, code, cfg, |_, _| {})
}

/// Full block decoder: layered sweeps over the whole matrix with ET once
/// every layer's parity held during a sweep.
pub fn decode_fbd(
    llrs: &LlrBlock,
    code: &CodeRealization,
    budget: &BudgetSpec,
) -> Result<DecodeOutcome> {
    let cfg = WindowConfig::full_block(code.spec(), EtSet::All, budget)?;
    decode_windowed(llrs, code, &cfg)
}

/// Windowed decode in any arithmetic; `observer` sees the state and the
/// layer index after every processed layer.
///
/// At each position the window's layers are swept top to bottom up to
/// `imax_per_window` times. The window advances early once every layer of the
/// ET set reported satisfied parity during the last sweep. State is carried
/// across positions unchanged.
pub fn decode_windowed_observed<D, F>(
    llrs: &LlrBlock,
    code: &CodeRealization,
    cfg: &WindowConfig,
    mut observer: F,
) -> Result<DecodeOutcome>
where
    D: LlrDomain,
    F: FnMut(&DecoderState<D>, usize),
{
    if cfg.imax_per_window < 1 {
        return Err(Error::Parameter(
            "imax_per_window must be at least 1".into(),
        ));
    }
    let spec = code.spec();
    let num_layers = code.num_layers();
    let window = if cfg.strategy == Strategy::FullBlock {
        num_layers
    } else {
        cfg.window
    };
    let positions = num_positions(num_layers, window)?;
    let mut state = DecoderState::<D>::new(code, llrs)?;
    let mut per_window_iters = Vec::with_capacity(positions);

    for pos in 0..positions {
        let mask = update_mask(pos, cfg.strategy, spec);
        let et = et_layer_set(pos, window, spec.memory, cfg.et_set);
        let mut iters = 0;
        while iters < cfg.imax_per_window {
            iters += 1;
            let mut et_ok = true;
            for layer in pos..pos + window {
                let out = process_layer(&mut state, code, layer, mask)?;
                if !out.parity_ok && et.as_ref().is_some_and(|r| r.contains(&layer)) {
                    et_ok = false;
                }
                observer(&state, layer);
            }
            if et.is_some() && et_ok {
                break;
            }
        }
        per_window_iters.push(iters);
    }

    let theta = spec.lifting;
    let info_blocks = spec.vn_blocks - spec.cn_blocks;
    let mut info_bits = Vec::with_capacity(spec.info_len());
    for t in 0..spec.msg_instants() {
        let first = t * spec.vn_blocks * theta;
        info_bits.extend(hard_decisions(&state, first..first + info_blocks * theta));
    }
    let success = info_bits.iter().all(|&b| b == 0);
    Ok(DecodeOutcome {
        info_bits,
        success,
        nmu: state.update_counter(),
        per_window_iters,
    })
}
