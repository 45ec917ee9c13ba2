use serde::{Deserialize, Serialize};

use super::schedule::{num_positions, update_mask, EtSet, Strategy};
use crate::code::CodeSpec;
use crate::kernel::UpdateMask;
use crate::{Error, Result};

/// The full block decoder's worst case, which every configuration shares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetSpec {
    pub imax_fbd: u32,
    /// Block edges updated by one full block iteration.
    pub i1_fbd: u64,
    pub nmu_max: u64,
}

impl BudgetSpec {
    pub const DEFAULT_IMAX_FBD: u32 = 200;

    pub fn new(spec: &CodeSpec, imax_fbd: u32) -> Self {
        let i1_fbd = spec.block_edges() as u64;
        Self {
            imax_fbd,
            i1_fbd,
            nmu_max: u64::from(imax_fbd) * i1_fbd,
        }
    }
}

/// Block edges of `layer` that `mask` lets through.
fn masked_degree(spec: &CodeSpec, layer: usize, mask: UpdateMask) -> u64 {
    let instants = spec
        .layer_instants(layer)
        .filter(|&t| mask.contains(t * spec.vn_blocks))
        .count();
    (instants * spec.vn_blocks) as u64
}

/// Block-edge updates of one iteration at every window position, summed
/// over all positions.
pub fn i1_per_iteration(spec: &CodeSpec, strategy: Strategy, window: usize) -> Result<u64> {
    if strategy == Strategy::FullBlock {
        return Ok(spec.block_edges() as u64);
    }
    let positions = num_positions(spec.num_layers(), window)?;
    Ok((0..positions)
        .map(|pos| {
            let mask = update_mask(pos, strategy, spec);
            (pos..pos + window)
                .map(|l| masked_degree(spec, l, mask))
                .sum::<u64>()
        })
        .sum())
}

/// Block-edge updates of one iteration for a window far from both
/// terminations. `None` for the full block decoder.
pub fn nmsg_middle(spec: &CodeSpec, strategy: Strategy, window: usize) -> Option<u64> {
    let per_layer = |k: usize| match strategy {
        // Layer k of the window reaches back to instant k - memory; only
        // instants inside the window count.
        Strategy::VnCentered => k.min(spec.memory) + 1,
        Strategy::CnCentered => spec.memory + 1,
        Strategy::FullBlock => 0,
    };
    if strategy == Strategy::FullBlock {
        return None;
    }
    Some(
        (0..window)
            .map(|k| (per_layer(k) * spec.vn_blocks * spec.cn_blocks) as u64)
            .sum(),
    )
}

/// `floor(imax_fbd * i1_fbd / i1(strategy, window))`.
pub fn derive_imax(
    budget: &BudgetSpec,
    spec: &CodeSpec,
    strategy: Strategy,
    window: usize,
) -> Result<u32> {
    let i1 = i1_per_iteration(spec, strategy, window)?;
    if i1 == 0 {
        return Err(Error::Parameter("window performs no updates".into()));
    }
    let imax = u64::from(budget.imax_fbd) * budget.i1_fbd / i1;
    u32::try_from(imax).map_err(|_| Error::Parameter(format!("iteration cap {imax} overflows")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowConfig {
    /// Window size in layers; the whole matrix for the full block decoder.
    pub window: usize,
    pub strategy: Strategy,
    pub et_set: EtSet,
    pub imax_per_window: u32,
}

impl WindowConfig {
    /// Derives the per-window iteration cap from `budget`.
    pub fn new(
        spec: &CodeSpec,
        strategy: Strategy,
        window: usize,
        et_set: EtSet,
        budget: &BudgetSpec,
    ) -> Result<Self> {
        spec.validate()?;
        if strategy == Strategy::FullBlock {
            return Self::full_block(spec, et_set, budget);
        }
        if spec.cn_blocks != 1 {
            return Err(Error::InvalidSpec(format!(
                "windowed decoding needs one CN block per instant, got {}",
                spec.cn_blocks
            )));
        }
        num_positions(spec.num_layers(), window)?;
        if window <= 2 * spec.memory + 1 {
            log::warn!(
                "window {window} <= 2*memory+1 = {}: target and complete ET sets are not strictly nested",
                2 * spec.memory + 1
            );
        }
        let imax_per_window = derive_imax(budget, spec, strategy, window)?;
        if imax_per_window == 0 {
            return Err(Error::Parameter(format!(
                "budget of {} updates allows no iteration with a {strategy} window of {window}",
                budget.nmu_max
            )));
        }
        Ok(Self {
            window,
            strategy,
            et_set,
            imax_per_window,
        })
    }

    /// Full block decoder with ET over all layers or none.
    pub fn full_block(spec: &CodeSpec, et_set: EtSet, budget: &BudgetSpec) -> Result<Self> {
        if !matches!(et_set, EtSet::All | EtSet::None) {
            return Err(Error::Config(format!(
                "the full block decoder supports ET over ALL or NONE, not {et_set}"
            )));
        }
        if budget.imax_fbd == 0 {
            return Err(Error::Parameter("imax_fbd must be at least 1".into()));
        }
        Ok(Self {
            window: spec.num_layers(),
            strategy: Strategy::FullBlock,
            et_set,
            imax_per_window: budget.imax_fbd,
        })
    }

    pub fn i1(&self, spec: &CodeSpec) -> Result<u64> {
        i1_per_iteration(spec, self.strategy, self.window)
    }

    /// Worst-case block-edge updates of one decode.
    pub fn nmu_max(&self, spec: &CodeSpec) -> Result<u64> {
        Ok(u64::from(self.imax_per_window) * self.i1(spec)?)
    }
}
