use std::ops::RangeInclusive;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parameters of a terminated, periodic QC-SC-LDPC ensemble.
///
/// The termination always spans `memory` coupling instants, so the number of
/// message instants is `coupling_len - memory`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    /// VN blocks per coupling instant.
    pub vn_blocks: usize,
    /// CN blocks per coupling instant.
    pub cn_blocks: usize,
    /// Coupling memory.
    pub memory: usize,
    /// Period of the time-varying sub-codes.
    pub period: usize,
    /// Lifting factor.
    pub lifting: usize,
    /// Coupling length, message plus termination instants.
    pub coupling_len: usize,
}

/// Code dimensions and rates; rates are exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeRates {
    pub k: u64,
    pub n: u64,
    pub rate: Ratio<u64>,
    pub asymptotic_rate: Ratio<u64>,
    pub constraint_len: u64,
}

impl CodeSpec {
    /// The (5,10) ensemble with `T = 3`: `b = 2`, `c = 1`, `memory = 4`.
    pub fn regular_5_10(lifting: usize, coupling_len: usize) -> Self {
        Self {
            vn_blocks: 2,
            cn_blocks: 1,
            memory: 4,
            period: 3,
            lifting,
            coupling_len,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidSpec(m));
        if self.cn_blocks == 0 {
            return fail("cn_blocks must be at least 1".into());
        }
        if self.vn_blocks <= self.cn_blocks {
            return fail(format!(
                "vn_blocks ({}) must exceed cn_blocks ({})",
                self.vn_blocks, self.cn_blocks
            ));
        }
        if self.period == 0 {
            return fail("period must be at least 1".into());
        }
        if self.lifting == 0 {
            return fail("lifting factor must be at least 1".into());
        }
        if self.lifting > i32::MAX as usize {
            return fail("lifting factor does not fit a shift".into());
        }
        if self.coupling_len <= self.memory {
            return fail(format!(
                "coupling length {} leaves no message instants with memory {}",
                self.coupling_len, self.memory
            ));
        }
        Ok(())
    }

    pub fn msg_instants(&self) -> usize {
        self.coupling_len - self.memory
    }

    pub fn term_instants(&self) -> usize {
        self.memory
    }

    /// VN degree for fully populated sub-matrices.
    pub fn vn_degree(&self) -> usize {
        self.cn_blocks * (self.memory + 1)
    }

    /// Block rows of the coupled exponent matrix, `c (J + memory)`.
    pub fn num_layers(&self) -> usize {
        self.cn_blocks * (self.coupling_len + self.memory)
    }

    /// Block columns of the coupled exponent matrix, `b J`.
    pub fn num_vn_blocks(&self) -> usize {
        self.vn_blocks * self.coupling_len
    }

    pub fn codeword_len(&self) -> usize {
        self.num_vn_blocks() * self.lifting
    }

    pub fn info_len(&self) -> usize {
        self.msg_instants() * (self.vn_blocks - self.cn_blocks) * self.lifting
    }

    /// Coupling instant (row time index) of block row `layer`.
    pub fn layer_row_instant(&self, layer: usize) -> usize {
        layer / self.cn_blocks
    }

    /// Coupling instant of VN block `vn_block`.
    pub fn vn_block_instant(&self, vn_block: usize) -> usize {
        vn_block / self.vn_blocks
    }

    /// Coupling instants `t` whose VN blocks meet block row `layer`.
    pub fn layer_instants(&self, layer: usize) -> RangeInclusive<usize> {
        let r = self.layer_row_instant(layer);
        r.saturating_sub(self.memory)..=r.min(self.coupling_len - 1)
    }

    /// Number of populated blocks in block row `layer`.
    pub fn layer_degree(&self, layer: usize) -> usize {
        self.vn_blocks * self.layer_instants(layer).count()
    }

    /// Block degree of every layer, top to bottom.
    pub fn layer_profile(&self) -> Vec<usize> {
        (0..self.num_layers())
            .map(|l| self.layer_degree(l))
            .collect()
    }

    /// Total number of block edges, i.e. populated entries of the coupled matrix.
    pub fn block_edges(&self) -> usize {
        self.layer_profile().iter().sum()
    }

    /// True iff the VN blocks of instant `t` are connected to block row `layer`.
    pub fn is_band_populated(&self, layer: usize, instant: usize) -> bool {
        let r = self.layer_row_instant(layer);
        instant < self.coupling_len && instant <= r && r - instant <= self.memory
    }

    pub fn rates(&self) -> CodeRates {
        let (b, c, theta) = (
            self.vn_blocks as u64,
            self.cn_blocks as u64,
            self.lifting as u64,
        );
        let (jm, jt) = (self.msg_instants() as u64, self.term_instants() as u64);
        let n = (jm + jt) * b * theta;
        let k = jm * (b - c) * theta;
        CodeRates {
            k,
            n,
            rate: Ratio::new(k, n),
            asymptotic_rate: Ratio::new(b - c, b),
            constraint_len: b * theta * (self.memory as u64 + 1),
        }
    }
}
