use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::CodeSpec;
use crate::kernel::UpdateMask;
use crate::{Error, Result};

/// Which edges of the window's layers are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Only edges to VNs of instants inside the window.
    VnCentered,
    /// Every edge of every layer in the window.
    CnCentered,
    /// One window covering the whole coupled matrix.
    FullBlock,
}

/// Check nodes whose parity lets the window advance early.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EtSet {
    /// Top-most `memory + 1` layers of the window.
    Target,
    /// All but the bottom-most `memory` layers.
    Complete,
    All,
    /// Early termination disabled.
    None,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::VnCentered => "VN",
            Self::CnCentered => "CN",
            Self::FullBlock => "FBD",
        }
    }
}

impl EtSet {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Target => "TARGET",
            Self::Complete => "COMPLETE",
            Self::All => "ALL",
            Self::None => "NONE",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for EtSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "VN" | "VN_CENTERED" => Ok(Self::VnCentered),
            "CN" | "CN_CENTERED" => Ok(Self::CnCentered),
            "FBD" | "FULL_BLOCK" => Ok(Self::FullBlock),
            _ => Err(Error::Config(format!("unknown update strategy {s:?}"))),
        }
    }
}

impl FromStr for EtSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TARGET" | "TAR" => Ok(Self::Target),
            "COMPLETE" | "COM" => Ok(Self::Complete),
            "ALL" => Ok(Self::All),
            "NONE" => Ok(Self::None),
            _ => Err(Error::Config(format!(
                "unknown early-termination set {s:?}"
            ))),
        }
    }
}

/// Number of window positions, `M - W + 1`.
pub fn num_positions(num_layers: usize, window: usize) -> Result<usize> {
    if window == 0 || window > num_layers {
        return Err(Error::Parameter(format!(
            "window of {window} layers for a {num_layers}-layer matrix"
        )));
    }
    Ok(num_layers - window + 1)
}

/// Layers `position .. position + window`.
pub fn window_layers(position: usize, window: usize, num_layers: usize) -> Result<Range<usize>> {
    let positions = num_positions(num_layers, window)?;
    if position >= positions {
        return Err(Error::Parameter(format!(
            "window position {position} outside 0..{positions}"
        )));
    }
    Ok(position..position + window)
}

/// Updatable VN blocks at window `position`. Only `VnCentered` restricts
/// anything: instants before the window become read-only.
pub fn update_mask(position: usize, strategy: Strategy, spec: &CodeSpec) -> UpdateMask {
    match strategy {
        Strategy::VnCentered => UpdateMask::FromVnBlock(position * spec.vn_blocks),
        Strategy::CnCentered | Strategy::FullBlock => UpdateMask::All,
    }
}

/// Layers whose parity gates early advance, or `None` with ET disabled.
pub fn et_layer_set(
    position: usize,
    window: usize,
    memory: usize,
    et_set: EtSet,
) -> Option<Range<usize>> {
    let len = match et_set {
        EtSet::Target => (memory + 1).min(window),
        EtSet::Complete => window.saturating_sub(memory),
        EtSet::All => window,
        EtSet::None => return None,
    };
    Some(position..position + len)
}
