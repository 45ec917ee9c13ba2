use std::fmt::Write as _;

use rand::Rng;

use super::{has_four_cycle, lift, CodeSpec, ExponentMatrix, LiftedPcm};
use crate::{Error, Result};

pub const DEFAULT_RESAMPLE_LIMIT: usize = 1000;

/// Shifts of the sub-code matrices `E_psi(slot)` for one period, each `c x b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubCodeShifts {
    memory: usize,
    period: usize,
    cn_blocks: usize,
    vn_blocks: usize,
    data: Vec<i32>,
}

impl SubCodeShifts {
    pub fn new(spec: &CodeSpec, data: Vec<i32>) -> Result<Self> {
        let expected = (spec.memory + 1) * spec.period * spec.cn_blocks * spec.vn_blocks;
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} sub-code shifts, got {}",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&e| e < 0 || e as usize >= spec.lifting) {
            return Err(Error::InvalidShift {
                row: 0,
                col: 0,
                shift: bad,
                lifting: spec.lifting,
            });
        }
        Ok(Self {
            memory: spec.memory,
            period: spec.period,
            cn_blocks: spec.cn_blocks,
            vn_blocks: spec.vn_blocks,
            data,
        })
    }

    fn sub_len(&self) -> usize {
        self.cn_blocks * self.vn_blocks
    }

    /// Row-major shifts of `E_psi(time)`; `time` is reduced modulo the period.
    pub fn sub_matrix(&self, psi: usize, time: usize) -> &[i32] {
        let slot = time % self.period;
        let start = (psi * self.period + slot) * self.sub_len();
        &self.data[start..start + self.sub_len()]
    }

    pub fn get(&self, psi: usize, time: usize, row: usize, col: usize) -> i32 {
        self.sub_matrix(psi, time)[row * self.vn_blocks + col]
    }

    /// All shifts, ordered by `psi`, then period slot, then row-major.
    pub fn as_slice(&self) -> &[i32] {
        &self.data
    }
}

/// One populated block of a layer: the VN block it touches and its shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockEdge {
    pub vn_block: usize,
    pub shift: usize,
}

/// A sampled member of the ensemble: the coupled exponent matrix and the
/// per-layer adjacency the decoder walks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeRealization {
    spec: CodeSpec,
    shifts: SubCodeShifts,
    coupled: ExponentMatrix,
    layers: Vec<Vec<BlockEdge>>,
}

impl CodeRealization {
    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn shifts(&self) -> &SubCodeShifts {
        &self.shifts
    }

    pub fn coupled(&self) -> &ExponentMatrix {
        &self.coupled
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Populated blocks of layer `l`, ordered by VN block.
    pub fn layer(&self, l: usize) -> &[BlockEdge] {
        &self.layers[l]
    }

    pub fn layers(&self) -> &[Vec<BlockEdge>] {
        &self.layers
    }

    pub fn layer_profile(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn has_four_cycle(&self) -> bool {
        has_four_cycle(&self.coupled, self.spec.lifting)
    }

    pub fn lifted(&self) -> LiftedPcm {
        lift(&self.coupled, self.spec.lifting).expect("realization shifts are bound to the lifting")
    }

    /// Text dump: a header line `b c psi T theta J`, then one line of
    /// row-major shifts per sub-matrix, `psi`-major, then period slot.
    pub fn to_dump(&self) -> String {
        let s = &self.spec;
        let mut out = format!(
            "{} {} {} {} {} {}\n",
            s.vn_blocks, s.cn_blocks, s.memory, s.period, s.lifting, s.coupling_len
        );
        for psi in 0..=s.memory {
            for slot in 0..s.period {
                let line: Vec<String> = self
                    .shifts
                    .sub_matrix(psi, slot)
                    .iter()
                    .map(i32::to_string)
                    .collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let parse_ints = |line: &str| -> Result<Vec<i64>> {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|e| Error::Parameter(format!("bad integer {tok:?}: {e}")))
                })
                .collect()
        };
        let header = parse_ints(
            lines
                .next()
                .ok_or_else(|| Error::Parameter("empty realization dump".into()))?,
        )?;
        let [b, c, memory, period, lifting, coupling_len] = header[..] else {
            return Err(Error::Parameter(format!(
                "header needs 6 fields, found {}",
                header.len()
            )));
        };
        let to_usize = |v: i64| {
            usize::try_from(v).map_err(|_| Error::Parameter(format!("negative header field {v}")))
        };
        let spec = CodeSpec {
            vn_blocks: to_usize(b)?,
            cn_blocks: to_usize(c)?,
            memory: to_usize(memory)?,
            period: to_usize(period)?,
            lifting: to_usize(lifting)?,
            coupling_len: to_usize(coupling_len)?,
        };
        spec.validate()?;
        let mut data = Vec::new();
        for _ in 0..(spec.memory + 1) * spec.period {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parameter("truncated realization dump".into()))?;
            let vals = parse_ints(line)?;
            if vals.len() != spec.cn_blocks * spec.vn_blocks {
                return Err(Error::Shape(format!(
                    "sub-matrix line has {} shifts, expected {}",
                    vals.len(),
                    spec.cn_blocks * spec.vn_blocks
                )));
            }
            for v in vals {
                data.push(
                    i32::try_from(v)
                        .map_err(|_| Error::Parameter(format!("shift {v} overflows")))?,
                );
            }
        }
        if lines.next().is_some() {
            return Err(Error::Parameter(
                "trailing lines in realization dump".into(),
            ));
        }
        build_coupled(&spec, SubCodeShifts::new(&spec, data)?)
    }
}

/// Places `E_psi(t + psi)` at block row `t + psi`, block column `t`, for every
/// message and termination instant; all other blocks stay empty.
pub fn build_coupled(spec: &CodeSpec, shifts: SubCodeShifts) -> Result<CodeRealization> {
    spec.validate()?;
    let check = SubCodeShifts::new(spec, shifts.as_slice().to_vec())?;
    debug_assert_eq!(check, shifts);

    let (b, c) = (spec.vn_blocks, spec.cn_blocks);
    let mut coupled = ExponentMatrix::empty(spec.num_layers(), spec.num_vn_blocks())?;
    for t in 0..spec.coupling_len {
        for psi in 0..=spec.memory {
            let time = t + psi;
            for jr in 0..c {
                for i in 0..b {
                    coupled.set(time * c + jr, t * b + i, shifts.get(psi, time, jr, i));
                }
            }
        }
    }

    let layers = (0..coupled.rows())
        .map(|l| {
            (0..coupled.cols())
                .filter(|&i| coupled.is_populated(l, i))
                .map(|i| BlockEdge {
                    vn_block: i,
                    shift: coupled.get(l, i) as usize,
                })
                .collect()
        })
        .collect();

    Ok(CodeRealization {
        spec: *spec,
        shifts,
        coupled,
        layers,
    })
}

/// Draws every sub-code shift uniformly from `[0, lifting)` and redraws the
/// whole period until the coupled code is free of 4-cycles.
pub fn sample_realization<R: Rng + ?Sized>(
    spec: &CodeSpec,
    rng: &mut R,
) -> Result<CodeRealization> {
    sample_realization_with_limit(spec, rng, DEFAULT_RESAMPLE_LIMIT)
}

pub fn sample_realization_with_limit<R: Rng + ?Sized>(
    spec: &CodeSpec,
    rng: &mut R,
    max_attempts: usize,
) -> Result<CodeRealization> {
    spec.validate()?;
    let count = (spec.memory + 1) * spec.period * spec.cn_blocks * spec.vn_blocks;
    let theta = spec.lifting as i32;
    for _ in 0..max_attempts {
        let data: Vec<i32> = (0..count).map(|_| rng.random_range(0..theta)).collect();
        let real = build_coupled(spec, SubCodeShifts::new(spec, data)?)?;
        if !real.has_four_cycle() {
            return Ok(real);
        }
    }
    Err(Error::ConstructionFailure(max_attempts))
}
