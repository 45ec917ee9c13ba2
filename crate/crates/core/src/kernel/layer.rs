use std::fmt::Debug;
use std::ops::Range;

use super::fixed::{blend_unchecked, FixedLlr, LLR_STEP};
use super::reference;
use crate::channel::LlrBlock;
use crate::code::CodeRealization;
use crate::{Error, Result};

/// Arithmetic used by the layer engine. Messages and `q` values are
/// `Value`s; posteriors are `Post`s, which may be wider.
pub trait LlrDomain {
    type Value: Copy + Default + PartialEq + Debug + Send + Sync;
    type Post: Copy + Default + PartialEq + Debug + Send + Sync;

    fn from_channel(x: f64) -> Result<Self::Post>;
    /// `q = L - R`, brought into message range.
    fn extrinsic(l: Self::Post, r: Self::Value) -> Self::Value;
    /// `L - R_old + R_new`.
    fn commit(l: Self::Post, r_old: Self::Value, r_new: Self::Value) -> Self::Post;
    fn is_negative(v: Self::Value) -> bool;
    fn post_is_negative(l: Self::Post) -> bool;
    fn to_f64(v: Self::Value) -> f64;
    fn post_to_f64(l: Self::Post) -> f64;
    /// Blended check-node update; `inputs.len() >= 2` is guaranteed.
    fn check_update(inputs: &[Self::Value], outputs: &mut [Self::Value]);
}

/// 10-bit saturating fixed point for messages. Posteriors are kept as
/// unsaturated step counts: a posterior clipped to 10 bits no longer equals
/// its channel value plus its messages, and subtracting a large old message
/// from the clipped value can flip its sign on a clean block.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fixed;

/// Unquantized `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Reference;

impl LlrDomain for Fixed {
    type Value = FixedLlr;
    type Post = i32;

    fn from_channel(x: f64) -> Result<i32> {
        Ok(i32::from(FixedLlr::quantize(x)?.steps()))
    }

    #[inline]
    fn extrinsic(l: i32, r: FixedLlr) -> FixedLlr {
        FixedLlr::from_steps(l - i32::from(r.steps()))
    }

    #[inline]
    fn commit(l: i32, r_old: FixedLlr, r_new: FixedLlr) -> i32 {
        l - i32::from(r_old.steps()) + i32::from(r_new.steps())
    }

    #[inline]
    fn is_negative(v: FixedLlr) -> bool {
        v.is_negative()
    }

    #[inline]
    fn post_is_negative(l: i32) -> bool {
        l < 0
    }

    fn to_f64(v: FixedLlr) -> f64 {
        v.to_f64()
    }

    fn post_to_f64(l: i32) -> f64 {
        f64::from(l) * LLR_STEP
    }

    #[inline]
    fn check_update(inputs: &[FixedLlr], outputs: &mut [FixedLlr]) {
        blend_unchecked(inputs, outputs);
    }
}

impl LlrDomain for Reference {
    type Value = f64;
    type Post = f64;

    fn from_channel(x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Parameter(format!("non-finite channel LLR {x}")));
        }
        Ok(x)
    }

    fn extrinsic(l: f64, r: f64) -> f64 {
        l - r
    }

    fn commit(l: f64, r_old: f64, r_new: f64) -> f64 {
        l - r_old + r_new
    }

    fn is_negative(v: f64) -> bool {
        v < 0.0
    }

    fn post_is_negative(l: f64) -> bool {
        l < 0.0
    }

    fn to_f64(v: f64) -> f64 {
        v
    }

    fn post_to_f64(l: f64) -> f64 {
        l
    }

    fn check_update(inputs: &[f64], outputs: &mut [f64]) {
        reference::cn_update_blend(inputs, outputs);
    }
}

/// Which VN blocks of a layer may have their messages and posteriors written.
/// Blocks outside the mask are still read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateMask {
    All,
    /// Blocks with index `>= first` are updatable.
    FromVnBlock(usize),
}

impl UpdateMask {
    #[inline]
    pub fn contains(self, vn_block: usize) -> bool {
        match self {
            Self::All => true,
            Self::FromVnBlock(first) => vn_block >= first,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerOutcome {
    /// Every check of the layer was satisfied by the signs of its inputs.
    pub parity_ok: bool,
    /// Block edges written.
    pub updates: u64,
}

/// Posteriors `L_i` and check-to-variable messages `R` of one decode.
///
/// Messages of layer `l` live at `offsets[l] + row * degree + edge`.
#[derive(Debug, Clone)]
pub struct DecoderState<D: LlrDomain> {
    lifting: usize,
    posteriors: Vec<D::Post>,
    messages: Vec<D::Value>,
    offsets: Vec<usize>,
    degrees: Vec<usize>,
    updates: u64,
    q: Vec<D::Value>,
    out: Vec<D::Value>,
    vns: Vec<usize>,
    updatable: Vec<bool>,
}

impl<D: LlrDomain> DecoderState<D> {
    /// Posteriors start at the channel LLRs, messages at zero.
    pub fn new(code: &CodeRealization, llrs: &LlrBlock) -> Result<Self> {
        let spec = code.spec();
        if llrs.len() != spec.codeword_len() {
            return Err(Error::Shape(format!(
                "{} channel LLRs for a length-{} code",
                llrs.len(),
                spec.codeword_len()
            )));
        }
        let posteriors = llrs
            .values()
            .iter()
            .map(|&x| D::from_channel(x))
            .collect::<Result<Vec<_>>>()?;
        let degrees = code.layer_profile();
        let mut offsets = Vec::with_capacity(degrees.len() + 1);
        let mut acc = 0;
        for d in &degrees {
            offsets.push(acc);
            acc += d * spec.lifting;
        }
        offsets.push(acc);
        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        Ok(Self {
            lifting: spec.lifting,
            posteriors,
            messages: vec![D::Value::default(); acc],
            offsets,
            degrees,
            updates: 0,
            q: vec![D::Value::default(); max_degree],
            out: vec![D::Value::default(); max_degree],
            vns: vec![0; max_degree],
            updatable: vec![false; max_degree],
        })
    }

    pub fn posteriors(&self) -> &[D::Post] {
        &self.posteriors
    }

    pub fn posterior(&self, vn: usize) -> D::Post {
        self.posteriors[vn]
    }

    /// Overwrites one posterior; used to inject errors in diagnostics.
    pub fn set_posterior(&mut self, vn: usize, value: D::Post) {
        self.posteriors[vn] = value;
    }

    /// Message from check `row` of `layer` along its `edge`-th block edge.
    pub fn message(&self, layer: usize, edge: usize, row: usize) -> D::Value {
        self.messages[self.offsets[layer] + row * self.degrees[layer] + edge]
    }

    /// Cumulative block-edge updates committed by [`process_layer`].
    pub fn update_counter(&self) -> u64 {
        self.updates
    }

    /// Sum of the messages currently addressed to each VN.
    pub fn incoming_sums(&self, code: &CodeRealization) -> Vec<f64> {
        let mut sums = vec![0.0; self.posteriors.len()];
        let theta = self.lifting;
        for (l, edges) in code.layers().iter().enumerate() {
            for row in 0..theta {
                for (e, edge) in edges.iter().enumerate() {
                    let vn = edge.vn_block * theta + (row + edge.shift) % theta;
                    sums[vn] += D::to_f64(self.message(l, e, row));
                }
            }
        }
        sums
    }
}

/// Serially updates the `lifting` checks of one layer.
///
/// For every check, `q = L - R` is formed for all connected VNs, the blended
/// update runs over all of them, and only masked edges commit `R <- new` and
/// `L <- L - R + new`. Parity is taken from the signs of `q`.
pub fn process_layer<D: LlrDomain>(
    state: &mut DecoderState<D>,
    code: &CodeRealization,
    layer: usize,
    mask: UpdateMask,
) -> Result<LayerOutcome> {
    let edges = code
        .layers()
        .get(layer)
        .ok_or_else(|| Error::Internal(format!("layer {layer} out of range")))?;
    let degree = edges.len();
    let theta = state.lifting;
    if state.degrees.get(layer) != Some(&degree) || code.spec().lifting != theta {
        return Err(Error::Internal(format!(
            "decoder state does not match the adjacency of layer {layer}"
        )));
    }
    if degree < 2 {
        return Err(Error::Degree(degree));
    }

    let DecoderState {
        posteriors,
        messages,
        offsets,
        q,
        out,
        vns,
        updatable,
        ..
    } = state;
    let (q, out, vns) = (&mut q[..degree], &mut out[..degree], &mut vns[..degree]);
    let updatable = &mut updatable[..degree];
    for (u, e) in updatable.iter_mut().zip(edges) {
        *u = mask.contains(e.vn_block);
    }
    let committed = updatable.iter().filter(|&&u| u).count();
    let block = &mut messages[offsets[layer]..offsets[layer + 1]];

    let mut parity_ok = true;
    for (row, msgs) in block.chunks_exact_mut(degree).enumerate() {
        let mut odd = false;
        for (e, edge) in edges.iter().enumerate() {
            let mut col = row + edge.shift;
            if col >= theta {
                col -= theta;
            }
            let vn = edge.vn_block * theta + col;
            vns[e] = vn;
            q[e] = D::extrinsic(posteriors[vn], msgs[e]);
            odd ^= D::is_negative(q[e]);
        }
        parity_ok &= !odd;
        D::check_update(q, out);
        for e in 0..degree {
            if updatable[e] {
                posteriors[vns[e]] = D::commit(posteriors[vns[e]], msgs[e], out[e]);
                msgs[e] = out[e];
            }
        }
    }

    state.updates += committed as u64;
    Ok(LayerOutcome {
        parity_ok,
        updates: committed as u64,
    })
}

/// Hard decisions: bit 0 iff the posterior is non-negative.
pub fn hard_decisions<D: LlrDomain>(state: &DecoderState<D>, vns: Range<usize>) -> Vec<u8> {
    state.posteriors[vns]
        .iter()
        .map(|&v| u8::from(D::post_is_negative(v)))
        .collect()
}
