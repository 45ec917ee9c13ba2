use std::sync::LazyLock;

use crate::{Error, Result};

/// Quantization step of stored LLRs.
pub const LLR_STEP: f64 = 1.0 / 16.0;
/// Largest magnitude in steps (10-bit magnitude).
pub const MAX_MAGNITUDE: i16 = 1023;

/// Guard bits kept while folding box-plus chains inside a check node.
const GUARD_BITS: u32 = 3;
const FINE_PER_STEP: i32 = 1 << GUARD_BITS;
const HALF_STEP_FINE: i32 = FINE_PER_STEP / 2;

/// `ln(1 + e^-x)` in fine units, indexed by `x` in fine units. The table ends
/// where the correction rounds to zero.
static CORRECTION: LazyLock<Vec<i32>> = LazyLock::new(|| {
    let fine = LLR_STEP / f64::from(FINE_PER_STEP);
    let mut table = Vec::new();
    for k in 0.. {
        let c = ((-(f64::from(k) * fine)).exp().ln_1p() / fine).round() as i32;
        if c == 0 {
            break;
        }
        table.push(c);
    }
    table
});

#[inline]
fn correction(table: &[i32], x: i32) -> i32 {
    table.get(x as usize).copied().unwrap_or(0)
}

/// Signed LLR as an integer number of [`LLR_STEP`]s, saturated to
/// `+-MAX_MAGNITUDE`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedLlr(i16);

impl FixedLlr {
    pub const ZERO: Self = Self(0);
    pub const MAX: Self = Self(MAX_MAGNITUDE);
    pub const MIN: Self = Self(-MAX_MAGNITUDE);

    /// Saturating construction from a step count.
    #[inline]
    pub fn from_steps(steps: i32) -> Self {
        Self(steps.clamp(-i32::from(MAX_MAGNITUDE), i32::from(MAX_MAGNITUDE)) as i16)
    }

    /// Rounds half away from zero and saturates.
    pub fn quantize(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Parameter(format!("cannot quantize {x}")));
        }
        Ok(Self::quantize_finite(x))
    }

    #[inline]
    pub(crate) fn quantize_finite(x: f64) -> Self {
        let steps = (x.abs() / LLR_STEP).round().min(f64::from(MAX_MAGNITUDE)) as i16;
        Self(if x < 0.0 { -steps } else { steps })
    }

    #[inline]
    pub fn steps(self) -> i16 {
        self.0
    }

    /// -1, 0 or +1.
    #[inline]
    pub fn sign(self) -> i8 {
        self.0.signum() as i8
    }

    #[inline]
    pub fn magnitude(self) -> u16 {
        self.0.unsigned_abs()
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.0) * LLR_STEP
    }

    #[inline]
    pub fn saturating_add(self, rhs: Self) -> Self {
        Self::from_steps(i32::from(self.0) + i32::from(rhs.0))
    }

    #[inline]
    pub fn saturating_sub(self, rhs: Self) -> Self {
        Self::from_steps(i32::from(self.0) - i32::from(rhs.0))
    }

    #[inline]
    fn to_fine(self) -> i32 {
        i32::from(self.0) << GUARD_BITS
    }

    #[inline]
    fn from_fine(fine: i32) -> Self {
        let mag = (fine.abs() + HALF_STEP_FINE) >> GUARD_BITS;
        Self::from_steps(if fine < 0 { -mag } else { mag })
    }
}

/// `sign(a) sign(b) [min(|a|,|b|) + ln(1+e^-|a+b|) - ln(1+e^-|a-b|)]` on the
/// fine grid. With unsigned magnitudes `|a+b|` and `|a-b|` become `A+B` and
/// `|A-B|`.
#[inline]
fn box_plus_fine(table: &[i32], a: i32, b: i32) -> i32 {
    let (ma, mb) = (a.abs(), b.abs());
    let mag = (ma.min(mb) + correction(table, ma + mb) - correction(table, (ma - mb).abs())).max(0);
    if (a < 0) != (b < 0) {
        -mag
    } else {
        mag
    }
}

/// Quantized box-plus, the pairwise SPA check-node combination.
pub fn box_plus(a: FixedLlr, b: FixedLlr) -> FixedLlr {
    FixedLlr::from_fine(box_plus_fine(&CORRECTION, a.to_fine(), b.to_fine()))
}

fn check_degree(inputs: &[FixedLlr], outputs: &[FixedLlr]) -> Result<()> {
    if inputs.len() < 2 {
        return Err(Error::Degree(inputs.len()));
    }
    if outputs.len() != inputs.len() {
        return Err(Error::Shape(format!(
            "{} outputs for {} inputs",
            outputs.len(),
            inputs.len()
        )));
    }
    Ok(())
}

/// Sum-product check-node update: each output is the box-plus fold of the
/// other inputs, carried on the guard-bit grid and rounded once.
pub fn cn_update_spa(inputs: &[FixedLlr], outputs: &mut [FixedLlr]) -> Result<()> {
    check_degree(inputs, outputs)?;
    let table: &[i32] = &CORRECTION;
    for (e, out) in outputs.iter_mut().enumerate() {
        let fold = inputs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != e)
            .map(|(_, q)| q.to_fine())
            .reduce(|acc, f| box_plus_fine(table, acc, f))
            .expect("degree checked");
        *out = FixedLlr::from_fine(fold);
    }
    Ok(())
}

/// Min-sum check-node update: extrinsic sign product times extrinsic minimum.
pub fn cn_update_msa(inputs: &[FixedLlr], outputs: &mut [FixedLlr]) -> Result<()> {
    check_degree(inputs, outputs)?;
    let (mut min1, mut min2, mut argmin) = (u16::MAX, u16::MAX, 0);
    let mut negatives = 0u32;
    let mut zeros = 0u32;
    for (e, q) in inputs.iter().enumerate() {
        let m = q.magnitude();
        if m < min1 {
            min2 = min1;
            min1 = m;
            argmin = e;
        } else if m < min2 {
            min2 = m;
        }
        negatives += u32::from(q.is_negative());
        zeros += u32::from(q.0 == 0);
    }
    for (e, (q, out)) in inputs.iter().zip(outputs.iter_mut()).enumerate() {
        let own_zero = u32::from(q.0 == 0);
        if zeros > own_zero {
            *out = FixedLlr::ZERO;
            continue;
        }
        let mag = i32::from(if e == argmin { min2 } else { min1 });
        let neg = (negatives - u32::from(q.is_negative())) % 2 == 1;
        *out = FixedLlr::from_steps(if neg { -mag } else { mag });
    }
    Ok(())
}

/// Blended check-node update; see the module docs. Ties for the weakest
/// input go to the lowest edge index.
pub fn cn_update_blend(inputs: &[FixedLlr], outputs: &mut [FixedLlr]) -> Result<()> {
    check_degree(inputs, outputs)?;
    blend_unchecked(inputs, outputs);
    Ok(())
}

#[inline]
pub(crate) fn blend_unchecked(inputs: &[FixedLlr], outputs: &mut [FixedLlr]) {
    let mut weakest = 0;
    let mut negatives = 0u32;
    for (e, q) in inputs.iter().enumerate() {
        if q.magnitude() < inputs[weakest].magnitude() {
            weakest = e;
        }
        negatives += u32::from(q.is_negative());
    }

    let table: &[i32] = &CORRECTION;
    let mut extrinsic: Option<i32> = None;
    for (e, q) in inputs.iter().enumerate() {
        if e != weakest {
            let f = q.to_fine();
            extrinsic = Some(match extrinsic {
                None => f,
                Some(acc) => box_plus_fine(table, acc, f),
            });
        }
    }
    let extrinsic = extrinsic.expect("degree checked");
    let total = box_plus_fine(table, extrinsic, inputs[weakest].to_fine());
    let total_mag = i32::from(FixedLlr::from_fine(total).magnitude());

    // A zero input is always the weakest one and zeroes `total`.
    for (e, (q, out)) in inputs.iter().zip(outputs.iter_mut()).enumerate() {
        *out = if e == weakest {
            FixedLlr::from_fine(extrinsic)
        } else {
            let neg = (negatives - u32::from(q.is_negative())) % 2 == 1;
            FixedLlr::from_steps(if neg { -total_mag } else { total_mag })
        };
    }
}
