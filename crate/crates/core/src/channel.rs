//! All-zero codeword transmission: scrambling, Gray-mapped 16-QAM, Rayleigh
//! fading with maximum-ratio combining, AWGN, and exact log-MAP demapping.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const BITS_PER_SYMBOL: usize = 4;

/// Channel parameters. Symbol energy is fixed to 1 by the constellation
/// normalization, so `n0 = 10^(-snr_db / 10)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub snr_db: f64,
    pub branches: usize,
    pub fading_enabled: bool,
}

impl ChannelSpec {
    pub fn new(snr_db: f64) -> Self {
        Self {
            snr_db,
            branches: 4,
            fading_enabled: true,
        }
    }

    pub fn awgn(snr_db: f64) -> Self {
        Self {
            fading_enabled: false,
            ..Self::new(snr_db)
        }
    }

    pub fn es(&self) -> f64 {
        1.0
    }

    pub fn n0(&self) -> f64 {
        self.es() * 10f64.powf(-self.snr_db / 10.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.branches == 0 {
            return Err(Error::Parameter("at least one diversity branch".into()));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::Parameter(format!("snr {} dB", self.snr_db)));
        }
        Ok(())
    }
}

/// Pseudo-random scrambling bits; with the all-zero codeword these are also
/// the transmitted bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrambleSequence {
    bits: Vec<u8>,
}

impl ScrambleSequence {
    pub fn from_bits(bits: Vec<u8>) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Channel LLRs referenced to the code bits (positive favours 0).
#[derive(Debug, Clone, PartialEq)]
pub struct LlrBlock {
    values: Vec<f64>,
}

impl LlrBlock {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.values
    }
}

/// Received symbols and the real combined MRC gain of each symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOutput {
    pub received: Vec<Complex64>,
    pub gains: Vec<f64>,
}

fn check_multiple_of_symbol(n: usize) -> Result<()> {
    if !n.is_multiple_of(BITS_PER_SYMBOL) {
        return Err(Error::Shape(format!(
            "{n} bits do not fill whole 16-QAM symbols"
        )));
    }
    Ok(())
}

pub fn scramble_allzero<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ScrambleSequence> {
    check_multiple_of_symbol(n)?;
    let bits = (0..n).map(|_| u8::from(rng.random::<bool>())).collect();
    Ok(ScrambleSequence { bits })
}

const QAM_SCALE: f64 = 0.316_227_766_016_837_94; // 1 / sqrt(10)

/// Gray-mapped 16-QAM point for bits `(b0, b1, b2, b3)`: `b0, b2` select the
/// in-phase level, `b1, b3` the quadrature level.
pub fn qam16_point(bits: [u8; 4]) -> Complex64 {
    let s = |b: u8| 1.0 - 2.0 * f64::from(b & 1);
    let re = s(bits[0]) * (2.0 - s(bits[2]));
    let im = s(bits[1]) * (2.0 - s(bits[3]));
    Complex64::new(re, im) * QAM_SCALE
}

pub fn modulate_16qam(bits: &[u8]) -> Result<Vec<Complex64>> {
    check_multiple_of_symbol(bits.len())?;
    Ok(bits
        .chunks_exact(BITS_PER_SYMBOL)
        .map(|q| qam16_point([q[0], q[1], q[2], q[3]]))
        .collect())
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sd = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sd, im * sd)
}

/// Per symbol: `alpha^2 = sum_i |h_i|^2` over `branches` complex Gaussian
/// taps of variance `1 / branches`, then `y = alpha x + noise` with noise
/// variance `n0`.
pub fn apply_channel<R: Rng + ?Sized>(
    symbols: &[Complex64],
    spec: &ChannelSpec,
    rng: &mut R,
) -> Result<ChannelOutput> {
    spec.validate()?;
    let n0 = spec.n0();
    let tap_var = 1.0 / spec.branches as f64;
    let mut received = Vec::with_capacity(symbols.len());
    let mut gains = Vec::with_capacity(symbols.len());
    for &x in symbols {
        let alpha = if spec.fading_enabled {
            (0..spec.branches)
                .map(|_| complex_gaussian(rng, tap_var).norm_sqr())
                .sum::<f64>()
                .sqrt()
        } else {
            1.0
        };
        let noise = if n0 > 0.0 {
            complex_gaussian(rng, n0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        received.push(x * alpha + noise);
        gains.push(alpha);
    }
    Ok(ChannelOutput { received, gains })
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Exact log-MAP bit LLRs, descrambled so every value refers to a code bit.
pub fn demap_llr(
    received: &[Complex64],
    gains: &[f64],
    n0: f64,
    scramble: &ScrambleSequence,
) -> Result<LlrBlock> {
    if !(n0 > 0.0) {
        return Err(Error::Parameter(format!(
            "noise density {n0} must be positive"
        )));
    }
    if received.len() != gains.len() || scramble.len() != received.len() * BITS_PER_SYMBOL {
        return Err(Error::Shape(format!(
            "{} symbols, {} gains, {} scramble bits",
            received.len(),
            gains.len(),
            scramble.len()
        )));
    }
    let points: [Complex64; 16] = std::array::from_fn(|p| {
        qam16_point([
            (p >> 3) as u8 & 1,
            (p >> 2) as u8 & 1,
            (p >> 1) as u8 & 1,
            p as u8 & 1,
        ])
    });
    let mut values = Vec::with_capacity(scramble.len());
    let mut metric = [0.0f64; 16];
    let mut zero = [0.0f64; 8];
    let mut one = [0.0f64; 8];
    for ((&y, &alpha), sbits) in received
        .iter()
        .zip(gains)
        .zip(scramble.bits().chunks_exact(BITS_PER_SYMBOL))
    {
        for (m, &x) in metric.iter_mut().zip(&points) {
            *m = -(y - x * alpha).norm_sqr() / n0;
        }
        for (bit, &s) in sbits.iter().enumerate() {
            let shift = 3 - bit;
            let (mut z, mut o) = (0, 0);
            for (p, &m) in metric.iter().enumerate() {
                if (p >> shift) & 1 == 0 {
                    zero[z] = m;
                    z += 1;
                } else {
                    one[o] = m;
                    o += 1;
                }
            }
            let llr = log_sum_exp(&zero) - log_sum_exp(&one);
            values.push(if s & 1 == 1 { -llr } else { llr });
        }
    }
    Ok(LlrBlock { values })
}

/// Scramble, modulate, fade and demap one all-zero codeword of length `n`.
pub fn generate_allzero_llrs<R: Rng + ?Sized>(
    n: usize,
    spec: &ChannelSpec,
    rng: &mut R,
) -> Result<LlrBlock> {
    let scramble = scramble_allzero(n, rng)?;
    let symbols = modulate_16qam(scramble.bits())?;
    let out = apply_channel(&symbols, spec, rng)?;
    demap_llr(&out.received, &out.gains, spec.n0(), &scramble)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Direct evaluation of the 16-term sums for bit `bit` of one symbol.
    fn scalar_llr(y: Complex64, alpha: f64, n0: f64, bit: usize) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for b0 in 0..2u8 {
            for b1 in 0..2u8 {
                for b2 in 0..2u8 {
                    for b3 in 0..2u8 {
                        let bits = [b0, b1, b2, b3];
                        let x = Complex64::new(
                            (1.0 - 2.0 * b0 as f64) * (2.0 - (1.0 - 2.0 * b2 as f64)),
                            (1.0 - 2.0 * b1 as f64) * (2.0 - (1.0 - 2.0 * b3 as f64)),
                        ) / 10f64.sqrt();
                        let p = (-(y - alpha * x).norm_sqr() / n0).exp();
                        if bits[bit] == 0 {
                            num += p;
                        } else {
                            den += p;
                        }
                    }
                }
            }
        }
        (num / den).ln()
    }

    #[test]
    fn scrambler_is_deterministic_and_fair() {
        let a = scramble_allzero(100_000, &mut rng(5)).unwrap();
        let b = scramble_allzero(100_000, &mut rng(5)).unwrap();
        assert_eq!(a, b);
        let mean = a.bits().iter().map(|&x| f64::from(x)).sum::<f64>() / a.len() as f64;
        assert!((0.49..=0.51).contains(&mean), "{mean}");
        assert!(scramble_allzero(0, &mut rng(1)).unwrap().is_empty());
        assert!(matches!(
            scramble_allzero(6, &mut rng(1)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn qam_mapping_points() {
        let s = 10f64.sqrt();
        assert!((qam16_point([0, 0, 0, 0]) - Complex64::new(1.0, 1.0) / s).norm() < 1e-15);
        assert!((qam16_point([1, 1, 1, 1]) - Complex64::new(-3.0, -3.0) / s).norm() < 1e-15);
        let all: Vec<u8> = (0..16u8)
            .flat_map(|p| [p >> 3 & 1, p >> 2 & 1, p >> 1 & 1, p & 1])
            .collect();
        let pts = modulate_16qam(&all).unwrap();
        let energy = pts.iter().map(Complex64::norm_sqr).sum::<f64>() / 16.0;
        assert!((energy - 1.0).abs() < 1e-12);
        // Gray: neighbours on each axis differ in one bit.
        let mut levels: Vec<(f64, [u8; 2])> = (0..4u8)
            .map(|p| ((qam16_point([p >> 1, 0, p & 1, 0])).re, [p >> 1, p & 1]))
            .collect();
        levels.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in levels.windows(2) {
            let diff = (w[0].1[0] ^ w[1].1[0]) + (w[0].1[1] ^ w[1].1[1]);
            assert_eq!(diff, 1);
        }
    }

    #[test]
    fn noiseless_awgn_passes_symbols() {
        let spec = ChannelSpec::awgn(f64::INFINITY);
        assert!(spec.n0() == 0.0);
        let x = modulate_16qam(&[0, 1, 1, 0, 1, 1, 1, 1]).unwrap();
        let mut spec = ChannelSpec::awgn(0.0);
        spec.snr_db = 1e6;
        let out = apply_channel(&x, &spec, &mut rng(2)).unwrap();
        assert_eq!(out.gains, vec![1.0, 1.0]);
        for (a, b) in out.received.iter().zip(&x) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn fading_gain_has_unit_mean() {
        let x = vec![Complex64::new(1.0, 0.0); 100_000];
        let out = apply_channel(&x, &ChannelSpec::new(10.0), &mut rng(9)).unwrap();
        let mean = out.gains.iter().map(|a| a * a).sum::<f64>() / x.len() as f64;
        assert!((0.99..=1.01).contains(&mean), "{mean}");
    }

    #[test]
    fn demap_origin_gives_zero_first_bit() {
        let s = ScrambleSequence::from_bits(vec![0; 4]);
        let llr = demap_llr(&[Complex64::new(0.0, 0.0)], &[1.0], 0.5, &s).unwrap();
        assert!(llr.values()[0].abs() < 1e-12);
        assert!(llr.values()[1].abs() < 1e-12);
    }

    #[test]
    fn demap_rejects_bad_noise() {
        let s = ScrambleSequence::from_bits(vec![0; 4]);
        let y = [Complex64::new(0.3, 0.1)];
        assert!(matches!(
            demap_llr(&y, &[1.0], 0.0, &s),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            demap_llr(&y, &[1.0], -1.0, &s),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn demap_matches_scalar_oracle() {
        let mut r = rng(21);
        for _ in 0..50 {
            let y = Complex64::new(r.random_range(-1.5..1.5), r.random_range(-1.5..1.5));
            let alpha = r.random_range(0.2..2.0);
            let n0 = r.random_range(0.05..2.0);
            let s = ScrambleSequence::from_bits(vec![0; 4]);
            let llr = demap_llr(&[y], &[alpha], n0, &s).unwrap();
            for bit in 0..4 {
                let expect = scalar_llr(y, alpha, n0, bit);
                assert!(
                    (llr.values()[bit] - expect).abs() < 1e-9,
                    "{bit}: {} vs {expect}",
                    llr.values()[bit]
                );
            }
        }
    }

    #[test]
    fn noiseless_decisions_are_correct() {
        for p in 0..16u8 {
            let bits = vec![p >> 3 & 1, p >> 2 & 1, p >> 1 & 1, p & 1];
            let s = ScrambleSequence::from_bits(bits.clone());
            let y = modulate_16qam(&bits).unwrap();
            let llr = demap_llr(&y, &[1.0], 1e-4, &s).unwrap();
            assert!(
                llr.values().iter().all(|&v| v > 0.0),
                "{p}: {:?}",
                llr.values()
            );
        }
    }

    #[test]
    fn strong_awgn_llrs_are_large() {
        let llr = generate_allzero_llrs(4000, &ChannelSpec::awgn(40.0), &mut rng(4)).unwrap();
        assert_eq!(llr.len(), 4000);
        assert!(llr.values().iter().all(|&v| v > 20.0));
    }

    #[test]
    fn mean_llr_is_positive() {
        let llr = generate_allzero_llrs(100_000, &ChannelSpec::new(10.0), &mut rng(8)).unwrap();
        let mean = llr.values().iter().sum::<f64>() / llr.len() as f64;
        assert!(mean > 0.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn scramble_flip_negates(re in -2.0f64..2.0, im in -2.0f64..2.0, alpha in 0.1f64..3.0,
                                     n0 in 0.01f64..3.0, bits in proptest::collection::vec(0u8..2, 4)) {
                let y = [Complex64::new(re, im)];
                let base = demap_llr(&y, &[alpha], n0, &ScrambleSequence::from_bits(bits.clone())).unwrap();
                for i in 0..4 {
                    let mut flipped = bits.clone();
                    flipped[i] ^= 1;
                    let f = demap_llr(&y, &[alpha], n0, &ScrambleSequence::from_bits(flipped)).unwrap();
                    for j in 0..4 {
                        if i == j {
                            prop_assert_eq!(f.values()[j], -base.values()[j]);
                        } else {
                            prop_assert_eq!(f.values()[j], base.values()[j]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn llr_monotone_in_matched_filter() {
        let s = ScrambleSequence::from_bits(vec![0; 4]);
        let n0 = 0.3;
        let alpha = 1.0;
        let mut prev = f64::NEG_INFINITY;
        for k in -40..=40 {
            let y = Complex64::new(k as f64 * 0.05, 0.3);
            let l = demap_llr(&[y], &[alpha], n0, &s).unwrap().values()[0];
            assert!(l > prev);
            prev = l;
        }
    }
}
