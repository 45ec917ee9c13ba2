use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use scldpc::channel::{apply_channel, generate_allzero_llrs, modulate_16qam, ChannelSpec};

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

#[test]
fn fading_power_is_chi_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = ChannelSpec::new(10.0);
    let symbols = vec![Complex64::new(1.0, 0.0); 40_000];
    let out = apply_channel(&symbols, &spec, &mut rng).unwrap();

    // 2 * branches * alpha^2 is chi-square with 2 * branches degrees of freedom.
    let dof = 2.0 * spec.branches as f64;
    let dist = ChiSquared::new(dof).unwrap();
    let bins = 25;
    let mut counts = vec![0usize; bins];
    for a in &out.gains {
        let u = dist.cdf(dof * a * a);
        counts[((u * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let expected = out.gains.len() as f64 / bins as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let critical = ChiSquared::new((bins - 1) as f64)
        .unwrap()
        .inverse_cdf(0.999);
    assert!(stat < critical, "chi-square {stat} >= {critical}");
}

#[test]
fn faded_symbol_energy_is_unit() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let bits = random_bits(&mut rng, 4 * 50_000);
    let symbols = modulate_16qam(&bits).unwrap();
    let out = apply_channel(&symbols, &ChannelSpec::new(10.0), &mut rng).unwrap();
    let n = symbols.len() as f64;
    let energy: f64 = symbols
        .iter()
        .zip(&out.gains)
        .map(|(x, a)| (x * a).norm_sqr())
        .sum::<f64>()
        / n;
    // |alpha x|^2 has variance below 3 here, so 5 sigma is about 0.04.
    assert!((energy - 1.0).abs() < 0.04, "{energy}");
}

#[test]
fn noise_variance_matches_snr() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let bits = random_bits(&mut rng, 4 * 50_000);
    let symbols = modulate_16qam(&bits).unwrap();
    let spec = ChannelSpec::awgn(3.0);
    let out = apply_channel(&symbols, &spec, &mut rng).unwrap();
    let var = symbols
        .iter()
        .zip(&out.received)
        .map(|(x, y)| (y - x).norm_sqr())
        .sum::<f64>()
        / symbols.len() as f64;
    assert!(
        (var / spec.n0() - 1.0).abs() < 0.02,
        "{var} vs {}",
        spec.n0()
    );
}

/// Exact LLRs of a symmetric channel are consistent: with the code bit at
/// zero, E[tanh(L/2)] = E[tanh(L/2)^2]. Both sides are bounded, unlike
/// E[exp(-L)] = 1.
#[test]
fn llrs_are_consistent() {
    for (seed, spec) in [(14, ChannelSpec::new(8.0)), (15, ChannelSpec::awgn(6.0))] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let llrs = generate_allzero_llrs(200_000, &spec, &mut rng).unwrap();
        let n = llrs.len() as f64;
        let t: Vec<f64> = llrs.values().iter().map(|l| (l / 2.0).tanh()).collect();
        let m1 = t.iter().sum::<f64>() / n;
        let m2 = t.iter().map(|v| v * v).sum::<f64>() / n;
        assert!((m1 - m2).abs() < 0.005, "{m1} vs {m2}");
        let errors = llrs.values().iter().filter(|&&l| l < 0.0).count();
        assert!(errors > 0 && errors < llrs.len() / 4);
    }
}
