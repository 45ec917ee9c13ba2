use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{DecoderRow, RunConfig};
use super::output::write_results;
use crate::channel::generate_allzero_llrs;
use crate::code::{sample_realization_with_limit, CodeRealization};
use crate::window::{decode_windowed, WindowConfig};
use crate::{Error, Result};

const CODE_STREAM: u64 = 0;
const CHANNEL_STREAM: u64 = 1;
const Z_95: f64 = 1.959_963_984_540_054;

/// One line of the result table; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub decoder: String,
    pub strategy: String,
    pub window: usize,
    pub et_set: String,
    pub snr_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub bler_lo: f64,
    pub bler_hi: f64,
    pub anmu: f64,
    pub rel_anmu: f64,
    pub imax: u32,
    pub nmu_max: u64,
    pub seed: u64,
}

impl ResultRow {
    /// Total block-edge updates over all trials.
    pub fn total_nmu(&self) -> u64 {
        (self.anmu * self.trials as f64).round() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialResult {
    pub success: bool,
    pub nmu: u64,
}

/// Independent code and channel streams for one trial, keyed by the master
/// seed, the SNR value and the trial index. With `freeze_code` every trial
/// gets the code stream of trial 0.
pub fn trial_rngs(
    seed: u64,
    snr_db: f64,
    trial: u64,
    freeze_code: bool,
) -> (ChaCha8Rng, ChaCha8Rng) {
    let key = |t: u64| {
        let mut bytes = [0u8; 32];
        bytes[..8].copy_from_slice(&seed.to_le_bytes());
        bytes[8..16].copy_from_slice(&snr_db.to_bits().to_le_bytes());
        bytes[16..24].copy_from_slice(&t.to_le_bytes());
        ChaCha8Rng::from_seed(bytes)
    };
    let mut code = key(if freeze_code { 0 } else { trial });
    code.set_stream(CODE_STREAM);
    let mut channel = key(trial);
    channel.set_stream(CHANNEL_STREAM);
    (code, channel)
}

/// 95% Wilson score interval for `errors / trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if errors == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))
}

/// Per-trial outcomes of every row at one SNR. Each trial's code and channel
/// realization is shared by all rows.
pub fn run_trial_outcomes(
    cfg: &RunConfig,
    rows: &[DecoderRow],
    snr_db: f64,
) -> Result<Vec<Vec<TrialResult>>> {
    cfg.validate()?;
    let budget = cfg.budget();
    let window_cfgs: Vec<WindowConfig> = rows
        .iter()
        .map(|r| r.window_config(&cfg.code, &budget))
        .collect::<Result<_>>()?;
    let channel = cfg.channel(snr_db);
    channel.validate()?;
    let n = cfg.code.codeword_len();

    let frozen: Option<CodeRealization> = if cfg.freeze_code {
        let (mut code_rng, _) = trial_rngs(cfg.seed, snr_db, 0, true);
        Some(sample_realization_with_limit(
            &cfg.code,
            &mut code_rng,
            cfg.resample_limit,
        )?)
    } else {
        None
    };

    let run_trial = |trial: u64| -> Result<Vec<TrialResult>> {
        let (mut code_rng, mut channel_rng) = trial_rngs(cfg.seed, snr_db, trial, cfg.freeze_code);
        let sampled;
        let code = match &frozen {
            Some(c) => c,
            None => {
                sampled =
                    sample_realization_with_limit(&cfg.code, &mut code_rng, cfg.resample_limit)?;
                &sampled
            }
        };
        let llrs = generate_allzero_llrs(n, &channel, &mut channel_rng)?;
        window_cfgs
            .iter()
            .map(|wc| {
                decode_windowed(&llrs, code, wc).map(|o| TrialResult {
                    success: o.success,
                    nmu: o.nmu,
                })
            })
            .collect()
    };

    let per_trial: Vec<Vec<TrialResult>> = thread_pool(cfg.workers)?.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(run_trial)
            .collect::<Result<_>>()
    })?;

    Ok((0..rows.len())
        .map(|r| per_trial.iter().map(|t| t[r]).collect())
        .collect())
}

fn aggregate(
    cfg: &RunConfig,
    row: &DecoderRow,
    snr_db: f64,
    trials: &[TrialResult],
) -> Result<ResultRow> {
    let budget = cfg.budget();
    let wc = row.window_config(&cfg.code, &budget)?;
    let nmu_max = wc.nmu_max(&cfg.code)?;
    let n = trials.len() as u64;
    if n == 0 {
        return Err(Error::Parameter("zero trials".into()));
    }
    let block_errors = trials.iter().filter(|t| !t.success).count() as u64;
    let total_nmu: u64 = trials.iter().map(|t| t.nmu).sum();
    let anmu = total_nmu as f64 / n as f64;
    let (bler_lo, bler_hi) = wilson_interval(block_errors, n);
    Ok(ResultRow {
        decoder: row.label(),
        strategy: row.strategy.to_string(),
        window: row.effective_window(&cfg.code),
        et_set: row.et_set.to_string(),
        snr_db,
        trials: n,
        block_errors,
        bler: block_errors as f64 / n as f64,
        bler_lo,
        bler_hi,
        anmu,
        rel_anmu: anmu / nmu_max as f64,
        imax: wc.imax_per_window,
        nmu_max,
        seed: cfg.seed,
    })
}

/// Result rows of every decoder row at one SNR, in row order.
pub fn run_rows_at_snr(
    cfg: &RunConfig,
    rows: &[DecoderRow],
    snr_db: f64,
) -> Result<Vec<ResultRow>> {
    let outcomes = run_trial_outcomes(cfg, rows, snr_db)?;
    rows.iter()
        .zip(&outcomes)
        .map(|(row, trials)| aggregate(cfg, row, snr_db, trials))
        .collect()
}

pub fn run_point(cfg: &RunConfig, row: &DecoderRow, snr_db: f64) -> Result<ResultRow> {
    let mut rows = run_rows_at_snr(cfg, std::slice::from_ref(row), snr_db)?;
    Ok(rows.remove(0))
}

/// Every decoder row at every SNR, ordered row-major by decoder. Results are
/// written to `cfg.out` (CSV plus a JSON-lines mirror) when set.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut by_snr = Vec::with_capacity(cfg.snr_db.len());
    for &snr in &cfg.snr_db {
        log::info!(
            "snr {snr} dB: {} rows x {} trials",
            cfg.decoders.len(),
            cfg.trials
        );
        by_snr.push(run_rows_at_snr(cfg, &cfg.decoders, snr)?);
    }
    let mut results = Vec::with_capacity(cfg.decoders.len() * cfg.snr_db.len());
    for r in 0..cfg.decoders.len() {
        for point in &by_snr {
            results.push(point[r].clone());
        }
    }
    if let Some(out) = &cfg.out {
        write_results(&results, out)?;
    }
    Ok(results)
}
