use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scldpc::code::{sample_realization_with_limit, CodeSpec};
use scldpc::sim::{
    format_table1, matches_reference, parse_snr_list, reproduce_table1, run_sweep, RunConfig,
};
use scldpc::window::BudgetSpec;

#[derive(Parser)]
#[command(
    name = "scldpc",
    version,
    about = "Windowed decoding of spatially coupled LDPC codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo sweep and write CSV plus JSON lines.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Comma list or start:stop:step, in dB.
        #[arg(long)]
        snr: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the complexity budget table; exit status 1 on any mismatch.
    Table,
    /// Sample one code realization and dump its shifts.
    Codegen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Take the code parameters from this config instead of the defaults.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> scldpc::Result<ExitCode> {
    match cli.command {
        Command::Simulate {
            config,
            snr,
            trials,
            seed,
            workers,
            out,
        } => {
            let mut cfg = RunConfig::from_file(&config)?;
            if let Some(s) = snr {
                cfg.snr_db = parse_snr_list(&s)?;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if out.is_some() {
                cfg.out = out;
            }
            let rows = run_sweep(&cfg)?;
            for r in &rows {
                println!(
                    "{:<16} {:>6.2} dB  bler {:.3e} [{:.3e}, {:.3e}]  rel_anmu {:.4}",
                    r.decoder, r.snr_db, r.bler, r.bler_lo, r.bler_hi, r.rel_anmu
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Table => {
            let table = reproduce_table1(
                &CodeSpec::regular_5_10(256, 100),
                BudgetSpec::DEFAULT_IMAX_FBD,
            )?;
            print!("{}", format_table1(&table));
            Ok(if matches_reference(&table) {
                ExitCode::SUCCESS
            } else {
                eprintln!("table does not match the reference values");
                ExitCode::from(1)
            })
        }
        Command::Codegen { seed, out, config } => {
            let cfg = match config {
                Some(path) => RunConfig::from_file(&path)?,
                None => RunConfig::default(),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let code = sample_realization_with_limit(&cfg.code, &mut rng, cfg.resample_limit)?;
            std::fs::write(&out, code.to_dump())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
