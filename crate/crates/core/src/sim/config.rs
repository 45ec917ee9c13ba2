use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelSpec;
use crate::code::{CodeSpec, DEFAULT_RESAMPLE_LIMIT};
use crate::window::{BudgetSpec, EtSet, Strategy, WindowConfig};
use crate::{Error, Result};

/// One decoder configuration of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecoderRow {
    pub strategy: Strategy,
    /// Window size in layers; ignored for the full block decoder.
    pub window: usize,
    pub et_set: EtSet,
}

impl DecoderRow {
    pub fn fbd() -> Self {
        Self {
            strategy: Strategy::FullBlock,
            window: 0,
            et_set: EtSet::All,
        }
    }

    pub fn windowed(strategy: Strategy, window: usize, et_set: EtSet) -> Self {
        Self {
            strategy,
            window,
            et_set,
        }
    }

    pub fn label(&self) -> String {
        match self.strategy {
            Strategy::FullBlock if self.et_set == EtSet::All => "FBD".to_string(),
            Strategy::FullBlock => format!("FBD-{}", self.et_set),
            s => format!("{s}-W{}-{}", self.window, self.et_set),
        }
    }

    /// Window size as reported in results: the whole matrix for the FBD.
    pub fn effective_window(&self, spec: &CodeSpec) -> usize {
        match self.strategy {
            Strategy::FullBlock => spec.num_layers(),
            _ => self.window,
        }
    }

    pub fn window_config(&self, spec: &CodeSpec, budget: &BudgetSpec) -> Result<WindowConfig> {
        WindowConfig::new(spec, self.strategy, self.window, self.et_set, budget)
    }
}

impl fmt::Display for DecoderRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `fbd [all|none]` or `<vn|cn> <window> <target|complete|all|none>`.
impl FromStr for DecoderRow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        let strategy: Strategy = toks
            .first()
            .ok_or_else(|| Error::Config("empty decoder row".into()))?
            .parse()?;
        match (strategy, &toks[1..]) {
            (Strategy::FullBlock, []) => Ok(Self::fbd()),
            (Strategy::FullBlock, [et]) => Ok(Self {
                et_set: et.parse()?,
                ..Self::fbd()
            }),
            (_, [w, et]) => Ok(Self::windowed(
                strategy,
                w.parse()
                    .map_err(|e| Error::Config(format!("window {w:?}: {e}")))?,
                et.parse()?,
            )),
            _ => Err(Error::Config(format!("cannot parse decoder row {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub code: CodeSpec,
    pub resample_limit: usize,
    /// Reuse the realization of trial 0 for every trial.
    pub freeze_code: bool,
    pub snr_db: Vec<f64>,
    pub fading_enabled: bool,
    pub branches: usize,
    pub imax_fbd: u32,
    pub decoders: Vec<DecoderRow>,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        use EtSet::{Complete, Target};
        use Strategy::{CnCentered as Cn, VnCentered as Vn};
        let mut decoders = vec![DecoderRow::fbd()];
        for w in [12, 16, 20] {
            decoders.push(DecoderRow::windowed(Vn, w, Target));
            decoders.push(DecoderRow::windowed(Vn, w, Complete));
        }
        decoders.push(DecoderRow::windowed(Vn, 14, Target));
        for w in [10, 12, 14] {
            decoders.push(DecoderRow::windowed(Cn, w, Target));
        }
        Self {
            code: CodeSpec::regular_5_10(256, 100),
            resample_limit: DEFAULT_RESAMPLE_LIMIT,
            freeze_code: false,
            snr_db: (0..=20).map(|i| 6.0 + 0.5 * f64::from(i)).collect(),
            fading_enabled: true,
            branches: 4,
            imax_fbd: BudgetSpec::DEFAULT_IMAX_FBD,
            decoders,
            trials: 1000,
            seed: 1,
            workers: 1,
            out: None,
        }
    }
}

fn parse_value<T: FromStr>(section: &str, key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("[{section}] {key} = {value:?}: {e}")))
}

fn parse_bool(section: &str, key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!(
            "[{section}] {key} = {value:?}: not a boolean"
        ))),
    }
}

/// Comma-separated values, or `start:stop:step` (inclusive).
pub fn parse_snr_list(value: &str) -> Result<Vec<f64>> {
    let value = value.trim();
    let bad = |m: String| Error::Config(format!("snr list {value:?}: {m}"));
    if value.contains(':') {
        let parts: Vec<f64> = value
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|e| bad(e.to_string())))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad("range needs start:stop:step".into()));
        };
        if !(step > 0.0) || stop < start {
            return Err(bad("empty range".into()));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    let list: Vec<f64> = value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().map_err(|e| bad(e.to_string())))
        .collect::<Result<_>>()?;
    if list.is_empty() {
        return Err(bad("no values".into()));
    }
    Ok(list)
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_ini_str(&text)
    }

    /// Parses the INI format. Every key is optional and defaults to
    /// [`RunConfig::default`]; unknown sections and keys are errors.
    pub fn from_ini_str(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = Self::default();
        let mut decoders = Vec::new();
        let mut saw_decoders = false;
        for (section, props) in ini.iter() {
            let Some(section) = section else {
                if let Some((k, _)) = props.iter().next() {
                    return Err(Error::Config(format!("key {k:?} outside any section")));
                }
                continue;
            };
            for (key, value) in props.iter() {
                let unknown = || Error::Config(format!("unknown key {key:?} in [{section}]"));
                match section {
                    "code" => match key {
                        "vn_blocks" => cfg.code.vn_blocks = parse_value(section, key, value)?,
                        "cn_blocks" => cfg.code.cn_blocks = parse_value(section, key, value)?,
                        "memory" => cfg.code.memory = parse_value(section, key, value)?,
                        "period" => cfg.code.period = parse_value(section, key, value)?,
                        "lifting" => cfg.code.lifting = parse_value(section, key, value)?,
                        "coupling_len" => cfg.code.coupling_len = parse_value(section, key, value)?,
                        "resample_limit" => cfg.resample_limit = parse_value(section, key, value)?,
                        "freeze_code" => cfg.freeze_code = parse_bool(section, key, value)?,
                        _ => return Err(unknown()),
                    },
                    "channel" => match key {
                        "snr_db" => cfg.snr_db = parse_snr_list(value)?,
                        "fading" => cfg.fading_enabled = parse_bool(section, key, value)?,
                        "branches" => cfg.branches = parse_value(section, key, value)?,
                        _ => return Err(unknown()),
                    },
                    "budget" => match key {
                        "imax_fbd" => cfg.imax_fbd = parse_value(section, key, value)?,
                        _ => return Err(unknown()),
                    },
                    "decoders" => match key {
                        "row" => {
                            saw_decoders = true;
                            decoders.push(value.parse()?);
                        }
                        _ => return Err(unknown()),
                    },
                    "run" => match key {
                        "trials" => cfg.trials = parse_value(section, key, value)?,
                        "seed" => cfg.seed = parse_value(section, key, value)?,
                        "workers" => cfg.workers = parse_value(section, key, value)?,
                        "out" => cfg.out = Some(PathBuf::from(value.trim())),
                        _ => return Err(unknown()),
                    },
                    _ => return Err(Error::Config(format!("unknown section [{section}]"))),
                }
            }
            if section == "decoders" {
                saw_decoders = true;
            }
        }
        if saw_decoders {
            cfg.decoders = decoders;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn budget(&self) -> BudgetSpec {
        BudgetSpec::new(&self.code, self.imax_fbd)
    }

    pub fn channel(&self, snr_db: f64) -> ChannelSpec {
        ChannelSpec {
            snr_db,
            branches: self.branches,
            fading_enabled: self.fading_enabled,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.code.validate()?;
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("empty SNR list".into()));
        }
        if self.decoders.is_empty() {
            return Err(Error::Config("no decoder rows configured".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.resample_limit == 0 {
            return Err(Error::Config("resample_limit must be at least 1".into()));
        }
        self.channel(self.snr_db[0]).validate()?;
        let budget = self.budget();
        for row in &self.decoders {
            row.window_config(&self.code, &budget)?;
        }
        Ok(())
    }
}
