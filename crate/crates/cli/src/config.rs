//! Flat key-value experiment configuration with explicit provenance.
//!
//! Resolution order: built-in defaults, then the config file, then command
//! line flags. Every resolved value and its origin lands in the run manifest.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::BTreeMap;
use std::path::Path;
use tincell_core::model::{NetworkParams, SchedulingPolicy, TinParams};
use tincell_core::sim::{LambdaUMode, SimulationConfig, TypicalCellMode};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Default,
    ConfigFile,
    Cli,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Default => "default",
            Origin::ConfigFile => "config",
            Origin::Cli => "cli",
        }
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub lambda_b: f64,
    pub p_dbm: f64,
    pub n_dbm: f64,
    pub alpha: f64,
    pub m_factor: f64,
    pub mu: f64,
    pub theta_db: f64,
    /// `None` means auto: smallest window meeting the expected-BS floor.
    pub window_side: Option<f64>,
    pub guard_fraction: f64,
    pub trials: Option<u64>,
    pub seed: u64,
    pub typical_cell: TypicalCellMode,
    pub lambda_u: LambdaUMode,
    origins: BTreeMap<&'static str, Origin>,
}

impl Default for Resolved {
    fn default() -> Self {
        // Baseline operating point: 46 dBm transmit power, −110 dBm noise,
        // path-loss exponent 4, five BSs per unit area.
        Self {
            lambda_b: 5.0,
            p_dbm: 46.0,
            n_dbm: -110.0,
            alpha: 4.0,
            m_factor: 1.0,
            mu: 1.8,
            theta_db: 10.0,
            window_side: None,
            guard_fraction: 0.25,
            trials: None,
            seed: 42,
            typical_cell: TypicalCellMode::Random,
            lambda_u: LambdaUMode::Infinite,
            origins: BTreeMap::new(),
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "schema",
    "lambda_b",
    "p_dbm",
    "n_dbm",
    "alpha",
    "m_factor",
    "mu",
    "theta_db",
    "window_side",
    "guard_fraction",
    "trials",
    "seed",
    "typical_cell",
    "lambda_u_mode",
];

impl Resolved {
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut out = Self::default();
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key = value", path.display(), lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                bail!(
                    "{}:{}: unknown key {key:?} (known: {})",
                    path.display(),
                    lineno + 1,
                    KNOWN_KEYS.join(", ")
                );
            }
            out.apply(key, value, Origin::ConfigFile)
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(out)
    }

    pub fn apply(&mut self, key: &str, value: &str, origin: Origin) -> Result<()> {
        let parse_f64 = |v: &str| -> Result<f64> {
            v.parse::<f64>().map_err(|_| anyhow!("field {key}: not a number: {v:?}"))
        };
        match key {
            "schema" => {
                let v: u64 = value.parse().map_err(|_| anyhow!("schema must be an integer"))?;
                if v != SCHEMA_VERSION {
                    bail!("unsupported schema version {v} (supported: {SCHEMA_VERSION})");
                }
            }
            "lambda_b" => self.lambda_b = parse_f64(value)?,
            "p_dbm" => self.p_dbm = parse_f64(value)?,
            "n_dbm" => self.n_dbm = parse_f64(value)?,
            "alpha" => self.alpha = parse_f64(value)?,
            "m_factor" => self.m_factor = parse_f64(value)?,
            "mu" => self.mu = parse_f64(value)?,
            "theta_db" => self.theta_db = parse_f64(value)?,
            "window_side" => {
                self.window_side =
                    if value == "auto" { None } else { Some(parse_f64(value)?) }
            }
            "guard_fraction" => self.guard_fraction = parse_f64(value)?,
            "trials" => {
                self.trials = Some(
                    value.parse::<u64>().map_err(|_| anyhow!("trials must be an integer"))?,
                )
            }
            "seed" => {
                self.seed =
                    value.parse::<u64>().map_err(|_| anyhow!("seed must be an integer"))?
            }
            "typical_cell" => {
                self.typical_cell = match value {
                    "random" => TypicalCellMode::Random,
                    "crofton" => TypicalCellMode::Crofton,
                    other => bail!("typical_cell must be random | crofton, got {other:?}"),
                }
            }
            "lambda_u_mode" => {
                self.lambda_u = if value == "infinite" {
                    LambdaUMode::Infinite
                } else {
                    LambdaUMode::Finite(parse_f64(value)?)
                }
            }
            other => bail!("unknown key {other:?}"),
        }
        if key != "schema" {
            self.origins.insert(
                KNOWN_KEYS.iter().find(|&&k| k == key).copied().unwrap_or("schema"),
                origin,
            );
        }
        Ok(())
    }

    /// Validated network parameters at the resolved operating point.
    pub fn network(&self) -> Result<NetworkParams> {
        NetworkParams::from_dbm(self.lambda_b, self.p_dbm, self.n_dbm, self.alpha)
            .map_err(|e| anyhow!("{e}"))
    }

    pub fn tin(&self) -> Result<TinParams> {
        TinParams::new(self.m_factor, self.mu).map_err(|e| anyhow!("{e}"))
    }

    pub fn theta(&self) -> f64 {
        10f64.powf(self.theta_db / 10.0)
    }

    pub fn window_for(&self, net: &NetworkParams) -> f64 {
        self.window_side
            .unwrap_or_else(|| SimulationConfig::recommended_window(net, 500.0).max(1e-9))
    }

    /// Simulation config at the resolved point; `trials` falls back to the
    /// given per-subcommand default when not set explicitly.
    pub fn sim_config(
        &self,
        net: &NetworkParams,
        policy: SchedulingPolicy,
        default_trials: u64,
    ) -> Result<SimulationConfig> {
        let cfg = SimulationConfig::new(
            net,
            self.window_for(net),
            self.trials.unwrap_or(default_trials),
            self.seed,
            policy,
        )
        .map_err(|e| anyhow!("{e}"))?
        .with_guard_fraction(self.guard_fraction)
        .with_typical_cell(self.typical_cell)
        .with_lambda_u(self.lambda_u);
        cfg.validate(net).map_err(|e| anyhow!("{e}"))?;
        Ok(cfg)
    }

    /// Manifest entries: key, rendered value, origin.
    pub fn manifest(&self) -> Vec<(String, String, &'static str)> {
        let origin = |k: &str| {
            self.origins
                .get(KNOWN_KEYS.iter().find(|&&x| x == k).copied().unwrap_or(""))
                .copied()
                .unwrap_or(Origin::Default)
                .as_str()
        };
        let mut rows = vec![
            ("schema".to_string(), SCHEMA_VERSION.to_string(), "default"),
            ("lambda_b".to_string(), fmt(self.lambda_b), origin("lambda_b")),
            ("p_dbm".to_string(), fmt(self.p_dbm), origin("p_dbm")),
            ("n_dbm".to_string(), fmt(self.n_dbm), origin("n_dbm")),
            ("alpha".to_string(), fmt(self.alpha), origin("alpha")),
            ("m_factor".to_string(), fmt(self.m_factor), origin("m_factor")),
            ("mu".to_string(), fmt(self.mu), origin("mu")),
            ("theta_db".to_string(), fmt(self.theta_db), origin("theta_db")),
            (
                "window_side".to_string(),
                self.window_side.map_or("auto".to_string(), fmt),
                origin("window_side"),
            ),
            ("guard_fraction".to_string(), fmt(self.guard_fraction), origin("guard_fraction")),
            (
                "trials".to_string(),
                self.trials.map_or("per-subcommand default".to_string(), |t| t.to_string()),
                origin("trials"),
            ),
            ("seed".to_string(), self.seed.to_string(), origin("seed")),
            (
                "typical_cell".to_string(),
                match self.typical_cell {
                    TypicalCellMode::Random => "random".to_string(),
                    TypicalCellMode::Crofton => "crofton".to_string(),
                },
                origin("typical_cell"),
            ),
            (
                "lambda_u_mode".to_string(),
                match self.lambda_u {
                    LambdaUMode::Infinite => "infinite".to_string(),
                    LambdaUMode::Finite(v) => fmt(v),
                },
                origin("lambda_u_mode"),
            ),
        ];
        rows.sort();
        rows
    }
}

pub fn fmt(v: f64) -> String {
    format!("{v}")
}
