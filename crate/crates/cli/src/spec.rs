//! Experiment specification: config file, flag overrides and validation.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use icdof::experiments::{Latent, ScalingSelector, Selector};
use icdof::{AnalyticLaw, NetworkConfig, PathLoss, RateMode};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Rate,
    Tail,
    Scaling,
    Wishart,
    Definetti,
    Bounds,
}

/// Tail laws reachable from `tail`; the Wishart law has its own subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum LawName {
    #[default]
    ZSiso,
    XSiso,
    BetaAlpha,
    ZMimo,
    XMimo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ModeArg {
    Siso,
    Mimo,
    MimoLb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SelectorArg {
    First,
    Random,
    Partitioned,
    Exhaustive,
    XOrder,
    SumRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum LatentArg {
    Degenerate,
    SharedMean,
}

/// Everything one run needs. Serializes to the config-file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSpec {
    pub command: Command,
    /// `n`: user pairs (for `definetti`, the sequence length).
    pub users: usize,
    /// `K`: active-set size.
    pub active: usize,
    /// `N`: antennas per node.
    pub antennas: usize,
    pub pathloss: PathLoss,
    /// Wishart matrix rows.
    pub p: usize,
    /// Wishart matrix columns.
    pub q: usize,
    pub law: LawName,
    pub snr_db: Vec<f64>,
    pub trials: u64,
    /// Tail thresholds, Wishart `r` values or de Finetti `x` points.
    pub thresholds: Vec<f64>,
    pub xi: f64,
    /// `n = round(users_scale · snr^ξ)` in scaling runs.
    pub users_scale: f64,
    pub mode: RateMode,
    pub selector: Selector,
    pub scaling_selector: ScalingSelector,
    pub latent: Latent,
    /// Absolute tolerance for the pass/fail verdict; per-command default when unset.
    pub tolerance: Option<f64>,
    pub seed: u64,
    /// CSV destination; stdout when unset.
    pub out: Option<PathBuf>,
    /// JSON summary destination; `<out>.json` when unset and `out` is set.
    pub summary: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            command: Command::Tail,
            users: 2,
            active: 2,
            antennas: 1,
            pathloss: PathLoss::Unit,
            p: 2,
            q: 2,
            law: LawName::ZSiso,
            snr_db: vec![20.0, 30.0, 40.0],
            trials: 10_000,
            thresholds: Vec::new(),
            xi: 1.0,
            users_scale: 1.0,
            mode: RateMode::Siso,
            selector: Selector::First,
            scaling_selector: ScalingSelector::XOrder,
            latent: Latent::Degenerate,
            tolerance: None,
            seed: 1,
            out: None,
            summary: None,
        }
    }
}

/// Flags shared by every subcommand; each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML experiment spec.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "n")]
    pub users: Option<usize>,
    #[arg(long = "k")]
    pub active: Option<usize>,
    #[arg(long = "antennas", visible_alias = "N")]
    pub antennas: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub law: Option<LawName>,
    /// Comma-separated SNRs in dB.
    #[arg(long = "snr-db", value_delimiter = ',', allow_hyphen_values = true)]
    pub snr_db: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Comma-separated thresholds.
    #[arg(long, visible_aliases = ["z", "x", "w", "r"], value_delimiter = ',', allow_hyphen_values = true)]
    pub thresholds: Option<Vec<f64>>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long = "users-scale")]
    pub users_scale: Option<f64>,
    #[arg(long)]
    pub mode: Option<ModeArg>,
    /// Active-set selector (`rate`) or group statistic (`scaling`).
    #[arg(long)]
    pub selector: Option<SelectorArg>,
    #[arg(long)]
    pub latent: Option<LatentArg>,
    /// Standard deviation of the shared mean.
    #[arg(long = "latent-sd")]
    pub latent_sd: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Worker threads; defaults to $ICDOF_THREADS, then the number of cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Reads and validates a TOML spec.
pub fn load_spec(path: &Path) -> Result<ExperimentSpec, CliError> {
    let spec = read_spec_file(path)?;
    spec.validate()?;
    Ok(spec)
}

/// Parses without validating; the TOML error carries line and field.
fn read_spec_file(path: &Path) -> Result<ExperimentSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Serializes a spec in the config-file format.
pub fn to_config_string(spec: &ExperimentSpec) -> Result<String, CliError> {
    toml::to_string(spec).map_err(|e| CliError::Config(format!("cannot serialize spec: {e}")))
}

impl ExperimentSpec {
    /// Config-file spec (or defaults) for `command`, overridden by `flags`.
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, CliError> {
        let mut spec = match &flags.config {
            Some(path) => read_spec_file(path)?,
            None => ExperimentSpec::default(),
        };
        spec.command = command;
        spec.apply(flags);
        spec.validate()?;
        Ok(spec)
    }

    fn apply(&mut self, f: &Flags) {
        macro_rules! set {
            ($($field:ident),*) => {$(if let Some(v) = f.$field.clone() { self.$field = v; })*};
        }
        set!(
            users,
            active,
            antennas,
            p,
            q,
            law,
            snr_db,
            trials,
            thresholds,
            xi,
            users_scale,
            seed
        );
        if f.tolerance.is_some() {
            self.tolerance = f.tolerance;
        }
        if f.out.is_some() {
            self.out = f.out.clone();
        }
        if f.summary.is_some() {
            self.summary = f.summary.clone();
        }
        if let Some(m) = f.mode {
            self.mode = match m {
                ModeArg::Siso => RateMode::Siso,
                ModeArg::Mimo => RateMode::Mimo,
                ModeArg::MimoLb => RateMode::MimoLb,
            };
        }
        if let Some(s) = f.selector {
            match s {
                SelectorArg::First => self.selector = Selector::First,
                SelectorArg::Random => self.selector = Selector::Random,
                SelectorArg::Partitioned => self.selector = Selector::Partitioned,
                SelectorArg::Exhaustive => self.selector = Selector::Exhaustive,
                SelectorArg::XOrder => self.scaling_selector = ScalingSelector::XOrder,
                SelectorArg::SumRate => self.scaling_selector = ScalingSelector::SumRate,
            }
        }
        match (f.latent, f.latent_sd) {
            (Some(LatentArg::Degenerate), _) => self.latent = Latent::Degenerate,
            (Some(LatentArg::SharedMean), sd) => {
                self.latent = Latent::SharedGaussianMean {
                    sd: sd.unwrap_or(1.0),
                }
            }
            (None, Some(sd)) => self.latent = Latent::SharedGaussianMean { sd },
            (None, None) => {}
        }
    }

    pub fn network(&self) -> NetworkConfig {
        NetworkConfig::new(self.users, self.active, self.antennas, self.seed)
            .with_pathloss(self.pathloss)
    }

    pub fn analytic_law(&self) -> AnalyticLaw {
        let (k, n) = (self.active, self.antennas);
        match self.command {
            Command::Wishart => AnalyticLaw::Wishart {
                p: self.p,
                q: self.q,
            },
            _ => match self.law {
                LawName::ZSiso => AnalyticLaw::ZSiso { k },
                LawName::XSiso => AnalyticLaw::XSiso { k },
                LawName::BetaAlpha => AnalyticLaw::BetaAlpha,
                LawName::ZMimo => AnalyticLaw::ZMimo { k, n },
                LawName::XMimo => AnalyticLaw::XMimo { k, n },
            },
        }
    }

    pub fn snr_linear(&self) -> Vec<f64> {
        self.snr_db
            .iter()
            .map(|&d| icdof::experiments::db_to_linear(d))
            .collect()
    }

    pub fn default_tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(match self.command {
            Command::Wishart => 0.25,
            Command::Scaling => 0.2,
            _ => 0.15,
        })
    }

    /// Field-level checks that do not depend on running anything.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, why: String| Err(CliError::Config(format!("{field}: {why}")));
        if self.active == 0 {
            return bad("k", "must be positive".into());
        }
        if self.antennas == 0 {
            return bad("antennas", "must be positive".into());
        }
        let needs_grid = !matches!(self.command, Command::Bounds | Command::Definetti);
        if needs_grid {
            if self.snr_db.len() < 2 {
                return bad("snr_db", "need ≥ 2 SNR points".into());
            }
            if self.snr_db.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
                return bad("snr_db", "every SNR must be finite and above 0 dB".into());
            }
        }
        if let Some(t) = self.tolerance {
            if !(t >= 0.0 && t.is_finite()) {
                return bad(
                    "tolerance",
                    format!("must be finite and non-negative, got {t}"),
                );
            }
        }
        match self.command {
            Command::Rate => {
                if self.active > self.users {
                    return bad(
                        "k",
                        format!("active-set size {} exceeds n = {}", self.active, self.users),
                    );
                }
                self.network().validate().map_err(CliError::from)?;
            }
            Command::Tail | Command::Wishart => {
                if self.thresholds.is_empty() {
                    return bad("thresholds", "need at least one threshold".into());
                }
                if self.command == Command::Tail
                    && matches!(self.law, LawName::ZMimo | LawName::XMimo)
                    && self.active < 2
                {
                    return bad("k", "multi-antenna laws need K ≥ 2".into());
                }
                self.analytic_law().validate().map_err(CliError::from)?;
            }
            Command::Definetti => {
                if self.users == 0 {
                    return bad("n", "must be positive".into());
                }
                if self.thresholds.is_empty() {
                    return bad("thresholds", "need at least one x point".into());
                }
            }
            Command::Scaling | Command::Bounds => {
                if !(self.xi >= 0.0 && self.xi.is_finite()) {
                    return bad(
                        "xi",
                        format!("must be finite and non-negative, got {}", self.xi),
                    );
                }
            }
        }
        Ok(())
    }
}
