//! Per-command settings: flags override the `--config` file, which overrides defaults.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use holorecon::Precision;

pub const PRECISION_ENV: &str = "HOLORECON_PRECISION_BITS";

/// Invalid or inconsistent settings; the process exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Theta,
    Kappa,
    SquareNet,
    Dense,
    DenseSigmaC,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Node products of the square-net sequence against `exp(-16 p)`.
    Products,
    /// Node products of the annulus-ordered dense sequence.
    AnnulusProducts,
    /// Annulus occupation of the annulus-ordered dense sequence.
    NetStatistics,
    /// The `t ln t` integrals and their Riemann sums.
    Integrals,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriterionArgs {
    /// Generator for the sequence; ignored when `--input` is given.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    /// Sequence file written by `gen` or `permute`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    /// Also run the criterion on the images under `1/ζ` and `h_u` for each pole.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub homography: bool,
    /// Poles `u` as complex literals, e.g. `5i,2-1i`.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poles: Option<Vec<String>>,
    /// Smallest admitted distance between a pole and the sequence.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReconstructArgs {
    /// Catalog function, e.g. `exp-linear:1,1` or `poly:1@0,0;2i@3,1`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    /// Radius of the polydisc the error is measured on.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Taylor truncation degree `M`; defaults to `max(2N, 40)` per `N`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// CSV error curve.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Identity-residual JSON; defaults to the curve path with extension `identity.json`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity_report: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PermuteArgs {
    /// Spread the θ terms of interleave(θ, κ) out among the κ terms.
    #[arg(long, group = "mode")]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub sigma1: bool,
    /// Reorder interleave(θ, κ) around divergence witnesses found on θ.
    #[arg(long, group = "mode")]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub sigma2: bool,
    /// Drop the odd positions of interleave(θ, κ), or of `--input`.
    #[arg(long, group = "mode")]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub delete_odd: bool,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Length of the output prefix.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_kappa: Option<f64>,
    /// Smallest growth base a witness must reach.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_budget: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_budget: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckBoundsArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundKind>,
    /// Sequence file; defaults to the generator the bound is stated for.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_max: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    /// Largest relative deviation from `N / 2^r` accepted by `net-statistics`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// Overlays the flags on the settings read from `file`.
///
/// A `command` key in the file must name `command`.
pub fn merge<T: Serialize + DeserializeOwned>(command: &str, flags: &T, file: Option<&Path>) -> anyhow::Result<T> {
    let mut base = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
            match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(map)) => map,
                Ok(_) => return Err(config_error(format!("config {} must hold a JSON object", path.display()))),
                Err(e) => return Err(config_error(format!("config {}: {e}", path.display()))),
            }
        }
        None => Map::new(),
    };
    if let Some(cmd) = base.remove("command") {
        if cmd.as_str() != Some(command) {
            return Err(config_error(format!("config is for command {cmd}, not {command:?}")));
        }
    }
    if let Value::Object(over) = serde_json::to_value(flags).context("serializing flags")? {
        base.extend(over);
    }
    serde_json::from_value(Value::Object(base)).map_err(|e| config_error(format!("config: {e}")))
}

/// Flag or config value, then `HOLORECON_PRECISION_BITS`, then 256.
pub fn resolve_precision(bits: Option<u32>) -> anyhow::Result<Precision> {
    let bits = match bits {
        Some(b) => b,
        None => match std::env::var(PRECISION_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| config_error(format!("{PRECISION_ENV}={v:?} is not a bit count")))?,
            Err(_) => Precision::DEFAULT.bits(),
        },
    };
    Precision::new(bits).map_err(|e| config_error(e.to_string()))
}

pub fn require_output(output: &Option<PathBuf>) -> anyhow::Result<&Path> {
    output.as_deref().ok_or_else(|| config_error("--output is required"))
}

/// The settings as written into output files, tagged with the command.
pub fn resolved_json<T: Serialize>(command: &str, args: &T) -> Value {
    let mut v = serde_json::to_value(args).unwrap_or(Value::Null);
    if let Value::Object(map) = &mut v {
        map.insert("command".into(), Value::String(command.into()));
    }
    v
}
