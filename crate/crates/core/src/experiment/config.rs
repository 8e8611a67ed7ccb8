use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::apo::ApoParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Bench,
    Engineering,
    Segment,
}

impl CommandKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandKind::Bench => "bench",
            CommandKind::Engineering => "engineering",
            CommandKind::Segment => "segment",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Apo,
    Random,
}

impl Algorithm {
    pub const NAMES: [&'static str; 2] = ["apo", "random"];

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "apo" => Ok(Algorithm::Apo),
            "random" => Ok(Algorithm::Random),
            _ => Err(Error::Config(format!(
                "unknown algorithm {name:?}; valid names: {}",
                Self::NAMES.join(", ")
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Apo => "apo",
            Algorithm::Random => "random",
        }
    }
}

/// Every key a config file or the flags may set. Unset keys fall back to the
/// per-command defaults in [`ExperimentConfig::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigLayer {
    pub algo: Option<Vec<String>>,
    #[serde(alias = "fn", alias = "functions", alias = "problem", alias = "problems")]
    pub names: Option<Vec<String>>,
    pub dim: Option<usize>,
    pub ps: Option<usize>,
    pub np: Option<usize>,
    pub pf_max: Option<f64>,
    pub max_fes: Option<usize>,
    pub iters: Option<usize>,
    pub repeats: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub image: Option<PathBuf>,
    pub thresholds: Option<Vec<usize>>,
    pub targets: Option<PathBuf>,
    pub penalty_lambda: Option<f64>,
    pub transform: Option<PathBuf>,
    pub bias: Option<f64>,
}

impl ConfigLayer {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Values set in `over` replace those in `self`. Setting either budget key
    /// clears the other so a flag never collides with the file.
    pub fn overlay(mut self, over: ConfigLayer) -> Self {
        if over.max_fes.is_some() || over.iters.is_some() {
            self.max_fes = None;
            self.iters = None;
        }
        macro_rules! take {
            ($($field:ident),*) => {
                $(if over.$field.is_some() { self.$field = over.$field; })*
            };
        }
        take!(
            algo, names, dim, ps, np, pf_max, max_fes, iters, repeats, seed, out, image,
            thresholds, targets, penalty_lambda, transform, bias
        );
        self
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub algorithms: Vec<Algorithm>,
    pub names: Vec<String>,
    pub dim: usize,
    pub ps: usize,
    pub np: usize,
    pub pf_max: f64,
    pub max_fes: usize,
    pub repeats: usize,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
    pub image: Option<PathBuf>,
    pub thresholds: Vec<usize>,
    pub targets: Option<BTreeMap<String, f64>>,
    pub penalty_lambda: f64,
    pub transform: Option<PathBuf>,
    pub bias: f64,
}

impl ExperimentConfig {
    pub fn resolve(command: CommandKind, layer: ConfigLayer) -> Result<Self> {
        let (default_iters, default_repeats) = match command {
            CommandKind::Bench => (500, 30),
            CommandKind::Engineering => (500, 31),
            CommandKind::Segment => (100, 31),
        };
        let algorithms = layer
            .algo
            .unwrap_or_else(|| vec!["apo".into()])
            .iter()
            .map(|a| Algorithm::parse(a))
            .collect::<Result<Vec<_>>>()?;
        if algorithms.is_empty() {
            return Err(Error::Config("no algorithm selected".into()));
        }
        let names = match command {
            CommandKind::Bench => layer.names.unwrap_or_else(|| vec!["sphere".into()]),
            CommandKind::Engineering => layer.names.unwrap_or_else(|| {
                crate::constraints::PROBLEM_NAMES.iter().map(|s| s.to_string()).collect()
            }),
            CommandKind::Segment => layer.names.unwrap_or_default(),
        };
        let ps = layer.ps.unwrap_or(100);
        let max_fes = match (layer.max_fes, layer.iters) {
            (Some(_), Some(_)) => {
                return Err(Error::Config("set either max_fes or iters, not both".into()))
            }
            (Some(m), None) => m,
            (None, it) => ps * (it.unwrap_or(default_iters) + 1),
        };
        let repeats = layer.repeats.unwrap_or(default_repeats);
        if repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        let targets = match &layer.targets {
            Some(path) => Some(load_targets(path)?),
            None => None,
        };
        let cfg = Self {
            command,
            algorithms,
            names,
            dim: layer.dim.unwrap_or(20),
            ps,
            np: layer.np.unwrap_or(1),
            pf_max: layer.pf_max.unwrap_or(0.1),
            max_fes,
            repeats,
            seed: layer.seed.unwrap_or(0),
            out: layer.out.unwrap_or_else(|| PathBuf::from("out")),
            image: layer.image,
            thresholds: layer.thresholds.unwrap_or_else(|| vec![2]),
            targets,
            penalty_lambda: layer.penalty_lambda.unwrap_or(1e10),
            transform: layer.transform,
            bias: layer.bias.unwrap_or(0.0),
        };
        cfg.params()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<ApoParams> {
        ApoParams::new(self.ps, self.np, self.pf_max, self.max_fes)
    }

    /// Seed of repeat `k`.
    pub fn run_seed(&self, k: usize) -> u64 {
        self.seed.wrapping_add(k as u64)
    }
}

/// Reads a JSON object mapping problem names to target objective values.
pub fn load_targets(path: &Path) -> Result<BTreeMap<String, f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read targets {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("bad targets file: {e}")))
}
