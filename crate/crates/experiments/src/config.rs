//! Experiment configuration: an INI-style `key = value` file whose keys can
//! all be overridden from the command line.
//!
//! List values are comma separated. Horizon lists also accept inclusive
//! ranges `start:end:step`. Accuracy sets for the multi-expert scenario are
//! separated by `;`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

use mwadv_core::policies::DEFAULT_MAX_DENOMINATOR;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {reason}")]
    Value { key: String, reason: String },
}

fn bad(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        key: key.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Scenario {
    EvalOffline,
    SolveOnline,
    Compare,
    MultiExpert,
    Verify,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::EvalOffline => "eval-offline",
            Scenario::SolveOnline => "solve-online",
            Scenario::Compare => "compare",
            Scenario::MultiExpert => "multi-expert",
            Scenario::Verify => "verify",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const KEYS: &[&str] = &[
    "N",
    "mu",
    "rho0",
    "epsilon",
    "trials",
    "seed",
    "out",
    "svg",
    "offline_max_n",
    "accuracies",
    "adversary_weight",
    "policy",
    "max_denominator",
];

/// Raw `key = value` settings, later layers overriding earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') || line.starts_with('[') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    text: line.to_string(),
                });
            };
            raw.set(key.trim(), value.trim())?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub horizons: Vec<usize>,
    pub mus: Vec<f64>,
    pub rho0s: Vec<f64>,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub svg: bool,
    /// Largest horizon for which the exhaustive offline optimum is computed.
    pub offline_max_n: usize,
    pub accuracy_sets: Vec<Vec<f64>>,
    pub adversary_weight: f64,
    pub policy: String,
    pub max_denominator: u64,
}

fn parse_one<T: FromStr>(key: &str, s: &str) -> Result<T, ConfigError> {
    s.trim().parse().map_err(|_| bad(key, format!("cannot parse `{}`", s.trim())))
}

fn parse_list<T: FromStr>(key: &str, s: &str) -> Result<Vec<T>, ConfigError> {
    let out: Vec<T> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_one(key, p))
        .collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err(bad(key, "empty list"));
    }
    Ok(out)
}

/// `8,12,16` or `10:200:10` or a mix of both.
pub fn parse_horizons(s: &str) -> Result<Vec<usize>, ConfigError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bounds: Vec<&str> = part.split(':').collect();
        match bounds.as_slice() {
            [n] => out.push(parse_one("N", n)?),
            [a, b] | [a, b, _] => {
                let (a, b): (usize, usize) = (parse_one("N", a)?, parse_one("N", b)?);
                let step: usize = match bounds.get(2) {
                    Some(s) => parse_one("N", s)?,
                    None => 1,
                };
                if step == 0 || b < a {
                    return Err(bad("N", format!("empty range `{part}`")));
                }
                out.extend((a..=b).step_by(step));
            }
            _ => return Err(bad("N", format!("cannot parse `{part}`"))),
        }
    }
    if out.is_empty() {
        return Err(bad("N", "no horizons"));
    }
    Ok(out)
}

fn parse_bool(key: &str, s: &str) -> Result<bool, ConfigError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        other => Err(bad(key, format!("expected a boolean, got `{other}`"))),
    }
}

fn check_open_unit(key: &str, xs: &[f64]) -> Result<(), ConfigError> {
    match xs.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        Some(x) => Err(bad(key, format!("{x} is outside (0, 1)"))),
        None => Ok(()),
    }
}

impl ExperimentConfig {
    /// Applies scenario defaults under `raw`.
    pub fn resolve(scenario: Scenario, raw: &RawConfig) -> Result<Self, ConfigError> {
        let get = |k: &str| raw.get(k);
        let default_horizons = match scenario {
            Scenario::MultiExpert => "5:40:5",
            Scenario::Verify => "8",
            _ => "10:200:10",
        };
        let default_trials = match scenario {
            Scenario::SolveOnline => 10_000,
            _ => 100,
        };
        let horizons = parse_horizons(get("N").unwrap_or(default_horizons))?;
        let mus: Vec<f64> = parse_list("mu", get("mu").unwrap_or("0.5"))?;
        let rho0s: Vec<f64> = parse_list("rho0", get("rho0").unwrap_or("0.5"))?;
        check_open_unit("mu", &mus)?;
        check_open_unit("rho0", &rho0s)?;
        let epsilon = match get("epsilon") {
            Some(s) => parse_one("epsilon", s)?,
            None => (-1.0f64).exp(),
        };
        check_open_unit("epsilon", &[epsilon])?;
        let trials = match get("trials") {
            Some(s) => parse_one("trials", s)?,
            None => default_trials,
        };
        let seed = match get("seed") {
            Some(s) => parse_one("seed", s)?,
            None => 20_240_601,
        };
        let out = match get("out") {
            Some(s) => PathBuf::from(s),
            None => PathBuf::from(format!("results/{}.csv", scenario.name())),
        };
        let svg = match get("svg") {
            Some(s) => parse_bool("svg", s)?,
            None => false,
        };
        let offline_max_n = match get("offline_max_n") {
            Some(s) => parse_one("offline_max_n", s)?,
            None => 20,
        };
        let accuracy_sets = get("accuracies")
            .unwrap_or("0.5,0.5,0.5,0.5; 0.3,0.4,0.6,0.7")
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(|set| parse_list::<f64>("accuracies", set))
            .collect::<Result<Vec<_>, _>>()?;
        if accuracy_sets.is_empty() {
            return Err(bad("accuracies", "no accuracy sets"));
        }
        for set in &accuracy_sets {
            check_open_unit("accuracies", set)?;
        }
        let adversary_weight = match get("adversary_weight") {
            Some(s) => parse_one("adversary_weight", s)?,
            None => 0.2,
        };
        check_open_unit("adversary_weight", &[adversary_weight])?;
        let policy = get("policy").unwrap_or("ratio").trim().to_string();
        let max_denominator = match get("max_denominator") {
            Some(s) => parse_one("max_denominator", s)?,
            None => DEFAULT_MAX_DENOMINATOR,
        };
        if max_denominator == 0 {
            return Err(bad("max_denominator", "must be positive"));
        }
        Ok(Self {
            scenario,
            horizons,
            mus,
            rho0s,
            epsilon,
            trials,
            seed,
            out,
            svg,
            offline_max_n,
            accuracy_sets,
            adversary_weight,
            policy,
            max_denominator,
        })
    }

    /// Every resolved setting, one `key=value` per line in a fixed order.
    /// The output path is left out so that relocating results does not change
    /// the hash.
    pub fn canonical(&self) -> String {
        let join = |xs: &[f64]| xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let sets: Vec<String> = self.accuracy_sets.iter().map(|s| join(s)).collect();
        let horizons: Vec<String> = self.horizons.iter().map(usize::to_string).collect();
        [
            format!("scenario={}", self.scenario),
            format!("N={}", horizons.join(",")),
            format!("mu={}", join(&self.mus)),
            format!("rho0={}", join(&self.rho0s)),
            format!("epsilon={:?}", self.epsilon),
            format!("trials={}", self.trials),
            format!("seed={}", self.seed),
            format!("svg={}", self.svg),
            format!("offline_max_n={}", self.offline_max_n),
            format!("accuracies={}", sets.join(";")),
            format!("adversary_weight={:?}", self.adversary_weight),
            format!("policy={}", self.policy),
            format!("max_denominator={}", self.max_denominator),
        ]
        .join("\n")
    }

    /// First 16 hex digits of the SHA-256 of [`canonical`](Self::canonical).
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Every `(mu, rho0)` combination, mu-major.
    pub fn grid(&self) -> Vec<(f64, f64)> {
        self.mus
            .iter()
            .flat_map(|&mu| self.rho0s.iter().map(move |&rho0| (mu, rho0)))
            .collect()
    }
}
