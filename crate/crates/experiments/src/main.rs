use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mwadv::config::{ConfigError, ExperimentConfig, RawConfig, Scenario};
use mwadv::{run, RunError};

/// Expected-loss experiments for a malicious expert in a multiplicative
/// weights forecaster.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    scenario: Scenario,

    /// INI-style `key = value` file; flags below override its entries.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Horizons: a list such as `8,12,16` or a range `10:200:10`.
    #[arg(long = "N")]
    n: Option<String>,

    /// Honest-expert accuracies (comma separated).
    #[arg(long)]
    mu: Option<String>,

    /// Initial adversary relative weights (comma separated).
    #[arg(long)]
    rho0: Option<String>,

    #[arg(long)]
    epsilon: Option<String>,

    #[arg(long)]
    trials: Option<String>,

    #[arg(long)]
    seed: Option<String>,

    #[arg(long)]
    out: Option<String>,

    /// Also write an SVG chart next to the CSV.
    #[arg(long)]
    svg: bool,

    #[arg(long = "offline_max_n", alias = "offline-max-n")]
    offline_max_n: Option<String>,

    /// Accuracy sets for the multi-expert scenario, sets separated by `;`.
    #[arg(long)]
    accuracies: Option<String>,

    #[arg(long = "adversary_weight", alias = "adversary-weight")]
    adversary_weight: Option<String>,

    /// `false`, `true`, `ratio`, `random`, or a literal such as `FFTFT`.
    #[arg(long)]
    policy: Option<String>,

    #[arg(long = "max_denominator", alias = "max-denominator")]
    max_denominator: Option<String>,
}

impl Args {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut out: Vec<(&'static str, String)> = [
            ("N", &self.n),
            ("mu", &self.mu),
            ("rho0", &self.rho0),
            ("epsilon", &self.epsilon),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("out", &self.out),
            ("offline_max_n", &self.offline_max_n),
            ("accuracies", &self.accuracies),
            ("adversary_weight", &self.adversary_weight),
            ("policy", &self.policy),
            ("max_denominator", &self.max_denominator),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
        .collect();
        if self.svg {
            out.push(("svg", "true".into()));
        }
        out
    }

    fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::load(path)?,
            None => RawConfig::default(),
        };
        for (k, v) in self.overrides() {
            raw.set(k, &v)?;
        }
        ExperimentConfig::resolve(self.scenario, &raw)
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = match args.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(outcome) => {
            for n in &outcome.notices {
                eprintln!("warning: row {} column {} left blank: {}", n.row, n.column, n.message);
            }
            println!("wrote {}", outcome.csv.display());
            if let Some(svg) = &outcome.svg {
                println!("wrote {}", svg.display());
            }
            if let Some(report) = &outcome.verify {
                print!("{}", report.summary());
                if report.over_budget() {
                    eprintln!("warning: verification took {:.0?}, over the 5 minute budget", report.elapsed);
                }
                if !report.all_passed() {
                    eprintln!("error: {}", RunError::Verification);
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
