//! Experiment driver: configuration, the comparison and multi-expert
//! sweeps, the verification suite, and CSV/SVG output.

pub mod config;
pub mod output;
pub mod scenarios;
pub mod verify;

use std::path::{Path, PathBuf};

use thiserror::Error;

use config::{ConfigError, ExperimentConfig, Scenario};
use output::{line_chart, table_series, write_csv, Table};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Model(mwadv_core::Error),
    #[error("guard violation: {0}")]
    Guard(mwadv_core::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("verification failed")]
    Verification,
}

impl From<mwadv_core::Error> for RunError {
    fn from(e: mwadv_core::Error) -> Self {
        if e.is_guard() {
            RunError::Guard(e)
        } else {
            RunError::Model(e)
        }
    }
}

impl RunError {
    /// 1 verification failure, 2 invalid configuration, 3 guard violation.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Verification => 1,
            RunError::Config(_) | RunError::Model(_) | RunError::Write { .. } => 2,
            RunError::Guard(_) => 3,
        }
    }
}

/// What a run produced, for the caller to report.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub csv: PathBuf,
    pub svg: Option<PathBuf>,
    /// Cells left blank, with the reason.
    pub notices: Vec<scenarios::Notice>,
    pub verify: Option<verify::VerifyReport>,
}

fn svg_path(csv: &Path) -> PathBuf {
    csv.with_extension("svg")
}

fn chart(config: &ExperimentConfig, table: &Table) -> Option<String> {
    let (title, ys): (&str, &[&str]) = match config.scenario {
        Scenario::Compare => (
            "Expected loss against horizon",
            &["v_false", "v_true", "v_ratio", "v_offline_opt", "v_online", "v_no_adversary", "v_no_info"],
        ),
        Scenario::EvalOffline => ("Offline policy value against horizon", &["value", "v_false"]),
        Scenario::SolveOnline => ("Online optimum against horizon", &["v_online", "v_false", "mc_mean"]),
        Scenario::MultiExpert => (
            "Two-expert surrogate against five experts",
            &["v_two_expert", "v5_clairvoyant", "v5_exact_dp"],
        ),
        Scenario::Verify => return None,
    };
    let series = if config.scenario == Scenario::MultiExpert {
        // one group of curves per accuracy set
        let mut all = Vec::new();
        let labels = table.rows.iter().map(|r| r[1].render()).collect::<Vec<_>>();
        let mut seen: Vec<String> = Vec::new();
        for l in &labels {
            if !seen.contains(l) {
                seen.push(l.clone());
            }
        }
        for label in seen {
            let mut sub = Table::new(table.columns.clone());
            for (row, l) in table.rows.iter().zip(&labels) {
                if *l == label {
                    sub.push(row.clone());
                }
            }
            for mut s in table_series(&sub, "N", ys) {
                s.label = format!("{} [{label}]", s.label);
                all.push(s);
            }
        }
        all
    } else {
        table_series(table, "N", ys)
    };
    Some(line_chart(title, "N", "expected total loss", &series))
}

/// Runs one scenario and writes its CSV (and SVG when requested).
pub fn run(config: &ExperimentConfig) -> Result<Outcome, RunError> {
    let mut notices = Vec::new();
    let mut report = None;
    let table = match config.scenario {
        Scenario::EvalOffline => scenarios::run_eval_offline(config)?,
        Scenario::SolveOnline => scenarios::run_solve_online(config)?,
        Scenario::Compare => {
            let (rows, n) = scenarios::run_compare(config)?;
            notices = n;
            scenarios::comparison_table(&rows)
        }
        Scenario::MultiExpert => {
            let (t, n) = scenarios::run_multi_expert(config)?;
            notices = n;
            t
        }
        Scenario::Verify => {
            let r = verify::run_verify(config.seed);
            let t = r.table();
            report = Some(r);
            t
        }
    };
    let write_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Write { path, source }
    };
    write_csv(&config.out, config, &table).map_err(write_err(&config.out))?;
    let svg = match (config.svg, chart(config, &table)) {
        (true, Some(doc)) => {
            let path = svg_path(&config.out);
            std::fs::write(&path, doc).map_err(write_err(&path))?;
            Some(path)
        }
        _ => None,
    };
    Ok(Outcome {
        table,
        csv: config.out.clone(),
        svg,
        notices,
        verify: report,
    })
}
