// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use rankstair_core::coset::{Fraction, Rational};
use rankstair_core::staircase::StaircasePlan;
use serde::Serialize;

use crate::config::ExperimentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Failure,
    /// The decoder returned a secret different from the planted one.
    Wrong,
}

/// One line of the channel trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub d: usize,
    pub seed: u64,
    pub stream: u64,
    pub rank_a: usize,
    pub rank_e: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wt_c: Option<usize>,
    pub in_contract: bool,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Rows downloaded per contacted column, summed.
    pub rows_downloaded: usize,
    pub bytes_downloaded: u64,
}

/// Aggregate over the trials at one d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimulationRow {
    pub d: usize,
    pub t: usize,
    pub rho: usize,
    pub mu: usize,
    pub trials: u64,
    pub in_contract: u64,
    pub successes: u64,
    pub failures: u64,
    pub wrong: u64,
    /// Failures or wrong answers on trials outside the decoding contract.
    pub out_of_contract: u64,
    pub success_rate: Fraction,
    pub measured_db: Option<Fraction>,
    pub measured_co: Option<Fraction>,
    pub formula_db: Fraction,
    pub formula_co: Fraction,
    pub co_matches_formula: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub d: usize,
    pub ell: usize,
    pub ell_bound: usize,
    pub ell_tight: bool,
    pub db: Fraction,
    pub co: Fraction,
    pub co_bound: Fraction,
    pub co_tight: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecurityRow {
    #[serde(rename = "rankB")]
    pub rank_b: usize,
    pub observations: u64,
    pub secure: u64,
    pub leaking: u64,
    /// Largest exact I(S;W) in log_q units, when it was enumerated.
    pub max_mi_logq: Option<Fraction>,
    pub below_threshold: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Assertion { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timing {
    pub wall_clock_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<StaircasePlan>,
    pub rate: Fraction,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub simulation: Vec<SimulationRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<BoundRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub security: Vec<SecurityRow>,
    pub assertions: Vec<Assertion>,
    pub timing: Timing,
    #[serde(skip)]
    pub trace: Vec<TrialRecord>,
}

impl Report {
    pub fn new(command: &str, config: ExperimentConfig, plan: Option<StaircasePlan>, rate: Rational) -> Self {
        Report {
            command: command.to_string(),
            config,
            plan,
            rate: rate.into(),
            simulation: Vec::new(),
            bounds: Vec::new(),
            security: Vec::new(),
            assertions: Vec::new(),
            timing: Timing::default(),
            trace: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn assert(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion::new(name, pass, detail));
    }

    /// JSON without the timing block, for determinism comparisons.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    /// Writes `<command>.json`, the CSV tables that apply, and
    /// `<command>.trace.jsonl` when trials were run.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let stem = &self.command;
        fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(self)? + "\n")?;
        if !self.simulation.is_empty() {
            let mut w = csv::Writer::from_path(dir.join(format!("{stem}.summary.csv")))?;
            w.write_record([
                "d", "t", "rho", "mu", "trials", "in_contract", "successes", "failures", "wrong", "out_of_contract",
                "success_rate", "measured_db", "measured_co", "formula_db", "formula_co", "co_matches_formula",
            ])?;
            for r in &self.simulation {
                w.write_record([
                    r.d.to_string(),
                    r.t.to_string(),
                    r.rho.to_string(),
                    r.mu.to_string(),
                    r.trials.to_string(),
                    r.in_contract.to_string(),
                    r.successes.to_string(),
                    r.failures.to_string(),
                    r.wrong.to_string(),
                    r.out_of_contract.to_string(),
                    frac(&r.success_rate),
                    r.measured_db.as_ref().map(frac).unwrap_or_default(),
                    r.measured_co.as_ref().map(frac).unwrap_or_default(),
                    frac(&r.formula_db),
                    frac(&r.formula_co),
                    r.co_matches_formula.to_string(),
                ])?;
            }
            w.flush()?;
        }
        if !self.bounds.is_empty() {
            let mut w = csv::Writer::from_path(dir.join(format!("{stem}.bounds.csv")))?;
            w.write_record(["d", "ell", "ell_bound", "ell_tight", "db", "co", "co_bound", "co_tight"])?;
            for r in &self.bounds {
                w.write_record([
                    r.d.to_string(),
                    r.ell.to_string(),
                    r.ell_bound.to_string(),
                    r.ell_tight.to_string(),
                    frac(&r.db),
                    frac(&r.co),
                    frac(&r.co_bound),
                    r.co_tight.to_string(),
                ])?;
            }
            w.flush()?;
        }
        if !self.security.is_empty() {
            let mut w = csv::Writer::from_path(dir.join(format!("{stem}.security.csv")))?;
            w.write_record(["rankB", "observations", "secure", "leaking", "max_mi_logq", "below_threshold"])?;
            for r in &self.security {
                w.write_record([
                    r.rank_b.to_string(),
                    r.observations.to_string(),
                    r.secure.to_string(),
                    r.leaking.to_string(),
                    r.max_mi_logq.as_ref().map(frac).unwrap_or_default(),
                    r.below_threshold.to_string(),
                ])?;
            }
            w.flush()?;
        }
        if !self.trace.is_empty() {
            let mut f = fs::File::create(dir.join(format!("{stem}.trace.jsonl")))?;
            for rec in &self.trace {
                writeln!(f, "{}", serde_json::to_string(rec)?)?;
            }
        }
        Ok(())
    }

    /// Human-readable summary for stdout.
    pub fn render(&self) -> String {
        let mut out = format!("{} (rate {})\n", self.command, frac(&self.rate));
        for r in &self.simulation {
            out += &format!(
                "  d={:<3} t={} rho={} mu={}  success {}/{} (in contract {})  out-of-contract {}  DB {}  CO {}  formula CO {}\n",
                r.d,
                r.t,
                r.rho,
                r.mu,
                r.successes,
                r.trials,
                r.in_contract,
                r.out_of_contract,
                r.measured_db.as_ref().map(frac).unwrap_or_else(|| "-".into()),
                r.measured_co.as_ref().map(frac).unwrap_or_else(|| "-".into()),
                frac(&r.formula_co),
            );
        }
        for r in &self.bounds {
            out += &format!(
                "  d={:<3} ell {} ≤ {}{}  CO {} ≥ {}{}\n",
                r.d,
                r.ell,
                r.ell_bound,
                if r.ell_tight { " (tight)" } else { "" },
                frac(&r.co),
                frac(&r.co_bound),
                if r.co_tight { " (tight)" } else { "" },
            );
        }
        for r in &self.security {
            out += &format!(
                "  rank(B)={} observations {} secure {} leaking {} max I(S;W) {}\n",
                r.rank_b,
                r.observations,
                r.secure,
                r.leaking,
                r.max_mi_logq.as_ref().map(frac).unwrap_or_else(|| "-".into()),
            );
        }
        for a in &self.assertions {
            out += &format!("  [{}] {}: {}\n", if a.pass { "ok" } else { "FAILED" }, a.name, a.detail);
        }
        out
    }
}

pub fn frac(f: &Fraction) -> String {
    if f.denominator == 1 {
        f.numerator.to_string()
    } else {
        format!("{}/{}", f.numerator, f.denominator)
    }
}
