// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::Rng;
use rayon::prelude::*;
use rankstair_core::coset::{check_security_linear, Fraction, Rational};
use rankstair_core::matrix::{self, BaseMatrix, ExtMatrix, Matrix};
use rankstair_core::rmx;
use rankstair_core::rng::trial_rng;
use rankstair_core::staircase::{bound_co, bound_info_rate};
use rankstair_core::{Error, Fq};

use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{frac, BoundRow, Report, SecurityRow};
use crate::setup::{Scheme, Setup};
use crate::trials;

fn base_report(command: &str, setup: &Setup) -> Report {
    let (plan, rate) = match &setup.scheme {
        Scheme::Staircase(s) => (Some(s.plan().clone()), s.plan().rate()),
        Scheme::Nested(s) => (None, s.rate()),
    };
    Report::new(command, setup.config.clone(), plan, rate)
}

/// Writes the STC1 plan (staircase) or GAB1 descriptor of C1 (nested).
fn write_descriptor(setup: &Setup, out: &Path) -> Result<()> {
    fs::create_dir_all(out)?;
    match &setup.scheme {
        Scheme::Staircase(s) => fs::write(out.join("plan.stc"), rmx::write_plan(s.plan(), &setup.tower))?,
        Scheme::Nested(s) => fs::write(out.join("code.gab"), rmx::write_code_descriptor(s.pair().c1())?)?,
    }
    Ok(())
}

pub fn cmd_plan(setup: &Setup, out: Option<&Path>) -> Result<Report> {
    let mut report = base_report("plan", setup);
    if let Some(st) = setup.staircase() {
        let plan = st.plan();
        for &d in &plan.d_list {
            let o = plan.overhead(d)?;
            report.assert(
                format!("d={d}: CO = DB − ℓ"),
                o.co == o.db - plan.ell as i64,
                format!("DB {} CO {}", frac(&o.db.into()), frac(&o.co.into())),
            );
        }
        report.assert(
            "α is a common multiple of every α_j",
            plan.alpha_list.iter().all(|&a| plan.alpha % a == 0),
            format!("α = {}", plan.alpha),
        );
    }
    if let Some(out) = out {
        write_descriptor(setup, out)?;
    }
    Ok(report)
}

fn random_secret(setup: &Setup) -> ExtMatrix {
    let mut rng = trial_rng(setup.config.seed, u64::MAX);
    let (rows, cols) = (setup.alpha(), setup.ell());
    Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| setup.tower.random(&mut rng)).collect()).expect("shape")
}

fn encode(setup: &Setup, s: &ExtMatrix) -> Result<ExtMatrix> {
    match &setup.scheme {
        Scheme::Staircase(st) => Ok(st.encode_trial(s, 0)?),
        Scheme::Nested(ns) => {
            let x = ns.encode_trial(s.data(), 0)?;
            Ok(Matrix::from_vec(1, x.len(), x)?)
        }
    }
}

/// Encodes the secret in `secret` (RMX1) or a seeded random one, and writes
/// the descriptor, `secret.rmx` and `codeword.rmx` to `out`.
pub fn cmd_encode(setup: &Setup, secret: Option<&Path>, out: &Path) -> Result<Report> {
    let mut report = base_report("encode", setup);
    let s = match secret {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            rmx::read_ext_matrix_in(&setup.tower, &text)?
        }
        None => random_secret(setup),
    };
    if s.shape() != (setup.alpha(), setup.ell()) {
        bail!("secret must be {}×{}, got {}×{}", setup.alpha(), setup.ell(), s.rows(), s.cols());
    }
    let x = encode(setup, &s)?;
    write_descriptor(setup, out)?;
    fs::write(out.join("secret.rmx"), rmx::write_ext_matrix(&setup.tower, &s))?;
    fs::write(out.join("codeword.rmx"), rmx::write_ext_matrix(&setup.tower, &x))?;
    let a = matrix::identity(setup.tower.base(), setup.config.n);
    let back = decode(setup, &x, &a, 0, None)?;
    report.assert("noiseless codeword decodes to the secret", back == s, "all columns, t = 0");
    Ok(report)
}

fn decode(setup: &Setup, y: &ExtMatrix, a: &BaseMatrix, t: usize, out: Option<&Path>) -> Result<ExtMatrix> {
    match &setup.scheme {
        Scheme::Staircase(st) => {
            let (s, responses) = st.receive(y, a, t)?;
            if let Some(out) = out {
                fs::write(out.join("responses.rsp"), rmx::write_responses(&setup.tower, &responses))?;
            }
            Ok(s)
        }
        Scheme::Nested(ns) => {
            if y.rows() != 1 {
                bail!("nested scheme expects a single received row, got {}", y.rows());
            }
            let s = ns.decode(y.data(), a, t)?;
            Ok(Matrix::from_vec(1, s.len(), s)?)
        }
    }
}

/// Decodes `received` (RMX1, rows × N) under `transfer` (base RMX1, N × n)
/// with the configured t. Writes `decoded.rmx` and, for staircase schemes,
/// the downloaded `responses.rsp`.
pub fn cmd_decode(setup: &Setup, received: &Path, transfer: &Path, out: &Path) -> Result<Report> {
    let mut report = base_report("decode", setup);
    let y = rmx::read_ext_matrix_in(&setup.tower, &fs::read_to_string(received)?)?;
    let (f, a) = rmx::read_base_matrix(&fs::read_to_string(transfer)?)?;
    if &f != setup.tower.base() {
        bail!("transfer matrix is over a different base field");
    }
    fs::create_dir_all(out)?;
    match decode(setup, &y, &a, setup.config.t, Some(out)) {
        Ok(s) => {
            fs::write(out.join("decoded.rmx"), rmx::write_ext_matrix(&setup.tower, &s))?;
            report.assert("decoding succeeded", true, format!("{}×{} secret", s.rows(), s.cols()));
        }
        Err(e) => report.assert("decoding succeeded", false, e.to_string()),
    }
    Ok(report)
}

pub fn cmd_simulate(setup: &Setup) -> Result<Report> {
    let mut report = base_report("simulate", setup);
    let records = trials::run_trials(setup)?;
    trials::summarize(setup, &records, &mut report)?;
    report.trace = records;
    Ok(report)
}

/// The receiver-side d values the bounds are evaluated at.
fn levels(setup: &Setup) -> Vec<usize> {
    match setup.staircase() {
        Some(st) => st.plan().d_list.clone(),
        None => {
            let mut d = setup.config.d_set.clone();
            d.sort_unstable_by(|a, b| b.cmp(a));
            d.dedup();
            d
        }
    }
}

fn bound_rows(setup: &Setup, report: &mut Report) -> Result<()> {
    let c = &setup.config;
    let ell = setup.ell();
    let (t, rho) = match setup.staircase() {
        Some(st) => (st.plan().t0, st.plan().rho0),
        None => (c.t, c.rho),
    };
    let ell_bound = bound_info_rate(c.n, t, rho, c.mu);
    for d in levels(setup) {
        let (db, co) = match setup.staircase() {
            Some(st) => {
                let o = st.plan().overhead(d)?;
                (o.db, o.co)
            }
            None => (Rational::from_integer(d as i64), Rational::from_integer(d as i64 - ell as i64)),
        };
        match (&ell_bound, bound_co(ell, d, t, c.mu)) {
            (Ok(lb), Ok(cb)) => {
                report.assert(format!("d={d}: ℓ ≤ n − 2t − ρ − μ"), ell <= *lb, format!("{ell} ≤ {lb}"));
                report.assert(
                    format!("d={d}: CO ≥ ℓ(2t + μ)/(d − 2t − μ)"),
                    co >= cb,
                    format!("{} ≥ {}", frac(&co.into()), frac(&cb.into())),
                );
                report.bounds.push(BoundRow {
                    d,
                    ell,
                    ell_bound: *lb,
                    ell_tight: ell == *lb,
                    db: db.into(),
                    co: co.into(),
                    co_bound: cb.into(),
                    co_tight: co == cb,
                });
            }
            (Err(e), _) => report.assert(format!("d={d}: bounds defined"), false, e.to_string()),
            (_, Err(e)) => report.assert(format!("d={d}: bounds defined"), false, e.to_string()),
        }
    }
    Ok(())
}

pub fn cmd_bounds(setup: &Setup) -> Result<Report> {
    let mut report = base_report("bounds", setup);
    bound_rows(setup, &mut report)?;
    Ok(report)
}

fn b_matrix(q: u32, rows: usize, cols: usize, mut idx: u128) -> BaseMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            let v = (idx % u128::from(q)) as Fq;
            idx /= u128::from(q);
            v
        })
        .collect();
    Matrix::from_vec(rows, cols, data).expect("shape")
}

fn random_b(c: &ExperimentConfig, q: u32, i: u64) -> BaseMatrix {
    let mut rng = trial_rng(c.seed ^ 0x5EC0_0000_0000_0000, i);
    Matrix::from_vec(c.mu, c.n, (0..c.mu * c.n).map(|_| rng.gen_range(0..q) as Fq).collect()).expect("shape")
}

struct Observation {
    rank_b: usize,
    secure: bool,
    mi: Option<Rational>,
    problem: Option<String>,
}

fn observe(setup: &Setup, b: &BaseMatrix) -> Result<Observation> {
    let pair = setup.security_pair();
    let report = match check_security_linear(&pair, b) {
        Ok(r) => r,
        Err(Error::SecurityViolation(msg)) => {
            let rank_b = matrix::rank(setup.tower.base(), b);
            return Ok(Observation { rank_b, secure: false, mi: None, problem: Some(msg) });
        }
        Err(e) => return Err(e.into()),
    };
    let budget = setup.config.budget;
    let mi = match &setup.scheme {
        Scheme::Nested(ns) => ns.mutual_information_exhaustive(b, budget),
        Scheme::Staircase(st) => st.mutual_information_exhaustive(b, budget),
    };
    let mi = match mi {
        Ok(mi) => Some(mi),
        Err(Error::BudgetExceeded(_) | Error::Unsupported(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let mut problem = None;
    if let Some(mi) = mi {
        let zero = mi == Rational::from_integer(0);
        if zero != report.secure {
            problem = Some(format!("I(S;W) = {mi} but the dimension test says secure = {}", report.secure));
        }
        if let Scheme::Nested(_) = setup.scheme {
            let expect = Rational::from_integer((setup.config.m * (report.dim_c1b - report.dim_c2b)) as i64);
            if mi != expect {
                problem = Some(format!("I(S;W) = {mi} but m·(dim C1Bᵀ − dim C2Bᵀ) = {expect}"));
            }
        }
    }
    Ok(Observation { rank_b: report.rank_b, secure: report.secure, mi, problem })
}

/// Runs the dimension test on every μ×n matrix B over F_q when there are at
/// most `budget` of them, otherwise on `trials` random ones, and compares it
/// with the exact mutual information wherever that fits the budget.
pub fn cmd_security(setup: &Setup) -> Result<Report> {
    let c = &setup.config;
    let mut report = base_report("security", setup);
    let q = setup.tower.q();
    let total = u128::from(q).checked_pow((c.mu * c.n) as u32).filter(|&t| t <= c.budget);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(c.threads).build()?;
    let observations: Vec<Observation> = pool.install(|| match total {
        Some(total) => (0..total)
            .into_par_iter()
            .map(|i| observe(setup, &b_matrix(q, c.mu, c.n, i)))
            .collect::<Result<Vec<_>>>(),
        None => (0..c.trials)
            .into_par_iter()
            .map(|i| {
                observe(setup, &random_b(c, q, i))
            })
            .collect::<Result<Vec<_>>>(),
    })?;
    let threshold = setup.security_pair().designed_security_threshold();
    let mut by_rank: BTreeMap<usize, SecurityRow> = BTreeMap::new();
    let mut problems = Vec::new();
    for o in &observations {
        let row = by_rank.entry(o.rank_b).or_insert_with(|| SecurityRow {
            rank_b: o.rank_b,
            observations: 0,
            secure: 0,
            leaking: 0,
            max_mi_logq: None,
            below_threshold: threshold.is_some_and(|t| o.rank_b < t),
        });
        row.observations += 1;
        if o.secure {
            row.secure += 1;
        } else {
            row.leaking += 1;
        }
        if let Some(mi) = o.mi {
            let best = row.max_mi_logq.map(Rational::from).map_or(mi, |m| m.max(mi));
            row.max_mi_logq = Some(Fraction::from(best));
        }
        problems.extend(o.problem.clone());
    }
    let exhaustive = total.is_some();
    let enumerated = observations.iter().filter(|o| o.mi.is_some()).count();
    report.assert(
        "dimension test is consistent and agrees with the exact mutual information",
        problems.is_empty(),
        match problems.first() {
            Some(p) => format!("{} problem(s), first: {p}", problems.len()),
            None => format!(
                "{} B ({}), I(S;W) enumerated for {enumerated}",
                observations.len(),
                if exhaustive { "exhaustive" } else { "sampled" }
            ),
        },
    );
    let below: Vec<&SecurityRow> = by_rank.values().filter(|r| r.below_threshold).collect();
    report.assert(
        "every B of rank below the threshold leaks nothing",
        below.iter().all(|r| r.leaking == 0),
        format!("threshold rank {}", threshold.map_or("unknown".into(), |t| t.to_string())),
    );
    report.security = by_rank.into_values().collect();
    Ok(report)
}

pub const EXAMPLE_CONFIG: &str = "\
# q = 256, packet length αm = 2048 split into α = 32 subpackets of m = 64
scheme = staircase-gabidulin
p = 2
s = 8
m = 64
n = 40
k1 = 24
k2 = 8
t0 = 0
D = 24,40
mu = 8
trials = 100
";

/// Example 1 (network, random transfer matrices) or Example 2 (storage,
/// contacted columns and crisscross errors), with optional overrides.
pub fn example_config(which: u8, overrides: &[String]) -> Result<ExperimentConfig, ConfigError> {
    let mut text = EXAMPLE_CONFIG.to_string();
    match which {
        1 => {}
        2 => text.push_str("crisscross = true\n"),
        _ => return Err(ConfigError(vec![format!("unknown example {which} (1 or 2)")])),
    }
    ExperimentConfig::from_text(&text, overrides)
}

/// Number of random B checked by the example command.
pub const EXAMPLE_SECURITY_SAMPLES: u64 = 4;

pub fn cmd_example(which: u8, setup: &Setup) -> Result<Report> {
    let st = setup.staircase().context("examples use the staircase scheme")?;
    let plan = st.plan();
    let mut report = base_report(&format!("example{which}"), setup);
    let exact = |x: Rational, want: Rational| (x == want, format!("{} (expected {})", frac(&x.into()), frac(&want.into())));
    let r = |n: i64, d: i64| Rational::new(n, d);
    let (ok, detail) = exact(plan.rate(), r(16, 40));
    report.assert("rate = 16/40", ok, detail);
    report.assert("ℓ = 16 and α = 32", plan.ell == 16 && plan.alpha == 32, format!("ℓ = {}, α = {}", plan.ell, plan.alpha));
    for (d, what, want) in [(40, "CO(40)", r(4, 1)), (24, "CO(24)", r(8, 1))] {
        let (ok, detail) = exact(plan.overhead(d)?.co, want);
        report.assert(format!("{what} = {want} packets"), ok, detail);
    }
    let (ok, detail) = exact(plan.overhead(40)?.db, r(20, 1));
    report.assert("DB(40) = 20 packets", ok, detail);
    bound_rows(setup, &mut report)?;
    for row in &report.bounds.clone() {
        report.assert(format!("d={}: CO meets the lower bound", row.d), row.co_tight, format!("{} vs {}", frac(&row.co), frac(&row.co_bound)));
    }
    let records = trials::run_trials(setup)?;
    trials::summarize(setup, &records, &mut report)?;
    report.trace = records;
    let c = &setup.config;
    let q = setup.tower.q();
    let secure = (0..EXAMPLE_SECURITY_SAMPLES)
        .map(|i| {
            let b = random_b(c, q, i);
            Ok(check_security_linear(&setup.security_pair(), &b).map(|l| l.secure).unwrap_or(false))
        })
        .collect::<Result<Vec<bool>>>()?;
    report.assert(
        format!("{} random {}-row observations leak nothing", secure.len(), c.mu),
        secure.iter().all(|&s| s),
        format!("{}/{} secure", secure.iter().filter(|&&s| s).count(), secure.len()),
    );
    Ok(report)
}
