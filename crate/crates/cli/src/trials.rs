// SPDX-License-Identifier: Apache-2.0

//! End-to-end trials: encode, channel, preprocess, decode.
//!
//! Trial `i` at level index `j` draws everything from streams keyed by
//! `(seed, j·2^32 + i)`, so results do not depend on the thread count.

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use rand::Rng;
use rayon::prelude::*;
use rankstair_core::channel::{
    crisscross_weight, sample_contacted, sample_crisscross_error, sample_erasure_matrix, sample_rank_error,
    selection_matrix, CoherentChannelSpec,
};
use rankstair_core::coset::{Fraction, Rational};
use rankstair_core::matrix::{self, BaseMatrix, ExtMatrix, Matrix};
use rankstair_core::phi;
use rankstair_core::rng::{trial_rng, TrialRng};
use rankstair_core::FieldTower;

use crate::report::{Outcome, Report, SimulationRow, TrialRecord};
use crate::setup::{Scheme, Setup};

const SECRET_TAG: u64 = 1;
const CHANNEL_TAG: u64 = 2;

fn stream_rng(seed: u64, tag: u64, stream: u64) -> TrialRng {
    trial_rng(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15), stream)
}

fn random_ext<R: Rng + ?Sized>(tower: &FieldTower, rows: usize, cols: usize, rng: &mut R) -> ExtMatrix {
    Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| tower.random(rng)).collect()).expect("shape")
}

fn bits_per_symbol(tower: &FieldTower) -> u64 {
    u64::from(32 - (tower.q() - 1).leading_zeros())
}

/// A channel use: transfer matrix, received matrix, and error statistics.
struct Channel {
    a: BaseMatrix,
    y: ExtMatrix,
    rank_e: usize,
    wt_c: Option<usize>,
}

/// Sends `x` (rows×n) so that `d` columns arrive. The network model mixes with
/// a random rank-d transfer matrix (rank deficiency ρ = n − d when `d` is
/// given, or up to `rho` otherwise) and adds a rank-t error; the storage model
/// selects n − ρ stored columns after adding a crisscross error of weight t.
fn transmit(setup: &Setup, x: &ExtMatrix, d: Option<usize>, rng: &mut TrialRng) -> Result<Channel> {
    let c = &setup.config;
    let tower = &*setup.tower;
    let f = tower.base();
    let n = x.cols();
    if c.crisscross {
        let rho = d.map_or(c.rho, |d| n - d);
        let e_stored = sample_crisscross_error(f, x.rows() * tower.m(), n, c.t, rng)?;
        let wt_c = crisscross_weight(&e_stored);
        let cols = sample_contacted(n, rho, rng);
        let a = selection_matrix(n, &cols);
        let stored = matrix::add(tower, x, &phi::contract_phi(tower, &e_stored)?)?;
        let y = phi::matmul_mixed(tower, &stored, &a)?;
        let rank_e = matrix::rank(f, &e_stored.select_cols(&cols));
        Ok(Channel { a, y, rank_e, wt_c: Some(wt_c) })
    } else {
        let spec = match d {
            Some(d) => CoherentChannelSpec::new(n, d, c.t, n - d, c.mu)?,
            None => CoherentChannelSpec::new(n, c.big_n, c.t, c.rho, c.mu)?,
        };
        let a = sample_erasure_matrix(f, &spec, rng);
        let e = sample_rank_error(tower, x.rows(), spec.big_n, c.t, rng)?;
        let rank_e = if c.t == 0 { 0 } else { phi::rank_q(tower, &e) };
        let y = matrix::add(tower, &phi::matmul_mixed(tower, x, &a)?, &e)?;
        Ok(Channel { a, y, rank_e, wt_c: None })
    }
}

fn classify<T: PartialEq>(got: rankstair_core::Result<T>, planted: &T) -> (Outcome, Option<String>) {
    match got {
        Ok(s) if &s == planted => (Outcome::Success, None),
        Ok(_) => (Outcome::Wrong, Some("decoder returned a different secret".into())),
        Err(e) => (Outcome::Failure, Some(e.to_string())),
    }
}

fn staircase_trial(setup: &Setup, level_index: usize, i: u64) -> Result<TrialRecord> {
    let st = setup.staircase().expect("staircase setup");
    let plan = st.plan();
    let c = &setup.config;
    let tower = &*setup.tower;
    let d = plan.d_list[level_index];
    let stream = ((level_index as u64) << 32) | i;
    let s = random_ext(tower, plan.alpha, plan.ell, &mut stream_rng(c.seed, SECRET_TAG, stream));
    let x = st.encode_trial(&s, stream)?;
    let ch = transmit(setup, &x, Some(d), &mut stream_rng(c.seed, CHANNEL_TAG, stream))?;
    let rank_a = matrix::rank(tower.base(), &ch.a);
    let level = plan.level_for(rank_a).ok();
    let in_contract = level.is_some() && c.t <= plan.t0;
    let rows_downloaded = level.map_or(0, |j| plan.prefix_rows(j) * plan.d_list[j]);
    let (outcome, reason) = classify(st.receive(&ch.y, &ch.a, c.t).map(|(s, _)| s), &s);
    Ok(TrialRecord {
        trial: i,
        d,
        seed: c.seed,
        stream,
        rank_a,
        rank_e: ch.rank_e,
        wt_c: ch.wt_c,
        in_contract,
        outcome,
        reason,
        rows_downloaded,
        bytes_downloaded: (rows_downloaded as u64 * tower.m() as u64 * bits_per_symbol(tower)).div_ceil(8),
    })
}

fn nested_trial(setup: &Setup, i: u64) -> Result<TrialRecord> {
    let Scheme::Nested(scheme) = &setup.scheme else { unreachable!("nested setup") };
    let c = &setup.config;
    let tower = &*setup.tower;
    let pair = scheme.pair();
    let s = random_ext(tower, 1, pair.ell(), &mut stream_rng(c.seed, SECRET_TAG, i)).data().to_vec();
    let x = scheme.encode_trial(&s, i)?;
    let x = Matrix::from_vec(1, x.len(), x)?;
    let ch = transmit(setup, &x, None, &mut stream_rng(c.seed, CHANNEL_TAG, i))?;
    let rank_a = matrix::rank(tower.base(), &ch.a);
    let in_contract = 2 * c.t + (c.n - rank_a) <= c.n - c.k1;
    let (outcome, reason) = classify(scheme.decode(ch.y.data(), &ch.a, c.t), &s);
    Ok(TrialRecord {
        trial: i,
        d: rank_a,
        seed: c.seed,
        stream: i,
        rank_a,
        rank_e: ch.rank_e,
        wt_c: ch.wt_c,
        in_contract,
        outcome,
        reason,
        rows_downloaded: rank_a,
        bytes_downloaded: (rank_a as u64 * tower.m() as u64 * bits_per_symbol(tower)).div_ceil(8),
    })
}

/// Runs every trial and returns the records ordered by (level, trial).
pub fn run_trials(setup: &Setup) -> Result<Vec<TrialRecord>> {
    let c = &setup.config;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(c.threads).build().context("thread pool")?;
    pool.install(|| match setup.staircase() {
        Some(st) => (0..st.plan().h())
            .flat_map(|j| (0..c.trials).map(move |i| (j, i)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(j, i)| staircase_trial(setup, j, i))
            .collect(),
        None => (0..c.trials).into_par_iter().map(|i| nested_trial(setup, i)).collect(),
    })
}

fn formula(setup: &Setup, d: usize) -> Result<(Rational, Rational)> {
    match setup.staircase() {
        Some(st) => {
            let o = st.plan().overhead(d)?;
            Ok((o.db, o.co))
        }
        None => {
            let db = Rational::from_integer(d as i64);
            Ok((db, db - setup.ell() as i64))
        }
    }
}

/// Groups trial records by d and adds the contractual assertions.
pub fn summarize(setup: &Setup, records: &[TrialRecord], report: &mut Report) -> Result<()> {
    let c = &setup.config;
    let alpha = setup.alpha() as i64;
    let ell = setup.ell() as i64;
    let mut groups: BTreeMap<std::cmp::Reverse<usize>, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(std::cmp::Reverse(r.d)).or_default().push(r);
    }
    for (std::cmp::Reverse(d), group) in groups {
        let count = |pred: &dyn Fn(&TrialRecord) -> bool| group.iter().filter(|r| pred(r)).count() as u64;
        let (f_db, f_co) = formula(setup, d)?;
        let measured: Vec<Rational> = group.iter().map(|r| Rational::new(r.rows_downloaded as i64, alpha)).collect();
        let common = measured.windows(2).all(|w| w[0] == w[1]).then(|| measured[0]);
        let in_contract_db: Vec<Rational> =
            group.iter().zip(&measured).filter(|(r, _)| r.in_contract).map(|(_, &m)| m).collect();
        let co_matches = in_contract_db.iter().all(|&m| m == f_db);
        let trials = group.len() as u64;
        let successes = count(&|r| r.outcome == Outcome::Success);
        let in_contract = count(&|r| r.in_contract);
        let in_contract_ok = count(&|r| r.in_contract && r.outcome == Outcome::Success);
        let row = SimulationRow {
            d,
            t: c.t,
            rho: c.n - d,
            mu: c.mu,
            trials,
            in_contract,
            successes,
            failures: count(&|r| r.outcome == Outcome::Failure),
            wrong: count(&|r| r.outcome == Outcome::Wrong),
            out_of_contract: count(&|r| !r.in_contract && r.outcome != Outcome::Success),
            success_rate: Rational::new(successes as i64, trials as i64).into(),
            measured_db: common.map(Fraction::from),
            measured_co: common.map(|m| Fraction::from(m - ell)),
            formula_db: f_db.into(),
            formula_co: f_co.into(),
            co_matches_formula: co_matches,
        };
        report.assert(
            format!("d={d}: every in-contract trial recovers the secret"),
            in_contract_ok == in_contract,
            format!("{in_contract_ok}/{in_contract} in contract, {} out of contract", trials - in_contract),
        );
        report.assert(
            format!("d={d}: measured CO equals the formula"),
            co_matches,
            format!("formula CO {}", crate::report::frac(&row.formula_co)),
        );
        report.simulation.push(row);
    }
    Ok(())
}
