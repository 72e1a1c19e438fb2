// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines reach stdout under a plain
//! `cargo test`. The process fails when a criterion's outcome differs from
//! `EXPECTED_FAIL`, in either direction.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rankstair_cli::commands::{cmd_example, cmd_security, example_config};
use rankstair_cli::report::Outcome;
use rankstair_cli::{trials, ExperimentConfig, Setup};
use rankstair_core::channel::{crisscross_weight, crisscross_weight_bruteforce};
use rankstair_core::codes::{min_rank_distance_bruteforce, CodePair, LinearCode};
use rankstair_core::coset::{decode_coherent, NestedScheme, Rational};
use rankstair_core::rng::trial_rng;
use rankstair_core::staircase::{bound_co, StaircasePlan, StaircaseScheme};
use rankstair_core::{matrix, phi, BaseMatrix, ExtElement, ExtMatrix, FieldTower, Matrix};
use rayon::prelude::*;

/// Criteria whose failure is expected: the round-trip plan (n=4, k1=2, D={3,4})
/// has CO(3) = 2 against the lower bound 1/2, because the last level is pinned
/// to k1 = 2 while meeting the bound needs k1 = d_h = 3.
const EXPECTED_FAIL: &[u32] = &[6];

const BUDGET: u128 = 1 << 24;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn tower(m: usize) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(2, 1, m, None).expect("binary tower"))
}

/// Every rows×cols binary matrix of full row rank.
fn full_rank_binary(rows: usize, cols: usize) -> Vec<BaseMatrix> {
    let f = tower(1);
    (0u32..1 << (rows * cols))
        .map(|bits| {
            Matrix::from_vec(rows, cols, (0..rows * cols).map(|i| ((bits >> i) & 1) as u16).collect()).unwrap()
        })
        .filter(|a| matrix::rank(f.base(), a) == rows)
        .collect()
}

fn all_ext(tower: &FieldTower, len: usize) -> Vec<Vec<ExtElement>> {
    let per = tower.ext_order().unwrap();
    let total = (0..len).fold(1u128, |acc, _| acc * per);
    (0..total)
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let e = tower.element_from_index(idx % per);
                    idx /= per;
                    e
                })
                .collect()
        })
        .collect()
}

fn round_trip_plan() -> StaircasePlan {
    StaircasePlan::gabidulin(4, 4, 2, 1, 0, &[3, 4]).unwrap()
}

fn mrd_grid() -> Verdict {
    let mut checked = 0;
    for m in [3, 4] {
        let t = tower(m);
        for n in 2..=m {
            for k in 1..n {
                let code = LinearCode::gabidulin(t.clone(), n, k).unwrap();
                let d = min_rank_distance_bruteforce(&code, BUDGET).unwrap();
                if d != n - k + 1 {
                    return verdict(false, format!("m={m} n={n} k={k}: d_R = {d}, expected {}", n - k + 1));
                }
                checked += 1;
            }
        }
    }
    verdict(true, format!("{checked} Gabidulin codes have d_R = n − k + 1"))
}

fn product_mrd() -> Verdict {
    let t = tower(3);
    for k in [1, 2] {
        let code = LinearCode::product(t.clone(), 2, k).unwrap();
        let d = min_rank_distance_bruteforce(&code, BUDGET).unwrap();
        if d != 3 - k + 1 {
            return verdict(false, format!("k={k}: d_R = {d}, expected {}", 3 - k + 1));
        }
    }
    verdict(true, "m=3, l=2, k=1,2: d_R = m − k + 1")
}

fn coherent_exhaustive() -> Verdict {
    let t = tower(3);
    let pair = CodePair::nested(LinearCode::gabidulin(t.clone(), 3, 2).unwrap(), 1).unwrap();
    let scheme = NestedScheme::new(pair.clone(), 0);
    let values = all_ext(&t, 1);
    let mut cases = 0u64;
    for d in [2, 3] {
        for a in full_rank_binary(d, 3) {
            for s in &values {
                for r in &values {
                    let x = scheme.encode_with(s, r).unwrap();
                    let y = phi::matmul_mixed(&t, &Matrix::from_vec(1, 3, x).unwrap(), &a).unwrap();
                    match decode_coherent(&pair, y.data(), &a, 0) {
                        Ok(got) if &got == s => cases += 1,
                        other => return verdict(false, format!("d={d}: s={s:?} r={r:?} decoded to {other:?}")),
                    }
                }
            }
        }
    }
    verdict(true, format!("{cases} (s, r, A) cases at t = 0 decode exactly"))
}

fn staircase_exhaustive() -> Verdict {
    let t = tower(4);
    let plan = round_trip_plan();
    let sch = StaircaseScheme::new(plan.clone(), t.clone(), 7).unwrap();
    let secrets: Vec<ExtMatrix> = all_ext(&t, plan.alpha * plan.ell)
        .into_iter()
        .map(|v| Matrix::from_vec(plan.alpha, plan.ell, v).unwrap())
        .collect();
    let codewords: Vec<ExtMatrix> =
        secrets.iter().enumerate().map(|(i, s)| sch.encode_trial(s, i as u64).unwrap()).collect();
    let mut pairs = 0u64;
    for &d in &plan.d_list {
        let formula = plan.overhead(d).unwrap().co;
        let transfers = full_rank_binary(d, plan.n);
        let bad = transfers.par_iter().find_map_any(|a| {
            let rx = match sch.receiver(a, 0) {
                Ok(rx) => rx,
                Err(e) => return Some(format!("d={d}: receiver: {e}")),
            };
            for (s, c) in secrets.iter().zip(&codewords) {
                let y = phi::matmul_mixed(&t, c, a).unwrap();
                if sch.decode_full_with(&rx, &y).as_ref() != Ok(s) {
                    return Some(format!("d={d}: decode_full missed S = {s:?}"));
                }
                let resp = sch.preprocess_all(&y).unwrap();
                if sch.decode_efficient_with(&rx, &resp).as_ref() != Ok(s) {
                    return Some(format!("d={d}: decode_efficient missed S = {s:?}"));
                }
                let co = plan.measured_overhead(&vec![resp.data.rows(); resp.d]).co;
                if co != formula {
                    return Some(format!("d={d}: measured CO {co} ≠ formula {formula}"));
                }
            }
            None
        });
        if let Some(msg) = bad {
            return verdict(false, msg);
        }
        pairs += (transfers.len() * secrets.len()) as u64;
    }
    verdict(true, format!("{pairs} (S, A) pairs, both decoders exact, CO matches the formula"))
}

fn examples() -> Verdict {
    let mut details = Vec::new();
    let mut pass = true;
    for which in [1, 2] {
        let setup = Setup::build(example_config(which, &[]).unwrap()).unwrap();
        let report = cmd_example(which, &setup).unwrap();
        let failed: Vec<&str> = report.assertions.iter().filter(|a| !a.pass).map(|a| a.name.as_str()).collect();
        let successes = report.simulation.iter().map(|r| r.successes).sum::<u64>();
        let trials = report.simulation.iter().map(|r| r.trials).sum::<u64>();
        pass &= failed.is_empty();
        details.push(if failed.is_empty() {
            format!("example {which}: {} assertions, {successes}/{trials} decoded", report.assertions.len())
        } else {
            format!("example {which} failed: {}", failed.join("; "))
        });
    }
    verdict(pass, details.join(", "))
}

fn tightness() -> Verdict {
    let example = Setup::build(example_config(1, &[]).unwrap()).unwrap();
    let plans = [("round-trip", round_trip_plan()), ("example", example.staircase().unwrap().plan().clone())];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, plan) in plans {
        for &d in &plan.d_list {
            let co = plan.overhead(d).unwrap().co;
            let bound = bound_co(plan.ell, d, plan.t0, plan.k2).unwrap();
            pass &= co == bound;
            parts.push(format!("{name} d={d}: CO {co} vs bound {bound}"));
        }
    }
    verdict(pass, parts.join("; "))
}

fn security_exact() -> Verdict {
    let config = ExperimentConfig::from_text(
        "scheme = nested\np = 2\ns = 1\nm = 3\nn = 3\nk1 = 2\nk2 = 1\nmu = 2\n",
        &[],
    )
    .unwrap();
    let setup = Setup::build(config).unwrap();
    let report = cmd_security(&setup).unwrap();
    let zero = Rational::from_integer(0);
    let row = |rank: usize| report.security.iter().find(|r| r.rank_b == rank);
    let all_enumerated = report.security.iter().all(|r| r.max_mi_logq.is_some());
    let rank1_zero = row(1).is_some_and(|r| r.leaking == 0 && r.max_mi_logq.map(Rational::from) == Some(zero));
    let rank2_leaks = row(2).is_some_and(|r| r.max_mi_logq.map(Rational::from).is_some_and(|mi| mi > zero));
    let observations: u64 = report.security.iter().map(|r| r.observations).sum();
    verdict(
        report.passed() && all_enumerated && rank1_zero && rank2_leaks && observations == 64,
        format!(
            "{observations} B enumerated; rank 1 leaks nothing: {rank1_zero}; some rank 2 leaks: {rank2_leaks}; \
             dimension test agrees: {}",
            report.passed()
        ),
    )
}

fn crisscross() -> Verdict {
    let f = tower(1);
    for bits in 0u32..512 {
        let e = Matrix::from_vec(3, 3, (0..9).map(|i| ((bits >> i) & 1) as u16).collect()).unwrap();
        if crisscross_weight(&e) != crisscross_weight_bruteforce(&e) {
            return verdict(false, format!("3×3 pattern {bits:#011b} disagrees"));
        }
    }
    let mut rng = trial_rng(0xC415_C405, 0);
    for i in 0..1000 {
        let e = Matrix::from_vec(5, 5, (0..25).map(|_| rng.gen_range(0..f.q()) as u16).collect()).unwrap();
        if crisscross_weight(&e) != crisscross_weight_bruteforce(&e) {
            return verdict(false, format!("random 5×5 matrix {i} disagrees"));
        }
    }
    let config = ExperimentConfig::from_text(
        "scheme = staircase-gabidulin\np = 2\ns = 1\nm = 4\nn = 4\nk1 = 2\nk2 = 1\nt0 = 0\nD = 3,4\n\
         crisscross = true\nt = 0\ntrials = 500\nseed = 11\n",
        &[],
    )
    .unwrap();
    let setup = Setup::build(config).unwrap();
    let records = trials::run_trials(&setup).unwrap();
    let ok = records.iter().filter(|r| r.in_contract && r.outcome == Outcome::Success).count();
    verdict(
        ok == records.len() && records.len() == 1000,
        format!("König weight matches brute force on 512 + 1000 matrices; {ok}/{} crisscross trials decoded", records.len()),
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Verdict;
    let criteria: [(u32, &str, Check, Duration); 8] = [
        (1, "MRD grid", mrd_grid, Duration::from_secs(60)),
        (2, "product-code MRD", product_mrd, Duration::from_secs(60)),
        (3, "coherent decoder, exhaustive", coherent_exhaustive, Duration::from_secs(300)),
        (4, "staircase round trip, exhaustive", staircase_exhaustive, Duration::from_secs(600)),
        (5, "worked examples at full scale", examples, Duration::from_secs(600)),
        (6, "bound tightness", tightness, Duration::from_secs(60)),
        (7, "exact security", security_exact, Duration::from_secs(300)),
        (8, "crisscross", crisscross, Duration::from_secs(300)),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let pass = v.pass && elapsed <= limit;
        println!(
            "{} criterion {id} ({name}): {} [{:.1}s, limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if pass == EXPECTED_FAIL.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: outcomes as expected (expected failures: {EXPECTED_FAIL:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
