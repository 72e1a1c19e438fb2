// SPDX-License-Identifier: Apache-2.0

//! Exhaustive rank-distance oracles for desk-scale codes.

use super::{CodePair, LinearCode};
use crate::error::{Error, Result};
use crate::field::{ExtElement, FieldTower};
use crate::phi;
use crate::matrix::Matrix;

/// Default cap on the number of enumerated codewords.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 24;

fn check_budget(tower: &FieldTower, k: usize, budget: u128) -> Result<u128> {
    let per = tower.ext_order().unwrap_or(u128::MAX);
    let total = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(per));
    match total {
        Some(t) if t <= budget => Ok(t),
        _ => Err(Error::BudgetExceeded(format!(
            "(q^m)^{k} codewords exceed the budget of {budget}"
        ))),
    }
}

/// Message with base-q^m digits of `index`, least significant first.
fn message(tower: &FieldTower, mut index: u128, k: usize, per: u128) -> Vec<ExtElement> {
    (0..k)
        .map(|_| {
            let e = tower.element_from_index(index % per);
            index /= per;
            e
        })
        .collect()
}

fn row_rank(tower: &FieldTower, word: Vec<ExtElement>) -> usize {
    let n = word.len();
    phi::rank_q(tower, &Matrix::from_vec(1, n, word).expect("row"))
}

/// Minimum rank_q over nonzero codewords; `n + 1` for the zero code.
pub fn min_rank_distance_bruteforce(code: &LinearCode, budget: u128) -> Result<usize> {
    let tower = code.tower();
    let k = code.dim();
    if k == 0 {
        return Ok(code.n() + 1);
    }
    let total = check_budget(tower, k, budget)?;
    let per = tower.ext_order().expect("checked by budget");
    let mut best = code.n() + 1;
    for idx in 1..total {
        let w = code.encode(&message(tower, idx, k, per))?;
        best = best.min(row_rank(tower, w));
        if best == 1 {
            break;
        }
    }
    Ok(best)
}

/// min rank_q over C1 \ C2.
pub fn relative_min_rank_distance_bruteforce(pair: &CodePair, budget: u128) -> Result<usize> {
    let tower = pair.tower();
    let (k1, k2) = (pair.k1(), pair.k2());
    check_budget(tower, k1, budget)?;
    let per = tower.ext_order().expect("checked by budget");
    let r_total = check_budget(tower, k2, budget)?;
    let s_total = check_budget(tower, k1 - k2, budget)?;
    let mut best = pair.n() + 1;
    for s_idx in 1..s_total {
        let s = message(tower, s_idx, k1 - k2, per);
        for r_idx in 0..r_total {
            let mut u = message(tower, r_idx, k2, per);
            u.extend(s.iter().cloned());
            best = best.min(row_rank(tower, pair.c1().encode(&u)?));
            if best == 1 {
                return Ok(1);
            }
        }
    }
    Ok(best)
}

/// Exponent of q in the rank-metric Singleton bound, max(m,n)·(min(m,n) − d + 1).
/// Returns 0 when d exceeds min(m, n).
pub fn singleton_exponent(m: usize, n: usize, d: usize) -> usize {
    let (lo, hi) = (m.min(n), m.max(n));
    hi * (lo + 1).saturating_sub(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn tower(m: usize) -> Arc<FieldTower> {
        Arc::new(FieldTower::new(2, 1, m, None).unwrap())
    }

    #[test]
    fn degenerate_and_full_codes() {
        let t = tower(4);
        let zero = LinearCode::gabidulin(t.clone(), 4, 0).unwrap();
        assert_eq!(min_rank_distance_bruteforce(&zero, DEFAULT_ENUMERATION_BUDGET).unwrap(), 5);
        let full = LinearCode::gabidulin(t.clone(), 4, 4).unwrap();
        assert_eq!(min_rank_distance_bruteforce(&full, DEFAULT_ENUMERATION_BUDGET).unwrap(), 1);
    }

    #[test]
    fn small_gabidulin_distances() {
        let t = tower(3);
        let c = LinearCode::gabidulin(t.clone(), 3, 1).unwrap();
        // all 8 codewords: the 7 nonzero ones have full rank 3
        assert_eq!(min_rank_distance_bruteforce(&c, DEFAULT_ENUMERATION_BUDGET).unwrap(), 3);
        let c = LinearCode::gabidulin(t.clone(), 3, 2).unwrap();
        assert_eq!(min_rank_distance_bruteforce(&c, DEFAULT_ENUMERATION_BUDGET).unwrap(), 2);
        let t4 = tower(4);
        let c = LinearCode::gabidulin(t4.clone(), 4, 2).unwrap();
        assert_eq!(min_rank_distance_bruteforce(&c, DEFAULT_ENUMERATION_BUDGET).unwrap(), 3);
    }

    #[test]
    fn relative_distance_of_gabidulin_pair() {
        let t = tower(3);
        let c1 = LinearCode::gabidulin(t.clone(), 3, 2).unwrap();
        let pair = CodePair::nested(c1.clone(), 1).unwrap();
        let d = relative_min_rank_distance_bruteforce(&pair, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(d, 2);
        assert!(d <= 3 - 2 + 1);
        let trivial = CodePair::nested(c1.clone(), 0).unwrap();
        assert_eq!(
            relative_min_rank_distance_bruteforce(&trivial, DEFAULT_ENUMERATION_BUDGET).unwrap(),
            min_rank_distance_bruteforce(&c1, DEFAULT_ENUMERATION_BUDGET).unwrap()
        );
    }

    #[test]
    fn dual_distances() {
        let t = tower(4);
        let c = LinearCode::gabidulin(t.clone(), 4, 2).unwrap();
        let d = min_rank_distance_bruteforce(&c.dual(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(d, 3);
        let pair = CodePair::nested(LinearCode::gabidulin(t.clone(), 4, 3).unwrap(), 1).unwrap();
        let dual = pair.dual_pair().unwrap();
        let d = relative_min_rank_distance_bruteforce(&dual, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(Some(d), pair.designed_security_threshold());
    }

    #[test]
    fn budget_is_enforced() {
        let t = tower(8);
        let c = LinearCode::gabidulin(t, 8, 4).unwrap();
        assert!(matches!(min_rank_distance_bruteforce(&c, 1 << 20), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn singleton_exponents() {
        // Gabidulin (m=4, n=4, k=2, d=3) meets the bound: 2^{4·2} codewords.
        assert_eq!(singleton_exponent(4, 4, 3), 8);
        assert_eq!(singleton_exponent(3, 6, 3), 6);
    }
}
