// SPDX-License-Identifier: Apache-2.0

//! Nested coset coding without subpacketization, and exact leakage checks.
//!
//! A secret s ∈ F_{q^m}^ℓ is sent as s·G_c + r·G2 with r uniform, i.e. as a
//! uniform element of the coset s·G_c + C2. An eavesdropper seeing W = X·Bᵀ
//! learns nothing exactly when C1·Bᵀ = C2·Bᵀ.

use std::collections::HashMap;
use std::hash::Hash;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{
    relative_min_rank_distance_bruteforce, CodePair, CosetDecoder, DEFAULT_ENUMERATION_BUDGET,
};
use crate::error::{dims, Error, Result};
use crate::field::ExtElement;
use crate::matrix::{self, BaseMatrix, ExtMatrix};
use crate::phi;
use crate::rng::trial_rng;

pub type Rational = Ratio<i64>;

/// Default cap on |S|·|R| for the exhaustive mutual-information count.
pub const MI_ENUMERATION_BUDGET: u128 = 1 << 20;

/// Exact rational as it appears in JSON reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub numerator: i64,
    pub denominator: i64,
}

impl From<Rational> for Fraction {
    fn from(r: Rational) -> Self {
        Fraction { numerator: *r.numer(), denominator: *r.denom() }
    }
}

impl From<Fraction> for Rational {
    fn from(f: Fraction) -> Self {
        Rational::new(f.numerator, f.denominator)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeakageReport {
    pub dim_c1b: usize,
    pub dim_c2b: usize,
    #[serde(rename = "rankB")]
    pub rank_b: usize,
    pub secure: bool,
    /// I(S;W) in units of log_q, present only after an exhaustive count.
    pub mi_logq: Option<Fraction>,
}

/// dim(C ∩ 𝒱⊥) computed as an intersection of row spaces.
fn intersection_dim(tower: &crate::field::FieldTower, a: &ExtMatrix, b: &ExtMatrix) -> usize {
    let ra = matrix::rank(tower, a);
    let rb = matrix::rank(tower, b);
    let stacked = a.vstack(b).expect("same length");
    ra + rb - matrix::rank(tower, &stacked)
}

/// Dimensions of C1·Bᵀ and C2·Bᵀ over F_{q^m}, cross-checked against the
/// kernel identity dim(C) = dim(C·Bᵀ) + dim(C ∩ 𝒱⊥) with 𝒱 = Row(B) and
/// against the dual-side count dim(C2⊥ ∩ 𝒱) − dim(C1⊥ ∩ 𝒱). When rank(B) is
/// below d_R(C2⊥, C1⊥) the two images must coincide; a violation is an error.
pub fn check_security_linear(pair: &CodePair, b: &BaseMatrix) -> Result<LeakageReport> {
    let tower = pair.tower();
    if b.cols() != pair.n() {
        return Err(dims("columns of B", pair.n(), b.cols()));
    }
    let g1 = pair.c1().generator();
    let g2 = pair.c2();
    let g1b = phi::matmul_mixed(tower, g1, b)?;
    let g2b = g1b.submatrix(0..pair.k2(), 0..b.rows());
    let dim_c1b = matrix::rank(&**tower, &g1b);
    let dim_c2b = matrix::rank(&**tower, &g2b);
    let rank_b = matrix::rank(tower.base(), b);

    let v = phi::lift(tower, b);
    let v_perp = matrix::null_space(&**tower, &v);
    for (g, image) in [(g1, dim_c1b), (g2.generator(), dim_c2b)] {
        let kernel = intersection_dim(tower, g, &v_perp);
        if g.rows() != image + kernel {
            return Err(Error::SecurityViolation(format!(
                "dim C = {} but dim C·Bᵀ + dim C ∩ V⊥ = {image} + {kernel}",
                g.rows()
            )));
        }
    }
    let c1_perp = pair.c1().parity();
    let c2_perp = g2.parity();
    let dual_gap = intersection_dim(tower, &c2_perp, &v) - intersection_dim(tower, &c1_perp, &v);
    if dual_gap != dim_c1b - dim_c2b {
        return Err(Error::SecurityViolation(format!(
            "image gap {} differs from dual-side gap {dual_gap}",
            dim_c1b - dim_c2b
        )));
    }

    let threshold = pair.designed_security_threshold().or_else(|| {
        pair.dual_pair()
            .ok()
            .and_then(|d| relative_min_rank_distance_bruteforce(&d, DEFAULT_ENUMERATION_BUDGET).ok())
    });
    if threshold.is_some_and(|th| rank_b < th) && dim_c1b != dim_c2b {
        return Err(Error::SecurityViolation(format!(
            "rank(B) = {rank_b} is below d_R(C2⊥, C1⊥) = {} yet C1·Bᵀ ≠ C2·Bᵀ",
            threshold.unwrap_or_default()
        )));
    }
    Ok(LeakageReport { dim_c1b, dim_c2b, rank_b, secure: dim_c1b == dim_c2b, mi_logq: None })
}

fn log_q_exact(size: u128, q: u128) -> Option<i64> {
    let mut e = 0;
    let mut v = 1u128;
    while v < size {
        v = v.checked_mul(q)?;
        e += 1;
    }
    (v == size).then_some(e)
}

/// I(S;W) in log_q units for uniform independent S (`n_s` values) and R
/// (`n_r` values), with W = observe(s, r). Every conditional and marginal law
/// of W must be uniform on a support of size q^e, which is what makes the
/// entropies exact integers; anything else is reported as unsupported.
pub fn exact_mutual_information<K, F>(q: u32, n_s: u128, n_r: u128, observe: F) -> Result<Rational>
where
    K: Hash + Eq,
    F: Fn(u128, u128) -> Result<K>,
{
    let q = u128::from(q);
    let non_uniform = || Error::Unsupported("observation law is not uniform on a q-power support".into());
    let mut marginal: HashMap<K, u128> = HashMap::new();
    let mut conditional_sum = 0i64;
    for s in 0..n_s {
        let mut cond: HashMap<K, u128> = HashMap::new();
        for r in 0..n_r {
            *cond.entry(observe(s, r)?).or_default() += 1;
        }
        let first = *cond.values().next().expect("n_r ≥ 1");
        if cond.values().any(|&c| c != first) {
            return Err(non_uniform());
        }
        conditional_sum += log_q_exact(cond.len() as u128, q).ok_or_else(non_uniform)?;
        for (k, c) in cond {
            *marginal.entry(k).or_default() += c;
        }
    }
    let first = *marginal.values().next().expect("n_s ≥ 1");
    if marginal.values().any(|&c| c != first) {
        return Err(non_uniform());
    }
    let h_w = log_q_exact(marginal.len() as u128, q).ok_or_else(non_uniform)?;
    Ok(Rational::from_integer(h_w) - Rational::new(conditional_sum, n_s as i64))
}

/// Nested coset coding scheme with 𝒲 = Row(G_c) and φ(s) = s·G_c.
#[derive(Clone, Debug)]
pub struct NestedScheme {
    pair: CodePair,
    seed: u64,
}

impl NestedScheme {
    pub fn new(pair: CodePair, seed: u64) -> Self {
        NestedScheme { pair, seed }
    }

    pub fn pair(&self) -> &CodePair {
        &self.pair
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Information rate ℓ/n.
    pub fn rate(&self) -> Rational {
        Rational::new(self.pair.ell() as i64, self.pair.n() as i64)
    }

    /// (r | s)·G1 for given randomness `r`.
    pub fn encode_with(&self, s: &[ExtElement], r: &[ExtElement]) -> Result<Vec<ExtElement>> {
        if s.len() != self.pair.ell() {
            return Err(dims("secret length", self.pair.ell(), s.len()));
        }
        if r.len() != self.pair.k2() {
            return Err(dims("randomness length", self.pair.k2(), r.len()));
        }
        let mut u = r.to_vec();
        u.extend_from_slice(s);
        self.pair.c1().encode(&u)
    }

    pub fn encode<R: Rng + ?Sized>(&self, s: &[ExtElement], rng: &mut R) -> Result<Vec<ExtElement>> {
        let tower = self.pair.tower();
        let r: Vec<ExtElement> = (0..self.pair.k2()).map(|_| tower.random(rng)).collect();
        self.encode_with(s, &r)
    }

    /// Encoding whose randomness is drawn from the stream of `trial`.
    pub fn encode_trial(&self, s: &[ExtElement], trial: u64) -> Result<Vec<ExtElement>> {
        self.encode(s, &mut trial_rng(self.seed, trial))
    }

    pub fn decode(&self, y: &[ExtElement], a: &BaseMatrix, t: usize) -> Result<Vec<ExtElement>> {
        decode_coherent(&self.pair, y, a, t)
    }

    pub fn check_security(&self, b: &BaseMatrix) -> Result<LeakageReport> {
        check_security_linear(&self.pair, b)
    }

    /// Exact I(S;W) by enumerating every (s, r).
    pub fn mutual_information_exhaustive(&self, b: &BaseMatrix, budget: u128) -> Result<Rational> {
        let tower = self.pair.tower();
        let per = tower.ext_order().unwrap_or(u128::MAX);
        let count = |len: usize| (0..len).try_fold(1u128, |acc, _| acc.checked_mul(per));
        let (n_s, n_r) = match (count(self.pair.ell()), count(self.pair.k2())) {
            (Some(a), Some(b)) if a.checked_mul(b).is_some_and(|t| t <= budget) => (a, b),
            _ => {
                return Err(Error::BudgetExceeded(format!(
                    "(q^m)^(ℓ + k2) = (q^m)^{} joint values",
                    self.pair.k1()
                )))
            }
        };
        let digits = |mut idx: u128, len: usize| -> Vec<ExtElement> {
            (0..len)
                .map(|_| {
                    let e = tower.element_from_index(idx % per);
                    idx /= per;
                    e
                })
                .collect()
        };
        exact_mutual_information(tower.q(), n_s, n_r, |si, ri| {
            let x = self.encode_with(&digits(si, self.pair.ell()), &digits(ri, self.pair.k2()))?;
            let x = matrix::Matrix::from_vec(1, x.len(), x)?;
            Ok(phi::matmul_mixed(tower, &x, b)?.data().to_vec())
        })
    }

    /// Linear check plus, within `budget`, the exhaustive entropy count.
    pub fn leakage(&self, b: &BaseMatrix, budget: Option<u128>) -> Result<LeakageReport> {
        let mut report = self.check_security(b)?;
        if let Some(budget) = budget {
            let mi = self.mutual_information_exhaustive(b, budget)?;
            if (mi == Rational::from_integer(0)) != report.secure {
                return Err(Error::SecurityViolation(format!(
                    "exhaustive I(S;W) = {mi} disagrees with the dimension test"
                )));
            }
            report.mi_logq = Some(mi.into());
        }
        Ok(report)
    }
}

/// Recovers s from y = (r|s)·G1·Aᵀ + e with rank_q(e) ≤ t.
pub fn decode_coherent(
    pair: &CodePair,
    y: &[ExtElement],
    a: &BaseMatrix,
    t: usize,
) -> Result<Vec<ExtElement>> {
    if y.len() != a.rows() {
        return Err(dims("received length", a.rows(), y.len()));
    }
    CosetDecoder::new(pair.c1(), pair.k2(), a, t)?.decode(y)
}
