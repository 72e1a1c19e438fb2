// SPDX-License-Identifier: Apache-2.0

//! Staircase subpacketization over a nested chain of MRD codes.
//!
//! The α×ℓ secret is spread over blocks M_1..M_h of a matrix M'_h whose
//! lower blocks use fewer columns, so C = M'_h·G^(1) can be decoded from the
//! first ℓα/α_j rows of each of d_j columns. A receiver that sees more
//! columns downloads less of each one.

mod layout;
mod plan;

use std::sync::Arc;

use rand::Rng;

pub use layout::{BlockLayout, Fold};
pub use plan::{bound_co, bound_info_rate, ChainFamily, Overhead, StaircasePlan};

use crate::codes::{CodePair, CosetDecoder, LinearCode};
use crate::coset::{check_security_linear, exact_mutual_information, LeakageReport, Rational};
use crate::error::{dims, Error, Result};
use crate::field::{ExtElement, FieldTower};
use crate::matrix::{self, BaseMatrix, ExtMatrix, Matrix};
use crate::phi;
use crate::rng::trial_rng;

/// Responses to one download request: the first `rows` entries of each of the
/// contacted columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Responses {
    pub d: usize,
    pub level: usize,
    /// `rows × d`, column i is E_{A,i}(y_i).
    pub data: ExtMatrix,
}

/// Per-transfer-matrix decoding state: G^(1)·Aᵀ and the coset decoders of
/// the levels a receiver with these observations can use.
#[derive(Clone, Debug)]
pub struct Receiver {
    n_obs: usize,
    ga: ExtMatrix,
    decoders: Vec<Option<Result<CosetDecoder>>>,
}

#[derive(Clone, Debug)]
pub struct StaircaseScheme {
    plan: StaircasePlan,
    layout: BlockLayout,
    /// G^(1); G^(j) is its k^(j)-row prefix.
    top: LinearCode,
    seed: u64,
}

impl StaircaseScheme {
    pub fn new(plan: StaircasePlan, tower: Arc<FieldTower>, seed: u64) -> Result<Self> {
        if tower.m() != plan.m {
            return Err(dims("extension degree", plan.m, tower.m()));
        }
        let top = match plan.family {
            ChainFamily::Gabidulin => LinearCode::gabidulin(tower, plan.n, plan.k_list[0])?,
            ChainFamily::Product { l } => LinearCode::product(tower, l, plan.k_list[0] / l)?,
        };
        let layout = BlockLayout::new(&plan);
        Ok(StaircaseScheme { plan, layout, top, seed })
    }

    pub fn plan(&self) -> &StaircasePlan {
        &self.plan
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.top.tower()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// C^(j+1) as a code (0-based level).
    pub fn chain_code(&self, level: usize) -> LinearCode {
        self.top.prefix(self.plan.k_list[level]).expect("plan dimensions are valid prefixes")
    }

    /// The pair (C1, C2) governing full decoding.
    pub fn base_pair(&self) -> CodePair {
        CodePair::nested(self.chain_code(self.plan.h() - 1), self.plan.k2).expect("k2 < k1")
    }

    /// The pair (C^(1), C2) governing security.
    pub fn security_pair(&self) -> CodePair {
        CodePair::nested(self.top.clone(), self.plan.k2).expect("k2 < k^(1)")
    }

    /// M'_h for secret `s` (α×ℓ) and randomness `r` (α×k2).
    pub fn build_message(&self, s: &ExtMatrix, r: &ExtMatrix) -> Result<ExtMatrix> {
        let p = &self.plan;
        if s.shape() != (p.alpha, p.ell) {
            return Err(dims("secret shape", (p.alpha, p.ell), s.shape()));
        }
        if r.shape() != (p.alpha, p.k2) {
            return Err(dims("randomness shape", (p.alpha, p.k2), r.shape()));
        }
        let mut m = matrix::zeros(&**self.tower(), p.alpha, self.layout.width);
        m.paste(0, self.layout.r_cols.start, r);
        m.paste(0, self.layout.s_cols.start, s);
        // block h−1 feeds the first D column block, then upwards
        for u in (1..p.h()).rev() {
            self.layout.folds[u].as_ref().expect("u ≥ 1").apply(&mut m);
        }
        Ok(m)
    }

    /// C = M'_h·G^(1) for given randomness.
    pub fn encode_with(&self, s: &ExtMatrix, r: &ExtMatrix) -> Result<ExtMatrix> {
        let m = self.build_message(s, r)?;
        matrix::mul(&**self.tower(), &m, self.top.generator())
    }

    pub fn encode<R: Rng + ?Sized>(&self, s: &ExtMatrix, rng: &mut R) -> Result<ExtMatrix> {
        let tower = self.tower();
        let (a, k2) = (self.plan.alpha, self.plan.k2);
        let r = Matrix::from_vec(a, k2, (0..a * k2).map(|_| tower.random(rng)).collect())?;
        self.encode_with(s, &r)
    }

    pub fn encode_trial(&self, s: &ExtMatrix, trial: u64) -> Result<ExtMatrix> {
        self.encode(s, &mut trial_rng(self.seed, trial))
    }

    /// E_{A,i}: the first ℓα/α_j entries of one column response, d = d_j.
    pub fn preprocess(&self, d: usize, column: &[ExtElement]) -> Result<Vec<ExtElement>> {
        let j = self.plan.level_of(d)?;
        if column.len() != self.plan.alpha {
            return Err(dims("column length", self.plan.alpha, column.len()));
        }
        Ok(column[..self.plan.prefix_rows(j)].to_vec())
    }

    /// Applies the preprocessing to every column of an α×d response matrix.
    /// When d ∉ D the largest d_j ≤ d is used and only its first d_j columns
    /// are kept; `a` must then be restricted the same way by the caller.
    pub fn preprocess_all(&self, y: &ExtMatrix) -> Result<Responses> {
        if y.rows() != self.plan.alpha {
            return Err(dims("response rows", self.plan.alpha, y.rows()));
        }
        let level = self.plan.level_for(y.cols())?;
        let d = self.plan.d_list[level];
        let rows = self.plan.prefix_rows(level);
        Ok(Responses { d, level, data: y.submatrix(0..rows, 0..d) })
    }

    /// Decoding state for the transfer matrix `a`, reusable across received
    /// words.
    pub fn receiver(&self, a: &BaseMatrix, t: usize) -> Result<Receiver> {
        let p = &self.plan;
        let tower = &**self.tower();
        let ga = phi::matmul_mixed(tower, self.top.generator(), a)?;
        let mut decoders = vec![None; p.h()];
        let mut levels = vec![p.h() - 1];
        levels.extend(p.level_of(a.rows()).ok());
        for level in levels {
            decoders[level] = Some(
                CosetDecoder::new(&self.chain_code(level), p.k2, a, t).map_err(|e| e.at_stage(level + 1)),
            );
        }
        Ok(Receiver { n_obs: a.rows(), ga, decoders })
    }

    /// Decodes every row of M'_{level+1} against (C^(level+1), C2), peeling
    /// blocks from the bottom up. Returns the α × k^(1) matrix with the
    /// recovered columns [k2, k^(1)) of the decoded blocks filled in.
    fn peel(&self, rx: &Receiver, y: &ExtMatrix, level: usize) -> Result<ExtMatrix> {
        let p = &self.plan;
        let tower = &**self.tower();
        let kj = p.k_list[level];
        let decoder = match &rx.decoders[level] {
            Some(d) => d.as_ref().map_err(Clone::clone)?,
            None => return Err(Error::NotInD(rx.n_obs)),
        };
        let ga_high = rx.ga.submatrix(kj..self.layout.width, 0..rx.n_obs);
        let mut m = matrix::zeros(tower, p.alpha, self.layout.width);
        for u in (0..=level).rev() {
            let rows = self.layout.blocks[u].clone();
            let mut yu = y.submatrix(rows.clone(), 0..rx.n_obs);
            if kj < self.layout.width {
                let known = m.submatrix(rows.clone(), kj..self.layout.width);
                yu = matrix::sub(tower, &yu, &matrix::mul(tower, &known, &ga_high)?)?;
            }
            let decoded = decoder.decode_rows(&yu).map_err(|e| e.at_stage(u + 1))?;
            m.paste(rows.start, p.k2, &decoded);
            if let Some(f) = &self.layout.folds[u] {
                f.apply(&mut m);
            }
        }
        for u in level + 1..p.h() {
            self.layout.folds[u].as_ref().expect("u ≥ 1").unapply(&mut m);
        }
        Ok(m)
    }

    fn secret_of(&self, m: &ExtMatrix) -> ExtMatrix {
        m.submatrix(0..self.plan.alpha, self.layout.s_cols.clone())
    }

    /// Full decoding from Y = C·Aᵀ + E (α×N), using all rows of every column.
    pub fn decode_full(&self, y: &ExtMatrix, a: &BaseMatrix, t: usize) -> Result<ExtMatrix> {
        self.decode_full_with(&self.receiver(a, t)?, y)
    }

    pub fn decode_full_with(&self, rx: &Receiver, y: &ExtMatrix) -> Result<ExtMatrix> {
        if y.shape() != (self.plan.alpha, rx.n_obs) {
            return Err(dims("received shape", (self.plan.alpha, rx.n_obs), y.shape()));
        }
        let m = self.peel(rx, y, self.plan.h() - 1)?;
        Ok(self.secret_of(&m))
    }

    /// Decoding from preprocessed responses; `a` has one row per contacted
    /// column and is reduced to independent rows if needed.
    pub fn decode_efficient(&self, responses: &Responses, a: &BaseMatrix, t: usize) -> Result<ExtMatrix> {
        self.decode_efficient_with(&self.receiver(a, t)?, responses)
    }

    pub fn decode_efficient_with(&self, rx: &Receiver, responses: &Responses) -> Result<ExtMatrix> {
        let level = responses.level;
        let rows = self.plan.prefix_rows(level);
        if responses.data.shape() != (rows, rx.n_obs) {
            return Err(dims("response shape", (rows, rx.n_obs), responses.data.shape()));
        }
        let mut padded = matrix::zeros(&**self.tower(), self.plan.alpha, rx.n_obs);
        padded.paste(0, 0, &responses.data);
        let m = self.peel(rx, &padded, level)?;
        Ok(self.secret_of(&m))
    }

    /// Receiver side end to end: reduce A to independent rows, pick the level
    /// for that many columns, download and decode.
    pub fn receive(&self, y: &ExtMatrix, a: &BaseMatrix, t: usize) -> Result<(ExtMatrix, Responses)> {
        let tower = self.tower();
        let keep = matrix::independent_rows(tower.base(), a);
        let level = self.plan.level_for(keep.len())?;
        let keep = &keep[..self.plan.d_list[level]];
        let a_red = a.select_rows(keep);
        let y_red = y.select_cols(keep);
        let responses = self.preprocess_all(&y_red)?;
        let s = self.decode_efficient(&responses, &a_red, t)?;
        Ok((s, responses))
    }

    pub fn check_security(&self, b: &BaseMatrix) -> Result<LeakageReport> {
        check_security_linear(&self.security_pair(), b)
    }

    /// Exact I(S;W) for W = C·Bᵀ, enumerating every S and R.
    pub fn mutual_information_exhaustive(&self, b: &BaseMatrix, budget: u128) -> Result<Rational> {
        let tower = self.tower();
        let p = &self.plan;
        let per = tower.ext_order().unwrap_or(u128::MAX);
        let count = |len: usize| (0..len).try_fold(1u128, |acc, _| acc.checked_mul(per));
        let (n_s, n_r) = match (count(p.alpha * p.ell), count(p.alpha * p.k2)) {
            (Some(x), Some(y)) if x.checked_mul(y).is_some_and(|t| t <= budget) => (x, y),
            _ => return Err(Error::BudgetExceeded("(q^m)^(α(ℓ + k2)) joint values".into())),
        };
        let fill = |mut idx: u128, rows: usize, cols: usize| -> Result<ExtMatrix> {
            let data = (0..rows * cols)
                .map(|_| {
                    let e = tower.element_from_index(idx % per);
                    idx /= per;
                    e
                })
                .collect();
            Matrix::from_vec(rows, cols, data)
        };
        exact_mutual_information(tower.q(), n_s, n_r, |si, ri| {
            let c = self.encode_with(&fill(si, p.alpha, p.ell)?, &fill(ri, p.alpha, p.k2)?)?;
            Ok(phi::matmul_mixed(tower, &c, b)?.data().to_vec())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scheme(plan: StaircasePlan, seed: u64) -> StaircaseScheme {
        let tower = Arc::new(FieldTower::new(2, 1, plan.m, None).unwrap());
        StaircaseScheme::new(plan, tower, seed).unwrap()
    }

    fn random_secret(s: &StaircaseScheme, rng: &mut ChaCha8Rng) -> ExtMatrix {
        let p = s.plan();
        Matrix::from_vec(p.alpha, p.ell, (0..p.alpha * p.ell).map(|_| s.tower().random(rng)).collect())
            .unwrap()
    }

    fn full_rank(rng: &mut ChaCha8Rng, d: usize, n: usize) -> BaseMatrix {
        let f = crate::field::BaseField::new(2, 1, None).unwrap();
        loop {
            let a = Matrix::from_vec(d, n, (0..d * n).map(|_| rng.gen_range(0..2)).collect()).unwrap();
            if matrix::rank(&f, &a) == d {
                return a;
            }
        }
    }

    fn rank_error(t: &FieldTower, rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> ExtMatrix {
        let u = Matrix::from_vec(rows * t.m(), rank, (0..rows * t.m() * rank).map(|_| rng.gen_range(0..2)).collect()).unwrap();
        let v = Matrix::from_vec(rank, cols, (0..rank * cols).map(|_| rng.gen_range(0..2)).collect()).unwrap();
        phi::contract_phi(t, &matrix::mul(t.base(), &u, &v).unwrap()).unwrap()
    }

    #[test]
    fn zero_secret_and_randomness_encode_to_zero() {
        let s = scheme(StaircasePlan::gabidulin(4, 4, 2, 1, 0, &[3, 4]).unwrap(), 0);
        let t = s.tower().clone();
        let c = s
            .encode_with(&matrix::zeros(&*t, 3, 1), &matrix::zeros(&*t, 3, 1))
            .unwrap();
        assert!(matrix::is_zero(&*t, &c));
    }

    #[test]
    fn single_level_rows_are_nested_encodings() {
        let plan = StaircasePlan::gabidulin(6, 6, 4, 2, 0, &[6]).unwrap();
        let s = scheme(plan, 1);
        let t = s.tower().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sec = random_secret(&s, &mut rng);
        let r = Matrix::from_vec(2, 2, (0..4).map(|_| t.random(&mut rng)).collect()).unwrap();
        let c = s.encode_with(&sec, &r).unwrap();
        let nested = crate::coset::NestedScheme::new(s.base_pair(), 0);
        for i in 0..2 {
            assert_eq!(c.row(i), nested.encode_with(sec.row(i), r.row(i)).unwrap().as_slice());
        }
    }

    #[test]
    fn round_trip_with_errors_q2_m8() {
        let plan = StaircasePlan::gabidulin(8, 8, 4, 2, 1, &[6, 8]).unwrap();
        let s = scheme(plan, 77);
        let t = s.tower().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let sec = random_secret(&s, &mut rng);
            let c = s.encode_trial(&sec, trial).unwrap();
            for d in [6, 8] {
                let a = full_rank(&mut rng, d, 8);
                let e = rank_error(&t, &mut rng, s.plan().alpha, d, 1);
                let y = matrix::add(&*t, &phi::matmul_mixed(&t, &c, &a).unwrap(), &e).unwrap();
                assert_eq!(s.decode_full(&y, &a, 1).unwrap(), sec);
                let (got, resp) = s.receive(&y, &a, 1).unwrap();
                assert_eq!(got, sec);
                assert_eq!(resp.d, d);
            }
        }
    }

    #[test]
    fn deep_chain_round_trip_noiseless() {
        let plan = StaircasePlan::gabidulin(7, 7, 3, 1, 0, &[4, 5, 7]).unwrap();
        let s = scheme(plan, 2);
        let t = s.tower().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..20 {
            let sec = random_secret(&s, &mut rng);
            let c = s.encode_trial(&sec, trial).unwrap();
            for &d in &s.plan().d_list.clone() {
                let a = full_rank(&mut rng, d, 7);
                let y = phi::matmul_mixed(&t, &c, &a).unwrap();
                let resp = s.preprocess_all(&y).unwrap();
                assert_eq!(resp.data.rows(), s.plan().prefix_rows(s.plan().level_of(d).unwrap()));
                assert_eq!(s.decode_efficient(&resp, &a, 0).unwrap(), sec);
                assert_eq!(s.decode_full(&y, &a, 0).unwrap(), sec);
            }
            // d = 6 is not in D: the receiver falls back to d = 5
            let a = full_rank(&mut rng, 6, 7);
            let y = phi::matmul_mixed(&t, &c, &a).unwrap();
            let (got, resp) = s.receive(&y, &a, 0).unwrap();
            assert_eq!((got, resp.d), (sec, 5));
        }
    }

    #[test]
    fn product_chain_round_trip() {
        let plan = StaircasePlan::product(2, 4, 2, 1, 0, &[6, 8]).unwrap();
        let s = scheme(plan, 9);
        let t = s.tower().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..20 {
            let sec = random_secret(&s, &mut rng);
            let c = s.encode_trial(&sec, trial).unwrap();
            for d in [6, 8] {
                let a = full_rank(&mut rng, d, 8);
                let y = phi::matmul_mixed(&t, &c, &a).unwrap();
                assert_eq!(s.receive(&y, &a, 0).unwrap().0, sec);
            }
        }
    }

    #[test]
    fn failures_are_tagged_with_a_stage() {
        let plan = StaircasePlan::gabidulin(8, 8, 4, 2, 1, &[6, 8]).unwrap();
        let s = scheme(plan, 0);
        let t = s.tower().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = full_rank(&mut rng, 8, 8);
        let mut tagged = 0;
        for _ in 0..20 {
            let y = Matrix::from_vec(s.plan().alpha, 8, (0..s.plan().alpha * 8).map(|_| t.random(&mut rng)).collect()).unwrap();
            if let Err(Error::DecodingFailure { stage, .. }) = s.decode_full(&y, &a, 1) {
                assert!(stage.is_some());
                tagged += 1;
            }
        }
        assert!(tagged > 0);
    }

    #[test]
    fn preprocess_prefixes() {
        let s = scheme(StaircasePlan::gabidulin(4, 4, 2, 1, 0, &[3, 4]).unwrap(), 0);
        let t = s.tower().clone();
        let col = vec![t.one(), t.monomial(1), t.monomial(2)];
        assert_eq!(s.preprocess(4, &col).unwrap(), col[..1].to_vec());
        assert_eq!(s.preprocess(3, &col).unwrap(), col);
        assert_eq!(s.preprocess(2, &col), Err(Error::NotInD(2)));
    }

    #[test]
    fn staircase_leaks_nothing_to_k2_observations() {
        // n = 3, k1 = 2, k2 = 1, D = {2, 3}: α = 2, |S| = |R| = 64.
        let plan = StaircasePlan::gabidulin(3, 3, 2, 1, 0, &[2, 3]).unwrap();
        let s = scheme(plan, 0);
        let mut leaky = 0;
        for bits in 1u32..8 {
            let b = BaseMatrix::from_vec(1, 3, (0..3).map(|i| ((bits >> i) & 1) as u16).collect()).unwrap();
            let rep = s.check_security(&b).unwrap();
            assert!(rep.secure);
            assert_eq!(s.mutual_information_exhaustive(&b, 1 << 20).unwrap(), Rational::from_integer(0));
        }
        for bits in 0u32..64 {
            let b = BaseMatrix::from_vec(2, 3, (0..6).map(|i| ((bits >> i) & 1) as u16).collect()).unwrap();
            let rep = s.check_security(&b).unwrap();
            let mi = s.mutual_information_exhaustive(&b, 1 << 20).unwrap();
            assert_eq!(mi == Rational::from_integer(0), rep.secure);
            leaky += usize::from(!rep.secure);
        }
        assert!(leaky > 0);
    }
}
