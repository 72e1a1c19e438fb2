// SPDX-License-Identifier: Apache-2.0

//! Coherent error-and-erasure decoding of a coset of C2 inside C.
//!
//! The receiver knows A. Linearly dependent rows of A are dropped first, which
//! leaves d = rank(A) observations; the code punctured through A is again a
//! code of length d. With no errors to correct the message follows from one
//! linear solve. For Gabidulin codes, y' = (r|s)·G·Aᵀ is the evaluation of
//! f(x) = Σ u_i x^{q^i} at the points g' = A·g, so a Welch–Berlekamp key
//! equation over q-polynomials corrects up to (d − k)/2 rank errors.

use std::sync::Arc;

use super::{Family, LinearCode};
use crate::error::{DecodeFailure, Error, Result};
use crate::field::{ExtElement, FieldTower};
use crate::linearized::LinPoly;
use crate::matrix::{self, BaseMatrix, ExtMatrix, LeftSolver, Matrix};
use crate::phi;

#[derive(Clone, Debug)]
struct WelchBerlekamp {
    k: usize,
    /// powers[i][b] = g'_i^{q^b} for b < k + t.
    powers: Vec<Vec<ExtElement>>,
}

#[derive(Clone, Debug)]
enum Strategy {
    Linear(LeftSolver<ExtElement>),
    Gabidulin(WelchBerlekamp),
    /// Product code with every observation inside one factor.
    Blockwise { l: usize, blocks: Vec<(Vec<usize>, WelchBerlekamp)> },
    BruteForce { observed: ExtMatrix, budget: u128 },
}

/// Decoder for one (code, k2, A, t), reusable across many received rows.
#[derive(Clone, Debug)]
pub struct CosetDecoder {
    tower: Arc<FieldTower>,
    k: usize,
    k2: usize,
    t: usize,
    rows: Vec<usize>,
    strategy: Strategy,
}

fn observed_points(
    tower: &FieldTower,
    points: &[ExtElement],
    a: &BaseMatrix,
    cols: std::ops::Range<usize>,
) -> Vec<ExtElement> {
    (0..a.rows())
        .map(|i| {
            let mut acc = tower.zero();
            for (p, j) in points.iter().zip(cols.clone()) {
                tower.add_scaled_assign(&mut acc, *a.get(i, j), p);
            }
            acc
        })
        .collect()
}

impl WelchBerlekamp {
    fn new(tower: &FieldTower, points: &[ExtElement], k: usize, t: usize) -> Self {
        let powers = points
            .iter()
            .map(|g| {
                let mut row = Vec::with_capacity(k + t);
                let mut cur = g.clone();
                for b in 0..k + t {
                    if b > 0 {
                        cur = tower.frobenius(&cur, 1);
                    }
                    row.push(cur.clone());
                }
                row
            })
            .collect();
        WelchBerlekamp { k, powers }
    }

    fn decode(&self, tower: &FieldTower, y: &[ExtElement], t: usize) -> Result<Vec<ExtElement>> {
        let d = y.len();
        let k = self.k;
        let width = (t + 1) + (k + t);
        let mut sys = matrix::zeros(tower, d, width);
        for (i, yi) in y.iter().enumerate() {
            let mut cur = yi.clone();
            for a in 0..=t {
                if a > 0 {
                    cur = tower.frobenius(&cur, 1);
                }
                sys.set(i, a, cur.clone());
            }
            for b in 0..k + t {
                sys.set(i, t + 1 + b, tower.neg(&self.powers[i][b]));
            }
        }
        let kernel = matrix::null_space(tower, &sys);
        if kernel.rows() == 0 {
            return Err(Error::decode(DecodeFailure::NoLocator));
        }
        let sol = kernel.row(0);
        let v = LinPoly::new(sol[..=t].to_vec());
        let n = LinPoly::new(sol[t + 1..].to_vec());
        let (quot, rem) =
            n.left_divide(tower, &v).ok_or(Error::decode(DecodeFailure::NoLocator))?;
        if !rem.is_zero() {
            return Err(Error::decode(DecodeFailure::DivisionRemainder));
        }
        if quot.coeffs().len() > k {
            return Err(Error::decode(DecodeFailure::Inconsistent));
        }
        let mut f = quot.coeffs().to_vec();
        f.resize(k, tower.zero());
        let residual: Vec<ExtElement> = (0..d)
            .map(|i| {
                let mut c = tower.zero();
                for (b, fb) in f.iter().enumerate() {
                    if !fb.is_zero() {
                        tower.add_assign(&mut c, &tower.mul(fb, &self.powers[i][b]));
                    }
                }
                tower.sub(&y[i], &c)
            })
            .collect();
        let rank = phi::rank_q(tower, &Matrix::from_vec(1, d, residual)?);
        if rank > t {
            return Err(Error::decode(DecodeFailure::ResidualTooLarge { rank, bound: t }));
        }
        Ok(f)
    }
}

/// Result of the exhaustive nearest-coset search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceOutcome {
    /// Smallest rank_q of y − u·G·Aᵀ over all messages u.
    pub min_rank: usize,
    /// The secret part of the minimizers when they all agree on it.
    pub secret: Option<Vec<ExtElement>>,
}

fn brute_force(
    tower: &FieldTower,
    observed: &ExtMatrix,
    k2: usize,
    y: &[ExtElement],
    budget: u128,
) -> Result<BruteForceOutcome> {
    let k = observed.rows();
    let d = observed.cols();
    let per = tower.ext_order().unwrap_or(u128::MAX);
    let total = (0..k)
        .try_fold(1u128, |acc, _| acc.checked_mul(per))
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::BudgetExceeded(format!("(q^m)^{k} candidate messages")))?;
    let mut best: Option<(usize, Option<Vec<ExtElement>>)> = None;
    let mut u = vec![tower.zero(); k];
    for idx in 0..total {
        let mut rest = idx;
        for slot in u.iter_mut() {
            *slot = tower.element_from_index(rest % per);
            rest /= per;
        }
        let mut residual = y.to_vec();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, r) in residual.iter_mut().enumerate() {
                tower.sub_assign(r, &tower.mul(ui, observed.get(i, j)));
            }
        }
        let rank = phi::rank_q(tower, &Matrix::from_vec(1, d, residual)?);
        let s = &u[k2..];
        match &mut best {
            Some((r, secret)) if rank == *r => {
                if secret.as_deref() != Some(s) {
                    *secret = None;
                }
            }
            Some((r, _)) if rank > *r => {}
            _ => best = Some((rank, Some(s.to_vec()))),
        }
    }
    let (min_rank, secret) = best.expect("at least the zero message");
    Ok(BruteForceOutcome { min_rank, secret })
}

/// Reference decoder: enumerate every message u = (r|s), minimize
/// rank_q(y − u·G·Aᵀ) and report the secret part shared by all minimizers.
pub fn nearest_coset_bruteforce(
    code: &LinearCode,
    k2: usize,
    y: &[ExtElement],
    a: &BaseMatrix,
    budget: u128,
) -> Result<BruteForceOutcome> {
    if a.cols() != code.n() || y.len() != a.rows() {
        return Err(crate::error::dims("received length", a.rows(), y.len()));
    }
    let observed = phi::matmul_mixed(code.tower(), code.generator(), a)?;
    brute_force(code.tower(), &observed, k2, y, budget)
}

impl CosetDecoder {
    /// Prepares decoding of the secret part (message coordinates `k2..k`) of
    /// received words `y = u·G·Aᵀ + e` with rank_q(e) ≤ `t`.
    pub fn new(code: &LinearCode, k2: usize, a: &BaseMatrix, t: usize) -> Result<Self> {
        Self::with_budget(code, k2, a, t, super::DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn with_budget(
        code: &LinearCode,
        k2: usize,
        a: &BaseMatrix,
        t: usize,
        budget: u128,
    ) -> Result<Self> {
        let tower = code.tower().clone();
        let k = code.dim();
        if a.cols() != code.n() {
            return Err(crate::error::dims("columns of A", code.n(), a.cols()));
        }
        if k2 > k {
            return Err(crate::error::dims("k2 at most k", k, k2));
        }
        let rows = matrix::independent_rows(tower.base(), a);
        let a_red = a.select_rows(&rows);
        let d = rows.len();
        let capability = || Error::decode(DecodeFailure::CapabilityExceeded { t, d, k });
        let strategy = if t == 0 {
            let observed = phi::matmul_mixed(&tower, code.generator(), &a_red)?;
            let solver = LeftSolver::new(&*tower, &observed);
            let ambiguous = (0..solver.kernel().rows())
                .any(|r| solver.kernel().row(r)[k2..].iter().any(|x| !x.is_zero()));
            if ambiguous {
                return Err(Error::decode(DecodeFailure::Ambiguous));
            }
            Strategy::Linear(solver)
        } else {
            match code.family() {
                Family::Gabidulin { points } => {
                    if d < k + 2 * t {
                        return Err(capability());
                    }
                    let pts = observed_points(&tower, points, &a_red, 0..code.n());
                    Strategy::Gabidulin(WelchBerlekamp::new(&tower, &pts, k, t))
                }
                Family::Product { points, l } => {
                    let m = points.len();
                    let kin = code.inner_dim();
                    match Self::split_blocks(&a_red, *l, m) {
                        Some(groups) => {
                            let mut blocks = Vec::with_capacity(*l);
                            for (b, idx) in groups.into_iter().enumerate() {
                                if idx.len() < kin + 2 * t {
                                    return Err(capability());
                                }
                                let sub = a_red.select_rows(&idx);
                                let pts = observed_points(&tower, points, &sub, b * m..(b + 1) * m);
                                blocks.push((idx, WelchBerlekamp::new(&tower, &pts, kin, t)));
                            }
                            Strategy::Blockwise { l: *l, blocks }
                        }
                        None => Self::brute_strategy(&tower, code, &a_red, budget)?,
                    }
                }
                Family::Generic => Self::brute_strategy(&tower, code, &a_red, budget)?,
            }
        };
        Ok(CosetDecoder { tower, k, k2, t, rows, strategy })
    }

    fn brute_strategy(
        tower: &FieldTower,
        code: &LinearCode,
        a_red: &BaseMatrix,
        budget: u128,
    ) -> Result<Strategy> {
        let per = tower.ext_order().unwrap_or(u128::MAX);
        let fits = (0..code.dim())
            .try_fold(1u128, |acc, _| acc.checked_mul(per))
            .is_some_and(|t| t <= budget);
        if !fits {
            return Err(Error::Unsupported(
                "error correction for this code and erasure pattern needs exhaustive search \
                 beyond the budget"
                    .into(),
            ));
        }
        let observed = phi::matmul_mixed(tower, code.generator(), a_red)?;
        Ok(Strategy::BruteForce { observed, budget })
    }

    /// Row indices grouped by the single factor each row of A touches.
    fn split_blocks(a: &BaseMatrix, l: usize, m: usize) -> Option<Vec<Vec<usize>>> {
        let mut groups = vec![Vec::new(); l];
        for i in 0..a.rows() {
            let row = a.row(i);
            let mut owner = None;
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    match owner {
                        None => owner = Some(j / m),
                        Some(b) if b != j / m => return None,
                        _ => {}
                    }
                }
            }
            groups[owner?].push(i);
        }
        Some(groups)
    }

    /// Number of independent observations used.
    pub fn observed(&self) -> usize {
        self.rows.len()
    }

    /// Indices of the rows of A kept after dropping dependent ones.
    pub fn used_rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Full message u (length k) for one received word; for t = 0 with a
    /// non-injective observation the free coordinates of r are set to zero.
    pub fn decode_message(&self, y: &[ExtElement]) -> Result<Vec<ExtElement>> {
        let tower = &*self.tower;
        let y_red: Vec<ExtElement> = self.rows.iter().map(|&i| y[i].clone()).collect();
        match &self.strategy {
            Strategy::Linear(solver) => solver
                .solve(tower, &y_red)
                .ok_or(Error::decode(DecodeFailure::Inconsistent)),
            Strategy::Gabidulin(wb) => wb.decode(tower, &y_red, self.t),
            Strategy::Blockwise { l, blocks } => {
                let mut u = vec![tower.zero(); self.k];
                for (b, (idx, wb)) in blocks.iter().enumerate() {
                    let yb: Vec<ExtElement> = idx.iter().map(|&i| y_red[i].clone()).collect();
                    for (i, fi) in wb.decode(tower, &yb, self.t)?.into_iter().enumerate() {
                        u[i * l + b] = fi;
                    }
                }
                Ok(u)
            }
            Strategy::BruteForce { observed, budget } => {
                let out = brute_force(tower, observed, 0, &y_red, *budget)?;
                if out.min_rank > self.t {
                    return Err(Error::decode(DecodeFailure::Inconsistent));
                }
                out.secret.ok_or(Error::decode(DecodeFailure::Ambiguous))
            }
        }
    }

    /// Secret part u[k2..k] for one received word of length N.
    pub fn decode(&self, y: &[ExtElement]) -> Result<Vec<ExtElement>> {
        if let Strategy::BruteForce { observed, budget } = &self.strategy {
            let y_red: Vec<ExtElement> = self.rows.iter().map(|&i| y[i].clone()).collect();
            let out = brute_force(&self.tower, observed, self.k2, &y_red, *budget)?;
            if out.min_rank > self.t {
                return Err(Error::decode(DecodeFailure::Inconsistent));
            }
            return out.secret.ok_or(Error::decode(DecodeFailure::Ambiguous));
        }
        let mut u = self.decode_message(y)?;
        Ok(u.split_off(self.k2))
    }

    /// Row-wise [`CosetDecoder::decode`].
    pub fn decode_rows(&self, y: &ExtMatrix) -> Result<ExtMatrix> {
        let ell = self.k - self.k2;
        let mut out = Vec::with_capacity(y.rows() * ell);
        for i in 0..y.rows() {
            out.extend(self.decode(y.row(i))?);
        }
        Matrix::from_vec(y.rows(), ell, out)
    }
}
