// SPDX-License-Identifier: Apache-2.0

//! Channel samplers: the coherent linearized wiretap channel
//! Y = X·Aᵀ + E, W = X·Bᵀ, and crisscross errors on the stored F_q matrix.

use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;
use rand::seq::index::sample;
use rand::Rng;

use crate::error::{dims, Error, Result};
use crate::field::{BaseField, FieldTower, Fq};
use crate::matrix::{self, BaseMatrix, ExtMatrix, Matrix};
use crate::phi;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoherentChannelSpec {
    pub n: usize,
    /// Number of received columns N.
    pub big_n: usize,
    pub t: usize,
    pub rho: usize,
    pub mu: usize,
}

impl CoherentChannelSpec {
    pub fn new(n: usize, big_n: usize, t: usize, rho: usize, mu: usize) -> Result<Self> {
        if rho > n || n - rho > big_n {
            return Err(Error::InvalidParameter(format!(
                "rank floor n − ρ = {} cannot be met with N = {big_n} columns",
                n.saturating_sub(rho)
            )));
        }
        Ok(CoherentChannelSpec { n, big_n, t, rho, mu })
    }
}

/// One draw of (A, E, B).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelRealization {
    pub a: BaseMatrix,
    pub e: ExtMatrix,
    pub b: BaseMatrix,
}

fn random_base<R: Rng + ?Sized>(f: &BaseField, rng: &mut R, rows: usize, cols: usize) -> BaseMatrix {
    let q = f.size();
    Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| rng.gen_range(0..q) as Fq).collect())
        .expect("shape")
}

/// Uniform `rows × cols` matrix of full rank min(rows, cols), by rejection.
pub fn random_full_rank<R: Rng + ?Sized>(f: &BaseField, rng: &mut R, rows: usize, cols: usize) -> BaseMatrix {
    loop {
        let a = random_base(f, rng, rows, cols);
        if matrix::rank(f, &a) == rows.min(cols) {
            return a;
        }
    }
}

/// A = L·R with L (N×r) of full column rank and R (r×n) of full row rank,
/// r = n − ρ′ and ρ′ uniform over the admissible deficiencies.
pub fn sample_erasure_matrix<R: Rng + ?Sized>(f: &BaseField, spec: &CoherentChannelSpec, rng: &mut R) -> BaseMatrix {
    let lo = spec.n.saturating_sub(spec.big_n);
    let rho_prime = rng.gen_range(lo..=spec.rho);
    let r = spec.n - rho_prime;
    let a = if r == 0 {
        BaseMatrix::filled(spec.big_n, spec.n, 0)
    } else {
        let l = random_full_rank(f, rng, spec.big_n, r);
        let right = random_full_rank(f, rng, r, spec.n);
        matrix::mul(f, &l, &right).expect("shapes agree")
    };
    debug_assert!(matrix::rank(f, &a) + spec.rho >= spec.n);
    a
}

/// E = φ⁻¹(U·V) with U of size (rows·m)×t and V of size t×cols, both drawn
/// uniformly among full-rank matrices, so rank_q(E) = t.
pub fn sample_rank_error<R: Rng + ?Sized>(
    tower: &FieldTower,
    rows: usize,
    cols: usize,
    t: usize,
    rng: &mut R,
) -> Result<ExtMatrix> {
    let m = tower.m();
    if t > (rows * m).min(cols) {
        return Err(Error::InvalidParameter(format!("rank {t} exceeds min({}, {cols})", rows * m)));
    }
    let u = random_full_rank(tower.base(), rng, rows * m, t);
    let v = random_full_rank(tower.base(), rng, t, cols);
    phi::contract_phi(tower, &matrix::mul(tower.base(), &u, &v)?)
}

pub fn sample_observation<R: Rng + ?Sized>(f: &BaseField, spec: &CoherentChannelSpec, rng: &mut R) -> BaseMatrix {
    random_base(f, rng, spec.mu, spec.n)
}

pub fn sample_realization<R: Rng + ?Sized>(
    tower: &FieldTower,
    spec: &CoherentChannelSpec,
    alpha: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let a = sample_erasure_matrix(tower.base(), spec, rng);
    let e = sample_rank_error(tower, alpha, spec.big_n, spec.t, rng)?;
    let b = sample_observation(tower.base(), spec, rng);
    Ok(ChannelRealization { a, e, b })
}

/// (Y, W) = (X·Aᵀ + E, X·Bᵀ).
pub fn transmit(tower: &FieldTower, x: &ExtMatrix, ch: &ChannelRealization) -> Result<(ExtMatrix, ExtMatrix)> {
    let y = phi::matmul_mixed(tower, x, &ch.a)?;
    if y.shape() != ch.e.shape() {
        return Err(dims("error shape", y.shape(), ch.e.shape()));
    }
    let y = matrix::add(tower, &y, &ch.e)?;
    let w = phi::matmul_mixed(tower, x, &ch.b)?;
    Ok((y, w))
}

/// Rows of the n×n identity indexed by `cols`: contacting exactly those columns.
pub fn selection_matrix(n: usize, cols: &[usize]) -> BaseMatrix {
    let mut p = BaseMatrix::filled(cols.len(), n, 0);
    for (i, &c) in cols.iter().enumerate() {
        p.set(i, c, 1);
    }
    p
}

/// Crisscross weight: the smallest |X| + |Y| such that rows X and columns Y
/// cover every nonzero entry. By König's theorem this is the size of a
/// maximum matching in the bipartite graph of nonzero positions.
pub fn crisscross_weight(e: &BaseMatrix) -> usize {
    let (rows, cols) = e.shape();
    let mut g = UnGraph::<(), ()>::with_capacity(rows + cols, 0);
    let nodes: Vec<_> = (0..rows + cols).map(|_| g.add_node(())).collect();
    for r in 0..rows {
        for c in 0..cols {
            if *e.get(r, c) != 0 {
                g.add_edge(nodes[r], nodes[rows + c], ());
            }
        }
    }
    maximum_matching(&g).len()
}

/// Reference cover search: for every row subset X, the columns still holding
/// a nonzero entry outside X must all be in Y.
pub fn crisscross_weight_bruteforce(e: &BaseMatrix) -> usize {
    let (rows, cols) = e.shape();
    assert!(rows < 24, "row subsets are enumerated");
    (0u32..1 << rows)
        .map(|x| {
            let needed = (0..cols)
                .filter(|&c| (0..rows).any(|r| x >> r & 1 == 0 && *e.get(r, c) != 0))
                .count();
            x.count_ones() as usize + needed
        })
        .min()
        .unwrap_or(0)
}

/// Random values on `x` full rows and `t − x` full columns, x uniform.
pub fn sample_crisscross_error<R: Rng + ?Sized>(
    f: &BaseField,
    rows: usize,
    cols: usize,
    t: usize,
    rng: &mut R,
) -> Result<BaseMatrix> {
    if t > rows + cols {
        return Err(Error::InvalidParameter(format!("crisscross weight {t} exceeds {rows} + {cols}")));
    }
    let x = rng.gen_range(t.saturating_sub(cols)..=t.min(rows));
    let q = f.size();
    let mut e = BaseMatrix::filled(rows, cols, 0);
    for r in sample(rng, rows, x) {
        for c in 0..cols {
            e.set(r, c, rng.gen_range(0..q) as Fq);
        }
    }
    for c in sample(rng, cols, t - x) {
        for r in 0..rows {
            e.set(r, c, rng.gen_range(0..q) as Fq);
        }
    }
    Ok(e)
}

/// rank(E) ≤ wt_c(E): every crisscross pattern is also a rank pattern.
pub fn crisscross_dominance_check(f: &BaseField, e: &BaseMatrix) -> bool {
    matrix::rank(f, e) <= crisscross_weight(e)
}

/// Contacted-column model: I of size n − ρ, chosen uniformly.
pub fn sample_contacted<R: Rng + ?Sized>(n: usize, rho: usize, rng: &mut R) -> Vec<usize> {
    let mut cols = sample(rng, n, n - rho.min(n)).into_vec();
    cols.sort_unstable();
    cols
}
