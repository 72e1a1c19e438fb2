// SPDX-License-Identifier: Apache-2.0

//! F_{q^m}-linear codes: Gabidulin codes, cartesian products of Gabidulin
//! codes, generic codes given by a generator matrix, and nested pairs.
//!
//! Gabidulin generators are Moore matrices with row i = (g_1^{q^i}, …, g_n^{q^i}),
//! so the generator of G_k is the k-row prefix of that of G_{k+1}. The
//! parity-check matrix is again a Moore matrix, over the dual points h.

mod decode;
mod distance;

use std::sync::Arc;

pub use decode::{nearest_coset_bruteforce, BruteForceOutcome, CosetDecoder};
pub use distance::{
    min_rank_distance_bruteforce, relative_min_rank_distance_bruteforce, singleton_exponent,
    DEFAULT_ENUMERATION_BUDGET,
};

use crate::error::{dims, Error, Result};
use crate::field::{ExtElement, FieldTower};
use crate::matrix::{self, ExtMatrix, Matrix};
use crate::phi;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Moore generator over the evaluation points (length n).
    Gabidulin { points: Vec<ExtElement> },
    /// G_k^l: generator row `i·l + b` is Moore row i placed in block b.
    Product { points: Vec<ExtElement>, l: usize },
    Generic,
}

#[derive(Clone, Debug)]
pub struct LinearCode {
    tower: Arc<FieldTower>,
    n: usize,
    generator: ExtMatrix,
    family: Family,
}

/// Moore matrix with row i = points^{q^{shift + i}}; a negative shift uses the
/// inverse Frobenius.
pub fn moore_matrix(
    tower: &FieldTower,
    points: &[ExtElement],
    rows: usize,
    shift: isize,
) -> ExtMatrix {
    let n = points.len();
    let mut out = matrix::zeros(tower, rows, n);
    for (j, g) in points.iter().enumerate() {
        let mut cur = if shift >= 0 {
            tower.frobenius(g, shift as usize)
        } else {
            tower.frobenius_inv(g, shift.unsigned_abs())
        };
        for i in 0..rows {
            if i > 0 {
                cur = tower.frobenius(&cur, 1);
            }
            out.set(i, j, cur.clone());
        }
    }
    out
}

/// Points h such that Moore(h, n−k) is a parity-check matrix of Moore(g, k).
fn dual_points(tower: &FieldTower, points: &[ExtElement], k: usize) -> Vec<ExtElement> {
    let n = points.len();
    let shift = -((n - k) as isize - 1);
    let constraints = moore_matrix(tower, points, n - 1, shift);
    let ns = matrix::null_space(tower, &constraints);
    debug_assert_eq!(ns.rows(), 1, "Moore matrix of independent points has full rank");
    ns.row(0).to_vec()
}

fn product_generator(tower: &FieldTower, points: &[ExtElement], l: usize, k: usize) -> ExtMatrix {
    let m = points.len();
    let inner = moore_matrix(tower, points, k, 0);
    let mut g = matrix::zeros(tower, l * k, l * m);
    for i in 0..k {
        for b in 0..l {
            for j in 0..m {
                g.set(i * l + b, b * m + j, inner.get(i, j).clone());
            }
        }
    }
    g
}

impl LinearCode {
    /// G_k of length n over the first n basis elements γ_1..γ_n.
    pub fn gabidulin(tower: Arc<FieldTower>, n: usize, k: usize) -> Result<Self> {
        if n > tower.m() {
            return Err(Error::InvalidParameter(format!(
                "Gabidulin length n = {n} exceeds m = {}",
                tower.m()
            )));
        }
        let points = tower.basis()[..n].to_vec();
        Self::gabidulin_with_points(tower, points, k)
    }

    /// Gabidulin code over arbitrary F_q-independent evaluation points.
    pub fn gabidulin_with_points(
        tower: Arc<FieldTower>,
        points: Vec<ExtElement>,
        k: usize,
    ) -> Result<Self> {
        let n = points.len();
        if k > n {
            return Err(Error::InvalidParameter(format!("dimension k = {k} exceeds n = {n}")));
        }
        let row = Matrix::from_vec(1, n, points.clone())?;
        if phi::rank_q(&tower, &row) != n {
            return Err(Error::InvalidParameter(
                "evaluation points are not linearly independent over F_q".into(),
            ));
        }
        let generator = moore_matrix(&tower, &points, k, 0);
        Ok(LinearCode { tower, n, generator, family: Family::Gabidulin { points } })
    }

    /// The cartesian product G_k^l ⊂ F_{q^m}^{lm}, each factor a length-m
    /// Gabidulin code over the full basis.
    pub fn product(tower: Arc<FieldTower>, l: usize, k: usize) -> Result<Self> {
        let m = tower.m();
        if l == 0 || k > m {
            return Err(Error::InvalidParameter(format!(
                "product code needs l ≥ 1 and k ≤ m, got l = {l}, k = {k}"
            )));
        }
        let points = tower.basis().to_vec();
        let generator = product_generator(&tower, &points, l, k);
        Ok(LinearCode { tower, n: l * m, generator, family: Family::Product { points, l } })
    }

    /// A code with an arbitrary full-row-rank generator.
    pub fn from_generator(tower: Arc<FieldTower>, generator: ExtMatrix) -> Result<Self> {
        if matrix::rank(&*tower, &generator) != generator.rows() {
            return Err(Error::InvalidParameter("generator rows are dependent".into()));
        }
        Ok(LinearCode { tower, n: generator.cols(), generator, family: Family::Generic })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &ExtMatrix {
        &self.generator
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Dimension of one factor for product codes, the whole dimension otherwise.
    pub fn inner_dim(&self) -> usize {
        match &self.family {
            Family::Product { l, .. } => self.dim() / l,
            _ => self.dim(),
        }
    }

    /// The code spanned by the first `k` generator rows.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k > self.dim() {
            return Err(dims("prefix dimension", self.dim(), k));
        }
        if let Family::Product { l, .. } = &self.family {
            if !k.is_multiple_of(*l) {
                return Err(Error::InvalidParameter(format!(
                    "product code prefix must be a multiple of l = {l}, got {k}"
                )));
            }
        }
        Ok(LinearCode {
            tower: self.tower.clone(),
            n: self.n,
            generator: self.generator.submatrix(0..k, 0..self.n),
            family: self.family.clone(),
        })
    }

    /// `msg·G`.
    pub fn encode(&self, msg: &[ExtElement]) -> Result<Vec<ExtElement>> {
        if msg.len() != self.dim() {
            return Err(dims("message length", self.dim(), msg.len()));
        }
        let row = Matrix::from_vec(1, msg.len(), msg.to_vec())?;
        Ok(self.encode_rows(&row)?.row(0).to_vec())
    }

    /// `M·G` for a matrix of messages, one per row.
    pub fn encode_rows(&self, msgs: &ExtMatrix) -> Result<ExtMatrix> {
        matrix::mul(&*self.tower, msgs, &self.generator)
    }

    pub fn parity(&self) -> ExtMatrix {
        self.dual().generator
    }

    /// The dual code. Gabidulin and product codes stay in their family.
    pub fn dual(&self) -> LinearCode {
        let tower = self.tower.clone();
        match &self.family {
            Family::Gabidulin { points } => {
                let k = self.dim();
                if k == self.n {
                    return LinearCode {
                        generator: matrix::zeros(&*tower, 0, self.n),
                        n: self.n,
                        family: Family::Generic,
                        tower,
                    };
                }
                let h = dual_points(&tower, points, k);
                let generator = moore_matrix(&tower, &h, self.n - k, 0);
                LinearCode { tower, n: self.n, generator, family: Family::Gabidulin { points: h } }
            }
            Family::Product { points, l } => {
                let k = self.inner_dim();
                let m = points.len();
                if k == m {
                    return LinearCode {
                        generator: matrix::zeros(&*tower, 0, self.n),
                        n: self.n,
                        family: Family::Generic,
                        tower,
                    };
                }
                let h = dual_points(&tower, points, k);
                let generator = product_generator(&tower, &h, *l, m - k);
                LinearCode { tower, n: self.n, generator, family: Family::Product { points: h, l: *l } }
            }
            Family::Generic => {
                let generator = matrix::null_space(&*tower, &self.generator);
                LinearCode { tower, n: self.n, generator, family: Family::Generic }
            }
        }
    }

    /// Minimum rank distance known from the family structure: n−k+1 for
    /// Gabidulin codes, m−k+1 for products, `n + 1` for the zero code.
    pub fn designed_distance(&self) -> Option<usize> {
        if self.dim() == 0 {
            return Some(self.n + 1);
        }
        match &self.family {
            Family::Gabidulin { .. } => Some(self.n - self.dim() + 1),
            Family::Product { points, .. } => Some(points.len() - self.inner_dim() + 1),
            Family::Generic => None,
        }
    }

    /// Same row space.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n == other.n && matrix::same_row_space(&*self.tower, &self.generator, &other.generator)
    }

    /// True when every codeword of `other` lies in `self`.
    pub fn contains(&self, other: &LinearCode) -> bool {
        if self.n != other.n {
            return false;
        }
        let stacked = self.generator.vstack(&other.generator).expect("same length");
        matrix::rank(&*self.tower, &stacked) == self.dim()
    }
}

/// Nested pair C2 ⊊ C1 with generator G1 = [G2; G_c].
#[derive(Clone, Debug)]
pub struct CodePair {
    c1: LinearCode,
    k2: usize,
}

impl CodePair {
    /// C2 is the `k2`-row prefix of `c1`.
    pub fn nested(c1: LinearCode, k2: usize) -> Result<Self> {
        if k2 >= c1.dim() {
            return Err(Error::NotNested(format!(
                "k2 = {k2} must be below k1 = {}",
                c1.dim()
            )));
        }
        c1.prefix(k2)?;
        Ok(CodePair { c1, k2 })
    }

    /// Builds the stacked form from two independently given codes. When the
    /// generator of `c2` is already a prefix of that of `c1` the family of
    /// `c1` is kept; otherwise the pair becomes generic with G_c chosen as the
    /// first rows of G1 independent of G2.
    pub fn from_codes(c1: LinearCode, c2: LinearCode) -> Result<Self> {
        if !c1.contains(&c2) || c2.dim() >= c1.dim() {
            return Err(Error::NotNested("C2 is not a proper subcode of C1".into()));
        }
        let k2 = c2.dim();
        if c1.generator.submatrix(0..k2, 0..c1.n) == c2.generator {
            return Self::nested(c1, k2);
        }
        let tower = c1.tower.clone();
        let stacked = c2.generator.vstack(&c1.generator)?;
        let rows = matrix::independent_rows(&*tower, &stacked);
        let g1 = stacked.select_rows(&rows);
        let code = LinearCode::from_generator(tower, g1)?;
        Self::nested(code, k2)
    }

    pub fn c1(&self) -> &LinearCode {
        &self.c1
    }

    pub fn c2(&self) -> LinearCode {
        self.c1.prefix(self.k2).expect("validated at construction")
    }

    pub fn k1(&self) -> usize {
        self.c1.dim()
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    /// ℓ = k1 − k2.
    pub fn ell(&self) -> usize {
        self.k1() - self.k2
    }

    pub fn n(&self) -> usize {
        self.c1.n()
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.c1.tower()
    }

    pub fn gc(&self) -> ExtMatrix {
        self.c1.generator.submatrix(self.k2..self.k1(), 0..self.n())
    }

    /// d_R(C1, C2) when the family determines it.
    pub fn designed_relative_distance(&self) -> Option<usize> {
        match self.c1.family {
            Family::Generic => None,
            _ => self.c1.designed_distance(),
        }
    }

    /// d_R(C2⊥, C1⊥) when the family determines it (k2 + 1 for both MRD
    /// families).
    pub fn designed_security_threshold(&self) -> Option<usize> {
        match self.c1.family {
            Family::Generic => None,
            Family::Gabidulin { .. } => Some(self.k2 + 1),
            Family::Product { l, .. } => Some(self.k2 / l + 1),
        }
    }

    /// The pair (C2⊥, C1⊥) in stacked form.
    pub fn dual_pair(&self) -> Result<CodePair> {
        CodePair::from_codes(self.c2().dual(), self.c1.dual())
    }
}
