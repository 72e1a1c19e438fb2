// SPDX-License-Identifier: Apache-2.0

use rand::Rng;
use smallvec::{smallvec, SmallVec};

use super::base::first_irreducible;
use super::{poly, BaseField, Field, Fq, MAX_EXT_DEGREE};
use crate::error::{Error, Result};
use crate::matrix::{self, BaseMatrix};

/// An element of F_{q^m}: coordinates over F_q in the power basis
/// {1, x, …, x^{m−1}} of the extension polynomial.
#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement(SmallVec<[Fq; 8]>);

// SmallVec's derived clone goes through an iterator; a slice copy is far cheaper.
impl Clone for ExtElement {
    fn clone(&self) -> Self {
        ExtElement(SmallVec::from_slice(&self.0))
    }
}

impl ExtElement {
    pub fn coeffs(&self) -> &[Fq] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Explicit defining polynomials of a tower, as stored in file headers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerPolys {
    /// Monic, degree s, coefficients in F_p, constant term first.
    pub base_poly: Vec<u32>,
    /// Monic, degree m, coefficients in F_q (integer encoding), constant term first.
    pub ext_poly: Vec<Fq>,
}

/// Arithmetic context for F_q ⊂ F_{q^m} together with the fixed F_q-basis
/// γ_1..γ_m used by the coordinate expansion.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: BaseField,
    m: usize,
    ext_poly: Vec<Fq>,
    /// x^m ≡ Σ c_k x^k: the nonzero (k, c_k).
    reduction: Vec<(usize, Fq)>,
    /// Images of x^i under a ↦ a^q.
    frob: Vec<ExtElement>,
    /// Images of x^i under a ↦ a^{q^{m−1}}, the inverse Frobenius.
    frob_inv: Vec<ExtElement>,
    basis: Vec<ExtElement>,
    /// Power coordinates → γ coordinates (m×m), `None` for the power basis.
    to_basis: Option<BaseMatrix>,
    small: Option<SmallTables>,
}

/// Fields with at most this many elements multiply through log tables.
const SMALL_FIELD_LIMIT: u128 = 1 << 16;

/// Log/antilog tables of F_{q^m}, keyed by `index_of`.
#[derive(Clone, Debug)]
struct SmallTables {
    log: Vec<u32>,
    /// Index of g^k for 0 ≤ k < 2(q^m − 1).
    exp: Vec<u32>,
    elems: Vec<ExtElement>,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.m == other.m
            && self.ext_poly == other.ext_poly
            && self.basis == other.basis
    }
}
impl Eq for FieldTower {}

impl FieldTower {
    /// Builds the tower F_{p^s} ⊂ F_{p^{s·m}} with the power basis.
    ///
    /// Without explicit polynomials, the lexicographically first monic
    /// irreducible of each degree is used, which makes the construction
    /// reproducible from `(p, s, m)` alone.
    pub fn new(p: u32, s: u32, m: usize, polys: Option<&TowerPolys>) -> Result<Self> {
        if m == 0 || m > MAX_EXT_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "extension degree m = {m} outside 1..={MAX_EXT_DEGREE}"
            )));
        }
        let base = BaseField::new(p, s, polys.map(|t| t.base_poly.as_slice()))?;
        let ext_poly = match polys {
            Some(t) => {
                let q = base.size();
                if t.ext_poly.len() != m + 1
                    || t.ext_poly[m] != 1
                    || t.ext_poly.iter().any(|&c| c as u32 >= q)
                {
                    return Err(Error::InvalidParameter(format!(
                        "extension polynomial must be monic of degree {m} over F_{q}"
                    )));
                }
                if !poly::is_irreducible(&base, &t.ext_poly) {
                    return Err(Error::ReduciblePolynomial(format!(
                        "{:?} over F_{}",
                        t.ext_poly, q
                    )));
                }
                t.ext_poly.clone()
            }
            None => first_irreducible(&base, m),
        };
        let reduction = (0..m)
            .filter(|&k| ext_poly[k] != 0)
            .map(|k| (k, base.neg(ext_poly[k])))
            .collect();
        let mut tower = FieldTower {
            base,
            m,
            ext_poly,
            reduction,
            frob: Vec::new(),
            frob_inv: Vec::new(),
            basis: Vec::new(),
            to_basis: None,
            small: None,
        };
        tower.basis = (0..m).map(|i| tower.monomial(i)).collect();
        tower.build_frobenius();
        tower.build_small_tables();
        Ok(tower)
    }

    /// Replaces the power basis by an arbitrary F_q-basis γ_1..γ_m.
    pub fn with_basis(mut self, basis: Vec<ExtElement>) -> Result<Self> {
        if basis.len() != self.m || basis.iter().any(|g| g.0.len() != self.m) {
            return Err(Error::InvalidParameter(format!(
                "basis must contain {} elements of F_(q^{})",
                self.m, self.m
            )));
        }
        // Γ has the power coordinates of γ_u as its u-th column.
        let mut gamma = BaseMatrix::filled(self.m, self.m, 0);
        for (u, g) in basis.iter().enumerate() {
            for (i, &c) in g.0.iter().enumerate() {
                gamma.set(i, u, c);
            }
        }
        let inv = matrix::inverse(&self.base, &gamma).ok_or(Error::DependentBasis)?;
        let is_power = basis.iter().enumerate().all(|(i, g)| *g == self.monomial(i));
        self.to_basis = if is_power { None } else { Some(inv) };
        self.basis = basis;
        Ok(self)
    }

    fn build_frobenius(&mut self) {
        let q = self.base.size() as u128;
        let xq = if self.m == 1 { self.one() } else { self.pow(&self.monomial(1), q) };
        let mut frob = Vec::with_capacity(self.m);
        let mut cur = self.one();
        for _ in 0..self.m {
            frob.push(cur.clone());
            cur = self.mul(&cur, &xq);
        }
        // Frobenius matrix (column i = image of x^i) and its inverse.
        let mut fm = BaseMatrix::filled(self.m, self.m, 0);
        for (i, img) in frob.iter().enumerate() {
            for (r, &c) in img.0.iter().enumerate() {
                fm.set(r, i, c);
            }
        }
        let inv = matrix::inverse(&self.base, &fm).expect("Frobenius is an automorphism");
        self.frob_inv = (0..self.m)
            .map(|i| ExtElement((0..self.m).map(|r| *inv.get(r, i)).collect()))
            .collect();
        self.frob = frob;
    }

    fn build_small_tables(&mut self) {
        let size = match self.ext_order() {
            Some(size) if size <= SMALL_FIELD_LIMIT && size > 2 => size,
            _ => return,
        };
        let order = size - 1;
        let mut primes = Vec::new();
        let mut rest = order;
        let mut f = 2;
        while f * f <= rest {
            if rest % f == 0 {
                primes.push(f);
                while rest % f == 0 {
                    rest /= f;
                }
            }
            f += 1;
        }
        if rest > 1 {
            primes.push(rest);
        }
        let one = self.one();
        let g = (2..size)
            .map(|i| self.element_from_index(i))
            .find(|g| primes.iter().all(|&r| self.pow(g, order / r) != one))
            .expect("multiplicative group of a finite field is cyclic");
        let order = order as usize;
        let mut log = vec![0u32; size as usize];
        let mut exp = vec![0u32; 2 * order];
        let mut cur = one;
        for k in 0..order {
            let idx = self.index_of(&cur) as usize;
            exp[k] = idx as u32;
            exp[k + order] = idx as u32;
            log[idx] = k as u32;
            cur = self.mul_generic(&cur, &g);
        }
        let elems = (0..size).map(|i| self.element_from_index(i)).collect();
        self.small = Some(SmallTables { log, exp, elems });
    }

    fn small_index(&self, a: &ExtElement) -> usize {
        let q = self.q() as usize;
        a.0.iter().rev().fold(0usize, |acc, &c| acc * q + c as usize)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn p(&self) -> u32 {
        self.base.characteristic()
    }

    pub fn s(&self) -> u32 {
        self.base.degree()
    }

    pub fn q(&self) -> u32 {
        self.base.size()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn polys(&self) -> TowerPolys {
        TowerPolys { base_poly: self.base.poly().to_vec(), ext_poly: self.ext_poly.clone() }
    }

    pub fn basis(&self) -> &[ExtElement] {
        &self.basis
    }

    pub fn has_power_basis(&self) -> bool {
        self.to_basis.is_none()
    }

    /// log_2 of the extension field order, for enumeration budgets.
    pub fn ext_bits(&self) -> f64 {
        self.m as f64 * (self.q() as f64).log2()
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement(smallvec![0; self.m])
    }

    pub fn one(&self) -> ExtElement {
        self.from_base(1)
    }

    pub fn from_base(&self, c: Fq) -> ExtElement {
        let mut v: SmallVec<[Fq; 8]> = smallvec![0; self.m];
        v[0] = c;
        ExtElement(v)
    }

    /// x^i in the power basis, i < m.
    pub fn monomial(&self, i: usize) -> ExtElement {
        let mut v: SmallVec<[Fq; 8]> = smallvec![0; self.m];
        v[i] = 1;
        ExtElement(v)
    }

    /// Element from power-basis coordinates.
    pub fn element(&self, coeffs: &[Fq]) -> Result<ExtElement> {
        if coeffs.len() != self.m || coeffs.iter().any(|&c| c as u32 >= self.q()) {
            return Err(Error::InvalidParameter(format!(
                "expected {} coordinates below {}",
                self.m,
                self.q()
            )));
        }
        Ok(ExtElement(coeffs.iter().copied().collect()))
    }

    /// Number of elements of F_{q^m} when it fits in a u128.
    pub fn ext_order(&self) -> Option<u128> {
        (self.q() as u128).checked_pow(self.m as u32)
    }

    /// The element whose power coordinates are the base-q digits of `index`.
    pub fn element_from_index(&self, mut index: u128) -> ExtElement {
        let q = self.q() as u128;
        let mut v: SmallVec<[Fq; 8]> = smallvec![0; self.m];
        for c in v.iter_mut() {
            *c = (index % q) as Fq;
            index /= q;
        }
        ExtElement(v)
    }

    pub fn index_of(&self, a: &ExtElement) -> u128 {
        let q = self.q() as u128;
        a.0.iter().rev().fold(0u128, |acc, &c| acc * q + c as u128)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElement {
        let q = self.q();
        ExtElement((0..self.m).map(|_| rng.gen_range(0..q) as Fq).collect())
    }

    pub fn random_base<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        rng.gen_range(0..self.q()) as Fq
    }

    pub fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let mut out = a.clone();
        self.add_assign(&mut out, b);
        out
    }

    pub fn add_assign(&self, a: &mut ExtElement, b: &ExtElement) {
        if self.p() == 2 {
            for (x, y) in a.0.iter_mut().zip(b.0.iter()) {
                *x ^= y;
            }
        } else {
            for (x, &y) in a.0.iter_mut().zip(b.0.iter()) {
                *x = self.base.add(*x, y);
            }
        }
    }

    pub fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let mut out = a.clone();
        self.sub_assign(&mut out, b);
        out
    }

    pub fn sub_assign(&self, a: &mut ExtElement, b: &ExtElement) {
        if self.p() == 2 {
            self.add_assign(a, b);
        } else {
            for (x, &y) in a.0.iter_mut().zip(b.0.iter()) {
                *x = self.base.sub(*x, y);
            }
        }
    }

    pub fn neg(&self, a: &ExtElement) -> ExtElement {
        ExtElement(a.0.iter().map(|&x| self.base.neg(x)).collect())
    }

    /// F_q-scalar multiple `c·a`.
    pub fn scale(&self, c: Fq, a: &ExtElement) -> ExtElement {
        ExtElement(a.0.iter().map(|&x| self.base.mul(c, x)).collect())
    }

    /// `acc += c·a` for an F_q scalar `c`.
    pub fn add_scaled_assign(&self, acc: &mut ExtElement, c: Fq, a: &ExtElement) {
        if c == 0 {
            return;
        }
        if c == 1 {
            return self.add_assign(acc, a);
        }
        for (x, &y) in acc.0.iter_mut().zip(a.0.iter()) {
            *x = self.base.add(*x, self.base.mul(c, y));
        }
    }

    pub fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        match &self.small {
            Some(t) => self.table_product(t, a, b).cloned().unwrap_or_else(|| self.zero()),
            None => self.mul_generic(a, b),
        }
    }

    /// The table entry for `a·b`, or `None` when the product is zero.
    fn table_product<'a>(&self, t: &'a SmallTables, a: &ExtElement, b: &ExtElement) -> Option<&'a ExtElement> {
        let (ia, ib) = (self.small_index(a), self.small_index(b));
        if ia == 0 || ib == 0 {
            return None;
        }
        Some(&t.elems[t.exp[(t.log[ia] + t.log[ib]) as usize] as usize])
    }

    /// Schoolbook product followed by reduction modulo the extension polynomial.
    fn mul_generic(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let m = self.m;
        let base = &self.base;
        let mut prod: SmallVec<[Fq; 16]> = smallvec![0; 2 * m - 1];
        let logs: SmallVec<[u32; 8]> =
            b.0.iter().map(|&x| if x == 0 { u32::MAX } else { base.log(x) }).collect();
        let char2 = base.characteristic() == 2;
        for (i, &ai) in a.0.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let la = base.log(ai);
            let row = &mut prod[i..i + m];
            for (slot, &lb) in row.iter_mut().zip(logs.iter()) {
                if lb != u32::MAX {
                    let t = base.exp(la + lb);
                    *slot = if char2 { *slot ^ t } else { base.add(*slot, t) };
                }
            }
        }
        for d in (m..2 * m - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for &(k, rk) in &self.reduction {
                let t = base.mul(c, rk);
                let slot = &mut prod[d - m + k];
                *slot = if char2 { *slot ^ t } else { base.add(*slot, t) };
            }
        }
        ExtElement(SmallVec::from_slice(&prod[..m]))
    }

    pub fn square(&self, a: &ExtElement) -> ExtElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &ExtElement) -> Result<ExtElement> {
        if let Some(t) = &self.small {
            let ia = self.small_index(a);
            if ia == 0 {
                return Err(Error::ZeroInverse);
            }
            let order = t.exp.len() / 2;
            return Ok(t.elems[t.exp[(order - t.log[ia] as usize) % order] as usize].clone());
        }
        let mut v: Vec<Fq> = a.0.to_vec();
        poly::trim(&self.base, &mut v);
        let mut r = poly::inverse_mod(&self.base, &v, &self.ext_poly).ok_or(Error::ZeroInverse)?;
        r.resize(self.m, 0);
        Ok(ExtElement(r.into_iter().collect()))
    }

    pub fn pow(&self, a: &ExtElement, mut e: u128) -> ExtElement {
        let mut result = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.square(&b);
            }
        }
        result
    }

    fn apply_linear(&self, images: &[ExtElement], a: &ExtElement) -> ExtElement {
        let mut out = self.zero();
        for (&c, img) in a.0.iter().zip(images) {
            self.add_scaled_assign(&mut out, c, img);
        }
        out
    }

    /// a^{q^i}.
    pub fn frobenius(&self, a: &ExtElement, i: usize) -> ExtElement {
        let mut out = a.clone();
        for _ in 0..i % self.m {
            out = self.apply_linear(&self.frob, &out);
        }
        out
    }

    /// a^{q^{−i}}, the inverse of [`FieldTower::frobenius`].
    pub fn frobenius_inv(&self, a: &ExtElement, i: usize) -> ExtElement {
        let mut out = a.clone();
        for _ in 0..i % self.m {
            out = self.apply_linear(&self.frob_inv, &out);
        }
        out
    }

    /// Coordinates of `a` with respect to γ_1..γ_m.
    pub fn coordinates(&self, a: &ExtElement) -> SmallVec<[Fq; 8]> {
        match &self.to_basis {
            None => a.0.clone(),
            Some(t) => (0..self.m)
                .map(|u| {
                    (0..self.m).fold(0, |acc, i| {
                        self.base.add(acc, self.base.mul(*t.get(u, i), a.0[i]))
                    })
                })
                .collect(),
        }
    }

    /// Σ d_u γ_u.
    pub fn from_coordinates(&self, d: &[Fq]) -> ExtElement {
        if self.to_basis.is_none() {
            return ExtElement(d.iter().copied().collect());
        }
        let mut out = self.zero();
        for (&c, g) in d.iter().zip(&self.basis) {
            self.add_scaled_assign(&mut out, c, g);
        }
        out
    }
}

impl Field for FieldTower {
    type Elem = ExtElement;

    fn zero(&self) -> ExtElement {
        FieldTower::zero(self)
    }
    fn one(&self) -> ExtElement {
        FieldTower::one(self)
    }
    fn is_zero(&self, a: &ExtElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        FieldTower::add(self, a, b)
    }
    fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        FieldTower::sub(self, a, b)
    }
    fn neg(&self, a: &ExtElement) -> ExtElement {
        FieldTower::neg(self, a)
    }
    fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        FieldTower::mul(self, a, b)
    }
    fn inv(&self, a: &ExtElement) -> Option<ExtElement> {
        FieldTower::inv(self, a).ok()
    }
    /// Saturates at `u128::MAX` for very large towers.
    fn order(&self) -> u128 {
        self.ext_order().unwrap_or(u128::MAX)
    }
    fn sub_mul_assign(&self, acc: &mut ExtElement, f: &ExtElement, x: &ExtElement) {
        match &self.small {
            Some(t) => {
                if let Some(prod) = self.table_product(t, f, x) {
                    self.sub_assign(acc, prod);
                }
            }
            None => self.sub_assign(acc, &self.mul_generic(f, x)),
        }
    }
    fn add_mul_assign(&self, acc: &mut ExtElement, f: &ExtElement, x: &ExtElement) {
        match &self.small {
            Some(t) => {
                if let Some(prod) = self.table_product(t, f, x) {
                    self.add_assign(acc, prod);
                }
            }
            None => self.add_assign(acc, &self.mul_generic(f, x)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f8() -> FieldTower {
        FieldTower::new(2, 1, 3, None).unwrap()
    }

    #[test]
    fn degenerate_tower() {
        let t = FieldTower::new(2, 1, 1, None).unwrap();
        assert_eq!(t.q(), 2);
        assert_eq!(t.m(), 1);
        assert_eq!(t.ext_order(), Some(2));
        let one = t.one();
        assert_eq!(t.mul(&one, &one), one);
    }

    #[test]
    fn lexicographically_first_polynomials() {
        let t = f8();
        // x^3 + x + 1 precedes x^3 + x^2 + 1
        assert_eq!(t.polys().ext_poly, vec![1, 1, 0, 1]);
        let t = FieldTower::new(2, 8, 1, None).unwrap();
        // 0x11B: x^8 + x^4 + x^3 + x + 1
        assert_eq!(t.polys().base_poly, vec![1, 1, 0, 1, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn example_one_tower() {
        let t = FieldTower::new(2, 8, 64, None).unwrap();
        assert_eq!(t.q(), 256);
        assert_eq!(t.m(), 64);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = t.random(&mut rng);
        let b = t.random(&mut rng);
        let ab = t.mul(&a, &b);
        assert_eq!(t.mul(&ab, &t.inv(&b).unwrap()), a);
        assert_eq!(t.frobenius(&a, 64), a);
    }

    #[test]
    fn f4_matches_the_unique_field_of_order_four() {
        // Brute-force axiom check: F_4 = {0, 1, w, w+1} with w^2 = w + 1.
        let t = FieldTower::new(2, 1, 2, None).unwrap();
        let els: Vec<_> = (0..4).map(|i| t.element_from_index(i)).collect();
        let w = &els[2];
        assert_eq!(t.mul(w, w), t.add(w, &t.one()));
        for a in &els {
            assert_eq!(t.mul(a, &t.one()), *a);
            for b in &els {
                assert_eq!(t.mul(a, b), t.mul(b, a));
                for c in &els {
                    let lhs = t.mul(a, &t.add(b, c));
                    let rhs = t.add(&t.mul(a, b), &t.mul(a, c));
                    assert_eq!(lhs, rhs);
                    assert_eq!(t.mul(&t.mul(a, b), c), t.mul(a, &t.mul(b, c)));
                }
            }
            if !a.is_zero() {
                assert_eq!(t.mul(a, &t.inv(a).unwrap()), t.one());
            }
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        let t = f8();
        assert!(matches!(t.inv(&t.zero()), Err(Error::ZeroInverse)));
    }

    #[test]
    fn frobenius_is_additive_and_periodic_over_f8() {
        let t = f8();
        for i in 0..8 {
            let a = t.element_from_index(i);
            assert_eq!(t.frobenius(&a, 0), a);
            assert_eq!(t.frobenius(&a, 3), a);
            assert_eq!(t.frobenius(&a, 1), t.pow(&a, 2));
            assert_eq!(t.frobenius_inv(&t.frobenius(&a, 2), 2), a);
            for j in 0..8 {
                let b = t.element_from_index(j);
                for k in 0..4 {
                    assert_eq!(
                        t.frobenius(&t.add(&a, &b), k),
                        t.add(&t.frobenius(&a, k), &t.frobenius(&b, k))
                    );
                }
            }
        }
    }

    #[test]
    fn frobenius_has_order_exactly_m() {
        // Some element of F_{2^4} is moved by every proper power.
        let t = FieldTower::new(2, 1, 4, None).unwrap();
        let x = t.monomial(1);
        for i in 1..4 {
            assert_ne!(t.frobenius(&x, i), x);
        }
        assert_eq!(t.frobenius(&x, 4), x);
    }

    #[test]
    fn odd_characteristic_tower() {
        // F_9 ⊂ F_{9^2}
        let t = FieldTower::new(3, 2, 2, None).unwrap();
        assert_eq!(t.q(), 9);
        let order = t.ext_order().unwrap();
        assert_eq!(order, 81);
        for i in 1..order {
            let a = t.element_from_index(i);
            assert_eq!(t.mul(&a, &t.inv(&a).unwrap()), t.one());
            assert_eq!(t.pow(&a, order - 1), t.one());
            assert_eq!(t.add(&a, &t.neg(&a)), t.zero());
        }
    }

    #[test]
    fn rejects_reducible_and_dependent_inputs() {
        let bad = TowerPolys { base_poly: vec![0, 1], ext_poly: vec![1, 0, 1] };
        assert!(matches!(FieldTower::new(2, 1, 2, Some(&bad)), Err(Error::ReduciblePolynomial(_))));
        let t = f8();
        let one = t.one();
        let dep = vec![one.clone(), one.clone(), t.monomial(2)];
        assert!(matches!(t.clone().with_basis(dep), Err(Error::DependentBasis)));
        assert!(FieldTower::new(4, 1, 2, None).is_err());
        assert!(FieldTower::new(2, 17, 1, None).is_err());
    }

    #[test]
    fn custom_basis_coordinates_round_trip() {
        let t = f8();
        let b = vec![t.one(), t.add(&t.one(), &t.monomial(1)), t.monomial(2)];
        let t = t.with_basis(b).unwrap();
        assert!(!t.has_power_basis());
        for i in 0..8 {
            let a = t.element_from_index(i);
            let d = t.coordinates(&a);
            assert_eq!(t.from_coordinates(&d), a);
        }
    }

    #[test]
    fn log_tables_agree_with_schoolbook_product() {
        for (p, s, m) in [(2, 1, 4), (3, 2, 2), (2, 2, 3), (5, 1, 3)] {
            let t = FieldTower::new(p, s, m, None).unwrap();
            assert!(t.small.is_some());
            let size = t.ext_order().unwrap();
            for i in 0..size {
                let a = t.element_from_index(i);
                for j in 0..size {
                    let b = t.element_from_index(j);
                    assert_eq!(t.mul(&a, &b), t.mul_generic(&a, &b));
                }
                if i > 0 {
                    assert_eq!(t.mul_generic(&a, &t.inv(&a).unwrap()), t.one());
                }
            }
        }
        assert!(FieldTower::new(2, 8, 3, None).unwrap().small.is_none());
    }
}
