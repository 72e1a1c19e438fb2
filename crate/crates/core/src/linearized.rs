// SPDX-License-Identifier: Apache-2.0

//! Linearized (q-)polynomials f(x) = Σ f_i x^{q^i} over F_{q^m}.
//!
//! Multiplication is composition, which is not commutative; division is
//! always on the left, `n = v ∘ quot + rem`.

use crate::field::{ExtElement, FieldTower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinPoly {
    coeffs: Vec<ExtElement>,
}

impl LinPoly {
    pub fn new(mut coeffs: Vec<ExtElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LinPoly { coeffs }
    }

    pub fn zero() -> Self {
        LinPoly { coeffs: Vec::new() }
    }

    /// x, the identity map.
    pub fn identity(tower: &FieldTower) -> Self {
        LinPoly { coeffs: vec![tower.one()] }
    }

    pub fn coeffs(&self) -> &[ExtElement] {
        &self.coeffs
    }

    /// q-degree, `None` for the zero polynomial.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, tower: &FieldTower, x: &ExtElement) -> ExtElement {
        let mut acc = tower.zero();
        let mut xp = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = tower.frobenius(&xp, 1);
            }
            if !c.is_zero() {
                tower.add_assign(&mut acc, &tower.mul(c, &xp));
            }
        }
        acc
    }

    pub fn add(&self, tower: &FieldTower, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let z = tower.zero();
        let coeffs = (0..len)
            .map(|i| {
                tower.add(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z))
            })
            .collect();
        LinPoly::new(coeffs)
    }

    /// `self ∘ other`, i.e. x ↦ self(other(x)).
    pub fn compose(&self, tower: &FieldTower, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LinPoly::zero();
        }
        let mut out = vec![tower.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, va) in self.coeffs.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            for (b, fb) in other.coeffs.iter().enumerate() {
                let term = tower.mul(va, &tower.frobenius(fb, a));
                tower.add_assign(&mut out[a + b], &term);
            }
        }
        LinPoly::new(out)
    }

    /// Left division: returns `(quot, rem)` with `self = v ∘ quot + rem` and
    /// q-deg(rem) < q-deg(v). `None` when `v` is zero.
    pub fn left_divide(&self, tower: &FieldTower, v: &Self) -> Option<(Self, Self)> {
        let tau = v.q_degree()?;
        let lead_inv = tower.inv(&v.coeffs[tau]).ok()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= tau {
            return Some((LinPoly::zero(), self.clone()));
        }
        let mut quot = vec![tower.zero(); rem.len() - tau];
        for k in (0..quot.len()).rev() {
            let top = &rem[tau + k];
            if top.is_zero() {
                continue;
            }
            let qk = tower.frobenius_inv(&tower.mul(top, &lead_inv), tau);
            for (a, va) in v.coeffs.iter().enumerate() {
                if !va.is_zero() {
                    let term = tower.mul(va, &tower.frobenius(&qk, a));
                    tower.sub_assign(&mut rem[a + k], &term);
                }
            }
            quot[k] = qk;
        }
        rem.truncate(tau);
        Some((LinPoly::new(quot), LinPoly::new(rem)))
    }
}
