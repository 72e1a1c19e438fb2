// SPDX-License-Identifier: Apache-2.0

//! Exact arithmetic for the tower F_p ⊂ F_q ⊂ F_{q^m}.
//!
//! Base-field elements are plain `u16` integers holding the base-p positional
//! encoding of their F_p coordinates (constant term first, i.e. least
//! significant). Extension elements are coefficient vectors over F_q with
//! respect to the power basis of the extension polynomial.

mod base;
pub(crate) mod poly;
mod tower;

pub use base::BaseField;
pub use tower::{ExtElement, FieldTower, TowerPolys};

/// Largest supported base field order.
pub const MAX_BASE_ORDER: u32 = 1 << 16;
/// Largest supported extension degree.
pub const MAX_EXT_DEGREE: usize = 128;

/// An element of F_q.
pub type Fq = u16;

/// Minimal field interface shared by F_p, F_q and F_{q^m} so that polynomial
/// and matrix routines are written once.
pub trait Field {
    type Elem: Clone + PartialEq + Eq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Number of elements.
    fn order(&self) -> u128;

    /// `acc -= f * x`
    fn sub_mul_assign(&self, acc: &mut Self::Elem, f: &Self::Elem, x: &Self::Elem) {
        let prod = self.mul(f, x);
        *acc = self.sub(acc, &prod);
    }

    /// `acc += f * x`
    fn add_mul_assign(&self, acc: &mut Self::Elem, f: &Self::Elem, x: &Self::Elem) {
        let prod = self.mul(f, x);
        *acc = self.add(acc, &prod);
    }
}

/// The prime field F_p, used only while bootstrapping [`BaseField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PrimeField {
    pub p: u32,
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u32) -> u32 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut result = 1u64;
        let mut base = *a as u64;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            e >>= 1;
        }
        Some(result as u32)
    }
    fn order(&self) -> u128 {
        self.p as u128
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
