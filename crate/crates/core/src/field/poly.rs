// SPDX-License-Identifier: Apache-2.0

//! Dense univariate polynomials over any [`Field`], low-order coefficient
//! first. Only what the tower needs: reduction, gcd, modular powers and the
//! Ben-Or irreducibility test.

use super::Field;

pub(crate) fn trim<F: Field>(f: &F, a: &mut Vec<F::Elem>) {
    while let Some(last) = a.last() {
        if f.is_zero(last) {
            a.pop();
        } else {
            break;
        }
    }
}

/// Degree, `None` for the zero polynomial.
pub(crate) fn degree<F: Field>(f: &F, a: &[F::Elem]) -> Option<usize> {
    a.iter().rposition(|c| !f.is_zero(c))
}

pub(crate) fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
        out.push(f.sub(&x, &y));
    }
    trim(f, &mut out);
    out
}

pub(crate) fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let prod = f.mul(x, y);
            out[i + j] = f.add(&out[i + j], &prod);
        }
    }
    trim(f, &mut out);
    out
}

/// Quotient and remainder. Panics on a zero divisor.
pub(crate) fn divrem<F: Field>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(f, b).expect("division by zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut rem: Vec<F::Elem> = a.to_vec();
    trim(f, &mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![f.zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if f.is_zero(&rem[i]) {
            continue;
        }
        let c = f.mul(&rem[i], &lead_inv);
        for (k, bk) in b[..=db].iter().enumerate() {
            f.sub_mul_assign(&mut rem[i - db + k], &c, bk);
        }
        quot[i - db] = c;
    }
    trim(f, &mut rem);
    trim(f, &mut quot);
    (quot, rem)
}

pub(crate) fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    divrem(f, a, b).1
}

pub(crate) fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// `a^e mod modulus` with square-and-multiply.
pub(crate) fn powmod<F: Field>(
    f: &F,
    a: &[F::Elem],
    mut e: u128,
    modulus: &[F::Elem],
) -> Vec<F::Elem> {
    let mut result = vec![f.one()];
    let mut base = rem(f, a, modulus);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(f, &mul(f, &result, &base), modulus);
        }
        e >>= 1;
        if e > 0 {
            base = rem(f, &mul(f, &base, &base), modulus);
        }
    }
    result
}

/// Ben-Or test: a polynomial of degree d ≥ 1 over F_q is irreducible iff
/// gcd(x^{q^i} − x, f) = 1 for every 1 ≤ i ≤ d/2.
pub(crate) fn is_irreducible<F: Field>(f: &F, poly: &[F::Elem]) -> bool {
    let d = match degree(f, poly) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    let x = vec![f.zero(), f.one()];
    let q = f.order();
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = powmod(f, &h, q, poly);
        let g = gcd(f, &sub(f, &h, &x), poly);
        if degree(f, &g) != Some(0) {
            return false;
        }
    }
    true
}

/// Extended Euclid for `a` modulo an irreducible `modulus`: returns `a^{-1}`
/// reduced modulo `modulus`, or `None` if `a ≡ 0`.
pub(crate) fn inverse_mod<F: Field>(
    f: &F,
    a: &[F::Elem],
    modulus: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let mut r0 = modulus.to_vec();
    let mut r1 = rem(f, a, modulus);
    if r1.is_empty() {
        return None;
    }
    let mut s0: Vec<F::Elem> = Vec::new();
    let mut s1: Vec<F::Elem> = vec![f.one()];
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is a nonzero constant when modulus is irreducible
    if degree(f, &r0) != Some(0) {
        return None;
    }
    let c = f.inv(&r0[0])?;
    let mut out: Vec<F::Elem> = s0.iter().map(|x| f.mul(x, &c)).collect();
    trim(f, &mut out);
    Some(out)
}
