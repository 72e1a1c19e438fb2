// SPDX-License-Identifier: Apache-2.0

use super::{is_prime, poly, Field, Fq, PrimeField, MAX_BASE_ORDER};
use crate::error::{Error, Result};

/// The base field F_q = F_p[y]/(base_poly), q = p^s ≤ 2^16.
///
/// Elements are integers in `0..q`; the F_p coordinates are the base-p digits,
/// constant term first. Multiplication goes through log/exp tables.
#[derive(Clone, Debug)]
pub struct BaseField {
    p: u32,
    s: u32,
    q: u32,
    poly: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<Fq>,
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s && self.poly == other.poly
    }
}
impl Eq for BaseField {}

impl BaseField {
    /// Builds F_{p^s}. Without an explicit polynomial the lexicographically
    /// first monic irreducible of degree `s` over F_p is used.
    pub fn new(p: u32, s: u32, base_poly: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
        }
        if s == 0 {
            return Err(Error::InvalidParameter("s must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(s).filter(|&q| q <= MAX_BASE_ORDER as u64);
        let q = q.ok_or_else(|| {
            Error::InvalidParameter(format!("q = {p}^{s} exceeds the 2^16 size budget"))
        })? as u32;
        let fp = PrimeField { p };
        let poly = match base_poly {
            Some(c) => {
                if c.len() != s as usize + 1 || c[s as usize] != 1 || c.iter().any(|&x| x >= p) {
                    return Err(Error::InvalidParameter(format!(
                        "base polynomial must be monic of degree {s} with coefficients below {p}"
                    )));
                }
                if !poly::is_irreducible(&fp, c) {
                    return Err(Error::ReduciblePolynomial(format!("{c:?} over F_{p}")));
                }
                c.to_vec()
            }
            None => first_irreducible(&fp, s as usize),
        };
        let mut field = BaseField { p, s, q, poly, log: Vec::new(), exp: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    fn digits(&self, mut v: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.s as usize);
        for _ in 0..self.s {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    fn pack_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let fp = PrimeField { p: self.p };
        let prod = poly::mul(&fp, &self.digits(a), &self.digits(b));
        let mut r = poly::rem(&fp, &prod, &self.poly);
        r.resize(self.s as usize, 0);
        self.pack_digits(&r)
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let mut generator = None;
        'search: for g in 1..self.q {
            let mut x = 1u32;
            for k in 1..=order {
                x = self.slow_mul(x, g);
                if x == 1 {
                    if k == order {
                        generator = Some(g);
                        break 'search;
                    }
                    continue 'search;
                }
            }
        }
        let g = generator.expect("multiplicative group of a finite field is cyclic");
        let mut log = vec![0u32; self.q as usize];
        let mut exp = vec![0 as Fq; 2 * order as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x as Fq;
            exp[(k + order) as usize] = x as Fq;
            log[x as usize] = k;
            x = self.slow_mul(x, g);
        }
        self.log = log;
        self.exp = exp;
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.p == 2 {
            return a ^ b;
        }
        if self.s == 1 {
            return ((a as u32 + b as u32) % self.p) as Fq;
        }
        let (mut a, mut b) = (a as u32, b as u32);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.s {
            out += ((a % self.p + b % self.p) % self.p) * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out as Fq
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if self.p == 2 {
            return a;
        }
        if self.s == 1 {
            return ((self.p - a as u32) % self.p) as Fq;
        }
        let mut a = a as u32;
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.s {
            out += ((self.p - a % self.p) % self.p) * place;
            place *= self.p;
            a /= self.p;
        }
        out as Fq
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        if self.p == 2 {
            a ^ b
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Discrete log table entry; meaningless for zero.
    #[inline]
    pub(crate) fn log(&self, a: Fq) -> u32 {
        self.log[a as usize]
    }

    #[inline]
    pub(crate) fn exp(&self, k: u32) -> Fq {
        self.exp[k as usize]
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return None;
        }
        let order = self.q - 1;
        Some(self.exp[((order - self.log[a as usize]) % order) as usize])
    }
}

impl Field for BaseField {
    type Elem = Fq;

    fn zero(&self) -> Fq {
        0
    }
    fn one(&self) -> Fq {
        1
    }
    fn is_zero(&self, a: &Fq) -> bool {
        *a == 0
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        BaseField::add(self, *a, *b)
    }
    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        BaseField::sub(self, *a, *b)
    }
    fn neg(&self, a: &Fq) -> Fq {
        BaseField::neg(self, *a)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        BaseField::mul(self, *a, *b)
    }
    fn inv(&self, a: &Fq) -> Option<Fq> {
        BaseField::inv(self, *a)
    }
    fn order(&self) -> u128 {
        self.q as u128
    }
    fn sub_mul_assign(&self, acc: &mut Fq, f: &Fq, x: &Fq) {
        *acc = BaseField::sub(self, *acc, BaseField::mul(self, *f, *x));
    }
}

/// First monic irreducible of the given degree when monic polynomials are
/// ordered by the integer `Σ c_i·r^i` (r = field order, constant term least
/// significant).
///
/// Affine p-polynomials (support inside {1} ∪ {x^{p^j}}) of degree p^k are
/// skipped without testing when they are provably reducible: the Frobenius
/// acts on their roots as an affine map on F_p^k, which is unipotent of order
/// at most p^⌈log_p(k+1)⌉ and so cannot be a single p^k-cycle. This does not
/// change the result, only the time to reach it (q = 256, m = 64 would
/// otherwise test 256^3 such candidates first).
pub(crate) fn first_irreducible<F: Field>(f: &F, degree: usize) -> Vec<F::Elem>
where
    F::Elem: From<u16>,
{
    let r = f.order();
    let p = characteristic_of(r);
    let affine_doomed = affine_never_irreducible(p, degree);
    let is_affine_exp = |e: usize| e == 0 || is_power_of(p, e);
    let first_free = (1..degree).find(|&e| !is_affine_exp(e)).unwrap_or(degree);
    let mut code: u128 = 0;
    loop {
        if affine_doomed && first_free < degree {
            if let Some(jump) = r.checked_pow(first_free as u32) {
                code = code.max(jump);
            }
        }
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut c = code;
        for _ in 0..degree {
            coeffs.push(F::Elem::from((c % r) as u16));
            c /= r;
        }
        coeffs.push(f.one());
        let skip = affine_doomed
            && coeffs.iter().enumerate().all(|(e, c)| f.is_zero(c) || is_affine_exp(e));
        if !skip && poly::is_irreducible(f, &coeffs) {
            return coeffs;
        }
        code += 1;
    }
}

fn characteristic_of(order: u128) -> u128 {
    (2..=order).find(|d| order.is_multiple_of(*d)).expect("field order is at least 2")
}

fn is_power_of(p: u128, e: usize) -> bool {
    let mut x = 1u128;
    while x < e as u128 {
        x *= p;
    }
    x == e as u128
}

/// True when `degree = p^k` and no affine p-polynomial of that degree can be
/// irreducible, i.e. p^⌈log_p(k+1)⌉ < p^k.
fn affine_never_irreducible(p: u128, degree: usize) -> bool {
    if degree < 2 || !is_power_of(p, degree) {
        return false;
    }
    let mut k = 0u32;
    let mut x = 1u128;
    while x < degree as u128 {
        x *= p;
        k += 1;
    }
    // smallest c with p^c ≥ k + 1
    let mut c = 0u32;
    let mut y = 1u128;
    while y < (k + 1) as u128 {
        y *= p;
        c += 1;
    }
    c < k
}
