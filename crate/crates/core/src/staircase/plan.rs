// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::coset::Rational;
use crate::error::{Error, Result};

/// Which MRD chain instantiates the staircase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChainFamily {
    Gabidulin,
    /// Cartesian product of `l` Gabidulin codes of length m (n = l·m).
    Product { l: usize },
}

/// Staircase parameters. All dimensions (`k1`, `k2`, `k_list`) are over
/// F_{q^m} for the full length-n code; for a product chain they are `l` times
/// the inner dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircasePlan {
    pub family: ChainFamily,
    pub n: usize,
    pub m: usize,
    pub k1: usize,
    pub k2: usize,
    pub t0: usize,
    pub rho0: usize,
    /// d_1 > d_2 > … > d_h = n − ρ0.
    pub d_list: Vec<usize>,
    /// k^(1) > … > k^(h) = k1.
    pub k_list: Vec<usize>,
    /// α_j = k^(j) − k2.
    pub alpha_list: Vec<usize>,
    pub alpha: usize,
    pub ell: usize,
    pub p_list: Vec<usize>,
}

/// Decoding bandwidth and communication overhead, in packets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Overhead {
    pub db: Rational,
    pub co: Rational,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn sorted_levels(d: &[usize]) -> Result<Vec<usize>> {
    let mut d = d.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d.dedup();
    if d.is_empty() {
        return Err(Error::InvalidParameter("D must not be empty".into()));
    }
    Ok(d)
}

impl StaircasePlan {
    /// Gabidulin chain: k^(j) = d_j − 2t0 above the last level and k^(h) = k1.
    /// ρ0 = n − min D, and 2t0 + ρ0 ≤ n − k1 is required.
    pub fn gabidulin(n: usize, m: usize, k1: usize, k2: usize, t0: usize, d: &[usize]) -> Result<Self> {
        if n > m {
            return Err(Error::InvalidParameter(format!("Gabidulin chain needs n ≤ m, got n = {n}, m = {m}")));
        }
        let d_list = sorted_levels(d)?;
        let k_of = |dj: usize| dj.checked_sub(2 * t0);
        Self::build(ChainFamily::Gabidulin, n, m, 1, k1, k2, t0, d_list, k_of, n)
    }

    /// Product chain over `l` factors of length m; `k1`, `k2` are inner
    /// dimensions and k^(j) = d_j − (l−1)m − 2t0 per factor.
    pub fn product(l: usize, m: usize, k1: usize, k2: usize, t0: usize, d: &[usize]) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidParameter("l must be positive".into()));
        }
        let n = l * m;
        let d_list = sorted_levels(d)?;
        let k_of = |dj: usize| dj.checked_sub((l - 1) * m + 2 * t0);
        Self::build(ChainFamily::Product { l }, n, m, l, k1, k2, t0, d_list, k_of, m)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        family: ChainFamily,
        n: usize,
        m: usize,
        l: usize,
        k1: usize,
        k2: usize,
        t0: usize,
        d_list: Vec<usize>,
        inner_k: impl Fn(usize) -> Option<usize>,
        inner_len: usize,
    ) -> Result<Self> {
        if !(k2 < k1 && k1 <= inner_len) {
            return Err(Error::InvalidParameter(format!(
                "need 0 ≤ k2 < k1 ≤ {inner_len}, got k1 = {k1}, k2 = {k2}"
            )));
        }
        let h = d_list.len();
        let d_min = d_list[h - 1];
        if d_list[0] > n || d_min == 0 {
            return Err(Error::InvalidParameter(format!("D must lie in [1, {n}]")));
        }
        let rho0 = n - d_min;
        if 2 * t0 + rho0 > inner_len - k1 {
            return Err(Error::InvalidParameter(format!(
                "2t0 + ρ0 = {} exceeds {inner_len} − k1 = {}",
                2 * t0 + rho0,
                inner_len - k1
            )));
        }
        let mut k_inner = Vec::with_capacity(h);
        for &dj in &d_list[..h - 1] {
            let k = inner_k(dj)
                .filter(|&k| k <= inner_len)
                .ok_or_else(|| Error::InvalidParameter(format!("no code dimension for d = {dj}")))?;
            k_inner.push(k);
        }
        k_inner.push(k1);
        if k_inner.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "code dimensions {k_inner:?} are not strictly decreasing"
            )));
        }
        let k_list: Vec<usize> = k_inner.iter().map(|k| k * l).collect();
        let (k1, k2) = (k1 * l, k2 * l);
        let alpha_list: Vec<usize> = k_list.iter().map(|k| k - k2).collect();
        let alpha = alpha_list.iter().fold(1, |a, &b| lcm(a, b));
        let ell = k1 - k2;
        let prefix = |a: usize| ell * alpha / a;
        let p_list = (0..h)
            .map(|j| if j == 0 { prefix(alpha_list[0]) } else { prefix(alpha_list[j]) - prefix(alpha_list[j - 1]) })
            .collect();
        Ok(StaircasePlan {
            family,
            n,
            m,
            k1,
            k2,
            t0,
            rho0,
            d_list,
            k_list,
            alpha_list,
            alpha,
            ell,
            p_list,
        })
    }

    pub fn h(&self) -> usize {
        self.d_list.len()
    }

    /// Number of factors (1 for a Gabidulin chain).
    pub fn l(&self) -> usize {
        match self.family {
            ChainFamily::Gabidulin => 1,
            ChainFamily::Product { l } => l,
        }
    }

    /// 0-based level j with d = d_{j+1}.
    pub fn level_of(&self, d: usize) -> Result<usize> {
        self.d_list.iter().position(|&x| x == d).ok_or(Error::NotInD(d))
    }

    /// Level used when `available` independent columns can be contacted: the
    /// largest d_j not exceeding it.
    pub fn level_for(&self, available: usize) -> Result<usize> {
        self.d_list.iter().position(|&x| x <= available).ok_or(Error::NotInD(available))
    }

    /// ℓα/α_j, the rows downloaded per column at level `j`.
    pub fn prefix_rows(&self, j: usize) -> usize {
        self.ell * self.alpha / self.alpha_list[j]
    }

    /// First row of block `u`.
    pub fn block_start(&self, u: usize) -> usize {
        self.p_list[..u].iter().sum()
    }

    /// Information rate ℓ/n.
    pub fn rate(&self) -> Rational {
        Rational::new(self.ell as i64, self.n as i64)
    }

    /// DB = d·ℓ/α_j and CO = ℓ(d − k^(j) + k2)/(k^(j) − k2) for d ∈ D.
    pub fn overhead(&self, d: usize) -> Result<Overhead> {
        let j = self.level_of(d)?;
        let ell = self.ell as i64;
        let aj = self.alpha_list[j] as i64;
        let db = Rational::new(d as i64 * ell, aj);
        let co = Rational::new(ell * (d as i64 - self.k_list[j] as i64 + self.k2 as i64), aj);
        debug_assert_eq!(co, db - ell);
        Ok(Overhead { db, co })
    }

    /// Overhead measured from per-column download sizes β_i (in rows).
    pub fn measured_overhead(&self, betas: &[usize]) -> Overhead {
        let total: usize = betas.iter().sum();
        let db = Rational::new(total as i64, self.alpha as i64);
        Overhead { db, co: db - self.ell as i64 }
    }
}

/// Largest ℓ compatible with t errors, ρ erasures and μ observations.
pub fn bound_info_rate(n: usize, t: usize, rho: usize, mu: usize) -> Result<usize> {
    n.checked_sub(2 * t + rho + mu)
        .ok_or_else(|| Error::InvalidParameter(format!("n − 2t − ρ − μ is negative for n = {n}")))
}

/// Lower bound ℓ(2t + μ)/(d − 2t − μ) on the communication overhead.
pub fn bound_co(ell: usize, d: usize, t: usize, mu: usize) -> Result<Rational> {
    let denom = d as i64 - (2 * t + mu) as i64;
    if denom <= 0 {
        return Err(Error::InvalidParameter(format!(
            "d − 2t − μ = {denom} must be positive"
        )));
    }
    Ok(Rational::new((ell * (2 * t + mu)) as i64, denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_one() -> StaircasePlan {
        StaircasePlan::gabidulin(40, 64, 24, 8, 0, &[24, 40]).unwrap()
    }

    #[test]
    fn example_one_parameters() {
        let p = example_one();
        assert_eq!(p.ell, 16);
        assert_eq!(p.k_list, vec![40, 24]);
        assert_eq!(p.alpha_list, vec![32, 16]);
        assert_eq!(p.alpha, 32);
        assert_eq!(p.p_list, vec![16, 16]);
        assert_eq!(p.rho0, 16);
        assert_eq!(p.rate(), Rational::new(2, 5));
        assert_eq!(p.prefix_rows(0), 16);
        assert_eq!(p.prefix_rows(1), 32);
    }

    #[test]
    fn example_one_overheads() {
        let p = example_one();
        let o40 = p.overhead(40).unwrap();
        assert_eq!((o40.co, o40.db), (Rational::from_integer(4), Rational::from_integer(20)));
        assert_eq!(p.overhead(24).unwrap().co, Rational::from_integer(8));
        assert_eq!(p.overhead(30), Err(Error::NotInD(30)));
        for &d in &p.d_list {
            assert_eq!(p.overhead(d).unwrap().co, bound_co(16, d, 0, 8).unwrap());
        }
    }

    #[test]
    fn single_level_plan() {
        let p = StaircasePlan::gabidulin(8, 8, 4, 2, 1, &[6]).unwrap();
        assert_eq!((p.alpha, p.ell, p.p_list.clone()), (2, 2, vec![2]));
        let o = p.overhead(6).unwrap();
        assert_eq!(o.co, Rational::new(2 * (6 - 4 + 2), 2));
    }

    #[test]
    fn tiny_plan_from_round_trip_grid() {
        let p = StaircasePlan::gabidulin(4, 4, 2, 1, 0, &[3, 4]).unwrap();
        assert_eq!(p.k_list, vec![4, 2]);
        assert_eq!(p.alpha_list, vec![3, 1]);
        assert_eq!((p.alpha, p.ell), (3, 1));
        assert_eq!(p.p_list, vec![1, 2]);
        assert_eq!(p.overhead(4).unwrap().co, Rational::new(1, 3));
        assert_eq!(p.overhead(3).unwrap().co, Rational::from_integer(2));
    }

    #[test]
    fn product_plan_matches_closed_form_overhead() {
        // l = 2, m = 4: k^(j) = d_j − 4 − 2t0 per factor
        let p = StaircasePlan::product(2, 4, 2, 1, 0, &[6, 8]).unwrap();
        assert_eq!(p.k_list, vec![8, 4]);
        for &d in &p.d_list {
            let j = p.level_of(d).unwrap();
            let (l, k2) = (2i64, 1i64);
            let closed = Rational::new(
                p.ell as i64 * (l * k2 + (l - 1) * (p.n as i64 - d as i64)),
                p.alpha_list[j] as i64,
            );
            assert_eq!(p.overhead(d).unwrap().co, closed);
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(bound_info_rate(40, 0, 16, 8).unwrap(), 16);
        assert_eq!(bound_co(16, 40, 0, 8).unwrap(), Rational::from_integer(4));
        assert_eq!(bound_co(5, 7, 0, 0).unwrap(), Rational::from_integer(0));
        assert!(bound_co(1, 2, 1, 0).is_err());
        assert!(bound_info_rate(3, 1, 1, 1).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(StaircasePlan::gabidulin(8, 4, 2, 1, 0, &[8]).is_err());
        assert!(StaircasePlan::gabidulin(8, 8, 4, 4, 0, &[8]).is_err());
        // 2t0 + ρ0 too large
        assert!(StaircasePlan::gabidulin(8, 8, 4, 2, 1, &[5, 8]).is_err());
        assert!(StaircasePlan::gabidulin(8, 8, 4, 2, 0, &[]).is_err());
    }

    proptest! {
        #[test]
        fn prefix_and_size_identities(n in 2usize..24, k2 in 0usize..6, dk in 1usize..6, t0 in 0usize..3, extra in proptest::collection::vec(0usize..24, 0..4)) {
            let k1 = k2 + dk;
            prop_assume!(k1 + 2 * t0 <= n);
            let d_h = k1 + 2 * t0;
            let mut d: Vec<usize> = extra.into_iter().map(|e| d_h + 1 + e % (n - d_h + 1)).filter(|&x| x <= n).collect();
            d.push(d_h);
            let plan = StaircasePlan::gabidulin(n, n, k1, k2, t0, &d).unwrap();
            let mut acc = 0;
            for j in 0..plan.h() {
                acc += plan.p_list[j];
                prop_assert_eq!(acc, plan.prefix_rows(j));
                if j + 1 < plan.h() {
                    prop_assert_eq!(
                        plan.p_list[j + 1] * plan.alpha_list[j + 1],
                        (plan.alpha_list[j] - plan.alpha_list[j + 1]) * plan.prefix_rows(j)
                    );
                }
                let dj = plan.d_list[j];
                prop_assert_eq!(plan.overhead(dj).unwrap().co, bound_co(plan.ell, dj, t0, k2).unwrap());
            }
            prop_assert_eq!(acc, plan.alpha);
        }
    }
}
