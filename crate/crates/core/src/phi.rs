// SPDX-License-Identifier: Apache-2.0

//! The coordinate expansion φ_n: F_{q^m}^{α×n} → F_q^{αm×n}, rank over F_q,
//! and products of extension-field matrices with base-field matrices.

use crate::error::{dims, Error, Result};
use crate::field::{FieldTower, Fq};
use crate::matrix::{self, BaseMatrix, ExtMatrix, Matrix};

/// Row `(i·m + u)` of the result holds the γ_u-coordinates of row `i` of `c`.
pub fn expand_phi(tower: &FieldTower, c: &ExtMatrix) -> BaseMatrix {
    let m = tower.m();
    let (rows, cols) = c.shape();
    let mut out = BaseMatrix::filled(rows * m, cols, 0);
    for i in 0..rows {
        for j in 0..cols {
            let coords = tower.coordinates(c.get(i, j));
            for (u, &v) in coords.iter().enumerate() {
                out.set(i * m + u, j, v);
            }
        }
    }
    out
}

/// Inverse of [`expand_phi`].
pub fn contract_phi(tower: &FieldTower, d: &BaseMatrix) -> Result<ExtMatrix> {
    let m = tower.m();
    let (rows, cols) = d.shape();
    if rows % m != 0 {
        return Err(Error::DimensionMismatch(format!(
            "row count {rows} is not a multiple of m = {m}"
        )));
    }
    let mut data = Vec::with_capacity(rows / m * cols);
    let mut buf: Vec<Fq> = vec![0; m];
    for i in 0..rows / m {
        for j in 0..cols {
            for (u, slot) in buf.iter_mut().enumerate() {
                *slot = *d.get(i * m + u, j);
            }
            data.push(tower.from_coordinates(&buf));
        }
    }
    Matrix::from_vec(rows / m, cols, data)
}

/// Rank over F_q of `φ(e)`.
pub fn rank_q(tower: &FieldTower, e: &ExtMatrix) -> usize {
    if e.rows() == 0 || e.cols() == 0 {
        return 0;
    }
    matrix::rank(tower.base(), &expand_phi(tower, e))
}

/// `c·aᵀ` for `c` over F_{q^m} (α×n) and `a` over F_q (N×n).
pub fn matmul_mixed(tower: &FieldTower, c: &ExtMatrix, a: &BaseMatrix) -> Result<ExtMatrix> {
    if c.cols() != a.cols() {
        return Err(dims("mixed product columns", c.cols(), a.cols()));
    }
    let (alpha, n) = c.shape();
    let big_n = a.rows();
    let mut out = matrix::zeros(tower, alpha, big_n);
    for i in 0..alpha {
        let crow = c.row(i);
        for j in 0..big_n {
            let arow = a.row(j);
            let mut acc = tower.zero();
            for v in 0..n {
                tower.add_scaled_assign(&mut acc, arow[v], &crow[v]);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Embeds an F_q matrix into F_{q^m}.
pub fn lift(tower: &FieldTower, a: &BaseMatrix) -> ExtMatrix {
    a.map(|&x| tower.from_base(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f8() -> FieldTower {
        FieldTower::new(2, 1, 3, None).unwrap()
    }

    fn random_ext(t: &FieldTower, rng: &mut ChaCha8Rng, r: usize, c: usize) -> ExtMatrix {
        Matrix::from_vec(r, c, (0..r * c).map(|_| t.random(rng)).collect()).unwrap()
    }

    fn random_base(q: u32, rng: &mut ChaCha8Rng, r: usize, c: usize) -> BaseMatrix {
        Matrix::from_vec(r, c, (0..r * c).map(|_| rng.gen_range(0..q) as Fq).collect()).unwrap()
    }

    #[test]
    fn basis_element_expands_to_unit_column() {
        let t = f8();
        let c = Matrix::from_vec(1, 1, vec![t.basis()[0].clone()]).unwrap();
        let d = expand_phi(&t, &c);
        assert_eq!(d.data(), &[1, 0, 0]);
        assert!(matrix::is_zero(t.base(), &expand_phi(&t, &matrix::zeros(&t, 2, 3))));
    }

    #[test]
    fn contract_rejects_bad_row_count() {
        let t = f8();
        assert!(contract_phi(&t, &BaseMatrix::filled(4, 2, 0)).is_err());
    }

    #[test]
    fn rank_of_simple_matrices() {
        let t = f8();
        assert_eq!(rank_q(&t, &matrix::zeros(&t, 2, 3)), 0);
        let mut e = matrix::zeros(&t, 1, 4);
        e.set(0, 2, t.monomial(1));
        assert_eq!(rank_q(&t, &e), 1);
    }

    #[test]
    fn rank_of_random_products_is_bounded() {
        let t = FieldTower::new(2, 1, 4, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut exact = 0;
        for _ in 0..200 {
            let u = random_base(2, &mut rng, 8, 2);
            let v = random_base(2, &mut rng, 2, 6);
            let e = contract_phi(&t, &matrix::mul(t.base(), &u, &v).unwrap()).unwrap();
            let r = rank_q(&t, &e);
            assert!(r <= 2);
            exact += usize::from(r == 2);
        }
        assert!(exact > 100);
    }

    #[test]
    fn mixed_product_identities() {
        let t = f8();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_ext(&t, &mut rng, 2, 3);
        let id = matrix::identity(t.base(), 3);
        assert_eq!(matmul_mixed(&t, &c, &id).unwrap(), c);
        let z = BaseMatrix::filled(4, 3, 0);
        assert!(matrix::is_zero(&t, &matmul_mixed(&t, &c, &z).unwrap()));
        // agrees with the product over F_{q^m} of c and the lifted aᵀ
        let a = random_base(2, &mut rng, 4, 3);
        let lifted = matrix::mul(&t, &c, &lift(&t, &a).transpose()).unwrap();
        assert_eq!(matmul_mixed(&t, &c, &a).unwrap(), lifted);
    }

    #[test]
    fn rank_invariance_depends_on_the_side() {
        // Left multiplication by an invertible matrix over F_{q^m} and right
        // multiplication by an invertible F_q matrix keep rank_q. Right
        // multiplication by an invertible matrix over F_{q^m} need not:
        // exhaustive search for a 1×2 witness at q=2, m=3.
        let t = f8();
        let els: Vec<_> = (0..8).map(|i| t.element_from_index(i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let e = random_ext(&t, &mut rng, 2, 3);
            let x = loop {
                let x = random_ext(&t, &mut rng, 2, 2);
                if matrix::rank(&t, &x) == 2 {
                    break x;
                }
            };
            let a = loop {
                let a = random_base(2, &mut rng, 3, 3);
                if matrix::rank(t.base(), &a) == 3 {
                    break a;
                }
            };
            let r = rank_q(&t, &e);
            assert_eq!(rank_q(&t, &matrix::mul(&t, &x, &e).unwrap()), r);
            assert_eq!(rank_q(&t, &matmul_mixed(&t, &e, &a).unwrap()), r);
        }
        let mut witness = None;
        'search: for a in &els {
            for b in &els {
                let e = Matrix::from_vec(1, 2, vec![a.clone(), b.clone()]).unwrap();
                for x in 0..8u128.pow(4) {
                    let entries: Vec<_> =
                        (0..4).map(|i| t.element_from_index((x >> (3 * i)) & 7)).collect();
                    let xm = Matrix::from_vec(2, 2, entries).unwrap();
                    if matrix::rank(&t, &xm) < 2 {
                        continue;
                    }
                    let ex = matrix::mul(&t, &e, &xm).unwrap();
                    if rank_q(&t, &ex) != rank_q(&t, &e) {
                        witness = Some((e, xm));
                        break 'search;
                    }
                }
            }
        }
        assert!(witness.is_some());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn phi_round_trip(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..5) {
            let t = FieldTower::new(3, 1, 4, None).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_ext(&t, &mut rng, rows, cols);
            prop_assert_eq!(contract_phi(&t, &expand_phi(&t, &c)).unwrap(), c);
        }

        #[test]
        fn phi_commutes_with_channel(seed in any::<u64>(), big_n in 1usize..6) {
            let t = f8().with_basis({
                let t = f8();
                vec![t.add(&t.one(), &t.monomial(2)), t.monomial(1), t.monomial(2)]
            }).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_ext(&t, &mut rng, 2, 4);
            let a = random_base(2, &mut rng, big_n, 4);
            let e = random_ext(&t, &mut rng, 2, big_n);
            let y = matrix::add(&t, &matmul_mixed(&t, &c, &a).unwrap(), &e).unwrap();
            let lhs = expand_phi(&t, &y);
            let rhs = matrix::add(
                t.base(),
                &matrix::mul(t.base(), &expand_phi(&t, &c), &a.transpose()).unwrap(),
                &expand_phi(&t, &e),
            )
            .unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
