//! Exact ranks and kernels.
//!
//! `rank_exact` is the reference: fraction-free elimination on integer rows,
//! each kept primitive. `rank_modp` is a fast lower bound (rank mod p never
//! exceeds the rational rank) used by `complex` to certify acyclicity.

use crate::matrix::SparseMatrix;
use crate::modp;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// Rank over the prime field, or `None` if some denominator vanishes mod p.
pub fn rank_modp(m: &SparseMatrix) -> Option<usize> {
    let n = m.ncols();
    let mut pivots: Vec<Option<Vec<(usize, u64)>>> = vec![None; n];
    let mut acc = vec![0u64; n];
    let mut rank = 0;
    for row in m.rows() {
        if row.is_empty() {
            continue;
        }
        let mut lo = usize::MAX;
        for (c, v) in row {
            acc[*c] = v.mod_p(modp::P)?;
            lo = lo.min(*c);
        }
        let mut found = None;
        for c in lo..n {
            let a = acc[c];
            if a == 0 {
                continue;
            }
            match &pivots[c] {
                Some(p) => {
                    for (j, v) in p {
                        acc[*j] = modp::sub(acc[*j], modp::mul(a, *v));
                    }
                }
                None => {
                    found = Some(c);
                    break;
                }
            }
        }
        if let Some(c) = found {
            let inv = modp::inv(acc[c]);
            let mut p = Vec::new();
            for j in c..n {
                if acc[j] != 0 {
                    p.push((j, modp::mul(acc[j], inv)));
                    acc[j] = 0;
                }
            }
            pivots[c] = Some(p);
            rank += 1;
        }
    }
    Some(rank)
}

fn integer_row(row: &[(usize, Scalar)]) -> Vec<(usize, BigInt)> {
    let l = row.iter().fold(BigInt::one(), |l, (_, v)| l.lcm(&v.denom()));
    let r: Vec<(usize, BigInt)> = row.iter().map(|(c, v)| (*c, v.numer() * (&l / v.denom()))).collect();
    primitive(r)
}

fn primitive(mut r: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    let g = r.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for e in &mut r {
            e.1 /= &g;
        }
    }
    if r.first().is_some_and(|e| e.1.is_negative()) {
        for e in &mut r {
            e.1 = -&e.1;
        }
    }
    r
}

/// `a * x - b * y` on sparse integer rows.
fn cross(a: &BigInt, x: &[(usize, BigInt)], b: &BigInt, y: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map_or(usize::MAX, |e| e.0);
        let cy = y.get(j).map_or(usize::MAX, |e| e.0);
        if cx < cy {
            out.push((cx, a * &x[i].1));
            i += 1;
        } else if cy < cx {
            out.push((cy, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((cx, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Integer row echelon form; rows are primitive with distinct leading columns.
pub fn echelon(m: &SparseMatrix) -> Vec<Vec<(usize, BigInt)>> {
    let mut pivots: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
    let mut order = Vec::new();
    for row in m.rows() {
        let mut r = integer_row(row);
        while let Some((c, lead)) = r.first().cloned() {
            match pivots.get(&c) {
                Some(p) => {
                    let g = lead.gcd(&p[0].1);
                    r = primitive(cross(&(&p[0].1 / &g), &r, &(&lead / &g), p));
                }
                None => {
                    order.push(c);
                    pivots.insert(c, r);
                    break;
                }
            }
        }
    }
    order.sort_unstable();
    order.into_iter().map(|c| pivots.remove(&c).unwrap()).collect()
}

/// Exact rank by fraction-free elimination.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    echelon(m).len()
}

/// Exact rank by dense Bareiss elimination; intended for small dense inputs.
pub fn rank_bareiss(m: &SparseMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.rows().iter().map(|r| {
        let mut d = vec![BigInt::zero(); m.ncols()];
        for (c, v) in integer_row(r) {
            d[c] = v;
        }
        d
    }).collect();
    let (nr, nc) = m.shape();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..nc {
        if rank == nr {
            break;
        }
        let Some(piv) = (rank..nr).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, piv);
        for i in rank + 1..nr {
            for j in col + 1..nc {
                let v = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                // Bareiss: the division is exact
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Basis of the right kernel, one vector per free column.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let n = m.ncols();
    let ech = echelon(m);
    // back-substitute into reduced form over Q
    let mut rows: Vec<Vec<Scalar>> = ech
        .iter()
        .map(|r| {
            let mut d = vec![Scalar::zero(); n];
            let lead = Scalar::from_bigint(r[0].1.clone(), BigInt::one());
            for (c, v) in r {
                d[*c] = Scalar::from_bigint(v.clone(), BigInt::one()) / lead.clone();
            }
            d
        })
        .collect();
    let leads: Vec<usize> = ech.iter().map(|r| r[0].0).collect();
    for k in (0..rows.len()).rev() {
        let c = leads[k];
        for i in 0..k {
            let f = rows[i][c].clone();
            if !f.is_zero() {
                for j in c..n {
                    if !rows[k][j].is_zero() {
                        let t = &f * &rows[k][j];
                        rows[i][j] -= &t;
                    }
                }
            }
        }
    }
    let mut is_lead = vec![false; n];
    for &c in &leads {
        is_lead[c] = true;
    }
    (0..n)
        .filter(|&f| !is_lead[f])
        .map(|f| {
            let mut v = vec![Scalar::zero(); n];
            v[f] = Scalar::one();
            for (k, &c) in leads.iter().enumerate() {
                v[c] = -&rows[k][f];
            }
            v
        })
        .collect()
}

/// Rank-nullity self-check of the eliminator: the kernel basis is annihilated,
/// independent by construction, and its size plus the rank is the column count.
pub fn rank_nullity_holds(m: &SparseMatrix) -> bool {
    let r = rank_exact(m);
    let k = kernel_basis(m);
    r + k.len() == m.ncols() && k.iter().all(|v| m.mul_vec(v).iter().all(Scalar::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(r: usize, c: usize, d: &[i64]) -> SparseMatrix {
        let data: Vec<Vec<Scalar>> = d.chunks(c).map(|row| row.iter().map(|&x| Scalar::from_int(x)).collect()).collect();
        SparseMatrix::from_dense(r, c, &data)
    }

    #[test]
    fn known_ranks() {
        assert_eq!(rank_exact(&SparseMatrix::zeros(3, 4)), 0);
        assert_eq!(rank_exact(&SparseMatrix::identity(5)), 5);
        let m = mat(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(rank_bareiss(&m), 2);
        assert_eq!(rank_modp(&m), Some(2));
    }

    #[test]
    fn rational_entries() {
        let m = SparseMatrix::from_dense(2, 2, &[
            vec![Scalar::new(1, 2), Scalar::new(1, 3)],
            vec![Scalar::new(3, 2), Scalar::one()],
        ]);
        assert_eq!(rank_exact(&m), 1);
        assert!(rank_nullity_holds(&m));
    }

    #[test]
    fn modular_rank_can_drop() {
        let m = SparseMatrix::from_dense(1, 1, &[vec![Scalar::from_int(modp::P as i64)]]);
        assert_eq!(rank_exact(&m), 1);
        assert_eq!(rank_modp(&m), Some(0));
    }

    fn int_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), prop::collection::vec(prop_oneof![2 => Just(0i64), 1 => -4i64..5], r * c))
        })
    }

    proptest! {
        #[test]
        fn eliminators_agree((r, c, d) in int_matrix()) {
            let m = mat(r, c, &d);
            let e = rank_exact(&m);
            prop_assert_eq!(rank_bareiss(&m), e);
            prop_assert_eq!(rank_modp(&m), Some(e));
            prop_assert_eq!(rank_exact(&m.transpose()), e);
            prop_assert!(rank_nullity_holds(&m));
        }

        #[test]
        fn low_rank_products((r, c, d) in int_matrix(), k in 1usize..3) {
            let a = mat(r, k, &d.iter().cycle().take(r * k).cloned().collect::<Vec<_>>());
            let b = mat(k, c, &d.iter().rev().cycle().take(k * c).cloned().collect::<Vec<_>>());
            prop_assert!(rank_exact(&a.mul(&b)) <= k);
        }
    }
}
