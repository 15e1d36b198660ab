//! Phase-one simplex over the rationals, enough to certify pointedness.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Finds `w` with `w · c ≥ 1` for every column `c` (each of length `s`),
/// or `None` if no such `w` exists.
pub(crate) fn positive_functional(cols: &[Vec<BigInt>], s: usize) -> Option<Vec<BigRational>> {
    let n = cols.len();
    if n == 0 {
        return Some(vec![BigRational::zero(); s]);
    }
    // variables: p (s), m (s), slack (n), artificial (n); w = p - m
    let nv = 2 * s + 2 * n;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for (j, c) in cols.iter().enumerate() {
        let mut row = vec![BigRational::zero(); nv + 1];
        for k in 0..s {
            let v = BigRational::from_integer(c[k].clone());
            row[s + k] = -v.clone();
            row[k] = v;
        }
        row[2 * s + j] = -BigRational::one();
        row[2 * s + n + j] = BigRational::one();
        row[nv] = BigRational::one();
        t.push(row);
    }
    let mut basis: Vec<usize> = (0..n).map(|j| 2 * s + n + j).collect();
    // reduced costs of "minimize sum of artificials"
    let mut obj = vec![BigRational::zero(); nv + 1];
    for row in &t {
        for (o, x) in obj.iter_mut().zip(row) {
            *o -= x;
        }
    }
    for j in 0..n {
        obj[2 * s + n + j] = BigRational::zero();
    }
    // Bland: lowest index with negative reduced cost
    while let Some(enter) = (0..nv).find(|&k| obj[k].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[nv] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave?;
        let piv = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &piv;
        }
        let prow = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, y) in obj.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        basis[r] = enter;
    }
    if !obj[nv].is_zero() {
        return None;
    }
    let mut val = vec![BigRational::zero(); nv];
    for (i, &b) in basis.iter().enumerate() {
        val[b] = t[i][nv].clone();
    }
    Some((0..s).map(|k| &val[k] - &val[s + k]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn feasible_and_certified() {
        let c = cols(&[&[1, 0], &[0, 1], &[1, -1], &[-1, 2]]);
        let w = positive_functional(&c, 2).unwrap();
        for col in &c {
            let dot: BigRational = w.iter().zip(col).map(|(a, b)| a * BigRational::from_integer(b.clone())).sum();
            assert!(dot >= BigRational::one());
        }
    }

    #[test]
    fn infeasible() {
        assert!(positive_functional(&cols(&[&[1], &[-1]]), 1).is_none());
        assert!(positive_functional(&cols(&[&[0, 0]]), 2).is_none());
    }
}
