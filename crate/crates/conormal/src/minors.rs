//! Brute-force invariant factors via gcds of k x k minors.
//!
//! This is the oracle side of the Smith normal form check: it never performs
//! row or column operations, only cofactor determinants of submatrices, so it
//! shares no code path with the elimination in [`crate::linalg::smith`].
//! Exponential in the matrix size; intended for dimensions up to ~6.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::linalg::IntegerMatrix;

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(a: &IntegerMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    match rows.len() {
        0 => BigInt::from(1),
        1 => a[(rows[0], cols[0])].clone(),
        n => {
            let mut acc = BigInt::zero();
            let sub_rows = &rows[1..];
            for (k, &c) in cols.iter().enumerate() {
                let entry = &a[(rows[0], c)];
                if entry.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = cofactor_det(a, sub_rows, &sub_cols);
                if k % 2 == 0 {
                    acc += entry * minor;
                } else {
                    acc -= entry * minor;
                }
            }
            let _ = n;
            acc
        }
    }
}

/// gcd of all k x k minors of `a`; zero when all minors vanish.
fn minor_gcd(a: &IntegerMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in (0..a.rows()).combinations(k) {
        for cols in (0..a.cols()).combinations(k) {
            let det = cofactor_det(a, &rows, &cols);
            g = g.gcd(&det);
        }
    }
    g
}

/// Invariant factors of `a` as the ratios `g_k / g_{k-1}` of minor gcds,
/// stopping at the first k with all k x k minors zero.
pub fn invariant_factors_by_minors(a: &IntegerMatrix) -> Vec<BigInt> {
    let mut factors = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=a.rows().min(a.cols()) {
        let g = minor_gcd(a, k);
        if g.is_zero() {
            break;
        }
        factors.push(&g / &prev);
        prev = g;
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minors_oracle_on_known_matrix() {
        let a = IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let f = invariant_factors_by_minors(&a);
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn minors_oracle_on_singular_matrix() {
        let a = IntegerMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        let f = invariant_factors_by_minors(&a);
        assert_eq!(f, vec![BigInt::from(1)]);
    }
}
