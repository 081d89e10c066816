//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn is_square(m: &[Vec<i64>]) -> bool {
    m.iter().all(|row| row.len() == m.len())
}

pub fn is_symmetric(m: &[Vec<i64>]) -> bool {
    is_square(m) && (0..m.len()).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// Leading principal minors via Bareiss elimination without pivoting.
///
/// Elimination stops at the first vanishing minor, so the returned vector
/// can be shorter than the dimension; its last entry is then zero.
pub fn leading_principal_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    match bareiss_minors_i128(m) {
        Some(v) => v.into_iter().map(BigInt::from).collect(),
        None => bareiss_minors_big(m),
    }
}

fn bareiss_minors_i128(m: &[Vec<i64>]) -> Option<Vec<i128>> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev: i128 = 1;
    for k in 0..n {
        let pivot = a[k][k];
        minors.push(pivot);
        if pivot == 0 {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j]
                    .checked_mul(pivot)?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = num / prev;
            }
        }
        prev = pivot;
    }
    Some(minors)
}

fn bareiss_minors_big(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = pivot;
    }
    minors
}

/// Exact determinant (fraction-free elimination with row pivoting).
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// True iff `-w` is positive definite, decided by the signs of exact
/// leading principal minors.
pub fn is_negative_definite(w: &[Vec<i64>]) -> Result<bool> {
    if !is_symmetric(w) {
        return Err(Error::NotSymmetric);
    }
    let neg: IntMatrix = w.iter().map(|r| r.iter().map(|&x| -x).collect()).collect();
    let minors = leading_principal_minors(&neg);
    Ok(minors.len() == w.len() && minors.iter().all(|d| d.is_positive()))
}

pub fn to_rational(m: &[Vec<i64>]) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

/// Gauss-Jordan inverse over the rationals; `None` when singular.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - t;
                let t = &f * &inv[col][j];
                inv[r][j] = &inv[r][j] - t;
            }
        }
    }
    Some(inv)
}

pub fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(BigRational::zero(), |acc, t| acc + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn is_identity(m: &RatMatrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}
