//! Exact linear algebra over the rationals and arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::Rational;

pub(crate) fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub(crate) fn small(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string())))
        .collect()
}

pub(crate) fn rat(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

pub(crate) fn rat_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

pub(crate) fn dot_rat_int(a: &[Rational], b: &[i64]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, &y)| acc + x * BigInt::from(y))
}

pub(crate) fn dot_big(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dot_i64(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Divides an integer vector by the gcd of its entries. The zero vector is
/// returned unchanged.
pub(crate) fn primitive_big(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row[c..cols].iter_mut().zip(&pivot[c..cols]) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub(crate) fn rank_int(rows: &[Vec<i64>]) -> usize {
    let m: Vec<Vec<Rational>> = rows.iter().map(|r| rat_vec(r)).collect();
    rank(&m)
}

/// Dimension of the affine hull of a point set (-1 for the empty set is
/// reported as `None`).
pub(crate) fn affine_dim(points: &[&Vec<Rational>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&diffs))
}

/// Some solution of `A x = b`, or `None` when the system is inconsistent.
pub(crate) fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][n].clone();
    }
    Some(x)
}

pub(crate) fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let pivot = a[c].clone();
        for row in a[c + 1..n].iter_mut() {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, p) in row[c..n].iter_mut().zip(&pivot[c..n]) {
                    *x -= &f * p;
                }
            }
        }
    }
    det
}

pub(crate) fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub(crate) fn ceil_to_i64(x: &Rational) -> Result<i64> {
    let c = x.ceil().to_integer();
    c.to_i64().ok_or_else(|| Error::Overflow(c.to_string()))
}

pub(crate) fn floor_to_i64(x: &Rational) -> Result<i64> {
    let f = x.floor().to_integer();
    f.to_i64().ok_or_else(|| Error::Overflow(f.to_string()))
}

pub(crate) fn abs_rat(x: Rational) -> Rational {
    if x.is_negative() {
        -x
    } else {
        x
    }
}
