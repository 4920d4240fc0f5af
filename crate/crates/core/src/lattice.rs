//! Integer lattices in `Z^n`: Hermite bases, indices, primitive vectors and
//! pairing minima.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;
pub type IntVector = Vec<i64>;
pub type RatVector = Vec<Rational>;

/// A subgroup of `Z^n` stored by its row-style Hermite normal form basis.
///
/// Two lattices are equal exactly when their stored bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    ambient_rank: usize,
    basis: Vec<IntVector>,
}

/// Index of one lattice inside another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(k) => write!(f, "{k}"),
            LatticeIndex::Infinite => f.write_str("infinite"),
        }
    }
}

impl Lattice {
    /// The full lattice `Z^n`.
    pub fn standard(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Lattice {
            ambient_rank: n,
            basis,
        }
    }

    /// The zero subgroup of `Z^n`.
    pub fn zero(n: usize) -> Self {
        Lattice {
            ambient_rank: n,
            basis: Vec::new(),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_rank
    }

    pub fn is_standard(&self) -> bool {
        *self == Lattice::standard(self.ambient_rank)
    }

    /// Integer coefficients of `v` in the stored basis, or `None` when `v` is
    /// not a lattice vector.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient_rank {
            return None;
        }
        let mut residual = linalg::big(v);
        let mut coords = Vec::with_capacity(self.rank());
        for row in &self.basis {
            let pivot = row.iter().position(|&x| x != 0)?;
            let (c, rem) = residual[pivot].div_rem(&BigInt::from(row[pivot]));
            if !rem.is_zero() {
                return None;
            }
            for (r, &b) in residual.iter_mut().zip(row) {
                *r -= &c * b;
            }
            coords.push(c);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `|det(basis)|` for a full-rank lattice.
    pub fn covolume(&self) -> Option<BigInt> {
        if !self.is_full_rank() {
            return None;
        }
        let m: Vec<RatVector> = self.basis.iter().map(|r| linalg::rat_vec(r)).collect();
        Some(linalg::determinant(&m).abs().to_integer())
    }

    /// `R`-span of the lattice intersected with `Z^n`.
    pub fn saturation(&self) -> Lattice {
        let rows: Vec<Vec<BigInt>> = self.basis.iter().map(|r| linalg::big(r)).collect();
        let orth = integer_kernel(&rows, self.ambient_rank);
        let sat = integer_kernel(&orth, self.ambient_rank);
        let basis = hermite_rows(&sat, self.ambient_rank);
        Lattice {
            ambient_rank: self.ambient_rank,
            basis: basis
                .iter()
                .map(|r| linalg::small(r).expect("saturation basis fits in i64"))
                .collect(),
        }
    }

    /// Direct sum `self ⊕ other` inside `Z^(n1 + n2)`.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let n1 = self.ambient_rank;
        let n = n1 + other.ambient_rank;
        let mut basis = Vec::with_capacity(self.rank() + other.rank());
        for r in &self.basis {
            let mut v = r.clone();
            v.resize(n, 0);
            basis.push(v);
        }
        for r in &other.basis {
            let mut v = vec![0; n1];
            v.extend_from_slice(r);
            basis.push(v);
        }
        Lattice {
            ambient_rank: n,
            basis,
        }
    }
}

/// Row operations bringing `rows` into Hermite normal form.
///
/// Returns `(h, u)` with `u * rows = h`, `u` unimodular. Nonzero rows of `h`
/// come first, have strictly increasing positive pivots, and entries above a
/// pivot are reduced into `[0, pivot)`.
pub(crate) fn hermite_with_transform(
    rows: &[Vec<BigInt>],
    ncols: usize,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let m = rows.len();
    let mut h: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();

    fn sub_multiple(rows: &mut [Vec<BigInt>], target: usize, source: usize, k: &BigInt) {
        let src = rows[source].clone();
        for (t, s) in rows[target].iter_mut().zip(src) {
            *t -= k * s;
        }
    }

    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&a, &b| h[a][c].abs().cmp(&h[b][c].abs()));
            let Some(best) = best else { break };
            h.swap(r, best);
            u.swap(r, best);
            let mut done = true;
            for i in r + 1..m {
                if !h[i][c].is_zero() {
                    let k = &h[i][c] / &h[r][c];
                    sub_multiple(&mut h, i, r, &k);
                    sub_multiple(&mut u, i, r, &k);
                    if !h[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let k = h[i][c].div_floor(&h[r][c]);
            if !k.is_zero() {
                sub_multiple(&mut h, i, r, &k);
                sub_multiple(&mut u, i, r, &k);
            }
        }
        r += 1;
    }
    (h, u)
}

fn hermite_rows(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let (h, _) = hermite_with_transform(rows, ncols);
    h.into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Basis of `{x in Z^ncols : rows · x = 0}`.
pub(crate) fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    // Transposing turns the kernel into the left null space of rows^T.
    let transposed: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let (h, u) = hermite_with_transform(&transposed, rows.len());
    h.iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(Zero::is_zero))
        .map(|(_, ur)| ur)
        .collect()
}

/// Hermite basis of the subgroup of `Z^n` generated by `generators`.
pub fn hermite_basis(generators: &[IntVector]) -> Result<Lattice> {
    let Some(first) = generators.first() else {
        return Err(Error::input("lattice needs at least one generator"));
    };
    let n = first.len();
    if generators.iter().any(|g| g.len() != n) {
        return Err(Error::input("lattice generators have differing lengths"));
    }
    let rows: Vec<Vec<BigInt>> = generators.iter().map(|g| linalg::big(g)).collect();
    let basis = hermite_rows(&rows, n)
        .iter()
        .map(|r| linalg::small(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(Lattice {
        ambient_rank: n,
        basis,
    })
}

/// `|ambient / sub|`, infinite when `sub` has smaller rank.
pub fn lattice_index(sub: &Lattice, ambient: &Lattice) -> Result<LatticeIndex> {
    if sub.ambient_rank != ambient.ambient_rank {
        return Err(Error::input("lattices live in different ambient ranks"));
    }
    let coords = sub
        .basis
        .iter()
        .map(|b| {
            ambient.coordinates(b).ok_or_else(|| {
                Error::Containment(format!("basis vector {b:?} is not in the ambient lattice"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if sub.rank() < ambient.rank() {
        return Ok(LatticeIndex::Infinite);
    }
    let m: Vec<RatVector> = coords
        .into_iter()
        .map(|r| r.into_iter().map(Rational::from_integer).collect())
        .collect();
    Ok(LatticeIndex::Finite(
        linalg::determinant(&m).abs().to_integer(),
    ))
}

/// Shortest lattice vector on the ray through `v`.
pub fn primitivize(v: &[i64]) -> Result<IntVector> {
    if v.iter().all(|&x| x == 0) {
        return Err(Error::input("cannot primitivize the zero vector"));
    }
    linalg::small(&linalg::primitive_big(linalg::big(v)))
}

/// Positive generator of `{u · v : u in L}`, i.e. the minimum nonzero
/// `|u · v|` over the lattice.
pub fn min_positive_pairing(lattice: &Lattice, v: &[i64]) -> Result<BigInt> {
    if v.len() != lattice.ambient_rank {
        return Err(Error::input("vector length differs from lattice rank"));
    }
    let bv = linalg::big(v);
    let g = lattice.basis.iter().fold(BigInt::zero(), |g, b| {
        g.gcd(&linalg::dot_big(&linalg::big(b), &bv))
    });
    if g.is_zero() {
        return Err(Error::DegeneratePairing { vector: v.to_vec() });
    }
    Ok(g)
}

pub(crate) fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn hermite_examples() {
        let l = hermite_basis(&[vec![1, 0], vec![1, 2]]).unwrap();
        assert_eq!(l.basis(), &[vec![1, 0], vec![0, 2]]);
        let l = hermite_basis(&[vec![2, 4]]).unwrap();
        assert_eq!(l.basis(), &[vec![2, 4]]);
    }

    #[test]
    fn hermite_rejects_bad_input() {
        assert!(hermite_basis(&[]).unwrap_err().is_input_error());
        assert!(hermite_basis(&[vec![1, 0], vec![1]])
            .unwrap_err()
            .is_input_error());
    }

    #[test]
    fn index_three_dim_by_residue_enumeration() {
        let l = hermite_basis(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        // Count residue classes of Z^3 modulo the sublattice inside a box of
        // side 2 (2·e_i lies in the sublattice, so the box covers every class).
        let mut reps: Vec<IntVector> = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let v = vec![a, b, c];
                    let fresh = reps.iter().all(|r| {
                        let d: Vec<i64> = v.iter().zip(r).map(|(x, y)| x - y).collect();
                        !l.contains(&d)
                    });
                    if fresh {
                        reps.push(v);
                    }
                }
            }
        }
        assert_eq!(reps.len(), 2);
        assert_eq!(
            lattice_index(&l, &Lattice::standard(3)).unwrap(),
            LatticeIndex::Finite(BigInt::from(2))
        );
    }

    #[test]
    fn index_examples() {
        let z2 = Lattice::standard(2);
        let even = hermite_basis(&[vec![1, 1], vec![2, 0]]).unwrap();
        assert_eq!(
            lattice_index(&even, &z2).unwrap(),
            LatticeIndex::Finite(BigInt::from(2))
        );
        assert_eq!(
            lattice_index(&z2, &z2).unwrap(),
            LatticeIndex::Finite(BigInt::one())
        );
        let line = hermite_basis(&[vec![1, 0]]).unwrap();
        assert_eq!(lattice_index(&line, &z2).unwrap(), LatticeIndex::Infinite);
        assert!(matches!(
            lattice_index(&z2, &even),
            Err(Error::Containment(_))
        ));
    }

    #[test]
    fn primitivize_examples() {
        assert_eq!(primitivize(&[2, 4]).unwrap(), vec![1, 2]);
        assert_eq!(primitivize(&[0, -3]).unwrap(), vec![0, -1]);
        assert_eq!(primitivize(&[6, 10, 15]).unwrap(), vec![6, 10, 15]);
        assert!(primitivize(&[0, 0]).is_err());
    }

    #[test]
    fn pairing_examples() {
        let z2 = Lattice::standard(2);
        assert_eq!(min_positive_pairing(&z2, &[0, 1]).unwrap(), BigInt::one());
        let even = hermite_basis(&[vec![1, 1], vec![2, 0]]).unwrap();
        assert_eq!(min_positive_pairing(&even, &[1, 0]).unwrap(), BigInt::one());
        let l = hermite_basis(&[vec![3, 0], vec![0, 1]]).unwrap();
        // brute force: smallest nonzero |u·v| over a box of lattice vectors
        let mut best = i64::MAX;
        for a in -5..=5 {
            for b in -5..=5 {
                let u = [3 * a, b];
                let v = [1, 0];
                let p = (u[0] * v[0] + u[1] * v[1]).abs();
                if p != 0 {
                    best = best.min(p);
                }
            }
        }
        assert_eq!(
            min_positive_pairing(&l, &[1, 0]).unwrap(),
            BigInt::from(best)
        );
        let line = hermite_basis(&[vec![0, 1]]).unwrap();
        assert!(matches!(
            min_positive_pairing(&line, &[1, 0]),
            Err(Error::DegeneratePairing { .. })
        ));
    }

    #[test]
    fn saturation_of_scaled_line() {
        let l = hermite_basis(&[vec![2, 2, 0]]).unwrap();
        let s = l.saturation();
        assert_eq!(s.basis(), &[vec![1, 1, 0]]);
        let l = hermite_basis(&[vec![1, 1, 0], vec![1, -1, 0]]).unwrap();
        assert_eq!(l.saturation().basis(), &[vec![1, 0, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let rows = vec![linalg::big(&[1, 2, 3]), linalg::big(&[0, 1, 1])];
        let k = integer_kernel(&rows, 3);
        assert_eq!(k.len(), 1);
        for r in &rows {
            assert!(linalg::dot_big(r, &k[0]).is_zero());
        }
    }
}
