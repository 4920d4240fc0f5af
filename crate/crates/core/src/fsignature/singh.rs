//! Monomial subrings of a polynomial ring presented by semigroup
//! generators: fullness, property (*), and the length count
//! `l(R / (m_A^[q] ∩ R))`.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::cone::Cone;
use crate::dd;
use crate::error::{Error, Result};
use crate::lattice::{hermite_basis, IntVector, Lattice};
use crate::linalg::small;

use super::ToricRing;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SinghPresentation {
    /// `Lattice(S) ∩ N^n = S`.
    pub full: bool,
    /// For each coordinate `i`, `Lattice(S)` contains a vector with `i`-th
    /// coordinate `-1`.
    pub property_star: bool,
}

fn validate(generators: &[IntVector], ambient_rank: usize) -> Result<()> {
    if generators.is_empty() {
        return Err(Error::input("semigroup needs at least one generator"));
    }
    for g in generators {
        if g.len() != ambient_rank {
            return Err(Error::input(format!(
                "generator {g:?} does not have length {ambient_rank}"
            )));
        }
        if g.iter().any(|&x| x < 0) {
            return Err(Error::input(format!(
                "generator {g:?} has a negative coordinate"
            )));
        }
    }
    Ok(())
}

/// Membership in the semigroup generated by `generators` (all coordinates
/// nonnegative), by memoized descent.
struct Semigroup<'a> {
    generators: Vec<&'a IntVector>,
    memo: HashMap<IntVector, bool>,
}

impl<'a> Semigroup<'a> {
    fn new(generators: &'a [IntVector]) -> Self {
        Semigroup {
            generators: generators
                .iter()
                .filter(|g| g.iter().any(|&x| x != 0))
                .collect(),
            memo: HashMap::new(),
        }
    }

    fn contains(&mut self, v: &[i64]) -> bool {
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        if v.iter().any(|&x| x < 0) {
            return false;
        }
        if let Some(&known) = self.memo.get(v) {
            return known;
        }
        let mut found = false;
        for k in 0..self.generators.len() {
            let g = self.generators[k];
            if g.iter().zip(v).all(|(a, b)| a <= b) {
                let rest: IntVector = v.iter().zip(g).map(|(a, b)| a - b).collect();
                if self.contains(&rest) {
                    found = true;
                    break;
                }
            }
        }
        self.memo.insert(v.to_vec(), found);
        found
    }
}

/// Decides fullness exactly: with `r_j` the primitive lattice vectors on the
/// extreme rays of `span(L) ∩ R^n_{>=0}`, every element of `L ∩ R^n_{>=0}`
/// is an `N`-combination of the `r_j` plus a lattice point of the box
/// `[0, Σ r_j]`, so `S` is full iff it contains every lattice point of that
/// box.
pub fn check_singh_presentation(
    generators: &[IntVector],
    ambient_rank: usize,
) -> Result<SinghPresentation> {
    validate(generators, ambient_rank)?;
    let lattice = hermite_basis(generators)?;
    let property_star = (0..ambient_rank).all(|i| {
        let g = lattice
            .basis()
            .iter()
            .fold(0i64, |g, row| num_integer::gcd(g, row[i]));
        g == 1
    });

    let r = lattice.rank();
    if r == 0 {
        return Ok(SinghPresentation {
            full: true,
            property_star,
        });
    }
    // In lattice coordinates λ (x = λ·B) the orthant reads (λ·B)_i >= 0.
    let constraints: Vec<Vec<BigInt>> = (0..ambient_rank)
        .map(|i| {
            lattice
                .basis()
                .iter()
                .map(|row| BigInt::from(row[i]))
                .collect()
        })
        .collect();
    let gens = dd::generators_of(r, &constraints);
    debug_assert!(gens.lineality.is_empty());
    let mut upper = vec![0i64; ambient_rank];
    for lam in &gens.rays {
        let lam = small(lam)?;
        for (i, u) in upper.iter_mut().enumerate() {
            *u += lam
                .iter()
                .zip(lattice.basis())
                .map(|(c, row)| c * row[i])
                .sum::<i64>();
        }
    }

    let mut semigroup = Semigroup::new(generators);
    let mut point = vec![0i64; ambient_rank];
    let full = loop {
        if lattice.contains(&point) && !semigroup.contains(&point) {
            break false;
        }
        // odometer over the box [0, upper]
        let mut j = 0;
        loop {
            if j == ambient_rank {
                break;
            }
            if point[j] < upper[j] {
                point[j] += 1;
                break;
            }
            point[j] = 0;
            j += 1;
        }
        if j == ambient_rank {
            break true;
        }
    };
    Ok(SinghPresentation {
        full,
        property_star,
    })
}

/// `#{v ∈ Lattice(S) : 0 <= v_i < q for all i}`, enumerated column by column
/// through the Hermite basis.
pub fn singh_count(generators: &[IntVector], ambient_rank: usize, q: u64) -> Result<u64> {
    let pres = check_singh_presentation(generators, ambient_rank)?;
    if !(pres.full && pres.property_star) {
        return Err(Error::precondition(format!(
            "presentation must be full with property (*), got {pres:?}"
        )));
    }
    if q == 0 {
        return Err(Error::Range("q must be at least 1".into()));
    }
    let lattice = hermite_basis(generators)?;
    let pivots: Vec<usize> = lattice
        .basis()
        .iter()
        .map(|row| row.iter().position(|&x| x != 0).expect("nonzero basis row"))
        .collect();
    Ok(count_box(
        &lattice,
        &pivots,
        q as i128,
        0,
        &mut vec![0i128; ambient_rank],
    ))
}

fn count_box(lattice: &Lattice, pivots: &[usize], q: i128, col: usize, v: &mut Vec<i128>) -> u64 {
    let n = v.len();
    if col == n {
        return 1;
    }
    match pivots.iter().position(|&p| p == col) {
        None => {
            if (0..q).contains(&v[col]) {
                count_box(lattice, pivots, q, col + 1, v)
            } else {
                0
            }
        }
        Some(row) => {
            let b = &lattice.basis()[row];
            let piv = b[col] as i128;
            // choose c with 0 <= v[col] + c·piv < q
            let lo = (-v[col]).div_euclid(piv) + i128::from((-v[col]).rem_euclid(piv) != 0);
            let hi = (q - 1 - v[col]).div_euclid(piv);
            let mut total = 0;
            for c in lo..=hi {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x += c * y as i128;
                }
                total += count_box(lattice, pivots, q, col + 1, v);
                for (x, &y) in v.iter_mut().zip(b) {
                    *x -= c * y as i128;
                }
            }
            total
        }
    }
}

/// The presentation as a toric ring: first orthant with `L = Lattice(S)`.
pub fn singh_ring(generators: &[IntVector], ambient_rank: usize) -> Result<ToricRing> {
    validate(generators, ambient_rank)?;
    let lattice = hermite_basis(generators)?;
    if !lattice.is_full_rank() {
        return Err(Error::precondition(
            "semigroup lattice must have full rank to be read as a toric ring",
        ));
    }
    ToricRing::with_lattice(Cone::orthant(ambient_rank), lattice)
}
