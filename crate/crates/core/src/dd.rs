//! Double description: generators of `{x : a_j · x >= 0 for all j}`.
//!
//! Rays are kept as primitive integer vectors so every pivot is exact. The
//! lineality space is carried separately; rays are extreme modulo it.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::{dot_big, primitive_big};

#[derive(Debug, Clone, Default)]
pub(crate) struct ConeGenerators {
    pub lineality: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
}

#[derive(Clone)]
struct Ray {
    v: Vec<BigInt>,
    zeros: Bits,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn contains(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn combine(a: &BigInt, x: &[BigInt], b: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    primitive_big(x.iter().zip(y).map(|(p, q)| a * p - b * q).collect())
}

pub(crate) fn generators_of(dim: usize, constraints: &[Vec<BigInt>]) -> ConeGenerators {
    let m = constraints.len();
    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in constraints.iter().enumerate() {
        if a.iter().all(Zero::is_zero) {
            for r in rays.iter_mut() {
                r.zeros.set(k);
            }
            continue;
        }
        if let Some(pos) = lineality.iter().position(|l| !dot_big(a, l).is_zero()) {
            let mut l = lineality.swap_remove(pos);
            let mut al = dot_big(a, &l);
            if al.is_negative() {
                l.iter_mut().for_each(|x| *x = -x.clone());
                al = -al;
            }
            for other in lineality.iter_mut() {
                let ao = dot_big(a, other);
                if !ao.is_zero() {
                    *other = combine(&al, other, &ao, &l);
                }
            }
            for r in rays.iter_mut() {
                let ar = dot_big(a, &r.v);
                if !ar.is_zero() {
                    r.v = combine(&al, &r.v, &ar, &l);
                }
                r.zeros.set(k);
            }
            // l satisfies every earlier constraint with equality.
            let mut zeros = Bits::new(m);
            for j in 0..k {
                zeros.set(j);
            }
            rays.push(Ray { v: l, zeros });
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| dot_big(a, &r.v)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if minus.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.set(k);
                }
            }
            continue;
        }
        // Rays are extreme modulo the lineality space, so adjacency reduces to
        // the combinatorial zero-set test.
        let threshold = dim.saturating_sub(lineality.len() + 2);
        let mut fresh = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() < threshold {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&w| w != p && w != q)
                    .all(|w| !rays[w].zeros.contains(&common));
                if adjacent {
                    let v = combine(&vals[p], &rays[q].v, &vals[q], &rays[p].v);
                    let mut zeros = common;
                    zeros.set(k);
                    fresh.push(Ray { v, zeros });
                }
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.set(k);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    ConeGenerators {
        lineality,
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}
