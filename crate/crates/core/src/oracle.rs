//! Brute-force counters that realize the counting characterizations
//! directly, as ground truth for the polytope-volume pipeline.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::cone::{dual_cone, hull_to_halfspaces, Cone};
use crate::error::{Error, Result};
use crate::fsignature::{
    build_p_polytope, f_signature, newton_polyhedron, scale_polyhedron, ToricRing, TorusDivisor,
    TripleProblem,
};
use crate::lattice::{min_positive_pairing, IntVector, RatVector, Rational};
use crate::linalg::{self, rat_vec};
use crate::polytope::{count_scaled_lattice_points, minkowski_sum_intersect, HalfOpenPolytope};

fn ser_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::format_rational(x))
}

fn ser_rationals<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(crate::format_rational))
}

/// Counts at a sequence of scales, normalized by `q^n`, against a target
/// volume.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub q_values: Vec<u64>,
    pub counts: Vec<u64>,
    #[serde(serialize_with = "ser_rationals")]
    pub normalized: Vec<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub target: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub max_deviation: Rational,
    /// `C` in `deviation <= C / q`, fitted on the leading half of the scales.
    #[serde(serialize_with = "ser_rational")]
    pub fitted_constant: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
    pub pass: bool,
}

/// Fits `C = 2 · max(deviation · q)` over the leading half of the scales and
/// checks `deviation <= C / q` on every scale.
pub fn decay_bound(q_values: &[u64], deviations: &[Rational]) -> (Rational, bool) {
    let scaled: Vec<Rational> = q_values
        .iter()
        .zip(deviations)
        .map(|(&q, d)| d * Rational::from_integer(BigInt::from(q)))
        .collect();
    let window = scaled.len().div_ceil(2);
    let c = scaled[..window]
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero)
        * Rational::from_integer(BigInt::from(2));
    let pass = scaled.iter().all(|s| *s <= c);
    (c, pass)
}

fn normalize(count: u64, q: u64, n: usize) -> Rational {
    Rational::new(BigInt::from(count), BigInt::from(q).pow(n as u32))
}

/// Ehrhart-style convergence of `#(p ∩ (1/q)L) / q^n` to the volume.
pub fn ehrhart_convergence(p: &HalfOpenPolytope, q_values: &[u64]) -> Result<OracleReport> {
    let target = crate::polytope::volume(p)?;
    let n = p.ambient_rank();
    let counts = q_values
        .iter()
        .map(|&q| count_scaled_lattice_points(p, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport::from_counts(q_values, counts, n, target, None))
}

impl OracleReport {
    /// Report for counts at `q_values` of a polytope of dimension `n` whose
    /// volume is `target`.
    pub fn from_counts(
        q_values: &[u64],
        counts: Vec<u64>,
        n: usize,
        target: Rational,
        radius: Option<u32>,
    ) -> OracleReport {
        let normalized: Vec<Rational> = counts
            .iter()
            .zip(q_values)
            .map(|(&c, &q)| normalize(c, q, n))
            .collect();
        let deviations: Vec<Rational> = normalized
            .iter()
            .map(|x| linalg::abs_rat(x - &target))
            .collect();
        let max_deviation = deviations
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero);
        let (fitted_constant, pass) = decay_bound(q_values, &deviations);
        OracleReport {
            q_values: q_values.to_vec(),
            counts,
            normalized,
            target,
            max_deviation,
            fitted_constant,
            radius,
            pass,
        }
    }
}

/// Integer box `[lo, hi]` (in lattice coordinates at scale `q`) covering
/// `{w : 0 <= w·v_i <= bound_i}` inflated by `inflate` in every coordinate.
///
/// Built from a parallelepiped on `n` independent rays, so it does not rely
/// on the vertex enumeration it is meant to check.
fn enumeration_box(
    rays: &[IntVector],
    bounds: &[Rational],
    basis: &[IntVector],
    q: u64,
    inflate: i64,
) -> Result<(Vec<i64>, Vec<i64>)> {
    let n = basis.len();
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rays.len() {
        let mut rows: Vec<IntVector> = chosen.iter().map(|&j| rays[j].clone()).collect();
        rows.push(rays[i].clone());
        if linalg::rank_int(&rows) == rows.len() {
            chosen.push(i);
        }
    }
    if chosen.len() != n {
        return Err(Error::NotFullDimensional {
            span_rank: chosen.len(),
            ambient_rank: n,
        });
    }
    let vs: Vec<RatVector> = chosen.iter().map(|&i| rat_vec(&rays[i])).collect();
    let vs_inv = linalg::inverse(&vs).expect("independent rays");
    // corners of the parallelepiped: w = Σ ε_j bound_j · (column j of V^-1)
    let mut w_lo = vec![Rational::zero(); n];
    let mut w_hi = vec![Rational::zero(); n];
    for mask in 0u32..(1 << n) {
        let mut w = vec![Rational::zero(); n];
        for (j, &i) in chosen.iter().enumerate() {
            if mask & (1 << j) != 0 {
                let b = bounds[i].clone().max(Rational::zero());
                for k in 0..n {
                    w[k] += &vs_inv[k][j] * &b;
                }
            }
        }
        for k in 0..n {
            if mask == 0 || w[k] < w_lo[k] {
                w_lo[k] = w[k].clone();
            }
            if mask == 0 || w[k] > w_hi[k] {
                w_hi[k] = w[k].clone();
            }
        }
    }
    let infl = Rational::from_integer(BigInt::from(inflate));
    let b_rows: Vec<RatVector> = basis.iter().map(|r| rat_vec(r)).collect();
    let b_inv = linalg::inverse(&b_rows).expect("full-rank lattice");
    let qr = Rational::from_integer(BigInt::from(q));
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for mask in 0u32..(1 << n) {
        let w: RatVector = (0..n)
            .map(|k| {
                if mask & (1 << k) != 0 {
                    &w_hi[k] + &infl
                } else {
                    &w_lo[k] - &infl
                }
            })
            .collect();
        for j in 0..n {
            let lam = (0..n).fold(Rational::zero(), |acc, k| acc + &w[k] * &b_inv[k][j]) * &qr;
            lo[j] = lo[j].min(linalg::floor_to_i64(&lam)?);
            hi[j] = hi[j].max(linalg::ceil_to_i64(&lam)?);
        }
    }
    Ok((lo, hi))
}

fn for_each_point(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    let n = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut p = lo.to_vec();
    loop {
        f(&p);
        let mut j = 0;
        loop {
            if j == n {
                return;
            }
            if p[j] < hi[j] {
                p[j] += 1;
                break;
            }
            p[j] = lo[j];
            j += 1;
        }
    }
}

/// Pareto-maximal pairing vectors among a set.
fn maximal_vectors(mut vs: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    vs.sort_by_key(|v| std::cmp::Reverse(v.iter().sum::<i128>()));
    vs.dedup();
    let mut kept: Vec<Vec<i128>> = Vec::new();
    for v in vs {
        let dominated = kept.iter().any(|k| k.iter().zip(&v).all(|(a, b)| a >= b));
        if !dominated {
            kept.push(v);
        }
    }
    kept
}

/// Number of `v ∈ σ^∨ ∩ (1/q)L` (inside the inflated `P_σ` box) for which no
/// `k ∈ L \ σ^∨` with coordinates in `[-radius, radius]` (in the basis of
/// `L`) has `(v + k)·v_i >= -a_i` for every ray.
///
/// The `k`-search is truncated, so a too-small radius can only overcount.
pub fn bruteforce_free_generators(
    ring: &ToricRing,
    divisor: Option<&TorusDivisor>,
    q: u64,
    radius: u32,
) -> Result<u64> {
    if q == 0 || radius == 0 {
        return Err(Error::Range("q and radius must be at least 1".into()));
    }
    if !ring.is_full_dimensional() {
        return Err(Error::precondition(
            "free-generator oracle needs a full-dimensional cone",
        ));
    }
    if divisor.is_some() && ring.sublattice().is_some() {
        return Err(Error::precondition(
            "divisors are only supported for rings with L = M",
        ));
    }
    let lattice = ring.effective_lattice();
    let rays = ring.cone().rays();
    let r = rays.len();
    let coeffs: Vec<Rational> = match divisor {
        Some(d) => {
            if d.coefficients().len() != r {
                return Err(Error::input("divisor length differs from the ray count"));
            }
            d.coefficients().to_vec()
        }
        None => vec![Rational::zero(); r],
    };
    let c: Vec<Rational> = rays
        .iter()
        .map(|v| min_positive_pairing(&lattice, v).map(Rational::from_integer))
        .collect::<Result<_>>()?;
    let (lo, hi) = enumeration_box(rays, &c, lattice.basis(), q, 1)?;

    // pairing of lattice coordinates with each ray: λ ↦ λ·(B v_i)
    let pair_rows: Vec<Vec<i128>> = rays
        .iter()
        .map(|v| {
            lattice
                .basis()
                .iter()
                .map(|b| linalg::dot_i64(b, v))
                .collect()
        })
        .collect();
    let pairing = |lam: &[i64]| -> Vec<i128> {
        pair_rows
            .iter()
            .map(|row| row.iter().zip(lam).map(|(a, &x)| a * x as i128).sum())
            .collect()
    };

    // Work with D·q·(v + k)·v_i + D·q·a_i >= 0 in integers.
    let den = coeffs.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()));
    let den_i = den
        .to_i128()
        .ok_or_else(|| Error::Overflow(den.to_string()))?;
    let shift: Vec<i128> = coeffs
        .iter()
        .map(|a| {
            let x = (a * Rational::from_integer(&den * BigInt::from(q))).to_integer();
            x.to_i128().ok_or_else(|| Error::Overflow(x.to_string()))
        })
        .collect::<Result<_>>()?;

    let rad = radius as i64;
    let n = lattice.rank();
    let mut ks: Vec<Vec<i128>> = Vec::new();
    for_each_point(&vec![-rad; n], &vec![rad; n], |kappa| {
        let p = pairing(kappa);
        if p.iter().any(|&x| x < 0) {
            ks.push(p);
        }
    });
    let ks = maximal_vectors(ks);

    let qi = q as i128;
    let mut free = 0u64;
    for_each_point(&lo, &hi, |lam| {
        let p = pairing(lam);
        if p.iter().any(|&x| x < 0) {
            return;
        }
        let killed = ks
            .iter()
            .any(|k| (0..r).all(|i| den_i * (p[i] + qi * k[i]) + shift[i] >= 0));
        if !killed {
            free += 1;
        }
    });
    Ok(free)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleCounts {
    pub q: u64,
    /// `#(((P^D ∩ (1/q)M) - (t·Newt(a) ∩ (1/q)M)) ∩ σ^∨)`.
    pub a_frak: u64,
    /// `#((P^D - t·Newt(a)) ∩ σ^∨ ∩ (1/q)M)`.
    pub a_prime: u64,
}

/// Both counts from the proof of the triples formula at scale `q`. Requires
/// `q·t` and every `q·a_i` to be integers.
pub fn bruteforce_triple_count(problem: &TripleProblem, q: u64) -> Result<TripleCounts> {
    if q == 0 {
        return Err(Error::Range("q must be at least 1".into()));
    }
    let qr = Rational::from_integer(BigInt::from(q));
    let ring = &problem.ring;
    if ring.sublattice().is_some() {
        return Err(Error::precondition(
            "triples are only supported for rings with L = M",
        ));
    }
    if !(&problem.t * &qr).is_integer()
        || problem
            .divisor
            .coefficients()
            .iter()
            .any(|a| !(a * &qr).is_integer())
    {
        return Err(Error::precondition(format!(
            "q = {q} does not clear the denominators of t and the divisor"
        )));
    }
    let n = ring.rank();
    let rays = ring.cone().rays();
    let ones = vec![Rational::one(); rays.len()];
    let std_basis = crate::lattice::Lattice::standard(n);
    let (lo, hi) = enumeration_box(rays, &ones, std_basis.basis(), q, 0)?;

    // P^D ∩ (1/q)M in scaled integer coordinates z = q·x:
    // 0 <= z·v_i < q(1 - a_i), the right side being an integer.
    let upper: Vec<i128> = problem
        .divisor
        .coefficients()
        .iter()
        .map(|a| {
            let u = ((Rational::one() - a) * &qr).to_integer();
            u.to_i128().ok_or_else(|| Error::Overflow(u.to_string()))
        })
        .collect::<Result<_>>()?;
    let in_pd = |z: &[i64]| {
        rays.iter().zip(&upper).all(|(v, &u)| {
            let s = linalg::dot_i64(z, v);
            s >= 0 && s < u
        })
    };
    let mut pd_points: Vec<IntVector> = Vec::new();
    for_each_point(&lo, &hi, |z| {
        if in_pd(z) {
            pd_points.push(z.to_vec());
        }
    });

    // Only w with x - w ∈ σ^∨ for some x ∈ P^D can contribute, which forces
    // 0 <= w·v_i <= x·v_i, so w itself lies in P^D.
    let newt = newton_polyhedron(&problem.ideal, ring)?;
    let scaled = hull_to_halfspaces(&scale_polyhedron(&newt, &problem.t)?)?;
    let newt_points: Vec<&IntVector> = pd_points
        .iter()
        .filter(|z| {
            let x: RatVector = z
                .iter()
                .map(|&c| Rational::new(BigInt::from(c), BigInt::from(q)))
                .collect();
            scaled.contains(&x)
        })
        .collect();

    let mut diffs: HashSet<IntVector> = HashSet::new();
    for x in &pd_points {
        for w in &newt_points {
            let d: IntVector = x.iter().zip(w.iter()).map(|(a, b)| a - b).collect();
            if rays.iter().all(|v| linalg::dot_i64(&d, v) >= 0) {
                diffs.insert(d);
            }
        }
    }

    let pd = build_p_polytope(ring, Some(&problem.divisor))?;
    let dual = dual_cone(ring.cone())?;
    let triple = minkowski_sum_intersect(&pd, &newt, &problem.t, &dual.halfspaces)?;
    let a_prime = count_scaled_lattice_points(&triple, q)?;
    Ok(TripleCounts {
        q,
        a_frak: diffs.len() as u64,
        a_prime,
    })
}

/// `s(R ⊗ S) = s(R)·s(S)`, checked exactly on the product cone.
pub fn product_check(ring1: &ToricRing, ring2: &ToricRing) -> Result<bool> {
    let left = f_signature(&ring1.product(ring2))?.value;
    let right = f_signature(ring1)?.value * f_signature(ring2)?.value;
    Ok(left == right)
}

/// One cone of the fixed verification corpus.
#[derive(Debug, Clone, Deserialize)]
pub struct CorpusCone {
    pub name: String,
    pub rank: usize,
    pub rays: Vec<IntVector>,
}

impl CorpusCone {
    pub fn ring(&self) -> Result<ToricRing> {
        ToricRing::new(Cone::new(self.rank, self.rays.clone())?)
    }

    /// Simplicial with rays forming a basis of `Z^n`.
    pub fn is_unimodular(&self) -> bool {
        if self.rays.len() != self.rank {
            return false;
        }
        let m: Vec<RatVector> = self.rays.iter().map(|r| rat_vec(r)).collect();
        linalg::abs_rat(linalg::determinant(&m)) == Rational::one()
    }
}

const CORPUS: &str = include_str!("../data/corpus.json");

/// The checked-in corpus of twelve cones.
pub fn corpus() -> Vec<CorpusCone> {
    serde_json::from_str(CORPUS).expect("corpus data file is valid JSON")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsignature::MonomialIdeal;
    use crate::linalg::rat;
    use crate::polytope::half_open_box;
    use crate::{HPolyhedron, Inequality, Lattice};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn quadric() -> ToricRing {
        ToricRing::new(Cone::new(2, vec![vec![0, 1], vec![2, -1]]).unwrap()).unwrap()
    }

    #[test]
    fn free_generators_examples() {
        assert_eq!(
            bruteforce_free_generators(&ToricRing::polynomial(2), None, 2, 3).unwrap(),
            4
        );
        assert_eq!(
            bruteforce_free_generators(&quadric(), None, 2, 4).unwrap(),
            2
        );
        assert_eq!(
            bruteforce_free_generators(&quadric(), None, 4, 6).unwrap(),
            8
        );
    }

    #[test]
    fn free_generators_with_divisor() {
        // P^D for a = (1/2, 1/2) on the plane is [0, 1/2)^2
        let d = TorusDivisor::new(vec![q(1, 2), q(1, 2)]).unwrap();
        let ring = ToricRing::polynomial(2);
        assert_eq!(
            bruteforce_free_generators(&ring, Some(&d), 4, 2).unwrap(),
            4
        );
        let pd = build_p_polytope(&ring, Some(&d)).unwrap();
        assert_eq!(count_scaled_lattice_points(&pd, 4).unwrap(), 4);
    }

    #[test]
    fn radius_monotone() {
        let ring = ToricRing::new(Cone::new(2, vec![vec![1, 0], vec![1, 5]]).unwrap()).unwrap();
        let mut last = u64::MAX;
        for radius in [1, 2, 4, 8] {
            let c = bruteforce_free_generators(&ring, None, 4, radius).unwrap();
            assert!(c <= last);
            last = c;
        }
    }

    #[test]
    fn triple_counts_unit_and_zero() {
        let ring = ToricRing::polynomial(2);
        let pair = count_scaled_lattice_points(&build_p_polytope(&ring, None).unwrap(), 4).unwrap();
        let unit = TripleProblem::new(
            ring.clone(),
            TorusDivisor::zero(2),
            MonomialIdeal::unit(2),
            q(3, 4),
        )
        .unwrap();
        let c = bruteforce_triple_count(&unit, 4).unwrap();
        assert_eq!((c.a_frak, c.a_prime), (pair, pair));
        let xy = MonomialIdeal::new(vec![vec![1, 1]]).unwrap();
        let zero = TripleProblem::new(ring, TorusDivisor::zero(2), xy, rat(0)).unwrap();
        let c = bruteforce_triple_count(&zero, 4).unwrap();
        assert_eq!((c.a_frak, c.a_prime), (pair, pair));
    }

    #[test]
    fn triple_count_integrality() {
        let ring = ToricRing::polynomial(2);
        let xy = MonomialIdeal::new(vec![vec![1, 1]]).unwrap();
        let p = TripleProblem::new(ring, TorusDivisor::zero(2), xy, q(1, 3)).unwrap();
        assert!(matches!(
            bruteforce_triple_count(&p, 4),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ehrhart_examples() {
        let p = build_p_polytope(&quadric(), None).unwrap();
        let r = ehrhart_convergence(&p, &[2, 4, 8, 16]).unwrap();
        assert!(r.normalized.iter().all(|x| *x == q(1, 2)));
        assert!(r.pass);
        let sq = half_open_box(&[(0, 1), (0, 1)]);
        let r = ehrhart_convergence(&sq, &[2, 3, 5]).unwrap();
        assert!(r.normalized.iter().all(|x| *x == rat(1)));

        let tri = HalfOpenPolytope::new(
            HPolyhedron::from_inequalities(
                2,
                vec![
                    Inequality::closed(vec![1, 0], rat(0)).unwrap(),
                    Inequality::closed(vec![0, 1], rat(0)).unwrap(),
                    Inequality::new(vec![-1, -1], rat(-1), true).unwrap(),
                ],
            )
            .unwrap(),
            Lattice::standard(2),
        )
        .unwrap();
        let r = ehrhart_convergence(&tri, &[2, 4, 8]).unwrap();
        assert_eq!(r.counts, vec![3, 10, 36]);
        assert_eq!(r.normalized, vec![q(3, 4), q(5, 8), q(9, 16)]);
        assert!(r.pass);
    }

    #[test]
    fn decay_bound_flags_growth() {
        let (_, pass) = decay_bound(&[2, 4, 8, 16], &[q(1, 8), q(1, 8), q(1, 8), q(1, 8)]);
        assert!(!pass);
        let (c, pass) = decay_bound(&[2, 4, 8], &[q(1, 4), q(1, 8), q(1, 16)]);
        assert!(pass);
        assert_eq!(c, rat(1));
    }

    #[test]
    fn product_examples() {
        assert!(product_check(&quadric(), &quadric()).unwrap());
        assert!(product_check(&quadric(), &ToricRing::polynomial(2)).unwrap());
        let a1_gm = ToricRing::new(Cone::new(2, vec![vec![1, 0]]).unwrap()).unwrap();
        assert!(product_check(&quadric(), &a1_gm).unwrap());
    }

    #[test]
    fn corpus_has_twelve_cones() {
        let c = corpus();
        assert_eq!(c.len(), 12);
        for cone in &c {
            cone.ring().unwrap();
        }
        assert_eq!(c.iter().filter(|c| c.is_unimodular()).count(), 3);
    }
}
