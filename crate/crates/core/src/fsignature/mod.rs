//! Signature polytopes and exact F-signatures of toric rings, pairs and
//! triples.
//!
//! Throughout, `N = Z^n` carries the cone and `M = Z^n` (or a full-rank
//! sublattice `L ⊆ M`) carries monomials; pairing is the dot product.

mod singh;

pub use singh::{check_singh_presentation, singh_count, singh_ring, SinghPresentation};

use num_traits::{One, Signed, Zero};

use crate::cone::{
    classify_cone, dual_cone, hull_to_halfspaces, split_torus_factors, Cone, HPolyhedron,
    Inequality, VPolyhedron,
};
use crate::error::{Error, Result};
use crate::lattice::{min_positive_pairing, IntVector, Lattice, RatVector, Rational};
use crate::linalg::{self, rat_vec};
use crate::polytope::{self, minkowski_sum_intersect, HalfOpenPolytope};

/// Affine toric ring `k[σ^∨ ∩ L]` with `σ` a strongly convex cone in `Z^n`.
/// `L` defaults to `M = Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricRing {
    cone: Cone,
    lattice: Option<Lattice>,
}

impl ToricRing {
    pub fn new(cone: Cone) -> Result<Self> {
        if !classify_cone(&cone).strongly_convex {
            return Err(Error::NotStronglyConvex);
        }
        Ok(ToricRing {
            cone,
            lattice: None,
        })
    }

    /// Ring `k[σ^∨ ∩ L]` for a full-rank sublattice `L` of `M`.
    pub fn with_lattice(cone: Cone, lattice: Lattice) -> Result<Self> {
        if lattice.ambient_rank() != cone.ambient_rank() || !lattice.is_full_rank() {
            return Err(Error::input("L must be a full-rank lattice in M"));
        }
        let mut ring = ToricRing::new(cone)?;
        if !lattice.is_standard() {
            ring.lattice = Some(lattice);
        }
        Ok(ring)
    }

    /// Polynomial ring in `n` variables.
    pub fn polynomial(n: usize) -> Self {
        ToricRing {
            cone: Cone::orthant(n),
            lattice: None,
        }
    }

    /// `n`-th Veronese subring of `k[x_1..x_n]`: first orthant with the
    /// lattice of vectors whose coordinate sum is divisible by `n`.
    pub fn veronese(n: usize) -> Result<Self> {
        let mut gens = vec![{
            let mut v = vec![0i64; n];
            v[0] = n as i64;
            v
        }];
        for i in 1..n {
            let mut v = vec![0i64; n];
            v[0] = -1;
            v[i] = 1;
            gens.push(v);
        }
        ToricRing::with_lattice(Cone::orthant(n), crate::lattice::hermite_basis(&gens)?)
    }

    pub fn rank(&self) -> usize {
        self.cone.ambient_rank()
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// The sublattice `L`, when it differs from `M`.
    pub fn sublattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    pub fn effective_lattice(&self) -> Lattice {
        self.lattice
            .clone()
            .unwrap_or_else(|| Lattice::standard(self.rank()))
    }

    pub fn is_full_dimensional(&self) -> bool {
        classify_cone(&self.cone).full_dimensional
    }

    fn require_full_dimensional(&self) -> Result<()> {
        let class = classify_cone(&self.cone);
        if class.full_dimensional {
            Ok(())
        } else {
            Err(Error::NotFullDimensional {
                span_rank: class.span_rank,
                ambient_rank: self.rank(),
            })
        }
    }

    /// Whether `u` lies in the semigroup `σ^∨ ∩ L`.
    pub fn contains_monomial(&self, u: &[i64]) -> bool {
        u.len() == self.rank()
            && self.cone.rays().iter().all(|v| linalg::dot_i64(u, v) >= 0)
            && self.lattice.as_ref().is_none_or(|l| l.contains(u))
    }

    /// Tensor product: cone `σ1 × σ2` in `N1 ⊕ N2`, lattice `L1 ⊕ L2`.
    pub fn product(&self, other: &ToricRing) -> ToricRing {
        let cone = self.cone.product(&other.cone);
        let lattice = match (&self.lattice, &other.lattice) {
            (None, None) => None,
            _ => Some(
                self.effective_lattice()
                    .direct_sum(&other.effective_lattice()),
            ),
        };
        ToricRing { cone, lattice }
    }

    /// Applies a unimodular change of coordinates `A` to `N` (rays map to
    /// `A v`) and the contragredient change to `M` (so pairings are kept).
    pub fn transformed(&self, a: &[IntVector]) -> Result<ToricRing> {
        let cone = self.cone.transform(a)?;
        let lattice = match &self.lattice {
            Some(l) => {
                let inv = unimodular_inverse(a)?;
                let rows: Vec<IntVector> = l.basis().iter().map(|u| row_times(u, &inv)).collect();
                Some(crate::lattice::hermite_basis(&rows)?)
            }
            None => None,
        };
        Ok(ToricRing { cone, lattice })
    }
}

fn row_times(u: &[i64], m: &[IntVector]) -> IntVector {
    (0..m.first().map_or(0, Vec::len))
        .map(|j| u.iter().zip(m).map(|(x, row)| x * row[j]).sum())
        .collect()
}

/// Inverse of an integer matrix with determinant ±1.
pub fn unimodular_inverse(a: &[IntVector]) -> Result<Vec<IntVector>> {
    let m: Vec<RatVector> = a.iter().map(|r| rat_vec(r)).collect();
    let det = linalg::determinant(&m);
    if det.abs() != Rational::one() {
        return Err(Error::input("change of coordinates is not unimodular"));
    }
    let inv = linalg::inverse(&m).expect("nonzero determinant");
    inv.iter()
        .map(|row| {
            row.iter()
                .map(|x| crate::lattice::to_i64(&x.to_integer()))
                .collect()
        })
        .collect()
}

/// `D = Σ a_i D_i`, one rational coefficient per ray of the cone, in ray
/// order. Coefficients are nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusDivisor {
    coefficients: Vec<Rational>,
}

impl TorusDivisor {
    pub fn new(coefficients: Vec<Rational>) -> Result<Self> {
        if let Some((index, value)) = coefficients
            .iter()
            .enumerate()
            .find(|(_, a)| a.is_negative())
        {
            return Err(Error::NotEffective {
                index,
                value: value.to_string(),
            });
        }
        Ok(TorusDivisor { coefficients })
    }

    pub fn zero(rays: usize) -> Self {
        TorusDivisor {
            coefficients: vec![Rational::zero(); rays],
        }
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    fn check_against(&self, ring: &ToricRing) -> Result<()> {
        let r = ring.cone.rays().len();
        if self.coefficients.len() != r {
            return Err(Error::input(format!(
                "divisor has {} coefficients but the cone has {r} rays",
                self.coefficients.len()
            )));
        }
        Ok(())
    }
}

/// Monomial ideal given by exponent vectors of its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    generators: Vec<IntVector>,
}

impl MonomialIdeal {
    pub fn new(generators: Vec<IntVector>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::input("monomial ideal needs at least one generator"));
        };
        if generators.iter().any(|g| g.len() != first.len()) {
            return Err(Error::input("ideal generators have differing lengths"));
        }
        Ok(MonomialIdeal { generators })
    }

    /// The unit ideal `(1)`.
    pub fn unit(n: usize) -> Self {
        MonomialIdeal {
            generators: vec![vec![0; n]],
        }
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    fn check_against(&self, ring: &ToricRing) -> Result<()> {
        for g in &self.generators {
            if !ring.contains_monomial(g) {
                return Err(Error::input(format!(
                    "ideal generator {g:?} is not in the semigroup of the ring"
                )));
            }
        }
        Ok(())
    }

    /// Image under the contragredient of a change of coordinates on `N`.
    pub fn transformed(&self, a: &[IntVector]) -> Result<MonomialIdeal> {
        let inv = unimodular_inverse(a)?;
        MonomialIdeal::new(self.generators.iter().map(|u| row_times(u, &inv)).collect())
    }
}

/// Complete input of a triple `(R, D, a^t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleProblem {
    pub ring: ToricRing,
    pub divisor: TorusDivisor,
    pub ideal: MonomialIdeal,
    pub t: Rational,
}

impl TripleProblem {
    pub fn new(
        ring: ToricRing,
        divisor: TorusDivisor,
        ideal: MonomialIdeal,
        t: Rational,
    ) -> Result<Self> {
        if t.is_negative() {
            return Err(Error::Range(format!(
                "exponent t = {t} must be nonnegative"
            )));
        }
        divisor.check_against(&ring)?;
        ideal.check_against(&ring)?;
        Ok(TripleProblem {
            ring,
            divisor,
            ideal,
            t,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleOptions {
    /// Recompute the value through the Q-Gorenstein reflection whenever it
    /// applies and fail on disagreement.
    pub reflection_check: bool,
}

impl Default for TripleOptions {
    fn default() -> Self {
        TripleOptions {
            reflection_check: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FSignatureResult {
    pub value: Rational,
    pub polytope: HalfOpenPolytope,
    pub torus_rank: usize,
    pub qgorenstein_vector: Option<RatVector>,
    /// `Vol(P^D ∩ t·Newt(a))`, present when the reflection check ran.
    pub reflection_value: Option<Rational>,
}

/// `{w : 0 <= w·v_i < b_i}` with `b_i = c_i` (sublattice) or `1 - a_i`
/// (divisor), measured against the ring's lattice.
pub fn build_p_polytope(
    ring: &ToricRing,
    divisor: Option<&TorusDivisor>,
) -> Result<HalfOpenPolytope> {
    ring.require_full_dimensional()?;
    if let Some(d) = divisor {
        d.check_against(ring)?;
        if ring.lattice.is_some() {
            return Err(Error::precondition(
                "divisors are only supported for rings with L = M",
            ));
        }
    }
    let n = ring.rank();
    let lattice = ring.effective_lattice();
    let mut h = HPolyhedron::new(n);
    for (i, v) in ring.cone.rays().iter().enumerate() {
        let upper = match divisor {
            Some(d) => Rational::one() - &d.coefficients[i],
            None => Rational::from_integer(min_positive_pairing(&lattice, v)?),
        };
        h.push(Inequality::closed(v.clone(), Rational::zero())?)?;
        let neg: IntVector = v.iter().map(|x| -x).collect();
        h.push(Inequality::new(neg, -upper, true)?)?;
    }
    HalfOpenPolytope::new(h, lattice)
}

/// `s(R)`: splits off torus factors, then takes the lattice-relative volume
/// of `P_σ` (or `P_σ^L`).
pub fn f_signature(ring: &ToricRing) -> Result<FSignatureResult> {
    if ring.lattice.is_some() {
        let polytope = build_p_polytope(ring, None)?;
        let value = polytope::volume(&polytope)?;
        return Ok(FSignatureResult {
            value,
            polytope,
            torus_rank: 0,
            qgorenstein_vector: q_gorenstein_vector(
                ring,
                &TorusDivisor::zero(ring.cone.rays().len()),
            )?,
            reflection_value: None,
        });
    }
    let split = split_torus_factors(&ring.cone, &Lattice::standard(ring.rank()))?;
    let reduced = ToricRing {
        cone: split.cone,
        lattice: None,
    };
    let polytope = build_p_polytope(&reduced, None)?;
    let value = polytope::volume(&polytope)?;
    let qgorenstein_vector =
        q_gorenstein_vector(&reduced, &TorusDivisor::zero(reduced.cone.rays().len()))?;
    Ok(FSignatureResult {
        value,
        polytope,
        torus_rank: split.torus_rank,
        qgorenstein_vector,
        reflection_value: None,
    })
}

/// Newton polyhedron `conv(generators) + σ^∨`, pruned to its extreme points.
pub fn newton_polyhedron(ideal: &MonomialIdeal, ring: &ToricRing) -> Result<VPolyhedron> {
    ideal.check_against(ring)?;
    let n = ring.rank();
    let dual = dual_cone(&ring.cone)?;
    let raw = VPolyhedron::new(
        n,
        ideal.generators.iter().map(|g| rat_vec(g)).collect(),
        dual.cone.rays().to_vec(),
    )?;
    let h = hull_to_halfspaces(&raw)?;
    let pruned =
        crate::cone::halfspaces_to_hull(&h)?.expect("Newton polyhedron contains its generators");
    VPolyhedron::new(n, pruned.vertices().to_vec(), dual.cone.rays().to_vec())
}

/// `t·Q` for a polyhedron `Q = conv(V) + cone(R)`; the recession cone is
/// kept, also for `t = 0`.
pub fn scale_polyhedron(q: &VPolyhedron, t: &Rational) -> Result<VPolyhedron> {
    let mut verts: Vec<RatVector> = Vec::new();
    for v in q.vertices() {
        let s: RatVector = v.iter().map(|x| x * t).collect();
        if !verts.contains(&s) {
            verts.push(s);
        }
    }
    VPolyhedron::new(q.ambient_rank(), verts, q.rays().to_vec())
}

/// `s(R, D) = Vol(P_σ^D)`.
pub fn f_signature_pair(ring: &ToricRing, divisor: &TorusDivisor) -> Result<FSignatureResult> {
    let polytope = build_p_polytope(ring, Some(divisor))?;
    let value = polytope::volume(&polytope)?;
    Ok(FSignatureResult {
        value,
        polytope,
        torus_rank: 0,
        qgorenstein_vector: q_gorenstein_vector(ring, divisor)?,
        reflection_value: None,
    })
}

/// `s(R, D, a^t) = Vol((P_σ^D - t·Newt(a)) ∩ σ^∨)`.
pub fn f_signature_triple(
    problem: &TripleProblem,
    options: TripleOptions,
) -> Result<FSignatureResult> {
    let ring = &problem.ring;
    let pd = build_p_polytope(ring, Some(&problem.divisor))?;
    let newt = newton_polyhedron(&problem.ideal, ring)?;
    let dual = dual_cone(&ring.cone)?;
    let polytope = minkowski_sum_intersect(&pd, &newt, &problem.t, &dual.halfspaces)?;
    let value = polytope::volume(&polytope)?;
    let qgorenstein_vector = q_gorenstein_vector(ring, &problem.divisor)?;

    let mut reflection_value = None;
    if options.reflection_check && qgorenstein_vector.is_some() {
        let reflected = reflection_volume(&pd, &newt, &problem.t)?;
        if reflected != value {
            return Err(Error::ReflectionMismatch {
                direct: value.to_string(),
                reflected: reflected.to_string(),
            });
        }
        reflection_value = Some(reflected);
    }
    Ok(FSignatureResult {
        value,
        polytope,
        torus_rank: 0,
        qgorenstein_vector,
        reflection_value,
    })
}

/// `Vol(P_σ^D ∩ t·Newt(a))`.
pub fn reflection_volume(
    pd: &HalfOpenPolytope,
    newt: &VPolyhedron,
    t: &Rational,
) -> Result<Rational> {
    let scaled = hull_to_halfspaces(&scale_polyhedron(newt, t)?)?;
    polytope::volume(&pd.with_constraints(&scaled)?)
}

/// Solves `w · v_i = a_i - 1` for every ray; `None` when the pair is not
/// Q-Gorenstein.
pub fn q_gorenstein_vector(ring: &ToricRing, divisor: &TorusDivisor) -> Result<Option<RatVector>> {
    ring.require_full_dimensional()?;
    divisor.check_against(ring)?;
    let a: Vec<RatVector> = ring.cone.rays().iter().map(|v| rat_vec(v)).collect();
    let b: RatVector = divisor
        .coefficients
        .iter()
        .map(|c| c - Rational::one())
        .collect();
    Ok(linalg::solve(&a, &b))
}
