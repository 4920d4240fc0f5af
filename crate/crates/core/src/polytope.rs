//! Half-open polytopes: vertices, lattice-relative volume, scaled
//! lattice-point counts and the Minkowski-difference construction used for
//! triples.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cone::{halfspaces_to_hull, hull_to_halfspaces, HPolyhedron, Inequality, VPolyhedron};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, RatVector, Rational};
use crate::linalg::{self, rat, rat_vec};

/// A bounded H-polytope whose inequalities may individually be strict,
/// measured and counted against `lattice`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfOpenPolytope {
    base: HPolyhedron,
    lattice: Lattice,
}

impl HalfOpenPolytope {
    pub fn new(base: HPolyhedron, lattice: Lattice) -> Result<Self> {
        if base.ambient_rank() != lattice.ambient_rank() {
            return Err(Error::input(
                "polytope and lattice have different ambient ranks",
            ));
        }
        if !lattice.is_full_rank() {
            return Err(Error::input("reference lattice must have full rank"));
        }
        Ok(HalfOpenPolytope { base, lattice })
    }

    pub fn base(&self) -> &HPolyhedron {
        &self.base
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn ambient_rank(&self) -> usize {
        self.base.ambient_rank()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.base.contains(x)
    }

    /// Adds further half-spaces, keeping their strict flags.
    pub fn with_constraints(&self, extra: &HPolyhedron) -> Result<Self> {
        Ok(HalfOpenPolytope {
            base: self.base.intersect(extra)?,
            lattice: self.lattice.clone(),
        })
    }

    /// Same half-spaces with every strict flag toggled.
    pub fn with_strictness_flipped(&self) -> Self {
        let ineqs = self.base.inequalities().iter().map(|i| Inequality {
            strict: !i.strict,
            ..i.clone()
        });
        HalfOpenPolytope {
            base: HPolyhedron::from_inequalities(self.ambient_rank(), ineqs)
                .expect("same ambient rank"),
            lattice: self.lattice.clone(),
        }
    }

    /// `self × other` in the direct sum of the ambient spaces.
    pub fn product(&self, other: &HalfOpenPolytope) -> Self {
        let n1 = self.ambient_rank();
        let n = n1 + other.ambient_rank();
        let mut ineqs = Vec::new();
        for i in self.base.inequalities() {
            let mut normal = i.normal.clone();
            normal.resize(n, 0);
            ineqs.push(Inequality {
                normal,
                ..i.clone()
            });
        }
        for i in other.base.inequalities() {
            let mut normal = vec![0; n1];
            normal.extend_from_slice(&i.normal);
            ineqs.push(Inequality {
                normal,
                ..i.clone()
            });
        }
        HalfOpenPolytope {
            base: HPolyhedron::from_inequalities(n, ineqs).expect("padded inequalities"),
            lattice: self.lattice.direct_sum(&other.lattice),
        }
    }

    /// Closure as a V-polyhedron, `None` when the closure is empty.
    fn closure_hull(&self) -> Result<Option<VPolyhedron>> {
        halfspaces_to_hull(&self.base)
    }

    /// Empty exactly when the closure is empty or some strict inequality is
    /// tight on the whole closure.
    pub fn is_empty(&self) -> Result<bool> {
        let Some(hull) = self.closure_hull()? else {
            return Ok(true);
        };
        Ok(self
            .base
            .inequalities()
            .iter()
            .filter(|i| i.strict)
            .any(|i| {
                hull.vertices().iter().all(|v| i.tight_at(v))
                    && hull
                        .rays()
                        .iter()
                        .all(|r| linalg::dot_i64(r, &i.normal) == 0)
            }))
    }
}

/// Vertices of the closure of `p`; empty for an empty polytope.
pub fn vertices(p: &HalfOpenPolytope) -> Result<Vec<RatVector>> {
    let Some(hull) = p.closure_hull()? else {
        return Ok(Vec::new());
    };
    if let Some(ray) = hull.rays().first() {
        return Err(Error::Unbounded { ray: ray.clone() });
    }
    if p.is_empty()? {
        return Ok(Vec::new());
    }
    Ok(hull.vertices().to_vec())
}

/// Euclidean volume of the convex hull of `verts`, where every facet of the
/// hull is among `ineqs` (extra inequalities are harmless).
fn hull_volume(ineqs: &[Inequality], verts: &[RatVector], n: usize) -> Rational {
    let all: Vec<&RatVector> = verts.iter().collect();
    if linalg::affine_dim(&all) != Some(n) {
        return Rational::zero();
    }
    let tight: Vec<Vec<usize>> = ineqs
        .iter()
        .map(|i| {
            (0..verts.len())
                .filter(|&k| i.tight_at(&verts[k]))
                .collect()
        })
        .collect();
    let face: Vec<usize> = (0..verts.len()).collect();
    let simplices = pulling_triangulation(&face, n, &tight, verts);
    let total = simplices.iter().fold(Rational::zero(), |acc, s| {
        let base = &verts[s[0]];
        let m: Vec<RatVector> = s[1..]
            .iter()
            .map(|&k| verts[k].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        acc + linalg::abs_rat(linalg::determinant(&m))
    });
    total / Rational::from_integer(linalg::factorial(n))
}

/// Triangulates a face (given by vertex indices) by coning from its first
/// vertex over triangulations of the facets that avoid it.
fn pulling_triangulation(
    face: &[usize],
    dim: usize,
    tight: &[Vec<usize>],
    verts: &[RatVector],
) -> Vec<Vec<usize>> {
    if face.len() == dim + 1 {
        return vec![face.to_vec()];
    }
    let apex = face[0];
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for t in tight {
        let sub: Vec<usize> = face.iter().copied().filter(|k| t.contains(k)).collect();
        if sub.contains(&apex) || sub.len() < dim || seen.contains(&sub) {
            continue;
        }
        let pts: Vec<&RatVector> = sub.iter().map(|&k| &verts[k]).collect();
        if linalg::affine_dim(&pts) != Some(dim - 1) {
            continue;
        }
        for mut s in pulling_triangulation(&sub, dim - 1, tight, verts) {
            s.push(apex);
            out.push(s);
        }
        seen.insert(sub);
    }
    out
}

/// Volume of the closure of `p`, normalized so a fundamental cell of
/// `p.lattice()` has volume 1.
pub fn volume(p: &HalfOpenPolytope) -> Result<Rational> {
    let verts = vertices(p)?;
    if verts.is_empty() {
        return Ok(Rational::zero());
    }
    let n = p.ambient_rank();
    let euclid = hull_volume(p.base.inequalities(), &verts, n);
    let covol = p.lattice.covolume().expect("full-rank reference lattice");
    Ok(euclid / Rational::from_integer(covol))
}

/// `#(p ∩ (1/q)·lattice)`, honoring strict inequalities.
pub fn count_scaled_lattice_points(p: &HalfOpenPolytope, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::Range("scale q must be at least 1".into()));
    }
    let verts = vertices(p)?;
    if verts.is_empty() {
        return Ok(0);
    }
    let n = p.ambient_rank();
    if n == 0 {
        return Ok(1);
    }
    let qr = Rational::from_integer(BigInt::from(q));
    let basis: Vec<RatVector> = p.lattice.basis().iter().map(|r| rat_vec(r)).collect();
    let inv = linalg::inverse(&basis).expect("full-rank lattice basis");

    // Bounding box in lattice coordinates λ, where x = λ·B / q.
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for v in &verts {
        for j in 0..n {
            let lam = (0..n).fold(Rational::zero(), |acc, k| acc + &v[k] * &inv[k][j]) * &qr;
            lo[j] = lo[j].min(linalg::floor_to_i64(&lam)?);
            hi[j] = hi[j].max(linalg::ceil_to_i64(&lam)?);
        }
    }

    // Each inequality becomes a'·λ >= threshold over the integers.
    let mut rows: Vec<(Vec<i128>, i128)> = Vec::new();
    for ineq in p.base.inequalities() {
        let a: Vec<i128> = p
            .lattice
            .basis()
            .iter()
            .map(|b| linalg::dot_i64(b, &ineq.normal))
            .collect();
        let scaled = &ineq.offset * &qr;
        let thr = if ineq.strict {
            scaled.floor().to_integer() + 1
        } else {
            scaled.ceil().to_integer()
        };
        let thr = thr
            .to_i128()
            .ok_or_else(|| Error::Overflow(thr.to_string()))?;
        rows.push((a, thr));
    }

    let count_tail = |prefix: &[i64]| -> u64 {
        let last = n - 1;
        let mut low = lo[last] as i128;
        let mut high = hi[last] as i128;
        for (a, thr) in &rows {
            let partial: i128 = prefix.iter().zip(a).map(|(&x, &c)| x as i128 * c).sum();
            let need = thr - partial;
            let c = a[last];
            if c > 0 {
                low = low.max(Integer::div_ceil(&need, &c));
            } else if c < 0 {
                high = high.min(Integer::div_floor(&-need, &-c));
            } else if need > 0 {
                return 0;
            }
            if low > high {
                return 0;
            }
        }
        (high - low + 1) as u64
    };

    if n == 1 {
        return Ok(count_tail(&[]));
    }
    let total = (lo[0]..=hi[0])
        .into_par_iter()
        .map(|first| {
            let mut prefix = vec![0i64; n - 1];
            prefix[0] = first;
            let mut sum = 0u64;
            // odometer over coordinates 1..n-1
            for (j, x) in prefix.iter_mut().enumerate().skip(1) {
                *x = lo[j];
            }
            loop {
                sum += count_tail(&prefix);
                let mut j = n - 2;
                loop {
                    if j == 0 {
                        return sum;
                    }
                    if prefix[j] < hi[j] {
                        prefix[j] += 1;
                        break;
                    }
                    prefix[j] = lo[j];
                    j -= 1;
                }
            }
        })
        .sum();
    Ok(total)
}

/// Whether the face of `closure(p)` minimizing `normal` lies inside a strict
/// facet of `p`, i.e. whether the minimum over `p` itself is not attained.
fn minimum_unattained(normal: &[i64], p: &HalfOpenPolytope, pverts: &[RatVector]) -> bool {
    let vals: Vec<Rational> = pverts
        .iter()
        .map(|v| linalg::dot_rat_int(v, normal))
        .collect();
    let Some(min) = vals.iter().min() else {
        return false;
    };
    let face: Vec<&RatVector> = pverts
        .iter()
        .zip(&vals)
        .filter(|(_, x)| *x == min)
        .map(|(v, _)| v)
        .collect();
    p.base
        .inequalities()
        .iter()
        .filter(|i| i.strict)
        .any(|i| face.iter().all(|v| i.tight_at(v)))
}

/// `(p - scale·q) ∩ cone` as a half-open polytope.
///
/// A facet of the Minkowski difference is strict exactly when the matching
/// face of `p` is missing from `p`; facets coming from `cone` are closed.
pub fn minkowski_sum_intersect(
    p: &HalfOpenPolytope,
    q: &VPolyhedron,
    scale: &Rational,
    cone: &HPolyhedron,
) -> Result<HalfOpenPolytope> {
    let n = p.ambient_rank();
    if q.ambient_rank() != n || cone.ambient_rank() != n {
        return Err(Error::input(
            "Minkowski operands have different ambient ranks",
        ));
    }
    if scale.is_negative() {
        return Err(Error::Range(format!("scale {scale} must be nonnegative")));
    }
    if p.is_empty()? {
        return p.with_constraints(cone);
    }
    let pverts = vertices(p)?;
    let mut sum_verts: Vec<RatVector> = Vec::new();
    for pv in &pverts {
        for qv in q.vertices() {
            let v: RatVector = pv.iter().zip(qv).map(|(a, b)| a - scale * b).collect();
            if !sum_verts.contains(&v) {
                sum_verts.push(v);
            }
        }
    }
    // 0·q keeps the recession cone of q.
    let neg_rays = q
        .rays()
        .iter()
        .map(|r| r.iter().map(|x| -x).collect())
        .collect();
    let sum = VPolyhedron::new(n, sum_verts, neg_rays)?;
    let mut base = HPolyhedron::new(n);
    for ineq in hull_to_halfspaces(&sum)?.inequalities() {
        let strict = minimum_unattained(&ineq.normal, p, &pverts);
        base.push(Inequality {
            strict,
            ..ineq.clone()
        })?;
    }
    for ineq in cone.inequalities() {
        base.push(ineq.clone())?;
    }
    let out = HalfOpenPolytope::new(base, p.lattice.clone())?;
    vertices(&out)?;
    Ok(out)
}

/// `{x : lo_i <= x_i < hi_i}` against `Z^n`; handy for tests and examples.
pub fn half_open_box(bounds: &[(i64, i64)]) -> HalfOpenPolytope {
    let n = bounds.len();
    let mut h = HPolyhedron::new(n);
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        let mut e = vec![0; n];
        e[i] = 1;
        h.push(Inequality::closed(e.clone(), rat(lo)).expect("unit normal"))
            .expect("rank matches");
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        h.push(Inequality::new(neg, rat(-hi), true).expect("unit normal"))
            .expect("rank matches");
    }
    HalfOpenPolytope::new(h, Lattice::standard(n)).expect("standard lattice")
}
