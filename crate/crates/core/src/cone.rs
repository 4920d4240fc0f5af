//! Rational polyhedral cones and polyhedra, with exact H/V conversion by
//! double description.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dd::{self, ConeGenerators};
use crate::error::{Error, Result};
use crate::lattice::{hermite_basis, primitivize, IntVector, Lattice, RatVector, Rational};
use crate::linalg::{self, big, dot_big, dot_rat_int, primitive_big, small};

/// `normal · x >= offset`, or `>` when `strict`.
///
/// Normals are stored primitive, so equal half-spaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inequality {
    pub normal: IntVector,
    pub offset: Rational,
    pub strict: bool,
}

impl Inequality {
    pub fn new(normal: IntVector, offset: Rational, strict: bool) -> Result<Self> {
        if normal.iter().all(|&x| x == 0) {
            return Err(Error::input("inequality normal must be nonzero"));
        }
        let g = normal.iter().fold(0i64, |g, &x| g.gcd(&x));
        let normal = normal.into_iter().map(|x| x / g).collect();
        let offset = offset / Rational::from_integer(BigInt::from(g));
        Ok(Inequality {
            normal,
            offset,
            strict,
        })
    }

    pub fn closed(normal: IntVector, offset: Rational) -> Result<Self> {
        Self::new(normal, offset, false)
    }

    fn from_big(normal: Vec<BigInt>, offset: Rational, strict: bool) -> Result<Self> {
        let g = normal.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return Err(Error::input("inequality normal must be nonzero"));
        }
        let normal: Vec<BigInt> = normal.into_iter().map(|x| x / &g).collect();
        Ok(Inequality {
            normal: small(&normal)?,
            offset: offset / Rational::from_integer(g),
            strict,
        })
    }

    /// `normal · x - offset`.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        dot_rat_int(x, &self.normal) - &self.offset
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        let s = self.slack(x);
        if self.strict {
            s.is_positive()
        } else {
            !s.is_negative()
        }
    }

    pub fn tight_at(&self, x: &[Rational]) -> bool {
        self.slack(x).is_zero()
    }
}

/// Finite intersection of (possibly strict) half-spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    ambient_rank: usize,
    inequalities: Vec<Inequality>,
}

impl HPolyhedron {
    pub fn new(ambient_rank: usize) -> Self {
        HPolyhedron {
            ambient_rank,
            inequalities: Vec::new(),
        }
    }

    pub fn from_inequalities(
        ambient_rank: usize,
        inequalities: impl IntoIterator<Item = Inequality>,
    ) -> Result<Self> {
        let mut h = HPolyhedron::new(ambient_rank);
        for ineq in inequalities {
            h.push(ineq)?;
        }
        Ok(h)
    }

    /// Adds an inequality unless an identical one is already present.
    pub fn push(&mut self, ineq: Inequality) -> Result<()> {
        if ineq.normal.len() != self.ambient_rank {
            return Err(Error::input(format!(
                "inequality of length {} in rank {} polyhedron",
                ineq.normal.len(),
                self.ambient_rank
            )));
        }
        if !self.inequalities.contains(&ineq) {
            self.inequalities.push(ineq);
        }
        Ok(())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|i| i.satisfied_by(x))
    }

    pub fn closure_contains(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|i| !i.slack(x).is_negative())
    }

    /// Same half-spaces with every strict flag cleared.
    pub fn closure(&self) -> HPolyhedron {
        let mut h = HPolyhedron::new(self.ambient_rank);
        for i in &self.inequalities {
            let mut c = i.clone();
            c.strict = false;
            if !h.inequalities.contains(&c) {
                h.inequalities.push(c);
            }
        }
        h
    }

    pub fn intersect(&self, other: &HPolyhedron) -> Result<HPolyhedron> {
        let mut h = self.clone();
        for i in &other.inequalities {
            h.push(i.clone())?;
        }
        Ok(h)
    }
}

/// `conv(vertices) + cone(rays)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolyhedron {
    ambient_rank: usize,
    vertices: Vec<RatVector>,
    rays: Vec<IntVector>,
}

impl VPolyhedron {
    pub fn new(
        ambient_rank: usize,
        vertices: Vec<RatVector>,
        rays: Vec<IntVector>,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::input("V-polyhedron needs at least one vertex"));
        }
        if vertices.iter().any(|v| v.len() != ambient_rank)
            || rays.iter().any(|r| r.len() != ambient_rank)
        {
            return Err(Error::input(
                "V-polyhedron coordinates have the wrong length",
            ));
        }
        let mut prim = Vec::with_capacity(rays.len());
        for r in rays {
            if r.iter().all(|&x| x == 0) {
                continue;
            }
            let p = primitivize(&r)?;
            if !prim.contains(&p) {
                prim.push(p);
            }
        }
        Ok(VPolyhedron {
            ambient_rank,
            vertices,
            rays: prim,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }
}

/// Cone generated by primitive integer rays, with no redundant generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    ambient_rank: usize,
    rays: Vec<IntVector>,
}

impl Cone {
    /// Validates and primitivizes `rays`. Rejects zero rays, duplicates and
    /// rays that are nonnegative combinations of the others.
    pub fn new(ambient_rank: usize, rays: Vec<IntVector>) -> Result<Self> {
        let mut prim: Vec<IntVector> = Vec::with_capacity(rays.len());
        for r in &rays {
            if r.len() != ambient_rank {
                return Err(Error::input(format!(
                    "ray {r:?} does not have length {ambient_rank}"
                )));
            }
            let p = primitivize(r)?;
            if prim.contains(&p) {
                return Err(Error::input(format!("ray {r:?} is listed twice")));
            }
            prim.push(p);
        }
        for i in 0..prim.len() {
            let others: Vec<IntVector> = prim
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| r.clone())
                .collect();
            if cone_contains(ambient_rank, &others, &prim[i]) {
                return Err(Error::input(format!(
                    "ray {:?} is a nonnegative combination of the other rays",
                    rays[i]
                )));
            }
        }
        Ok(Cone {
            ambient_rank,
            rays: prim,
        })
    }

    pub(crate) fn from_minimal_rays(ambient_rank: usize, rays: Vec<IntVector>) -> Self {
        Cone { ambient_rank, rays }
    }

    /// The first orthant of `Z^n`.
    pub fn orthant(n: usize) -> Self {
        Cone::from_minimal_rays(n, Lattice::standard(n).basis().to_vec())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    /// Cone in `N1 ⊕ N2` generated by `(v, 0)` and `(0, w)`.
    pub fn product(&self, other: &Cone) -> Cone {
        let n1 = self.ambient_rank;
        let n = n1 + other.ambient_rank;
        let mut rays = Vec::with_capacity(self.rays.len() + other.rays.len());
        for r in &self.rays {
            let mut v = r.clone();
            v.resize(n, 0);
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![0; n1];
            v.extend_from_slice(r);
            rays.push(v);
        }
        Cone::from_minimal_rays(n, rays)
    }

    /// Image of the cone under `v -> A v` for an integer matrix `A` given by
    /// rows. Intended for unimodular `A`.
    pub fn transform(&self, rows: &[IntVector]) -> Result<Cone> {
        let rays = self
            .rays
            .iter()
            .map(|r| {
                rows.iter()
                    .map(|row| linalg::dot_i64(row, r) as i64)
                    .collect()
            })
            .collect();
        Cone::new(self.ambient_rank, rays)
    }
}

/// Dual generators: `{y : y · g >= 0 for all g}`.
fn dual_generators(dim: usize, gens: &[IntVector]) -> ConeGenerators {
    let cons: Vec<Vec<BigInt>> = gens.iter().map(|g| big(g)).collect();
    dd::generators_of(dim, &cons)
}

fn cone_contains(dim: usize, gens: &[IntVector], x: &[i64]) -> bool {
    let dual = dual_generators(dim, gens);
    let bx = big(x);
    dual.rays.iter().all(|y| !dot_big(y, &bx).is_negative())
        && dual.lineality.iter().all(|y| dot_big(y, &bx).is_zero())
}

fn generators_to_rays(g: &ConeGenerators) -> Result<Vec<IntVector>> {
    let mut out = Vec::with_capacity(g.rays.len() + 2 * g.lineality.len());
    for r in &g.rays {
        out.push(small(r)?);
    }
    for l in &g.lineality {
        let l = primitive_big(l.clone());
        out.push(small(&l)?);
        out.push(small(&l.iter().map(|x| -x).collect::<Vec<_>>())?);
    }
    Ok(out)
}

/// Both presentations of a dual cone.
#[derive(Debug, Clone)]
pub struct DualCone {
    pub halfspaces: HPolyhedron,
    pub cone: Cone,
}

/// `σ^∨ = {u : u · v_i >= 0}` as half-spaces and as minimal ray generators.
pub fn dual_cone(c: &Cone) -> Result<DualCone> {
    let n = c.ambient_rank;
    let halfspaces = HPolyhedron::from_inequalities(
        n,
        c.rays
            .iter()
            .map(|r| Inequality::closed(r.clone(), Rational::zero()))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let mut rays = generators_to_rays(&dual_generators(n, &c.rays))?;
    rays.sort();
    Ok(DualCone {
        halfspaces,
        cone: Cone::from_minimal_rays(n, rays),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeClass {
    pub strongly_convex: bool,
    pub full_dimensional: bool,
    pub span_rank: usize,
}

pub fn classify_cone(c: &Cone) -> ConeClass {
    let n = c.ambient_rank;
    let span_rank = linalg::rank_int(&c.rays);
    // A cone contains a line exactly when its dual is not full-dimensional.
    let dual = dual_generators(n, &c.rays);
    let mut dual_gens: Vec<IntVector> = Vec::new();
    for g in dual.rays.iter().chain(&dual.lineality) {
        if let Ok(v) = small(g) {
            dual_gens.push(v);
        }
    }
    ConeClass {
        strongly_convex: linalg::rank_int(&dual_gens) == n,
        full_dimensional: span_rank == n,
        span_rank,
    }
}

/// Result of splitting off the torus factor of a cone.
#[derive(Debug, Clone)]
pub struct TorusSplit {
    /// The cone in coordinates of `lattice`, full-dimensional there.
    pub cone: Cone,
    /// `span(σ) ∩ N`, basis rows in the original coordinates.
    pub lattice: Lattice,
    pub torus_rank: usize,
}

impl TorusSplit {
    /// Maps a vector in split coordinates back to the original `N`.
    pub fn lift(&self, coords: &[i64]) -> IntVector {
        let n = self.lattice.ambient_rank();
        let mut v = vec![0i64; n];
        for (c, row) in coords.iter().zip(self.lattice.basis()) {
            for (x, &b) in v.iter_mut().zip(row) {
                *x += c * b;
            }
        }
        v
    }
}

/// Rewrites a strongly convex cone as a full-dimensional cone in the
/// saturated sublattice `N' = span(σ) ∩ N`.
pub fn split_torus_factors(c: &Cone, lattice: &Lattice) -> Result<TorusSplit> {
    let n = c.ambient_rank;
    if lattice.ambient_rank() != n || !lattice.is_full_rank() {
        return Err(Error::input(
            "N must be a full-rank lattice in the cone's ambient space",
        ));
    }
    let class = classify_cone(c);
    if !class.strongly_convex {
        return Err(Error::NotStronglyConvex);
    }
    if class.full_dimensional {
        return Ok(TorusSplit {
            cone: c.clone(),
            lattice: lattice.clone(),
            torus_rank: 0,
        });
    }
    let in_n = c
        .rays
        .iter()
        .map(|r| {
            let co = lattice
                .coordinates(r)
                .ok_or_else(|| Error::Containment(format!("ray {r:?} is not in N")))?;
            small(&co)
        })
        .collect::<Result<Vec<_>>>()?;
    let span = if in_n.is_empty() {
        None
    } else {
        Some(hermite_basis(&in_n)?.saturation())
    };
    let k = span.as_ref().map_or(0, Lattice::rank);
    let (rays, sub_basis) = match &span {
        Some(s) => {
            let rays = in_n
                .iter()
                .map(|r| small(&s.coordinates(r).expect("saturated span contains its rays")))
                .collect::<Result<Vec<_>>>()?;
            (rays, s.basis().to_vec())
        }
        None => (Vec::new(), Vec::new()),
    };
    // Express N' in the original coordinates.
    let rows: Vec<IntVector> = sub_basis
        .iter()
        .map(|b| {
            let mut v = vec![0i64; n];
            for (coef, row) in b.iter().zip(lattice.basis()) {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x += coef * y;
                }
            }
            v
        })
        .collect();
    let sub_lattice = if rows.is_empty() {
        Lattice::zero(n)
    } else {
        hermite_basis(&rows)?
    };
    Ok(TorusSplit {
        cone: Cone::from_minimal_rays(k, rays),
        lattice: sub_lattice,
        torus_rank: n - k,
    })
}

fn homogenize_point(x: &[Rational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let mut g: Vec<BigInt> = x.iter().map(|v| (v * &l).to_integer()).collect();
    g.push(l);
    primitive_big(g)
}

/// Irredundant H-representation of a V-polyhedron. Equalities of a
/// lower-dimensional polyhedron appear as pairs of opposite inequalities.
pub fn hull_to_halfspaces(v: &VPolyhedron) -> Result<HPolyhedron> {
    let n = v.ambient_rank;
    let mut gens: Vec<Vec<BigInt>> = v.vertices.iter().map(|x| homogenize_point(x)).collect();
    for r in &v.rays {
        let mut g = big(r);
        g.push(BigInt::zero());
        gens.push(g);
    }
    let dual = dd::generators_of(n + 1, &gens);
    let mut h = HPolyhedron::new(n);
    let split = |y: &[BigInt]| -> (Vec<BigInt>, Rational) {
        let normal = y[..n].to_vec();
        let offset = Rational::from_integer(-y[n].clone());
        (normal, offset)
    };
    // A ray equal to (0, .., 0, 1) modulo the lineality space only encodes
    // the trivial inequality 1 >= 0.
    let lin_rows: Vec<RatVector> = dual
        .lineality
        .iter()
        .map(|l| {
            l.iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut unit = vec![Rational::zero(); n + 1];
    unit[n] = Rational::one();
    let trivial = |y: &[BigInt]| -> bool {
        let mut rows = lin_rows.clone();
        rows.push(
            y.iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect(),
        );
        let r = linalg::rank(&rows);
        rows.push(unit.clone());
        linalg::rank(&rows) == r
    };
    for y in &dual.rays {
        let (a, b) = split(y);
        if a.iter().all(Zero::is_zero) || trivial(y) {
            continue;
        }
        h.push(Inequality::from_big(a, b, false)?)?;
    }
    for y in &dual.lineality {
        let (a, b) = split(y);
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        let neg: Vec<BigInt> = a.iter().map(|x| -x).collect();
        h.push(Inequality::from_big(a, b.clone(), false)?)?;
        h.push(Inequality::from_big(neg, -b, false)?)?;
    }
    Ok(h)
}

/// Vertices and recession rays of the closure of `h`; `None` when empty.
///
/// For polyhedra with a lineality space the lineality directions are
/// reported as opposite ray pairs.
pub fn halfspaces_to_hull(h: &HPolyhedron) -> Result<Option<VPolyhedron>> {
    let n = h.ambient_rank;
    let mut cons: Vec<Vec<BigInt>> = Vec::with_capacity(h.inequalities.len() + 1);
    for ineq in &h.inequalities {
        let q = ineq.offset.denom().clone();
        let p = ineq.offset.numer().clone();
        let mut row: Vec<BigInt> = ineq.normal.iter().map(|&a| &q * a).collect();
        row.push(-p);
        cons.push(row);
    }
    let mut s_pos = vec![BigInt::zero(); n + 1];
    s_pos[n] = BigInt::one();
    cons.push(s_pos);
    let gens = dd::generators_of(n + 1, &cons);

    let mut vertices: Vec<RatVector> = Vec::new();
    let mut rays: Vec<IntVector> = Vec::new();
    for g in &gens.rays {
        let s = &g[n];
        if s.is_positive() {
            let sr = Rational::from_integer(s.clone());
            vertices.push(
                g[..n]
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()) / &sr)
                    .collect(),
            );
        } else {
            rays.push(small(&primitive_big(g[..n].to_vec()))?);
        }
    }
    for l in &gens.lineality {
        let l = primitive_big(l[..n].to_vec());
        rays.push(small(&l)?);
        rays.push(small(&l.iter().map(|x| -x).collect::<Vec<_>>())?);
    }
    if vertices.is_empty() {
        return Ok(None);
    }
    vertices.sort();
    rays.sort();
    Ok(Some(VPolyhedron {
        ambient_rank: n,
        vertices,
        rays,
    }))
}
