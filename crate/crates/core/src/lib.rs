//! Exact F-signatures of affine toric rings, pairs `(R, D)` and triples
//! `(R, D, a^t)`, computed as lattice-relative volumes of half-open
//! polytopes, together with brute-force counting oracles that check them.
//!
//! All arithmetic is exact: integers are arbitrary precision where they can
//! grow and every coefficient, volume and count is a [`Rational`] or an
//! integer.

pub mod cone;
mod dd;
pub mod error;
pub mod fsignature;
pub mod lattice;
mod linalg;
pub mod oracle;
pub mod polytope;

pub use cone::{
    classify_cone, dual_cone, halfspaces_to_hull, hull_to_halfspaces, split_torus_factors, Cone,
    ConeClass, DualCone, HPolyhedron, Inequality, TorusSplit, VPolyhedron,
};
pub use error::{Error, Result};
pub use fsignature::{
    build_p_polytope, check_singh_presentation, f_signature, f_signature_pair, f_signature_triple,
    newton_polyhedron, q_gorenstein_vector, singh_count, singh_ring, FSignatureResult,
    MonomialIdeal, SinghPresentation, ToricRing, TorusDivisor, TripleOptions, TripleProblem,
};
pub use lattice::{
    hermite_basis, lattice_index, min_positive_pairing, primitivize, IntVector, Lattice,
    LatticeIndex, RatVector, Rational,
};
pub use polytope::{
    count_scaled_lattice_points, minkowski_sum_intersect, volume, HalfOpenPolytope,
};

/// Parses `"n"` or `"n/d"` into an exact rational. Decimal and exponent
/// notation are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let parse = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::input(format!(
                "{s:?} is not a rational of the form num/den"
            )));
        }
        t.parse::<BigInt>()
            .map_err(|_| Error::input(format!("{s:?} is not a rational of the form num/den")))
    };
    let (n, d) = (parse(num)?, parse(den)?);
    if d.is_zero() {
        return Err(Error::input(format!("{s:?} has zero denominator")));
    }
    Ok(Rational::new(n, d))
}

/// `"num/den"` rendering used in every serialized output.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}
