//! Problem files: one ring, optionally with a divisor, ideal and exponent.

use std::path::Path;

use serde::Deserialize;
use toric_fsig::{
    parse_rational, Cone, IntVector, MonomialIdeal, Rational, ToricRing, TorusDivisor,
    TripleProblem,
};

use crate::Failure;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub rank: usize,
    #[serde(default)]
    pub rays: Vec<IntVector>,
    /// Basis of a sublattice `L` of `M`.
    pub lattice: Option<Vec<IntVector>>,
    /// One `"num/den"` coefficient per ray.
    pub divisor: Option<Vec<String>>,
    /// Exponent vectors of the monomial generators.
    pub ideal: Option<Vec<IntVector>>,
    pub t: Option<String>,
    /// Semigroup generators, for `verify --mode singh`.
    pub generators: Option<Vec<IntVector>>,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }

    pub fn ring(&self) -> Result<ToricRing, Failure> {
        let cone = Cone::new(self.rank, self.rays.clone())?;
        match &self.lattice {
            None => Ok(ToricRing::new(cone)?),
            Some(basis) => {
                let lattice = toric_fsig::hermite_basis(basis)?;
                if lattice.ambient_rank() != self.rank {
                    return Err(Failure::input(
                        "lattice basis vectors have the wrong length",
                    ));
                }
                Ok(ToricRing::with_lattice(cone, lattice)?)
            }
        }
    }

    pub fn divisor(&self) -> Result<Option<TorusDivisor>, Failure> {
        let Some(coeffs) = &self.divisor else {
            return Ok(None);
        };
        if coeffs.len() != self.rays.len() {
            return Err(Failure::input(format!(
                "divisor has {} coefficients but there are {} rays",
                coeffs.len(),
                self.rays.len()
            )));
        }
        let parsed = coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(TorusDivisor::new(parsed)?))
    }

    pub fn divisor_or_zero(&self) -> Result<TorusDivisor, Failure> {
        Ok(self
            .divisor()?
            .unwrap_or_else(|| TorusDivisor::zero(self.rays.len())))
    }

    pub fn t(&self) -> Result<Option<Rational>, Failure> {
        self.t
            .as_deref()
            .map(parse_rational)
            .transpose()
            .map_err(Failure::from)
    }

    pub fn triple(&self) -> Result<TripleProblem, Failure> {
        let ideal = self
            .ideal
            .clone()
            .ok_or_else(|| Failure::input("a triple needs an \"ideal\""))?;
        let t = self
            .t()?
            .ok_or_else(|| Failure::input("a triple needs an exponent \"t\""))?;
        Ok(TripleProblem::new(
            self.ring()?,
            self.divisor_or_zero()?,
            MonomialIdeal::new(ideal)?,
            t,
        )?)
    }

    pub fn generators(&self) -> Result<&[IntVector], Failure> {
        self.generators
            .as_deref()
            .ok_or_else(|| Failure::input("singh mode needs \"generators\""))
    }
}
