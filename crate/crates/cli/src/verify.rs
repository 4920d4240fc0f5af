//! `verify`: drives the brute-force oracles.

use std::path::Path;

use num_bigint::BigInt;
use serde::Serialize;
use toric_fsig::oracle::{
    bruteforce_free_generators, bruteforce_triple_count, decay_bound, product_check, OracleReport,
};
use toric_fsig::{
    build_p_polytope, check_singh_presentation, count_scaled_lattice_points, f_signature,
    f_signature_triple, format_rational, singh_count, singh_ring, volume, HalfOpenPolytope,
    Rational, TripleOptions,
};

use crate::output::Check;
use crate::problem::ProblemFile;
use crate::{Failure, Mode};

#[derive(Debug, Serialize)]
pub struct VerifyFile {
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<OracleReport>,
    /// `a'` counts in triple mode; `report.counts` holds the `a^a` counts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_prime: Option<Vec<u64>>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn polytope_counts(p: &HalfOpenPolytope, qs: &[u64]) -> Result<Vec<u64>, Failure> {
    Ok(qs
        .iter()
        .map(|&q| count_scaled_lattice_points(p, q))
        .collect::<Result<_, _>>()?)
}

pub fn run(
    file: &Path,
    mode: Mode,
    qs: &[u64],
    radius: u32,
    with: Option<&Path>,
) -> Result<VerifyFile, Failure> {
    let pf = ProblemFile::load(file)?;
    let mut checks = Vec::new();
    let mut value = None;
    let mut a_prime = None;
    let (name, report) = match mode {
        Mode::Plain | Mode::Pair => {
            let ring = pf.ring()?;
            let divisor = match mode {
                Mode::Pair => Some(pf.divisor_or_zero()?),
                _ => None,
            };
            let p = build_p_polytope(&ring, divisor.as_ref())?;
            let exact = polytope_counts(&p, qs)?;
            let mut counts = Vec::new();
            for (&q, &expected) in qs.iter().zip(&exact) {
                let c = bruteforce_free_generators(&ring, divisor.as_ref(), q, radius)?;
                let wider = bruteforce_free_generators(&ring, divisor.as_ref(), q, 2 * radius)?;
                checks.push(Check::new(format!("radius_stable_q{q}"), c == wider));
                let integral = divisor.as_ref().is_none_or(|d| {
                    d.coefficients()
                        .iter()
                        .all(|a| (a * Rational::from_integer(BigInt::from(q))).is_integer())
                });
                if integral {
                    checks.push(Check::new(
                        format!("oracle_matches_polytope_q{q}"),
                        c == expected,
                    ));
                }
                counts.push(c);
            }
            let target = volume(&p)?;
            value = Some(format_rational(&target));
            let report =
                OracleReport::from_counts(qs, counts, p.ambient_rank(), target, Some(radius));
            checks.push(Check::new("deviation_decay", report.pass));
            let name = if divisor.is_some() { "pair" } else { "plain" };
            (name, Some(report))
        }
        Mode::Triple => {
            let problem = pf.triple()?;
            let res = f_signature_triple(&problem, TripleOptions::default())?;
            let mut frak = Vec::new();
            let mut prime = Vec::new();
            let mut gaps = Vec::new();
            for &q in qs {
                let c = bruteforce_triple_count(&problem, q)?;
                checks.push(Check::new(
                    format!("a_frak_le_a_prime_q{q}"),
                    c.a_frak <= c.a_prime,
                ));
                gaps.push(Rational::new(
                    BigInt::from(c.a_prime) - BigInt::from(c.a_frak),
                    BigInt::from(q).pow(problem.ring.rank() as u32),
                ));
                frak.push(c.a_frak);
                prime.push(c.a_prime);
            }
            checks.push(Check::new(
                "gap_nonincreasing",
                gaps.windows(2).all(|w| w[0] >= w[1]),
            ));
            checks.push(Check::new("gap_decay", decay_bound(qs, &gaps).1));
            if let Some(r) = &res.reflection_value {
                checks.push(Check::new("reflection_identity", *r == res.value));
            }
            value = Some(format_rational(&res.value));
            a_prime = Some(prime);
            let report = OracleReport::from_counts(qs, frak, problem.ring.rank(), res.value, None);
            ("triple", Some(report))
        }
        Mode::Singh => {
            let gens = pf.generators()?;
            let pres = check_singh_presentation(gens, pf.rank)?;
            checks.push(Check::new("full", pres.full));
            checks.push(Check::new("property_star", pres.property_star));
            if pres.full && pres.property_star {
                let ring = singh_ring(gens, pf.rank)?;
                let p = build_p_polytope(&ring, None)?;
                let exact = polytope_counts(&p, qs)?;
                let mut counts = Vec::new();
                for (&q, &expected) in qs.iter().zip(&exact) {
                    let c = singh_count(gens, pf.rank, q)?;
                    checks.push(Check::new(
                        format!("singh_matches_polytope_q{q}"),
                        c == expected,
                    ));
                    counts.push(c);
                }
                let target = volume(&p)?;
                value = Some(format_rational(&target));
                (
                    "singh",
                    Some(OracleReport::from_counts(qs, counts, pf.rank, target, None)),
                )
            } else {
                ("singh", None)
            }
        }
        Mode::Product => {
            let r1 = pf.ring()?;
            let r2 = match with {
                Some(path) => ProblemFile::load(path)?.ring()?,
                None => r1.clone(),
            };
            checks.push(Check::new("product_rule", product_check(&r1, &r2)?));
            let res = f_signature(&r1.product(&r2))?;
            let counts = polytope_counts(&res.polytope, qs)?;
            value = Some(format_rational(&res.value));
            let n = res.polytope.ambient_rank();
            (
                "product",
                Some(OracleReport::from_counts(qs, counts, n, res.value, None)),
            )
        }
    };
    let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
    Ok(VerifyFile {
        mode: name,
        value,
        report,
        a_prime,
        checks,
        pass,
    })
}
