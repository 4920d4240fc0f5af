//! JSON renderings of exact results.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{Number, Value};
use toric_fsig::{format_rational, FSignatureResult, Rational};

const DECIMAL_DIGITS: u32 = 20;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            pass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LatticeVolume {
    /// `[M : L]`.
    pub index: String,
    /// The same polytope measured against `M`.
    pub volume_m: String,
}

#[derive(Debug, Serialize)]
pub struct ResultFile {
    pub kind: &'static str,
    pub value: Value,
    pub decimal: String,
    pub polytope: PolytopeOut,
    pub torus_rank: usize,
    pub qgorenstein: Option<Vec<String>>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_volume: Option<LatticeVolume>,
}

#[derive(Debug, Serialize)]
pub struct PolytopeOut {
    pub vertices: Vec<Vec<String>>,
}

impl ResultFile {
    pub fn new(kind: &'static str, res: &FSignatureResult, vertices: Vec<Vec<Rational>>) -> Self {
        ResultFile {
            kind,
            value: exact_value(&res.value),
            decimal: decimal(&res.value),
            polytope: PolytopeOut {
                vertices: vertices.iter().map(|v| strings(v)).collect(),
            },
            torus_rank: res.torus_rank,
            qgorenstein: res.qgorenstein_vector.as_deref().map(strings),
            checks: Vec::new(),
            lattice_volume: None,
        }
    }
}

pub fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn big_number(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integer literal"))
}

/// `{"num": n, "den": d}` with arbitrarily large JSON integers.
pub fn exact_value(x: &Rational) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("num".into(), big_number(x.numer()));
    m.insert("den".into(), big_number(x.denom()));
    Value::Object(m)
}

/// Rounded to `DECIMAL_DIGITS` places, half away from zero. Display only.
pub fn decimal(x: &Rational) -> String {
    let scale = BigInt::from(10u32).pow(DECIMAL_DIGITS);
    let scaled = x.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + Rational::new(1.into(), 2.into()))
        .floor()
        .to_integer();
    let (int, frac) = (&rounded / &scale, &rounded % &scale);
    let sign = if x.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    format!(
        "{sign}{int}.{frac:0>width$}",
        width = DECIMAL_DIGITS as usize
    )
}
