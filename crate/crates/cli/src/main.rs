//! `toric-fsig`: exact F-signatures of toric rings, pairs and triples from
//! JSON problem files, plus brute-force verification.

mod output;
mod problem;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use toric_fsig::{
    f_signature, f_signature_pair, f_signature_triple, format_rational, lattice_index,
    polytope::vertices, Error, Lattice, LatticeIndex, Rational, TripleOptions,
};

use output::{Check, LatticeVolume, ResultFile};
use problem::ProblemFile;

#[derive(Parser)]
#[command(
    name = "toric-fsig",
    version,
    about = "Exact F-signatures of affine toric rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the signature of the ring, pair or triple in a problem file.
    Compute {
        file: PathBuf,
        /// Treat the file as a pair (zero divisor when none is given).
        #[arg(long, conflicts_with = "triple")]
        pair: bool,
        /// Treat the file as a triple; needs `ideal` and `t`.
        #[arg(long)]
        triple: bool,
        /// Skip the Q-Gorenstein reflection cross-check for triples.
        #[arg(long)]
        no_reflection_check: bool,
        /// Also report the index [M : L] and the volume measured against M.
        #[arg(long)]
        lattice_volume: bool,
    },
    /// Run a brute-force oracle against the polytope pipeline.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Comma-separated scales.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        /// Search radius of the free-generator oracle.
        #[arg(long, default_value_t = 8)]
        radius: u32,
        /// Second factor for `--mode product` (defaults to the file itself).
        #[arg(long)]
        with: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Plain,
    Pair,
    Triple,
    Singh,
    Product,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_)
            | Error::NotStronglyConvex
            | Error::NotEffective { .. }
            | Error::DegeneratePairing { .. }
            | Error::Containment(_)
            | Error::Range(_) => 2,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("TORIC_FSIG_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::input(format!(
            "TORIC_FSIG_THREADS={raw:?} is not a positive integer"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::input(e.to_string()))
}

fn compute(
    file: &Path,
    pair: bool,
    triple: bool,
    reflection_check: bool,
    lattice_volume: bool,
) -> Result<ResultFile, Failure> {
    let pf = ProblemFile::load(file)?;
    let ring = pf.ring()?;
    let as_triple = triple || (!pair && pf.ideal.is_some() && pf.t.is_some());
    let as_pair = !as_triple && (pair || pf.divisor.is_some());

    let (kind, res) = if as_triple {
        let problem = pf.triple()?;
        (
            "triple",
            f_signature_triple(&problem, TripleOptions { reflection_check })?,
        )
    } else if as_pair {
        ("pair", f_signature_pair(&ring, &pf.divisor_or_zero()?)?)
    } else {
        ("plain", f_signature(&ring)?)
    };

    let mut out = ResultFile::new(kind, &res, vertices(&res.polytope)?);
    let v = &res.value;
    let in_range = if kind == "plain" {
        v > &Rational::zero() && v <= &Rational::one()
    } else {
        v >= &Rational::zero() && v <= &Rational::one()
    };
    out.checks.push(Check::new("value_in_range", in_range));
    if let Some(reflected) = &res.reflection_value {
        out.checks
            .push(Check::new("reflection_identity", reflected == v));
    }
    if lattice_volume {
        let index = match ring.sublattice() {
            None => BigInt::one(),
            Some(l) => match lattice_index(l, &Lattice::standard(ring.rank()))? {
                LatticeIndex::Finite(i) => i,
                LatticeIndex::Infinite => {
                    return Err(Failure::input("sublattice does not have full rank"))
                }
            },
        };
        out.lattice_volume = Some(LatticeVolume {
            volume_m: format_rational(&(v * Rational::from_integer(index.clone()))),
            index: index.to_string(),
        });
    }
    Ok(out)
}

fn print_json<T: serde::Serialize>(value: &T) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(value).expect("serializable output");
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn run(cli: Cli) -> Result<bool, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Compute {
            file,
            pair,
            triple,
            no_reflection_check,
            lattice_volume,
        } => {
            let out = compute(&file, pair, triple, !no_reflection_check, lattice_volume)?;
            let ok = out.checks.iter().all(|c| c.pass);
            print_json(&out);
            Ok(ok)
        }
        Command::Verify {
            file,
            mode,
            q,
            radius,
            with,
        } => {
            if q.contains(&0) {
                return Err(Failure::input("scales in --q must be positive"));
            }
            let out = verify::run(&file, mode, &q, radius, with.as_deref())?;
            let ok = out.pass;
            print_json(&out);
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
