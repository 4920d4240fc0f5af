//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line (written
//! straight to stderr so it shows without `--nocapture`) and then asserts.
//! Criteria run one at a time so the wall-clock limits are not skewed by
//! the other tests.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use toric_fsig::oracle::{
    bruteforce_free_generators, bruteforce_triple_count, corpus, decay_bound, product_check,
};
use toric_fsig::{
    build_p_polytope, count_scaled_lattice_points, f_signature, f_signature_pair,
    f_signature_triple, singh_count, singh_ring, Cone, IntVector, MonomialIdeal, Rational,
    ToricRing, TorusDivisor, TripleOptions, TripleProblem,
};

static SERIAL: Mutex<()> = Mutex::new(());

type Check = Result<(), String>;

fn criterion(id: u32, title: &str, limit: Duration, body: impl FnOnce() -> Check) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let verdict = match outcome {
        Ok(Ok(())) if elapsed <= limit => Ok(()),
        Ok(Ok(())) => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
        Ok(Err(msg)) => Err(msg),
        Err(_) => Err("panicked".to_string()),
    };
    let line = match &verdict {
        Ok(()) => format!("PASS criterion {id}: {title} ({elapsed:.2?}, limit {limit:?})\n"),
        Err(msg) => format!("FAIL criterion {id}: {title}: {msg}\n"),
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
    if let Err(msg) = verdict {
        panic!("criterion {id} failed: {msg}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> Rational {
    q(n, 1)
}

fn ring(n: usize, rays: &[&[i64]]) -> ToricRing {
    ToricRing::new(Cone::new(n, rays.iter().map(|r| r.to_vec()).collect()).unwrap()).unwrap()
}

fn quadric() -> ToricRing {
    ring(2, &[&[0, 1], &[2, -1]])
}

/// Unimodular change of coordinates used by the invariance criterion.
fn shear() -> Vec<IntVector> {
    vec![vec![2, 1], vec![1, 1]]
}

const PAIR_COEFFS: [(i64, i64); 5] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];

fn pair_values(r: &ToricRing) -> Vec<Rational> {
    PAIR_COEFFS
        .iter()
        .map(|&(n, d)| {
            let div = TorusDivisor::new(vec![q(n, d), int(0)]).unwrap();
            f_signature_pair(r, &div).unwrap().value
        })
        .collect()
}

const TRIPLE_TS: [(i64, i64); 3] = [(0, 1), (1, 4), (1, 2)];

fn triple_problem(r: &ToricRing, ideal: &MonomialIdeal, t: Rational) -> TripleProblem {
    TripleProblem::new(
        r.clone(),
        TorusDivisor::zero(r.cone().rays().len()),
        ideal.clone(),
        t,
    )
    .unwrap()
}

/// Triple values and their reflected counterparts for `t` in `TRIPLE_TS`.
fn triple_values(r: &ToricRing, ideal: &MonomialIdeal) -> Vec<(Rational, Option<Rational>)> {
    TRIPLE_TS
        .iter()
        .map(|&(n, d)| {
            let res =
                f_signature_triple(&triple_problem(r, ideal, q(n, d)), TripleOptions::default())
                    .unwrap();
            (res.value, res.reflection_value)
        })
        .collect()
}

fn xy() -> MonomialIdeal {
    MonomialIdeal::new(vec![vec![1, 1]]).unwrap()
}

#[test]
fn criterion_01_quadric() {
    criterion(
        1,
        "quadric cone has signature 1/2",
        Duration::from_secs(1),
        || {
            let v = f_signature(&quadric()).map_err(|e| e.to_string())?.value;
            ensure(v == q(1, 2), || format!("got {v}"))
        },
    );
}

#[test]
fn criterion_02_regularity() {
    criterion(
        2,
        "orthants give 1, other corpus cones lie in (0,1)",
        Duration::from_secs(30),
        || {
            let each = Duration::from_secs(1);
            for n in 1..=4 {
                let start = Instant::now();
                let v = f_signature(&ToricRing::polynomial(n))
                    .map_err(|e| e.to_string())?
                    .value;
                ensure(v.is_one(), || format!("orthant n = {n} gave {v}"))?;
                ensure(start.elapsed() <= each, || {
                    format!("orthant n = {n} too slow")
                })?;
            }
            for c in corpus().iter().filter(|c| !c.is_unimodular()) {
                let start = Instant::now();
                let v = f_signature(&c.ring().unwrap())
                    .map_err(|e| e.to_string())?
                    .value;
                ensure(v > Rational::zero() && v < Rational::one(), || {
                    format!("{} gave {v}", c.name)
                })?;
                ensure(start.elapsed() <= each, || format!("{} too slow", c.name))?;
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_03_veronese() {
    criterion(
        3,
        "n-th Veronese in n variables gives 1/n",
        Duration::from_secs(4),
        || {
            for n in 2..=5usize {
                let start = Instant::now();
                let v = f_signature(&ToricRing::veronese(n).unwrap())
                    .map_err(|e| e.to_string())?
                    .value;
                ensure(v == q(1, n as i64), || format!("n = {n} gave {v}"))?;
                ensure(start.elapsed() <= Duration::from_secs(1), || {
                    format!("n = {n} too slow")
                })?;
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_04_torus_factors() {
    criterion(4, "torus factors split off", Duration::from_secs(1), || {
        let ray = f_signature(&ring(2, &[&[1, 0]])).map_err(|e| e.to_string())?;
        ensure(ray.value.is_one() && ray.torus_rank == 1, || {
            format!(
                "cone{{(1,0)}} gave {} with torus rank {}",
                ray.value, ray.torus_rank
            )
        })?;
        let lifted =
            f_signature(&ring(3, &[&[0, 1, 0], &[2, -1, 0]])).map_err(|e| e.to_string())?;
        ensure(lifted.value == q(1, 2) && lifted.torus_rank == 1, || {
            format!(
                "quadric in Z^3 gave {} with torus rank {}",
                lifted.value, lifted.torus_rank
            )
        })
    });
}

#[test]
fn criterion_05_oracle_plain() {
    criterion(
        5,
        "free-generator oracle matches lattice counts",
        Duration::from_secs(30),
        || {
            for c in corpus() {
                let r = c.ring().unwrap();
                let p = build_p_polytope(&r, None).map_err(|e| e.to_string())?;
                for qv in [2u64, 3, 4, 8] {
                    let count = count_scaled_lattice_points(&p, qv).map_err(|e| e.to_string())?;
                    let r8 =
                        bruteforce_free_generators(&r, None, qv, 8).map_err(|e| e.to_string())?;
                    let r16 =
                        bruteforce_free_generators(&r, None, qv, 16).map_err(|e| e.to_string())?;
                    ensure(r8 == r16, || {
                        format!("{} q = {qv}: radius 8 gave {r8}, 16 gave {r16}", c.name)
                    })?;
                    ensure(r8 == count, || {
                        format!("{} q = {qv}: oracle {r8}, polytope {count}", c.name)
                    })?;
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_06_pairs() {
    criterion(
        6,
        "pair signatures on the quadric",
        Duration::from_secs(30),
        || {
            let r = quadric();
            let values = pair_values(&r);
            ensure(values[0] == q(1, 2) && values[4].is_zero(), || {
                format!("endpoints {values:?}")
            })?;
            ensure(values.windows(2).all(|w| w[0] > w[1]), || {
                format!("not decreasing: {values:?}")
            })?;
            for (k, &(n, d)) in PAIR_COEFFS.iter().enumerate().skip(1).take(2) {
                let div = TorusDivisor::new(vec![q(n, d), int(0)]).unwrap();
                let qs = [8u64, 16, 32];
                let mut devs = Vec::new();
                for &qv in &qs {
                    let count = bruteforce_free_generators(&r, Some(&div), qv, 8)
                        .map_err(|e| e.to_string())?;
                    let normalized = Rational::new(BigInt::from(count), BigInt::from(qv * qv));
                    let dev = (normalized - &values[k]).abs();
                    if qv == 16 {
                        ensure(dev <= q(8, 16), || {
                            format!("a = {n}/{d}: deviation {dev} at q = 16")
                        })?;
                    }
                    devs.push(dev);
                }
                ensure(devs.windows(2).all(|w| w[0] >= w[1]), || {
                    format!("a = {n}/{d}: deviations {devs:?} grow")
                })?;
                let (c, ok) = decay_bound(&qs, &devs);
                ensure(ok, || {
                    format!("a = {n}/{d}: deviations {devs:?} exceed {c}/q")
                })?;
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_07_triples() {
    criterion(
        7,
        "triples on k[x,y] with (xy)^t",
        Duration::from_secs(60),
        || {
            let r = ToricRing::polynomial(2);
            let values = triple_values(&r, &xy());
            ensure(values.windows(2).all(|w| w[0].0 >= w[1].0), || {
                format!("not nonincreasing in t: {values:?}")
            })?;
            for (v, refl) in &values {
                ensure(refl.as_ref() == Some(v), || {
                    format!("reflection {refl:?} differs from {v}")
                })?;
            }
            for &(n, d) in &TRIPLE_TS[1..] {
                let problem = triple_problem(&r, &xy(), q(n, d));
                let qs = [4u64, 8, 16];
                let mut gaps = Vec::new();
                for &qv in &qs {
                    let c = bruteforce_triple_count(&problem, qv).map_err(|e| e.to_string())?;
                    ensure(c.a_prime >= c.a_frak, || {
                        format!("t = {n}/{d}, q = {qv}: {c:?}")
                    })?;
                    gaps.push(Rational::new(
                        BigInt::from(c.a_prime - c.a_frak),
                        BigInt::from(qv * qv),
                    ));
                }
                ensure(gaps.windows(2).all(|w| w[0] >= w[1]), || {
                    format!("t = {n}/{d}: gaps {gaps:?} grow")
                })?;
                let (c, ok) = decay_bound(&qs, &gaps);
                ensure(ok, || format!("t = {n}/{d}: gaps {gaps:?} exceed {c}/q"))?;
            }
            Ok(())
        },
    );
}

fn veronese_generators(n: usize) -> Vec<IntVector> {
    let mut out = Vec::new();
    let mut v = vec![0i64; n];
    fn rec(i: usize, left: i64, v: &mut Vec<i64>, out: &mut Vec<IntVector>) {
        if i + 1 == v.len() {
            v[i] = left;
            out.push(v.clone());
            return;
        }
        for k in 0..=left {
            v[i] = k;
            rec(i + 1, left - k, v, out);
        }
    }
    rec(0, n as i64, &mut v, &mut out);
    out
}

#[test]
fn criterion_08_singh() {
    criterion(
        8,
        "Singh counts match the sublattice polytope",
        Duration::from_secs(10),
        || {
            let mut presentations = vec![veronese_generators(2), veronese_generators(3)];
            for n in [2usize, 3] {
                presentations.push(
                    (0..n)
                        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                        .collect(),
                );
            }
            for gens in &presentations {
                let n = gens[0].len();
                let r = singh_ring(gens, n).map_err(|e| e.to_string())?;
                let p = build_p_polytope(&r, None).map_err(|e| e.to_string())?;
                for qv in [2u64, 4, 8, 16] {
                    let s = singh_count(gens, n, qv).map_err(|e| e.to_string())?;
                    let c = count_scaled_lattice_points(&p, qv).map_err(|e| e.to_string())?;
                    ensure(s == c, || {
                        format!("{gens:?} q = {qv}: singh {s}, polytope {c}")
                    })?;
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_09_products() {
    criterion(
        9,
        "signature is multiplicative on products",
        Duration::from_secs(5),
        || {
            let cones = corpus();
            let by_name = |name: &str| {
                cones
                    .iter()
                    .find(|c| c.name == name)
                    .unwrap()
                    .ring()
                    .unwrap()
            };
            let pairs = [
                ("quadric", "quadric"),
                ("quadric", "orthant-1"),
                ("a-3", "a-2"),
                ("conifold", "orthant-1"),
                ("cyclic-1-3-111", "a-2"),
            ];
            for (a, b) in pairs {
                let ok = product_check(&by_name(a), &by_name(b)).map_err(|e| e.to_string())?;
                ensure(ok, || format!("{a} x {b}"))?;
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_10_invariance() {
    criterion(
        10,
        "values survive a unimodular change of coordinates",
        Duration::from_secs(5),
        || {
            let a = shear();
            let moved = quadric().transformed(&a).map_err(|e| e.to_string())?;
            let v0 = f_signature(&quadric()).unwrap().value;
            let v1 = f_signature(&moved).map_err(|e| e.to_string())?.value;
            ensure(v0 == v1, || format!("plain: {v0} vs {v1}"))?;
            let (p0, p1) = (pair_values(&quadric()), pair_values(&moved));
            ensure(p0 == p1, || format!("pairs: {p0:?} vs {p1:?}"))?;
            let plane = ToricRing::polynomial(2);
            let plane_moved = plane.transformed(&a).map_err(|e| e.to_string())?;
            let ideal_moved = xy().transformed(&a).map_err(|e| e.to_string())?;
            let t0 = triple_values(&plane, &xy());
            let t1 = triple_values(&plane_moved, &ideal_moved);
            ensure(t0 == t1, || format!("triples: {t0:?} vs {t1:?}"))
        },
    );
}
