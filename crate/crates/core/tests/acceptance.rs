//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{load_table, oracle, random_theta, rat, test_thetas, theta, TABLES};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rootfrac::bounds::{check_strict_increase, inequality_sweep, StrictIncrease};
use rootfrac::exact::RealInterval;
use rootfrac::periodic::{
    chi_table, classify_beatty, detect_linear_periodicity, m_formula, m_formula_e2l, threshold,
    verify_certificate, CertificateStatus,
};
use rootfrac::stats::exceptional_density;
use rootfrac::{m_sequence, m_theta, n0, MValue, ThetaExpr};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn coprime_pairs(max: u64) -> Vec<(u64, u64)> {
    (1..=max)
        .flat_map(|k| (1..=max).map(move |l| (k, l)))
        .filter(|&(k, l)| k.gcd(&l) == 1)
        .collect()
}

/// All nine tables, 90 entries each, including infinite entries and the N0 box; under 60 s.
fn table_reproduction() -> Outcome {
    const BUDGET: Duration = Duration::from_secs(60);
    let start = Instant::now();
    let mut compared = 0;
    for (file, t) in TABLES {
        let table = load_table(file);
        let seq = m_sequence(&theta(t), 1, 90).map_err(|e| format!("{t}: {e}"))?;
        for (n, (got, want)) in (1u64..).zip(seq.values.iter().zip(&table.values)) {
            ensure(got == want, || {
                format!("theta={t} n={n}: got {got}, table has {want}")
            })?;
            compared += 1;
        }
        ensure(seq.n0_marker == table.boxed, || {
            format!(
                "theta={t}: box at {}, table boxes {}",
                seq.n0_marker, table.boxed
            )
        })?;
    }
    let elapsed = start.elapsed();
    ensure(compared == 810, || format!("compared {compared} values"))?;
    ensure(elapsed < BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "810/810 values, 9/9 boxes, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

/// M_e(1) = 1 and M_e(n) = n - 1 on [2, 10^4].
fn e_minus_one() -> Outcome {
    let seq = m_sequence(&ThetaExpr::e(), 1, 10_000).map_err(|e| e.to_string())?;
    for (n, v) in seq.iter() {
        let want = if n == 1 { 1 } else { n - 1 };
        ensure(v == MValue::Finite(want), || {
            format!("n={n}: got {v}, want {want}")
        })?;
    }
    Ok("n in [1, 10000], exact".into())
}

/// chi_table(3, 7) and the closed form for coprime k, l <= 10 on [threshold, 2000].
fn chi_algorithm() -> Outcome {
    let c = chi_table(3, 7).map_err(|e| e.to_string())?;
    let rows: Vec<_> = c
        .rows
        .iter()
        .map(|r| (r.r, r.u, r.v, r.chi.clone()))
        .collect();
    let want = vec![
        (0, 0, 3, rat(-1, 1)),
        (1, 2, 5, rat(-4, 3)),
        (2, 5, 1, rat(-2, 3)),
    ];
    ensure(rows == want, || format!("chi_table(3,7) = {rows:?}"))?;
    let pairs = coprime_pairs(10);
    let checked: u64 = pairs
        .par_iter()
        .map(|&(k, l)| -> Result<u64, String> {
            let t = ThetaExpr::exp_rational(k, l).unwrap();
            let from = threshold(k, l).map_err(|e| e.to_string())?;
            for n in from..=2000 {
                let f = m_formula(k, l, n).map_err(|e| e.to_string())?;
                let m = m_theta(&t, n).map_err(|e| e.to_string())?;
                ensure(m == MValue::Finite(f), || {
                    format!("k={k} l={l} n={n}: formula {f}, certified {m}")
                })?;
            }
            Ok(2001u64.saturating_sub(from))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    Ok(format!(
        "chi(3,7) exact; {} coprime pairs, {checked} values",
        pairs.len()
    ))
}

/// e^(2/l) closed form for odd l in [3, 21] and every n in [1, 500].
fn two_over_odd() -> Outcome {
    for l in (3..=21u64).step_by(2) {
        let t = ThetaExpr::exp_rational(2, l).unwrap();
        let seq = m_sequence(&t, 1, 500).map_err(|e| e.to_string())?;
        for (n, v) in seq.iter() {
            let f = m_formula_e2l(l, n).map_err(|e| e.to_string())?;
            ensure(v == MValue::Finite(f), || {
                format!("l={l} n={n}: formula {f}, certified {v}")
            })?;
        }
    }
    Ok("l in {3,...,21} odd, n in [1, 500]".into())
}

/// Detection on windows n = 1..200 recovers (k, l); verification at 10^4 upgrades the certificate.
fn detector_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut pairs = Vec::new();
    while pairs.len() < 20 {
        let k = rng.gen_range(1..=6u64);
        let l = rng.gen_range(k..=20u64);
        if k.gcd(&l) == 1 && !pairs.contains(&(k, l)) {
            pairs.push((k, l));
        }
    }
    pairs
        .par_iter()
        .try_for_each(|&(k, l)| -> Result<(), String> {
            let t = ThetaExpr::exp_rational(k, l).unwrap();
            let v = m_sequence(&t, 1, 200)
                .and_then(|s| s.finite_values())
                .map_err(|e| e.to_string())?;
            let cert = detect_linear_periodicity(&v, 1, 10, 8)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("k={k} l={l}: nothing detected"))?;
            ensure((cert.k, cert.l) == (k, l), || {
                format!("k={k} l={l}: detected ({}, {})", cert.k, cert.l)
            })?;
            let verified =
                verify_certificate(&t, &cert, 10_000).map_err(|e| format!("k={k} l={l}: {e}"))?;
            ensure(
                verified.status == CertificateStatus::FormulaVerified,
                || format!("k={k} l={l}: status {:?}", verified.status),
            )
        })?;
    Ok(format!(
        "20/20 pairs recovered and formula-verified: {pairs:?}"
    ))
}

/// Six inequality families, 1000 seeded samples each, zero failures.
fn inequality_suites() -> Outcome {
    let summaries = inequality_sweep(42, 1000).map_err(|e| e.to_string())?;
    ensure(summaries.len() == 6, || {
        format!("{} families", summaries.len())
    })?;
    for s in &summaries {
        ensure(s.samples == 1000 && s.passed(), || {
            format!(
                "{s}; first failure: {}",
                s.failures
                    .first()
                    .map(ToString::to_string)
                    .unwrap_or_default()
            )
        })?;
    }
    let names: Vec<_> = summaries.iter().map(|s| s.family).collect();
    Ok(format!(
        "seed 42, 1000 samples each, 0 failures: {}",
        names.join(", ")
    ))
}

/// 500 random (theta, n) against the 1000-digit reference evaluator.
fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let cases: Vec<(ThetaExpr, u64)> = (0..500)
        .map(|_| (random_theta(&mut rng), rng.gen_range(1..=1000)))
        .collect();
    cases
        .par_iter()
        .try_for_each(|(t, n)| -> Result<(), String> {
            let want = oracle::m_value(t, *n)
                .ok_or_else(|| format!("theta={t} n={n}: reference undecided"))?;
            let got = m_theta(t, *n).map_err(|e| format!("theta={t} n={n}: {e}"))?;
            ensure(got == want, || {
                format!("theta={t} n={n}: certified {got}, reference {want}")
            })
        })?;
    Ok(format!("500/500 agree at {} digits", oracle::DIGITS))
}

/// Windows [N0, N0 + 500]: strictly increasing for 3/2, 2, e; a repeat for 17, pi, 20.
fn strict_increase() -> Outcome {
    let mut found = Vec::new();
    for (t, increasing) in [
        ("3/2", true),
        ("2", true),
        ("e", true),
        ("17", false),
        ("pi", false),
        ("20", false),
    ] {
        let th = theta(t);
        let start = n0(&th).map_err(|e| e.to_string())?;
        let outcome = check_strict_increase(&th, start, start + 500).map_err(|e| e.to_string())?;
        let ok = (outcome == StrictIncrease::StrictlyIncreasing) == increasing;
        ensure(ok, || format!("theta={t}: {outcome:?}"))?;
        if let StrictIncrease::RepeatFoundAt(n) = outcome {
            found.push(format!("{t}@{n}"));
        }
    }
    Ok(format!(
        "3/2, 2, e strictly increasing; repeats {}",
        found.join(" ")
    ))
}

/// Every M(n) with N0 < n <= 2000 is one of the two Beatty candidates.
fn beatty_membership() -> Outcome {
    let mut total = 0;
    for t in test_thetas() {
        let start = n0(&t).map_err(|e| e.to_string())? + 1;
        (start..=2000).into_par_iter().try_for_each(|n| {
            classify_beatty(&t, n)
                .map(|_| ())
                .map_err(|e| format!("theta={t} n={n}: {e}"))
        })?;
        total += 2001 - start;
        if let ThetaExpr::ExpRational { k, l } = t {
            let limit = threshold(k, l).map_err(|e| e.to_string())?;
            let s = exceptional_density(&t, 2000).map_err(|e| e.to_string())?;
            ensure(s.members.iter().all(|&n| n < limit), || {
                format!(
                    "theta={t}: exceptional members {:?} with threshold {limit}",
                    s.members
                )
            })?;
        }
    }
    Ok(format!(
        "{total} values classified; exponential exceptions below threshold"
    ))
}

/// |M(n) - n / log theta| <= 2 at n = 10^2, 10^3, 10^4.
fn asymptotics() -> Outcome {
    for t in test_thetas() {
        for n in [100u64, 1000, 10_000] {
            let m = m_theta(&t, n)
                .map_err(|e| e.to_string())?
                .finite()
                .ok_or("infinite value")?;
            let decided = [64u32, 256, 1024].iter().find_map(|&p| {
                let q = RealInterval::from_int(n, p + 8)
                    .div(&t.ln_enclose(p + 8), p)
                    .unwrap();
                let lo = RealInterval::from_int(m as i64 - 2, p);
                let hi = RealInterval::from_int(m + 2, p);
                if lo.certainly_le(&q) && q.certainly_le(&hi) {
                    Some(true)
                } else if q.certainly_lt(&lo) || hi.certainly_lt(&q) {
                    Some(false)
                } else {
                    None
                }
            });
            ensure(decided == Some(true), || {
                format!("theta={t} n={n}: M={m}, verdict {decided:?}")
            })?;
        }
    }
    Ok(format!(
        "{} thetas x n in {{10^2, 10^3, 10^4}}, tolerance 2/n",
        test_thetas().len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("table reproduction", table_reproduction),
        ("M_e(n) = n - 1", e_minus_one),
        ("chi table and closed form", chi_algorithm),
        ("e^(2/l) closed form", two_over_odd),
        ("detector round trip", detector_round_trip),
        ("inequality suites", inequality_suites),
        ("oracle equivalence", oracle_equivalence),
        ("strict increase dichotomy", strict_increase),
        ("Beatty membership", beatty_membership),
        ("asymptotic growth", asymptotics),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({secs:.1}s): {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
