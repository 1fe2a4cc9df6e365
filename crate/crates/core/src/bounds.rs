//! Certified checks of the inequalities satisfied by `M`, `g(x) = 1/log(1 + 1/x)`
//! and `exp`, plus the Bernoulli-series approximation of `1/(theta^(1/n) - 1)`.
//!
//! Each inequality is split into links `a < b` or `a <= b`. A link is decided
//! by exact rational comparison when both sides are rational, otherwise by
//! escalating interval enclosures until they separate.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{certified_sign, elementary, escalate, Dyadic, RealInterval, Round};
use crate::mfun::{m_sequence, m_theta, n0, MValue};
use crate::theta::ThetaExpr;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// One side of an inequality.
pub enum Side<'a> {
    Exact(BigRational),
    Real(Box<dyn Fn(u32) -> RealInterval + Sync + 'a>),
}

impl Side<'_> {
    fn enclose(&self, p: u32) -> RealInterval {
        match self {
            Side::Exact(r) => RealInterval::from_rational(r, p),
            Side::Real(f) => f(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

/// Certified outcome of a single inequality link `lhs < rhs` or `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub name: String,
    pub parameters: Vec<(String, String)>,
    pub lhs: RealInterval,
    pub rhs: RealInterval,
    pub strict: bool,
    pub verdict: Verdict,
    /// A certified lower bound of `rhs - lhs` when the link holds, an upper bound when it fails.
    pub margin: Dyadic,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let verdict = if self.holds() { "holds" } else { "FAILS" };
        let dir = if self.holds() { Round::Down } else { Round::Up };
        write!(
            f,
            "{} [{}] {} margin={}",
            self.name,
            params.join(" "),
            verdict,
            self.margin.to_decimal(12, dir)
        )
    }
}

/// The links of one named inequality chain, or `NotApplicable` outside its hypotheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundCheck {
    Checked(Vec<BoundReport>),
    NotApplicable { name: String, reason: String },
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        match self {
            BoundCheck::Checked(links) => links.iter().all(BoundReport::holds),
            BoundCheck::NotApplicable { .. } => true,
        }
    }

    pub fn is_applicable(&self) -> bool {
        matches!(self, BoundCheck::Checked(_))
    }

    pub fn links(&self) -> &[BoundReport] {
        match self {
            BoundCheck::Checked(links) => links,
            BoundCheck::NotApplicable { .. } => &[],
        }
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundCheck::Checked(links) => {
                for (i, link) in links.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{link}")?;
                }
                Ok(())
            }
            BoundCheck::NotApplicable { name, reason } => {
                write!(f, "{name} not applicable: {reason}")
            }
        }
    }
}

fn params(list: &[(&str, String)]) -> Vec<(String, String)> {
    list.iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Decide `lhs < rhs` (strict) or `lhs <= rhs`.
pub fn compare(
    name: &str,
    parameters: Vec<(String, String)>,
    lhs: &Side<'_>,
    rhs: &Side<'_>,
    strict: bool,
) -> Result<BoundReport> {
    if let (Side::Exact(a), Side::Exact(b)) = (lhs, rhs) {
        // unreduced b - a; a gcd on large operands costs more than the comparison itself
        let diff = BigRational::new_raw(
            b.numer() * a.denom() - a.numer() * b.denom(),
            a.denom() * b.denom(),
        );
        let ord = BigInt::zero().cmp(diff.numer());
        let holds = if strict {
            ord == Ordering::Less
        } else {
            ord != Ordering::Greater
        };
        let dir = if holds { Round::Down } else { Round::Up };
        return Ok(BoundReport {
            name: name.into(),
            parameters,
            lhs: RealInterval::from_rational(a, 64),
            rhs: RealInterval::from_rational(b, 64),
            strict,
            verdict: if holds {
                Verdict::Holds
            } else {
                Verdict::Fails
            },
            margin: Dyadic::from_rational(&diff, 64, dir),
        });
    }
    escalate(64, |p| {
        let l = lhs.enclose(p);
        let r = rhs.enclose(p);
        let holds = if strict {
            l.hi() < r.lo()
        } else {
            l.hi() <= r.lo()
        };
        let fails = if strict {
            r.hi() <= l.lo()
        } else {
            r.hi() < l.lo()
        };
        let verdict = if holds {
            Verdict::Holds
        } else if fails {
            Verdict::Fails
        } else {
            return Ok(None);
        };
        let margin = if holds {
            r.lo() - l.hi()
        } else {
            r.hi() - l.lo()
        };
        Ok(Some(BoundReport {
            name: name.into(),
            parameters: parameters.clone(),
            lhs: l,
            rhs: r,
            strict,
            verdict,
            margin,
        }))
    })
}

/// Enclosure of `g(x) = 1/log(1 + 1/x)` for rational `x >= 1`.
pub fn g(x: &BigRational, precision: u32) -> Result<RealInterval> {
    if x < &BigRational::one() {
        return Err(Error::Precondition(format!("g needs x >= 1, got {x}")));
    }
    let cap = crate::exact::precision_cap();
    if precision as u64 > cap {
        return Err(Error::PrecisionCapExceeded {
            requested: precision as u64,
            cap,
        });
    }
    Ok(g_unchecked(x, precision))
}

fn g_unchecked(x: &BigRational, p: u32) -> RealInterval {
    let y = BigRational::one() + x.recip();
    elementary::ln_rational(&y, p + 8)
        .recip(p + 4)
        .expect("log(1 + 1/x) > 0")
        .with_precision_bits(p)
}

/// `x + 1/2 - 1/x <= g(x) < x + 1/2`.
pub fn check_g_bounds(x: &BigRational) -> Result<BoundCheck> {
    if x < &BigRational::one() {
        return Ok(BoundCheck::NotApplicable {
            name: "g1".into(),
            reason: "x < 1".into(),
        });
    }
    let p = params(&[("x", x.to_string())]);
    let gx = Side::Real(Box::new(|w| g_unchecked(x, w)));
    let lower = Side::Exact(x + rat(1, 2) - x.recip());
    let upper = Side::Exact(x + rat(1, 2));
    Ok(BoundCheck::Checked(vec![
        compare("g1.lower", p.clone(), &lower, &gx, false)?,
        compare("g1.upper", p, &gx, &upper, true)?,
    ]))
}

/// `y - x - 1/y < g(y) - g(x) < y - x + 1/x` for `1 <= x <= y`.
pub fn check_g_difference(x: &BigRational, y: &BigRational) -> Result<BoundCheck> {
    if x < &BigRational::one() || y < x {
        return Ok(BoundCheck::NotApplicable {
            name: "g2".into(),
            reason: "needs 1 <= x <= y".into(),
        });
    }
    let p = params(&[("x", x.to_string()), ("y", y.to_string())]);
    let diff = if x == y {
        Side::Exact(BigRational::zero())
    } else {
        Side::Real(Box::new(|w| {
            g_unchecked(y, w + 8).sub(&g_unchecked(x, w + 8), w)
        }))
    };
    let lower = Side::Exact(y - x - y.recip());
    let upper = Side::Exact(y - x + x.recip());
    Ok(BoundCheck::Checked(vec![
        compare("g2.lower", p.clone(), &lower, &diff, true)?,
        compare("g2.upper", p, &diff, &upper, true)?,
    ]))
}

fn exp_side(x: &BigRational) -> Side<'_> {
    Side::Real(Box::new(move |w| elementary::exp_rational(x, w)))
}

/// `(1 + x/n)^n < (1 + x/(n+1))^(n+1) < e^x` for `x > 0`, `n >= 1`, and
/// `e^x < (1 + x/n)^(n+1) < (1 + x/(n-1))^n` for `0 < x <= 1`, `n >= 2`.
pub fn check_exp_inequalities(x: &BigRational, n: u64) -> Result<(BoundCheck, BoundCheck)> {
    let p = params(&[("x", x.to_string()), ("n", n.to_string())]);
    // (1 + a/(b m))^e with x = a/b; dividing by gcd(a, m) leaves the base in lowest terms
    let term = |m: u64, e: u64| {
        let m = BigInt::from(m);
        let g = x.numer().gcd(&m);
        let den = x.denom() * &m / &g;
        let num = &den + x.numer() / &g;
        BigRational::new_raw(num.pow(e as u32), den.pow(e as u32))
    };
    let less = if x.is_positive() && n >= 1 {
        let a = Side::Exact(term(n, n));
        let b = Side::Exact(term(n + 1, n + 1));
        BoundCheck::Checked(vec![
            compare("exp_less.left", p.clone(), &a, &b, true)?,
            compare("exp_less.right", p.clone(), &b, &exp_side(x), true)?,
        ])
    } else {
        BoundCheck::NotApplicable {
            name: "exp_less".into(),
            reason: "needs x > 0 and n >= 1".into(),
        }
    };
    let more = if x.is_positive() && x <= &BigRational::one() && n >= 2 {
        let b = Side::Exact(term(n, n + 1));
        let c = Side::Exact(term(n - 1, n));
        BoundCheck::Checked(vec![
            compare("exp_more.left", p.clone(), &exp_side(x), &b, true)?,
            compare("exp_more.right", p, &b, &c, true)?,
        ])
    } else {
        BoundCheck::NotApplicable {
            name: "exp_more".into(),
            reason: "needs 0 < x <= 1 and n >= 2".into(),
        }
    };
    Ok((less, more))
}

/// A rational multiple of `log theta`, exact when `log theta` is rational.
fn times_log<'a>(theta: &'a ThetaExpr, c: BigRational) -> Side<'a> {
    match theta.exact_log() {
        Some(lg) => Side::Exact(c * lg),
        None => Side::Real(Box::new(move |w| {
            theta.ln_enclose(w + 8).mul_rational(&c, w)
        })),
    }
}

fn require_past_n0(theta: &ThetaExpr, n: u64) -> Result<()> {
    let t = n0(theta)?;
    if n < t {
        return Err(Error::Precondition(format!(
            "n = {n} must be at least N0 = {t}"
        )));
    }
    Ok(())
}

fn finite_m(theta: &ThetaExpr, n: u64) -> Result<u64> {
    match m_theta(theta, n)? {
        MValue::Finite(v) => Ok(v),
        MValue::Infinite => Err(Error::InfiniteValue { n }),
    }
}

/// `(x + 1/2 - 1/x) log theta <= n < (x + 3/2) log theta` with `x = M(n)`.
pub fn check_main_ineq(theta: &ThetaExpr, n: u64) -> Result<BoundCheck> {
    theta.require_greater_than_one()?;
    require_past_n0(theta, n)?;
    let x = int(finite_m(theta, n)?);
    let p = params(&[
        ("theta", theta.to_string()),
        ("n", n.to_string()),
        ("M", x.to_string()),
    ]);
    let lower = times_log(theta, &x + rat(1, 2) - x.recip());
    let upper = times_log(theta, &x + rat(3, 2));
    let mid = Side::Exact(int(n));
    Ok(BoundCheck::Checked(vec![
        compare("main.lower", p.clone(), &lower, &mid, false)?,
        compare("main.upper", p, &mid, &upper, true)?,
    ]))
}

/// `M(n2) - M(n1) < (n2 - n1)/log theta + 3/2` for `N0 <= n1 < n2`.
pub fn check_gap_bound(theta: &ThetaExpr, n1: u64, n2: u64) -> Result<BoundCheck> {
    theta.require_greater_than_one()?;
    require_past_n0(theta, n1)?;
    if n2 <= n1 {
        return Err(Error::Precondition(format!(
            "need n1 < n2, got {n1} and {n2}"
        )));
    }
    let gap = int(finite_m(theta, n2)?) - int(finite_m(theta, n1)?);
    let p = params(&[
        ("theta", theta.to_string()),
        ("n1", n1.to_string()),
        ("n2", n2.to_string()),
    ]);
    let dn = int(n2 - n1);
    let rhs = match theta.exact_log() {
        Some(lg) => Side::Exact(&dn / lg + rat(3, 2)),
        None => Side::Real(Box::new(move |w| {
            let q = RealInterval::from_rational(&dn, w + 8)
                .div(&theta.ln_enclose(w + 8), w + 4)
                .expect("log theta > 0");
            q.add(&RealInterval::from_rational(&rat(3, 2), w + 8), w)
        })),
    };
    Ok(BoundCheck::Checked(vec![compare(
        "gap",
        p,
        &Side::Exact(gap),
        &rhs,
        true,
    )?]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrictIncrease {
    StrictlyIncreasing,
    RepeatFoundAt(u64),
}

/// First `n` in the window with `M(n) = M(n + 1)`, if any.
pub fn check_strict_increase(theta: &ThetaExpr, n_from: u64, n_to: u64) -> Result<StrictIncrease> {
    theta.require_greater_than_one()?;
    require_past_n0(theta, n_from)?;
    let seq = m_sequence(theta, n_from, n_to.max(n_from))?;
    Ok(seq
        .values
        .windows(2)
        .position(|w| w[0] == w[1])
        .map_or(StrictIncrease::StrictlyIncreasing, |i| {
            StrictIncrease::RepeatFoundAt(n_from + i as u64)
        }))
}

fn binomial_row(m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for j in 1..=m {
        let next = &row[j - 1] * BigInt::from(m + 1 - j) / BigInt::from(j);
        row.push(next);
    }
    row
}

/// `B_0, ..., B_(count-1)` from `sum_{j <= m} C(m+1, j) B_j = 0`, so `B_1 = -1/2`.
pub fn bernoulli_numbers(count: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(count);
    for m in 0..count {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        if m >= 3 && m % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        let c = binomial_row(m + 1);
        let s: BigRational = (0..m)
            .map(|j| BigRational::from_integer(c[j].clone()) * &b[j])
            .sum();
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `B_(2r) / (2r)!` for `r = 1..=count`.
fn series_coefficients(count: usize) -> Vec<BigRational> {
    let b = bernoulli_numbers(2 * count + 1);
    (1..=count)
        .map(|r| &b[2 * r] / BigRational::from_integer(factorial(2 * r)))
        .collect()
}

/// Partial sum of `1/(e^t - 1) = 1/t - 1/2 + sum B_(2r)/(2r)! t^(2r-1)` at `t = log theta / n`.
///
/// The truncation error is bounded by twice the first omitted term. That bound
/// is heuristic for `terms > 0`; for `terms = 0` it is rigorous, since
/// `0 < 1/(e^t - 1) - 1/t + 1/2 < t/12` for `t > 0`.
pub fn bernoulli_approx(theta: &ThetaExpr, n: u64, terms: usize) -> Result<RealInterval> {
    theta.require_greater_than_one()?;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    // |log theta| < 2 pi n; equality would make log theta / pi rational
    let inside = certified_sign(64, |p| {
        elementary::pi(p + 8)
            .mul(&RealInterval::from_int(2 * n, p + 8), p + 8)
            .sub(&theta.ln_enclose(p + 8), p)
    })?;
    if inside != Ordering::Greater {
        return Err(Error::ConvergenceDomain);
    }
    let coeffs = series_coefficients(terms + 1);
    let w = 128 + 8 * terms as u32;
    let t = match theta.exact_log() {
        Some(lg) => RealInterval::from_rational(&(lg / int(n)), w),
        None => theta
            .ln_enclose(w + 8)
            .div(&RealInterval::from_int(n, w + 8), w)
            .expect("n > 0"),
    };
    let t2 = t.mul(&t, w);
    let mut sum = t
        .recip(w)
        .expect("t > 0")
        .sub(&RealInterval::from_rational(&rat(1, 2), w), w);
    let mut power = t.clone();
    for c in &coeffs[..terms] {
        sum = sum.add(&power.mul_rational(c, w), w);
        power = power.mul(&t2, w);
    }
    let omitted = RealInterval::point(power.hi().clone(), w).mul_rational(&coeffs[terms].abs(), w);
    let radius = omitted.hi().mul_pow2(1);
    let lo = (sum.lo() - &radius).round(w, Round::Down);
    let hi = (sum.hi() + &radius).round(w, Round::Up);
    let width = &hi - &lo;
    let scale = if hi.abs() > Dyadic::one() {
        hi.abs()
    } else {
        Dyadic::one()
    };
    // largest p with width <= 2^-p scale
    let mut bits = (scale.magnitude_bits() - width.magnitude_bits()).max(1) as u32;
    while bits > 1 && width > scale.mul_pow2(-(bits as i64)) {
        bits -= 1;
    }
    Ok(RealInterval::new(lo, hi, bits))
}

/// The base values used by the randomized `M` inequality sweeps.
pub fn sweep_thetas() -> Vec<ThetaExpr> {
    ["3/2", "2", "e^1/2", "e", "e^3/7", "pi", "17"]
        .iter()
        .map(|s| s.parse().expect("valid theta"))
        .collect()
}

/// Results of one inequality family over a randomized sweep.
#[derive(Debug, Clone)]
pub struct FamilySummary {
    pub family: &'static str,
    pub samples: usize,
    pub failures: Vec<BoundReport>,
}

impl FamilySummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for FamilySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} samples, {} failures",
            self.family,
            self.samples,
            self.failures.len()
        )
    }
}

/// Rational `a/b` with `b` in `[1, 1000]` and the value in `[lo, hi]`.
fn random_rational(rng: &mut ChaCha8Rng, lo: &BigRational, hi: &BigRational) -> BigRational {
    let b: i64 = rng.gen_range(1..=1000);
    let a_lo = (lo * int(b as u64))
        .ceil()
        .to_integer()
        .to_i64()
        .expect("small");
    let a_hi = (hi * int(b as u64))
        .floor()
        .to_integer()
        .to_i64()
        .expect("small");
    rat(rng.gen_range(a_lo..=a_hi), b)
}

enum Sample {
    G1(BigRational),
    G2(BigRational, BigRational),
    Less(BigRational, u64),
    More(BigRational, u64),
    Main(usize, u64),
    Gap(usize, u64, u64),
}

fn family_of(s: &Sample) -> &'static str {
    match s {
        Sample::G1(..) => "g1",
        Sample::G2(..) => "g2",
        Sample::Less(..) => "exp_less",
        Sample::More(..) => "exp_more",
        Sample::Main(..) => "main",
        Sample::Gap(..) => "gap",
    }
}

pub const SWEEP_FAMILIES: [&str; 6] = ["g1", "g2", "exp_less", "exp_more", "main", "gap"];

/// Seeded randomized sweep of all six inequality families, `samples` draws each.
///
/// `x` ranges over rationals in `[1, 10^6]` (in `(0, 1]` for `exp_more`),
/// `n` over `[2, 1000]`, and theta over [`sweep_thetas`] with `n >= N0(theta)`.
pub fn inequality_sweep(seed: u64, samples: usize) -> Result<Vec<FamilySummary>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thetas = sweep_thetas();
    let n0s: Vec<u64> = thetas.iter().map(n0).collect::<Result<_>>()?;
    let one = BigRational::one();
    let big = int(1_000_000);
    let mut draws = Vec::with_capacity(6 * samples);
    for _ in 0..samples {
        draws.push(Sample::G1(random_rational(&mut rng, &one, &big)));
    }
    for _ in 0..samples {
        let x = random_rational(&mut rng, &one, &big);
        let y = random_rational(&mut rng, &x, &big);
        let y = if y < x { x.clone() } else { y };
        draws.push(Sample::G2(x, y));
    }
    for _ in 0..samples {
        draws.push(Sample::Less(
            random_rational(&mut rng, &one, &big),
            rng.gen_range(2..=1000),
        ));
    }
    for _ in 0..samples {
        let b: i64 = rng.gen_range(1..=1000);
        let a: i64 = rng.gen_range(1..=b);
        draws.push(Sample::More(rat(a, b), rng.gen_range(2..=1000)));
    }
    for _ in 0..samples {
        let i = rng.gen_range(0..thetas.len());
        draws.push(Sample::Main(i, rng.gen_range(n0s[i].max(2)..=1000)));
    }
    for _ in 0..samples {
        let i = rng.gen_range(0..thetas.len());
        let a = rng.gen_range(n0s[i].max(2)..1000);
        let b = rng.gen_range(a + 1..=1000);
        draws.push(Sample::Gap(i, a, b));
    }

    let results: Vec<(&'static str, BoundCheck)> = draws
        .par_iter()
        .map(|s| {
            let check = match s {
                Sample::G1(x) => check_g_bounds(x)?,
                Sample::G2(x, y) => check_g_difference(x, y)?,
                Sample::Less(x, n) => check_exp_inequalities(x, *n)?.0,
                Sample::More(x, n) => check_exp_inequalities(x, *n)?.1,
                Sample::Main(i, n) => check_main_ineq(&thetas[*i], *n)?,
                Sample::Gap(i, a, b) => check_gap_bound(&thetas[*i], *a, *b)?,
            };
            Ok((family_of(s), check))
        })
        .collect::<Result<_>>()?;

    Ok(SWEEP_FAMILIES
        .iter()
        .map(|&family| {
            let mine: Vec<&BoundCheck> = results
                .iter()
                .filter(|(f, _)| *f == family)
                .map(|(_, c)| c)
                .collect();
            let failures = mine
                .iter()
                .flat_map(|c| c.links().iter().filter(|l| !l.holds()).cloned())
                .collect();
            FamilySummary {
                family,
                samples: mine.iter().filter(|c| c.is_applicable()).count(),
                failures,
            }
        })
        .collect())
}
