//! Brute-force reference values in decimal fixed point with `DIGITS` digits.
//!
//! Shares nothing with the library's arithmetic: pi comes from the
//! Gauss-Legendre iteration, exp from its Taylor series, and roots from a
//! decimal Newton iteration. Rational roots are detected with f64 rounding
//! plus an exact power check.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rootfrac::exact::RealInterval;
use rootfrac::{MValue, ThetaExpr};

pub const DIGITS: u32 = 1000;
const GUARD: u32 = 30;
const D: u32 = DIGITS + GUARD;

fn scale() -> &'static BigInt {
    static S: OnceLock<BigInt> = OnceLock::new();
    S.get_or_init(|| num_traits::pow(BigInt::from(10), D as usize))
}

/// Absolute error bound on every approximate oracle value: `10^-DIGITS`.
fn eps() -> BigRational {
    BigRational::new(
        BigInt::one(),
        num_traits::pow(BigInt::from(10), DIGITS as usize),
    )
}

/// A real value: exact, or a fixed-point approximation within `10^-DIGITS`.
#[derive(Clone, Debug)]
pub enum Value {
    Exact(BigRational),
    Approx(BigInt),
}

impl Value {
    pub fn bracket(&self) -> (BigRational, BigRational) {
        match self {
            Value::Exact(r) => (r.clone(), r.clone()),
            Value::Approx(v) => {
                let r = BigRational::new(v.clone(), scale().clone());
                (&r - eps(), &r + eps())
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64().unwrap(),
            Value::Approx(v) => BigRational::new(v.clone(), scale().clone())
                .to_f64()
                .unwrap(),
        }
    }
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b).div_floor(scale())
}

fn div(a: &BigInt, b: &BigInt) -> BigInt {
    (a * scale()).div_floor(b)
}

fn from_rational(r: &BigRational) -> BigInt {
    (r.numer() * scale()).div_floor(r.denom())
}

fn sqrt(a: &BigInt) -> BigInt {
    (a * scale()).sqrt()
}

pub fn pi() -> &'static BigInt {
    static PI: OnceLock<BigInt> = OnceLock::new();
    PI.get_or_init(|| {
        let one = scale().clone();
        let mut a = one.clone();
        let mut b = sqrt(&(&one / 2));
        let mut t = &one / 4;
        let mut p = BigInt::one();
        for _ in 0..14 {
            let a_next = (&a + &b) / 2;
            b = sqrt(&(&a * &b / scale()));
            let d = &a - &a_next;
            t -= &p * mul(&d, &d);
            p *= 2;
            a = a_next;
        }
        let s = &a + &b;
        div(&mul(&s, &s), &(t * 4))
    })
}

/// `exp(x)` for rational `0 <= x <= 20` by the plain Taylor series.
pub fn exp(x: &BigRational) -> BigInt {
    let xf = from_rational(x);
    let mut term = scale().clone();
    let mut sum = term.clone();
    let mut i = 1u64;
    while !term.is_zero() {
        term = mul(&term, &xf) / i;
        sum += &term;
        i += 1;
    }
    sum
}

fn pow_fixed(a: &BigInt, n: u64) -> BigInt {
    let mut acc = scale().clone();
    for _ in 0..n {
        acc = mul(&acc, a);
    }
    acc
}

/// `c^(1/n)` for a fixed-point `c > 0` by Newton's method from an f64 guess.
fn nth_root(c: &BigInt, n: u64) -> BigInt {
    if n == 1 {
        return c.clone();
    }
    let cf = BigRational::new(c.clone(), scale().clone())
        .to_f64()
        .unwrap();
    let guess = cf.powf(1.0 / n as f64);
    let mut y = from_rational(&BigRational::from_float(guess).unwrap());
    loop {
        let y_pow = pow_fixed(&y, n - 1);
        let next = ((BigInt::from(n - 1) * &y) + div(c, &y_pow)) / BigInt::from(n);
        let change = (&next - &y).abs();
        y = next;
        if change <= BigInt::from(1000) {
            return y;
        }
    }
}

fn theta_rational(theta: &ThetaExpr) -> Option<BigRational> {
    match theta {
        ThetaExpr::Rational(r) => Some(r.clone()),
        ThetaExpr::DecimalLiteral { digits, exponent } => {
            let d: BigInt = digits.parse().unwrap();
            let ten = BigInt::from(10);
            Some(if *exponent >= 0 {
                BigRational::from_integer(d * num_traits::pow(ten, *exponent as usize))
            } else {
                BigRational::new(d, num_traits::pow(ten, (-*exponent) as usize))
            })
        }
        _ => None,
    }
}

/// `v^(1/n)` when the positive integer `v` is a perfect nth power.
fn exact_int_root(v: &BigInt, n: u64) -> Option<BigInt> {
    let bits = v.bits() as f64;
    let approx = if bits < 1000.0 {
        v.to_f64().unwrap().powf(1.0 / n as f64)
    } else {
        2f64.powf(bits / n as f64)
    };
    let base = approx.round() as i64;
    (base - 1..=base + 1)
        .filter(|c| *c >= 0)
        .map(BigInt::from)
        .find(|c| num_traits::pow(c.clone(), n as usize) == *v)
}

pub fn theta_value(theta: &ThetaExpr) -> Value {
    match theta {
        ThetaExpr::Pi => Value::Approx(pi().clone()),
        ThetaExpr::ExpRational { k, l } => {
            Value::Approx(exp(&BigRational::new((*k).into(), (*l).into())))
        }
        _ => Value::Exact(theta_rational(theta).unwrap()),
    }
}

/// `theta^(1/n)`.
pub fn root(theta: &ThetaExpr, n: u64) -> Value {
    match theta {
        ThetaExpr::Pi => Value::Approx(nth_root(pi(), n)),
        ThetaExpr::ExpRational { k, l } => Value::Approx(exp(&BigRational::new(
            (*k).into(),
            BigInt::from(*l) * BigInt::from(n),
        ))),
        _ => {
            let r = theta_rational(theta).unwrap();
            match (exact_int_root(r.numer(), n), exact_int_root(r.denom(), n)) {
                (Some(a), Some(b)) => Value::Exact(BigRational::new(a, b)),
                _ => Value::Approx(nth_root(&from_rational(&r), n)),
            }
        }
    }
}

fn floor_recip(x: &BigRational) -> BigInt {
    x.denom().div_floor(x.numer())
}

/// `floor(1/d)` for the distance `d` to the integers, with `lo <= d <= hi`.
fn stable_floor_recip(lo: &BigRational, hi: &BigRational) -> Option<BigInt> {
    if !lo.is_positive() {
        return None;
    }
    let a = floor_recip(hi);
    let b = floor_recip(lo);
    (a == b).then_some(a)
}

fn to_m(v: BigInt) -> MValue {
    MValue::Finite(v.to_u64().expect("M fits in u64"))
}

/// `M_theta(n)`, or `None` if 1000 digits do not settle it.
pub fn m_value(theta: &ThetaExpr, n: u64) -> Option<MValue> {
    m_generic(&root(theta, n), false)
}

/// `M'_theta(n)` via the nearest-integer distance.
pub fn m_prime_value(theta: &ThetaExpr, n: u64) -> Option<MValue> {
    m_generic(&root(theta, n), true)
}

pub fn m_generic(value: &Value, nearest: bool) -> Option<MValue> {
    let (lo, hi) = value.bracket();
    let fl = lo.floor();
    if hi.floor() != fl {
        return None;
    }
    let (dlo, dhi) = (&lo - &fl, &hi - &fl);
    if let Value::Exact(_) = value {
        if dlo.is_zero() {
            return Some(MValue::Infinite);
        }
    }
    let half = BigRational::new(1.into(), 2.into());
    let (dlo, dhi) = if !nearest || dhi < half {
        (dlo, dhi)
    } else if dlo > half {
        (BigRational::one() - &dhi, BigRational::one() - &dlo)
    } else {
        return None;
    };
    stable_floor_recip(&dlo, &dhi).map(to_m)
}

/// `n^(1/n)`.
pub fn nth_root_of_n(n: u64) -> Value {
    root(&ThetaExpr::Rational(BigRational::from_integer(n.into())), n)
}

/// Whether an interval is consistent with the oracle value.
pub fn interval_contains(iv: &RealInterval, v: &Value) -> bool {
    let (lo, hi) = v.bracket();
    iv.lo().to_rational() <= hi && lo <= iv.hi().to_rational()
}
