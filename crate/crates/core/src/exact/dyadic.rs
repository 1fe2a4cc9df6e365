//! Dyadic rationals `m * 2^e` with exact ring operations and directed rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::root::{int_nth_root_floor, pow_big};

/// Rounding direction for inexact operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// `mant * 2^exp`, normalized so that `mant` is odd (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `floor(m / 2^s)` for `s >= 0`.
fn shr_floor(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    if m.is_negative() {
        // -ceil(|m| / 2^s)
        let a = -m;
        let q: BigInt = &a >> s;
        if (&q << s) == a {
            -q
        } else {
            -q - 1
        }
    } else {
        m >> s
    }
}

fn shr_round(m: &BigInt, s: u64, dir: Round) -> BigInt {
    match dir {
        Round::Down => shr_floor(m, s),
        Round::Up => -shr_floor(&-m, s),
    }
}

fn div_round_int(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => num.div_floor(den),
        Round::Up => num.div_ceil(den),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        match self.mant.trailing_zeros() {
            None => self.exp = 0,
            Some(0) => {}
            Some(tz) => {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Multiply by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Position of the leading bit: `2^(b-1) <= |x| < 2^b` where `b` is returned.
    /// Zero maps to `i64::MIN`.
    pub fn magnitude_bits(&self) -> i64 {
        if self.is_zero() {
            return i64::MIN;
        }
        self.mant.bits() as i64 + self.exp
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.is_zero()
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            shr_floor(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as u64))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    /// Nearest-ish `f64`; only for diagnostics and heuristics.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = shr_floor(&self.mant, shift as u64)
            .to_f64()
            .unwrap_or(f64::NAN);
        let e = self.exp + shift;
        if e > 2000 {
            return if top > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if e < -2000 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Keep at most `prec` significant bits, rounding in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Dyadic::new(shr_round(&self.mant, s, dir), self.exp + s as i64)
    }

    /// Round to a multiple of `2^grid_exp`.
    pub fn round_to_grid(&self, grid_exp: i64, dir: Round) -> Dyadic {
        if self.exp >= grid_exp || self.is_zero() {
            return self.clone();
        }
        let s = (grid_exp - self.exp) as u64;
        Dyadic::new(shr_round(&self.mant, s, dir), grid_exp)
    }

    /// Directed rounding of a rational to at least `prec` significant bits.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Dyadic {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let num = r.numer();
        let den = r.denom();
        let s = prec as i64 + den.bits() as i64 - num.bits() as i64 + 1;
        let q = if s >= 0 {
            div_round_int(&(num << (s as u64)), den, dir)
        } else {
            div_round_int(num, &(den << ((-s) as u64)), dir)
        };
        Dyadic::new(q, -s)
    }

    /// Directed-rounded quotient `a / b` with at least `prec` significant bits.
    pub fn div_round(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!b.is_zero(), "division by zero dyadic");
        if a.is_zero() {
            return Dyadic::zero();
        }
        let s = prec as i64 + b.mant.bits() as i64 - a.mant.bits() as i64 + 1;
        let s = s.max(0);
        let q = div_round_int(&(&a.mant << (s as u64)), &b.mant, dir);
        Dyadic::new(q, a.exp - b.exp - s)
    }

    /// Directed-rounded `self^(1/n)` for `self >= 0`, with at least `prec` significant bits.
    pub fn nth_root(&self, n: u32, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "nth root of a negative dyadic");
        assert!(n >= 1);
        if self.is_zero() || n == 1 {
            return self.clone();
        }
        let n64 = n as i64;
        let log2 = self.magnitude_bits();
        // output exponent so that the root has about prec + 2 bits
        let f = Integer::div_floor(&log2, &n64) - prec as i64 - 2;
        // radicand = self * 2^(-n f)
        let shift = self.exp - n64 * f;
        let (radicand, exact) = if shift >= 0 {
            (self.mant.magnitude() << (shift as u64), true)
        } else {
            let s = (-shift) as u64;
            let q = self.mant.magnitude() >> s;
            let exact = (&q << s) == *self.mant.magnitude();
            (q, exact)
        };
        let r = int_nth_root_floor(&radicand, n);
        let r = match dir {
            Round::Down => r,
            Round::Up => {
                if exact && pow_big(&r, n) == radicand {
                    r
                } else {
                    r + 1u32
                }
            }
        };
        Dyadic::new(BigInt::from(r), f)
    }

    /// Decimal rendering with `digits` fractional digits, rounded in direction `dir`.
    pub fn to_decimal(&self, digits: usize, dir: Round) -> String {
        let scale = num_traits::pow(BigInt::from(10u32), digits);
        let r = self.to_rational() * BigRational::from_integer(scale);
        let v = match dir {
            Round::Down => r.floor().to_integer(),
            Round::Up => r.ceil().to_integer(),
        };
        let neg = v.is_negative();
        let s = v.abs().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int_part, frac_part) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ma, mb) = (self.magnitude_bits(), other.magnitude_bits());
        if ma != mb {
            let ord = ma.cmp(&mb);
            return if sa > 0 { ord } else { ord.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &other.mant << ((other.exp - e) as u64);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &rhs.mant << ((rhs.exp - e) as u64);
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 {
            write!(f, "{}", self.floor())
        } else {
            write!(f, "{}*2^{}", self.mant, self.exp)
        }
    }
}
