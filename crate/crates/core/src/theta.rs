//! Symbolic description of the base `theta`.
//!
//! Grammar accepted by [`ThetaExpr::from_str`]:
//!
//! ```text
//! theta   := "pi" | "e" | "e^" INT [ "/" INT ] | INT [ "/" INT ] | decimal
//! decimal := DIGITS [ "." DIGITS ] [ ("e" | "E") [ "+" | "-" ] DIGITS ]
//! ```
//!
//! `e^3/7` means `e^(3/7)`. A decimal literal is exact: `3.14159` is the
//! rational 314159/100000, never an approximation of pi.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::elementary::{exp_rational, ln_interval, ln_rational, pi};
use crate::exact::RealInterval;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ThetaExpr {
    /// A positive rational in lowest terms.
    Rational(BigRational),
    /// `e^(k/l)` with `k/l` in lowest terms.
    ExpRational {
        k: u64,
        l: u64,
    },
    Pi,
    /// `digits * 10^exponent`, with no trailing zeros in `digits`.
    DecimalLiteral {
        digits: String,
        exponent: i64,
    },
}

impl ThetaExpr {
    pub fn rational<P: Into<BigInt>, Q: Into<BigInt>>(p: P, q: Q) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if q.is_zero() {
            return Err(Error::InvalidTheta("zero denominator".into()));
        }
        let r = BigRational::new(p, q);
        if !r.is_positive() {
            return Err(Error::InvalidTheta(format!("{r} is not positive")));
        }
        Ok(ThetaExpr::Rational(r))
    }

    pub fn integer(v: u64) -> Result<Self> {
        Self::rational(v, 1u32)
    }

    pub fn exp_rational(k: u64, l: u64) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidTheta(format!(
                "e^{k}/{l} needs positive k and l"
            )));
        }
        let g = k.gcd(&l);
        Ok(ThetaExpr::ExpRational { k: k / g, l: l / g })
    }

    pub fn e() -> Self {
        ThetaExpr::ExpRational { k: 1, l: 1 }
    }

    pub fn pi() -> Self {
        ThetaExpr::Pi
    }

    /// Build a decimal literal from its text, e.g. `"1.25"` or `"2.5E3"`.
    pub fn decimal(text: &str) -> Result<Self> {
        let mut p = Parser::new(text);
        let t = p.decimal()?;
        p.end()?;
        match t {
            ThetaExpr::DecimalLiteral { .. } | ThetaExpr::Rational(_) => Ok(t),
            _ => unreachable!(),
        }
    }

    /// The exact rational value, for the `Rational` and `DecimalLiteral` variants.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            ThetaExpr::Rational(r) => Some(r.clone()),
            ThetaExpr::DecimalLiteral { digits, exponent } => {
                let d: BigInt = digits.parse().expect("normalized digits");
                let ten = BigInt::from(10u32);
                Some(if *exponent >= 0 {
                    BigRational::from_integer(d * num_traits::pow(ten, *exponent as usize))
                } else {
                    BigRational::new(d, num_traits::pow(ten, (-*exponent) as usize))
                })
            }
            _ => None,
        }
    }

    /// `log theta` when it is an exact rational.
    pub fn exact_log(&self) -> Option<BigRational> {
        match self {
            ThetaExpr::ExpRational { k, l } => {
                Some(BigRational::new(BigInt::from(*k), BigInt::from(*l)))
            }
            _ => match self.as_rational() {
                Some(r) if r.is_one() => Some(BigRational::zero()),
                _ => None,
            },
        }
    }

    /// Exact comparison of theta with 1 (decidable for every variant).
    pub fn cmp_one(&self) -> std::cmp::Ordering {
        match self.as_rational() {
            Some(r) => r.cmp(&BigRational::one()),
            None => std::cmp::Ordering::Greater,
        }
    }

    /// Rejects theta <= 0 and theta = 1, which have no M function.
    pub fn validate_for_m(&self) -> Result<()> {
        if let Some(r) = self.as_rational() {
            if !r.is_positive() {
                return Err(Error::InvalidTheta(format!("{self} is not positive")));
            }
            if r.is_one() {
                return Err(Error::InvalidTheta(
                    "theta = 1 has M = inf everywhere".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn require_greater_than_one(&self) -> Result<()> {
        self.validate_for_m()?;
        if self.cmp_one() != std::cmp::Ordering::Greater {
            return Err(Error::InvalidTheta(format!("{self} must exceed 1")));
        }
        Ok(())
    }

    /// Bit length of the numerator, used to size the first precision attempt.
    pub fn numerator_bits(&self) -> u32 {
        match self.as_rational() {
            Some(r) => r.numer().bits() as u32,
            None => match self {
                ThetaExpr::ExpRational { k, l } => (k / l + 1).ilog2() * 2 + 2,
                _ => 2,
            },
        }
    }

    /// Certified enclosure of theta.
    pub fn enclose(&self, prec: u32) -> RealInterval {
        match self {
            ThetaExpr::Pi => pi(prec),
            ThetaExpr::ExpRational { k, l } => {
                exp_rational(&BigRational::new((*k).into(), (*l).into()), prec)
            }
            _ => RealInterval::from_rational(&self.as_rational().unwrap(), prec),
        }
    }

    /// Certified enclosure of `log theta`.
    pub fn ln_enclose(&self, prec: u32) -> RealInterval {
        match self {
            ThetaExpr::Pi => ln_interval(&pi(prec + 8), prec),
            ThetaExpr::ExpRational { .. } => {
                RealInterval::from_rational(&self.exact_log().unwrap(), prec)
            }
            _ => ln_rational(&self.as_rational().unwrap(), prec),
        }
    }

    /// `theta^m` as an exact rational, if theta is rational.
    pub fn rational_pow(&self, m: u32) -> Option<BigRational> {
        self.as_rational().map(|r| num_traits::pow(r, m as usize))
    }
}

impl fmt::Display for ThetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaExpr::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            ThetaExpr::ExpRational { k: 1, l: 1 } => f.write_str("e"),
            ThetaExpr::ExpRational { k, l: 1 } => write!(f, "e^{k}"),
            ThetaExpr::ExpRational { k, l } => write!(f, "e^{k}/{l}"),
            ThetaExpr::Pi => f.write_str("pi"),
            ThetaExpr::DecimalLiteral { digits, exponent } => {
                // d.ddd form when the exponent stays small, otherwise scientific
                if *exponent >= 0 {
                    write!(f, "{digits}E{exponent}")
                } else {
                    let frac_len = (-*exponent) as usize;
                    if digits.len() > frac_len {
                        let (i, fr) = digits.split_at(digits.len() - frac_len);
                        write!(f, "{i}.{fr}")
                    } else {
                        write!(f, "0.{}{}", "0".repeat(frac_len - digits.len()), digits)
                    }
                }
            }
        }
    }
}

impl FromStr for ThetaExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let t = p.theta()?;
        p.end()?;
        Ok(t)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(&self.src[start..self.pos])
    }

    fn end(&self) -> Result<()> {
        if self.pos != self.src.len() {
            return self.err(format!(
                "unexpected trailing input {:?}",
                &self.src[self.pos..]
            ));
        }
        Ok(())
    }

    fn theta(&mut self) -> Result<ThetaExpr> {
        let rest = &self.src[self.pos..];
        if rest.is_empty() {
            return self.err("empty theta");
        }
        if rest == "pi" {
            self.pos += 2;
            return Ok(ThetaExpr::Pi);
        }
        if rest == "e" {
            self.pos += 1;
            return Ok(ThetaExpr::e());
        }
        if rest.starts_with("e^") {
            self.pos += 2;
            let k: u64 = self.small_int()?;
            let l: u64 = if self.eat('/') { self.small_int()? } else { 1 };
            if k == 0 || l == 0 {
                return self.err("exponent k/l must have positive k and l");
            }
            return ThetaExpr::exp_rational(k, l);
        }
        if rest.starts_with('-') {
            return self.err("theta must be positive");
        }
        let start = self.pos;
        let int_part = self.digits()?;
        if self.eat('/') {
            let den = self.digits()?;
            let den: BigInt = den.parse().unwrap();
            if den.is_zero() {
                return self.err("zero denominator");
            }
            let num: BigInt = int_part.parse().unwrap();
            if num.is_zero() {
                return Err(Error::Parse {
                    position: start,
                    message: "theta must be positive".into(),
                });
            }
            return Ok(ThetaExpr::Rational(BigRational::new(num, den)));
        }
        self.pos = start;
        self.decimal()
    }

    fn small_int(&mut self) -> Result<u64> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("integer {d} too large"),
        })
    }

    /// Integer or decimal literal. Plain integers become `Rational`.
    fn decimal(&mut self) -> Result<ThetaExpr> {
        let start = self.pos;
        let int_part = self.digits()?;
        let mut frac_part = "";
        let mut is_decimal = false;
        if self.eat('.') {
            frac_part = self.digits()?;
            is_decimal = true;
        }
        let mut exp10: i64 = 0;
        if self.eat('e') || self.eat('E') {
            let neg = if self.eat('-') {
                true
            } else {
                self.eat('+');
                false
            };
            let e_start = self.pos;
            let e = self.digits()?;
            let e: i64 = e.parse().map_err(|_| Error::Parse {
                position: e_start,
                message: "exponent too large".into(),
            })?;
            exp10 = if neg { -e } else { e };
            is_decimal = true;
        }
        let all = format!("{int_part}{frac_part}");
        let mantissa: BigUint = all.parse().unwrap();
        if mantissa.is_zero() {
            return Err(Error::Parse {
                position: start,
                message: "theta must be positive".into(),
            });
        }
        if !is_decimal {
            return Ok(ThetaExpr::Rational(BigRational::from_integer(
                BigInt::from(mantissa),
            )));
        }
        let mut digits = mantissa.to_string();
        let mut exponent = exp10 - frac_part.len() as i64;
        while digits.ends_with('0') {
            digits.pop();
            exponent += 1;
        }
        Ok(ThetaExpr::DecimalLiteral { digits, exponent })
    }
}

/// `floor(log2(x))` of a positive rational, exactly.
pub(crate) fn floor_log2_rational(r: &BigRational) -> i64 {
    let mut e = r.numer().bits() as i64 - r.denom().bits() as i64;
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(BigInt::one() << (e as u64))
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << ((-e) as u64))
        }
    };
    while &pow(e) > r {
        e -= 1;
    }
    while &pow(e + 1) <= r {
        e += 1;
    }
    e
}
