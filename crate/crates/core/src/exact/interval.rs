use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Round};

/// Closed interval `[lo, hi]` of dyadic rationals certified to enclose a real value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: Dyadic,
    hi: Dyadic,
    precision_bits: u32,
}

impl RealInterval {
    pub fn new(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        RealInterval {
            lo,
            hi,
            precision_bits,
        }
    }

    pub fn point(v: Dyadic, precision_bits: u32) -> Self {
        RealInterval {
            lo: v.clone(),
            hi: v,
            precision_bits,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T, precision_bits: u32) -> Self {
        Self::point(Dyadic::from_int(v), precision_bits)
    }

    /// Outward-rounded enclosure of an exact rational.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        RealInterval {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
            precision_bits: prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn with_precision_bits(mut self, p: u32) -> Self {
        self.precision_bits = p;
        self
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).mul_pow2(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &RealInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &RealInterval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &RealInterval) -> bool {
        self.hi <= other.lo
    }

    /// The relative-width bound `hi - lo <= 2^-p * max(1, |hi|)`.
    pub fn meets_width_bound(&self, p: u32) -> bool {
        let scale = if self.hi.abs() > Dyadic::one() {
            self.hi.abs()
        } else {
            Dyadic::one()
        };
        self.width() <= scale.mul_pow2(-(p as i64))
    }

    pub fn neg(&self) -> RealInterval {
        RealInterval {
            lo: -&self.hi,
            hi: -&self.lo,
            precision_bits: self.precision_bits,
        }
    }

    pub fn add(&self, other: &RealInterval, prec: u32) -> RealInterval {
        RealInterval {
            lo: (&self.lo + &other.lo).round(prec, Round::Down),
            hi: (&self.hi + &other.hi).round(prec, Round::Up),
            precision_bits: prec,
        }
    }

    pub fn sub(&self, other: &RealInterval, prec: u32) -> RealInterval {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &RealInterval, prec: u32) -> RealInterval {
        if !self.lo.is_negative() && !other.lo.is_negative() {
            return RealInterval {
                lo: (&self.lo * &other.lo).round(prec, Round::Down),
                hi: (&self.hi * &other.hi).round(prec, Round::Up),
                precision_bits: prec,
            };
        }
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().round(prec, Round::Down);
        let hi = products.iter().max().unwrap().round(prec, Round::Up);
        RealInterval {
            lo,
            hi,
            precision_bits: prec,
        }
    }

    pub fn mul_rational(&self, r: &BigRational, prec: u32) -> RealInterval {
        self.mul(&RealInterval::from_rational(r, prec + 8), prec)
    }

    /// `1/x` over the interval; `None` when the interval contains zero.
    pub fn recip(&self, prec: u32) -> Option<RealInterval> {
        if self.contains_zero() {
            return None;
        }
        let one = Dyadic::one();
        Some(RealInterval {
            lo: Dyadic::div_round(&one, &self.hi, prec, Round::Down),
            hi: Dyadic::div_round(&one, &self.lo, prec, Round::Up),
            precision_bits: prec,
        })
    }

    pub fn div(&self, other: &RealInterval, prec: u32) -> Option<RealInterval> {
        Some(self.mul(&other.recip(prec + 4)?, prec))
    }

    /// Integer power of a nonnegative interval.
    pub fn pow_u(&self, n: u32, prec: u32) -> RealInterval {
        assert!(
            !self.lo.is_negative(),
            "pow_u expects a nonnegative interval"
        );
        let mut base = self.clone();
        let mut acc = RealInterval::from_int(1, prec);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    /// Decimal rendering; `lo` is rounded down and `hi` up so the text still encloses.
    pub fn render(&self, digits: usize) -> String {
        format!(
            "[{}, {}] ({} bits)",
            self.lo.to_decimal(digits, Round::Down),
            self.hi.to_decimal(digits, Round::Up),
            self.precision_bits
        )
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.precision_bits as f64) * std::f64::consts::LOG10_2).ceil() as usize + 1;
        f.write_str(&self.render(digits.min(60)))
    }
}
