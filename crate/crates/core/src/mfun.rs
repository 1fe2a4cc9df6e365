//! The arithmetic function `M_theta(n) = floor(1 / frac(theta^(1/n)))` and its relatives.
//!
//! Entry points accept `0 < theta < 1` as well (M is then eventually 1) and
//! follow the literal definition for every `n`, including `n < N0(theta)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{
    certified_floor, certified_floor_reciprocal_frac, certified_sign, elementary,
    floor_reciprocal_of, rational_root_of, FloorResult, FracMode, RealInterval, RealSequence,
    ThetaRoots,
};
use crate::theta::{floor_log2_rational, ThetaExpr};

/// A value of M: a positive integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MValue {
    Finite(u64),
    Infinite,
}

impl MValue {
    pub fn finite(self) -> Option<u64> {
        match self {
            MValue::Finite(v) => Some(v),
            MValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == MValue::Infinite
    }
}

impl fmt::Display for MValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MValue::Finite(v) => write!(f, "{v}"),
            MValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Consecutive values `M(start), M(start + 1), ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MSequence {
    pub theta: ThetaExpr,
    pub start: u64,
    pub values: Vec<MValue>,
    /// `N0(theta)`, or 1 when `theta < 1`.
    pub n0_marker: u64,
}

impl MSequence {
    pub fn get(&self, n: u64) -> Option<MValue> {
        let i = n.checked_sub(self.start)?;
        self.values.get(usize::try_from(i).ok()?).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, MValue)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.start + i as u64, *v))
    }

    /// Finite values as `i64`, failing at the first infinite entry.
    pub fn finite_values(&self) -> Result<Vec<i64>> {
        self.iter()
            .map(|(n, v)| match v {
                MValue::Finite(x) => i64::try_from(x).map_err(|_| Error::Overflow { n }),
                MValue::Infinite => Err(Error::InfiniteValue { n }),
            })
            .collect()
    }
}

fn to_mvalue(r: FloorResult, n: u64) -> Result<MValue> {
    match r {
        FloorResult::Exact(v) => v.to_u64().map(MValue::Finite).ok_or(Error::Overflow { n }),
        FloorResult::Infinite => Ok(MValue::Infinite),
        FloorResult::Undecided(_) => Err(Error::PrecisionCapExceeded {
            requested: 2 * crate::exact::precision_cap(),
            cap: crate::exact::precision_cap(),
        }),
    }
}

pub fn m_theta(theta: &ThetaExpr, n: u64) -> Result<MValue> {
    to_mvalue(certified_floor_reciprocal_frac(theta, n)?, n)
}

/// `N0(theta)`: the smallest `n` with `2^n > theta`.
pub fn n0(theta: &ThetaExpr) -> Result<u64> {
    theta.require_greater_than_one()?;
    let floor_log2: BigInt = match theta {
        ThetaExpr::ExpRational { k, l } => {
            let x = BigRational::new(BigInt::from(*k), BigInt::from(*l));
            certified_floor(64, |p| {
                RealInterval::from_rational(&x, p + 8)
                    .div(&elementary::ln2(p + 8), p)
                    .expect("log 2 is positive")
            })?
        }
        ThetaExpr::Pi => BigInt::one(),
        _ => BigInt::from(floor_log2_rational(&theta.as_rational().unwrap())),
    };
    (floor_log2 + BigInt::one())
        .to_u64()
        .ok_or(Error::Overflow { n: 0 })
}

/// `M(n)` for `n` in `[from, to]`, computed in parallel.
pub fn m_sequence(theta: &ThetaExpr, from: u64, to: u64) -> Result<MSequence> {
    if from == 0 || from > to {
        return Err(Error::Precondition(format!("bad range [{from}, {to}]")));
    }
    theta.validate_for_m()?;
    let values = (from..=to)
        .into_par_iter()
        .map(|n| m_theta(theta, n))
        .collect::<Result<Vec<_>>>()?;
    let n0_marker = if theta.cmp_one() == Ordering::Greater {
        n0(theta)?
    } else {
        1
    };
    Ok(MSequence {
        theta: theta.clone(),
        start: from,
        values,
        n0_marker,
    })
}

/// `M'(n) = floor(1 / ||theta^(1/n)||)`, the nearest-integer variant.
pub fn m_prime_theta(theta: &ThetaExpr, n: u64) -> Result<MValue> {
    theta.validate_for_m()?;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    to_mvalue(
        floor_reciprocal_of(&ThetaRoots(theta), n, FracMode::Nearest)?,
        n,
    )
}

/// Certified comparison of `theta` with `b^n` for a rational `b > 1`.
pub(crate) fn cmp_theta_with_power(theta: &ThetaExpr, b: &BigRational, n: u64) -> Result<Ordering> {
    if rational_root_of(theta, n).is_some_and(|r| &r == b) {
        return Ok(Ordering::Equal);
    }
    let start = 64 + b.numer().bits() as u32 + theta.numerator_bits();
    // sign of log theta - n log b, which is nonzero here
    certified_sign(start, |p| {
        let lb = elementary::ln_rational(b, p + 8);
        let nb = lb.mul(&RealInterval::from_int(n, p + 8), p + 8);
        theta.ln_enclose(p + 8).sub(&nb, p)
    })
}

/// Smallest `n >= lower` with `theta <= (1 + 1/x)^n`.
fn first_n_below_power(theta: &ThetaExpr, x: u64, lower: u64) -> Result<u64> {
    let b = BigRational::one() + BigRational::new(BigInt::one(), BigInt::from(x));
    let holds =
        |n: u64| -> Result<bool> { Ok(cmp_theta_with_power(theta, &b, n)? != Ordering::Greater) };
    let ln_theta = theta.ln_enclose(60).midpoint().to_f64();
    let est = (ln_theta / (1.0 / x as f64).ln_1p()).floor();
    let mut n = if est.is_finite() && est > 0.0 {
        (est as u64).max(lower)
    } else {
        lower
    };
    if holds(n)? {
        while n > lower && holds(n - 1)? {
            n -= 1;
        }
    } else {
        n += 1;
        while !holds(n)? {
            n += 1;
        }
    }
    Ok(n)
}

/// All `n > log theta / log 2` with `M(n) = x`, as a (possibly empty) range.
pub fn inverse_range(theta: &ThetaExpr, x: u64) -> Result<Option<RangeInclusive<u64>>> {
    theta.require_greater_than_one()?;
    if x == 0 {
        return Err(Error::Precondition("x must be positive".into()));
    }
    let lower = n0(theta)?;
    // for n >= N0: M(n) = x iff (1 + 1/(x+1))^n < theta <= (1 + 1/x)^n
    let lo = first_n_below_power(theta, x, lower)?;
    let hi = first_n_below_power(theta, x + 1, lower)? - 1;
    Ok((lo <= hi).then_some(lo..=hi))
}

/// `M` of a general sequence: `floor(1 / frac(theta_n))`.
pub fn m_custom(seq: &dyn RealSequence, n: u64) -> Result<MValue> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    to_mvalue(floor_reciprocal_of(seq, n, FracMode::Fractional)?, n)
}

/// The least `n <= search_cap` with `M(n) = x` for the sequence, if any.
pub fn smallest_n_with_value(
    seq: &dyn RealSequence,
    x: u64,
    search_cap: u64,
) -> Result<Option<u64>> {
    if x == 0 {
        return Err(Error::Precondition("x must be positive".into()));
    }
    let hit = (1..=search_cap)
        .into_par_iter()
        .map(|n| m_custom(seq, n).map(|v| (n, v == MValue::Finite(x))))
        .find_first(|r| !matches!(r, Ok((_, false))));
    match hit {
        None => Ok(None),
        Some(r) => r.map(|(n, _)| Some(n)),
    }
}
