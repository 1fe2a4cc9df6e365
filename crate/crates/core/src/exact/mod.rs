//! Certified evaluation of `theta^(1/n)` and of `floor(1 / frac(theta^(1/n)))`.
//!
//! Everything here is a pure function of its arguments. Precision escalates by
//! doubling from a per-call starting point until an interval verdict is
//! unambiguous or the global cap is reached.

pub mod dyadic;
pub mod elementary;
pub mod interval;
pub mod root;

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use dyadic::{Dyadic, Round};
pub use interval::RealInterval;
pub use root::exact_rational_root;

use crate::error::{Error, Result};
use crate::theta::ThetaExpr;
use elementary::{exp_interval, exp_rational, ln_interval};

pub const DEFAULT_PRECISION_CAP: u64 = 1 << 20;

static PRECISION_CAP: AtomicU64 = AtomicU64::new(DEFAULT_PRECISION_CAP);

/// Radicand size (in bits) above which roots go through `exp(log(x)/n)`
/// instead of integer Newton iteration.
const NEWTON_BUDGET_BITS: u64 = 1 << 12;

pub fn precision_cap() -> u64 {
    PRECISION_CAP.load(AtomicOrdering::Relaxed)
}

/// Set the global precision cap. Meant to be called once at startup.
pub fn set_precision_cap(bits: u64) {
    PRECISION_CAP.store(bits.max(64), AtomicOrdering::Relaxed);
}

fn check_cap(bits: u64) -> Result<()> {
    let cap = precision_cap();
    if bits > cap {
        return Err(Error::PrecisionCapExceeded {
            requested: bits,
            cap,
        });
    }
    Ok(())
}

pub(crate) fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Run `attempt` at `start`, `2 start`, `4 start`, ... bits until it yields a value.
pub fn escalate<T>(start: u32, mut attempt: impl FnMut(u32) -> Result<Option<T>>) -> Result<T> {
    let mut p = start.max(16) as u64;
    loop {
        check_cap(p)?;
        if let Some(v) = attempt(p as u32)? {
            return Ok(v);
        }
        p *= 2;
    }
}

/// Certified floor of a real given by enclosures at increasing precision.
/// Never terminates on an exact integer unless an enclosure collapses onto it,
/// so callers resolve rational cases before calling.
pub fn certified_floor(start: u32, f: impl Fn(u32) -> RealInterval) -> Result<BigInt> {
    escalate(start, |p| {
        let iv = f(p);
        let a = iv.lo().floor();
        Ok((a == iv.hi().floor()).then_some(a))
    })
}

/// Certified sign of a real that is known to be nonzero.
pub fn certified_sign(start: u32, f: impl Fn(u32) -> RealInterval) -> Result<Ordering> {
    escalate(start, |p| {
        let iv = f(p);
        Ok(if iv.lo().is_positive() {
            Some(Ordering::Greater)
        } else if iv.hi().is_negative() {
            Some(Ordering::Less)
        } else {
            None
        })
    })
}

/// Tight (not canonical) enclosure of `theta^(1/n)` at working precision `w`.
fn root_enclosure(theta: &ThetaExpr, n: u64, w: u32) -> RealInterval {
    if let ThetaExpr::ExpRational { k, l } = theta {
        let x = BigRational::new(BigInt::from(*k), BigInt::from(*l) * BigInt::from(n));
        return exp_rational(&x, w);
    }
    let t = theta.enclose(w + 8);
    if n == 1 {
        return t;
    }
    let radicand_bits = n.saturating_mul(w as u64 + 16 + t.hi().magnitude_bits().unsigned_abs());
    if n <= u32::MAX as u64 && radicand_bits <= NEWTON_BUDGET_BITS {
        let n32 = n as u32;
        RealInterval::new(
            t.lo().nth_root(n32, w, Round::Down),
            t.hi().nth_root(n32, w, Round::Up),
            w,
        )
    } else {
        let ln = ln_interval(&t, w + 8);
        let scaled = ln
            .div(&RealInterval::from_int(n, w + 8), w + 8)
            .expect("n is nonzero");
        exp_interval(&scaled, w)
    }
}

/// Exact `theta^(1/n)` when theta is rational and the root is rational.
pub fn rational_root_of(theta: &ThetaExpr, n: u64) -> Option<BigRational> {
    let r = theta.as_rational()?;
    if n > u32::MAX as u64 {
        return r.is_one().then(BigRational::one);
    }
    let p: BigUint = r.numer().magnitude().clone();
    let q: BigUint = r.denom().magnitude().clone();
    exact_rational_root(&p, &q, n as u32)
}

/// Certified enclosure of `theta^(1/n)` meeting `hi - lo <= 2^-p max(1, |hi|)`.
///
/// The result is the cell of a fixed power-of-two grid that contains the root
/// (a single point when the root lies on the grid), so raising the precision
/// always returns a sub-interval of the previous answer.
pub fn nth_root_interval(theta: &ThetaExpr, n: u64, precision_bits: u32) -> Result<RealInterval> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if theta.as_rational().is_some_and(|r| !r.is_positive()) {
        return Err(Error::InvalidTheta(format!("{theta} is not positive")));
    }
    let p = precision_bits.max(1);
    check_cap(p as u64)?;

    // grid step 2^(e - p) with 2^e <= max(1, root)
    let rough = root_enclosure(theta, n, 40);
    let e = (rough.lo().magnitude_bits() - 1).max(0);
    let step_exp = e - p as i64;

    if let Some(root) = rational_root_of(theta, n) {
        let scaled = &root
            * BigRational::from_integer(BigInt::one() << (p as i64 - e).max(0) as u64)
            / BigRational::from_integer(BigInt::one() << (e - p as i64).max(0) as u64);
        let lo = Dyadic::new(scaled.floor().to_integer(), step_exp);
        let hi = Dyadic::new(scaled.ceil().to_integer(), step_exp);
        return Ok(RealInterval::new(lo, hi, p));
    }

    // irrational root: it never sits on a grid point, so this terminates
    let step = Dyadic::new(BigInt::one(), step_exp);
    let mut w = p + 32;
    loop {
        let t = root_enclosure(theta, n, w);
        let a = t.lo().round_to_grid(step_exp, Round::Down);
        let b = t.hi().round_to_grid(step_exp, Round::Down);
        if a == b {
            let hi = &a + &step;
            return Ok(RealInterval::new(a, hi, p));
        }
        w = w.saturating_mul(2);
        if w as u64 > 2 * precision_cap() {
            return Err(Error::PrecisionCapExceeded {
                requested: w as u64,
                cap: precision_cap(),
            });
        }
    }
}

/// Result of a certified floor of a reciprocal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FloorResult {
    Exact(BigInt),
    Infinite,
    /// The cap was hit first; carries the width of the last enclosure.
    Undecided(Dyadic),
}

/// Which distance to the integers the reciprocal is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracMode {
    /// `{x}`, the fractional part.
    Fractional,
    /// `||x||`, the distance to the nearest integer.
    Nearest,
}

/// A real sequence `theta_n` that can be enclosed to any precision.
pub trait RealSequence: Sync {
    fn enclose(&self, n: u64, precision_bits: u32) -> Result<RealInterval>;

    /// Exact value of the term, when it is known to be rational.
    fn exact_term(&self, _n: u64) -> Option<BigRational> {
        None
    }

    fn start_precision(&self, n: u64) -> u32 {
        64 + ceil_log2(n)
    }
}

/// The sequence `theta^(1/n)`.
#[derive(Debug, Clone, Copy)]
pub struct ThetaRoots<'a>(pub &'a ThetaExpr);

impl RealSequence for ThetaRoots<'_> {
    fn enclose(&self, n: u64, precision_bits: u32) -> Result<RealInterval> {
        nth_root_interval(self.0, n, precision_bits)
    }

    fn exact_term(&self, n: u64) -> Option<BigRational> {
        rational_root_of(self.0, n)
    }

    fn start_precision(&self, n: u64) -> u32 {
        64 + ceil_log2(n) + self.0.numerator_bits()
    }
}

/// The sequence `n^(1/n)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NthRootOfN;

impl RealSequence for NthRootOfN {
    fn enclose(&self, n: u64, precision_bits: u32) -> Result<RealInterval> {
        let theta = ThetaExpr::rational(n, 1u32)?;
        nth_root_interval(&theta, n, precision_bits)
    }

    fn exact_term(&self, n: u64) -> Option<BigRational> {
        rational_root_of(&ThetaExpr::rational(n, 1u32).ok()?, n)
    }

    fn start_precision(&self, n: u64) -> u32 {
        64 + 2 * ceil_log2(n)
    }
}

fn distance_of_rational(frac: &BigRational, mode: FracMode) -> BigRational {
    match mode {
        FracMode::Fractional => frac.clone(),
        FracMode::Nearest => {
            let other = BigRational::one() - frac;
            if &other < frac {
                other
            } else {
                frac.clone()
            }
        }
    }
}

/// `floor(1/d)` for a dyadic `d > 0`.
fn floor_recip(d: &Dyadic) -> BigInt {
    // 1/(m 2^e) = 2^-e / m
    let m = d.mantissa();
    let e = d.exponent();
    if e <= 0 {
        (BigInt::one() << (-e) as u64).div_floor(m)
    } else {
        BigInt::one().div_floor(&(m << e as u64))
    }
}

/// The floor of `1/dist` is determined by the enclosure, or `None`.
fn decide_floor_recip(iv: &RealInterval, mode: FracMode) -> Option<BigInt> {
    let fl = iv.lo().floor();
    if iv.hi().floor() != fl {
        return None;
    }
    let base = Dyadic::from_int(fl);
    let dlo = iv.lo() - &base;
    let dhi = iv.hi() - &base;
    let (lo, hi) = match mode {
        FracMode::Fractional => (dlo, dhi),
        FracMode::Nearest => {
            let half = Dyadic::new(BigInt::one(), -1);
            let one = Dyadic::one();
            if dhi < half {
                (dlo, dhi)
            } else if dlo > half {
                (&one - &dhi, &one - &dlo)
            } else {
                return None;
            }
        }
    };
    if !lo.is_positive() {
        return None;
    }
    let a = floor_recip(&hi);
    let b = floor_recip(&lo);
    (a == b).then_some(a)
}

/// `floor(1/dist(theta_n))` for a general sequence; `Infinite` when the term is an integer.
pub fn floor_reciprocal_of(seq: &dyn RealSequence, n: u64, mode: FracMode) -> Result<FloorResult> {
    if let Some(r) = seq.exact_term(n) {
        let frac = &r - r.floor();
        if frac.is_zero() {
            return Ok(FloorResult::Infinite);
        }
        let d = distance_of_rational(&frac, mode);
        return Ok(FloorResult::Exact(
            (BigRational::one() / d).floor().to_integer(),
        ));
    }
    let mut p = seq.start_precision(n).max(16) as u64;
    let mut last_width = None;
    loop {
        if p > precision_cap() {
            return Ok(FloorResult::Undecided(
                last_width.unwrap_or_else(Dyadic::one),
            ));
        }
        let iv = match seq.enclose(n, p as u32) {
            Ok(iv) => iv,
            Err(Error::PrecisionCapExceeded { .. }) => {
                return Ok(FloorResult::Undecided(
                    last_width.unwrap_or_else(Dyadic::one),
                ))
            }
            Err(e) => return Err(e),
        };
        if let Some(v) = decide_floor_recip(&iv, mode) {
            return Ok(FloorResult::Exact(v));
        }
        last_width = Some(iv.width());
        p *= 2;
    }
}

/// `floor(1 / frac(theta^(1/n)))`, or `Infinite` when `theta^(1/n)` is an integer.
pub fn certified_floor_reciprocal_frac(theta: &ThetaExpr, n: u64) -> Result<FloorResult> {
    theta.validate_for_m()?;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    floor_reciprocal_of(&ThetaRoots(theta), n, FracMode::Fractional)
}
