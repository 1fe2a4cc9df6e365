//! Certified enclosures of exp, log and pi.
//!
//! Series are summed in fixed point with `W` fractional bits. Each routine
//! returns a scaled sum `S` and an error bound `E` in units of `2^-W`, so the
//! true value lies in `[(S - E) 2^-W, (S + E) 2^-W]`. Truncating a term costs
//! at most one unit, and inherited errors shrink geometrically because every
//! series is only evaluated on a reduced argument.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::Dyadic;
use super::interval::RealInterval;

fn fixed_to_interval(sum: &BigInt, err: u64, w: u32, prec: u32) -> RealInterval {
    let e = BigInt::from(err);
    RealInterval::new(
        Dyadic::new(sum - &e, -(w as i64)),
        Dyadic::new(sum + &e, -(w as i64)),
        prec,
    )
}

/// `exp(a/b) * 2^w` for `0 <= a/b <= 1/2`.
fn exp_series_fixed(a: &BigInt, b: &BigInt, w: u32) -> (BigInt, u64) {
    let one = BigInt::one() << w;
    let mut term = one.clone();
    let mut sum = one;
    let mut i: u64 = 1;
    loop {
        term = (&term * a).div_floor(&(b * BigInt::from(i)));
        if term.is_zero() {
            break;
        }
        sum += &term;
        i += 1;
    }
    (sum, 2 * i + 6)
}

/// `atanh(a/b) * 2^w` for `0 <= a/b <= 1/3`.
fn atanh_series_fixed(a: &BigInt, b: &BigInt, w: u32) -> (BigInt, u64) {
    let a2 = a * a;
    let b2 = b * b;
    let mut power = (a << w).div_floor(b);
    let mut sum = power.clone();
    let mut i: u64 = 0;
    loop {
        power = (&power * &a2).div_floor(&b2);
        if power.is_zero() {
            break;
        }
        i += 1;
        sum += power.div_floor(&BigInt::from(2 * i + 1));
    }
    (sum, 3 * i + 8)
}

/// `atan(1/m) * 2^w` for integer `m >= 5`.
fn atan_inv_series_fixed(m: u64, w: u32) -> (BigInt, u64) {
    let m2 = BigInt::from(m * m);
    let mut power = (BigInt::one() << w).div_floor(&BigInt::from(m));
    let mut sum = power.clone();
    let mut i: u64 = 0;
    loop {
        power = power.div_floor(&m2);
        if power.is_zero() {
            break;
        }
        i += 1;
        let term = power.div_floor(&BigInt::from(2 * i + 1));
        if i % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    (sum, 3 * i + 6)
}

fn guard_bits(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// Enclosure of pi with relative width about `2^-prec`.
pub fn pi(prec: u32) -> RealInterval {
    let w = prec + 16;
    let (a, ea) = atan_inv_series_fixed(5, w);
    let (b, eb) = atan_inv_series_fixed(239, w);
    let sum = a * 16 - b * 4;
    fixed_to_interval(&sum, 16 * ea + 4 * eb, w, prec)
}

/// Enclosure of log 2.
pub fn ln2(prec: u32) -> RealInterval {
    let w = prec + 16;
    let (a, e) = atanh_series_fixed(&BigInt::one(), &BigInt::from(3), w);
    fixed_to_interval(&(a * 2), 2 * e, w, prec)
}

/// Enclosure of `exp(x)` for a rational `x`.
pub fn exp_rational(x: &BigRational, prec: u32) -> RealInterval {
    if x.is_zero() {
        return RealInterval::from_int(1, prec);
    }
    if x.is_negative() {
        return exp_rational(&-x, prec + 4)
            .recip(prec)
            .expect("exp is positive")
            .with_precision_bits(prec);
    }
    let num = x.numer();
    let den = x.denom();
    // x / 2^s <= 1/2
    let s = (num.bits() as i64 - den.bits() as i64 + 2).max(0) as u32;
    let w = prec + s + 24;
    let (sum, err) = exp_series_fixed(num, &(den << s), w);
    let mut iv = fixed_to_interval(&sum, err, w, w);
    for _ in 0..s {
        iv = iv.mul(&iv, w);
    }
    iv.with_precision_bits(prec)
}

/// Enclosure of `exp` over an interval (exp is increasing).
pub fn exp_interval(x: &RealInterval, prec: u32) -> RealInterval {
    let lo = exp_rational(&x.lo().to_rational(), prec);
    if x.is_point() {
        return lo;
    }
    let hi = exp_rational(&x.hi().to_rational(), prec);
    RealInterval::new(lo.lo().clone(), hi.hi().clone(), prec)
}

/// Enclosure of `log(y)` for a rational `y > 0`.
pub fn ln_rational(y: &BigRational, prec: u32) -> RealInterval {
    assert!(y.is_positive(), "log of a nonpositive rational");
    if y.is_one() {
        return RealInterval::from_int(0, prec);
    }
    let mut m = y.numer().bits() as i64 - y.denom().bits() as i64;
    let two = BigRational::from_integer(BigInt::from(2));
    let mut z = if m >= 0 {
        y / BigRational::from_integer(BigInt::one() << (m as u64))
    } else {
        y * BigRational::from_integer(BigInt::one() << ((-m) as u64))
    };
    let four_thirds = BigRational::new(4.into(), 3.into());
    let two_thirds = BigRational::new(2.into(), 3.into());
    while z > four_thirds {
        z /= &two;
        m += 1;
    }
    while z < two_thirds {
        z *= &two;
        m -= 1;
    }
    // log z = 2 atanh(u), u = (z - 1)/(z + 1), |u| <= 1/5
    let (zn, zd) = (z.numer(), z.denom());
    let un = zn - zd;
    let ud = zn + zd;
    let small = if m == 0 && !un.is_zero() {
        (ud.bits() as i64 - un.abs().bits() as i64 + 1).max(0) as u32
    } else {
        0
    };
    let mabs = m.unsigned_abs();
    let w = prec + small + guard_bits(mabs) + 16;
    let (a, ea) = if un.is_zero() {
        (BigInt::zero(), 0)
    } else {
        atanh_series_fixed(&un.abs(), &ud, w)
    };
    let a = if un.is_negative() { -a } else { a };
    let mut sum = a * 2;
    let mut err = 2 * ea;
    if m != 0 {
        let (l2, e2) = atanh_series_fixed(&BigInt::one(), &BigInt::from(3), w);
        sum += l2 * 2 * BigInt::from(m);
        err += 2 * e2 * mabs;
    }
    fixed_to_interval(&sum, err, w, prec)
}

/// Enclosure of `log` over a positive interval.
pub fn ln_interval(x: &RealInterval, prec: u32) -> RealInterval {
    assert!(x.lo().is_positive(), "log of an interval reaching zero");
    let lo = ln_rational(&x.lo().to_rational(), prec);
    if x.is_point() {
        return lo;
    }
    let hi = ln_rational(&x.hi().to_rational(), prec);
    RealInterval::new(lo.lo().clone(), hi.hi().clone(), prec)
}
