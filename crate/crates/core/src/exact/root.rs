//! Integer nth roots by Newton iteration, and the exact rational-root test.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) fn pow_big(x: &BigUint, n: u32) -> BigUint {
    num_traits::pow(x.clone(), n as usize)
}

/// A starting point `x0 >= floor(N^(1/n))`, close enough for quadratic convergence.
fn initial_guess(radicand: &BigUint, n: u32) -> BigUint {
    let bits = radicand.bits();
    let (top, shift) = if bits > 64 {
        ((radicand >> (bits - 64)).to_u64().unwrap(), bits - 64)
    } else {
        (radicand.to_u64().unwrap(), 0)
    };
    let lg = (top as f64).log2() + shift as f64;
    let t = lg / n as f64;
    let guess = if t < 52.0 {
        BigUint::from(2f64.powf(t).ceil() as u64)
    } else {
        let ip = t.floor();
        let frac = t - ip;
        let m = (2f64.powf(frac) * (1u64 << 52) as f64) as u64;
        BigUint::from(m) << (ip as u64 - 52)
    };
    let mut x = &guess + (&guess >> 20u32) + 2u32;
    while pow_big(&x, n) <= *radicand {
        x <<= 1u32;
    }
    x
}

/// `floor(N^(1/n))` for `n >= 1`.
pub fn int_nth_root_floor(radicand: &BigUint, n: u32) -> BigUint {
    assert!(n >= 1);
    if radicand.is_zero() || n == 1 {
        return radicand.clone();
    }
    if n as u64 >= radicand.bits() {
        // 1 <= N < 2^n
        return BigUint::one();
    }
    let n_big = BigUint::from(n);
    let n_minus_1 = BigUint::from(n - 1);
    let mut x = initial_guess(radicand, n);
    loop {
        let y = (&n_minus_1 * &x + radicand / pow_big(&x, n - 1)) / &n_big;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Exact root of an integer when it is a perfect nth power.
fn exact_int_root(v: &BigUint, n: u32) -> Option<BigUint> {
    let r = int_nth_root_floor(v, n);
    (pow_big(&r, n) == *v).then_some(r)
}

/// The rational `a/b` with `(a/b)^n = p/q`, when both `p` and `q` are perfect
/// nth powers. `gcd(p, q) = 1` is required.
pub fn exact_rational_root(p: &BigUint, q: &BigUint, n: u32) -> Option<BigRational> {
    debug_assert!(p.gcd(q).is_one(), "exact_rational_root needs coprime p, q");
    assert!(!q.is_zero());
    let a = exact_int_root(p, n)?;
    let b = exact_int_root(q, n)?;
    Some(BigRational::new(BigInt::from(a), BigInt::from(b)))
}
