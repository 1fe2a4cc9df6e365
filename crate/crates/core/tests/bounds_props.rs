mod common;

use common::{oracle, rat, test_thetas, theta};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use rootfrac::bounds::{
    bernoulli_approx, bernoulli_numbers, check_gap_bound, check_main_ineq, check_strict_increase,
    inequality_sweep, StrictIncrease, SWEEP_FAMILIES,
};
use rootfrac::{n0, Error, ThetaExpr};

fn factorial(n: usize) -> BigRational {
    BigRational::from_integer((1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

#[test]
fn randomized_sweep_has_no_failures() {
    let summaries = inequality_sweep(7, 300).unwrap();
    let names: Vec<_> = summaries.iter().map(|s| s.family).collect();
    assert_eq!(names, SWEEP_FAMILIES);
    for s in &summaries {
        assert_eq!(s.samples, 300);
        assert!(
            s.passed(),
            "{s}: {:?}",
            s.failures.first().map(ToString::to_string)
        );
    }
}

#[test]
fn main_inequality_holds_on_full_windows() {
    for t in test_thetas() {
        let start = n0(&t).unwrap();
        (start..=1500).into_par_iter().for_each(|n| {
            let check = check_main_ineq(&t, n).unwrap();
            assert!(check.is_applicable() && check.holds(), "{check}");
        });
    }
}

#[test]
fn gap_bound_holds_for_consecutive_and_distant_pairs() {
    for t in test_thetas() {
        let start = n0(&t).unwrap();
        (start..600).into_par_iter().for_each(|n| {
            for n2 in [n + 1, n + 7, n + 400] {
                let check = check_gap_bound(&t, n, n2).unwrap();
                assert!(check.holds(), "{check}");
            }
        });
    }
}

#[test]
fn main_inequality_rejects_small_n() {
    let t = theta("17");
    assert!(matches!(
        check_main_ineq(&t, n0(&t).unwrap() - 1),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn strict_increase_dichotomy() {
    for t in ["3/2", "2", "e^1/2", "e"].map(theta) {
        let start = n0(&t).unwrap();
        assert_eq!(
            check_strict_increase(&t, start, start + 500).unwrap(),
            StrictIncrease::StrictlyIncreasing,
            "{t}"
        );
    }
    // e^(5/7) e = e^(12/7)
    for t in ["17", "pi", "e^12/7", "20"].map(theta) {
        let start = n0(&t).unwrap();
        let outcome = check_strict_increase(&t, start, start + 500).unwrap();
        assert!(matches!(outcome, StrictIncrease::RepeatFoundAt(_)), "{t}");
    }
}

#[test]
fn bernoulli_generating_function_product_is_one() {
    // (sum B_j x^j / j!) (sum x^j / (j + 1)!) = 1 up to order N - 1
    const N: usize = 40;
    let b = bernoulli_numbers(N);
    let a: Vec<BigRational> = (0..N).map(|j| &b[j] / factorial(j)).collect();
    let c: Vec<BigRational> = (0..N).map(|j| factorial(j + 1).recip()).collect();
    for m in 0..N {
        let coeff: BigRational = (0..=m).map(|j| &a[j] * &c[m - j]).sum();
        let want = if m == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        assert_eq!(coeff, want, "order {m}");
    }
    assert_eq!(
        b[..5],
        [rat(1, 1), rat(-1, 2), rat(1, 6), rat(0, 1), rat(-1, 30)]
    );
}

/// Reference bracket of `1/(theta^(1/n) - 1)`.
fn reference(t: &ThetaExpr, n: u64) -> (BigRational, BigRational) {
    let (lo, hi) = oracle::root(t, n).bracket();
    let one = BigRational::one();
    ((&hi - &one).recip(), (&lo - &one).recip())
}

fn center(t: &ThetaExpr, n: u64, terms: usize) -> BigRational {
    let iv = bernoulli_approx(t, n, terms).unwrap();
    (iv.lo().to_rational() + iv.hi().to_rational()) / rat(2, 1)
}

#[test]
fn series_error_shrinks_with_n() {
    for t in test_thetas() {
        let errors: Vec<BigRational> = [10u64, 100, 1000]
            .iter()
            .map(|&n| {
                let (lo, hi) = reference(&t, n);
                let mid = (&lo + &hi) / rat(2, 1);
                let iv = bernoulli_approx(&t, n, 3).unwrap();
                assert!(
                    iv.lo().to_rational() <= lo && hi <= iv.hi().to_rational(),
                    "{t} n={n}"
                );
                (center(&t, n, 3) - mid).abs()
            })
            .collect();
        assert!(
            errors[1] < errors[0] && errors[2] < errors[1],
            "{t}: {errors:?}"
        );
    }
}

#[test]
fn zero_term_series_for_e() {
    // 1/(e^(1/10) - 1) = 9.50833...
    let iv = bernoulli_approx(&ThetaExpr::e(), 10, 0).unwrap();
    let (lo, hi) = reference(&ThetaExpr::e(), 10);
    assert!(iv.lo().to_rational() <= lo && hi <= iv.hi().to_rational());
    assert_eq!(center(&ThetaExpr::e(), 10, 0), rat(19, 2));
    for n in 2..=100u64 {
        let c = center(&ThetaExpr::e(), n, 0);
        assert_eq!(c.floor().to_integer(), BigInt::from(n - 1), "n={n}");
    }
}

#[test]
fn series_outside_its_disc_is_rejected() {
    // 2 pi n = 12.566... for n = 2
    assert_eq!(
        bernoulli_approx(&theta("e^13"), 2, 1),
        Err(Error::ConvergenceDomain)
    );
    assert!(bernoulli_approx(&theta("e^12"), 2, 1).is_ok());
    assert_eq!(
        bernoulli_approx(&theta("e^7"), 1, 0),
        Err(Error::ConvergenceDomain)
    );
}
