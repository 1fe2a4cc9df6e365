#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rootfrac::{MValue, ThetaExpr};

/// The nine reference tables: fixture file name and theta.
pub const TABLES: [(&str, &str); 9] = [
    ("theta_3_2.txt", "3/2"),
    ("theta_2.txt", "2"),
    ("theta_17.txt", "17"),
    ("theta_pi.txt", "pi"),
    ("theta_e2_3.txt", "e^2/3"),
    ("theta_e2_5.txt", "e^2/5"),
    ("theta_e4_5.txt", "e^4/5"),
    ("theta_e3_7.txt", "e^3/7"),
    ("theta_e5_7.txt", "e^5/7"),
];

pub struct Table {
    pub values: Vec<MValue>,
    /// Position (1-based n) of the boxed entry.
    pub boxed: u64,
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/tables")
        .join(name)
}

pub fn load_table(name: &str) -> Table {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    let mut values = Vec::new();
    let mut boxed = 0;
    for tok in text.split_whitespace() {
        let (inner, is_boxed) = match tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            Some(t) => (t, true),
            None => (tok, false),
        };
        values.push(if inner == "inf" {
            MValue::Infinite
        } else {
            MValue::Finite(inner.parse().expect("integer entry"))
        });
        if is_boxed {
            boxed = values.len() as u64;
        }
    }
    Table { values, boxed }
}

pub fn theta(s: &str) -> ThetaExpr {
    s.parse().expect("valid theta")
}

/// Base values greater than one used by the property tests.
pub fn test_thetas() -> Vec<ThetaExpr> {
    ["3/2", "2", "e^1/2", "e", "e^3/7", "e^2/3", "pi", "17", "20"]
        .iter()
        .map(|s| theta(s))
        .collect()
}

/// A random theta of any variant: rationals with p, q <= 1000 (including
/// values below one and perfect powers), e^(k/l) with k, l <= 10, pi, e and
/// decimal literals.
pub fn random_theta(rng: &mut ChaCha8Rng) -> ThetaExpr {
    loop {
        let t = match rng.gen_range(0..10) {
            0..=2 => {
                let p: u64 = rng.gen_range(1..=1000);
                let q: u64 = rng.gen_range(1..=1000);
                ThetaExpr::rational(p, q).unwrap()
            }
            3 => {
                let b: u64 = rng.gen_range(2..=10);
                let e: u32 = rng.gen_range(1..=3);
                ThetaExpr::rational(b.pow(e), 1u32).unwrap()
            }
            4..=5 => ThetaExpr::exp_rational(rng.gen_range(1..=10), rng.gen_range(1..=10)).unwrap(),
            6 => ThetaExpr::pi(),
            7 => ThetaExpr::e(),
            _ => {
                let int_part: u32 = rng.gen_range(0..=99);
                let frac: u32 = rng.gen_range(0..=999);
                ThetaExpr::decimal(&format!("{int_part}.{frac:03}")).unwrap()
            }
        };
        if t.validate_for_m().is_ok() {
            return t;
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
