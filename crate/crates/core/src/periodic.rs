//! Linear periodicity of `M` for `theta = e^(k/l)`: the chi table and closed
//! form, the threshold above which it applies, an empirical detector, Beatty
//! sequences and coincidences between two M functions.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{certified_floor, elementary, RealInterval};
use crate::mfun::{m_theta, MValue};
use crate::theta::ThetaExpr;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn require_coprime(k: u64, l: u64) -> Result<()> {
    if k == 0 || l == 0 || k.gcd(&l) != 1 {
        return Err(Error::NotCoprime { k, l });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiRow {
    pub r: u64,
    pub u: u64,
    pub v: u64,
    pub chi: BigRational,
}

/// Per-residue corrections with `M(n) = (l/k) n + chi(n mod k)` above the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiTable {
    pub k: u64,
    pub l: u64,
    pub rows: Vec<ChiRow>,
}

impl ChiTable {
    pub fn chi(&self, n: u64) -> &BigRational {
        &self.rows[(n % self.k) as usize].chi
    }

    /// Plain-text table with columns `r u_r v_r chi`.
    pub fn render_text(&self) -> String {
        let cells: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|row| {
                [
                    row.r.to_string(),
                    row.u.to_string(),
                    row.v.to_string(),
                    row.chi.to_string(),
                ]
            })
            .collect();
        let header = ["r", "u_r", "v_r", "chi"];
        let mut widths = header.map(str::len);
        for c in &cells {
            for (w, s) in widths.iter_mut().zip(c) {
                *w = (*w).max(s.len());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, c: [&str; 4]| {
            let parts: Vec<String> = c
                .iter()
                .zip(widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, header);
        for c in &cells {
            line(&mut out, [&c[0], &c[1], &c[2], &c[3]]);
        }
        out
    }

    /// `key=value` lines, one row per residue.
    pub fn render_key_value(&self) -> String {
        let mut out = format!("k={} l={}\n", self.k, self.l);
        for row in &self.rows {
            let _ = writeln!(
                out,
                "r={} u_r={} v_r={} chi={}",
                row.r, row.u, row.v, row.chi
            );
        }
        out
    }
}

/// The chi table: `k + 2 l r = 2 k u_r + v_r` with `0 <= v_r < 2k`.
pub fn chi_table(k: u64, l: u64) -> Result<ChiTable> {
    require_coprime(k, l)?;
    let rows = (0..k)
        .map(|r| {
            let lhs = k as u128 + 2 * l as u128 * r as u128;
            let two_k = 2 * k as u128;
            let (u, v) = (lhs / two_k, lhs % two_k);
            let by_u = BigRational::from_integer(BigInt::from(u) - 1)
                - BigRational::new(BigInt::from(l) * BigInt::from(r), BigInt::from(k));
            let by_v = rat(-1, 2) - BigRational::new(BigInt::from(v), BigInt::from(two_k));
            assert_eq!(by_u, by_v, "chi expressions disagree at r = {r}");
            ChiRow {
                r,
                u: u as u64,
                v: v as u64,
                chi: by_u,
            }
        })
        .collect();
    Ok(ChiTable { k, l, rows })
}

/// Smallest integer exceeding `max(k/(l log 2), (e^(k/l) - 1)(2k + 1))`.
pub fn threshold(k: u64, l: u64) -> Result<u64> {
    require_coprime(k, l)?;
    let x = BigRational::new(k.into(), l.into());
    let a = certified_floor(64, |p| {
        RealInterval::from_rational(&x, p + 8)
            .div(&elementary::ln2(p + 8), p)
            .expect("log 2 is positive")
    })?;
    let b = certified_floor(64, |p| {
        let bits = p + 8 + (k / l) as u32 * 2;
        elementary::exp_rational(&x, bits)
            .sub(&RealInterval::from_int(1, bits), bits)
            .mul(&RealInterval::from_int(2 * k + 1, bits), p)
    })?;
    (a.max(b) + BigInt::one())
        .to_u64()
        .ok_or(Error::Overflow { n: 0 })
}

/// Closed form for `M_{e^(k/l)}(n)` without the threshold check.
pub fn m_formula_unchecked(k: u64, l: u64, n: u64) -> Result<i64> {
    let table = chi_table(k, l)?;
    let by_chi =
        BigRational::new(BigInt::from(l) * BigInt::from(n), BigInt::from(k)) + table.chi(n);
    let by_floor =
        (BigRational::new(BigInt::from(l) * BigInt::from(n), BigInt::from(k)) - rat(1, 2)).floor();
    assert_eq!(by_chi, by_floor, "closed forms disagree at n = {n}");
    by_chi.to_integer().to_i64().ok_or(Error::Overflow { n })
}

/// `M_{e^(k/l)}(n) = (l/k) n + chi(n mod k) = floor(l n / k - 1/2)` for `n >= threshold(k, l)`.
pub fn m_formula(k: u64, l: u64, n: u64) -> Result<u64> {
    let t = threshold(k, l)?;
    if n < t {
        return Err(Error::BelowThreshold { n, threshold: t });
    }
    Ok(m_formula_unchecked(k, l, n)? as u64)
}

/// `M_{e^(2/l)}(n)` for odd `l >= 3`, valid for every `n >= 1`.
pub fn m_formula_e2l(l: u64, n: u64) -> Result<u64> {
    if l < 3 || l.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "l = {l} must be odd and at least 3"
        )));
    }
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    // (l/2) n - 1 for even n, (l/2) n - 1/2 for odd n
    let twice = l as u128 * n as u128 - if n.is_multiple_of(2) { 2 } else { 1 };
    u64::try_from(twice / 2).map_err(|_| Error::Overflow { n })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateStatus {
    Empirical,
    FormulaVerified,
}

/// `M(n + k) = M(n) + l` for `n_start <= n <= window_end - k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityCertificate {
    pub k: u64,
    pub l: u64,
    pub n_start: u64,
    pub window_end: u64,
    pub status: CertificateStatus,
}

/// Look for eventual linear periodicity in `values`, where `values[i]` is `f(start + i)`.
///
/// The difference sequence must be `k`-periodic from `n_start` to the end of
/// the window and cover the first period plus `min_repeats` repetitions. The
/// smallest such `k` wins, and for it the earliest `n_start`.
pub fn detect_linear_periodicity(
    values: &[i64],
    start: u64,
    max_period: usize,
    min_repeats: usize,
) -> Result<Option<PeriodicityCertificate>> {
    if max_period == 0 || min_repeats == 0 {
        return Err(Error::Precondition(
            "max_period and min_repeats must be positive".into(),
        ));
    }
    let needed = max_period * (min_repeats + 1);
    if values.len() < needed || values.len() < 2 {
        return Err(Error::WindowTooShort {
            len: values.len(),
            needed,
        });
    }
    let delta: Vec<i64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    for k in 1..=max_period.min(delta.len()) {
        let s = (0..delta.len() - k)
            .rev()
            .find(|&j| delta[j] != delta[j + k])
            .map_or(0, |j| j + 1);
        if delta.len() - s < k * (min_repeats + 1) {
            continue;
        }
        let l: i64 = delta[s..s + k].iter().sum();
        if l <= 0 {
            continue;
        }
        return Ok(Some(PeriodicityCertificate {
            k: k as u64,
            l: l as u64,
            n_start: start + s as u64,
            window_end: start + values.len() as u64 - 1,
            status: CertificateStatus::Empirical,
        }));
    }
    Ok(None)
}

const VERIFY_CHUNK: u64 = 4096;

/// Check a certificate against `M_theta` up to `horizon`.
///
/// `(k, l)` is first reduced to lowest terms. When theta is `e^(k/l)` with the
/// same ratio, the closed form is also checked from the threshold on and the
/// certificate becomes `FormulaVerified`; otherwise it stays `Empirical`.
pub fn verify_certificate(
    theta: &ThetaExpr,
    cert: &PeriodicityCertificate,
    horizon: u64,
) -> Result<PeriodicityCertificate> {
    theta.validate_for_m()?;
    if cert.k == 0 || cert.l == 0 {
        return Err(Error::Precondition(
            "certificate needs positive k and l".into(),
        ));
    }
    let g = cert.k.gcd(&cert.l);
    let (k, l) = (cert.k / g, cert.l / g);
    let formula = match theta {
        ThetaExpr::ExpRational { k: tk, l: tl } if (*tk, *tl) == (k, l) => Some(threshold(k, l)?),
        _ => None,
    };

    let mut n = cert.n_start.max(1);
    while n <= horizon {
        let end = (n + VERIFY_CHUNK - 1).min(horizon);
        let m: Vec<MValue> = (n..=end + k)
            .into_par_iter()
            .map(|i| m_theta(theta, i))
            .collect::<Result<_>>()?;
        for i in n..=end {
            let a = m[(i - n) as usize];
            let b = m[(i - n + k) as usize];
            let shifted = matches!((a, b), (MValue::Finite(a), MValue::Finite(b)) if b == a + l);
            if !shifted {
                return Err(Error::CertificateViolated { n: i });
            }
            if let (Some(t), MValue::Finite(a)) = (formula, a) {
                if i >= t && m_formula(k, l, i)? != a {
                    return Err(Error::CertificateViolated { n: i });
                }
            }
        }
        n = end + 1;
    }
    let status = if formula.is_some() {
        CertificateStatus::FormulaVerified
    } else {
        CertificateStatus::Empirical
    };
    Ok(PeriodicityCertificate {
        k,
        l,
        n_start: cert.n_start,
        window_end: horizon.max(cert.window_end),
        status,
    })
}

/// The slope `alpha` of a Beatty sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BeattyAlpha {
    Exact(BigRational),
    /// `1 / log theta`.
    InverseLog(ThetaExpr),
}

/// `floor(n alpha + beta)`, certified.
pub fn beatty(alpha: &BeattyAlpha, beta: &BigRational, n: u64) -> Result<BigInt> {
    let exact = match alpha {
        BeattyAlpha::Exact(a) => Some(a.clone()),
        BeattyAlpha::InverseLog(theta) => {
            theta.validate_for_m()?;
            theta.exact_log().map(|lg| lg.recip())
        }
    };
    if let Some(a) = exact {
        return Ok((a * BigRational::from_integer(n.into()) + beta)
            .floor()
            .to_integer());
    }
    let BeattyAlpha::InverseLog(theta) = alpha else {
        unreachable!()
    };
    // log theta is irrational here, so n/log theta + beta is never an integer
    let nb = RealInterval::from_int(n, 0);
    let start =
        64 + 64 - n.leading_zeros() + beta.numer().bits() as u32 + beta.denom().bits() as u32;
    certified_floor(start, |p| {
        nb.div(&theta.ln_enclose(p + 8), p + 4)
            .expect("log theta is nonzero")
            .add(&RealInterval::from_rational(beta, p + 8), p)
    })
}

/// Which of the two Beatty candidates `floor(n / log theta -+ 1/2)` equals `M(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeattySide {
    MinusHalf,
    PlusHalf,
}

/// Classify `M(n)` against `floor(n / log theta - 1/2)` and `floor(n / log theta + 1/2)`.
///
/// The two candidates always differ by exactly one, so at most one matches;
/// an error is returned when neither does (possible only for small `n`).
pub fn classify_beatty(theta: &ThetaExpr, n: u64) -> Result<BeattySide> {
    theta.require_greater_than_one()?;
    let m = match m_theta(theta, n)? {
        MValue::Finite(v) => BigInt::from(v),
        MValue::Infinite => return Err(Error::InfiniteValue { n }),
    };
    let lower = beatty(&BeattyAlpha::InverseLog(theta.clone()), &rat(-1, 2), n)?;
    if m == lower {
        Ok(BeattySide::MinusHalf)
    } else if m == lower + 1 {
        Ok(BeattySide::PlusHalf)
    } else {
        Err(Error::Precondition(format!(
            "M({n}) matches neither Beatty candidate"
        )))
    }
}

/// All `n <= n_max` where `M_theta(n)` and `M_psi(n)` are equal and finite.
pub fn coincidence_set(theta: &ThetaExpr, psi: &ThetaExpr, n_max: u64) -> Result<Vec<u64>> {
    theta.require_greater_than_one()?;
    psi.require_greater_than_one()?;
    let hits: Vec<Option<u64>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let a = m_theta(theta, n)?;
            let b = m_theta(psi, n)?;
            Ok((!a.is_infinite() && a == b).then_some(n))
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// Mean slope of `values` over the window, as an exact rational.
pub fn mean_slope(values: &[i64]) -> Option<BigRational> {
    if values.len() < 2 {
        return None;
    }
    let rise = BigInt::from(values[values.len() - 1]) - BigInt::from(values[0]);
    Some(BigRational::new(rise, BigInt::from(values.len() - 1)))
}
