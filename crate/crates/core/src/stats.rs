//! Finite-window statistics of M: residues mod m, the binary gap sequence and
//! the set where M takes the upper Beatty candidate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mfun::{m_sequence, m_theta, MValue};
use crate::periodic::{beatty, BeattyAlpha};
use crate::theta::ThetaExpr;

/// Counts of values per residue class mod `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueHistogram {
    pub m: u64,
    pub counts: Vec<u64>,
    pub total: u64,
    pub frequencies: Vec<BigRational>,
}

impl ResidueHistogram {
    /// `max_r |frequency(r) - 1/m|`.
    pub fn max_deviation(&self) -> BigRational {
        let uniform = BigRational::new(1.into(), BigInt::from(self.m));
        self.frequencies
            .iter()
            .map(|f| (f - &uniform).abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

pub fn distribution_mod_m(values: &[i64], m: u64) -> Result<ResidueHistogram> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    if values.is_empty() {
        return Err(Error::Precondition("no values".into()));
    }
    let mut counts = vec![0u64; m as usize];
    for &v in values {
        counts[(v as i128).rem_euclid(m as i128) as usize] += 1;
    }
    let total = values.len() as u64;
    let frequencies = counts
        .iter()
        .map(|&c| BigRational::new(BigInt::from(c), BigInt::from(total)))
        .collect();
    Ok(ResidueHistogram {
        m,
        counts,
        total,
        frequencies,
    })
}

/// `M(n + 1) - M(n) - 1` for `n` in `[n_from, n_to)`; every gap must be 1 or 2.
pub fn gap_binary_sequence(theta: &ThetaExpr, n_from: u64, n_to: u64) -> Result<Vec<u8>> {
    let seq = m_sequence(theta, n_from, n_to)?;
    let values = seq.finite_values()?;
    values
        .windows(2)
        .enumerate()
        .map(|(i, w)| match w[1] - w[0] {
            1 => Ok(0),
            2 => Ok(1),
            gap => Err(Error::GapOutOfRange {
                n: n_from + i as u64,
                gap,
            }),
        })
        .collect()
}

/// `n <= n_max` with `M(n) = floor(n / log theta + 1/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalSet {
    pub n_max: u64,
    pub count: u64,
    pub density: BigRational,
    pub members: Vec<u64>,
}

/// The exceptional set where M takes the upper Beatty candidate.
///
/// The two candidates `floor(n / log theta -+ 1/2)` always differ by one, so
/// membership is never ambiguous. Infinite values are not members.
pub fn exceptional_density(theta: &ThetaExpr, n_max: u64) -> Result<ExceptionalSet> {
    theta.require_greater_than_one()?;
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be positive".into()));
    }
    let alpha = BeattyAlpha::InverseLog(theta.clone());
    let half = BigRational::new(1.into(), 2.into());
    let hits: Vec<Option<u64>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let MValue::Finite(m) = m_theta(theta, n)? else {
                return Ok(None);
            };
            Ok((BigInt::from(m) == beatty(&alpha, &half, n)?).then_some(n))
        })
        .collect::<Result<_>>()?;
    let members: Vec<u64> = hits.into_iter().flatten().collect();
    let count = members.len() as u64;
    Ok(ExceptionalSet {
        n_max,
        count,
        density: BigRational::new(BigInt::from(count), BigInt::from(n_max)),
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> ThetaExpr {
        s.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn histogram_examples() {
        let h = distribution_mod_m(&[3, -1, 7, 10], 1).unwrap();
        assert_eq!(h.frequencies, vec![rat(1, 1)]);
        let consecutive: Vec<i64> = (1..=100).collect();
        let h = distribution_mod_m(&consecutive, 2).unwrap();
        assert_eq!(h.counts, vec![50, 50]);
        assert!(h.max_deviation().is_zero());
        let h = distribution_mod_m(&[-1, -4, 2], 3).unwrap();
        assert_eq!(h.counts, vec![0, 0, 3]);
        assert!(distribution_mod_m(&[], 3).is_err());
        assert!(distribution_mod_m(&[1], 0).is_err());
    }

    #[test]
    fn gap_sequence_examples() {
        assert_eq!(
            gap_binary_sequence(&t("2"), 2, 11).unwrap(),
            vec![0, 1, 0, 1, 0, 1, 0, 0, 1]
        );
        assert_eq!(gap_binary_sequence(&t("e"), 2, 10).unwrap(), vec![0; 8]);
        assert_eq!(
            gap_binary_sequence(&t("17"), 5, 90),
            Err(Error::GapOutOfRange { n: 5, gap: 0 })
        );
        assert_eq!(
            gap_binary_sequence(&t("2"), 1, 5),
            Err(Error::InfiniteValue { n: 1 })
        );
    }

    #[test]
    fn exceptional_examples() {
        let s = exceptional_density(&t("e^3/7"), 2000).unwrap();
        assert!(s.members.iter().all(|&n| n < 4), "{:?}", s.members);
        let s = exceptional_density(&t("e"), 1000).unwrap();
        assert_eq!(s.members, vec![1]);
        assert_eq!(s.density, rat(1, 1000));
    }

    proptest! {
        #[test]
        fn histogram_conserves_counts(values in proptest::collection::vec(-1000i64..1000, 1..200), m in 1u64..20) {
            let h = distribution_mod_m(&values, m).unwrap();
            prop_assert_eq!(h.counts.iter().sum::<u64>(), values.len() as u64);
            prop_assert_eq!(h.total, values.len() as u64);
            let total: BigRational = h.frequencies.iter().sum();
            prop_assert_eq!(total, rat(1, 1));
        }
    }
}
