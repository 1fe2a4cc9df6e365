//! Check suites run by `rootfrac check`.

use rootfrac::bounds::{check_main_ineq, check_strict_increase, inequality_sweep, StrictIncrease};
use rootfrac::periodic::{
    classify_beatty, detect_linear_periodicity, threshold, verify_certificate, BeattySide,
    CertificateStatus,
};
use rootfrac::stats::{distribution_mod_m, exceptional_density, gap_binary_sequence};
use rootfrac::{m_sequence, n0, Error, ThetaExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Inequalities,
    Periodicity,
    Beatty,
    Stats,
    All,
}

pub struct Options {
    pub thetas: Vec<ThetaExpr>,
    pub seed: u64,
    pub samples: usize,
    pub horizon: u64,
    pub from: u64,
    pub to: u64,
    pub max_period: usize,
    pub min_repeats: usize,
    pub modulus: u64,
}

/// Report lines plus whether any certified check failed.
#[derive(Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub failed: bool,
}

impl Report {
    fn pass(&mut self, line: String) {
        self.lines.push(format!("PASS {line}"));
    }

    fn fail(&mut self, line: String) {
        self.failed = true;
        self.lines.push(format!("FAIL {line}"));
    }

    fn info(&mut self, line: String) {
        self.lines.push(format!("INFO {line}"));
    }
}

pub fn run(suite: Suite, opts: &Options) -> Result<Report, Error> {
    let mut report = Report::default();
    let suites = match suite {
        Suite::All => vec![
            Suite::Inequalities,
            Suite::Periodicity,
            Suite::Beatty,
            Suite::Stats,
        ],
        s => vec![s],
    };
    for s in suites {
        match s {
            Suite::Inequalities => inequalities(opts, &mut report)?,
            Suite::Periodicity => periodicity(opts, &mut report)?,
            Suite::Beatty => beatty(opts, &mut report)?,
            Suite::Stats => stats(opts, &mut report)?,
            Suite::All => unreachable!(),
        }
    }
    Ok(report)
}

fn greater_than_one(opts: &Options) -> impl Iterator<Item = &ThetaExpr> {
    opts.thetas
        .iter()
        .filter(|t| t.require_greater_than_one().is_ok())
}

/// `from`, raised to `N0(theta)` when theta exceeds one.
fn window_start(t: &ThetaExpr, from: u64) -> Result<u64, Error> {
    if t.require_greater_than_one().is_ok() {
        Ok(n0(t)?.max(from))
    } else {
        Ok(from)
    }
}

fn inequalities(opts: &Options, report: &mut Report) -> Result<(), Error> {
    for s in inequality_sweep(opts.seed, opts.samples)? {
        match s.failures.first() {
            None => report.pass(format!("inequalities {s} (seed {})", opts.seed)),
            Some(first) => report.fail(format!("inequalities {s}; first: {first}")),
        }
    }
    for t in greater_than_one(opts) {
        let start = n0(t)?.max(opts.from);
        let mut failure = None;
        for n in start..=opts.to {
            let check = check_main_ineq(t, n)?;
            if !check.holds() {
                failure = Some(check);
                break;
            }
        }
        match failure {
            None => report.pass(format!("main theta={t} n in [{start}, {}]", opts.to)),
            Some(check) => report.fail(format!("main theta={t}: {check}")),
        }
        let outcome = match check_strict_increase(t, start, opts.to.max(start))? {
            StrictIncrease::StrictlyIncreasing => "strictly increasing".to_string(),
            StrictIncrease::RepeatFoundAt(n) => format!("repeat at n={n}"),
        };
        report.info(format!(
            "strict-increase theta={t} n in [{start}, {}]: {outcome}",
            opts.to
        ));
    }
    Ok(())
}

fn periodicity(opts: &Options, report: &mut Report) -> Result<(), Error> {
    for t in &opts.thetas {
        let formula_backed = matches!(t, ThetaExpr::ExpRational { .. });
        let start = window_start(t, opts.from)?;
        let values = match m_sequence(t, start, opts.to)?.finite_values() {
            Ok(v) => v,
            Err(e) => {
                report.info(format!("periodicity theta={t}: {e}"));
                continue;
            }
        };
        let cert =
            match detect_linear_periodicity(&values, start, opts.max_period, opts.min_repeats) {
                Ok(Some(c)) => c,
                Err(e @ Error::WindowTooShort { .. }) => {
                    report.info(format!("periodicity theta={t}: {e}"));
                    continue;
                }
                Err(e) => return Err(e),
                Ok(None) if formula_backed => {
                    report.fail(format!(
                        "periodicity theta={t}: nothing detected on [{start}, {}]",
                        opts.to
                    ));
                    continue;
                }
                Ok(None) => {
                    report.info(format!(
                        "periodicity theta={t}: nothing detected on [{start}, {}]",
                        opts.to
                    ));
                    continue;
                }
            };
        let found = format!("k={} l={} from n={}", cert.k, cert.l, cert.n_start);
        match verify_certificate(t, &cert, opts.horizon) {
            Ok(v) if v.status == CertificateStatus::FormulaVerified => report.pass(format!(
                "periodicity theta={t}: {found}, FormulaVerified to {}",
                v.window_end
            )),
            Ok(v) if formula_backed => report.fail(format!(
                "periodicity theta={t}: {found}, only {:?}",
                v.status
            )),
            Ok(v) => report.info(format!(
                "periodicity theta={t}: {found}, Empirical to {}",
                v.window_end
            )),
            Err(Error::CertificateViolated { n }) if formula_backed => {
                report.fail(format!("periodicity theta={t}: {found}, violated at n={n}"))
            }
            Err(Error::CertificateViolated { n }) => {
                report.info(format!("periodicity theta={t}: {found}, refuted at n={n}"))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn beatty(opts: &Options, report: &mut Report) -> Result<(), Error> {
    for t in greater_than_one(opts) {
        let start = (n0(t)? + 1).max(opts.from);
        let (mut minus, mut plus, mut neither) = (0u64, 0u64, None);
        for n in start..=opts.to {
            match classify_beatty(t, n) {
                Ok(BeattySide::MinusHalf) => minus += 1,
                Ok(BeattySide::PlusHalf) => plus += 1,
                Err(Error::Precondition(_)) => {
                    neither = Some(n);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let window = format!("n in [{start}, {}]", opts.to);
        match neither {
            None => report.pass(format!(
                "beatty theta={t} {window}: {minus} minus-half, {plus} plus-half"
            )),
            Some(n) => report.fail(format!(
                "beatty theta={t}: M({n}) matches neither candidate"
            )),
        }
        if let ThetaExpr::ExpRational { k, l } = t {
            let limit = threshold(*k, *l)?;
            let set = exceptional_density(t, opts.to)?;
            let late: Vec<u64> = set
                .members
                .iter()
                .copied()
                .filter(|&n| n >= limit)
                .collect();
            if late.is_empty() {
                report.pass(format!(
                    "beatty theta={t}: exceptional set {:?} below threshold {limit}",
                    set.members
                ));
            } else {
                report.fail(format!(
                    "beatty theta={t}: exceptional members {late:?} at or above {limit}"
                ));
            }
        }
    }
    Ok(())
}

fn stats(opts: &Options, report: &mut Report) -> Result<(), Error> {
    for t in &opts.thetas {
        let start = window_start(t, opts.from)?;
        let values = match m_sequence(t, start, opts.to)?.finite_values() {
            Ok(v) => v,
            Err(e) => {
                report.info(format!("stats theta={t}: {e}"));
                continue;
            }
        };
        let h = distribution_mod_m(&values, opts.modulus)?;
        let freqs: Vec<String> = h.frequencies.iter().map(ToString::to_string).collect();
        report.info(format!(
            "stats theta={t} n in [{start}, {}] mod {}: counts {:?} frequencies [{}] max deviation {}",
            opts.to,
            h.m,
            h.counts,
            freqs.join(", "),
            h.max_deviation()
        ));
        match gap_binary_sequence(t, start, opts.to) {
            Ok(gaps) => {
                let ones = gaps.iter().filter(|&&g| g == 1).count();
                report.info(format!(
                    "stats theta={t}: {} gaps, {ones} of size 2",
                    gaps.len()
                ));
            }
            Err(e @ Error::GapOutOfRange { .. }) => report.info(format!("stats theta={t}: {e}")),
            Err(e) => return Err(e),
        }
        if t.require_greater_than_one().is_ok() {
            let set = exceptional_density(t, opts.to)?;
            report.info(format!(
                "stats theta={t}: exceptional set up to {}: count {} density {} members {:?}",
                set.n_max, set.count, set.density, set.members
            ));
        }
    }
    Ok(())
}
