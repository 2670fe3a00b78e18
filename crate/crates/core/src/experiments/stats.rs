//! Binomial and chi-square checks of support histograms.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{pow2_inverse, SupportHistogram, TolerancePolicy};
use crate::action_set::ActionSet;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest `n` for which a histogram is evaluated bin by bin.
pub const MAX_REPORT_N: usize = 16;

/// Probability that support `s` is the optimal support of a random game on
/// `n` actions under a symmetric, regular distribution: `2^-(n-1)` for odd
/// `|s|` and 0 for even `|s|`.
pub fn expected_probability(n: usize, s: ActionSet) -> Rational {
    if s.len() % 2 == 1 {
        pow2_inverse(n - 1)
    } else {
        Rational::zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Wilson score interval for `hits` out of `total` at `z` standard
    /// deviations.
    pub fn wilson(hits: u64, total: u64, z: f64) -> Interval {
        if total == 0 {
            return Interval { lo: 0.0, hi: 1.0 };
        }
        let n = total as f64;
        let f = hits as f64 / n;
        let z2 = z * z;
        let center = (f + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let half = z / (1.0 + z2 / n) * (f * (1.0 - f) / n + z2 / (4.0 * n * n)).sqrt();
        Interval {
            lo: (center - half).max(0.0),
            hi: (center + half).min(1.0),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Binomial z-score of `count` successes in `total` trials at probability
/// `p`; `None` when `p` is 0 or 1 and the count is determined exactly.
pub fn z_score(count: u64, total: u64, p: &Rational) -> Option<f64> {
    if p.is_zero() || p.is_one() || total == 0 {
        return None;
    }
    let p = p.to_f64();
    let n = total as f64;
    Some((count as f64 - n * p) / (n * p * (1.0 - p)).sqrt())
}

fn frequency(count: u64, total: u64) -> Rational {
    if total == 0 {
        Rational::zero()
    } else {
        Rational::new(count as i64, total as i64)
    }
}

/// An observed proportion checked against its expected probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub hits: u64,
    pub total: u64,
    pub frequency: Rational,
    pub expected: Rational,
    pub z: Option<f64>,
    pub ci: Interval,
    /// `|z|` within the threshold, or exact agreement when the expected
    /// probability is 0 or 1.
    pub pass: bool,
}

impl Proportion {
    pub fn new(hits: u64, total: u64, expected: Rational, z_threshold: f64) -> Proportion {
        let frequency = frequency(hits, total);
        let z = z_score(hits, total, &expected);
        let pass = total > 0
            && match z {
                Some(z) => z.abs() <= z_threshold,
                None => frequency == expected,
            };
        Proportion {
            hits,
            total,
            frequency,
            expected,
            z,
            ci: Interval::wilson(hits, total, z_threshold),
            pass,
        }
    }

    pub fn describe(&self) -> String {
        let z = self
            .z
            .map_or_else(|| "exact".to_string(), |z| format!("z = {z:+.2}"));
        format!(
            "{}/{} = {:.6} (expected {:.6}, {z})",
            self.hits,
            self.total,
            self.frequency.to_f64(),
            self.expected.to_f64()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinStat {
    pub support: ActionSet,
    pub cardinality: usize,
    pub count: u64,
    pub frequency: Rational,
    pub expected: Rational,
    pub z: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
}

/// Per-support comparison of a histogram with `2^-(n-1)` on odd supports
/// and 0 on even ones. Frequencies are taken over the draws with a unique
/// optimum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub n: usize,
    /// Draws with a unique optimum; the denominator of every frequency.
    pub regular: u64,
    /// One entry per nonempty support, in bitmask order.
    pub bins: Vec<BinStat>,
    /// Over the odd supports only.
    pub chi_square: ChiSquare,
    /// Draws whose unique optimal strategy has even support.
    pub even_violations: u64,
    pub degenerate_rate: f64,
    pub max_abs_z: f64,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl StatReport {
    pub fn bin(&self, s: ActionSet) -> Option<&BinStat> {
        self.bins.get((s.bits() as usize).checked_sub(1)?)
    }
}

/// Checks a census histogram: fails on any odd-support `|z|` above the
/// threshold, any even-support draw, a degenerate rate above the cap, or a
/// chi-square p-value below the cap.
pub fn evaluate_census(hist: &SupportHistogram, policy: &TolerancePolicy) -> Result<StatReport> {
    if hist.trials < policy.min_trials {
        return Err(Error::TooFewTrials {
            trials: hist.trials,
            min: policy.min_trials,
        });
    }
    evaluate(hist, policy)
}

pub(crate) fn evaluate(hist: &SupportHistogram, policy: &TolerancePolicy) -> Result<StatReport> {
    let n = hist.n();
    if n > MAX_REPORT_N {
        return Err(Error::TooLarge {
            what: "census report",
            n,
            max: MAX_REPORT_N,
        });
    }
    let regular = hist.regular();
    let bins: Vec<BinStat> = ActionSet::all_subsets(n)
        .skip(1)
        .map(|s| {
            let count = hist.count(s);
            let expected = expected_probability(n, s);
            BinStat {
                support: s,
                cardinality: s.len(),
                count,
                frequency: frequency(count, regular),
                z: z_score(count, regular, &expected),
                expected,
            }
        })
        .collect();

    let odd: Vec<&BinStat> = bins.iter().filter(|b| b.cardinality % 2 == 1).collect();
    let expected_count = regular as f64 * pow2_inverse(n - 1).to_f64();
    let statistic = if expected_count > 0.0 {
        odd.iter()
            .map(|b| (b.count as f64 - expected_count).powi(2) / expected_count)
            .sum()
    } else {
        0.0
    };
    let dof = odd.len() as u64 - 1;
    let p_value = if dof == 0 || regular == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive degrees of freedom")
            .sf(statistic)
    };
    let chi_square = ChiSquare {
        statistic,
        dof,
        p_value,
    };

    let even_violations: u64 = bins
        .iter()
        .filter(|b| b.cardinality % 2 == 0)
        .map(|b| b.count)
        .sum();
    let degenerate_rate = hist.degenerate as f64 / hist.trials as f64;
    let max_abs_z = bins
        .iter()
        .filter_map(|b| b.z)
        .fold(0.0, |m: f64, z| m.max(z.abs()));

    let mut failures = Vec::new();
    if regular == 0 {
        failures.push("no draw had a unique optimal strategy".to_string());
    }
    for b in &bins {
        match b.z {
            Some(z) if z.abs() > policy.z_threshold => {
                failures.push(format!("support {} has z = {z:+.2}", b.support));
            }
            None if b.cardinality % 2 == 1 && b.frequency != b.expected && regular > 0 => {
                failures.push(format!(
                    "support {} has frequency {} (expected {})",
                    b.support, b.frequency, b.expected
                ));
            }
            _ => {}
        }
    }
    if even_violations > 0 {
        failures.push(format!("{even_violations} draws with even support"));
    }
    if degenerate_rate > policy.max_degenerate_rate {
        failures.push(format!(
            "degenerate rate {degenerate_rate:.2e} exceeds {:.2e}",
            policy.max_degenerate_rate
        ));
    }
    if p_value <= policy.min_chi_square_p {
        failures.push(format!(
            "chi-square p-value {p_value:.2e} at {statistic:.2} on {dof} dof"
        ));
    }
    Ok(StatReport {
        n,
        regular,
        bins,
        chi_square,
        even_violations,
        degenerate_rate,
        max_abs_z,
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::sampling::{SamplerKind, SamplerSpec};

    fn hist(n: usize, counts: &[(u64, u64)], degenerate: u64) -> SupportHistogram {
        let counts: BTreeMap<ActionSet, u64> = counts
            .iter()
            .map(|&(b, c)| (ActionSet::from_bits(b), c))
            .collect();
        SupportHistogram {
            sampler: SamplerSpec::new(SamplerKind::Tournament, n).unwrap(),
            seed: Some(0),
            trials: counts.values().sum::<u64>() + degenerate,
            degenerate,
            counts,
        }
    }

    #[test]
    fn perfect_histogram_passes() {
        // odd supports of {1,2,3}: 1, 2, 4, 7
        let h = hist(3, &[(1, 2500), (2, 2500), (4, 2500), (7, 2500)], 0);
        let r = evaluate_census(&h, &TolerancePolicy::default()).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.bins.len(), 7);
        assert!(r.bins.iter().filter_map(|b| b.z).all(|z| z == 0.0));
        assert_eq!(r.chi_square.statistic, 0.0);
        assert_eq!(
            r.bin(ActionSet::full(3)).unwrap().frequency,
            Rational::new(1, 4)
        );
    }

    #[test]
    fn one_even_draw_fails() {
        let h = hist(3, &[(1, 2500), (2, 2500), (4, 2500), (7, 2500), (3, 1)], 0);
        let r = evaluate_census(&h, &TolerancePolicy::default()).unwrap();
        assert!(!r.pass);
        assert_eq!(r.even_violations, 1);
    }

    #[test]
    fn degenerate_rate_gate() {
        let h = hist(3, &[(1, 2500), (2, 2500), (4, 2500), (7, 2500)], 5);
        assert!(
            !evaluate_census(&h, &TolerancePolicy::default())
                .unwrap()
                .pass
        );
    }

    #[test]
    fn lopsided_fails() {
        let h = hist(3, &[(1, 4000), (2, 2000), (4, 2000), (7, 2000)], 0);
        let r = evaluate_census(&h, &TolerancePolicy::default()).unwrap();
        assert!(!r.pass);
        assert!(r.max_abs_z > 4.0);
    }

    #[test]
    fn too_few_trials() {
        let h = hist(3, &[(1, 10)], 0);
        assert!(matches!(
            evaluate_census(&h, &TolerancePolicy::default()),
            Err(Error::TooFewTrials { .. })
        ));
    }

    #[test]
    fn wilson_interval() {
        let i = Interval::wilson(25, 100, 2.0);
        assert!(i.contains(0.25) && i.lo > 0.15 && i.hi < 0.36);
        assert_eq!(Interval::wilson(0, 100, 4.0).lo, 0.0);
    }

    #[test]
    fn proportions() {
        assert!(Proportion::new(0, 10, Rational::zero(), 4.0).pass);
        assert!(!Proportion::new(1, 10, Rational::zero(), 4.0).pass);
        assert!(!Proportion::new(0, 0, Rational::zero(), 4.0).pass);
        assert!(Proportion::new(250, 1000, Rational::new(1, 4), 4.0).pass);
    }
}
