//! Seeded Monte Carlo and exhaustive censuses of optimal supports.
//!
//! Trial `t` of a run always draws its game from
//! [`RandomStream::substream`]`(seed, t)`, and per-trial results are merged by
//! addition, so every result here depends only on the configuration and not
//! on the number of workers.
//!
//! ```
//! use skewgame::experiments::{evaluate_census, run_census, ExperimentConfig};
//! use skewgame::sampling::{SamplerKind, SamplerSpec};
//!
//! let sampler = SamplerSpec::new(SamplerKind::OddInt { bound: 2 }, 3).unwrap();
//! let config = ExperimentConfig::new(sampler, 4000, 11);
//! let hist = run_census(&config).unwrap();
//! assert_eq!(hist.degenerate, 0);
//! assert_eq!(hist.counts.values().sum::<u64>(), 4000);
//! let report = evaluate_census(&hist, &config.tolerance).unwrap();
//! assert!(report.pass, "{:?}", report.failures);
//! ```

mod report;
mod stats;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use report::{
    proportions_csv, read_json, read_report, write_json, write_report, CensusReport,
    ExperimentReport, ReportFormat, ToolInfo,
};
pub use stats::{
    evaluate_census, expected_probability, BinStat, ChiSquare, Interval, Proportion, StatReport,
};

use crate::action_set::ActionSet;
use crate::error::{Error, Result};
use crate::game::SkewGame;
use crate::rational::Rational;
use crate::sampling::{self, RandomStream, SamplerKind, SamplerSpec, MAX_TOURNAMENT_N};
use crate::solver::{self, BimatrixZeroSum};

/// Minimum trials for [`two_by_two_census`].
pub const MIN_TWO_BY_TWO_TRIALS: u64 = 10_000;

/// Thresholds for statistical verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TolerancePolicy {
    /// Largest accepted `|z|` for a binomial count.
    pub z_threshold: f64,
    /// Smallest histogram accepted by [`evaluate_census`].
    pub min_trials: u64,
    /// Largest accepted fraction of draws without a unique optimum.
    pub max_degenerate_rate: f64,
    /// Smallest accepted chi-square p-value over the odd supports.
    pub min_chi_square_p: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            z_threshold: 4.0,
            min_trials: 1000,
            max_degenerate_rate: 1e-4,
            min_chi_square_p: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub sampler: SamplerSpec,
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditioning: Option<ActionSet>,
    #[serde(default)]
    pub tolerance: TolerancePolicy,
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, usize::from)
}

impl ExperimentConfig {
    pub fn new(sampler: SamplerSpec, trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            sampler,
            trials,
            seed,
            workers: default_workers(),
            conditioning: None,
            tolerance: TolerancePolicy::default(),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_conditioning(mut self, s: ActionSet) -> Self {
        self.conditioning = Some(s);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.sampler.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        if let Some(s) = self.conditioning {
            if s.is_empty() {
                return Err(Error::EmptySubset);
            }
            s.check_within(self.sampler.n)?;
        }
        let t = &self.tolerance;
        if t.z_threshold.is_nan()
            || t.z_threshold <= 0.0
            || !(0.0..=1.0).contains(&t.max_degenerate_rate)
            || !(0.0..=1.0).contains(&t.min_chi_square_p)
        {
            return Err(Error::InvalidConfig(format!("bad tolerance policy {t:?}")));
        }
        Ok(())
    }

    fn game(&self, trial: u64) -> SkewGame {
        self.sampler
            .draw(&RandomStream::substream(self.seed, trial))
    }
}

/// Counts of optimal supports over a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportHistogram {
    pub sampler: SamplerSpec,
    /// `None` for exhaustive censuses.
    pub seed: Option<u64>,
    pub trials: u64,
    /// Draws whose optimal strategy is not unique.
    pub degenerate: u64,
    /// Support of the unique optimal strategy, for every other draw.
    pub counts: BTreeMap<ActionSet, u64>,
}

impl SupportHistogram {
    pub fn n(&self) -> usize {
        self.sampler.n
    }

    pub fn count(&self, s: ActionSet) -> u64 {
        self.counts.get(&s).copied().unwrap_or(0)
    }

    /// Draws with a unique optimal strategy.
    pub fn regular(&self) -> u64 {
        self.trials - self.degenerate
    }

    /// Counts summed by support size; index `k` holds size `k`.
    pub fn by_cardinality(&self) -> Vec<u64> {
        let mut out = vec![0; self.n() + 1];
        for (s, c) in &self.counts {
            out[s.len()] += c;
        }
        out
    }
}

#[derive(Default)]
struct Tally {
    counts: BTreeMap<ActionSet, u64>,
    degenerate: u64,
}

impl Tally {
    fn record(&mut self, g: &SkewGame) {
        let r = solver::analyze(g);
        if r.unique {
            *self.counts.entry(r.strategy.support()).or_insert(0) += 1;
        } else {
            self.degenerate += 1;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (s, c) in other.counts {
            *self.counts.entry(s).or_insert(0) += c;
        }
        self.degenerate += other.degenerate;
        self
    }
}

/// Folds `step` over trial indices `0..trials` on `workers` threads.
/// `merge` must be commutative and associative for the result to be
/// schedule independent.
fn run_trials<A, I, F, M>(trials: u64, workers: usize, init: I, step: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, u64) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    if workers <= 1 {
        let mut acc = init();
        (0..trials).for_each(|t| step(&mut acc, t));
        return Ok(acc);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| {
        (0..trials)
            .into_par_iter()
            .fold(&init, |mut acc, t| {
                step(&mut acc, t);
                acc
            })
            .reduce(&init, &merge)
    }))
}

/// Solves every trial's game and bins the support of its unique optimal
/// strategy; draws with several optimal strategies only increment
/// `degenerate`.
pub fn run_census(config: &ExperimentConfig) -> Result<SupportHistogram> {
    config.validate()?;
    let tally = run_trials(
        config.trials,
        config.workers,
        Tally::default,
        |acc, t| acc.record(&config.game(t)),
        Tally::merge,
    )?;
    Ok(SupportHistogram {
        sampler: config.sampler.clone(),
        seed: Some(config.seed),
        trials: config.trials,
        degenerate: tally.degenerate,
        counts: tally.counts,
    })
}

/// How often the unique optimal strategy is totally mixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TotallyMixedReport {
    pub sampler: SamplerSpec,
    pub seed: u64,
    pub trials: u64,
    pub degenerate: u64,
    pub degenerate_rate: f64,
    /// Totally mixed draws among the draws with a unique optimum.
    pub totally_mixed: Proportion,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl TotallyMixedReport {
    pub fn frequency(&self) -> &Rational {
        &self.totally_mixed.frequency
    }
}

pub fn run_totally_mixed(config: &ExperimentConfig) -> Result<TotallyMixedReport> {
    let hist = run_census(config)?;
    let n = hist.n();
    let full = ActionSet::full(n);
    let totally_mixed = Proportion::new(
        hist.count(full),
        hist.regular(),
        expected_probability(n, full),
        config.tolerance.z_threshold,
    );
    let degenerate_rate = hist.degenerate as f64 / hist.trials as f64;
    let mut failures = Vec::new();
    if !totally_mixed.pass {
        failures.push(format!(
            "totally mixed frequency {}",
            totally_mixed.describe()
        ));
    }
    if degenerate_rate > config.tolerance.max_degenerate_rate {
        failures.push(format!("degenerate rate {degenerate_rate:.2e}"));
    }
    Ok(TotallyMixedReport {
        sampler: hist.sampler,
        seed: config.seed,
        trials: hist.trials,
        degenerate: hist.degenerate,
        degenerate_rate,
        totally_mixed,
        pass: failures.is_empty(),
        failures,
    })
}

/// Support `S` conditioned on the subgame on `S` having a totally mixed
/// optimal strategy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalReport {
    pub sampler: SamplerSpec,
    pub seed: u64,
    pub trials: u64,
    pub set: ActionSet,
    /// Conditioned draws with an optimal strategy of support exactly `set`.
    pub conditional: Proportion,
    /// Draws whose subgame on `set` has a totally mixed optimal strategy.
    pub conditioning: Proportion,
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Default)]
struct ConditionalTally {
    conditioned: u64,
    hits: u64,
}

/// Whether `g` has an optimal strategy with support exactly `s`. The
/// census solver settles regular games; the rest go to the slack program.
fn optimal_with_support(g: &SkewGame, s: ActionSet) -> Result<bool> {
    let r = solver::analyze(g);
    if r.unique {
        Ok(r.strategy.support() == s)
    } else {
        solver::has_optimal_with_support(g, s)
    }
}

pub fn run_conditional(config: &ExperimentConfig) -> Result<ConditionalReport> {
    config.validate()?;
    let s = config
        .conditioning
        .ok_or_else(|| Error::InvalidConfig("conditional run needs a conditioning set".into()))?;
    let tally = run_trials(
        config.trials,
        config.workers,
        ConditionalTally::default,
        |acc, t| {
            let g = config.game(t);
            let sub = g.restrict(s).expect("set checked against n");
            if optimal_with_support(&sub, sub.universe()).expect("full set is nonempty") {
                acc.conditioned += 1;
                if optimal_with_support(&g, s).expect("set checked against n") {
                    acc.hits += 1;
                }
            }
        },
        |a, b| ConditionalTally {
            conditioned: a.conditioned + b.conditioned,
            hits: a.hits + b.hits,
        },
    )?;
    if tally.conditioned == 0 {
        return Err(Error::ConditioningEmpty(s));
    }
    let n = config.sampler.n;
    let z = config.tolerance.z_threshold;
    let k = s.len();
    let conditional = Proportion::new(tally.hits, tally.conditioned, pow2_inverse(n - k), z);
    let rate = if k % 2 == 1 {
        pow2_inverse(k - 1)
    } else {
        Rational::zero()
    };
    let conditioning = Proportion::new(tally.conditioned, config.trials, rate, z);
    let mut failures = Vec::new();
    if !conditional.pass {
        failures.push(format!("conditional frequency {}", conditional.describe()));
    }
    if !conditioning.pass {
        failures.push(format!("conditioning rate {}", conditioning.describe()));
    }
    Ok(ConditionalReport {
        sampler: config.sampler.clone(),
        seed: config.seed,
        trials: config.trials,
        set: s,
        conditional,
        conditioning,
        pass: failures.is_empty(),
        failures,
    })
}

/// `2^-k`.
pub(crate) fn pow2_inverse(k: usize) -> Rational {
    Rational::one().mul_pow2(-(k as i32))
}

/// Exhaustive census over every tournament game on `n` actions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TournamentReport {
    pub histogram: SupportHistogram,
    pub stats: StatReport,
    /// Count each odd support must have: `2^(n(n-1)/2 - (n-1))`.
    pub expected_per_odd_support: u64,
    /// Every odd support has exactly the expected count, no even support
    /// occurs, and every game has a unique optimum.
    pub exact: bool,
}

pub fn tournament_census_exact(n: usize, workers: usize) -> Result<TournamentReport> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if n > MAX_TOURNAMENT_N {
        return Err(Error::TooLarge {
            what: "tournament census",
            n,
            max: MAX_TOURNAMENT_N,
        });
    }
    let edges = n * (n - 1) / 2;
    let games = 1u64 << edges;
    let tally = run_trials(
        games,
        workers.max(1),
        Tally::default,
        |acc, m| acc.record(&sampling::tournament_from_bits(n, m)),
        Tally::merge,
    )?;
    let histogram = SupportHistogram {
        sampler: SamplerSpec::new(SamplerKind::Tournament, n)?,
        seed: None,
        trials: games,
        degenerate: tally.degenerate,
        counts: tally.counts,
    };
    let stats = stats::evaluate(&histogram, &TolerancePolicy::default())?;
    let expected_per_odd_support = 1u64 << (edges - (n - 1));
    let exact = histogram.degenerate == 0
        && ActionSet::all_subsets(n).skip(1).all(|s| {
            let want = if s.len() % 2 == 1 {
                expected_per_odd_support
            } else {
                0
            };
            histogram.count(s) == want
        });
    Ok(TournamentReport {
        histogram,
        stats,
        expected_per_odd_support,
        exact,
    })
}

/// Full-support frequency of the row player's optimal set in random 2×2
/// zero-sum games.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoByTwoReport {
    pub seed: u64,
    pub trials: u64,
    pub full_support: Proportion,
    pub pass: bool,
}

/// The 2×2 matrix for one trial: four independent entries, each a fair
/// sign times a standard normal magnitude.
pub fn two_by_two_game(seed: u64, trial: u64) -> BimatrixZeroSum {
    let mut rng = RandomStream::substream(seed, trial).rng();
    let rows = (0..2)
        .map(|_| (0..2).map(|_| sampling::gaussian_entry(&mut rng)).collect())
        .collect();
    BimatrixZeroSum::new(rows).expect("2x2 matrix")
}

/// Whether the row player of `a` has a full-support optimal strategy.
pub fn row_full_support(a: &BimatrixZeroSum) -> Result<bool> {
    let sol = solver::solve_bimatrix_zero_sum(a)?;
    solver::row_has_full_support_optimum(a, &sol)
}

pub fn two_by_two_census(
    trials: u64,
    seed: u64,
    workers: usize,
    z_threshold: f64,
) -> Result<TwoByTwoReport> {
    if trials < MIN_TWO_BY_TWO_TRIALS {
        return Err(Error::TooFewTrials {
            trials,
            min: MIN_TWO_BY_TWO_TRIALS,
        });
    }
    let hits = run_trials(
        trials,
        workers.max(1),
        || 0u64,
        |acc, t| {
            if row_full_support(&two_by_two_game(seed, t)).expect("2x2 games always solve") {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )?;
    let full_support = Proportion::new(hits, trials, Rational::new(1, 3), z_threshold);
    let pass = full_support.pass;
    Ok(TwoByTwoReport {
        seed,
        trials,
        full_support,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd(n: usize, trials: u64, seed: u64) -> ExperimentConfig {
        ExperimentConfig::new(
            SamplerSpec::new(SamplerKind::OddInt { bound: 3 }, n).unwrap(),
            trials,
            seed,
        )
    }

    #[test]
    fn single_trial_is_deterministic() {
        let a = run_census(&odd(4, 1, 5)).unwrap();
        let b = run_census(&odd(4, 1, 5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.len(), 1);
        assert_eq!(a.counts.values().sum::<u64>(), 1);
    }

    #[test]
    fn workers_do_not_change_results() {
        let one = run_census(&odd(5, 600, 3).with_workers(1)).unwrap();
        let four = run_census(&odd(5, 600, 3).with_workers(4)).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn validation() {
        assert!(odd(3, 0, 1).validate().is_err());
        assert!(odd(3, 10, 1).with_workers(0).validate().is_err());
        assert!(matches!(
            odd(3, 10, 1)
                .with_conditioning(ActionSet::from_actions([4]))
                .validate(),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn totally_mixed_singleton() {
        let r = run_totally_mixed(&odd(1, 50, 0)).unwrap();
        assert!(r.frequency().is_one());
        assert!(r.pass);
    }

    #[test]
    fn even_conditioning_is_empty() {
        let c = odd(4, 200, 2).with_conditioning(ActionSet::from_actions([1, 2]));
        assert!(matches!(
            run_conditional(&c),
            Err(Error::ConditioningEmpty(_))
        ));
        assert!(run_conditional(&odd(3, 10, 2)).is_err());
    }

    #[test]
    fn small_tournaments() {
        let r = tournament_census_exact(3, 1).unwrap();
        assert_eq!(r.histogram.trials, 8);
        assert_eq!(r.expected_per_odd_support, 2);
        assert!(r.exact);
        assert_eq!(r.histogram.count(ActionSet::full(3)), 2);
        assert!(tournament_census_exact(1, 1).unwrap().exact);
        assert!(tournament_census_exact(2, 1).unwrap().exact);
        assert!(matches!(
            tournament_census_exact(8, 1),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn two_by_two_needs_trials() {
        assert!(matches!(
            two_by_two_census(10, 0, 1, 4.0),
            Err(Error::TooFewTrials { .. })
        ));
    }

    #[test]
    fn two_by_two_fixtures() {
        let pennies = BimatrixZeroSum::from_integers(&[&[1, -1], &[-1, 1]]).unwrap();
        assert!(row_full_support(&pennies).unwrap());
        let saddle = BimatrixZeroSum::from_integers(&[&[2, 3], &[1, 4]]).unwrap();
        assert!(!row_full_support(&saddle).unwrap());
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(pow2_inverse(0), Rational::one());
        assert_eq!(pow2_inverse(4), Rational::new(1, 16));
    }
}
