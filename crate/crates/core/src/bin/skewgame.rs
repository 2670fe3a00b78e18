//! Command-line front end: solve game files and run support censuses.
//!
//! Exit status is 0 when every check passes, 1 when a statistical verdict
//! fails, and 2 on usage or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use skewgame::experiments::{
    self, default_workers, evaluate_census, proportions_csv, write_json, write_report,
    CensusReport, ExperimentConfig, ExperimentReport, Proportion, ReportFormat, StatReport,
    SupportHistogram, TolerancePolicy,
};
use skewgame::sampling::{SamplerKind, SamplerSpec};
use skewgame::{solver, ActionSet, Error, Rational, SkewGame};

const DEFAULT_BOUND: u64 = 3;

#[derive(Parser)]
#[command(
    name = "skewgame",
    version,
    about = "Exact solver and support censuses for symmetric zero-sum games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game file and print its optimal strategy.
    Solve {
        game: PathBuf,
        #[arg(long, value_enum)]
        report: Option<SolveFormat>,
    },
    /// Histogram of optimal supports over random games.
    Census(CensusArgs),
    /// Frequency of a totally mixed optimal strategy.
    TotallyMixed(CensusArgs),
    /// Frequency of support S among games whose subgame on S is totally mixed.
    Conditional {
        /// Conditioning set, as a bitmask (`7`, `0b111`) or a list (`{1,2,3}`).
        #[arg(long)]
        set: Option<ActionSet>,
        #[command(flatten)]
        args: CensusArgs,
    },
    /// Exact support counts over all tournament games.
    TournamentExact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Full-support frequency of the row player in random 2x2 zero-sum games.
    TwoByTwo {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = 4.0)]
        z_threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Dist {
    OddInt,
    Gaussian,
    Uniform,
    Tournament,
    Symmetrized,
}

/// Census flags. Every field may also come from `--config`; flags win.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
struct CensusArgs {
    /// JSON file with any of these options, keyed by flag name.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    dist: Option<Dist>,
    /// Distribution wrapped by `--dist symmetrized` (default odd-int).
    #[arg(long, value_enum)]
    base: Option<Dist>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Odd-integer entries range over ±1, ±3, ..., ±(2B+1).
    #[arg(long)]
    bound: Option<u64>,
    /// Uniform entries range over (-W, W).
    #[arg(long)]
    half_width: Option<Rational>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    z_threshold: Option<f64>,
    #[arg(long)]
    min_trials: Option<u64>,
    /// Only read from the config file; `conditional` takes `--set`.
    #[arg(skip)]
    set: Option<ActionSet>,
}

impl CensusArgs {
    /// Fills unset flags from the config file, if any.
    fn merged(self) -> Result<CensusArgs, Error> {
        let Some(path) = &self.config else {
            return Ok(self);
        };
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: CensusArgs = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        Ok(CensusArgs {
            config: self.config,
            dist: self.dist.or(file.dist),
            base: self.base.or(file.base),
            n: self.n.or(file.n),
            trials: self.trials.or(file.trials),
            seed: self.seed.or(file.seed),
            bound: self.bound.or(file.bound),
            half_width: self.half_width.or(file.half_width),
            workers: self.workers.or(file.workers),
            out: self.out.or(file.out),
            format: self.format.or(file.format),
            z_threshold: self.z_threshold.or(file.z_threshold),
            min_trials: self.min_trials.or(file.min_trials),
            set: self.set.or(file.set),
        })
    }

    fn kind(&self, dist: Dist) -> Result<SamplerKind, Error> {
        Ok(match dist {
            Dist::OddInt => SamplerKind::OddInt {
                bound: self.bound.unwrap_or(DEFAULT_BOUND),
            },
            Dist::Gaussian => SamplerKind::Gaussian,
            Dist::Uniform => SamplerKind::Uniform {
                half_width: self.half_width.clone().unwrap_or_else(Rational::one),
            },
            Dist::Tournament => SamplerKind::Tournament,
            Dist::Symmetrized => {
                let base = self.base.unwrap_or(Dist::OddInt);
                if base == Dist::Symmetrized {
                    return Err(Error::InvalidConfig(
                        "--base cannot itself be symmetrized".into(),
                    ));
                }
                SamplerKind::Symmetrized {
                    base: Box::new(self.kind(base)?),
                }
            }
        })
    }

    fn config(&self) -> Result<ExperimentConfig, Error> {
        let missing = |flag: &str| Error::InvalidConfig(format!("missing --{flag}"));
        let dist = self.dist.ok_or_else(|| missing("dist"))?;
        let n = self.n.ok_or_else(|| missing("n"))?;
        let trials = self.trials.ok_or_else(|| missing("trials"))?;
        let seed = self.seed.ok_or_else(|| missing("seed"))?;
        let mut tolerance = TolerancePolicy::default();
        if let Some(z) = self.z_threshold {
            tolerance.z_threshold = z;
        }
        if let Some(m) = self.min_trials {
            tolerance.min_trials = m;
        }
        let config = ExperimentConfig {
            sampler: SamplerSpec::new(self.kind(dist)?, n)?,
            trials,
            seed,
            workers: self.workers.unwrap_or_else(default_workers),
            conditioning: self.set,
            tolerance,
        };
        config.validate()?;
        Ok(config)
    }
}

fn usage_error(e: &Error) -> bool {
    !matches!(e, Error::ConditioningEmpty(_))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if usage_error(&e) { 2 } else { 1 })
        }
    }
}

fn verdict(pass: bool, failures: &[String]) -> bool {
    if pass {
        println!("verdict: PASS");
    } else {
        println!("verdict: FAIL");
        for f in failures {
            println!("  {f}");
        }
    }
    pass
}

fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::Solve { game, report } => solve(&game, report),
        Command::Census(args) => census(args.merged()?),
        Command::TotallyMixed(args) => totally_mixed(args.merged()?),
        Command::Conditional { set, args } => {
            let mut args = args.merged()?;
            args.set = set.or(args.set);
            if args.set.is_none() {
                return Err(Error::InvalidConfig("missing --set".into()));
            }
            conditional(args)
        }
        Command::TournamentExact {
            n,
            workers,
            out,
            format,
        } => tournament(n, workers, out, format),
        Command::TwoByTwo {
            trials,
            seed,
            workers,
            z_threshold,
            out,
            format,
        } => two_by_two(trials, seed, workers, z_threshold, out, format),
    }
}

fn solve(path: &Path, format: Option<SolveFormat>) -> Result<bool, Error> {
    let g = SkewGame::read(path)?;
    let r = solver::analyze(&g);
    let strategy: Vec<String> = r.strategy.iter().map(Rational::to_string).collect();
    match format {
        Some(SolveFormat::Json) => println!("{}", serde_json::to_string_pretty(&r)?),
        Some(SolveFormat::Csv) => {
            println!("strategy,support,maximal_support,unique,quasi_strict,value");
            println!(
                "{},{},{},{},{},{}",
                strategy.join(" "),
                r.strategy.support().bits(),
                r.maximal_support.bits(),
                r.unique,
                r.quasi_strict,
                r.value
            );
        }
        None => {
            println!("strategy: {}", strategy.join(" "));
            println!("support: {}", r.strategy.support());
            println!("maximal support: {}", r.maximal_support);
            println!("unique: {}", r.unique);
            println!("quasi-strict: {}", r.quasi_strict);
            println!("value: {}", r.value);
        }
    }
    Ok(true)
}

fn print_census(hist: &SupportHistogram, stats: &StatReport) {
    println!("sampler: {} n={}", hist.sampler.kind.name(), hist.n());
    if let Some(seed) = hist.seed {
        println!("seed: {seed}");
    }
    println!("trials: {} (degenerate {})", hist.trials, hist.degenerate);
    println!(
        "{:>20} {:>10} {:>10} {:>10} {:>8}",
        "support", "count", "frequency", "expected", "z"
    );
    for b in &stats.bins {
        let z = b.z.map_or_else(|| "-".to_string(), |z| format!("{z:+.2}"));
        println!(
            "{:>20} {:>10} {:>10.6} {:>10.6} {:>8}",
            b.support.to_string(),
            b.count,
            b.frequency.to_f64(),
            b.expected.to_f64(),
            z
        );
    }
    let sizes = hist.by_cardinality();
    let totals: Vec<String> = (1..sizes.len())
        .map(|k| format!("|S|={k}: {}", sizes[k]))
        .collect();
    println!("by size: {}", totals.join(", "));
    println!(
        "chi-square: {:.3} on {} dof, p = {:.4}",
        stats.chi_square.statistic, stats.chi_square.dof, stats.chi_square.p_value
    );
}

fn census(args: CensusArgs) -> Result<bool, Error> {
    let config = args.config()?;
    let hist = experiments::run_census(&config)?;
    let stats = evaluate_census(&hist, &config.tolerance)?;
    print_census(&hist, &stats);
    let pass = verdict(stats.pass, &stats.failures);
    if let Some(out) = &args.out {
        let report = CensusReport::new("census", config.tolerance, hist, stats);
        write_report(&report, out, args.format.unwrap_or(Format::Json).into())?;
    }
    Ok(pass)
}

fn write_proportions<T: Serialize>(
    out: Option<&Path>,
    format: Option<Format>,
    experiment: &str,
    result: &T,
    rows: &[(&str, &Proportion)],
) -> Result<(), Error> {
    let Some(out) = out else {
        return Ok(());
    };
    match format.unwrap_or(Format::Json) {
        Format::Json => write_json(&ExperimentReport::new(experiment, result), out),
        Format::Csv => fs::write(out, proportions_csv(rows)).map_err(|e| Error::io(out, e)),
    }
}

fn totally_mixed(args: CensusArgs) -> Result<bool, Error> {
    let config = args.config()?;
    let r = experiments::run_totally_mixed(&config)?;
    println!("sampler: {} n={}", r.sampler.kind.name(), r.sampler.n);
    println!("trials: {} (degenerate {})", r.trials, r.degenerate);
    println!("totally mixed: {}", r.totally_mixed.describe());
    let pass = verdict(r.pass, &r.failures);
    write_proportions(
        args.out.as_deref(),
        args.format,
        "totally-mixed",
        &r,
        &[("totally_mixed", &r.totally_mixed)],
    )?;
    Ok(pass)
}

fn conditional(args: CensusArgs) -> Result<bool, Error> {
    let config = args.config()?;
    let r = experiments::run_conditional(&config)?;
    println!("sampler: {} n={}", r.sampler.kind.name(), r.sampler.n);
    println!("trials: {}", r.trials);
    println!("set: {}", r.set);
    println!("conditioning rate: {}", r.conditioning.describe());
    println!("conditional frequency: {}", r.conditional.describe());
    let pass = verdict(r.pass, &r.failures);
    let rows = [
        ("conditional", &r.conditional),
        ("conditioning", &r.conditioning),
    ];
    write_proportions(args.out.as_deref(), args.format, "conditional", &r, &rows)?;
    Ok(pass)
}

fn tournament(
    n: usize,
    workers: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
) -> Result<bool, Error> {
    let r = experiments::tournament_census_exact(n, workers.unwrap_or_else(default_workers))?;
    print_census(&r.histogram, &r.stats);
    println!("expected per odd support: {}", r.expected_per_odd_support);
    println!("exact: {}", r.exact);
    let mut failures = r.stats.failures.clone();
    if !r.exact {
        failures.push("counts differ from the exact law".to_string());
    }
    let pass = verdict(r.exact && r.stats.pass, &failures);
    if let Some(out) = &out {
        let report = CensusReport::new(
            "tournament-exact",
            TolerancePolicy::default(),
            r.histogram,
            r.stats,
        );
        write_report(&report, out, format.unwrap_or(Format::Json).into())?;
    }
    Ok(pass)
}

fn two_by_two(
    trials: u64,
    seed: u64,
    workers: Option<usize>,
    z_threshold: f64,
    out: Option<PathBuf>,
    format: Option<Format>,
) -> Result<bool, Error> {
    let r = experiments::two_by_two_census(
        trials,
        seed,
        workers.unwrap_or_else(default_workers),
        z_threshold,
    )?;
    println!("trials: {}", r.trials);
    println!("full support: {}", r.full_support.describe());
    let pass = verdict(
        r.pass,
        &[format!(
            "full support frequency {}",
            r.full_support.describe()
        )],
    );
    write_proportions(
        out.as_deref(),
        format,
        "two-by-two",
        &r,
        &[("full_support", &r.full_support)],
    )?;
    Ok(pass)
}
