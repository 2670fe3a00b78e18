//! Acceptance criteria, one PASS/FAIL line each. Census criteria drive the
//! command-line binary exactly as a user would and read back its JSON
//! reports; the property suites run in-process.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use skewgame::experiments::{
    read_json, read_report, CensusReport, ConditionalReport, ExperimentReport, TotallyMixedReport,
    TwoByTwoReport,
};
use skewgame::{linalg, oracle, solver, ActionSet, Rational, RationalVector, SkewGame};

struct Check {
    name: String,
    failures: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            failures: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn within(&mut self, label: &str, observed: f64, target: f64, tol: f64) {
        self.require((observed - target).abs() <= tol, || {
            format!("{label}: {observed:.5} not within {target} ± {tol}")
        });
    }
}

struct Cli {
    dir: tempfile::TempDir,
}

impl Cli {
    fn new() -> Self {
        Cli {
            dir: tempfile::tempdir().expect("temp dir"),
        }
    }

    /// Runs the binary with `--out` pointing at a fresh JSON file; returns
    /// the exit code, the report path and the elapsed time.
    fn run(&self, name: &str, args: &[&str]) -> (Option<i32>, PathBuf, Duration) {
        let out = self.dir.path().join(format!("{name}.json"));
        let start = Instant::now();
        let status = Command::new(env!("CARGO_BIN_EXE_skewgame"))
            .args(args)
            .args(["--out", out.to_str().unwrap(), "--format", "json"])
            .output()
            .expect("run skewgame");
        (status.status.code(), out, start.elapsed())
    }
}

fn odd_supports(n: usize) -> impl Iterator<Item = ActionSet> {
    ActionSet::all_subsets(n).filter(|s| s.len() % 2 == 1)
}

fn check_census(c: &mut Check, cli: &Cli, dist: &str, n: usize, tol: f64, limit: Duration) {
    let ns = n.to_string();
    let args = [
        "census",
        "--dist",
        dist,
        "--n",
        ns.as_str(),
        "--trials",
        "100000",
        "--seed",
        "1",
    ];
    let (code, out, elapsed) = cli.run(&format!("census-{dist}-{n}"), &args);
    c.require(code == Some(0), || {
        format!("{dist} n={n}: exit code {code:?}")
    });
    c.require(elapsed < limit, || {
        format!("{dist} n={n}: took {elapsed:?}")
    });
    let Ok(r) = read_report(&out) else {
        c.failures.push(format!("{dist} n={n}: no report"));
        return;
    };
    let target = 1.0 / f64::from(1u32 << (n - 1));
    for s in odd_supports(n) {
        let f = r.stats.bin(s).map_or(0.0, |b| b.frequency.to_f64());
        c.within(&format!("{dist} n={n} support {s}"), f, target, tol);
    }
    c.require(r.stats.even_violations == 0, || {
        format!(
            "{dist} n={n}: {} even-support draws",
            r.stats.even_violations
        )
    });
    if dist == "odd-int" {
        c.require(r.histogram.degenerate == 0, || {
            format!("odd-int n={n}: {} degenerate draws", r.histogram.degenerate)
        });
    } else {
        c.require(r.stats.degenerate_rate <= 1e-4, || {
            format!("{dist} n={n}: degenerate rate {}", r.stats.degenerate_rate)
        });
    }
}

fn criterion_1(cli: &Cli) -> Check {
    let mut c = Check::new("census: odd-int census n=3 and n=5");
    check_census(&mut c, cli, "odd-int", 3, 0.006, Duration::from_secs(60));
    check_census(&mut c, cli, "odd-int", 5, 0.0031, Duration::from_secs(60));
    c
}

fn criterion_2(cli: &Cli) -> Check {
    let mut c = Check::new("totally-mixed: n=4 exactly 0 and n=5 1/16");
    for (n, target, tol) in [(4usize, 0.0, 0.0), (5, 0.0625, 0.0031)] {
        let ns = n.to_string();
        let args = [
            "totally-mixed",
            "--dist",
            "odd-int",
            "--n",
            ns.as_str(),
            "--trials",
            "100000",
            "--seed",
            "1",
        ];
        let (code, out, _) = cli.run(&format!("tm-{n}"), &args);
        c.require(code == Some(0), || format!("n={n}: exit code {code:?}"));
        match read_json::<ExperimentReport<TotallyMixedReport>>(&out) {
            Ok(r) if n == 4 => c.require(r.result.totally_mixed.hits == 0, || {
                format!("n=4: {} totally mixed", r.result.totally_mixed.hits)
            }),
            Ok(r) => c.within("n=5 frequency", r.result.frequency().to_f64(), target, tol),
            Err(e) => c.failures.push(format!("n={n}: {e}")),
        }
    }
    c
}

fn criterion_3(cli: &Cli) -> Check {
    let mut c = Check::new("conditional: n=5 S={1,2,3}");
    let args = [
        "conditional",
        "--dist",
        "odd-int",
        "--n",
        "5",
        "--set",
        "{1,2,3}",
        "--trials",
        "100000",
        "--seed",
        "1",
    ];
    let (code, out, _) = cli.run("conditional", &args);
    c.require(code == Some(0), || format!("exit code {code:?}"));
    match read_json::<ExperimentReport<ConditionalReport>>(&out) {
        Ok(r) => {
            c.within(
                "conditional frequency",
                r.result.conditional.frequency.to_f64(),
                0.25,
                0.011,
            );
            c.within(
                "conditioning rate",
                r.result.conditioning.frequency.to_f64(),
                0.25,
                0.006,
            );
        }
        Err(e) => c.failures.push(e.to_string()),
    }
    c
}

fn criterion_4(cli: &Cli) -> Check {
    let mut c = Check::new("tournament-exact: n=5 and n=3");
    let (code, out, elapsed) = cli.run("tournament-5", &["tournament-exact", "--n", "5"]);
    c.require(code == Some(0), || format!("n=5: exit code {code:?}"));
    c.require(elapsed < Duration::from_secs(10), || {
        format!("n=5: took {elapsed:?}")
    });
    let check = |c: &mut Check, r: &CensusReport, n: usize, games: u64, each: u64| {
        c.require(r.histogram.trials == games, || {
            format!("n={n}: {} games", r.histogram.trials)
        });
        c.require(r.histogram.degenerate == 0, || {
            format!("n={n}: {} non-unique", r.histogram.degenerate)
        });
        for s in ActionSet::all_subsets(n).skip(1) {
            let want = if s.len() % 2 == 1 { each } else { 0 };
            let got = r.histogram.count(s);
            c.require(got == want, || {
                format!("n={n}: support {s} has {got}, want {want}")
            });
        }
    };
    match read_report(&out) {
        Ok(r) => {
            check(&mut c, &r, 5, 1024, 64);
            let sizes = r.histogram.by_cardinality();
            c.require(sizes[1] == 320 && sizes[3] == 640 && sizes[5] == 64, || {
                format!("n=5 sizes {sizes:?}")
            });
        }
        Err(e) => c.failures.push(e.to_string()),
    }
    let (code, out, _) = cli.run("tournament-3", &["tournament-exact", "--n", "3"]);
    c.require(code == Some(0), || format!("n=3: exit code {code:?}"));
    match read_report(&out) {
        Ok(r) => check(&mut c, &r, 3, 8, 2),
        Err(e) => c.failures.push(e.to_string()),
    }
    c
}

fn criterion_5(cli: &Cli) -> Check {
    let mut c = Check::new("two-by-two: full support, 10^6 trials");
    let (code, out, elapsed) = cli.run(
        "two-by-two",
        &["two-by-two", "--trials", "1000000", "--seed", "1"],
    );
    c.require(code == Some(0), || format!("exit code {code:?}"));
    c.require(elapsed < Duration::from_secs(120), || {
        format!("took {elapsed:?}")
    });
    match read_json::<ExperimentReport<TwoByTwoReport>>(&out) {
        Ok(r) => c.within(
            "full support frequency",
            r.result.full_support.frequency.to_f64(),
            0.3333,
            0.002,
        ),
        Err(e) => c.failures.push(e.to_string()),
    }
    c
}

fn criterion_6(cli: &Cli) -> Check {
    let mut c = Check::new("gaussian: census n=3 and n=5, degenerate rate <= 1e-4");
    check_census(&mut c, cli, "gaussian", 3, 0.006, Duration::from_secs(60));
    check_census(&mut c, cli, "gaussian", 5, 0.0031, Duration::from_secs(60));
    c
}

fn flip_identity() -> Check {
    let mut c = Check::new("flips: transform identity, 1000 random (G, v, S)");
    let mut rng = common::rng(101);
    for i in 0..1000 {
        let n = 1 + i % 8;
        let g = common::fraction_game(n, &mut rng);
        let v = RationalVector(common::random_vector(n, &mut rng));
        let s = common::random_set(n, &mut rng);
        let lhs = g.flip(s).unwrap().apply(&v.flip(s).unwrap()).unwrap();
        let rhs = g.apply(&v).unwrap().flip(s).unwrap();
        c.require(lhs == rhs, || format!("{g:?} {v:?} {s}"));
    }
    c
}

fn group_laws() -> Check {
    let mut c = Check::new("flips: group laws, 1000 random (G, S, T)");
    let mut rng = common::rng(102);
    for i in 0..1000 {
        let n = 1 + i % 8;
        let g = common::fraction_game(n, &mut rng);
        let s = common::random_set(n, &mut rng);
        let t = common::random_set(n, &mut rng);
        let f = |x: &SkewGame, a: ActionSet| x.flip(a).unwrap();
        c.require(f(&f(&g, s), t) == f(&g, s.symmetric_difference(t)), || {
            format!("composition {g:?} {s} {t}")
        });
        c.require(f(&g, s) == f(&g, s.complement(n)), || {
            format!("complement {g:?} {s}")
        });
        c.require(f(&f(&g, s), s) == g, || format!("involution {g:?} {s}"));
    }
    c
}

fn odd_support_and_equalizers() -> Vec<Check> {
    let mut odd =
        Check::new("odd support: unique optima have odd support, 10000-game mixed corpus");
    let mut eq = Check::new(
        "equalizers: equalized actions equal maximal support, same corpus plus zero games",
    );
    let mut corpus = common::mixed_corpus(10_000, 6, 103);
    let mut unique = 0;
    for g in &corpus {
        let r = solver::analyze(g);
        if r.unique {
            unique += 1;
            odd.require(r.strategy.support().len() % 2 == 1, || format!("{g:?}"));
        }
    }
    odd.require(unique > 5000, || {
        format!("only {unique} unique-optimum games")
    });
    corpus.extend((1..=6).map(SkewGame::zero));
    for g in &corpus {
        eq.require(
            solver::equalized_actions(g) == solver::maximal_support(g),
            || format!("{g:?}"),
        );
    }
    vec![odd, eq]
}

fn oracle_equivalence() -> Check {
    let mut c = Check::new("oracle: solver matches vertex enumeration, 500 games n <= 5");
    let mut rng = common::rng(104);
    for i in 0..500 {
        let n = 1 + i % 5;
        let g = if i % 2 == 0 {
            common::small_int_game(n, 1, &mut rng)
        } else {
            common::fraction_game(n, &mut rng)
        };
        let (supports, unique) = oracle::brute_supports(&g).unwrap();
        c.require(solver::is_unique(&g) == unique, || {
            format!("uniqueness {g:?}")
        });
        let maximal = supports.iter().fold(ActionSet::EMPTY, |a, &s| a.union(s));
        c.require(solver::maximal_support(&g) == maximal, || {
            format!("maximal support {g:?}")
        });
        let achievable: BTreeSet<ActionSet> = solver::achievable_supports(&g).into_iter().collect();
        c.require(achievable == supports, || {
            format!("achievable supports {g:?}")
        });
    }
    c
}

fn pfaffian_suite() -> Check {
    let mut c = Check::new(
        "pfaffians: Pfaffian = matchings, Pf^2 = det, kernel, Pfaffian strategy vs solver",
    );
    let mut rng = common::rng(105);
    for i in 0..1000 {
        let rows = common::skew_rows(2 * (i % 5), &mut rng);
        let pf = linalg::pfaffian(&rows).unwrap();
        c.require(pf == oracle::pfaffian_by_matchings(&rows).unwrap(), || {
            format!("matchings {rows:?}")
        });
        c.require(
            &pf * &pf == oracle::determinant_by_elimination(&rows),
            || format!("determinant {rows:?}"),
        );
    }
    for i in 0..1000 {
        let n = 1 + 2 * (i % 4);
        let g = if i % 2 == 0 {
            skewgame::sampling::odd_int_game(n, 3, &mut rng)
        } else {
            common::fraction_game(n, &mut rng)
        };
        let w = linalg::kernel_vector(&g).unwrap();
        c.require(g.apply(&w).unwrap().is_zero(), || format!("kernel {g:?}"));
        let r = solver::analyze(&g);
        if r.unique && r.strategy.is_totally_mixed() {
            let k = linalg::pfaffian_totally_mixed(&g).unwrap();
            c.require(k.as_ref() == Some(&r.strategy), || {
                format!("Pfaffian strategy {g:?}")
            });
        }
    }
    c
}

fn witness_suite() -> Check {
    let mut c =
        Check::new("witness: multi-optimum fixtures have a singular even principal submatrix");
    for g in common::multi_optimum_fixtures() {
        match oracle::singular_submatrix_witness(&g) {
            Ok(Some(s)) => {
                let det = oracle::determinant_by_elimination(&g.restrict(s).unwrap().to_rows());
                c.require(s.len() % 2 == 0 && det == Rational::zero(), || {
                    format!("bad witness {s} for {g:?}")
                });
            }
            other => c.failures.push(format!("{g:?}: {other:?}")),
        }
    }
    c
}

fn report(c: &Check, elapsed: Duration) -> bool {
    let ok = c.failures.is_empty();
    println!(
        "{} criterion {} ({:.1}s)",
        if ok { "PASS" } else { "FAIL" },
        c.name,
        elapsed.as_secs_f64()
    );
    for f in c.failures.iter().take(10) {
        println!("    {f}");
    }
    ok
}

fn main() {
    let cli = Cli::new();
    let mut all = true;
    let census: [fn(&Cli) -> Check; 6] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
    ];
    for f in census {
        let start = Instant::now();
        let c = f(&cli);
        all &= report(&c, start.elapsed());
    }
    let suites: [fn() -> Vec<Check>; 6] = [
        || vec![flip_identity()],
        || vec![group_laws()],
        odd_support_and_equalizers,
        || vec![oracle_equivalence()],
        || vec![pfaffian_suite()],
        || vec![witness_suite()],
    ];
    for f in suites {
        let start = Instant::now();
        for c in f() {
            all &= report(&c, start.elapsed());
        }
    }
    if !all {
        std::process::exit(1);
    }
}
