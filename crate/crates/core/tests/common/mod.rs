#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use skewgame::sampling::{self, RandomStream};
use skewgame::{ActionSet, Rational, SkewGame};

pub fn rng(seed: u64) -> ChaCha8Rng {
    RandomStream::new(seed).rng()
}

/// Entries uniform on `-k..=k`; zeros make ties and multiple optima common.
pub fn small_int_game<R: Rng>(n: usize, k: i64, rng: &mut R) -> SkewGame {
    let values: Vec<Rational> = (0..n * (n - 1) / 2)
        .map(|_| Rational::from(rng.gen_range(-k..=k)))
        .collect();
    SkewGame::from_upper(n, &values).unwrap()
}

/// Entries `a/b` with small numerators and denominators.
pub fn fraction_game<R: Rng>(n: usize, rng: &mut R) -> SkewGame {
    let values: Vec<Rational> = (0..n * (n - 1) / 2).map(|_| random_fraction(rng)).collect();
    SkewGame::from_upper(n, &values).unwrap()
}

pub fn random_fraction<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

pub fn random_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<Rational> {
    (0..n).map(|_| random_fraction(rng)).collect()
}

pub fn random_set<R: Rng>(n: usize, rng: &mut R) -> ActionSet {
    ActionSet::from_bits(rng.gen::<u64>() & ActionSet::full(n).bits())
}

/// Random skew-symmetric rows of size `n` with small fraction entries.
pub fn skew_rows<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<Rational>> {
    if n == 0 {
        return Vec::new();
    }
    fraction_game(n, rng).to_rows()
}

/// A mixture of every sampler plus small-integer games with many ties,
/// sizes 1 to `max_n`.
pub fn mixed_corpus(size: usize, max_n: usize, seed: u64) -> Vec<SkewGame> {
    let mut rng = rng(seed);
    (0..size)
        .map(|i| {
            let n = 1 + i % max_n;
            match (i / max_n) % 6 {
                0 => sampling::odd_int_game(n, 3, &mut rng),
                1 => sampling::tournament_game(n, &mut rng),
                2 => small_int_game(n, 1, &mut rng),
                3 => small_int_game(n, 2, &mut rng),
                4 => sampling::gaussian_game(n, &mut rng),
                _ => fraction_game(n, &mut rng),
            }
        })
        .collect()
}

/// Duplicates action `a` (0-based) of `g`, appending the copy as a new last
/// action that ties with the original.
pub fn with_clone(g: &SkewGame, a: usize) -> SkewGame {
    let n = g.n();
    let mut rows: Vec<Vec<Rational>> = g.to_rows();
    for (i, row) in rows.iter_mut().enumerate() {
        row.push(-g.get(a, i).clone());
    }
    let mut last: Vec<Rational> = g.row(a).to_vec();
    last.push(Rational::zero());
    rows.push(last);
    debug_assert_eq!(rows.len(), n + 1);
    SkewGame::new(rows).unwrap()
}

/// Block-diagonal sum: the two games never interact.
pub fn direct_sum(a: &SkewGame, b: &SkewGame) -> SkewGame {
    let n = a.n() + b.n();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i < a.n(), j < a.n()) {
                    (true, true) => a.get(i, j).clone(),
                    (false, false) => b.get(i - a.n(), j - a.n()).clone(),
                    _ => Rational::zero(),
                })
                .collect()
        })
        .collect();
    SkewGame::new(rows).unwrap()
}

/// Games with several optimal strategies, all with at most five actions.
pub fn multi_optimum_fixtures() -> Vec<SkewGame> {
    let mut out: Vec<SkewGame> = (2..=5).map(SkewGame::zero).collect();
    let rps = SkewGame::rock_paper_scissors();
    out.push(direct_sum(&rps, &SkewGame::zero(1)));
    out.push(direct_sum(&rps, &SkewGame::zero(2)));
    out.push(direct_sum(&SkewGame::zero(1), &rps));
    out.push(with_clone(&rps, 0));
    out.push(with_clone(&with_clone(&rps, 1), 2));
    let mut rng = rng(0x5eed);
    for n in 2..=4 {
        for a in 0..n {
            let g = sampling::odd_int_game(n, 2, &mut rng);
            let clone = with_clone(&g, a);
            // a clone only creates a second optimum if the copied action is played
            if skewgame::solver::analyze(&g)
                .strategy
                .support()
                .contains_index(a)
            {
                out.push(clone);
            }
        }
    }
    let flipped: Vec<SkewGame> = out
        .iter()
        .map(|g| {
            g.flip(ActionSet::from_bits(0b101 & ActionSet::full(g.n()).bits()))
                .unwrap()
        })
        .collect();
    out.extend(flipped);
    out
}
