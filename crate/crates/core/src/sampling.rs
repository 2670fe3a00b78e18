//! Seeded random games.
//!
//! Every sampler here is invariant under all sign flips `G -> flip(G, S)`:
//! entries are drawn independently with an explicit fair sign, or a uniform
//! random flip is applied afterwards ([`SamplerKind::Symmetrized`]). The
//! odd-integer and tournament samplers additionally produce a unique optimal
//! strategy on every draw.
//!
//! Randomness comes from ChaCha8 keyed by the root seed, with the stream
//! number derived from the trial path, so any trial can be regenerated on
//! its own:
//!
//! ```
//! use skewgame::sampling::{RandomStream, SamplerKind, SamplerSpec};
//!
//! let spec = SamplerSpec::new(SamplerKind::OddInt { bound: 2 }, 5).unwrap();
//! let a = spec.draw(&RandomStream::substream(7, 123));
//! let b = spec.draw(&RandomStream::substream(7, 123));
//! assert_eq!(a, b);
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::action_set::{ActionSet, MAX_ACTIONS};
use crate::error::{Error, Result};
use crate::game::SkewGame;
use crate::rational::Rational;

/// Name of the generator, echoed in reports.
pub const GENERATOR: &str = "chacha8(seed_from_u64(seed), stream=splitmix64-fold(path))";

/// Largest `n` accepted by [`all_tournaments`].
pub const MAX_TOURNAMENT_N: usize = 7;

/// A reproducible random stream identified by a root seed and a path of
/// indices, e.g. `[trial]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RandomStream {
    seed: u64,
    path: Vec<u64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            seed,
            path: Vec::new(),
        }
    }

    /// The stream for trial `index` under `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        Self::new(seed).child(index)
    }

    pub fn child(&self, index: u64) -> Self {
        let mut path = self.path.clone();
        path.push(index);
        RandomStream {
            seed: self.seed,
            path,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let stream = self
            .path
            .iter()
            .fold(0u64, |h, &x| splitmix64(h ^ splitmix64(x)));
        rng.set_stream(stream);
        rng
    }
}

/// Entries drawn uniformly from the odd integers `±1, ±3, ..., ±(2B+1)`.
pub fn odd_int_game<R: Rng + ?Sized>(n: usize, bound: u64, rng: &mut R) -> SkewGame {
    fill_upper(n, rng, |rng| {
        let k = rng.gen_range(0..=bound) as i64;
        let v = 2 * k + 1;
        Rational::from(if rng.gen::<bool>() { v } else { -v })
    })
}

/// Entries with a fair random sign and the magnitude of a standard normal
/// draw, converted exactly from its binary representation.
pub fn gaussian_game<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SkewGame {
    fill_upper(n, rng, gaussian_entry)
}

/// A fair random sign times the magnitude of a standard normal draw.
pub fn gaussian_entry<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let magnitude: f64 = rng.sample::<f64, _>(StandardNormal).abs();
    signed(
        rng,
        Rational::from_f64(magnitude).expect("finite normal draw"),
    )
}

/// Entries with a fair random sign and magnitude uniform on
/// `[0, half_width)`, converted exactly.
pub fn uniform_game<R: Rng + ?Sized>(n: usize, half_width: &Rational, rng: &mut R) -> SkewGame {
    fill_upper(n, rng, |rng| {
        let u: f64 = rng.gen();
        signed(
            rng,
            Rational::from_f64(u).expect("finite uniform draw") * half_width,
        )
    })
}

/// Every off-diagonal payoff an independent fair `±1`.
pub fn tournament_game<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SkewGame {
    fill_upper(n, rng, |rng| {
        Rational::from(if rng.gen::<bool>() { 1 } else { -1 })
    })
}

/// Applies a uniformly random flip to `g`.
pub fn symmetrize<R: Rng + ?Sized>(g: &SkewGame, rng: &mut R) -> SkewGame {
    let t = ActionSet::from_bits(rng.gen::<u64>() & ActionSet::full(g.n()).bits());
    g.flip(t).expect("flip set within universe")
}

fn signed<R: Rng + ?Sized>(rng: &mut R, magnitude: Rational) -> Rational {
    if rng.gen::<bool>() {
        magnitude
    } else {
        -magnitude
    }
}

fn fill_upper<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    mut draw: impl FnMut(&mut R) -> Rational,
) -> SkewGame {
    let values: Vec<Rational> = (0..n * (n - 1) / 2).map(|_| draw(rng)).collect();
    SkewGame::from_upper(n, &values).expect("upper triangle length")
}

/// Every tournament game on `n` actions. Game `m` has upper-triangle entry
/// `k` (row-major) equal to `+1` if bit `k` of `m` is set and `-1`
/// otherwise.
pub fn all_tournaments(n: usize) -> Result<impl Iterator<Item = SkewGame>> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if n > MAX_TOURNAMENT_N {
        return Err(Error::TooLarge {
            what: "tournament enumeration",
            n,
            max: MAX_TOURNAMENT_N,
        });
    }
    let edges = n * (n - 1) / 2;
    Ok((0..1u64 << edges).map(move |m| tournament_from_bits(n, m)))
}

pub fn tournament_from_bits(n: usize, bits: u64) -> SkewGame {
    let values: Vec<Rational> = (0..n * (n - 1) / 2)
        .map(|k| Rational::from(if bits >> k & 1 == 1 { 1 } else { -1 }))
        .collect();
    SkewGame::from_upper(n, &values).expect("upper triangle length")
}

/// A distribution over games of a fixed size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SamplerKind {
    OddInt {
        bound: u64,
    },
    Gaussian,
    Uniform {
        half_width: Rational,
    },
    Tournament,
    Symmetrized {
        base: Box<SamplerKind>,
    },
    /// Always the same game; only useful under `Symmetrized`.
    Constant {
        game: SkewGame,
    },
}

impl SamplerKind {
    pub fn name(&self) -> String {
        match self {
            SamplerKind::OddInt { .. } => "odd-int".into(),
            SamplerKind::Gaussian => "gaussian".into(),
            SamplerKind::Uniform { .. } => "uniform".into(),
            SamplerKind::Tournament => "tournament".into(),
            SamplerKind::Symmetrized { base } => format!("symmetrized({})", base.name()),
            SamplerKind::Constant { .. } => "constant".into(),
        }
    }

    /// Whether every draw is known to have a unique optimal strategy.
    pub fn always_regular(&self) -> bool {
        match self {
            SamplerKind::OddInt { .. } | SamplerKind::Tournament => true,
            SamplerKind::Symmetrized { base } => base.always_regular(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerSpec {
    #[serde(flatten)]
    pub kind: SamplerKind,
    pub n: usize,
}

impl SamplerSpec {
    pub fn new(kind: SamplerKind, n: usize) -> Result<Self> {
        let spec = SamplerSpec { kind, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if self.n > MAX_ACTIONS {
            return Err(Error::TooLarge {
                what: "sampler",
                n: self.n,
                max: MAX_ACTIONS,
            });
        }
        fn check(kind: &SamplerKind, n: usize) -> Result<()> {
            match kind {
                SamplerKind::Uniform { half_width } if !half_width.is_positive() => Err(
                    Error::InvalidConfig(format!("half-width must be positive, got {half_width}")),
                ),
                SamplerKind::Constant { game } if game.n() != n => Err(Error::DimensionMismatch {
                    expected: n,
                    found: game.n(),
                }),
                SamplerKind::Symmetrized { base } => check(base, n),
                _ => Ok(()),
            }
        }
        check(&self.kind, self.n)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SkewGame {
        sample_kind(&self.kind, self.n, rng)
    }

    /// Draws the game for one stream.
    pub fn draw(&self, stream: &RandomStream) -> SkewGame {
        self.sample(&mut stream.rng())
    }
}

fn sample_kind<R: Rng + ?Sized>(kind: &SamplerKind, n: usize, rng: &mut R) -> SkewGame {
    match kind {
        SamplerKind::OddInt { bound } => odd_int_game(n, *bound, rng),
        SamplerKind::Gaussian => gaussian_game(n, rng),
        SamplerKind::Uniform { half_width } => uniform_game(n, half_width, rng),
        SamplerKind::Tournament => tournament_game(n, rng),
        SamplerKind::Symmetrized { base } => {
            let g = sample_kind(base, n, rng);
            symmetrize(&g, rng)
        }
        SamplerKind::Constant { game } => game.clone(),
    }
}
