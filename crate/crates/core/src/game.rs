//! Skew-symmetric games, strategies, and the sign-flip automorphisms.
//!
//! A [`SkewGame`] is the payoff matrix `G` of a symmetric zero-sum game:
//! `G[i][j] = -G[j][i]`. The row player receives `G[i][j]` when playing
//! action `i` against action `j`. Actions are numbered from 1 in every
//! [`ActionSet`]; matrix and vector accessors take zero-based indices.
//!
//! [`SkewGame::flip`] implements the automorphism that negates every payoff
//! between an action in `S` and an action outside `S`. These maps form an
//! abelian group in which every element is its own inverse:
//!
//! ```
//! use skewgame::{ActionSet, SkewGame};
//!
//! let g = SkewGame::from_upper(4, &["1", "-2", "3", "1/2", "5", "-7"].map(|s| s.parse().unwrap())).unwrap();
//! let s = ActionSet::from_actions([1, 3]);
//! let t = ActionSet::from_actions([3, 4]);
//!
//! assert_eq!(g.flip(s).unwrap().flip(t).unwrap(), g.flip(s.symmetric_difference(t)).unwrap());
//! assert_eq!(g.flip(s).unwrap(), g.flip(s.complement(4)).unwrap());
//! ```

use std::fmt;
use std::ops::Deref;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::action_set::{ActionSet, MAX_ACTIONS};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// An `n x n` exact skew-symmetric payoff matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewGame {
    n: usize,
    entries: Vec<Rational>,
}

impl SkewGame {
    /// Validates a square matrix and wraps it.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if n > MAX_ACTIONS {
            return Err(Error::TooLarge {
                what: "SkewGame",
                n,
                max: MAX_ACTIONS,
            });
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::NotSquare {
                row,
                len: r.len(),
                n,
            });
        }
        for i in 0..n {
            for j in i..n {
                if rows[i][j] != -&rows[j][i] {
                    return Err(Error::NotSkewSymmetric {
                        row: i + 1,
                        col: j + 1,
                    });
                }
            }
        }
        Ok(SkewGame {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a game from integer payoffs; convenient for fixtures.
    pub fn from_integers<const N: usize>(rows: [[i64; N]; N]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }

    /// Fills the strict upper triangle row-major from `values` and mirrors it
    /// with opposite sign below the diagonal.
    pub fn from_upper(n: usize, values: &[Rational]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if n > MAX_ACTIONS {
            return Err(Error::TooLarge {
                what: "SkewGame",
                n,
                max: MAX_ACTIONS,
            });
        }
        let expected = n * (n - 1) / 2;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: values.len(),
            });
        }
        let mut entries = vec![Rational::zero(); n * n];
        let mut it = values.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().expect("length checked");
                entries[j * n + i] = -v;
                entries[i * n + j] = v.clone();
            }
        }
        Ok(SkewGame { n, entries })
    }

    /// The game in which every payoff is 0.
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_ACTIONS).contains(&n));
        SkewGame {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    /// Rock-paper-scissors: action `i` beats action `i + 1` (cyclically).
    pub fn rock_paper_scissors() -> Self {
        Self::from_integers([[0, 1, -1], [-1, 0, 1], [1, -1, 0]]).expect("skew-symmetric")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at zero-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.rows().map(<[Rational]>::to_vec).collect()
    }

    /// Strict upper triangle, row-major.
    pub fn upper_triangle(&self) -> Vec<Rational> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect()
    }

    pub fn universe(&self) -> ActionSet {
        ActionSet::full(self.n)
    }

    /// Principal submatrix on `s`, actions kept in ascending order.
    pub fn restrict(&self, s: ActionSet) -> Result<SkewGame> {
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        s.check_within(self.n)?;
        let idx: Vec<usize> = s.indices().collect();
        let mut entries = Vec::with_capacity(idx.len() * idx.len());
        for &i in &idx {
            for &j in &idx {
                entries.push(self.get(i, j).clone());
            }
        }
        Ok(SkewGame {
            n: idx.len(),
            entries,
        })
    }

    /// Negates every payoff with exactly one index in `s`.
    pub fn flip(&self, s: ActionSet) -> Result<SkewGame> {
        s.check_within(self.n)?;
        let n = self.n;
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                if s.contains_index(i) != s.contains_index(j) {
                    let e = &mut entries[i * n + j];
                    *e = -&*e;
                }
            }
        }
        Ok(SkewGame { n, entries })
    }

    /// Reorders actions: action `perm[k]` of `self` (zero-based) becomes
    /// action `k` of the result.
    pub fn permute(&self, perm: &[usize]) -> Result<SkewGame> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidConfig(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| self.get(perm[k / n], perm[k % n]).clone())
            .collect();
        Ok(SkewGame { n, entries })
    }

    /// Matrix-vector product `G v`.
    pub fn apply(&self, v: &[Rational]) -> Result<RationalVector> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(RationalVector(
            self.rows()
                .map(|row| {
                    row.iter()
                        .zip(v)
                        .filter(|(g, x)| !g.is_zero() && !x.is_zero())
                        .map(|(g, x)| g * x)
                        .sum()
                })
                .collect(),
        ))
    }

    /// Expected payoff `q^T G p` to the row player.
    pub fn expected_payoff(&self, q: &Strategy, p: &Strategy) -> Result<Rational> {
        if q.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: q.len(),
            });
        }
        let gp = self.apply(p)?;
        Ok(q.iter().zip(gp.iter()).map(|(a, b)| a * b).sum())
    }

    /// Parses the plain-text game format: the action count `n`, then the
    /// `n(n-1)/2` strict upper-triangle entries (row-major). Lines starting
    /// with `#` are comments; the entries may span several lines.
    pub fn parse(text: &str) -> Result<SkewGame> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (first_line, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing action count".into(),
        })?;
        let n: usize = header.parse().map_err(|_| Error::Parse {
            line: first_line,
            msg: format!("invalid action count {header:?}"),
        })?;
        let mut values = Vec::new();
        for (line, l) in lines {
            for tok in l.split_whitespace() {
                values.push(tok.parse::<Rational>().map_err(|e| Error::Parse {
                    line,
                    msg: e.to_string(),
                })?);
            }
        }
        SkewGame::from_upper(n, &values)
    }

    /// Canonical text form: `n` on the first line, the upper triangle on the
    /// second.
    pub fn to_text(&self) -> String {
        let upper: Vec<String> = self
            .upper_triangle()
            .iter()
            .map(ToString::to_string)
            .collect();
        format!("{}\n{}\n", self.n, upper.join(" "))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<SkewGame> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

impl fmt::Debug for SkewGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl fmt::Display for SkewGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for row in cells.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for SkewGame {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Canonical {
            n: usize,
            upper: Vec<Rational>,
        }
        Canonical {
            n: self.n,
            upper: self.upper_triangle(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SkewGame {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Canonical {
            n: usize,
            upper: Vec<Rational>,
        }
        let c = Canonical::deserialize(deserializer)?;
        SkewGame::from_upper(c.n, &c.upper).map_err(serde::de::Error::custom)
    }
}

/// A vector of exact rationals indexed by action.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn zeros(n: usize) -> Self {
        RationalVector(vec![Rational::zero(); n])
    }

    pub fn from_integers(v: &[i64]) -> Self {
        RationalVector(v.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn restrict(&self, s: ActionSet) -> Result<RationalVector> {
        restrict_slice(&self.0, s).map(RationalVector)
    }

    pub fn flip(&self, s: ActionSet) -> Result<RationalVector> {
        s.check_within(self.0.len())?;
        Ok(RationalVector(
            self.0
                .iter()
                .enumerate()
                .map(|(i, x)| if s.contains_index(i) { -x } else { x.clone() })
                .collect(),
        ))
    }

    pub fn support(&self) -> ActionSet {
        support(&self.0)
    }

    pub fn neg_support(&self) -> ActionSet {
        neg_support(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }
}

impl Deref for RationalVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(&self.0, f)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(&self.0, f)
    }
}

fn fmt_tuple(v: &[Rational], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str("(")?;
    for (k, x) in v.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

/// A probability vector over actions: non-negative entries summing to 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Strategy(Vec<Rational>);

impl Strategy {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidStrategy("empty".into()));
        }
        if let Some(x) = probs.iter().find(|x| x.is_negative()) {
            return Err(Error::InvalidStrategy(format!("negative entry {x}")));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidStrategy(format!("entries sum to {total}")));
        }
        Ok(Strategy(probs))
    }

    /// Scales a non-negative, nonzero vector to sum 1.
    pub fn normalize(v: &[Rational]) -> Result<Self> {
        let total: Rational = v.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidStrategy("vector sums to zero".into()));
        }
        Self::new(v.iter().map(|x| x / &total).collect())
    }

    pub fn pure(n: usize, action: usize) -> Self {
        assert!((1..=n).contains(&action));
        let mut v = vec![Rational::zero(); n];
        v[action - 1] = Rational::one();
        Strategy(v)
    }

    pub fn uniform(n: usize) -> Self {
        Strategy(vec![Rational::new(1, n as i64); n])
    }

    pub fn support(&self) -> ActionSet {
        support(&self.0)
    }

    pub fn is_totally_mixed(&self) -> bool {
        self.support() == ActionSet::full(self.0.len())
    }

    pub fn as_vector(&self) -> RationalVector {
        RationalVector(self.0.clone())
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        Strategy::new(Vec::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

impl Deref for Strategy {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(&self.0, f)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(&self.0, f)
    }
}

/// `{i : v_i > 0}`.
pub fn support(v: &[Rational]) -> ActionSet {
    sign_set(v, Rational::is_positive)
}

/// `{i : v_i < 0}`.
pub fn neg_support(v: &[Rational]) -> ActionSet {
    sign_set(v, Rational::is_negative)
}

fn sign_set(v: &[Rational], pred: impl Fn(&Rational) -> bool) -> ActionSet {
    assert!(v.len() <= MAX_ACTIONS);
    ActionSet::from_bits(
        v.iter()
            .enumerate()
            .filter(|(_, x)| pred(x))
            .fold(0u64, |m, (i, _)| m | 1 << i),
    )
}

pub(crate) fn restrict_slice(v: &[Rational], s: ActionSet) -> Result<Vec<Rational>> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    s.check_within(v.len())?;
    Ok(s.indices().map(|i| v[i].clone()).collect())
}
