//! Exact linear algebra for skew-symmetric matrices.
//!
//! The Pfaffian of an even skew-symmetric matrix is computed by skew
//! elimination: pick a nonzero entry in the first row, move it next to the
//! diagonal, multiply it into the result, and replace the trailing block by
//! its skew Schur complement. The result squares to the determinant.
//!
//! For odd `n`, the signed principal Pfaffians of a game form a vector in
//! its kernel, which is nonzero exactly when the rank is `n - 1`:
//!
//! ```
//! use skewgame::{linalg, SkewGame, RationalVector};
//!
//! let rps = SkewGame::rock_paper_scissors();
//! let w = linalg::kernel_vector(&rps).unwrap();
//! assert_eq!(w, RationalVector::from_integers(&[1, 1, 1]));
//! assert!(rps.apply(&w).unwrap().is_zero());
//! assert_eq!(linalg::rank(&rps), 2);
//! ```

use crate::action_set::ActionSet;
use crate::error::{Error, Result};
use crate::game::{RationalVector, SkewGame, Strategy};
use crate::rational::Rational;

/// Principal Pfaffians of an odd game: entry `i` is the Pfaffian of the
/// matrix with row and column `i` deleted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfaffianVector(pub Vec<Rational>);

impl PfaffianVector {
    /// True when every entry is nonzero and consecutive entries have
    /// opposite signs.
    pub fn alternates(&self) -> bool {
        self.0.iter().all(|x| !x.is_zero())
            && self.0.windows(2).all(|w| w[0].signum() == -w[1].signum())
    }
}

fn check_skew(rows: &[Vec<Rational>]) -> Result<()> {
    let n = rows.len();
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare {
                row,
                len: r.len(),
                n,
            });
        }
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
    Ok(())
}

/// Pfaffian of an even-dimensional skew-symmetric matrix. The empty matrix
/// has Pfaffian 1.
pub fn pfaffian(rows: &[Vec<Rational>]) -> Result<Rational> {
    check_skew(rows)?;
    if rows.len() % 2 == 1 {
        return Err(Error::OddDimension(rows.len()));
    }
    Ok(pfaffian_unchecked(rows.to_vec()))
}

pub(crate) fn pfaffian_unchecked(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut pf = Rational::one();
    let mut k = 0;
    while k < n {
        let Some(p) = (k + 1..n).find(|&j| !a[k][j].is_zero()) else {
            return Rational::zero();
        };
        if p != k + 1 {
            // Simultaneous row/column swap flips the Pfaffian's sign.
            a.swap(p, k + 1);
            for row in a.iter_mut() {
                row.swap(p, k + 1);
            }
            pf = -pf;
        }
        let pivot = a[k][k + 1].clone();
        pf *= &pivot;
        // C'[i][j] = C[i][j] + (a[k+1][i] a[k][j] - a[k][i] a[k+1][j]) / pivot
        let r0: Vec<Rational> = a[k].iter().map(|x| x / &pivot).collect();
        let r1: Vec<Rational> = a[k + 1].clone();
        for i in k + 2..n {
            for j in i + 1..n {
                let delta = &r1[i] * &r0[j] - &r0[i] * &r1[j];
                if !delta.is_zero() {
                    let v = &a[i][j] + &delta;
                    a[j][i] = -&v;
                    a[i][j] = v;
                }
            }
        }
        k += 2;
    }
    pf
}

/// Pfaffian of an even game.
pub fn game_pfaffian(g: &SkewGame) -> Result<Rational> {
    if g.n() % 2 == 1 {
        return Err(Error::OddDimension(g.n()));
    }
    Ok(pfaffian_unchecked(g.to_rows()))
}

pub fn principal_pfaffians(g: &SkewGame) -> Result<PfaffianVector> {
    let n = g.n();
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    let rows = g.to_rows();
    let values = (0..n)
        .map(|skip| {
            let minor: Vec<Vec<Rational>> = rows
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, r)| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != skip)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            pfaffian_unchecked(minor)
        })
        .collect();
    Ok(PfaffianVector(values))
}

/// `w_i = (-1)^(i+1) Pf(G without row/column i)` for one-based `i`.
///
/// `G w = 0` always holds; `w` is zero exactly when `rank(G) < n - 1`.
pub fn kernel_vector(g: &SkewGame) -> Result<RationalVector> {
    let pf = principal_pfaffians(g)?;
    Ok(RationalVector(
        pf.0.into_iter()
            .enumerate()
            .map(|(k, x)| if k % 2 == 0 { x } else { -x })
            .collect(),
    ))
}

/// Exact rank by fraction-free (Bareiss) elimination.
pub fn matrix_rank(rows: &[Vec<Rational>]) -> usize {
    bareiss(rows.to_vec()).0
}

/// Exact determinant of a square matrix by fraction-free elimination.
pub fn determinant(rows: &[Vec<Rational>]) -> Result<Rational> {
    let n = rows.len();
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::NotSquare {
            row,
            len: r.len(),
            n,
        });
    }
    let (rank, det) = bareiss(rows.to_vec());
    Ok(if rank < n { Rational::zero() } else { det })
}

/// Returns `(rank, signed last pivot)`; the pivot equals the determinant
/// when the matrix is square and of full rank.
fn bareiss(mut a: Vec<Vec<Rational>>) -> (usize, Rational) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = Rational::one();
    let mut sign = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[i][j] * &a[r][c] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = Rational::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = if sign < 0 { -prev } else { prev };
    (r, det)
}

/// Rank of a game's payoff matrix; always even.
pub fn rank(g: &SkewGame) -> usize {
    matrix_rank(&g.to_rows())
}

/// The unique totally mixed optimal strategy, when the principal Pfaffians
/// strictly alternate in sign; `None` otherwise (including when any of them
/// is zero).
pub fn pfaffian_totally_mixed(g: &SkewGame) -> Result<Option<Strategy>> {
    let pf = principal_pfaffians(g)?;
    if !pf.alternates() {
        return Ok(None);
    }
    let w = kernel_vector(g)?;
    let total: Rational = w.iter().sum();
    Ok(Some(Strategy::new(w.iter().map(|x| x / &total).collect())?))
}

/// The sign pattern of the kernel of an odd game of rank `n - 1`.
///
/// With `w` spanning the kernel and no zero coordinate, the pair
/// `{neg_support(w), support(w)}` is determined up to the global sign of
/// `w`; the member not containing action 1 is returned. `None` when the
/// rank is deficient or the kernel has a zero coordinate.
pub fn kernel_sign_class(g: &SkewGame) -> Result<Option<ActionSet>> {
    let w = kernel_vector(g)?;
    if w.iter().any(Rational::is_zero) {
        return Ok(None);
    }
    debug_assert_eq!(rank(g), g.n() - 1);
    Ok(Some(canonical_class(w.neg_support(), g.n())))
}

/// The member of `{s, N \ s}` that does not contain action 1.
pub fn canonical_class(s: ActionSet, n: usize) -> ActionSet {
    if s.contains(1) {
        s.complement(n)
    } else {
        s
    }
}
