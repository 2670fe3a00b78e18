//! Brute-force reference implementations for small games.
//!
//! Nothing here shares code with the simplex solver or with the Pfaffian
//! elimination in [`crate::linalg`]: vertices come from solving every square
//! active-constraint system by plain Gaussian elimination, and Pfaffians from
//! the signed sum over perfect matchings.

use std::collections::BTreeSet;

use crate::action_set::ActionSet;
use crate::error::{Error, Result};
use crate::game::{SkewGame, Strategy};
use crate::rational::Rational;

/// Largest game accepted by [`vertices_of_optimal_set`] and [`brute_supports`].
pub const MAX_VERTEX_N: usize = 6;
/// Largest matrix accepted by [`pfaffian_by_matchings`] and
/// [`singular_submatrix_witness`].
pub const MAX_MATCHING_N: usize = 8;

/// All vertices of the optimal set `P(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    pub vertices: Vec<Strategy>,
    pub complete: bool,
}

impl VertexSet {
    pub fn is_singleton(&self) -> bool {
        self.vertices.len() == 1
    }
}

/// Solves the square system `a x = b` by Gaussian elimination. `None` if the
/// matrix is singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        b.swap(p, col);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= &d;
            }
            let d = &f * &b[col];
            b[r] -= &d;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Determinant by Gaussian elimination with row swaps.
pub fn determinant_by_elimination(rows: &[Vec<Rational>]) -> Rational {
    let mut a = rows.to_vec();
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= &d;
            }
        }
    }
    det
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn enumerate_vertices(g: &SkewGame, max: usize, what: &'static str) -> Result<VertexSet> {
    let n = g.n();
    if n > max {
        return Err(Error::TooLarge { what, n, max });
    }
    // Inequality k < n is p_k >= 0; inequality n + i is (G p)_i <= 0.
    let ineq_row = |k: usize| -> Vec<Rational> {
        if k < n {
            (0..n)
                .map(|j| {
                    if j == k {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        } else {
            g.row(k - n).to_vec()
        }
    };
    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    combinations(2 * n, n - 1, |active| {
        let mut a: Vec<Vec<Rational>> = active.iter().map(|&k| ineq_row(k)).collect();
        let mut b = vec![Rational::zero(); n - 1];
        a.push(vec![Rational::one(); n]);
        b.push(Rational::one());
        let Some(x) = solve_square(a, b) else {
            return;
        };
        if x.iter().any(Rational::is_negative) {
            return;
        }
        let gx = g.apply(&x).expect("dimension");
        if gx.iter().any(Rational::is_positive) {
            return;
        }
        found.insert(x);
    });
    let vertices = found
        .into_iter()
        .map(|x| Strategy::new(x).expect("feasible vertex"))
        .collect();
    Ok(VertexSet {
        vertices,
        complete: true,
    })
}

/// Every vertex of `P(G)`, by solving all square active-constraint systems.
pub fn vertices_of_optimal_set(g: &SkewGame) -> Result<VertexSet> {
    enumerate_vertices(g, MAX_VERTEX_N, "vertex enumeration")
}

/// The supports achievable by optimal strategies, and whether the optimum
/// is unique.
///
/// The barycenter of a set of vertices has support equal to the union of
/// their supports, and every optimal strategy is such a convex combination,
/// so the achievable supports are exactly the unions of vertex supports.
pub fn brute_supports(g: &SkewGame) -> Result<(BTreeSet<ActionSet>, bool)> {
    let vs = vertices_of_optimal_set(g)?;
    let mut supports: BTreeSet<ActionSet> = BTreeSet::new();
    for v in &vs.vertices {
        let s = v.support();
        let unions: Vec<ActionSet> = supports.iter().map(|t| t.union(s)).collect();
        supports.insert(s);
        supports.extend(unions);
    }
    Ok((supports, vs.is_singleton()))
}

/// Pfaffian as the signed sum over perfect matchings.
pub fn pfaffian_by_matchings(rows: &[Vec<Rational>]) -> Result<Rational> {
    let n = rows.len();
    if n > MAX_MATCHING_N {
        return Err(Error::TooLarge {
            what: "matching Pfaffian",
            n,
            max: MAX_MATCHING_N,
        });
    }
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::NotSquare {
            row,
            len: r.len(),
            n,
        });
    }
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let mut total = Rational::zero();
    let mut order = Vec::with_capacity(n);
    let remaining: Vec<usize> = (0..n).collect();
    matchings(rows, &remaining, &mut order, &mut total);
    Ok(total)
}

fn matchings(
    a: &[Vec<Rational>],
    remaining: &[usize],
    order: &mut Vec<usize>,
    total: &mut Rational,
) {
    let Some((&first, rest)) = remaining.split_first() else {
        // sign of the permutation (i1 j1 i2 j2 ...) by inversion count
        let inversions = (0..order.len())
            .flat_map(|x| (x + 1..order.len()).map(move |y| (x, y)))
            .filter(|&(x, y)| order[x] > order[y])
            .count();
        let product = order
            .chunks(2)
            .fold(Rational::one(), |acc, pair| acc * &a[pair[0]][pair[1]]);
        if inversions % 2 == 0 {
            *total += &product;
        } else {
            *total -= &product;
        }
        return;
    };
    for k in 0..rest.len() {
        let partner = rest[k];
        let next: Vec<usize> = rest
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &x)| x)
            .collect();
        order.push(first);
        order.push(partner);
        matchings(a, &next, order, total);
        order.truncate(order.len() - 2);
    }
}

/// An even-size action set whose principal submatrix is singular, found
/// from a non-quasi-strict optimal strategy; `None` when the optimum is
/// unique.
///
/// If `p` is optimal with support `S` and `(G p)_i = 0` for some `i` outside
/// `S`, then both `G_S p_S = 0` and `G_{S+i} p_{S+i} = 0`, and one of the two
/// sets has even size.
pub fn singular_submatrix_witness(g: &SkewGame) -> Result<Option<ActionSet>> {
    let vs = enumerate_vertices(g, MAX_MATCHING_N, "singular submatrix witness")?;
    if vs.is_singleton() {
        return Ok(None);
    }
    for p in &vs.vertices {
        let s = p.support();
        let gp = g.apply(p)?;
        for i in (0..g.n()).filter(|&i| !s.contains_index(i) && gp[i].is_zero()) {
            let candidate = if s.len() % 2 == 0 { s } else { s.with(i + 1) };
            let sub = g.restrict(candidate)?;
            if determinant_by_elimination(&sub.to_rows()).is_zero() {
                return Ok(Some(candidate));
            }
        }
    }
    Ok(None)
}
