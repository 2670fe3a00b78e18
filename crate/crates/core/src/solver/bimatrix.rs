//! General (not necessarily symmetric) zero-sum matrix games.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Strategy;
use crate::rational::Rational;
use crate::solver::simplex::{Constraint, FeasibleRegion, LinearProgram, Relation};

/// Payoff matrix of the row player; rows are the row player's actions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimatrixZeroSum {
    rows: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimatrixSolution {
    pub value: Rational,
    /// Maximin strategy of the row player.
    pub row: Strategy,
    /// Minimax strategy of the column player.
    pub col: Strategy,
}

impl BimatrixZeroSum {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::NotSquare {
                row,
                len: r.len(),
                n: cols,
            });
        }
        Ok(BimatrixZeroSum { rows })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn transpose_negated(&self) -> BimatrixZeroSum {
        let rows = (0..self.num_cols())
            .map(|j| self.rows.iter().map(|r| -&r[j]).collect())
            .collect();
        BimatrixZeroSum { rows }
    }

    /// Row player's guaranteed payoff against each column.
    pub fn row_payoffs(&self, q: &[Rational]) -> Vec<Rational> {
        (0..self.num_cols())
            .map(|j| self.rows.iter().zip(q).map(|(r, x)| &r[j] * x).sum())
            .collect()
    }

    /// Row player's payoff for each row against the column mix `p`.
    pub fn col_payoffs(&self, p: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(p).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// Shift making every entry at least 1.
    fn shift(&self) -> Rational {
        let min = self.rows.iter().flatten().min().expect("nonempty").clone();
        Rational::one() - min
    }
}

/// Row player's maximin program on the shifted matrix `A + c`:
/// maximize `v` s.t. `v - sum_i q_i (A_ij + c) <= 0` for every column `j`
/// and `sum q = 1`. Returns the region and the shift.
fn row_program(
    a: &BimatrixZeroSum,
    extra: impl FnOnce(&mut LinearProgram),
) -> (LinearProgram, Rational) {
    let (m, k) = (a.num_rows(), a.num_cols());
    let c = a.shift();
    let mut lp = LinearProgram::new(m + 1);
    for j in 0..k {
        let mut coeffs: Vec<Rational> = (0..m).map(|i| -(a.get(i, j) + &c)).collect();
        coeffs.push(Rational::one());
        lp.push(coeffs, Relation::Le, Rational::zero());
    }
    let mut ones = vec![Rational::one(); m];
    ones.push(Rational::zero());
    lp.push(ones, Relation::Eq, Rational::one());
    extra(&mut lp);
    let mut objective = vec![Rational::zero(); m + 1];
    objective[m] = Rational::one();
    (lp.maximize(objective), c)
}

/// Value and a maximin pair, from the row player's program and the column
/// player's program (the row program of `-A^T`).
pub fn solve_bimatrix_zero_sum(a: &BimatrixZeroSum) -> Result<BimatrixSolution> {
    if a.num_rows() == 2 && a.num_cols() == 2 {
        return Ok(solve_two_by_two(a));
    }
    solve_by_programs(a)
}

fn solve_by_programs(a: &BimatrixZeroSum) -> Result<BimatrixSolution> {
    let (lp, c) = row_program(a, |_| {});
    let sol = lp.solve()?;
    let m = a.num_rows();
    let value = &sol.optimum - &c;
    let row = Strategy::new(sol.witness[..m].to_vec())?;

    let dual = a.transpose_negated();
    let (lp, c) = row_program(&dual, |_| {});
    let sol = lp.solve()?;
    let col_value = -(&sol.optimum - &c);
    let col = Strategy::new(sol.witness[..a.num_cols()].to_vec())?;
    debug_assert_eq!(value, col_value, "minimax theorem");
    Ok(BimatrixSolution { value, row, col })
}

/// Closed form for 2×2 games: a pure saddle point if one exists, otherwise
/// the unique equalizing pair.
fn solve_two_by_two(m: &BimatrixZeroSum) -> BimatrixSolution {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let row_min = [a.min(b), c.min(d)];
    let col_max = [a.max(c), b.max(d)];
    let r = if row_min[0] >= row_min[1] { 0 } else { 1 };
    let k = if col_max[0] <= col_max[1] { 0 } else { 1 };
    if row_min[r] == col_max[k] {
        return BimatrixSolution {
            value: row_min[r].clone(),
            row: Strategy::pure(2, r + 1),
            col: Strategy::pure(2, k + 1),
        };
    }
    let den = a - b - c + d;
    let q1 = (d - c) / &den;
    let p1 = (d - b) / &den;
    let value = (a * d - b * c) / &den;
    let row = Strategy::new(vec![q1.clone(), Rational::one() - q1]).expect("mixed 2x2 solution");
    let col = Strategy::new(vec![p1.clone(), Rational::one() - p1]).expect("mixed 2x2 solution");
    BimatrixSolution { value, row, col }
}

/// Whether the row player has an optimal strategy with full support.
pub fn row_has_full_support_optimum(
    a: &BimatrixZeroSum,
    solution: &BimatrixSolution,
) -> Result<bool> {
    if solution.row.iter().all(Rational::is_positive) {
        return Ok(true);
    }
    if a.num_rows() == 2 {
        return Ok(two_row_full_support(a, &solution.value));
    }
    // maximize t s.t. q guarantees the value and q_i >= t for every row.
    let (m, k) = (a.num_rows(), a.num_cols());
    let nv = m + 1;
    let mut cons = Vec::with_capacity(k + m + 1);
    for j in 0..k {
        let mut coeffs: Vec<Rational> = (0..m).map(|i| a.get(i, j).clone()).collect();
        coeffs.push(Rational::zero());
        cons.push(Constraint {
            coeffs,
            relation: Relation::Ge,
            rhs: solution.value.clone(),
        });
    }
    for i in 0..m {
        let mut coeffs = vec![Rational::zero(); nv];
        coeffs[i] = Rational::one();
        coeffs[m] = -Rational::one();
        cons.push(Constraint {
            coeffs,
            relation: Relation::Ge,
            rhs: Rational::zero(),
        });
    }
    let mut ones = vec![Rational::one(); m];
    ones.push(Rational::zero());
    cons.push(Constraint {
        coeffs: ones,
        relation: Relation::Eq,
        rhs: Rational::one(),
    });
    let mut objective = vec![Rational::zero(); nv];
    objective[m] = Rational::one();
    let region = FeasibleRegion::new(nv, &cons)?;
    Ok(region.maximize(&objective)?.optimum.is_positive())
}

/// With two rows the optimal strategies are `(x, 1 - x)` for `x` in an
/// interval cut out by one linear inequality per column.
fn two_row_full_support(a: &BimatrixZeroSum, value: &Rational) -> bool {
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    for j in 0..a.num_cols() {
        // x (a1j - a2j) >= v - a2j
        let coef = a.get(0, j) - a.get(1, j);
        let rhs = value - a.get(1, j);
        if coef.is_zero() {
            if rhs.is_positive() {
                return false;
            }
        } else if coef.is_positive() {
            lo = lo.max(rhs / coef);
        } else {
            hi = hi.min(rhs / coef);
        }
    }
    lo <= hi && hi.is_positive() && lo < Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_pennies() {
        let a = BimatrixZeroSum::from_integers(&[&[1, -1], &[-1, 1]]).unwrap();
        let s = solve_bimatrix_zero_sum(&a).unwrap();
        assert_eq!(s.value, Rational::zero());
        assert_eq!(s.row, Strategy::uniform(2));
        assert_eq!(s.col, Strategy::uniform(2));
        assert!(row_has_full_support_optimum(&a, &s).unwrap());
    }

    #[test]
    fn one_by_one() {
        let a = BimatrixZeroSum::from_integers(&[&[5]]).unwrap();
        let s = solve_bimatrix_zero_sum(&a).unwrap();
        assert_eq!(s.value, Rational::from(5));
        assert_eq!(s.row, Strategy::pure(1, 1));
        assert_eq!(s.col, Strategy::pure(1, 1));
    }

    #[test]
    fn saddle_point_is_pure() {
        // Row 1 dominates; column 2 is the column player's best reply.
        let a = BimatrixZeroSum::from_integers(&[&[3, 1], &[2, 0]]).unwrap();
        let s = solve_bimatrix_zero_sum(&a).unwrap();
        assert_eq!(s.value, Rational::from(1));
        assert_eq!(s.row, Strategy::pure(2, 1));
        assert_eq!(s.col, Strategy::pure(2, 2));
        assert!(!row_has_full_support_optimum(&a, &s).unwrap());
    }

    #[test]
    fn certifies_value() {
        let a = BimatrixZeroSum::from_integers(&[&[2, -3, 4], &[-1, 5, -2]]).unwrap();
        let s = solve_bimatrix_zero_sum(&a).unwrap();
        assert!(a.row_payoffs(&s.row).iter().all(|x| *x >= s.value));
        assert!(a.col_payoffs(&s.col).iter().all(|x| *x <= s.value));
    }

    #[test]
    fn closed_form_matches_programs() {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 7) as i64 - 3
        };
        for _ in 0..400 {
            let rows: Vec<Vec<i64>> = (0..2).map(|_| (0..2).map(|_| next()).collect()).collect();
            let a = BimatrixZeroSum::from_integers(&[&rows[0], &rows[1]]).unwrap();
            let fast = solve_two_by_two(&a);
            let slow = solve_by_programs(&a).unwrap();
            assert_eq!(fast.value, slow.value, "{rows:?}");
            assert!(
                a.row_payoffs(&fast.row).iter().all(|x| *x >= fast.value),
                "{rows:?}"
            );
            assert!(
                a.col_payoffs(&fast.col).iter().all(|x| *x <= fast.value),
                "{rows:?}"
            );
            let full = two_row_full_support(&a, &fast.value);
            let generic = slow_full_support(&a, &slow.value);
            assert_eq!(full, generic, "{rows:?}");
        }
    }

    fn slow_full_support(a: &BimatrixZeroSum, value: &Rational) -> bool {
        let mut lp = LinearProgram::new(3);
        for j in 0..2 {
            lp.push(
                vec![a.get(0, j).clone(), a.get(1, j).clone(), Rational::zero()],
                Relation::Ge,
                value.clone(),
            );
        }
        for i in 0..2 {
            let mut coeffs = vec![Rational::zero(); 3];
            coeffs[i] = Rational::one();
            coeffs[2] = -Rational::one();
            lp.push(coeffs, Relation::Ge, Rational::zero());
        }
        lp.push(
            vec![Rational::one(), Rational::one(), Rational::zero()],
            Relation::Eq,
            Rational::one(),
        );
        let sol = lp
            .maximize(vec![Rational::zero(), Rational::zero(), Rational::one()])
            .solve()
            .unwrap();
        sol.optimum.is_positive()
    }

    #[test]
    fn rejects_empty() {
        assert!(matches!(
            BimatrixZeroSum::new(vec![]),
            Err(Error::EmptyMatrix)
        ));
        assert!(matches!(
            BimatrixZeroSum::new(vec![vec![]]),
            Err(Error::EmptyMatrix)
        ));
    }
}
