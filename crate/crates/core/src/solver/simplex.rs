//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! All programs have the form: maximize `c^T x` subject to linear
//! constraints and `x >= 0`. A [`FeasibleRegion`] keeps the tableau reached
//! at the end of phase one, so several objectives over the same region
//! share that work.

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// maximize `objective^T x` subject to `constraints` and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub optimum: Rational,
    /// An optimal basic solution.
    pub witness: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn maximize(mut self, objective: Vec<Rational>) -> Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    pub fn constrain(mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        self.push(coeffs, relation, rhs);
        self
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> Result<LpSolution> {
        FeasibleRegion::new(self.num_vars, &self.constraints)?.maximize(&self.objective)
    }
}

/// Solves `lp` exactly.
pub fn lp_optimize(lp: &LinearProgram) -> Result<LpSolution> {
    lp.solve()
}

/// A phase-one tableau: a basic feasible solution of the constraint system
/// with all artificial variables removed.
#[derive(Clone, Debug)]
pub struct FeasibleRegion {
    num_vars: usize,
    /// Rows of `[coefficients | rhs]`.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl FeasibleRegion {
    pub fn new(num_vars: usize, constraints: &[Constraint]) -> Result<Self> {
        let num_slack = constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let num_art = constraints
            .iter()
            .filter(|c| match c.relation {
                Relation::Eq => true,
                Relation::Le => c.rhs.is_negative(),
                Relation::Ge => !c.rhs.is_negative(),
            })
            .count();
        let art_start = num_vars + num_slack;
        let width = art_start + num_art;
        let mut rows = Vec::with_capacity(constraints.len());
        let mut basis = Vec::with_capacity(constraints.len());
        let (mut slack, mut art) = (num_vars, art_start);
        for c in constraints {
            let mut row = vec![Rational::zero(); width + 1];
            let negate = c.rhs.is_negative();
            for (dst, src) in row.iter_mut().zip(&c.coeffs) {
                *dst = if negate { -src } else { src.clone() };
            }
            row[width] = c.rhs.abs();
            let relation = match (c.relation, negate) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            if c.relation != Relation::Eq {
                // The slack keeps the sign it had before the row was negated.
                let coeff = if c.relation == Relation::Le { 1 } else { -1 };
                row[slack] = Rational::from(if negate { -coeff } else { coeff });
            }
            match relation {
                Relation::Le => basis.push(slack),
                Relation::Ge | Relation::Eq => {
                    row[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            if c.relation != Relation::Eq {
                slack += 1;
            }
            rows.push(row);
        }

        let mut tab = Tableau { rows, basis, width };
        if num_art > 0 {
            let cost: Vec<Rational> = (0..width)
                .map(|j| {
                    if j >= art_start {
                        -Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let allowed = vec![true; width];
            let value = tab.optimize(&cost, &allowed)?;
            if value.is_negative() {
                return Err(Error::Infeasible);
            }
            // Drive remaining (zero-level) artificials out of the basis.
            let mut r = 0;
            while r < tab.rows.len() {
                if tab.basis[r] >= art_start {
                    match (0..art_start).find(|&j| !tab.rows[r][j].is_zero()) {
                        Some(j) => {
                            tab.pivot(r, j, None);
                            r += 1;
                        }
                        None => {
                            // Redundant equality.
                            tab.rows.remove(r);
                            tab.basis.remove(r);
                        }
                    }
                } else {
                    r += 1;
                }
            }
            for row in tab.rows.iter_mut() {
                let rhs = row[width].clone();
                row.truncate(art_start);
                row.push(rhs);
            }
            tab.width = art_start;
        }
        Ok(FeasibleRegion {
            num_vars,
            rows: tab.rows,
            basis: tab.basis,
        })
    }

    /// The basic feasible solution found by phase one.
    pub fn vertex(&self) -> Vec<Rational> {
        let width = self.width();
        let mut x = vec![Rational::zero(); self.num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.num_vars {
                x[b] = row[width].clone();
            }
        }
        x
    }

    fn width(&self) -> usize {
        self.rows.first().map_or(self.num_vars, |r| r.len() - 1)
    }

    /// Maximizes `objective` (over the original variables) on this region.
    pub fn maximize(&self, objective: &[Rational]) -> Result<LpSolution> {
        assert_eq!(objective.len(), self.num_vars);
        let width = self.width();
        let mut tab = Tableau {
            rows: self.rows.clone(),
            basis: self.basis.clone(),
            width,
        };
        let mut cost = objective.to_vec();
        cost.resize(width, Rational::zero());
        let allowed = vec![true; width];
        let optimum = tab.optimize(&cost, &allowed)?;
        let mut witness = vec![Rational::zero(); self.num_vars];
        for (row, &b) in tab.rows.iter().zip(&tab.basis) {
            if b < self.num_vars {
                witness[b] = row[width].clone();
            }
        }
        Ok(LpSolution { optimum, witness })
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    /// Runs primal simplex from the current basis. Returns the optimal
    /// objective value.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> Result<Rational> {
        let width = self.width;
        // Reduced costs: c_j - sum_i c_B(i) a_ij.
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(row.iter()) {
                if !a.is_zero() {
                    *o -= &(cb * a);
                }
            }
        }
        // Bland: lowest-index improving column.
        while let Some(pc) = (0..width).find(|&j| allowed[j] && obj[j].is_positive()) {
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                let a = &row[pc];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[width] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((pr, _)) = best else {
                return Err(Error::Unbounded);
            };
            self.pivot(pr, pc, Some(&mut obj));
        }
        // The rhs entry of the reduced-cost row holds -(objective value).
        Ok(-&obj[width])
    }

    fn pivot(&mut self, pr: usize, pc: usize, obj: Option<&mut Vec<Rational>>) {
        let piv = self.rows[pr][pc].clone();
        if !piv.is_one() {
            for x in self.rows[pr].iter_mut() {
                if !x.is_zero() {
                    *x = &*x / &piv;
                }
            }
        }
        let pivot_row: Vec<(usize, Rational)> = self.rows[pr]
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| (k, x.clone()))
            .collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[pc].clone();
            if f.is_zero() {
                return;
            }
            for (k, v) in &pivot_row {
                row[*k] -= &(&f * v);
            }
        };
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r != pr {
                eliminate(row);
            }
        }
        if let Some(obj) = obj {
            eliminate(obj);
        }
        self.basis[pr] = pc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let lp = LinearProgram::new(2)
            .maximize(qs(&[3, 5]))
            .constrain(qs(&[1, 0]), Relation::Le, q(4))
            .constrain(qs(&[0, 2]), Relation::Le, q(12))
            .constrain(qs(&[3, 2]), Relation::Le, q(18));
        let sol = lp_optimize(&lp).unwrap();
        assert_eq!(sol.optimum, q(36));
        assert_eq!(sol.witness, qs(&[2, 6]));
    }

    #[test]
    fn simplex_face_maximum() {
        let lp = LinearProgram::new(3).maximize(qs(&[1, 0, 0])).constrain(
            qs(&[1, 1, 1]),
            Relation::Eq,
            q(1),
        );
        assert_eq!(lp.solve().unwrap().optimum, q(1));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram::new(3)
            .maximize(qs(&[1, 0, 0]))
            .constrain(qs(&[1, 1, 1]), Relation::Eq, q(1))
            .constrain(qs(&[1, 0, 0]), Relation::Le, q(-1));
        assert!(matches!(lp.solve(), Err(Error::Infeasible)));
        let lp =
            LinearProgram::new(2)
                .maximize(qs(&[1, 1]))
                .constrain(qs(&[1, -1]), Relation::Le, q(1));
        assert!(matches!(lp.solve(), Err(Error::Unbounded)));
    }

    #[test]
    fn ge_rows_and_negative_rhs() {
        // min x + y (max -x - y) s.t. x + 2y >= 4, -x <= -1 -> x = 1, y = 3/2
        let lp = LinearProgram::new(2)
            .maximize(qs(&[-1, -1]))
            .constrain(qs(&[1, 2]), Relation::Ge, q(4))
            .constrain(qs(&[-1, 0]), Relation::Le, q(-1));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.optimum, Rational::new(-5, 2));
        assert_eq!(sol.witness, vec![q(1), Rational::new(3, 2)]);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let lp = LinearProgram::new(2)
            .maximize(qs(&[1, 2]))
            .constrain(qs(&[1, 1]), Relation::Eq, q(1))
            .constrain(qs(&[2, 2]), Relation::Eq, q(2));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.optimum, q(2));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let lp = LinearProgram::new(4)
            .maximize(vec![
                Rational::new(3, 4),
                q(-150),
                Rational::new(1, 50),
                q(-6),
            ])
            .constrain(
                vec![Rational::new(1, 4), q(-60), Rational::new(-1, 25), q(9)],
                Relation::Le,
                q(0),
            )
            .constrain(
                vec![Rational::new(1, 2), q(-90), Rational::new(-1, 50), q(3)],
                Relation::Le,
                q(0),
            )
            .constrain(qs(&[0, 0, 1, 0]), Relation::Le, q(1));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.optimum, Rational::new(1, 20));
    }
}
