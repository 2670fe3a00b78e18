//! Exact optimal strategies of symmetric zero-sum games.
//!
//! A symmetric game has value 0, and its optimal strategies are exactly
//! the polytope `P(G) = {p >= 0, sum(p) = 1, G p <= 0}`. Every question
//! here is answered by exact linear programs over that polytope: one
//! vertex, coordinate bounds, and a slack program for strict positivity.

mod bimatrix;
mod hint;
pub mod simplex;

pub use bimatrix::{
    row_has_full_support_optimum, solve_bimatrix_zero_sum, BimatrixSolution, BimatrixZeroSum,
};
pub use simplex::{lp_optimize, Constraint, FeasibleRegion, LinearProgram, LpSolution, Relation};

use serde::{Deserialize, Serialize};

use crate::action_set::ActionSet;
use crate::error::{Error, Result};
use crate::game::{SkewGame, Strategy};
use crate::linalg;
use crate::rational::Rational;

/// One optimal strategy together with facts about the whole optimal set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub strategy: Strategy,
    /// Union of the supports of all optimal strategies.
    pub maximal_support: ActionSet,
    pub unique: bool,
    /// Whether the returned strategy is quasi-strict.
    pub quasi_strict: bool,
    pub value: Rational,
}

/// The optimal set `P(G)` of a game, with a phase-one basis kept for
/// repeated optimization.
#[derive(Clone, Debug)]
pub struct OptimalSet<'a> {
    game: &'a SkewGame,
    region: FeasibleRegion,
}

fn constraints(g: &SkewGame, allowed: ActionSet, with_slack: bool) -> (usize, Vec<Constraint>) {
    // Variables: p_i for i in `allowed` (others fixed at 0), then t if `with_slack`.
    let idx: Vec<usize> = allowed.indices().collect();
    let nv = idx.len() + usize::from(with_slack);
    let mut cons = Vec::with_capacity(g.n() + 1 + idx.len());
    for i in 0..g.n() {
        let mut coeffs: Vec<Rational> = idx.iter().map(|&j| g.get(i, j).clone()).collect();
        if with_slack {
            coeffs.push(Rational::zero());
        }
        cons.push(Constraint {
            coeffs,
            relation: Relation::Le,
            rhs: Rational::zero(),
        });
    }
    let mut ones = vec![Rational::one(); idx.len()];
    if with_slack {
        ones.push(Rational::zero());
        // p_i - t >= 0
        for k in 0..idx.len() {
            let mut coeffs = vec![Rational::zero(); nv];
            coeffs[k] = Rational::one();
            coeffs[nv - 1] = -Rational::one();
            cons.push(Constraint {
                coeffs,
                relation: Relation::Ge,
                rhs: Rational::zero(),
            });
        }
    }
    cons.push(Constraint {
        coeffs: ones,
        relation: Relation::Eq,
        rhs: Rational::one(),
    });
    (nv, cons)
}

impl<'a> OptimalSet<'a> {
    pub fn new(game: &'a SkewGame) -> Self {
        let (nv, cons) = constraints(game, game.universe(), false);
        // P(G) is never empty: the minimax theorem gives value 0.
        let region =
            FeasibleRegion::new(nv, &cons).expect("optimal set of a symmetric game is nonempty");
        OptimalSet { game, region }
    }

    /// The first vertex of `P(G)` reached by phase one.
    pub fn vertex(&self) -> Strategy {
        Strategy::new(self.region.vertex()).expect("vertex of P(G) is a probability vector")
    }

    fn optimize(&self, objective: Vec<Rational>) -> Rational {
        self.region
            .maximize(&objective)
            .expect("P(G) is nonempty and bounded")
            .optimum
    }

    fn unit(&self, index: usize, sign: i64) -> Vec<Rational> {
        let mut c = vec![Rational::zero(); self.game.n()];
        c[index] = Rational::from(sign);
        c
    }

    fn check(&self, action: usize) -> Result<usize> {
        if !(1..=self.game.n()).contains(&action) {
            return Err(Error::OutOfRange {
                action,
                n: self.game.n(),
            });
        }
        Ok(action - 1)
    }

    pub fn max_coordinate(&self, action: usize) -> Result<Rational> {
        let i = self.check(action)?;
        Ok(self.optimize(self.unit(i, 1)))
    }

    pub fn min_coordinate(&self, action: usize) -> Result<Rational> {
        let i = self.check(action)?;
        Ok(-self.optimize(self.unit(i, -1)))
    }

    /// `min (G p)_i` over `P(G)`.
    pub fn min_payoff(&self, action: usize) -> Result<Rational> {
        let i = self.check(action)?;
        Ok(-self.optimize(self.game.row(i).iter().map(|x| -x).collect()))
    }

    pub fn maximal_support(&self) -> ActionSet {
        ActionSet::from_actions(
            (1..=self.game.n()).filter(|&a| self.max_coordinate(a).unwrap().is_positive()),
        )
    }

    pub fn equalized_actions(&self) -> ActionSet {
        ActionSet::from_actions(
            (1..=self.game.n()).filter(|&a| self.min_payoff(a).unwrap().is_zero()),
        )
    }

    pub fn is_singleton(&self) -> bool {
        (1..=self.game.n())
            .all(|a| self.max_coordinate(a).unwrap() == self.min_coordinate(a).unwrap())
    }
}

/// A vertex of the optimal set. Which vertex is returned when the optimum is
/// not unique is unspecified.
pub fn some_optimal(g: &SkewGame) -> Strategy {
    OptimalSet::new(g).vertex()
}

pub fn max_coordinate(g: &SkewGame, action: usize) -> Result<Rational> {
    OptimalSet::new(g).max_coordinate(action)
}

pub fn min_coordinate(g: &SkewGame, action: usize) -> Result<Rational> {
    OptimalSet::new(g).min_coordinate(action)
}

/// `{i : max over P(G) of p_i > 0}`.
pub fn maximal_support(g: &SkewGame) -> ActionSet {
    OptimalSet::new(g).maximal_support()
}

/// Actions earning exactly the value 0 against every optimal strategy.
pub fn equalized_actions(g: &SkewGame) -> ActionSet {
    OptimalSet::new(g).equalized_actions()
}

/// True iff every coordinate is pinned on `P(G)`, i.e. the optimum is unique.
pub fn is_unique(g: &SkewGame) -> bool {
    OptimalSet::new(g).is_singleton()
}

/// True iff every action outside the support of `p` earns strictly less
/// than 0 against `p`. Fails with `NotOptimal` unless `p` is in `P(G)`.
pub fn is_quasi_strict(g: &SkewGame, p: &Strategy) -> Result<bool> {
    let gp = g.apply(p)?;
    if gp.iter().any(Rational::is_positive) {
        return Err(Error::NotOptimal);
    }
    let sup = p.support();
    Ok(gp
        .iter()
        .enumerate()
        .all(|(i, x)| sup.contains_index(i) || x.is_negative()))
}

/// Solves `g` and classifies its optimal set.
///
/// A floating-point solve proposes a support, which is accepted only if
/// [`certify_unique_support`] confirms it exactly; otherwise the game goes
/// through [`analyze_exact`]. Both routes return the same report whenever
/// the optimum is unique.
pub fn analyze(g: &SkewGame) -> SolveReport {
    if let Some((s, p)) =
        hint::support_hint(g).and_then(|s| certify_unique_support(g, s).map(|p| (s, p)))
    {
        return SolveReport {
            strategy: p,
            maximal_support: s,
            unique: true,
            quasi_strict: true,
            value: Rational::zero(),
        };
    }
    analyze_exact(g)
}

/// [`analyze`] using only the exact simplex.
///
/// Uniqueness is decided from the phase-one vertex `p` with support `S`:
/// the optimum is unique iff `p` is quasi-strict and `G_S` has rank
/// `|S| - 1`. If `p` is quasi-strict, every optimal `q` satisfies
/// `q^T G p = 0`, which forces `q` to vanish off `S` and `G_S q_S = 0`, so
/// `q_S` lies in the kernel spanned by `p_S`. If the kernel is larger, or
/// `p` is not quasi-strict, a second optimum exists. When the optimum is
/// not unique the maximal support is computed by coordinate programs.
pub fn analyze_exact(g: &SkewGame) -> SolveReport {
    let set = OptimalSet::new(g);
    let p = set.vertex();
    let quasi_strict = is_quasi_strict(g, &p).expect("vertex is optimal");
    let s = p.support();
    let unique = quasi_strict && {
        let sub = g.restrict(s).expect("support of a strategy is nonempty");
        linalg::rank(&sub) + 1 == s.len()
    };
    let maximal_support = if unique { s } else { set.maximal_support() };
    SolveReport {
        strategy: p,
        maximal_support,
        unique,
        quasi_strict,
        value: Rational::zero(),
    }
}

/// Returns the unique optimal strategy of `g` if it exists and has support
/// exactly `s`, and `None` otherwise. Exact.
///
/// Checks that `G_S` has rank `|S| - 1` with a kernel vector of constant
/// sign and no zero entry, and that the resulting strategy earns strictly
/// negative payoff on every action outside `S`. These conditions are
/// equivalent to `P(G) = {p}` with `support(p) = S`. Even `S` is rejected
/// outright, since a skew-symmetric matrix has even rank.
pub fn certify_unique_support(g: &SkewGame, s: ActionSet) -> Option<Strategy> {
    if s.is_empty() || s.len().is_multiple_of(2) || s.check_within(g.n()).is_err() {
        return None;
    }
    let sub = g.restrict(s).ok()?;
    let w = linalg::kernel_vector(&sub).ok()?;
    let sign = w[0].signum();
    if sign == 0 || w.iter().any(|x| x.signum() != sign) {
        return None;
    }
    let total: Rational = w.iter().sum();
    let mut p = vec![Rational::zero(); g.n()];
    for (i, x) in s.indices().zip(w.iter()) {
        p[i] = x / &total;
    }
    let gp = g.apply(&p).ok()?;
    if (0..g.n()).any(|i| !s.contains_index(i) && !gp[i].is_negative()) {
        return None;
    }
    Strategy::new(p).ok()
}

/// Whether some optimal strategy has support exactly `s`.
///
/// Maximizes a common lower bound `t` on `p_i` for `i` in `s` over the
/// optimal strategies vanishing off `s`; the answer is yes iff `t > 0`.
pub fn has_optimal_with_support(g: &SkewGame, s: ActionSet) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    s.check_within(g.n())?;
    let (nv, cons) = constraints(g, s, true);
    let mut objective = vec![Rational::zero(); nv];
    objective[nv - 1] = Rational::one();
    match FeasibleRegion::new(nv, &cons) {
        Ok(region) => Ok(region.maximize(&objective)?.optimum.is_positive()),
        Err(Error::Infeasible) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Whether the subgame on `s` has a totally mixed optimal strategy.
pub fn subgame_totally_mixed(g: &SkewGame, s: ActionSet) -> Result<bool> {
    let sub = g.restrict(s)?;
    has_optimal_with_support(&sub, sub.universe())
}

/// Returns the supports `{S : some optimal strategy has support S}` by
/// querying every nonempty subset. Exponential; intended for small games.
pub fn achievable_supports(g: &SkewGame) -> Vec<ActionSet> {
    ActionSet::all_subsets(g.n())
        .skip(1)
        .filter(|&s| has_optimal_with_support(g, s).expect("nonempty subset in range"))
        .collect()
}
