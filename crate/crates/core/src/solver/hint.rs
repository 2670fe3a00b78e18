//! Floating-point support hints.
//!
//! A double-precision phase-one simplex on `P(G)` proposes a support; the
//! caller must confirm it exactly (see [`super::certify_unique_support`]).
//! Nothing computed here is ever reported directly.

use crate::action_set::ActionSet;
use crate::game::SkewGame;

const EPS: f64 = 1e-11;
const SUPPORT_EPS: f64 = 1e-9;

/// Support of a floating-point vertex of `P(G)`, or `None` if the float
/// solve did not settle.
pub(crate) fn support_hint(g: &SkewGame) -> Option<ActionSet> {
    let n = g.n();
    // Columns: p (n), slacks (n), artificial (1); last entry is the rhs.
    let width = 2 * n + 1;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut r = vec![0.0; width + 1];
        for (x, v) in r.iter_mut().zip(g.row(i)) {
            *x = v.to_f64();
        }
        r[n + i] = 1.0;
        rows.push(r);
    }
    let mut sum = vec![0.0; width + 1];
    sum[..n].fill(1.0);
    sum[2 * n] = 1.0;
    sum[width] = 1.0;
    rows.push(sum);
    let mut basis: Vec<usize> = (n..=2 * n).collect();

    // Phase one: maximize -a. Reduced costs start as the sum row.
    let mut obj = rows[n].clone();
    obj[2 * n] = 0.0;
    for _ in 0..50 * (n + 1) {
        let Some(pc) = (0..2 * n).find(|&j| obj[j] > EPS) else {
            break;
        };
        let mut best: Option<(usize, f64)> = None;
        for (r, row) in rows.iter().enumerate() {
            if row[pc] > EPS {
                let ratio = row[width] / row[pc];
                if best.is_none_or(|(br, bv)| {
                    ratio < bv - EPS || (ratio <= bv + EPS && basis[r] < basis[br])
                }) {
                    best = Some((r, ratio));
                }
            }
        }
        let (pr, _) = best?;
        let piv = rows[pr][pc];
        rows[pr].iter_mut().for_each(|x| *x /= piv);
        let prow = rows[pr].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pr && row[pc] != 0.0 {
                let f = row[pc];
                row.iter_mut().zip(&prow).for_each(|(x, p)| *x -= f * p);
            }
        }
        let f = obj[pc];
        obj.iter_mut().zip(&prow).for_each(|(x, p)| *x -= f * p);
        basis[pr] = pc;
    }
    let mut p = vec![0.0; n];
    for (row, &b) in rows.iter().zip(&basis) {
        if b < n {
            p[b] = row[width];
        } else if b == 2 * n && row[width] > SUPPORT_EPS {
            return None;
        }
    }
    let total: f64 = p.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return None;
    }
    Some(ActionSet::from_actions(
        (0..n)
            .filter(|&i| p[i] / total > SUPPORT_EPS)
            .map(|i| i + 1),
    ))
}
