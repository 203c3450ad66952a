use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{Constraint, HPolyhedron};
use crate::rational::{QMatrix, QVector, Rational};

use super::simplex::{solve_lp, LpProblem};

/// Outcome of a Pareto-efficiency test under the componentwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfficiencyVerdict {
    pub efficient: bool,
    /// Feasible point whose image is componentwise no larger than the
    /// candidate's and strictly smaller in at least one component.
    pub dominating_point: Option<QVector>,
}

/// Decides whether `candidate` minimizes `objective · x` over `feasible`
/// in the `R^m_+` order.
///
/// Solves `max sum(s)` subject to `G x + s = G x0`, `s >= 0`, `x` feasible;
/// the candidate is efficient exactly when the optimum is zero.
pub fn efficiency_test(
    candidate: &[Rational],
    objective: &QMatrix,
    feasible: &HPolyhedron,
) -> Result<EfficiencyVerdict> {
    let n = feasible.dim();
    if candidate.len() != n || objective.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if candidate.len() != n {
                candidate.len()
            } else {
                objective.ncols()
            },
        });
    }
    if !feasible.contains(candidate) {
        return Err(Error::InfeasibleCandidate);
    }
    let pinned = pinned_coordinates(objective);
    let dominating = if pinned.is_empty() {
        dominating_point(candidate, objective, feasible)?
    } else {
        // Any dominating point agrees with the candidate on pinned
        // coordinates, so the test runs on that slice.
        let free: Vec<usize> = (0..n).filter(|k| !pinned.contains(k)).collect();
        let fixed: Vec<(usize, Rational)> =
            pinned.iter().map(|&k| (k, candidate[k].clone())).collect();
        let rows: Vec<QVector> = objective
            .rows_iter()
            .filter(|r| free.iter().any(|&k| !r[k].is_zero()))
            .map(|r| free.iter().map(|&k| r[k].clone()).collect())
            .collect();
        let mut slice = feasible.slice(&fixed);
        slice.retain_nontrivial();
        let sub: QVector = free.iter().map(|&k| candidate[k].clone()).collect();
        dominating_point(&sub, &QMatrix::from_rows(rows, free.len())?, &slice)?.map(|y| {
            let mut x = candidate.to_vec();
            for (&k, v) in free.iter().zip(y) {
                x[k] = v;
            }
            x
        })
    };
    Ok(EfficiencyVerdict {
        efficient: dominating.is_none(),
        dominating_point: dominating,
    })
}

/// Coordinates `k` such that `G` has rows that are positive multiples of
/// both `e_k` and `-e_k`.
fn pinned_coordinates(g: &QMatrix) -> Vec<usize> {
    let support = |r: &[Rational]| -> Option<(usize, bool)> {
        let mut nz = r.iter().enumerate().filter(|(_, v)| !v.is_zero());
        let (k, v) = nz.next()?;
        nz.next().is_none().then(|| (k, v.is_positive()))
    };
    let signs: Vec<(usize, bool)> = g.rows_iter().filter_map(support).collect();
    let mut out: Vec<usize> = signs
        .iter()
        .filter(|(k, pos)| *pos && signs.contains(&(*k, false)))
        .map(|(k, _)| *k)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// A feasible point dominating `candidate`, found by solving
/// `max sum(s)` subject to `G x + s = G x0`, `s >= 0`, `x` feasible.
fn dominating_point(
    candidate: &[Rational],
    objective: &QMatrix,
    feasible: &HPolyhedron,
) -> Result<Option<QVector>> {
    let n = feasible.dim();
    let m = objective.nrows();
    if m == 0 || n == 0 {
        return Ok(None);
    }
    let image = objective.mul_vec(candidate);
    let mut rows = Vec::with_capacity(feasible.len() + 2 * m);
    for r in feasible.rows() {
        let mut coeffs = r.coeffs.clone();
        coeffs.extend(std::iter::repeat_n(Rational::zero(), m));
        rows.push(Constraint {
            coeffs,
            rhs: r.rhs.clone(),
            kind: r.kind,
        });
    }
    for (k, target) in image.iter().enumerate() {
        let mut coeffs = objective.row(k).to_vec();
        coeffs.extend((0..m).map(|j| {
            if j == k {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        rows.push(Constraint::eq(coeffs, target.clone()));
    }
    for k in 0..m {
        let mut coeffs = vec![Rational::zero(); n + m];
        coeffs[n + k] = -Rational::one();
        rows.push(Constraint::le(coeffs, Rational::zero()));
    }
    let mut cost = vec![Rational::zero(); n];
    cost.extend(std::iter::repeat_n(-Rational::one(), m));
    let lp = LpProblem::new(cost, HPolyhedron::new(n + m, rows)?)?;
    let sol = solve_lp(&lp)?;
    // Feasible (the candidate itself) and bounded (slacks are capped by the
    // image of a bounded set), so the optimum exists.
    Ok((sol.is_optimal() && sol.value.is_negative()).then(|| sol.point[..n].to_vec()))
}
