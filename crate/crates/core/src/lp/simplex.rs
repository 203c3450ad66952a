//! Two-phase primal simplex on a dense exact tableau with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{ConstraintKind, HPolyhedron};
use crate::rational::{dot, QVector, Rational};

/// `min objective · x` over `constraints`; variables are free.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub objective: QVector,
    pub constraints: HPolyhedron,
}

impl LpProblem {
    pub fn new(objective: QVector, constraints: HPolyhedron) -> Result<Self> {
        if objective.len() != constraints.dim() {
            return Err(Error::DimensionMismatch {
                expected: constraints.dim(),
                found: objective.len(),
            });
        }
        Ok(Self {
            objective,
            constraints,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal value; zero unless `status` is `Optimal`.
    pub value: Rational,
    /// Optimal vertex; empty unless `status` is `Optimal`.
    pub point: QVector,
    /// Constraint rows active at `point`, ascending.
    pub basis: Vec<usize>,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        Self {
            status,
            value: Rational::zero(),
            point: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    /// rows x (cols + 1); the last entry of each row is the rhs.
    t: Vec<QVector>,
    basis: Vec<usize>,
    cols: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.t[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, costs: &[Rational], c: usize) -> Rational {
        let mut d = costs[c].clone();
        for (row, &b) in self.t.iter().zip(&self.basis) {
            if !costs[b].is_zero() && !row[c].is_zero() {
                d -= &costs[b] * &row[c];
            }
        }
        d
    }

    fn objective(&self, costs: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (r, &b)| {
                acc + &costs[b] * self.rhs(r)
            })
    }

    /// Minimizes `costs` over columns `< allowed`, starting from the current
    /// feasible basis.
    fn optimize(&mut self, costs: &[Rational], allowed: usize) -> Outcome {
        loop {
            let entering = (0..allowed)
                .filter(|c| !self.basis.contains(c))
                .find(|&c| self.reduced_cost(costs, c).is_negative());
            let Some(c) = entering else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return Outcome::Unbounded,
            }
        }
    }
}

/// Exact LP optimum with the active rows at the optimal vertex.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    let h = &p.constraints;
    let n = h.dim();
    if p.objective.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.objective.len(),
        });
    }
    let rows = h.rows();
    let m = rows.len();
    let slack_rows: Vec<usize> = (0..m)
        .filter(|&k| rows[k].kind == ConstraintKind::Le)
        .collect();
    let ns = slack_rows.len();
    // Columns: x+ (n), x- (n), slacks (ns), artificials (m).
    let art0 = 2 * n + ns;
    let cols = art0 + m;

    let mut t = Vec::with_capacity(m);
    for (k, row) in rows.iter().enumerate() {
        let mut r = vec![Rational::zero(); cols + 1];
        for j in 0..n {
            r[j] = row.coeffs[j].clone();
            r[n + j] = -&row.coeffs[j];
        }
        if let Some(s) = slack_rows.iter().position(|&s| s == k) {
            r[2 * n + s] = Rational::one();
        }
        r[cols] = row.rhs.clone();
        if row.rhs.is_negative() {
            r.iter_mut().for_each(|x| *x = -&*x);
        }
        r[art0 + k] = Rational::one();
        t.push(r);
    }
    let mut tab = Tableau {
        t,
        basis: (art0..cols).collect(),
        cols,
    };

    let mut phase1 = vec![Rational::zero(); cols];
    phase1[art0..].iter_mut().for_each(|c| *c = Rational::one());
    tab.optimize(&phase1, cols);
    if tab.objective(&phase1).is_positive() {
        return Ok(LpSolution::without_point(LpStatus::Infeasible));
    }

    // Drive zero-level artificials out; rows that cannot pivot are redundant.
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= art0 {
            if let Some(c) = (0..art0).find(|&c| !tab.t[r][c].is_zero()) {
                tab.pivot(r, c);
            } else {
                tab.t.remove(r);
                tab.basis.remove(r);
                continue;
            }
        }
        r += 1;
    }

    let mut phase2 = vec![Rational::zero(); cols];
    for j in 0..n {
        phase2[j] = p.objective[j].clone();
        phase2[n + j] = -&p.objective[j];
    }
    if let Outcome::Unbounded = tab.optimize(&phase2, art0) {
        return Ok(LpSolution::without_point(LpStatus::Unbounded));
    }

    let mut z = vec![Rational::zero(); cols];
    for (r, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.rhs(r).clone();
    }
    let point: QVector = (0..n).map(|j| &z[j] - &z[n + j]).collect();
    let value = dot(&p.objective, &point);
    let basis = (0..m).filter(|&k| rows[k].is_tight(&point)).collect();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value,
        point,
        basis,
    })
}

/// `true` when the system has a solution.
pub fn is_feasible(h: &HPolyhedron) -> Result<bool> {
    let p = LpProblem::new(vec![Rational::zero(); h.dim()], h.clone())?;
    Ok(solve_lp(&p)?.is_optimal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Constraint;
    use crate::rational::{frac, int, to_qvector};

    #[test]
    fn minimize_on_unit_interval() {
        let h = HPolyhedron::from_box(&[(int(0), int(1))]);
        let s = solve_lp(&LpProblem::new(to_qvector(&[1]), h).unwrap()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, int(0));
        assert_eq!(s.point, to_qvector(&[0]));
        assert_eq!(s.basis, vec![0]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let h = HPolyhedron::new(
            1,
            vec![
                Constraint::le(to_qvector(&[1]), int(0)),
                Constraint::le(to_qvector(&[-1]), int(-1)),
            ],
        )
        .unwrap();
        let s = solve_lp(&LpProblem::new(to_qvector(&[1]), h).unwrap()).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);

        let h = HPolyhedron::new(1, vec![Constraint::le(to_qvector(&[1]), int(0))]).unwrap();
        let s = solve_lp(&LpProblem::new(to_qvector(&[1]), h).unwrap()).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_negative_rhs() {
        // min x + y  s.t. x + 2y = 3, x >= 1/2, y >= 0
        let h = HPolyhedron::new(
            2,
            vec![
                Constraint::eq(to_qvector(&[1, 2]), int(3)),
                Constraint::le(to_qvector(&[-1, 0]), frac(-1, 2)),
                Constraint::le(to_qvector(&[0, -1]), int(0)),
            ],
        )
        .unwrap();
        let s = solve_lp(&LpProblem::new(to_qvector(&[1, 1]), h).unwrap()).unwrap();
        assert_eq!(s.point, vec![frac(1, 2), frac(5, 4)]);
        assert_eq!(s.value, frac(7, 4));
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let h = HPolyhedron::new(
            2,
            vec![
                Constraint::eq(to_qvector(&[1, 1]), int(1)),
                Constraint::eq(to_qvector(&[2, 2]), int(2)),
                Constraint::le(to_qvector(&[-1, 0]), int(0)),
                Constraint::le(to_qvector(&[0, -1]), int(0)),
            ],
        )
        .unwrap();
        let s = solve_lp(&LpProblem::new(to_qvector(&[-1, 0]), h).unwrap()).unwrap();
        assert_eq!(s.point, to_qvector(&[1, 0]));
    }

    #[test]
    fn objective_width_checked() {
        let h = HPolyhedron::from_box(&[(int(0), int(1))]);
        assert!(LpProblem::new(to_qvector(&[1, 1]), h).is_err());
    }
}
