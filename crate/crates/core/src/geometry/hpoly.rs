use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, QMatrix, QVector, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    /// `a · x <= b`
    Le,
    /// `a · x = b`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub coeffs: QVector,
    pub rhs: Rational,
    pub kind: ConstraintKind,
}

impl Constraint {
    pub fn le(coeffs: QVector, rhs: Rational) -> Self {
        Self {
            coeffs,
            rhs,
            kind: ConstraintKind::Le,
        }
    }

    pub fn eq(coeffs: QVector, rhs: Rational) -> Self {
        Self {
            coeffs,
            rhs,
            kind: ConstraintKind::Eq,
        }
    }

    /// `b - a · x`; nonnegative when an inequality holds.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.rhs - dot(&self.coeffs, x)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let s = self.slack(x);
        match self.kind {
            ConstraintKind::Le => !s.is_negative(),
            ConstraintKind::Eq => s.is_zero(),
        }
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.slack(x).is_zero()
    }
}

/// `{ x : A x <= b, A_eq x = b_eq }`, with equality rows flagged per row.
/// Zero rows describe the whole space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPolyhedron {
    dim: usize,
    rows: Vec<Constraint>,
}

impl HPolyhedron {
    pub fn whole_space(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn new(dim: usize, rows: Vec<Constraint>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.coeffs.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.coeffs.len(),
            });
        }
        Ok(Self { dim, rows })
    }

    /// `{ x : A x <= b }`.
    pub fn from_inequalities(a: &QMatrix, b: &[Rational]) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: b.len(),
            });
        }
        let rows = a
            .rows_iter()
            .zip(b)
            .map(|(r, bi)| Constraint::le(r.to_vec(), bi.clone()))
            .collect();
        Ok(Self {
            dim: a.ncols(),
            rows,
        })
    }

    /// Axis-aligned box `lo <= x <= hi`.
    pub fn from_box(bounds: &[(Rational, Rational)]) -> Self {
        let dim = bounds.len();
        let mut rows = Vec::with_capacity(2 * dim);
        for (k, (lo, hi)) in bounds.iter().enumerate() {
            let mut up = crate::rational::zeros(dim);
            up[k] = Rational::from_integer(1.into());
            let down: QVector = up.iter().map(|x| -x).collect();
            rows.push(Constraint::le(down, -lo));
            rows.push(Constraint::le(up, hi.clone()));
        }
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: Constraint) -> Result<()> {
        if row.coeffs.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: row.coeffs.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &Constraint> {
        self.rows.iter().filter(|r| r.kind == ConstraintKind::Le)
    }

    pub fn equalities(&self) -> impl Iterator<Item = &Constraint> {
        self.rows.iter().filter(|r| r.kind == ConstraintKind::Eq)
    }

    /// Conjunction of both systems.
    pub fn intersect(&self, other: &HPolyhedron) -> Result<HPolyhedron> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self {
            dim: self.dim,
            rows,
        })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.rows.iter().all(|r| r.is_satisfied(x))
    }

    /// Restriction to the affine slice where the coordinates in `fixed` take
    /// the given values. The returned system lives on the remaining
    /// coordinates, in ascending order.
    pub fn slice(&self, fixed: &[(usize, Rational)]) -> HPolyhedron {
        let is_fixed = |k: usize| fixed.iter().any(|(j, _)| *j == k);
        let free: Vec<usize> = (0..self.dim).filter(|&k| !is_fixed(k)).collect();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let shift = fixed
                    .iter()
                    .fold(Rational::zero(), |acc, (j, v)| acc + &r.coeffs[*j] * v);
                Constraint {
                    coeffs: free.iter().map(|&k| r.coeffs[k].clone()).collect(),
                    rhs: &r.rhs - shift,
                    kind: r.kind,
                }
            })
            .collect();
        HPolyhedron {
            dim: free.len(),
            rows,
        }
    }

    /// Drops rows whose coefficients are all zero. Such rows are either
    /// trivially satisfied or make the system infeasible, so the caller must
    /// know a feasible point.
    pub fn retain_nontrivial(&mut self) {
        self.rows.retain(|r| r.coeffs.iter().any(|c| !c.is_zero()));
    }

    /// The same system over `R^dim`, with local coordinate `k` placed at
    /// `coords[k]` and every other coordinate unconstrained.
    pub fn embed(&self, coords: &[usize], dim: usize) -> Result<HPolyhedron> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: coords.len(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut coeffs = crate::rational::zeros(dim);
                for (c, &k) in r.coeffs.iter().zip(coords) {
                    coeffs[k] = c.clone();
                }
                Constraint {
                    coeffs,
                    rhs: r.rhs.clone(),
                    kind: r.kind,
                }
            })
            .collect();
        Ok(HPolyhedron { dim, rows })
    }

    /// Splits into inequality matrix/rhs and equality matrix/rhs.
    pub fn to_matrices(&self) -> (QMatrix, QVector, QMatrix, QVector) {
        let split = |kind| {
            let rows: Vec<&Constraint> = self.rows.iter().filter(|r| r.kind == kind).collect();
            let a = QMatrix::from_rows(rows.iter().map(|r| r.coeffs.clone()).collect(), self.dim)
                .expect("row width checked at construction");
            let b = rows.iter().map(|r| r.rhs.clone()).collect();
            (a, b)
        };
        let (a, b) = split(ConstraintKind::Le);
        let (ae, be) = split(ConstraintKind::Eq);
        (a, b, ae, be)
    }
}
