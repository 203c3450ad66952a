use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, make_primitive, rank, rref, QVector, Rational};

use super::dd::{cone_generators, dd_hrep_to_vrep, is_vertex_of, VPolytope};
use super::hpoly::{Constraint, HPolyhedron};

/// A nonempty bounded polyhedron carrying both representations.
///
/// The H-representation is canonical: equalities in reduced row echelon
/// form, one primitive-integer inequality per facet reduced modulo the
/// equalities, rows sorted. The vertex list is sorted lexicographically and
/// serves as the identity of the polytope for equality, ordering and hashing.
#[derive(Clone)]
pub struct Polytope {
    hrep: HPolyhedron,
    vertices: Vec<QVector>,
    dim: usize,
}

impl Polytope {
    /// Convex hull of a nonempty point list.
    pub fn from_points(points: &[QVector]) -> Result<Polytope> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let n = first.len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();

        // Facets of co(pts) are the extreme rays of the cone of (beta, alpha)
        // with beta + alpha · p >= 0 at every point; its lines are equalities.
        let homog: Vec<QVector> = pts
            .iter()
            .map(|p| {
                let mut h = Vec::with_capacity(n + 1);
                h.push(Rational::from_integer(1.into()));
                h.extend(p.iter().cloned());
                h
            })
            .collect();
        let gens = cone_generators(n + 1, &homog);

        // alpha · x = -beta
        let eq_rows: Vec<QVector> = gens
            .lines
            .iter()
            .map(|l| {
                let mut r: QVector = l[1..].to_vec();
                r.push(-&l[0]);
                r
            })
            .collect();
        let (eqs, pivots) = rref(&eq_rows, n);

        let mut ineqs: Vec<QVector> = Vec::new();
        for ray in &gens.rays {
            // -alpha · x <= beta
            let mut r: QVector = ray[1..].iter().map(|a| -a).collect();
            r.push(ray[0].clone());
            for (e, &pc) in eqs.iter().zip(&pivots) {
                let f = r[pc].clone();
                if !f.is_zero() {
                    for (x, y) in r.iter_mut().zip(e) {
                        *x = &*x - &f * y;
                    }
                }
            }
            if r[..n].iter().all(Zero::is_zero) {
                continue;
            }
            make_primitive(&mut r);
            ineqs.push(r);
        }
        ineqs.sort();
        ineqs.dedup();

        let mut rows = Vec::with_capacity(eqs.len() + ineqs.len());
        for mut e in eqs {
            make_primitive(&mut e);
            let rhs = e.pop().expect("augmented row");
            rows.push(Constraint::eq(e, rhs));
        }
        for mut r in ineqs {
            let rhs = r.pop().expect("augmented row");
            rows.push(Constraint::le(r, rhs));
        }
        let hrep = HPolyhedron::new(n, rows)?;
        let dim = n - pivots.len();

        let vertices: Vec<QVector> = if dim == 0 {
            pts.truncate(1);
            pts
        } else {
            pts.into_iter().filter(|p| is_vertex_of(&hrep, p)).collect()
        };
        Ok(Polytope {
            hrep,
            vertices,
            dim,
        })
    }

    /// Canonical polytope for a bounded H-polyhedron; `None` when empty.
    pub fn from_hrep(h: &HPolyhedron) -> Result<Option<Polytope>> {
        let v = dd_hrep_to_vrep(h)?;
        if v.is_empty() {
            return Ok(None);
        }
        Polytope::from_points(&v.vertices).map(Some)
    }

    pub fn hrep(&self) -> &HPolyhedron {
        &self.hrep
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn vrep(&self) -> VPolytope {
        VPolytope {
            dim: self.ambient_dim(),
            vertices: self.vertices.clone(),
        }
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.hrep.dim()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.hrep.contains(x)
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Image under selection of the given coordinates, in the given order.
    pub fn project(&self, coords: &[usize]) -> Polytope {
        let pts: Vec<QVector> = self
            .vertices
            .iter()
            .map(|v| coords.iter().map(|&k| v[k].clone()).collect())
            .collect();
        Polytope::from_points(&pts).expect("projection of a nonempty polytope")
    }

    /// `true` when the stored representations agree: every vertex satisfies
    /// the H-rep and the H-rep has no vertex outside the list.
    pub fn is_consistent(&self) -> bool {
        self.vertices.iter().all(|v| self.hrep.contains(v))
            && dd_hrep_to_vrep(&self.hrep)
                .map(|v| v.vertices == self.vertices)
                .unwrap_or(false)
    }
}

fn check_dims(p: &Polytope, q: &Polytope) -> Result<()> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: q.ambient_dim(),
        });
    }
    Ok(())
}

/// Minimal H-representation of the convex hull of `points`.
pub fn hull_vrep_to_hrep(points: &[QVector]) -> Result<Polytope> {
    Polytope::from_points(points)
}

/// `p ∩ q`, or `None` when the intersection is empty.
pub fn intersect(p: &Polytope, q: &Polytope) -> Result<Option<Polytope>> {
    check_dims(p, q)?;
    if q.vertices.iter().all(|v| p.contains(v)) {
        return Ok(Some(q.clone()));
    }
    if p.vertices.iter().all(|v| q.contains(v)) {
        return Ok(Some(p.clone()));
    }
    Polytope::from_hrep(&p.hrep.intersect(&q.hrep)?)
}

/// Barycenter of a nonempty point list.
pub fn barycenter(points: &[QVector]) -> Result<QVector> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let count = Rational::from_integer(points.len().into());
    let mut sum = first.clone();
    for p in &points[1..] {
        for (s, x) in sum.iter_mut().zip(p) {
            *s += x;
        }
    }
    Ok(sum.into_iter().map(|s| s / &count).collect())
}

/// Barycenter of the extreme points, a relative interior point.
pub fn relative_interior_point(p: &Polytope) -> QVector {
    barycenter(&p.vertices).expect("polytopes are nonempty")
}

/// `p ⊆ q`, decided vertexwise against `q`'s H-rep.
pub fn is_subset(p: &Polytope, q: &Polytope) -> Result<bool> {
    check_dims(p, q)?;
    Ok(p.vertices.iter().all(|v| q.contains(v)))
}

/// Drops every part contained in another (keeping one copy of duplicates)
/// and sorts the survivors by vertex list.
pub fn irredundant_union(parts: Vec<Polytope>) -> Vec<Polytope> {
    let mut parts = parts;
    parts.sort();
    parts.dedup();
    // Larger parts first so containment only needs checking against keepers.
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by(|&a, &b| {
        parts[b]
            .dim
            .cmp(&parts[a].dim)
            .then(parts[b].vertices.len().cmp(&parts[a].vertices.len()))
            .then(a.cmp(&b))
    });
    let mut keep: Vec<usize> = Vec::new();
    for i in order {
        let covered = keep.iter().any(|&k| {
            parts[i].ambient_dim() == parts[k].ambient_dim()
                && parts[i].vertices.iter().all(|v| parts[k].contains(v))
        });
        if !covered {
            keep.push(i);
        }
    }
    keep.sort();
    keep.into_iter().map(|i| parts[i].clone()).collect()
}

/// Affine dimension of a point set.
pub fn affine_dim(points: &[QVector]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let diffs: Vec<QVector> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        0
    } else {
        rank(&diffs)
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl PartialOrd for Polytope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polytope {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices.cmp(&other.vertices)
    }
}

impl Hash for Polytope {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
    }
}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| {
                let c: Vec<String> = v.iter().map(format_rational).collect();
                format!("({})", c.join(", "))
            })
            .collect();
        write!(f, "co{{{}}} dim {}", verts.join(", "), self.dim)
    }
}
