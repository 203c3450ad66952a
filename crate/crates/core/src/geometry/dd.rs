//! Double description method on homogenized cones.
//!
//! A cone `{ y : h_k · y >= 0 }` is built up one constraint at a time from
//! the whole space, tracking a lineality basis and the extreme rays of the
//! pointed part. New rays are formed only from adjacent pairs, where two rays
//! are adjacent when the constraints tight at both have rank
//! `dim - lineality - 2`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{axpy, dot, make_primitive, rank, unit, QVector, Rational};

use super::hpoly::{ConstraintKind, HPolyhedron};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn with_capacity(bits: usize) -> Self {
        Self(vec![0; bits.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.0.len() {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
}

#[derive(Clone, Debug)]
struct Ray {
    v: QVector,
    /// Processed constraints tight at this ray.
    zero: BitSet,
}

/// Generators of a polyhedral cone: a lineality basis and one representative
/// per extreme ray of the pointed part.
#[derive(Clone, Debug, Default)]
pub(crate) struct ConeGenerators {
    pub lines: Vec<QVector>,
    pub rays: Vec<QVector>,
}

/// Generators of `{ y in R^dim : h · y >= 0 for every h in constraints }`.
/// Constraints are inserted in the given order.
pub(crate) fn cone_generators(dim: usize, constraints: &[QVector]) -> ConeGenerators {
    let mut lines: Vec<QVector> = (0..dim).map(|k| unit(dim, k)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, h) in constraints.iter().enumerate() {
        debug_assert_eq!(h.len(), dim);
        if let Some(pos) = lines.iter().position(|l| !dot(h, l).is_zero()) {
            let mut pivot = lines.remove(pos);
            let mut hp = dot(h, &pivot);
            if hp.is_negative() {
                pivot.iter_mut().for_each(|x| *x = -&*x);
                hp = -hp;
            }
            for l in lines.iter_mut() {
                let t = -(dot(h, l) / &hp);
                if !t.is_zero() {
                    *l = axpy(l, &t, &pivot);
                    make_primitive(l);
                }
            }
            for r in rays.iter_mut() {
                let t = -(dot(h, &r.v) / &hp);
                if !t.is_zero() {
                    r.v = axpy(&r.v, &t, &pivot);
                    make_primitive(&mut r.v);
                }
                r.zero.insert(k);
            }
            let mut zero = BitSet::with_capacity(constraints.len());
            (0..k).for_each(|j| zero.insert(j));
            make_primitive(&mut pivot);
            rays.push(Ray { v: pivot, zero });
            continue;
        }

        let values: Vec<Rational> = rays.iter().map(|r| dot(h, &r.v)).collect();
        let effective_dim = dim - lines.len();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (r, val) in rays.iter().zip(&values) {
            if val.is_positive() {
                next.push(r.clone());
            } else if val.is_zero() {
                let mut r = r.clone();
                r.zero.insert(k);
                next.push(r);
            }
        }
        for (i, (rp, vp)) in rays.iter().zip(&values).enumerate() {
            if !vp.is_positive() {
                continue;
            }
            for (j, (rn, vn)) in rays.iter().zip(&values).enumerate() {
                if i == j || !vn.is_negative() {
                    continue;
                }
                let common = rp.zero.intersection(&rn.zero);
                if effective_dim < 2 || common.count() + 2 < effective_dim {
                    continue;
                }
                let tight: Vec<QVector> = common.iter().map(|c| constraints[c].clone()).collect();
                if rank(&tight) != effective_dim - 2 {
                    continue;
                }
                // vp * rn - vn * rp has zero product with h and positive weights.
                let mut v: QVector =
                    rn.v.iter()
                        .zip(&rp.v)
                        .map(|(a, b)| vp * a - vn * b)
                        .collect();
                make_primitive(&mut v);
                let mut zero = common;
                zero.insert(k);
                next.push(Ray { v, zero });
            }
        }
        rays = next;
    }

    ConeGenerators {
        lines,
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}

/// Vertex representation of a bounded polyhedron. The vertex list is sorted
/// lexicographically and contains no point in the hull of the others.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VPolytope {
    pub dim: usize,
    pub vertices: Vec<QVector>,
}

impl VPolytope {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Homogenized constraint rows `(b, -a)` over `y = (t, x)`, preceded by `t >= 0`.
pub(crate) fn homogenize(p: &HPolyhedron) -> Vec<QVector> {
    let n = p.dim();
    let mut out = vec![unit(n + 1, 0)];
    for row in p.rows() {
        let mut h = Vec::with_capacity(n + 1);
        h.push(row.rhs.clone());
        h.extend(row.coeffs.iter().map(|a| -a));
        if row.kind == ConstraintKind::Eq {
            out.push(h.iter().map(|x| -x).collect());
        }
        out.push(h);
    }
    out
}

/// Enumerates the vertices of a bounded polyhedron.
///
/// Returns an empty vertex list for an empty polyhedron and
/// [`Error::UnboundedInput`] when a nonempty input contains a ray or line.
pub fn dd_hrep_to_vrep(p: &HPolyhedron) -> Result<VPolytope> {
    let n = p.dim();
    let gens = cone_generators(n + 1, &homogenize(p));
    let mut vertices = Vec::new();
    let mut recession = !gens.lines.is_empty();
    for r in &gens.rays {
        if r[0].is_positive() {
            let t = r[0].clone();
            vertices.push(r[1..].iter().map(|x| x / &t).collect::<QVector>());
        } else {
            recession = true;
        }
    }
    if vertices.is_empty() {
        return Ok(VPolytope {
            dim: n,
            vertices: Vec::new(),
        });
    }
    if recession {
        return Err(Error::UnboundedInput);
    }
    vertices.sort();
    vertices.dedup();
    Ok(VPolytope { dim: n, vertices })
}

/// `true` when the constraints tight at `x` pin it down uniquely.
pub(crate) fn is_vertex_of(p: &HPolyhedron, x: &[Rational]) -> bool {
    let tight: Vec<QVector> = p
        .rows()
        .iter()
        .filter(|r| r.is_tight(x))
        .map(|r| r.coeffs.clone())
        .collect();
    tight.len() >= p.dim() && rank(&tight) == p.dim()
}
