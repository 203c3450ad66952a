//! Complete solution of `min G x` over a polytope in the `R^m_+` order: all
//! efficient vertices and all maximal efficient faces.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{barycenter, irredundant_union, HPolyhedron, Polytope};
use crate::lp::efficiency_test;
use crate::rational::{QMatrix, QVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfficientFace {
    pub polytope: Polytope,
    /// Efficient vertices of the feasible set spanning the face.
    pub spanning_vertices: Vec<QVector>,
    pub maximal: bool,
}

/// Pareto set in decision space as an irredundant union of polytopes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParetoDecisionSet {
    pub faces: Vec<Polytope>,
}

impl ParetoDecisionSet {
    pub fn contains(&self, x: &[crate::Rational]) -> bool {
        self.faces.iter().any(|f| f.contains(x))
    }

    /// Distinct extreme points over all faces, sorted.
    pub fn extremal_points(&self) -> Vec<QVector> {
        let set: BTreeSet<QVector> = self
            .faces
            .iter()
            .flat_map(|f| f.vertices().iter().cloned())
            .collect();
        set.into_iter().collect()
    }
}

/// Vertices of `x` that are Pareto-minimal for `g`.
pub fn efficient_vertices(g: &QMatrix, x: &Polytope) -> Result<Vec<QVector>> {
    let mut out = Vec::new();
    for v in x.vertices() {
        if efficiency_test(v, g, x.hrep())?.efficient {
            out.push(v.clone());
        }
    }
    Ok(out)
}

/// Maximal efficient faces of `x`, found by closing the efficient vertices
/// under face joins: the smallest face containing an efficient face and an
/// efficient vertex is kept when all its vertices and its barycenter are
/// efficient. Every efficient face is reachable this way because each
/// intermediate join lies inside it.
pub fn maximal_efficient_faces(
    g: &QMatrix,
    x: &Polytope,
    effv: &[QVector],
) -> Result<Vec<EfficientFace>> {
    let h = x.hrep();
    let verts = x.vertices();
    let tight: Vec<BTreeSet<usize>> = verts
        .iter()
        .map(|v| (0..h.len()).filter(|&r| h.rows()[r].is_tight(v)).collect())
        .collect();
    let efficient: Vec<bool> = verts.iter().map(|v| effv.contains(v)).collect();

    // A face is the set of vertex indices tight on a row set.
    let face_of = |rows: &BTreeSet<usize>| -> Vec<usize> {
        (0..verts.len())
            .filter(|&k| rows.is_subset(&tight[k]))
            .collect()
    };

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut faces: Vec<(Vec<usize>, BTreeSet<usize>)> = Vec::new();
    let mut queue: VecDeque<(Vec<usize>, BTreeSet<usize>)> = VecDeque::new();
    for k in (0..verts.len()).filter(|&k| efficient[k]) {
        let rows = tight[k].clone();
        let f = face_of(&rows);
        if seen.insert(f.clone()) {
            queue.push_back((f, rows));
        }
    }
    let mut rejected: HashSet<Vec<usize>> = HashSet::new();
    while let Some((f, rows)) = queue.pop_front() {
        for w in (0..verts.len()).filter(|&k| efficient[k] && !f.contains(&k)) {
            let joint: BTreeSet<usize> = rows.intersection(&tight[w]).copied().collect();
            let jf = face_of(&joint);
            if seen.contains(&jf) || rejected.contains(&jf) {
                continue;
            }
            if jf.iter().all(|&k| efficient[k]) && face_is_efficient(g, h, verts, &jf)? {
                seen.insert(jf.clone());
                queue.push_back((jf, joint));
            } else {
                rejected.insert(jf);
            }
        }
        faces.push((f, rows));
    }

    let mut out = Vec::new();
    for (f, _) in &faces {
        let contained = faces
            .iter()
            .any(|(o, _)| o.len() > f.len() && f.iter().all(|k| o.contains(k)));
        if contained {
            continue;
        }
        let pts: Vec<QVector> = f.iter().map(|&k| verts[k].clone()).collect();
        out.push(EfficientFace {
            polytope: Polytope::from_points(&pts)?,
            spanning_vertices: pts,
            maximal: true,
        });
    }
    out.sort_by(|a, b| a.polytope.cmp(&b.polytope));
    Ok(out)
}

fn face_is_efficient(
    g: &QMatrix,
    h: &HPolyhedron,
    verts: &[QVector],
    face: &[usize],
) -> Result<bool> {
    let pts: Vec<QVector> = face.iter().map(|&k| verts[k].clone()).collect();
    Ok(efficiency_test(&barycenter(&pts)?, g, h)?.efficient)
}

/// Decision-space Pareto set of `min G x` over `x`.
pub fn pareto_decision_set(g: &QMatrix, x: &Polytope) -> Result<ParetoDecisionSet> {
    let effv = efficient_vertices(g, x)?;
    let faces = maximal_efficient_faces(g, x, &effv)?;
    Ok(ParetoDecisionSet {
        faces: irredundant_union(faces.into_iter().map(|f| f.polytope).collect()),
    })
}

/// As [`pareto_decision_set`] on an H-polyhedron that may be empty.
pub fn solve_molp(g: &QMatrix, feasible: &HPolyhedron) -> Result<ParetoDecisionSet> {
    let x = Polytope::from_hrep(feasible)?.ok_or(Error::EmptyFeasible)?;
    pareto_decision_set(g, &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, to_qvector};

    fn unit_square() -> Polytope {
        Polytope::from_hrep(&HPolyhedron::from_box(&[
            (int(0), int(1)),
            (int(0), int(1)),
        ]))
        .unwrap()
        .unwrap()
    }

    #[test]
    fn identity_on_box_has_one_efficient_vertex() {
        let g = QMatrix::identity(2);
        assert_eq!(
            efficient_vertices(&g, &unit_square()).unwrap(),
            vec![to_qvector(&[0, 0])]
        );
        let p = pareto_decision_set(&g, &unit_square()).unwrap();
        assert_eq!(p.faces.len(), 1);
        assert!(p.faces[0].is_point());
    }

    #[test]
    fn scalar_objective_gives_argmin_face() {
        let g = QMatrix::from_i64(&[&[1, 0]]);
        let p = pareto_decision_set(&g, &unit_square()).unwrap();
        assert_eq!(p.faces.len(), 1);
        assert_eq!(
            p.faces[0].vertices(),
            &[to_qvector(&[0, 0]), to_qvector(&[0, 1])]
        );
    }

    #[test]
    fn conflicting_objectives_on_square() {
        // min (x, -y): only (0,1) is efficient.
        let g = QMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        let p = pareto_decision_set(&g, &unit_square()).unwrap();
        assert_eq!(p.extremal_points(), vec![to_qvector(&[0, 1])]);
        // min (x+y, -x-y): everything is efficient.
        let g = QMatrix::from_i64(&[&[1, 1], &[-1, -1]]);
        let p = pareto_decision_set(&g, &unit_square()).unwrap();
        assert_eq!(p.faces, vec![unit_square()]);
    }

    #[test]
    fn hypotenuse_of_triangle() {
        // Triangle (0,0),(2,0),(0,2) with min (-x, -y): efficient edge x+y=2.
        let t = Polytope::from_points(&[
            to_qvector(&[0, 0]),
            to_qvector(&[2, 0]),
            to_qvector(&[0, 2]),
        ])
        .unwrap();
        let g = QMatrix::from_i64(&[&[-1, 0], &[0, -1]]);
        let p = pareto_decision_set(&g, &t).unwrap();
        assert_eq!(p.faces.len(), 1);
        assert_eq!(
            p.faces[0].vertices(),
            &[to_qvector(&[0, 2]), to_qvector(&[2, 0])]
        );
    }

    #[test]
    fn empty_feasible_set() {
        let mut h = HPolyhedron::from_box(&[(int(0), int(1))]);
        h.push(crate::geometry::Constraint::le(to_qvector(&[1]), int(-1)))
            .unwrap();
        assert_eq!(
            solve_molp(&QMatrix::identity(1), &h),
            Err(Error::EmptyFeasible)
        );
    }
}
