//! Nash equilibrium sets from per-player Pareto sets: shared constraints,
//! the intersection/union bounds for generalized games, the filter that
//! makes the intersection bound exact, and pointwise vector-valued checks.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::cone::scalarized_objective;
use crate::error::{Error, Result};
use crate::game::{Constraints, FeasibleSelector, LinearGame};
use crate::geometry::{intersect, irredundant_union, Constraint, HPolyhedron, Polytope};
use crate::lp::{efficiency_test, parametric_best_response, solve_lp, LpProblem};
use crate::molp::{pareto_decision_set, ParetoDecisionSet};
use crate::rational::{dot, QVector, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    Exact,
    Superset,
    Subset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NashSet {
    /// Irredundant, sorted by vertex list.
    pub components: Vec<Polytope>,
    pub exactness: Exactness,
}

impl NashSet {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }

    /// Distinct extreme points over all components, sorted.
    pub fn extremal_points(&self) -> Vec<QVector> {
        let set: BTreeSet<QVector> = self
            .components
            .iter()
            .flat_map(|c| c.vertices().iter().cloned())
            .collect();
        set.into_iter().collect()
    }
}

/// A component of the superset that lost points to the filter, with a point
/// of it where `player` has a strictly better feasible response.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovedFace {
    pub face: Polytope,
    pub player: usize,
    pub witness: QVector,
    /// `f_i` at the witness.
    pub cost: Rational,
    /// Best response value against the witness's opponent strategy.
    pub best_response_value: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilterReport {
    pub removed: Vec<RemovedFace>,
    pub kept: Vec<Polytope>,
}

/// Player `i`'s best-response graph restricted to `x`.
pub fn best_response_graph(game: &LinearGame, i: usize, x: &Polytope) -> Result<ParetoDecisionSet> {
    pareto_decision_set(&scalarized_objective(game, i)?, x)
}

/// Pairwise intersections of two unions of polytopes, irredundant.
pub fn intersect_unions(a: &[Polytope], b: &[Polytope]) -> Result<Vec<Polytope>> {
    let mut out = Vec::new();
    for p in a {
        for q in b {
            if let Some(r) = intersect(p, q)? {
                out.push(r);
            }
        }
    }
    Ok(irredundant_union(out))
}

/// `⋂_i` best-response graphs over `x`.
fn ne_over(game: &LinearGame, x: &Polytope) -> Result<Vec<Polytope>> {
    let mut acc = vec![x.clone()];
    for i in 0..game.num_players() {
        let graph = best_response_graph(game, i, x)?;
        acc = intersect_unions(&acc, &graph.faces)?;
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

fn is_shared(game: &LinearGame) -> bool {
    matches!(game.constraints, Constraints::Shared(_))
}

/// Exact equilibrium set of a shared-constraint game.
pub fn shared_constraint_ne(game: &LinearGame) -> Result<NashSet> {
    if !is_shared(game) {
        return Err(Error::NotShared);
    }
    game.ensure_valid()?;
    let x = game.feasible_set(FeasibleSelector::Intersection)?;
    Ok(NashSet {
        components: ne_over(game, &x)?,
        exactness: Exactness::Exact,
    })
}

/// Equilibria of the game played on `⋂ 𝕏_i`; contains every generalized
/// equilibrium.
pub fn intersection_superset(game: &LinearGame) -> Result<NashSet> {
    game.ensure_valid()?;
    let x = game.feasible_set(FeasibleSelector::Intersection)?;
    Ok(NashSet {
        components: ne_over(game, &x)?,
        exactness: if is_shared(game) {
            Exactness::Exact
        } else {
            Exactness::Superset
        },
    })
}

/// Equilibria of the game played on `co ⋃ 𝕏_i` that are feasible for every
/// player; all of them are generalized equilibria.
pub fn union_subset(game: &LinearGame) -> Result<NashSet> {
    game.ensure_valid()?;
    let hull = game.feasible_set(FeasibleSelector::UnionHull)?;
    let common = game.feasible_set(FeasibleSelector::Intersection)?;
    let comps = ne_over(game, &hull)?;
    Ok(NashSet {
        components: intersect_unions(&comps, std::slice::from_ref(&common))?,
        exactness: if is_shared(game) {
            Exactness::Exact
        } else {
            Exactness::Subset
        },
    })
}

/// Removes from `superset` every point where some player has a strictly
/// better response inside her own constraint set, leaving the exact
/// generalized equilibrium set of a scalar game.
///
/// On a component `F`, player `i`'s optimal value `φ_i(x_{-i})` is the
/// maximum of the affine pieces `ℓ_k` of its critical regions and never
/// exceeds `f_i` on `F`, so the surviving points are `⋃_k F ∩ {f_i <= ℓ_k}`.
pub fn filter_set_m(game: &LinearGame, superset: &NashSet) -> Result<(NashSet, FilterReport)> {
    if let Some(i) = game.players.iter().position(|p| p.payoff_dim() != 1) {
        return Err(Error::NotScalar(i));
    }
    game.ensure_valid()?;
    let n = game.total_dim();
    let mut report = FilterReport::default();
    let mut kept = Vec::new();
    for face in &superset.components {
        let mut survivors = vec![face.clone()];
        for i in 0..game.num_players() {
            let others = game.other_coords(i);
            let cost = game.players[i].cost.row(0);
            let regions = parametric_best_response(game, i, &face.project(&others))?;
            let mut pieces = Vec::new();
            let mut best: Option<(Rational, QVector, Rational)> = None;
            for r in regions.iter().filter(|r| r.is_optimal()) {
                let f = r.value_fn.as_ref().expect("optimal regions carry a value");
                // d(x) = f_i(x) - ℓ_k(x_{-i}) = diff · x - offset
                let mut diff = cost.to_vec();
                for (g, &k) in f.gradient.iter().zip(&others) {
                    diff[k] -= g;
                }
                let mut h = face.hrep().clone();
                h.push(Constraint::le(diff.clone(), f.offset.clone()))?;
                if let Some(p) = Polytope::from_hrep(&h)? {
                    pieces.push(p);
                }

                let dom = face.hrep().intersect(&r.region.hrep().embed(&others, n)?)?;
                let neg: QVector = diff.iter().map(|x| -x).collect();
                let sol = solve_lp(&LpProblem::new(neg, dom)?)?;
                if sol.is_optimal() {
                    let gap = dot(&diff, &sol.point) - &f.offset;
                    if gap.is_positive() && best.as_ref().is_none_or(|(b, _, _)| gap > *b) {
                        let theta: QVector = others.iter().map(|&k| sol.point[k].clone()).collect();
                        best = Some((gap, sol.point.clone(), f.eval(&theta)));
                    }
                }
            }
            let pieces = irredundant_union(pieces);
            if let Some((_, witness, value)) = best {
                report.removed.push(RemovedFace {
                    face: face.clone(),
                    player: i,
                    cost: dot(cost, &witness),
                    witness,
                    best_response_value: value,
                });
            }
            survivors = intersect_unions(&survivors, &pieces)?;
            if survivors.is_empty() {
                break;
            }
        }
        kept.extend(survivors);
    }
    let kept = irredundant_union(kept);
    report.kept = kept.clone();
    Ok((
        NashSet {
            components: kept,
            exactness: Exactness::Exact,
        },
        report,
    ))
}

/// Exact equilibria for shared games and scalar generalized games; for
/// vector-valued generalized games only the intersection superset.
pub fn generalized_ne(game: &LinearGame) -> Result<(NashSet, Option<FilterReport>)> {
    if is_shared(game) {
        return Ok((shared_constraint_ne(game)?, None));
    }
    let superset = intersection_superset(game)?;
    if game.kind().is_scalar() {
        let (exact, report) = filter_set_m(game, &superset)?;
        Ok((exact, Some(report)))
    } else {
        Ok((superset, None))
    }
}

/// Player `i`'s feasible deviations from `x`: `𝕏_i` with `x_{-i}` fixed.
pub fn deviation_set(game: &LinearGame, i: usize, x: &[Rational]) -> Result<HPolyhedron> {
    let mut h = game.constraint_set(i)?;
    let n = game.total_dim();
    for k in game.other_coords(i) {
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::from_integer(1.into());
        h.push(Constraint::eq(e, x[k].clone()))?;
    }
    Ok(h)
}

/// For each player, whether `f_i(x)` is `K_i`-efficient among her feasible
/// deviations. All entries `true` means `x` is an equilibrium.
pub fn vector_point_check(game: &LinearGame, x: &[Rational]) -> Result<Vec<PointVerdict>> {
    game.ensure_valid()?;
    let n = game.total_dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if !game.intersection_hrep()?.contains(x) {
        return Err(Error::InfeasiblePoint);
    }
    let mut out = Vec::with_capacity(game.num_players());
    for (i, p) in game.players.iter().enumerate() {
        let objective = p.dual_generators.transpose().mul(&p.cost)?;
        let v = efficiency_test(x, &objective, &deviation_set(game, i, x)?)?;
        out.push(PointVerdict {
            player: i,
            equilibrium: v.efficient,
            deviation: v.dominating_point,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointVerdict {
    pub player: usize,
    pub equilibrium: bool,
    /// Feasible deviation that dominates `x` for this player.
    pub deviation: Option<QVector>,
}
