//! Parametric best-response LP: `min_{x_i} f_i(x_i, θ)` as a function of the
//! opponents' strategy `θ = x_{-i}`, split into critical regions.

use std::collections::HashSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::LinearGame;
use crate::geometry::{Constraint, ConstraintKind, HPolyhedron, Polytope};
use crate::rational::{dot, inverse, QVector, Rational};

use super::simplex::is_feasible;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineFunction {
    pub gradient: QVector,
    pub offset: Rational,
}

impl AffineFunction {
    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.gradient, x) + &self.offset
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionStatus {
    Optimal,
    Infeasible,
}

/// One optimal basis with the parameters for which it is optimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalRegion {
    pub status: RegionStatus,
    /// Rows of the inequality form of the player's constraint set (each
    /// equality contributes `a·x <= b` then `-a·x <= -b`), ascending.
    pub basis: Vec<usize>,
    /// Parameter set over `x_{-i}`. For an `Infeasible` region this is the
    /// whole domain, which is then not fully covered by optimal regions.
    pub region: Polytope,
    /// Optimal value on `region`; `None` when infeasible.
    pub value_fn: Option<AffineFunction>,
    /// Domain point whose slice is empty (infeasible regions only).
    pub witness: Option<QVector>,
}

impl CriticalRegion {
    pub fn is_optimal(&self) -> bool {
        self.status == RegionStatus::Optimal
    }
}

/// Optimal value at `theta` from the first optimal region containing it.
pub fn evaluate_regions(regions: &[CriticalRegion], theta: &[Rational]) -> Option<Rational> {
    regions
        .iter()
        .filter(|r| r.is_optimal() && r.region.contains(theta))
        .find_map(|r| r.value_fn.as_ref().map(|f| f.eval(theta)))
}

struct SplitRow {
    own: QVector,
    param: QVector,
    rhs: Rational,
}

/// Critical regions of `min cost · x` over `h` in the coordinates `own`, with
/// the remaining coordinates (ascending) as parameters ranging over `domain`.
///
/// Every nonsingular, dual-feasible basis is visited in lexicographic order;
/// bases whose region misses the domain are dropped, and bases giving the
/// same region and value function are reported once.
pub fn parametric_lp(
    cost: &[Rational],
    h: &HPolyhedron,
    own: &[usize],
    domain: &Polytope,
) -> Result<Vec<CriticalRegion>> {
    let n = h.dim();
    if cost.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: cost.len(),
        });
    }
    let params: Vec<usize> = (0..n).filter(|k| !own.contains(k)).collect();
    if domain.ambient_dim() != params.len() {
        return Err(Error::DimensionMismatch {
            expected: params.len(),
            found: domain.ambient_dim(),
        });
    }
    let pick =
        |v: &[Rational], idx: &[usize]| -> QVector { idx.iter().map(|&k| v[k].clone()).collect() };

    let mut rows: Vec<SplitRow> = Vec::new();
    for r in h.rows() {
        let split = SplitRow {
            own: pick(&r.coeffs, own),
            param: pick(&r.coeffs, &params),
            rhs: r.rhs.clone(),
        };
        let neg = (r.kind == ConstraintKind::Eq).then(|| SplitRow {
            own: split.own.iter().map(|x| -x).collect(),
            param: split.param.iter().map(|x| -x).collect(),
            rhs: -&split.rhs,
        });
        rows.push(split);
        rows.extend(neg);
    }
    let c_own = pick(cost, own);
    let c_par = pick(cost, &params);
    let p = params.len();
    let ni = own.len();

    let mut base = domain.hrep().clone();
    for r in rows.iter().filter(|r| r.own.iter().all(Zero::is_zero)) {
        base.push(Constraint::le(r.param.clone(), r.rhs.clone()))?;
    }
    let involved: Vec<usize> = (0..rows.len())
        .filter(|&k| rows[k].own.iter().any(|x| !x.is_zero()))
        .collect();

    let mut out = Vec::new();
    let mut seen: HashSet<(Vec<QVector>, AffineFunction)> = HashSet::new();
    for basis in involved.iter().copied().combinations(ni) {
        let a_b: Vec<QVector> = basis.iter().map(|&r| rows[r].own.clone()).collect();
        let Some(inv) = inverse(&a_b) else {
            continue;
        };
        // Multipliers with c_own + A_Bᵀ μ = 0.
        let mu: QVector = (0..ni)
            .map(|j| -(0..ni).fold(Rational::zero(), |acc, k| acc + &inv[k][j] * &c_own[k]))
            .collect();
        if mu.iter().any(Signed::is_negative) {
            continue;
        }
        // x_i(θ) = A_B⁻¹ (b_B − P_B θ) = x_off + x_grad θ.
        let x_off: QVector = (0..ni)
            .map(|k| {
                basis
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (j, &r)| {
                        acc + &inv[k][j] * &rows[r].rhs
                    })
            })
            .collect();
        let x_grad: Vec<QVector> = (0..ni)
            .map(|k| {
                (0..p)
                    .map(|t| {
                        -basis
                            .iter()
                            .enumerate()
                            .fold(Rational::zero(), |acc, (j, &r)| {
                                acc + &inv[k][j] * &rows[r].param[t]
                            })
                    })
                    .collect()
            })
            .collect();

        let mut region = base.clone();
        for &r in involved.iter().filter(|r| !basis.contains(r)) {
            let row = &rows[r];
            let coeffs: QVector = (0..p)
                .map(|t| {
                    (0..ni).fold(row.param[t].clone(), |acc, k| {
                        acc + &row.own[k] * &x_grad[k][t]
                    })
                })
                .collect();
            let rhs = &row.rhs - dot(&row.own, &x_off);
            region.push(Constraint::le(coeffs, rhs))?;
        }
        let Some(poly) = Polytope::from_hrep(&region)? else {
            continue;
        };
        let gradient: QVector = (0..p)
            .map(|t| (0..ni).fold(c_par[t].clone(), |acc, k| acc + &c_own[k] * &x_grad[k][t]))
            .collect();
        let value_fn = AffineFunction {
            gradient,
            offset: dot(&c_own, &x_off),
        };
        if seen.insert((poly.vertices().to_vec(), value_fn.clone())) {
            out.push(CriticalRegion {
                status: RegionStatus::Optimal,
                basis,
                region: poly,
                value_fn: Some(value_fn),
                witness: None,
            });
        }
    }

    // The feasible parameters form a convex set, so checking the domain's
    // vertices decides whether the optimal regions cover it.
    for v in domain.vertices() {
        let fixed: Vec<(usize, Rational)> = params.iter().copied().zip(v.iter().cloned()).collect();
        if !is_feasible(&h.slice(&fixed))? {
            out.push(CriticalRegion {
                status: RegionStatus::Infeasible,
                basis: Vec::new(),
                region: domain.clone(),
                value_fn: None,
                witness: Some(v.clone()),
            });
            break;
        }
    }
    Ok(out)
}

/// Critical regions of player `i`'s scalar best-response LP over a domain of
/// opponent strategies, given in ascending joint-coordinate order.
pub fn parametric_best_response(
    game: &LinearGame,
    i: usize,
    domain: &Polytope,
) -> Result<Vec<CriticalRegion>> {
    game.check_player(i)?;
    let player = &game.players[i];
    if player.payoff_dim() != 1 {
        return Err(Error::NotScalar(i));
    }
    let h = game.constraint_set(i)?;
    let own: Vec<usize> = game.own_coords(i).collect();
    let regions = parametric_lp(player.cost.row(0), &h, &own, domain)?;
    if regions.is_empty() {
        return Err(Error::EmptyDomain);
    }
    Ok(regions)
}
