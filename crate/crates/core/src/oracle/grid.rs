//! Brute-force Nash check on a rational grid over box strategy sets.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::HPolyhedron;
use crate::rational::{QVector, Rational};

use super::expr::{CostExpr, StrategyLayout};

/// Per-coordinate grid steps; each must be positive and divide its box width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub steps: Vec<Rational>,
}

impl GridSpec {
    pub fn uniform(step: Rational, dim: usize) -> Self {
        Self {
            steps: vec![step; dim],
        }
    }

    pub fn validate(&self, boxes: &[(Rational, Rational)]) -> Result<()> {
        if self.steps.len() != boxes.len() {
            return Err(Error::InvalidGrid(format!(
                "{} steps for {} coordinates",
                self.steps.len(),
                boxes.len()
            )));
        }
        for (k, (s, (lo, hi))) in self.steps.iter().zip(boxes).enumerate() {
            if !s.is_positive() {
                return Err(Error::InvalidGrid(format!(
                    "step for coordinate {k} is not positive"
                )));
            }
            if lo > hi {
                return Err(Error::InvalidGrid(format!(
                    "box for coordinate {k} is empty"
                )));
            }
            if !((hi - lo) / s).is_integer() {
                return Err(Error::InvalidGrid(format!(
                    "step for coordinate {k} does not divide the box width"
                )));
            }
        }
        Ok(())
    }

    /// Grid values of coordinate `k`, endpoints included, ascending.
    pub fn values(&self, k: usize, bounds: &(Rational, Rational)) -> Vec<Rational> {
        let (lo, hi) = bounds;
        let mut out = Vec::new();
        let mut v = lo.clone();
        while v <= *hi {
            out.push(v.clone());
            v += &self.steps[k];
        }
        out
    }
}

/// Feasibility restrictions on joint strategies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleConstraint {
    None,
    Shared(HPolyhedron),
    /// Player `i` may deviate only within her own set; candidates must lie in
    /// all of them.
    PerPlayer(Vec<HPolyhedron>),
}

impl OracleConstraint {
    fn admits(&self, player: usize, x: &[Rational]) -> bool {
        match self {
            OracleConstraint::None => true,
            OracleConstraint::Shared(h) => h.contains(x),
            OracleConstraint::PerPlayer(hs) => hs[player].contains(x),
        }
    }

    fn admits_all(&self, x: &[Rational]) -> bool {
        match self {
            OracleConstraint::None => true,
            OracleConstraint::Shared(h) => h.contains(x),
            OracleConstraint::PerPlayer(hs) => hs.iter().all(|h| h.contains(x)),
        }
    }
}

/// A box-constrained game with arbitrary cost expressions, one per player.
#[derive(Clone, Debug)]
pub struct OracleGame {
    pub layout: StrategyLayout,
    pub costs: Vec<CostExpr>,
    pub boxes: Vec<(Rational, Rational)>,
    pub constraint: OracleConstraint,
}

/// A strictly improving unilateral deviation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub player: usize,
    pub deviation: QVector,
    pub current_cost: Rational,
    pub deviation_cost: Rational,
}

impl OracleGame {
    pub fn new(
        dims: &[usize],
        costs: Vec<CostExpr>,
        boxes: Vec<(Rational, Rational)>,
        constraint: OracleConstraint,
    ) -> Result<Self> {
        let layout = StrategyLayout::new(dims);
        let n = layout.total_dim();
        if costs.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.len(),
                found: costs.len(),
            });
        }
        if boxes.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: boxes.len(),
            });
        }
        for c in &costs {
            c.check_variables(&layout)?;
        }
        let widths: Vec<usize> = match &constraint {
            OracleConstraint::None => Vec::new(),
            OracleConstraint::Shared(h) => vec![h.dim()],
            OracleConstraint::PerPlayer(hs) => {
                if hs.len() != dims.len() {
                    return Err(Error::DimensionMismatch {
                        expected: dims.len(),
                        found: hs.len(),
                    });
                }
                hs.iter().map(HPolyhedron::dim).collect()
            }
        };
        if let Some(&w) = widths.iter().find(|&&w| w != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w,
            });
        }
        Ok(Self {
            layout,
            costs,
            boxes,
            constraint,
        })
    }

    fn in_box(&self, x: &[Rational]) -> bool {
        x.iter()
            .zip(&self.boxes)
            .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    fn own_coords(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.layout.dims()[..i].iter().sum();
        start..start + self.layout.dims()[i]
    }

    /// First grid deviation that strictly lowers some player's cost.
    fn first_violation(&self, x: &[Rational], grid: &GridSpec) -> Result<Option<Violation>> {
        for i in 0..self.costs.len() {
            let current = self.costs[i].eval(&self.layout, x)?;
            let own: Vec<usize> = self.own_coords(i).collect();
            let axes: Vec<Vec<Rational>> = own
                .iter()
                .map(|&k| grid.values(k, &self.boxes[k]))
                .collect();
            let mut y = x.to_vec();
            for combo in product(&axes) {
                for (&k, v) in own.iter().zip(&combo) {
                    y[k] = v.clone();
                }
                if !self.constraint.admits(i, &y) {
                    continue;
                }
                let c = self.costs[i].eval(&self.layout, &y)?;
                if c < current {
                    return Ok(Some(Violation {
                        player: i,
                        deviation: y,
                        current_cost: current,
                        deviation_cost: c,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Every feasible grid point with no strictly improving grid deviation.
    pub fn grid_nash(&self, grid: &GridSpec) -> Result<Vec<QVector>> {
        grid.validate(&self.boxes)?;
        let axes: Vec<Vec<Rational>> = (0..self.boxes.len())
            .map(|k| grid.values(k, &self.boxes[k]))
            .collect();
        let mut any = false;
        let mut out = Vec::new();
        for x in product(&axes) {
            if !self.constraint.admits_all(&x) {
                continue;
            }
            any = true;
            if self.first_violation(&x, grid)?.is_none() {
                out.push(x);
            }
        }
        if !any {
            return Err(Error::EmptyGrid);
        }
        Ok(out)
    }

    /// `None` when no grid deviation strictly improves any player at `x`.
    pub fn check_point(&self, x: &[Rational], grid: &GridSpec) -> Result<Option<Violation>> {
        grid.validate(&self.boxes)?;
        if x.len() != self.boxes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.boxes.len(),
                found: x.len(),
            });
        }
        if !self.in_box(x) || !self.constraint.admits_all(x) {
            return Err(Error::InfeasiblePoint);
        }
        self.first_violation(x, grid)
    }
}

/// Cartesian product in lexicographic order.
fn product(axes: &[Vec<Rational>]) -> impl Iterator<Item = QVector> + '_ {
    let total: usize = if axes.iter().any(Vec::is_empty) {
        0
    } else {
        axes.iter().map(Vec::len).product()
    };
    (0..total).map(move |mut idx| {
        let mut out = vec![Rational::zero(); axes.len()];
        for (k, axis) in axes.iter().enumerate().rev() {
            out[k] = axis[idx % axis.len()].clone();
            idx /= axis.len();
        }
        out
    })
}

/// Grid points of a one-cost-per-player game that pass the deviation check.
pub fn grid_nash_oracle(
    dims: &[usize],
    costs: &[CostExpr],
    boxes: &[(Rational, Rational)],
    grid: &GridSpec,
    constraint: &OracleConstraint,
) -> Result<Vec<QVector>> {
    OracleGame::new(dims, costs.to_vec(), boxes.to_vec(), constraint.clone())?.grid_nash(grid)
}

/// `true` when no grid deviation strictly improves any player at `x`.
pub fn check_point(
    dims: &[usize],
    costs: &[CostExpr],
    boxes: &[(Rational, Rational)],
    constraint: &OracleConstraint,
    x: &[Rational],
    grid: &GridSpec,
) -> Result<bool> {
    let g = OracleGame::new(dims, costs.to_vec(), boxes.to_vec(), constraint.clone())?;
    Ok(g.check_point(x, grid)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::expr::parse_cost;
    use crate::rational::{frac, int};

    fn unit_boxes(n: usize) -> Vec<(Rational, Rational)> {
        vec![(int(0), int(1)); n]
    }

    fn odds_evens() -> Vec<CostExpr> {
        let f1 = "-1 + 2*x[1][1] + 2*x[2][1] - 4*x[1][1]*x[2][1]";
        vec![
            parse_cost(f1).unwrap(),
            parse_cost(&format!("-({f1})")).unwrap(),
        ]
    }

    fn three_equilibria() -> Vec<CostExpr> {
        vec![
            parse_cost("-1 + 2*x[1][1] + 2*x[2][1] - 4*x[1][1]*x[2][1]").unwrap(),
            parse_cost("abs(x[1][1] - x[2][1])").unwrap(),
        ]
    }

    #[test]
    fn odds_evens_quarter_grid() {
        let grid = GridSpec::uniform(frac(1, 4), 2);
        let ne = grid_nash_oracle(
            &[1, 1],
            &odds_evens(),
            &unit_boxes(2),
            &grid,
            &OracleConstraint::None,
        )
        .unwrap();
        assert_eq!(ne, vec![vec![frac(1, 2), frac(1, 2)]]);
    }

    #[test]
    fn three_equilibria_quarter_grid() {
        let grid = GridSpec::uniform(frac(1, 4), 2);
        let ne = grid_nash_oracle(
            &[1, 1],
            &three_equilibria(),
            &unit_boxes(2),
            &grid,
            &OracleConstraint::None,
        )
        .unwrap();
        assert_eq!(
            ne,
            vec![
                vec![int(0), int(0)],
                vec![frac(1, 2), frac(1, 2)],
                vec![int(1), int(1)]
            ]
        );
    }

    #[test]
    fn point_checks() {
        let grid = GridSpec::uniform(frac(1, 8), 2);
        let costs = three_equilibria();
        let half = [frac(1, 2), frac(1, 2)];
        assert!(check_point(
            &[1, 1],
            &costs,
            &unit_boxes(2),
            &OracleConstraint::None,
            &half,
            &grid
        )
        .unwrap());
        let quarter = [frac(1, 4), frac(1, 4)];
        let g = OracleGame::new(&[1, 1], costs, unit_boxes(2), OracleConstraint::None).unwrap();
        let v = g.check_point(&quarter, &grid).unwrap().unwrap();
        assert_eq!(v.player, 0);
        assert_eq!(v.deviation, vec![int(0), frac(1, 4)]);
        assert_eq!(v.deviation_cost, frac(-1, 2));
    }

    #[test]
    fn single_player_argmin() {
        let costs = vec![parse_cost("abs(x[1][1] - 1/2)").unwrap()];
        let grid = GridSpec::uniform(frac(1, 4), 1);
        let ne =
            grid_nash_oracle(&[1], &costs, &unit_boxes(1), &grid, &OracleConstraint::None).unwrap();
        assert_eq!(ne, vec![vec![frac(1, 2)]]);
    }

    #[test]
    fn invalid_and_empty_grids() {
        let costs = odds_evens();
        let none = OracleConstraint::None;
        let zero = GridSpec::uniform(int(0), 2);
        assert!(matches!(
            grid_nash_oracle(&[1, 1], &costs, &unit_boxes(2), &zero, &none),
            Err(Error::InvalidGrid(_))
        ));
        let uneven = GridSpec::uniform(frac(1, 3), 2);
        assert!(grid_nash_oracle(
            &[1, 1],
            &costs,
            &[(int(0), int(1)), (int(0), frac(1, 2))],
            &uneven,
            &none
        )
        .is_err());
        let mut h = HPolyhedron::whole_space(2);
        h.push(crate::geometry::Constraint::le(
            vec![int(1), int(1)],
            int(-1),
        ))
        .unwrap();
        let grid = GridSpec::uniform(frac(1, 2), 2);
        assert_eq!(
            grid_nash_oracle(
                &[1, 1],
                &costs,
                &unit_boxes(2),
                &grid,
                &OracleConstraint::Shared(h)
            ),
            Err(Error::EmptyGrid)
        );
    }

    #[test]
    fn infeasible_point_rejected() {
        let grid = GridSpec::uniform(frac(1, 2), 2);
        let r = check_point(
            &[1, 1],
            &odds_evens(),
            &unit_boxes(2),
            &OracleConstraint::None,
            &[int(2), int(0)],
            &grid,
        );
        assert_eq!(r, Err(Error::InfeasiblePoint));
    }
}
