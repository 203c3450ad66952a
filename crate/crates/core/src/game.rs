//! N-player games with linear costs, polyhedral constraints and polyhedral
//! payoff-ordering cones.

use std::fmt;
use std::ops::Range;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{HPolyhedron, Polytope};
use crate::lp::is_feasible;
use crate::rational::{QMatrix, Rational};

/// One player: strategy dimension, cost rows over the joint strategy
/// (minimized), and the generators of the dual of the payoff cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Player {
    pub dim: usize,
    /// `d_i x n`; `f_i(x) = cost · x`.
    pub cost: QMatrix,
    /// `d_i x g_i`; columns generate the dual of the ordering cone `K_i`.
    pub dual_generators: QMatrix,
}

impl Player {
    /// Player ordered by the natural cone `R^{d_i}_+`.
    pub fn new(dim: usize, cost: QMatrix) -> Self {
        let d = cost.nrows();
        Self {
            dim,
            cost,
            dual_generators: QMatrix::identity(d),
        }
    }

    pub fn with_dual_generators(mut self, gens: QMatrix) -> Self {
        self.dual_generators = gens;
        self
    }

    pub fn payoff_dim(&self) -> usize {
        self.cost.nrows()
    }
}

/// Constraint polyhedra over the joint strategy vector (boxes excluded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraints {
    Shared(HPolyhedron),
    PerPlayer(Vec<HPolyhedron>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    SharedScalar,
    GeneralizedScalar,
    SharedVector,
    GeneralizedVector,
}

impl GameKind {
    pub fn is_shared(self) -> bool {
        matches!(self, GameKind::SharedScalar | GameKind::SharedVector)
    }

    pub fn is_scalar(self) -> bool {
        matches!(self, GameKind::SharedScalar | GameKind::GeneralizedScalar)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibleSelector {
    Player(usize),
    Intersection,
    UnionHull,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    DimensionMismatch,
    MissingBox,
    InvalidBox,
    EmptyFeasibleSet,
    EmptyIntersection,
    DegenerateDualGenerators,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    /// Zero-based player index when the problem is player-specific.
    pub player: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.player {
            Some(p) => write!(f, "{:?} (player {}): {}", self.kind, p + 1, self.message),
            None => write!(f, "{:?}: {}", self.kind, self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearGame {
    pub players: Vec<Player>,
    pub constraints: Constraints,
    /// Per joint coordinate `(lo, hi)`.
    pub boxes: Vec<(Rational, Rational)>,
}

impl LinearGame {
    pub fn new(
        players: Vec<Player>,
        constraints: Constraints,
        boxes: Vec<(Rational, Rational)>,
    ) -> Self {
        Self {
            players,
            constraints,
            boxes,
        }
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    /// Joint strategy dimension `n`.
    pub fn total_dim(&self) -> usize {
        self.players.iter().map(|p| p.dim).sum()
    }

    pub fn strategy_dims(&self) -> Vec<usize> {
        self.players.iter().map(|p| p.dim).collect()
    }

    /// Joint coordinates owned by player `i`.
    pub fn own_coords(&self, i: usize) -> Range<usize> {
        let start: usize = self.players[..i].iter().map(|p| p.dim).sum();
        start..start + self.players[i].dim
    }

    /// Joint coordinates of every other player, ascending.
    pub fn other_coords(&self, i: usize) -> Vec<usize> {
        let own = self.own_coords(i);
        (0..self.total_dim()).filter(|k| !own.contains(k)).collect()
    }

    pub fn kind(&self) -> GameKind {
        let scalar = self.players.iter().all(|p| p.payoff_dim() == 1);
        match (&self.constraints, scalar) {
            (Constraints::Shared(_), true) => GameKind::SharedScalar,
            (Constraints::Shared(_), false) => GameKind::SharedVector,
            (Constraints::PerPlayer(_), true) => GameKind::GeneralizedScalar,
            (Constraints::PerPlayer(_), false) => GameKind::GeneralizedVector,
        }
    }

    pub fn check_player(&self, i: usize) -> Result<()> {
        if i < self.players.len() {
            Ok(())
        } else {
            Err(Error::InvalidPlayer(i))
        }
    }

    pub fn box_polyhedron(&self) -> HPolyhedron {
        HPolyhedron::from_box(&self.boxes)
    }

    /// Player `i`'s constraint set over the joint space, boxes included.
    pub fn constraint_set(&self, i: usize) -> Result<HPolyhedron> {
        self.check_player(i)?;
        let base = match &self.constraints {
            Constraints::Shared(h) => h,
            Constraints::PerPlayer(hs) => &hs[i],
        };
        base.intersect(&self.box_polyhedron())
    }

    /// Intersection of all player constraint sets, boxes included.
    pub fn intersection_hrep(&self) -> Result<HPolyhedron> {
        match &self.constraints {
            Constraints::Shared(h) => h.intersect(&self.box_polyhedron()),
            Constraints::PerPlayer(hs) => hs
                .iter()
                .try_fold(self.box_polyhedron(), |acc, h| acc.intersect(h)),
        }
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let n = self.total_dim();
        let mut push = |kind, player, message: String| {
            out.push(Diagnostic {
                kind,
                player,
                message,
            })
        };
        if self.players.is_empty() {
            push(
                DiagnosticKind::DimensionMismatch,
                None,
                "game has no players".into(),
            );
        }
        for (i, p) in self.players.iter().enumerate() {
            if p.dim == 0 {
                push(
                    DiagnosticKind::DimensionMismatch,
                    Some(i),
                    "strategy dimension is zero".into(),
                );
            }
            if p.cost.ncols() != n {
                push(
                    DiagnosticKind::DimensionMismatch,
                    Some(i),
                    format!(
                        "cost matrix has {} columns, joint dimension is {n}",
                        p.cost.ncols()
                    ),
                );
            }
            if p.cost.nrows() == 0 {
                push(
                    DiagnosticKind::DimensionMismatch,
                    Some(i),
                    "cost matrix has no rows".into(),
                );
            }
            if p.dual_generators.nrows() != p.payoff_dim() {
                push(
                    DiagnosticKind::DimensionMismatch,
                    Some(i),
                    format!(
                        "dual cone generators have length {}, payoff dimension is {}",
                        p.dual_generators.nrows(),
                        p.payoff_dim()
                    ),
                );
            } else if p.dual_generators.ncols() == 0
                || (0..p.dual_generators.ncols())
                    .any(|c| p.dual_generators.column(c).iter().all(Zero::is_zero))
            {
                push(
                    DiagnosticKind::DegenerateDualGenerators,
                    Some(i),
                    "dual cone generator list is empty or contains a zero vector".into(),
                );
            }
        }
        if self.boxes.len() != n {
            push(
                DiagnosticKind::MissingBox,
                None,
                format!("{} box bounds for {n} joint coordinates", self.boxes.len()),
            );
        }
        for (k, (lo, hi)) in self.boxes.iter().enumerate() {
            if lo > hi {
                push(
                    DiagnosticKind::InvalidBox,
                    None,
                    format!("coordinate {k} has lower bound above upper bound"),
                );
            }
        }
        let sets: Vec<&HPolyhedron> = match &self.constraints {
            Constraints::Shared(h) => vec![h],
            Constraints::PerPlayer(hs) => {
                if hs.len() != self.players.len() {
                    push(
                        DiagnosticKind::DimensionMismatch,
                        None,
                        format!(
                            "{} constraint sets for {} players",
                            hs.len(),
                            self.players.len()
                        ),
                    );
                }
                hs.iter().collect()
            }
        };
        for (i, h) in sets.iter().enumerate() {
            if h.dim() != n {
                push(
                    DiagnosticKind::DimensionMismatch,
                    matches!(self.constraints, Constraints::PerPlayer(_)).then_some(i),
                    format!(
                        "constraint rows have width {}, joint dimension is {n}",
                        h.dim()
                    ),
                );
            }
        }
        if !out.is_empty() {
            return out;
        }

        let shared = matches!(self.constraints, Constraints::Shared(_));
        let mut all_nonempty = true;
        for i in 0..if shared { 1 } else { self.players.len() } {
            let h = self.constraint_set(i).expect("validated dimensions");
            if !is_feasible(&h).unwrap_or(false) {
                all_nonempty = false;
                out.push(Diagnostic {
                    kind: DiagnosticKind::EmptyFeasibleSet,
                    player: (!shared).then_some(i),
                    message: "constraint set is empty".into(),
                });
            }
        }
        if all_nonempty && !shared {
            let h = self.intersection_hrep().expect("validated dimensions");
            if !is_feasible(&h).unwrap_or(false) {
                out.push(Diagnostic {
                    kind: DiagnosticKind::EmptyIntersection,
                    player: None,
                    message: "player constraint sets do not intersect".into(),
                });
            }
        }
        out
    }

    /// Errors out when `validate` reports anything.
    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(d) if d.kind == DiagnosticKind::EmptyIntersection => Err(Error::EmptyIntersection),
            Some(d) => Err(Error::InvalidGame(d.to_string())),
        }
    }

    /// `B` with `B x = (x, f_1(x), ..., f_N(x))`: the identity over every
    /// cost block.
    pub fn stacked_objective(&self) -> QMatrix {
        self.players
            .iter()
            .fold(QMatrix::identity(self.total_dim()), |acc, p| {
                acc.vstack(&p.cost)
                    .expect("cost width equals joint dimension")
            })
    }

    pub fn feasible_set(&self, selector: FeasibleSelector) -> Result<Polytope> {
        let empty = |what: String| Error::EmptySet(what);
        match selector {
            FeasibleSelector::Player(i) => Polytope::from_hrep(&self.constraint_set(i)?)?
                .ok_or_else(|| empty(format!("player {}", i + 1))),
            FeasibleSelector::Intersection => Polytope::from_hrep(&self.intersection_hrep()?)?
                .ok_or_else(|| empty("intersection".into())),
            FeasibleSelector::UnionHull => {
                let count = match &self.constraints {
                    Constraints::Shared(_) => 1,
                    Constraints::PerPlayer(hs) => hs.len(),
                };
                let mut points = Vec::new();
                for i in 0..count {
                    if let Some(p) = Polytope::from_hrep(&self.constraint_set(i)?)? {
                        points.extend(p.vertices().iter().cloned());
                    }
                }
                if points.is_empty() {
                    return Err(empty("union".into()));
                }
                Polytope::from_points(&points)
            }
        }
    }

    /// Same game with every cost row of player `i` multiplied by `factor`.
    pub fn with_scaled_cost(&self, i: usize, factor: &Rational) -> LinearGame {
        let mut g = self.clone();
        g.players[i].cost = g.players[i].cost.scaled(factor);
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Constraint;
    use crate::rational::{int, to_qvector};

    fn one_player() -> LinearGame {
        LinearGame::new(
            vec![Player::new(1, QMatrix::from_i64(&[&[1]]))],
            Constraints::Shared(HPolyhedron::whole_space(1)),
            vec![(int(0), int(1))],
        )
    }

    #[test]
    fn stacked_objective_single_player() {
        assert_eq!(
            one_player().stacked_objective(),
            QMatrix::from_i64(&[&[1], &[1]])
        );
    }

    #[test]
    fn kind_and_coords() {
        let g = LinearGame::new(
            vec![
                Player::new(2, QMatrix::from_i64(&[&[1, 0, 0]])),
                Player::new(1, QMatrix::from_i64(&[&[0, 0, 1], &[0, 1, 0]])),
            ],
            Constraints::PerPlayer(vec![
                HPolyhedron::whole_space(3),
                HPolyhedron::whole_space(3),
            ]),
            vec![(int(0), int(1)); 3],
        );
        assert_eq!(g.kind(), GameKind::GeneralizedVector);
        assert_eq!(g.own_coords(1), 2..3);
        assert_eq!(g.other_coords(0), vec![2]);
        assert!(g.validate().is_empty());
    }

    #[test]
    fn wrong_cost_width_is_diagnosed() {
        let mut g = one_player();
        g.players[0].cost = QMatrix::from_i64(&[&[1, 2]]);
        let d = g.validate();
        assert_eq!(d[0].kind, DiagnosticKind::DimensionMismatch);
    }

    #[test]
    fn empty_intersection_is_diagnosed() {
        let g = LinearGame::new(
            vec![
                Player::new(1, QMatrix::from_i64(&[&[1, 0]])),
                Player::new(1, QMatrix::from_i64(&[&[0, 1]])),
            ],
            Constraints::PerPlayer(vec![
                HPolyhedron::new(2, vec![Constraint::le(to_qvector(&[1, 0]), int(0))]).unwrap(),
                HPolyhedron::new(2, vec![Constraint::le(to_qvector(&[-1, 0]), int(-1))]).unwrap(),
            ]),
            vec![(int(0), int(1)); 2],
        );
        let d = g.validate();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::EmptyIntersection);
        assert_eq!(g.ensure_valid(), Err(Error::EmptyIntersection));
    }

    #[test]
    fn missing_box_and_zero_generator() {
        let mut g = one_player();
        g.boxes.clear();
        g.players[0].dual_generators = QMatrix::from_i64(&[&[0]]);
        let kinds: Vec<DiagnosticKind> = g.validate().into_iter().map(|d| d.kind).collect();
        assert!(kinds.contains(&DiagnosticKind::MissingBox));
        assert!(kinds.contains(&DiagnosticKind::DegenerateDualGenerators));
    }

    #[test]
    fn shared_feasible_set_is_selector_independent() {
        let g = one_player();
        let a = g.feasible_set(FeasibleSelector::Player(0)).unwrap();
        let b = g.feasible_set(FeasibleSelector::Intersection).unwrap();
        let c = g.feasible_set(FeasibleSelector::UnionHull).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
    }
}
