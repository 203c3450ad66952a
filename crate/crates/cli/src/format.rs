//! Game and result documents. Every rational travels as a lowest-terms
//! string such as `"8/55"`; game files also accept JSON integers.

use std::fmt;
use std::path::Path;

use nashvop::equilibrium::{FilterReport, RemovedFace};
use nashvop::oracle::{parse_cost_for, OracleConstraint, OracleGame, StrategyLayout};
use nashvop::rational::parse_rational;
use nashvop::{
    Constraint, Constraints, Diagnostic, DiagnosticKind, HPolyhedron, LinearGame, Player, Polytope,
    QMatrix, QVector, Rational,
};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const SCHEMA: &str = "nashvop-1";

/// Exact rational with a string wire form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        struct QVisitor;

        impl Visitor<'_> for QVisitor {
            type Value = Q;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string such as \"-3/4\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                parse_rational(v).map(Q).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Q, E> {
                Err(E::custom(format!(
                    "floating-point value {v} is not exact; write it as a string"
                )))
            }
        }

        d.deserialize_any(QVisitor)
    }
}

fn to_q(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn from_q(v: &[Q]) -> QVector {
    v.iter().map(|q| q.0.clone()).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    #[default]
    Min,
    Max,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSpec {
    pub dim: usize,
    #[serde(default = "one")]
    pub payoff_dim: usize,
    /// One row per payoff component over the joint strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<Vec<Vec<Q>>>,
    #[serde(default)]
    pub sense: Sense,
    /// `payoff_dim` rows; each column generates the dual ordering cone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_cone_generators: Option<Vec<Vec<Q>>>,
}

/// `A x <= b` and `A_eq x = b_eq` over the joint strategy.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearRows {
    #[serde(rename = "A", default)]
    pub a: Vec<Vec<Q>>,
    #[serde(default)]
    pub b: Vec<Q>,
    #[serde(rename = "A_eq", default, skip_serializing_if = "Vec::is_empty")]
    pub a_eq: Vec<Vec<Q>>,
    #[serde(rename = "b_eq", default, skip_serializing_if = "Vec::is_empty")]
    pub b_eq: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintSpec {
    Shared(LinearRows),
    PerPlayer(Vec<LinearRows>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub schema: String,
    pub players: Vec<PlayerSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<ConstraintSpec>,
    pub boxes: Vec<[Q; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_costs: Option<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed game file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema `{0}`, expected `{SCHEMA}`")]
    Schema(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Core(#[from] nashvop::Error),
}

/// A game file checked and converted into engine objects.
#[derive(Clone, Debug)]
pub struct LoadedGame {
    pub file: GameFile,
    /// Present when every player has a linear objective.
    pub linear: Option<LinearGame>,
    /// Present when the file lists cost expressions.
    pub oracle: Option<OracleGame>,
}

impl LoadedGame {
    /// Cost expressions when given, otherwise the scalar linear objectives.
    pub fn oracle_game(&self) -> Result<OracleGame, LoadError> {
        if let Some(o) = &self.oracle {
            return Ok(o.clone());
        }
        let game = self.linear.as_ref().ok_or_else(|| {
            LoadError::Shape("game has neither objectives nor oracle_costs".into())
        })?;
        let layout = StrategyLayout::new(&game.strategy_dims());
        let mut costs = Vec::new();
        for (i, p) in game.players.iter().enumerate() {
            if p.payoff_dim() != 1 {
                return Err(nashvop::Error::NotScalar(i + 1).into());
            }
            costs.push(nashvop::oracle::CostExpr::from_linear(
                p.cost.row(0),
                &layout,
            ));
        }
        let constraint = match &game.constraints {
            Constraints::Shared(h) => OracleConstraint::Shared(h.clone()),
            Constraints::PerPlayer(hs) => OracleConstraint::PerPlayer(hs.clone()),
        };
        Ok(OracleGame::new(
            &game.strategy_dims(),
            costs,
            game.boxes.clone(),
            constraint,
        )?)
    }
}

fn shape(msg: String) -> LoadError {
    LoadError::Shape(msg)
}

fn matrix(rows: &[Vec<Q>], cols: usize, what: &str) -> Result<QMatrix, LoadError> {
    if let Some(r) = rows.iter().find(|r| r.len() != cols) {
        return Err(shape(format!(
            "{what}: row of length {} where {cols} is required",
            r.len()
        )));
    }
    Ok(QMatrix::from_rows(
        rows.iter().map(|r| from_q(r)).collect(),
        cols,
    )?)
}

fn polyhedron(rows: &LinearRows, n: usize, what: &str) -> Result<HPolyhedron, LoadError> {
    if rows.a.len() != rows.b.len() || rows.a_eq.len() != rows.b_eq.len() {
        return Err(shape(format!("{what}: A/b or A_eq/b_eq lengths differ")));
    }
    let a = matrix(&rows.a, n, what)?;
    let a_eq = matrix(&rows.a_eq, n, what)?;
    let mut out: Vec<Constraint> = a
        .rows_iter()
        .zip(&rows.b)
        .map(|(r, b)| Constraint::le(r.to_vec(), b.0.clone()))
        .collect();
    out.extend(
        a_eq.rows_iter()
            .zip(&rows.b_eq)
            .map(|(r, b)| Constraint::eq(r.to_vec(), b.0.clone())),
    );
    Ok(HPolyhedron::new(n, out)?)
}

impl GameFile {
    pub fn from_json(text: &str) -> Result<LoadedGame, LoadError> {
        let file: GameFile = serde_json::from_str(text)?;
        file.build()
    }

    pub fn load(path: &Path) -> Result<LoadedGame, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.display().to_string(),
            source,
        })?;
        GameFile::from_json(&text)
    }

    pub fn build(self) -> Result<LoadedGame, LoadError> {
        if self.schema != SCHEMA {
            return Err(LoadError::Schema(self.schema));
        }
        if self.players.is_empty() {
            return Err(shape("game has no players".into()));
        }
        let dims: Vec<usize> = self.players.iter().map(|p| p.dim).collect();
        if dims.contains(&0) {
            return Err(shape(
                "every player needs at least one strategy coordinate".into(),
            ));
        }
        let n: usize = dims.iter().sum();
        if self.boxes.len() != n {
            return Err(shape(format!(
                "{} boxes given for {n} strategy coordinates",
                self.boxes.len()
            )));
        }
        let boxes: Vec<(Rational, Rational)> = self
            .boxes
            .iter()
            .map(|[lo, hi]| (lo.0.clone(), hi.0.clone()))
            .collect();
        let constraints = match &self.constraints {
            None => Constraints::Shared(HPolyhedron::whole_space(n)),
            Some(ConstraintSpec::Shared(rows)) => {
                Constraints::Shared(polyhedron(rows, n, "shared constraints")?)
            }
            Some(ConstraintSpec::PerPlayer(sets)) => {
                if sets.len() != self.players.len() {
                    return Err(shape(format!(
                        "{} constraint sets given for {} players",
                        sets.len(),
                        self.players.len()
                    )));
                }
                Constraints::PerPlayer(
                    sets.iter()
                        .enumerate()
                        .map(|(i, rows)| {
                            polyhedron(rows, n, &format!("constraints of player {}", i + 1))
                        })
                        .collect::<Result<_, _>>()?,
                )
            }
        };

        let with_objective = self
            .players
            .iter()
            .filter(|p| p.objective.is_some())
            .count();
        if with_objective != 0 && with_objective != self.players.len() {
            return Err(shape(
                "either every player or no player has an objective".into(),
            ));
        }
        let linear = if with_objective == 0 {
            None
        } else {
            let mut players = Vec::new();
            for (i, p) in self.players.iter().enumerate() {
                let what = format!("objective of player {}", i + 1);
                let rows = p.objective.as_deref().unwrap_or_default();
                if rows.len() != p.payoff_dim {
                    return Err(shape(format!(
                        "{what}: {} rows for payoff_dim {}",
                        rows.len(),
                        p.payoff_dim
                    )));
                }
                let mut cost = matrix(rows, n, &what)?;
                if p.sense == Sense::Max {
                    cost = cost.scaled(&Rational::from_integer((-1).into()));
                }
                let mut player = Player::new(p.dim, cost);
                if let Some(gens) = &p.dual_cone_generators {
                    let what = format!("dual_cone_generators of player {}", i + 1);
                    if gens.len() != p.payoff_dim {
                        return Err(shape(format!(
                            "{what}: {} rows for payoff_dim {}",
                            gens.len(),
                            p.payoff_dim
                        )));
                    }
                    let cols = gens.first().map_or(0, Vec::len);
                    player = player.with_dual_generators(matrix(gens, cols, &what)?);
                }
                players.push(player);
            }
            Some(LinearGame::new(players, constraints.clone(), boxes.clone()))
        };

        let oracle = match &self.oracle_costs {
            None => None,
            Some(srcs) => {
                let layout = StrategyLayout::new(&dims);
                let costs = srcs
                    .iter()
                    .map(|s| parse_cost_for(s, &layout))
                    .collect::<Result<Vec<_>, _>>()?;
                let constraint = match constraints {
                    _ if self.constraints.is_none() => OracleConstraint::None,
                    Constraints::Shared(h) => OracleConstraint::Shared(h),
                    Constraints::PerPlayer(hs) => OracleConstraint::PerPlayer(hs),
                };
                Some(OracleGame::new(&dims, costs, boxes, constraint)?)
            }
        };
        if linear.is_none() && oracle.is_none() {
            return Err(shape("game has neither objectives nor oracle_costs".into()));
        }
        Ok(LoadedGame {
            file: self,
            linear,
            oracle,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HrepRecord {
    #[serde(rename = "A")]
    pub a: Vec<Vec<Q>>,
    pub b: Vec<Q>,
    #[serde(rename = "A_eq")]
    pub a_eq: Vec<Vec<Q>>,
    pub b_eq: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRecord {
    pub vertices: Vec<Vec<Q>>,
    pub hrep: HrepRecord,
    pub dim: usize,
}

impl ComponentRecord {
    pub fn from_polytope(p: &Polytope) -> Self {
        let (a, b, a_eq, b_eq) = p.hrep().to_matrices();
        let rows = |m: QMatrix| m.to_rows().iter().map(|r| to_q(r)).collect();
        ComponentRecord {
            vertices: p.vertices().iter().map(|v| to_q(v)).collect(),
            hrep: HrepRecord {
                a: rows(a),
                b: to_q(&b),
                a_eq: rows(a_eq),
                b_eq: to_q(&b_eq),
            },
            dim: p.dim(),
        }
    }

    pub fn vertex_list(&self) -> Vec<QVector> {
        self.vertices.iter().map(|v| from_q(v)).collect()
    }

    pub fn to_polytope(&self) -> Result<Polytope, nashvop::Error> {
        Polytope::from_points(&self.vertex_list())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemovedRecord {
    pub face: ComponentRecord,
    /// One-based.
    pub player: usize,
    pub witness: Vec<Q>,
    pub cost: Q,
    pub best_response_value: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterRecord {
    pub removed: Vec<RemovedRecord>,
    pub kept: Vec<ComponentRecord>,
}

impl From<&RemovedFace> for RemovedRecord {
    fn from(r: &RemovedFace) -> Self {
        RemovedRecord {
            face: ComponentRecord::from_polytope(&r.face),
            player: r.player + 1,
            witness: to_q(&r.witness),
            cost: Q(r.cost.clone()),
            best_response_value: Q(r.best_response_value.clone()),
        }
    }
}

impl From<&FilterReport> for FilterRecord {
    fn from(r: &FilterReport) -> Self {
        FilterRecord {
            removed: r.removed.iter().map(RemovedRecord::from).collect(),
            kept: r.kept.iter().map(ComponentRecord::from_polytope).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerCheck {
    /// One-based.
    pub player: usize,
    pub equilibrium: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    /// `"lp"` or `"grid"`.
    pub method: String,
    pub point: Vec<Q>,
    pub equilibrium: bool,
    pub players: Vec<PlayerCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticRecord {
    pub kind: String,
    /// One-based when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub player: Option<usize>,
    pub message: String,
}

impl DiagnosticRecord {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        DiagnosticRecord {
            kind: kind.to_string(),
            player: None,
            message: message.into(),
        }
    }
}

impl From<&Diagnostic> for DiagnosticRecord {
    fn from(d: &Diagnostic) -> Self {
        let kind = match d.kind {
            DiagnosticKind::DimensionMismatch => "dimension_mismatch",
            DiagnosticKind::MissingBox => "missing_box",
            DiagnosticKind::InvalidBox => "invalid_box",
            DiagnosticKind::EmptyFeasibleSet => "empty_feasible_set",
            DiagnosticKind::EmptyIntersection => "empty_intersection",
            DiagnosticKind::DegenerateDualGenerators => "degenerate_dual_generators",
        };
        DiagnosticRecord {
            kind: kind.to_string(),
            player: d.player.map(|p| p + 1),
            message: d.message.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub schema: String,
    pub mode: String,
    /// `"exact"`, `"superset"`, `"subset"` or `"grid"`; absent on failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exactness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub player: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<Q>,
    pub components: Vec<ComponentRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter_report: Option<FilterRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckRecord>,
    #[serde(default)]
    pub diagnostics: Vec<DiagnosticRecord>,
}

impl ResultFile {
    pub fn new(mode: &str) -> Self {
        ResultFile {
            schema: SCHEMA.to_string(),
            mode: mode.to_string(),
            exactness: None,
            player: None,
            set: None,
            step: None,
            components: Vec::new(),
            filter_report: None,
            check: None,
            diagnostics: Vec::new(),
        }
    }

    pub fn with_components(mut self, parts: &[Polytope]) -> Self {
        self.components = parts.iter().map(ComponentRecord::from_polytope).collect();
        self
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn polytopes(&self) -> Result<Vec<Polytope>, nashvop::Error> {
        self.components
            .iter()
            .map(ComponentRecord::to_polytope)
            .collect()
    }

    /// Distinct component vertices in lexicographic order.
    pub fn extremal_points(&self) -> Vec<QVector> {
        let mut pts: Vec<QVector> = self
            .components
            .iter()
            .flat_map(|c| c.vertex_list())
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

/// Parses `"p/q,p/q,…"`.
pub fn parse_point(src: &str) -> Result<QVector, nashvop::Error> {
    src.split(',').map(parse_rational).collect()
}

pub fn format_point(x: &[Rational]) -> String {
    let parts: Vec<String> = x.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(", "))
}
