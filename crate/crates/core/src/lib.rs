pub mod cone;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod geometry;
pub mod lp;
pub mod molp;
pub mod oracle;
pub mod rational;

pub use cone::{dual_generators, scalarized_objective, DualGenerators};
pub use equilibrium::{Exactness, FilterReport, NashSet};
pub use error::{Error, Result};
pub use game::{
    Constraints, Diagnostic, DiagnosticKind, FeasibleSelector, GameKind, LinearGame, Player,
};
pub use geometry::{Constraint, ConstraintKind, HPolyhedron, Polytope, VPolytope};
pub use molp::{EfficientFace, ParetoDecisionSet};
pub use rational::{QMatrix, QVector, Rational};
