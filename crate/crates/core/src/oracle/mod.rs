//! Independent brute-force Nash oracle for games with arbitrary cost
//! expressions on grids over box strategy sets.

mod expr;
mod grid;

pub use expr::{parse_cost, parse_cost_for, CostExpr, StrategyLayout};
pub use grid::{check_point, grid_nash_oracle, GridSpec, OracleConstraint, OracleGame, Violation};
