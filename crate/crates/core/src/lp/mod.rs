//! Exact linear programming: simplex, Pareto-efficiency test and the
//! parametric best-response LP.

mod efficiency;
mod parametric;
mod simplex;

pub use efficiency::{efficiency_test, EfficiencyVerdict};
pub use parametric::{
    evaluate_regions, parametric_best_response, parametric_lp, AffineFunction, CriticalRegion,
    RegionStatus,
};
pub use simplex::{is_feasible, solve_lp, LpProblem, LpSolution, LpStatus};
