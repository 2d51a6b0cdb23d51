//! Exact decision procedure for Łukasiewicz and Gödel goodness conditions
//! over box unions.

mod program;
mod search;
mod simplex;

pub use program::{compile, CaseSystem, Node};
pub use search::{satisfiable, Outcome, Query, DEFAULT_CASE_BUDGET};
pub use simplex::{lp_feasible, LinearConstraint, Rel};
