//! Exact rational linear algebra: systems, LP, projection.

mod fm;
mod hull;
mod simplex;
mod system;

pub use fm::{fm_eliminate, fm_eliminate_with, remove_redundant, FmOptions};
pub use hull::{convex_hull_hrep, convex_hull_hrep_with_stats, HullStats};
pub use simplex::{lp_feasible, lp_optimize, Feasibility, LpOutcome, PivotRule, PreparedLp};
pub use system::{LinConstraint, LinSystem, Relation};

pub(crate) use system::parse_hrep_lines;
