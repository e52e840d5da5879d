//! Alternating solver: closed-form resource allocation for fixed feature
//! sizes, greedy feature sizes for fixed resources, and the loop between them.

mod alternating;
mod quality;
mod resource;

pub use alternating::{alternate, alternate_with};
pub use quality::{energy_slope, round_sum_cap, solve_sizes};
pub use resource::{
    edge_side_allocation, min_pre_compute_time, closed_form_shares, local_speeds, solve_lambda, solve_resources,
    solve_resources_with, EdgeSideAllocation, LagrangeState, RadioRule, ResourceSolution,
};
