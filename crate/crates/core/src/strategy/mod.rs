//! Buyer strategies, signal consistency, and incentive experiments.

mod bidder;
mod consistency;
mod experiments;

pub use bidder::{
    reported_bidders, truthful_bidders, truthful_strategy, EventPattern, Rule, Script, Strategy,
};
pub use consistency::{consistency_check, signal_constraints, Conflict, Constraint, ConsistencyReport, Verdict};
pub use experiments::{
    appendix_b_scenarios, ex_post_equilibrium_check, proxy_auction, Deviation, EquilibriumReport, PayoffReport,
    ProfileResult, GRID_LIMIT,
};
