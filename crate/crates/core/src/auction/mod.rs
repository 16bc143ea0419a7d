//! The ascending auction: engine, events, traces, and their validation.

mod compare;
mod engine;
mod event;
mod outcome;
mod validate;

pub(crate) use compare::compare_bidders;
pub use compare::{compare_with_vcg, VcgComparison};
pub use engine::{
    detect_monopsony, resolve_initial_monopsonies, run_auction, AuctionConfig, AuctionState, Bidders,
    Observation, Phase, ResolutionOrder, Signaling, StepMode,
};
pub use event::{emit_trace, parse_trace, AuctionEvent, EventKind};
pub use outcome::{Outcome, OutcomeReport};
pub use validate::{audit_trace, validate_trace, TraceReport, Violation};
