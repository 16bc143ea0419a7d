//! Ascending auctions for matroid bases.
//!
//! * [`matroid`]: oracles, minors, cocircuits, brute-force enumeration.
//! * [`catalog`]: graphic, uniform, partition and explicit matroids; instances.
//! * [`greedy`]: maximum-weight bases and sealed-bid Vickrey prices.
//! * [`auction`]: the ascending auction, its traces, and trace audits.
//! * [`strategy`]: bidders, scripts, consistency of signals, incentive checks.
//! * [`props`]: randomized brute-force property suites.
//! * [`io`]: JSON instance, bid and script files.
//!
//! The guide in `book/` walks through all of it; its snippets run as doctests.

pub mod auction;
pub mod catalog;
pub mod error;
pub mod fixtures;
pub mod greedy;
pub mod io;
pub mod item;
pub mod matroid;
pub mod props;
pub mod strategy;

pub use error::{Error, Result};
pub use item::{GroundSet, Item, ItemSet};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matroids.md")]
    mod matroids {}
    #[doc = include_str!("../../../book/src/vickrey.md")]
    mod vickrey {}
    #[doc = include_str!("../../../book/src/auction.md")]
    mod auction {}
    #[doc = include_str!("../../../book/src/strategies.md")]
    mod strategies {}
    #[doc = include_str!("../../../book/src/properties.md")]
    mod properties {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
