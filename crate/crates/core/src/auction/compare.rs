//! Truthful auction runs next to the sealed-bid Vickrey auction.

use std::collections::BTreeMap;

use crate::catalog::{to_weights, BuyerId, Instance};
use crate::error::Result;
use crate::greedy::{max_weight_base, vickrey_prices_at};
use crate::item::ItemSet;
use crate::strategy::truthful_bidders;

use super::engine::{run_auction, AuctionConfig, Bidders};
use super::event::AuctionEvent;
use super::outcome::Outcome;

#[derive(Clone, Debug)]
pub struct VcgComparison {
    pub outcome: Outcome,
    pub trace: Vec<AuctionEvent>,
    /// Greedy maximum base weight of the whole matroid under the signals.
    pub optimum: i64,
    /// Items sold at price 0 before bidding opened.
    pub presold: ItemSet,
    /// Vickrey prices at the sold base, on the minor left after the
    /// price-0 sales.
    pub vcg_prices: BTreeMap<BuyerId, u64>,
}

impl VcgComparison {
    /// Meaningful for truthful runs, where signals are valuations.
    pub fn welfare_matches(&self) -> bool {
        self.outcome.welfare as i64 == self.optimum
    }

    pub fn payments_match(&self) -> bool {
        self.outcome.buyer_payments == self.vcg_prices
    }

    pub fn matches(&self) -> bool {
        self.welfare_matches() && self.payments_match()
    }

    /// `(p1,p2,...)` in buyer order.
    pub fn payments_tuple(prices: &BTreeMap<BuyerId, u64>) -> String {
        let parts: Vec<String> = prices.values().map(u64::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// Runs the auction with truthful bidders and evaluates the Vickrey prices
/// of the same valuations at the base it sold.
pub fn compare_with_vcg(instance: &Instance, config: &AuctionConfig) -> Result<VcgComparison> {
    compare_bidders(instance, &mut truthful_bidders(instance), instance.valuations(), config)
}

/// As [`compare_with_vcg`], for bidders whose signals follow `bids`.
pub(crate) fn compare_bidders(
    instance: &Instance,
    bidders: &mut Bidders<'_>,
    bids: &[u64],
    config: &AuctionConfig,
) -> Result<VcgComparison> {
    let (outcome, trace) = run_auction(instance, bidders, config)?;
    let full = instance.matroid().view();
    let optimum = max_weight_base(&full, &to_weights(bids))?.weight;
    let presold: ItemSet = trace
        .iter()
        .filter_map(|ev| match ev {
            AuctionEvent::InitialSale { item, .. } => instance.ground().index_of(item.as_str()).ok(),
            _ => None,
        })
        .collect();
    let reduced = full.minor(ItemSet::EMPTY, presold)?;
    let vcg = vickrey_prices_at(&reduced, instance, bids, outcome.base - presold)?;
    Ok(VcgComparison {
        outcome,
        trace,
        optimum,
        presold,
        vcg_prices: vcg.buyer_prices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{doubled_triangle, four_buyer_graph, parallel_path};

    #[test]
    fn worked_instances_match() {
        let c = compare_with_vcg(&four_buyer_graph(), &AuctionConfig::default()).unwrap();
        assert!(c.matches());
        assert_eq!(VcgComparison::payments_tuple(&c.vcg_prices), "(0,2,4,2)");
        for inst in [parallel_path(), doubled_triangle()] {
            for config in [AuctionConfig::default(), AuctionConfig::long_step()] {
                assert!(compare_with_vcg(&inst, &config).unwrap().matches());
            }
        }
    }
}
