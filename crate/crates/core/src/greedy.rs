//! Matroid greedy optimization and sealed-bid Vickrey prices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::catalog::{to_weights, BuyerId, Instance};
use crate::error::{Error, Result};
use crate::item::ItemSet;
use crate::matroid::MinorView;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightedBase {
    pub items: ItemSet,
    pub weight: i64,
}

/// Outcome of the sealed-bid Vickrey auction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcgResult {
    pub base: WeightedBase,
    pub buyer_prices: BTreeMap<BuyerId, u64>,
}

/// A maximum-weight base of `view`.
///
/// Scans active items by non-increasing weight (ties by ascending id) and
/// keeps each one that preserves independence. `weights` is indexed by item
/// over the whole ground set.
pub fn max_weight_base(view: &MinorView, weights: &[i64]) -> Result<WeightedBase> {
    if weights.len() != view.ground().len() {
        return Err(Error::input(format!(
            "weights cover {} items, ground set has {}",
            weights.len(),
            view.ground().len()
        )));
    }
    let mut order: Vec<usize> = view.active().iter().collect();
    order.sort_by_key(|&e| (std::cmp::Reverse(weights[e]), e));
    let mut items = ItemSet::EMPTY;
    for e in order {
        if view.independent_unchecked(items.with(e)) {
            items.insert(e);
        }
    }
    Ok(WeightedBase {
        items,
        weight: items.iter().map(|e| weights[e]).sum(),
    })
}

/// Vickrey prices for `bids` on the full matroid of `instance`.
pub fn sealed_bid_vcg(instance: &Instance, bids: &[u64]) -> Result<VcgResult> {
    sealed_bid_vcg_in(&instance.matroid().view(), instance, bids)
}

/// Vickrey prices on a minor of the instance's matroid, at the greedy optimum.
///
/// Buyer `i` pays the best bid total achievable without her items minus
/// what the other winners bid in the chosen base. Every buyer's items must
/// be avoidable by some base, otherwise the price is undefined.
pub fn sealed_bid_vcg_in(view: &MinorView, instance: &Instance, bids: &[u64]) -> Result<VcgResult> {
    let base = max_weight_base(view, &to_weights(bids))?;
    vickrey_prices_at(view, instance, bids, base.items)
}

/// Vickrey prices evaluated at a caller-chosen optimum.
///
/// When bids tie, different maximum-weight bases can split the same total
/// payment differently among buyers; this pins the split to `base`, which
/// must be a maximum-weight base of `view`.
pub fn vickrey_prices_at(
    view: &MinorView,
    instance: &Instance,
    bids: &[u64],
    base: ItemSet,
) -> Result<VcgResult> {
    let weights = to_weights(bids);
    let best = max_weight_base(view, &weights)?;
    if !view.is_base(base)? {
        return Err(Error::input(format!(
            "{} is not a base",
            view.ground().display(base)
        )));
    }
    let weight: i64 = base.iter().map(|e| weights[e]).sum();
    if weight != best.weight {
        return Err(Error::input(format!(
            "{} weighs {weight}, the optimum is {}",
            view.ground().display(base),
            best.weight
        )));
    }
    let rank = base.len();
    let mut buyer_prices = BTreeMap::new();
    for (buyer, items) in instance.interests() {
        let own = items & view.active();
        let without = view.minor(own, ItemSet::EMPTY)?;
        if without.full_rank() < rank {
            return Err(Error::Precondition {
                buyer,
                message: "every base uses one of her items (she holds a monopsony)".into(),
            });
        }
        let best_without = max_weight_base(&without, &weights)?.weight;
        let others: i64 = (base - own).iter().map(|e| weights[e]).sum();
        let price = u64::try_from(best_without - others).map_err(|_| {
            Error::Invariant(format!("negative Vickrey price for buyer {buyer}"))
        })?;
        buyer_prices.insert(buyer, price);
    }
    Ok(VcgResult {
        base: WeightedBase { items: base, weight },
        buyer_prices,
    })
}

/// Total valuation of the items in `base`.
pub fn welfare(instance: &Instance, base: ItemSet) -> u64 {
    base.iter().map(|e| instance.valuation(e)).sum()
}

/// Named rendering of a [`VcgResult`].
#[derive(Clone, Debug, Serialize)]
pub struct VcgReport {
    pub base: Vec<String>,
    pub bid_weight: i64,
    pub buyer_prices: BTreeMap<BuyerId, u64>,
}

impl VcgResult {
    pub fn report(&self, instance: &Instance) -> VcgReport {
        VcgReport {
            base: instance
                .ground()
                .names(self.base.items)
                .into_iter()
                .map(String::from)
                .collect(),
            bid_weight: self.base.weight,
            buyer_prices: self.buyer_prices.clone(),
        }
    }
}
