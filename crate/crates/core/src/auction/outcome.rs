use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{BuyerId, Instance};
use crate::item::ItemSet;

/// Sold base with its prices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub base: ItemSet,
    pub item_prices: BTreeMap<usize, u64>,
    /// Every buyer of the instance, winners or not.
    pub buyer_payments: BTreeMap<BuyerId, u64>,
    pub welfare: u64,
}

impl Outcome {
    /// Outcome of the given `(item, price)` sales.
    pub fn from_sales(instance: &Instance, sales: &[(usize, u64)]) -> Self {
        let mut buyer_payments: BTreeMap<BuyerId, u64> =
            instance.buyers().iter().map(|&b| (b, 0)).collect();
        let mut base = ItemSet::EMPTY;
        let mut item_prices = BTreeMap::new();
        let mut welfare = 0;
        for &(e, price) in sales {
            base.insert(e);
            item_prices.insert(e, price);
            *buyer_payments.entry(instance.owner(e)).or_default() += price;
            welfare += instance.valuation(e);
        }
        Outcome {
            base,
            item_prices,
            buyer_payments,
            welfare,
        }
    }

    /// Payments in ascending buyer order.
    pub fn payments(&self) -> Vec<u64> {
        self.buyer_payments.values().copied().collect()
    }

    /// Value of the won items minus the payment, for one buyer.
    pub fn utility(&self, instance: &Instance, buyer: BuyerId) -> i64 {
        let won: u64 = (self.base & instance.interest(buyer))
            .iter()
            .map(|e| instance.valuation(e))
            .sum();
        won as i64 - self.buyer_payments.get(&buyer).copied().unwrap_or(0) as i64
    }

    pub fn report(&self, instance: &Instance) -> OutcomeReport {
        let g = instance.ground();
        OutcomeReport {
            base: g.names(self.base).into_iter().map(String::from).collect(),
            item_prices: self
                .item_prices
                .iter()
                .map(|(&e, &p)| (g.item(e).to_string(), p))
                .collect(),
            buyer_payments: self.buyer_payments.clone(),
            welfare: self.welfare,
        }
    }
}

/// [`Outcome`] with items named.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeReport {
    pub base: Vec<String>,
    pub item_prices: BTreeMap<String, u64>,
    pub buyer_payments: BTreeMap<BuyerId, u64>,
    pub welfare: u64,
}
