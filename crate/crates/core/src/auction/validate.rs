//! Replaying traces against an instance.

use std::fmt;

use serde::Serialize;

use crate::catalog::{BuyerId, Instance};
use crate::error::Result;
use crate::greedy::{max_weight_base, vickrey_prices_at};
use crate::item::{Item, ItemSet};
use crate::matroid::{MinorView, SubsetTable, ENUMERATION_LIMIT};

use super::engine::first_monopsony;
use super::event::AuctionEvent;
use super::outcome::Outcome;

/// A broken invariant; `index` points into the trace, `None` means the
/// trace as a whole.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "event {i}: {}", self.message),
            None => write!(f, "trace: {}", self.message),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub violations: Vec<Violation>,
}

impl TraceReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn at(&mut self, index: usize, message: impl Into<String>) {
        self.violations.push(Violation {
            index: Some(index),
            message: message.into(),
        });
    }

    fn whole(&mut self, message: impl Into<String>) {
        self.violations.push(Violation {
            index: None,
            message: message.into(),
        });
    }
}

/// Replay state shared by [`validate_trace`] and [`audit_trace`].
struct Replay<'a> {
    instance: &'a Instance,
    view: MinorView,
    price: Option<u64>,
    announced: ItemSet,
    /// Open monopsony awaiting its sale.
    monopsony: Option<(BuyerId, ItemSet)>,
    sales: Vec<(usize, u64)>,
    presold: ItemSet,
}

impl<'a> Replay<'a> {
    fn new(instance: &'a Instance) -> Self {
        Replay {
            instance,
            view: instance.matroid().view(),
            price: None,
            announced: ItemSet::EMPTY,
            monopsony: None,
            sales: Vec::new(),
            presold: ItemSet::EMPTY,
        }
    }

    fn index(&self, item: &Item) -> std::result::Result<usize, String> {
        self.instance
            .ground()
            .index_of(item.as_str())
            .map_err(|_| format!("unknown item `{item}`"))
    }

    fn active(&self, item: &Item) -> std::result::Result<usize, String> {
        let e = self.index(item)?;
        if self.view.active().contains(e) {
            Ok(e)
        } else {
            Err(format!("`{item}` is no longer for sale"))
        }
    }

    fn owned(&self, buyer: BuyerId, e: usize) -> std::result::Result<(), String> {
        let owner = self.instance.owner(e);
        if owner == buyer {
            Ok(())
        } else {
            Err(format!("`{}` belongs to buyer {owner}, not {buyer}", self.instance.ground().item(e)))
        }
    }

    fn at_price(&self, price: u64, what: &str) -> std::result::Result<(), String> {
        let current = self.price.unwrap_or(0);
        if price == current {
            Ok(())
        } else {
            Err(format!("{what} price {price} differs from the current price {current}"))
        }
    }

    /// Before a price rise or a deletion, every monopsony must be resolved.
    fn settled(&self) -> std::result::Result<(), String> {
        if self.monopsony.is_some() {
            return Err("previous monopsony was never sold".into());
        }
        match first_monopsony(&self.view, self.instance, self.instance.buyers()) {
            Ok(Some((b, c))) => Err(format!(
                "buyer {b} still holds the monopsony {}",
                self.instance.ground().display(c.items())
            )),
            Ok(None) => Ok(()),
            Err(e) => Err(e.to_string()),
        }
    }

    fn apply(&mut self, event: &AuctionEvent) -> std::result::Result<(), String> {
        match event {
            AuctionEvent::PriceRaised { price } => {
                self.settled()?;
                if let Some(p) = self.price {
                    if *price <= p {
                        return Err(format!("price {price} does not rise above {p}"));
                    }
                }
                self.price = Some(*price);
                self.announced = ItemSet::EMPTY;
            }
            AuctionEvent::CriticalAnnounced { buyer, item, price } => {
                if self.price.is_none() {
                    return Err("announcement before the first price".into());
                }
                self.at_price(*price, "announcement")?;
                let e = self.active(item)?;
                self.owned(*buyer, e)?;
                self.announced.insert(e);
            }
            AuctionEvent::Deleted { item, price } => {
                self.at_price(*price, "deletion")?;
                self.settled()?;
                let e = self.active(item)?;
                if !self.announced.contains(e) {
                    return Err(format!("`{item}` deleted without being announced critical"));
                }
                self.view = self.view.delete(e).map_err(|e| e.to_string())?;
            }
            AuctionEvent::MonopsonyDetected {
                buyer,
                cocircuit,
                price,
            } => {
                self.at_price(*price, "monopsony")?;
                if self.monopsony.is_some() {
                    return Err("previous monopsony was never sold".into());
                }
                let mut set = ItemSet::EMPTY;
                for item in cocircuit {
                    let e = self.active(item)?;
                    self.owned(*buyer, e)?;
                    set.insert(e);
                }
                if !self.view.is_cocircuit(set).map_err(|e| e.to_string())? {
                    return Err(format!(
                        "{} is not a cocircuit of the current minor",
                        self.instance.ground().display(set)
                    ));
                }
                self.monopsony = Some((*buyer, set));
            }
            AuctionEvent::Sold { buyer, item, price } => {
                if self.price.is_none() {
                    return Err("sale before the first price; expected INITSALE".into());
                }
                let current = self.price.unwrap_or(0);
                if *price != current {
                    return Err(format!(
                        "sale price {price} differs from the price {current} of the preceding deletion epoch"
                    ));
                }
                self.sell(*buyer, item, *price)?;
            }
            AuctionEvent::InitialSale { buyer, item } => {
                if self.price.is_some() {
                    return Err("initial sale after bidding started".into());
                }
                let e = self.sell(*buyer, item, 0)?;
                self.presold.insert(e);
            }
        }
        Ok(())
    }

    fn sell(&mut self, buyer: BuyerId, item: &Item, price: u64) -> std::result::Result<usize, String> {
        let e = self.active(item)?;
        match self.monopsony.take() {
            Some((b, c)) if b == buyer && c.contains(e) => {}
            Some((b, c)) => {
                return Err(format!(
                    "sale of `{item}` to buyer {buyer} does not match the monopsony {} of buyer {b}",
                    self.instance.ground().display(c)
                ))
            }
            None => return Err(format!("sale of `{item}` without a preceding monopsony")),
        }
        self.view = self.view.contract(e).map_err(|e| e.to_string())?;
        self.sales.push((e, price));
        Ok(e)
    }

    fn finish(&self, report: &mut TraceReport) {
        if let Err(message) = self.settled() {
            report.whole(message);
        }
        let sold: ItemSet = self.sales.iter().map(|&(e, _)| e).collect();
        let whole = self.instance.matroid().view();
        if !whole.is_base(sold).unwrap_or(false) {
            report.whole(format!(
                "sold items {} are not a base",
                self.instance.ground().display(sold)
            ));
        }
    }
}

/// Replays `trace` and reports every event that breaks the auction's rules.
///
/// Checks prices, ownership, announcements before deletions, that every
/// monopsony is a real cocircuit and is resolved before anything else
/// happens, that each sale matches its monopsony, and that a base is sold.
/// Replay stops at the first violation, since later state is meaningless.
pub fn validate_trace(trace: &[AuctionEvent], instance: &Instance) -> TraceReport {
    let mut report = TraceReport::default();
    let mut replay = Replay::new(instance);
    for (i, event) in trace.iter().enumerate() {
        if let Err(message) = replay.apply(event) {
            report.at(i, message);
            return report;
        }
    }
    replay.finish(&mut report);
    report
}

/// [`validate_trace`] plus the invariants of a truthful run, with the
/// instance's valuations taken as the buyers' signals.
///
/// * after every sale, the items sold so far extend to an optimal base;
/// * each deletion creates at most one new monopsony cocircuit per buyer
///   (checked by enumeration up to 12 items);
/// * each sale is preceded in its round by the deletion of an item valued
///   exactly at the sale price;
/// * the sold base is optimal, the final price does not pass the largest
///   valuation, and payments equal Vickrey prices at the sold base.
pub fn audit_trace(trace: &[AuctionEvent], instance: &Instance) -> Result<TraceReport> {
    let mut report = validate_trace(trace, instance);
    if !report.is_clean() {
        return Ok(report);
    }
    let weights = instance.weights();
    let full = instance.matroid().view();
    let optimum = max_weight_base(&full, &weights)?.weight;
    let enumerate = instance.ground().len() <= ENUMERATION_LIMIT.min(12);
    let mut replay = Replay::new(instance);
    let mut deleted_at_price = ItemSet::EMPTY;
    for (i, event) in trace.iter().enumerate() {
        let before = replay.view.clone();
        replay.apply(event).expect("validated above");
        match event {
            AuctionEvent::PriceRaised { .. } => deleted_at_price = ItemSet::EMPTY,
            AuctionEvent::Deleted { item, price } => {
                let f = instance.ground().index_of(item.as_str())?;
                deleted_at_price.insert(f);
                if instance.valuation(f) > *price {
                    report.at(i, format!("`{item}` valued {} deleted at {price}", instance.valuation(f)));
                }
                if enumerate {
                    let old = SubsetTable::build(&before)?.cocircuits();
                    let new = SubsetTable::build(&replay.view)?.cocircuits();
                    for (buyer, items) in instance.interests() {
                        let fresh = new
                            .iter()
                            .filter(|c| c.is_subset(items) && !old.contains(c))
                            .count();
                        if fresh > 1 {
                            report.at(i, format!("deletion created {fresh} new monopsonies of buyer {buyer}"));
                        }
                    }
                }
            }
            AuctionEvent::Sold { .. } | AuctionEvent::InitialSale { .. } => {
                let sold: ItemSet = replay.sales.iter().map(|&(e, _)| e).collect();
                let rest = full.minor(ItemSet::EMPTY, sold)?;
                let extended = sold.iter().map(|e| weights[e]).sum::<i64>() + max_weight_base(&rest, &weights)?.weight;
                if extended != optimum {
                    report.at(i, format!("sold items reach at most {extended}, the optimum is {optimum}"));
                }
                if let AuctionEvent::Sold { item, price, .. } = event {
                    if !deleted_at_price.iter().any(|f| instance.valuation(f) == *price) {
                        report.at(i, format!("no item valued {price} was deleted before `{item}` sold"));
                    }
                }
            }
            _ => {}
        }
    }
    let outcome = Outcome::from_sales(instance, &replay.sales);
    if outcome.welfare as i64 != optimum {
        report.whole(format!("welfare {} is below the optimum {optimum}", outcome.welfare));
    }
    if let Some(p) = replay.price {
        if p > instance.max_valuation() {
            report.whole(format!("final price {p} passed the largest valuation {}", instance.max_valuation()));
        }
    }
    let strays: ItemSet = replay
        .view
        .active()
        .iter()
        .filter(|&e| replay.view.independent_unchecked(ItemSet::singleton(e)))
        .collect();
    if !strays.is_empty() {
        report.whole(format!(
            "items {} were neither sold, deleted, nor left as loops",
            instance.ground().display(strays)
        ));
    }
    // Vickrey prices on the minor left after the price-0 sales
    let reduced = full.minor(ItemSet::EMPTY, replay.presold)?;
    let bought = outcome.base - replay.presold;
    match vickrey_prices_at(&reduced, instance, instance.valuations(), bought) {
        Ok(vcg) => {
            if vcg.buyer_prices != outcome.buyer_payments {
                report.whole(format!(
                    "payments {:?} differ from Vickrey prices {:?}",
                    outcome.payments(),
                    vcg.buyer_prices.values().collect::<Vec<_>>()
                ));
            }
        }
        Err(e) => report.whole(format!("Vickrey prices undefined: {e}")),
    }
    Ok(report)
}
