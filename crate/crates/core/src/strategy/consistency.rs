//! Is there any valuation that would explain a buyer's signals?
//!
//! Each round contributes, for every item of the buyer still for sale when
//! the price was raised, `v(e) <= p` if she announced it and `v(e) > p` if
//! she stayed silent. Buying `e` out of a monopsony `C` contributes
//! `v(e) >= v(f)` for every other `f` in `C`. Bounds are propagated along
//! the order constraints; the system is satisfiable iff no item ends up
//! with a lower bound above its upper bound.

use std::collections::BTreeMap;
use std::fmt;

use crate::auction::AuctionEvent;
use crate::catalog::{BuyerId, Instance};
use crate::error::{Error, Result};
use crate::item::{Item, ItemSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// Announced critical: `v(item) <= price`.
    CriticalAt { item: Item, price: u64 },
    /// Silent while for sale: `v(item) > price`.
    SilentAt { item: Item, price: u64 },
    /// Bought out of a monopsony: `v(chosen) >= v(over)`.
    Choice { chosen: Item, over: Item },
}

impl Constraint {
    pub fn holds(&self, v: &BTreeMap<Item, u64>) -> bool {
        match self {
            Constraint::CriticalAt { item, price } => v[item] <= *price,
            Constraint::SilentAt { item, price } => v[item] > *price,
            Constraint::Choice { chosen, over } => v[chosen] >= v[over],
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::CriticalAt { item, price } => write!(f, "`{item}` critical at {price}"),
            Constraint::SilentAt { item, price } => write!(f, "`{item}` not critical at {price}"),
            Constraint::Choice { chosen, over } => write!(f, "`{chosen}` chosen over `{over}`"),
        }
    }
}

/// Two constraint chains forcing an item's value both above and below.
///
/// `lower` starts with the constraint that raised the bound on `item` and
/// follows choices back to the silence it came from; `upper` likewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub item: Item,
    pub lower: Vec<Constraint>,
    pub upper: Vec<Constraint>,
}

impl Conflict {
    /// The two constraints that clash directly at `item`.
    pub fn pair(&self) -> (&Constraint, &Constraint) {
        (&self.upper[0], &self.lower[0])
    }
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chain = |c: &[Constraint]| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(" <- ");
        write!(
            f,
            "`{}`: {} contradicts {}",
            self.item,
            chain(&self.upper),
            chain(&self.lower)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The least valuation satisfying every constraint.
    Consistent { witness: BTreeMap<Item, u64> },
    Inconsistent { conflict: Conflict },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub buyer: BuyerId,
    pub constraints: Vec<Constraint>,
    pub verdict: Verdict,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        matches!(self.verdict, Verdict::Consistent { .. })
    }
}

/// Signal constraints of `buyer` along `trace`, in trace order.
pub fn signal_constraints(instance: &Instance, trace: &[AuctionEvent], buyer: BuyerId) -> Result<Vec<Constraint>> {
    if !instance.has_buyer(buyer) {
        return Err(Error::input(format!("unknown buyer {buyer}")));
    }
    let ground = instance.ground();
    let own = instance.interest(buyer);
    let mut active = ground.all();
    let mut out = Vec::new();
    // (price, own items for sale when it was raised, announced so far)
    let mut round: Option<(u64, ItemSet, ItemSet)> = None;
    let mut monopsony: Option<ItemSet> = None;
    let close = |round: Option<(u64, ItemSet, ItemSet)>, out: &mut Vec<Constraint>| {
        if let Some((price, open, announced)) = round {
            for e in open - announced {
                out.push(Constraint::SilentAt {
                    item: ground.item(e).clone(),
                    price,
                });
            }
        }
    };
    for event in trace {
        match event {
            AuctionEvent::PriceRaised { price } => {
                close(round.take(), &mut out);
                round = Some((*price, own & active, ItemSet::EMPTY));
            }
            AuctionEvent::CriticalAnnounced { buyer: b, item, price } if *b == buyer => {
                let e = ground.index_of(item.as_str())?;
                out.push(Constraint::CriticalAt {
                    item: item.clone(),
                    price: *price,
                });
                if let Some((_, _, announced)) = &mut round {
                    announced.insert(e);
                }
            }
            AuctionEvent::Deleted { item, .. } => {
                active.remove(ground.index_of(item.as_str())?);
            }
            AuctionEvent::MonopsonyDetected { buyer: b, cocircuit, .. } => {
                let ids: Vec<&str> = cocircuit.iter().map(Item::as_str).collect();
                monopsony = (*b == buyer).then(|| ground.set_of(&ids)).transpose()?;
            }
            AuctionEvent::Sold { buyer: b, item, .. } | AuctionEvent::InitialSale { buyer: b, item } => {
                let e = ground.index_of(item.as_str())?;
                active.remove(e);
                if *b == buyer {
                    if let Some(c) = monopsony.take() {
                        for f in c.without(e) {
                            out.push(Constraint::Choice {
                                chosen: item.clone(),
                                over: ground.item(f).clone(),
                            });
                        }
                    }
                }
            }
            AuctionEvent::CriticalAnnounced { .. } => {}
        }
    }
    close(round, &mut out);
    Ok(out)
}

/// Decides whether some integer valuation explains `buyer`'s signals.
pub fn consistency_check(instance: &Instance, trace: &[AuctionEvent], buyer: BuyerId) -> Result<ConsistencyReport> {
    let constraints = signal_constraints(instance, trace, buyer)?;
    let verdict = solve(instance, buyer, &constraints);
    Ok(ConsistencyReport {
        buyer,
        constraints,
        verdict,
    })
}

/// Bound with the index of the constraint that set it.
#[derive(Clone, Copy)]
struct Bound {
    value: u64,
    source: Option<usize>,
}

fn solve(instance: &Instance, buyer: BuyerId, constraints: &[Constraint]) -> Verdict {
    let items: Vec<Item> = instance
        .ground()
        .names(instance.interest(buyer))
        .into_iter()
        .map(|s| Item::new(s).expect("ground ids are valid"))
        .collect();
    let mut lower: BTreeMap<&Item, Bound> = items.iter().map(|i| (i, Bound { value: 0, source: None })).collect();
    let mut upper: BTreeMap<&Item, Bound> = items
        .iter()
        .map(|i| (i, Bound { value: u64::MAX, source: None }))
        .collect();
    for (k, c) in constraints.iter().enumerate() {
        match c {
            Constraint::CriticalAt { item, price } => {
                let b = upper.get_mut(item).expect("own item");
                if *price < b.value {
                    *b = Bound { value: *price, source: Some(k) };
                }
            }
            Constraint::SilentAt { item, price } => {
                let b = lower.get_mut(item).expect("own item");
                if price + 1 > b.value {
                    *b = Bound { value: price + 1, source: Some(k) };
                }
            }
            Constraint::Choice { .. } => {}
        }
    }
    // every pass settles at least one more step of any chain
    for _ in 0..=items.len() {
        let mut changed = false;
        for (k, c) in constraints.iter().enumerate() {
            let Constraint::Choice { chosen, over } = c else { continue };
            if lower[over].value > lower[chosen].value {
                let value = lower[over].value;
                lower.insert(chosen, Bound { value, source: Some(k) });
                changed = true;
            }
            if upper[chosen].value < upper[over].value {
                let value = upper[chosen].value;
                upper.insert(over, Bound { value, source: Some(k) });
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let chain = |start: &Item, bounds: &BTreeMap<&Item, Bound>, up: bool| {
        let mut out = Vec::new();
        let mut at = start;
        while let Some(k) = bounds[at].source {
            out.push(constraints[k].clone());
            match &constraints[k] {
                Constraint::Choice { chosen, over } => at = if up { chosen } else { over },
                _ => break,
            }
            if out.len() > constraints.len() {
                break;
            }
        }
        out
    };
    // report the clash closest to an announcement: shortest upper chain first
    let conflict = items
        .iter()
        .filter(|item| lower[item].value > upper[item].value)
        .map(|item| Conflict {
            item: item.clone(),
            lower: chain(item, &lower, false),
            upper: chain(item, &upper, true),
        })
        .min_by_key(|c| c.upper.len());
    if let Some(conflict) = conflict {
        return Verdict::Inconsistent { conflict };
    }
    Verdict::Consistent {
        witness: lower.into_iter().map(|(i, b)| (i.clone(), b.value)).collect(),
    }
}
