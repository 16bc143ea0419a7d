//! The ascending matroid auction.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::{BuyerId, Instance};
use crate::error::{Error, Result};
use crate::item::{GroundSet, Item, ItemSet};
use crate::matroid::{Cocircuit, MinorView};

use super::event::AuctionEvent;
use super::outcome::Outcome;

/// What a buyer may look at when asked for a signal.
///
/// `history` is the public event log up to, but excluding, the round's
/// simultaneous announcements.
#[derive(Clone, Copy, Debug)]
pub struct Observation<'a> {
    pub last_price: Option<u64>,
    pub active: ItemSet,
    pub ground: &'a GroundSet,
    pub history: &'a [AuctionEvent],
}

/// The buyer side of the auction.
pub trait Signaling {
    /// Smallest price above the current one at which the buyer will have a
    /// critical item, or `None` if she never will. Used by long-step auctions.
    fn next_critical_threshold(&mut self, obs: &Observation<'_>) -> Option<u64>;

    /// Items announced critical at `price`.
    fn critical_items(&mut self, price: u64, obs: &Observation<'_>) -> ItemSet;

    /// The item to buy out of a monopsony; must belong to `cocircuit`.
    fn choose_from_monopsony(&mut self, cocircuit: Cocircuit, obs: &Observation<'_>) -> usize;

    /// Largest threshold the buyer could ever signal, if known.
    fn max_threshold(&self) -> Option<u64> {
        None
    }
}

/// One signaling strategy per buyer.
pub type Bidders<'a> = BTreeMap<BuyerId, Box<dyn Signaling + 'a>>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StepMode {
    /// Raise the price by one each round.
    #[default]
    UnitStep,
    /// Jump straight to the next price at which some buyer has a critical item.
    LongStep,
}

/// Order in which simultaneous work is serialized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ResolutionOrder {
    /// Critical items by ascending item id, monopsonies by ascending buyer id.
    #[default]
    Ascending,
    /// Both orders reshuffled from a seeded generator at every use.
    Shuffled { seed: u64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AuctionConfig {
    pub mode: StepMode,
    /// Highest price the auction may reach; by default one above the largest
    /// valuation or announced threshold bound.
    pub price_ceiling: Option<u64>,
    pub order: ResolutionOrder,
}

impl AuctionConfig {
    pub fn long_step() -> Self {
        AuctionConfig {
            mode: StepMode::LongStep,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Raising,
    Deleting,
    Resolving,
    Done,
}

#[derive(Clone, Debug)]
pub struct AuctionState {
    /// Current minor: deleted items removed, sold items contracted.
    pub view: MinorView,
    pub price: Option<u64>,
    pub sold: Vec<(usize, u64)>,
    /// Items announced critical at the current price, in processing order.
    pub pending_critical: Vec<usize>,
    pub phase: Phase,
}

impl AuctionState {
    pub fn new(view: MinorView) -> Self {
        AuctionState {
            view,
            price: None,
            sold: Vec::new(),
            pending_critical: Vec::new(),
            phase: Phase::Resolving,
        }
    }
}

/// The first buyer, by ascending id, whose active items contain a cocircuit.
pub fn detect_monopsony(state: &AuctionState, instance: &Instance) -> Result<Option<(BuyerId, Cocircuit)>> {
    first_monopsony(&state.view, instance, instance.buyers())
}

pub(crate) fn first_monopsony(
    view: &MinorView,
    instance: &Instance,
    order: &[BuyerId],
) -> Result<Option<(BuyerId, Cocircuit)>> {
    for &buyer in order {
        let within = instance.interest(buyer) & view.active();
        if within.is_empty() {
            continue;
        }
        if let Some(c) = view.find_cocircuit_within(within)? {
            return Ok(Some((buyer, c)));
        }
    }
    Ok(None)
}

/// Sells one item of every monopsony present before bidding starts, at
/// price 0, and returns those sales with the resulting minor.
pub fn resolve_initial_monopsonies(
    instance: &Instance,
    bidders: &mut Bidders<'_>,
) -> Result<(Vec<AuctionEvent>, MinorView)> {
    let config = AuctionConfig::default();
    let mut engine = Engine::new(instance, bidders, &config)?;
    engine.resolve(0, true)?;
    let sales = engine
        .events
        .into_iter()
        .filter(|e| matches!(e, AuctionEvent::InitialSale { .. }))
        .collect();
    Ok((sales, engine.state.view))
}

/// Runs the auction to completion and returns the outcome with its full trace.
pub fn run_auction(
    instance: &Instance,
    bidders: &mut Bidders<'_>,
    config: &AuctionConfig,
) -> Result<(Outcome, Vec<AuctionEvent>)> {
    let mut engine = Engine::new(instance, bidders, config)?;
    engine.run()?;
    let outcome = Outcome::from_sales(instance, &engine.state.sold);
    Ok((outcome, engine.events))
}

struct Engine<'r, 'b> {
    instance: &'r Instance,
    bidders: &'r mut Bidders<'b>,
    config: &'r AuctionConfig,
    state: AuctionState,
    events: Vec<AuctionEvent>,
    rng: Option<ChaCha8Rng>,
}

impl<'r, 'b> Engine<'r, 'b> {
    fn new(instance: &'r Instance, bidders: &'r mut Bidders<'b>, config: &'r AuctionConfig) -> Result<Self> {
        if let Some(missing) = instance.buyers().iter().find(|b| !bidders.contains_key(b)) {
            return Err(Error::input(format!("no strategy for buyer {missing}")));
        }
        let rng = match config.order {
            ResolutionOrder::Ascending => None,
            ResolutionOrder::Shuffled { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        Ok(Engine {
            instance,
            bidders,
            config,
            state: AuctionState::new(instance.matroid().view()),
            events: Vec::new(),
            rng,
        })
    }

    fn ground(&self) -> &'r GroundSet {
        self.instance.ground()
    }

    fn name(&self, e: usize) -> Item {
        self.ground().item(e).clone()
    }

    fn buyer_order(&mut self) -> Vec<BuyerId> {
        let mut order = self.instance.buyers().to_vec();
        if let Some(rng) = &mut self.rng {
            order.shuffle(rng);
        }
        order
    }

    fn ceiling(&self) -> u64 {
        self.config.price_ceiling.unwrap_or_else(|| {
            let hinted = self.bidders.values().filter_map(|b| b.max_threshold()).max();
            hinted.unwrap_or(0).max(self.instance.max_valuation()) + 1
        })
    }

    fn observe(&self) -> (Option<u64>, ItemSet) {
        (self.state.price, self.state.view.active())
    }

    fn run(&mut self) -> Result<()> {
        self.resolve(0, true)?;
        let ceiling = self.ceiling();
        while self.state.view.full_rank() > 0 {
            self.state.phase = Phase::Raising;
            let (price, minimizers) = match self.config.mode {
                StepMode::UnitStep => (self.state.price.map_or(0, |p| p + 1), Vec::new()),
                StepMode::LongStep => self.next_long_step()?,
            };
            if price > ceiling {
                return Err(Error::Invariant(format!(
                    "price {price} passed the ceiling {ceiling} before a base was sold"
                )));
            }
            let critical = self.collect_announcements(price, &minimizers)?;
            self.events.push(AuctionEvent::PriceRaised { price });
            self.state.price = Some(price);
            for e in critical {
                self.events.push(AuctionEvent::CriticalAnnounced {
                    buyer: self.instance.owner(e),
                    item: self.name(e),
                    price,
                });
            }
            let mut pending: Vec<usize> = critical.iter().collect();
            if let Some(rng) = &mut self.rng {
                pending.shuffle(rng);
            }
            self.state.pending_critical = pending.clone();
            self.state.phase = Phase::Deleting;
            for f in pending {
                if !self.state.view.active().contains(f) {
                    continue;
                }
                self.state.view = self.state.view.delete(f)?;
                self.events.push(AuctionEvent::Deleted {
                    item: self.name(f),
                    price,
                });
                self.resolve(price, false)?;
                self.state.phase = Phase::Deleting;
            }
        }
        self.state.phase = Phase::Done;
        Ok(())
    }

    /// Price of the next long-step round and the buyers attaining it.
    fn next_long_step(&mut self) -> Result<(u64, Vec<BuyerId>)> {
        let (last_price, active) = self.observe();
        let ground = self.ground();
        let mut thresholds = Vec::new();
        for buyer in self.instance.buyers().to_vec() {
            let obs = Observation {
                last_price,
                active,
                ground,
                history: &self.events,
            };
            let Some(t) = self.bidders.get_mut(&buyer).expect("checked").next_critical_threshold(&obs) else {
                continue;
            };
            if last_price.is_some_and(|p| t <= p) {
                return Err(Error::Protocol {
                    buyer,
                    message: format!("threshold {t} is not above the current price {}", last_price.unwrap_or(0)),
                });
            }
            thresholds.push((buyer, t));
        }
        let price = thresholds.iter().map(|&(_, t)| t).min().ok_or_else(|| {
            Error::Invariant("no buyer will ever announce a critical item, but no base has been sold".into())
        })?;
        let minimizers = thresholds.into_iter().filter(|&(_, t)| t == price).map(|(b, _)| b).collect();
        Ok((price, minimizers))
    }

    fn collect_announcements(&mut self, price: u64, must_announce: &[BuyerId]) -> Result<ItemSet> {
        let (last_price, active) = self.observe();
        let ground = self.ground();
        let mut critical = ItemSet::EMPTY;
        for buyer in self.instance.buyers().to_vec() {
            let obs = Observation {
                last_price,
                active,
                ground,
                history: &self.events,
            };
            let items = self.bidders.get_mut(&buyer).expect("checked").critical_items(price, &obs);
            let foreign = items - self.instance.interest(buyer);
            if let Some(e) = foreign.first() {
                return Err(Error::Protocol {
                    buyer,
                    message: match ground.items().get(e) {
                        Some(item) => format!("announced `{item}`, which is not hers"),
                        None => format!("announced unknown item #{e}"),
                    },
                });
            }
            if let Some(e) = (items - active).first() {
                return Err(Error::Protocol {
                    buyer,
                    message: format!("announced `{}`, which is no longer for sale", ground.item(e)),
                });
            }
            if items.is_empty() && must_announce.contains(&buyer) {
                return Err(Error::Protocol {
                    buyer,
                    message: format!("signaled threshold {price} but announced nothing at it"),
                });
            }
            critical = critical | items;
        }
        Ok(critical)
    }

    /// Sells out of monopsonies until none remains.
    fn resolve(&mut self, price: u64, initial: bool) -> Result<()> {
        self.state.phase = Phase::Resolving;
        loop {
            let order = self.buyer_order();
            let Some((buyer, cocircuit)) = first_monopsony(&self.state.view, self.instance, &order)? else {
                return Ok(());
            };
            let ground = self.ground();
            self.events.push(AuctionEvent::MonopsonyDetected {
                buyer,
                cocircuit: cocircuit.items().iter().map(|e| self.name(e)).collect(),
                price,
            });
            let (last_price, active) = self.observe();
            let obs = Observation {
                last_price,
                active,
                ground,
                history: &self.events,
            };
            let e = self.bidders.get_mut(&buyer).expect("checked").choose_from_monopsony(cocircuit, &obs);
            if !cocircuit.contains(e) {
                return Err(Error::Protocol {
                    buyer,
                    message: format!(
                        "chose {} outside the monopsony {}",
                        ground.items().get(e).map_or(format!("#{e}"), |i| format!("`{i}`")),
                        ground.display(cocircuit.items())
                    ),
                });
            }
            self.events.push(if initial {
                AuctionEvent::InitialSale { buyer, item: self.name(e) }
            } else {
                AuctionEvent::Sold {
                    buyer,
                    item: self.name(e),
                    price,
                }
            });
            self.state.view = self.state.view.contract(e)?;
            self.state.sold.push((e, price));
        }
    }
}
