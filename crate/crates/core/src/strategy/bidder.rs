//! Buyer strategies: truthful, reported-valuation proxies, and scripts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::auction::{AuctionEvent, Bidders, EventKind, Observation, Signaling};
use crate::catalog::{BuyerId, Instance};
use crate::error::{Error, Result};
use crate::item::ItemSet;
use crate::matroid::Cocircuit;

/// A signaling strategy for one buyer.
///
/// Every kind acts truthfully with respect to some valuation of the buyer's
/// items: an item is critical at `p` once its value is at most `p`, and out
/// of a monopsony the most valuable item is taken, ties to the smaller id.
/// Scripts may switch that valuation, and the monopsony preference, as the
/// public history unfolds.
#[derive(Clone, Debug)]
pub struct Strategy {
    items: ItemSet,
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    Truthful(BTreeMap<usize, u64>),
    Reported(BTreeMap<usize, u64>),
    Scripted(ResolvedScript),
}

/// Truthful signaling for a buyer with the given item values.
pub fn truthful_strategy(valuation: BTreeMap<usize, u64>) -> Strategy {
    Strategy {
        items: valuation.keys().copied().collect(),
        kind: Kind::Truthful(valuation),
    }
}

impl Strategy {
    /// Signals as a truthful buyer whose valuation were `bids`.
    pub fn reported(bids: BTreeMap<usize, u64>) -> Strategy {
        Strategy {
            items: bids.keys().copied().collect(),
            kind: Kind::Reported(bids),
        }
    }

    /// Runs `script` for `buyer`; items left out of the script's valuation
    /// keep their true values.
    pub fn scripted(script: &Script, instance: &Instance, buyer: BuyerId) -> Result<Strategy> {
        if !instance.has_buyer(buyer) {
            return Err(Error::input(format!("unknown buyer {buyer}")));
        }
        let items = instance.interest(buyer);
        let ground = instance.ground();
        let own = |id: &str| -> Result<usize> {
            let e = ground.index_of(id)?;
            if items.contains(e) {
                Ok(e)
            } else {
                Err(Error::input(format!("`{id}` is not an item of buyer {buyer}")))
            }
        };
        let mut baseline = instance.buyer_valuation(buyer);
        for (id, &v) in &script.valuation {
            baseline.insert(own(id)?, v);
        }
        let mut rules = Vec::with_capacity(script.rules.len());
        for rule in &script.rules {
            for pattern in &rule.when {
                if let Some(id) = &pattern.item {
                    ground.index_of(id)?;
                }
            }
            rules.push(ResolvedRule {
                when: rule.when.clone(),
                threshold: rule
                    .threshold
                    .iter()
                    .map(|(id, &v)| Ok((own(id)?, v)))
                    .collect::<Result<_>>()?,
                prefer: rule.prefer.iter().map(|id| own(id)).collect::<Result<_>>()?,
            });
        }
        Ok(Strategy {
            items,
            kind: Kind::Scripted(ResolvedScript { baseline, rules }),
        })
    }

    pub fn items(&self) -> ItemSet {
        self.items
    }

    pub fn is_truthful(&self) -> bool {
        matches!(self.kind, Kind::Truthful(_))
    }

    /// Valuation the strategy currently acts on, and its monopsony preference.
    fn current(&self, history: &[AuctionEvent]) -> (BTreeMap<usize, u64>, Vec<usize>) {
        match &self.kind {
            Kind::Truthful(v) | Kind::Reported(v) => (v.clone(), Vec::new()),
            Kind::Scripted(script) => script.current(history),
        }
    }
}

impl Signaling for Strategy {
    fn next_critical_threshold(&mut self, obs: &Observation<'_>) -> Option<u64> {
        let (values, _) = self.current(obs.history);
        let floor = obs.last_price.map_or(0, |p| p + 1);
        (self.items & obs.active).iter().map(|e| values[&e].max(floor)).min()
    }

    fn critical_items(&mut self, price: u64, obs: &Observation<'_>) -> ItemSet {
        let (values, _) = self.current(obs.history);
        (self.items & obs.active).iter().filter(|e| values[e] <= price).collect()
    }

    fn choose_from_monopsony(&mut self, cocircuit: Cocircuit, obs: &Observation<'_>) -> usize {
        let (values, prefer) = self.current(obs.history);
        if let Some(&e) = prefer.iter().find(|&&e| cocircuit.contains(e)) {
            return e;
        }
        // the strategy's own items only; a cocircuit is always inside them
        let first = cocircuit.items().first().expect("cocircuits are nonempty");
        cocircuit
            .items()
            .iter()
            .filter(|e| values.contains_key(e))
            .fold(first, |best, e| {
                if values.get(&e) > values.get(&best) {
                    e
                } else {
                    best
                }
            })
    }

    fn max_threshold(&self) -> Option<u64> {
        match &self.kind {
            Kind::Truthful(v) | Kind::Reported(v) => v.values().copied().max(),
            Kind::Scripted(script) => script
                .baseline
                .values()
                .chain(script.rules.iter().flat_map(|r| r.threshold.values()))
                .copied()
                .max(),
        }
    }
}

/// Truthful strategies for every buyer of `instance`.
pub fn truthful_bidders(instance: &Instance) -> Bidders<'static> {
    instance
        .buyers()
        .iter()
        .map(|&b| (b, Box::new(truthful_strategy(instance.buyer_valuation(b))) as Box<dyn Signaling>))
        .collect()
}

/// Reported-valuation proxies for every buyer, bidding `bids` (indexed by item).
pub fn reported_bidders(instance: &Instance, bids: &[u64]) -> Result<Bidders<'static>> {
    if bids.len() != instance.ground().len() {
        return Err(Error::input(format!(
            "bids cover {} items, ground set has {}",
            bids.len(),
            instance.ground().len()
        )));
    }
    Ok(instance
        .interests()
        .map(|(b, items)| {
            let own = items.iter().map(|e| (e, bids[e])).collect();
            (b, Box::new(Strategy::reported(own)) as Box<dyn Signaling>)
        })
        .collect())
}

/// A scripted strategy, as stored in files.
///
/// ```json
/// {
///   "valuation": { "e1": 1 },
///   "rules": [
///     { "when": [{ "event": "CRITICAL", "buyer": 1, "price": 1 }], "threshold": { "f2": 2 } },
///     { "prefer": ["m"] }
///   ]
/// }
/// ```
///
/// A rule is in force once every `when` pattern has matched some event of
/// the public history; later rules override earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Script {
    /// Baseline values, overriding the buyer's true ones.
    #[serde(default)]
    pub valuation: BTreeMap<String, u64>,
    #[serde(default)]
    pub rules: Vec<Rule>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rule {
    #[serde(default)]
    pub when: Vec<EventPattern>,
    /// Values to act on while the rule is in force.
    #[serde(default)]
    pub threshold: BTreeMap<String, u64>,
    /// Monopsony choices, most preferred first.
    #[serde(default)]
    pub prefer: Vec<String>,
}

/// Matches events of one kind; absent fields match anything.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventPattern {
    pub event: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buyer: Option<BuyerId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub price: Option<u64>,
}

impl EventPattern {
    pub fn matches(&self, event: &AuctionEvent) -> bool {
        event.kind() == self.event
            && self.buyer.is_none_or(|b| event.buyer() == Some(b))
            && self
                .item
                .as_deref()
                .is_none_or(|id| event.item().is_some_and(|i| i.as_str() == id))
            && self.price.is_none_or(|p| event.price() == p)
    }
}

#[derive(Clone, Debug)]
struct ResolvedScript {
    baseline: BTreeMap<usize, u64>,
    rules: Vec<ResolvedRule>,
}

#[derive(Clone, Debug)]
struct ResolvedRule {
    when: Vec<EventPattern>,
    threshold: BTreeMap<usize, u64>,
    prefer: Vec<usize>,
}

impl ResolvedScript {
    fn current(&self, history: &[AuctionEvent]) -> (BTreeMap<usize, u64>, Vec<usize>) {
        let mut values = self.baseline.clone();
        let mut prefer = Vec::new();
        for rule in &self.rules {
            if rule.when.iter().all(|p| history.iter().any(|e| p.matches(e))) {
                values.extend(&rule.threshold);
                if !rule.prefer.is_empty() {
                    prefer.clone_from(&rule.prefer);
                }
            }
        }
        (values, prefer)
    }
}
