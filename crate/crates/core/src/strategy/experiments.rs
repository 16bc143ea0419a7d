//! Desk-scale incentive experiments.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::auction::{compare_bidders, run_auction, AuctionConfig, Bidders, Outcome, OutcomeReport, Signaling};
use crate::catalog::{BuyerId, Instance};
use crate::error::{Error, Result};
use crate::fixtures::parallel_path;

use super::bidder::{reported_bidders, truthful_strategy, EventPattern, Rule, Script, Strategy};
use crate::auction::EventKind;

/// Largest bid grid [`ex_post_equilibrium_check`] will enumerate.
pub const GRID_LIMIT: u64 = 100_000;

/// Runs the auction with every buyer bidding through a proxy that reports
/// `bids`, next to the sealed-bid Vickrey prices for the same bids.
///
/// The Vickrey prices are evaluated at the base the auction sold, so ties
/// among optimal bases split payments the same way in both, and on the
/// minor left after the price-0 sales.
pub fn proxy_auction(instance: &Instance, bids: &[u64]) -> Result<(Outcome, BTreeMap<BuyerId, u64>)> {
    let mut bidders = reported_bidders(instance, bids)?;
    let c = compare_bidders(instance, &mut bidders, bids, &AuctionConfig::default())?;
    Ok((c.outcome, c.vcg_prices))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deviation {
    pub bids: BTreeMap<String, u64>,
    pub utility: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquilibriumReport {
    pub buyer: BuyerId,
    pub bound: u64,
    pub vectors_checked: u64,
    pub truthful_utility: i64,
    pub best_deviation: Deviation,
    /// Reports that would have paid strictly more than truth-telling.
    pub counterexamples: Vec<Deviation>,
}

impl EquilibriumReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Tries every report in `[0, bound]` for `buyer`'s items against truthful
/// opponents and compares her true utility with truth-telling.
pub fn ex_post_equilibrium_check(instance: &Instance, buyer: BuyerId, bound: u64) -> Result<EquilibriumReport> {
    if !instance.has_buyer(buyer) {
        return Err(Error::input(format!("unknown buyer {buyer}")));
    }
    let items: Vec<usize> = instance.interest(buyer).iter().collect();
    let base = bound + 1;
    let total = (0..items.len()).try_fold(1u64, |acc, _| acc.checked_mul(base).filter(|&n| n <= GRID_LIMIT));
    let Some(total) = total else {
        return Err(Error::TooLarge {
            what: "bid grid",
            size: base.saturating_pow(items.len() as u32) as usize,
            limit: GRID_LIMIT as usize,
        });
    };
    let utility_of = |bids: &BTreeMap<usize, u64>| -> Result<i64> {
        let mut bidders: Bidders<'static> = instance
            .buyers()
            .iter()
            .map(|&b| (b, Box::new(truthful_strategy(instance.buyer_valuation(b))) as Box<dyn Signaling>))
            .collect();
        bidders.insert(buyer, Box::new(Strategy::reported(bids.clone())));
        let (outcome, _) = run_auction(instance, &mut bidders, &AuctionConfig::default())?;
        Ok(outcome.utility(instance, buyer))
    };
    let truthful_utility = utility_of(&instance.buyer_valuation(buyer))?;
    let decode = |mut k: u64| -> BTreeMap<usize, u64> {
        items
            .iter()
            .map(|&e| {
                let bid = k % base;
                k /= base;
                (e, bid)
            })
            .collect()
    };
    let results: Vec<(BTreeMap<usize, u64>, i64)> = (0..total)
        .into_par_iter()
        .map(|k| {
            let bids = decode(k);
            utility_of(&bids).map(|u| (bids, u))
        })
        .collect::<Result<_>>()?;
    let named = |bids: &BTreeMap<usize, u64>, utility| Deviation {
        bids: bids.iter().map(|(&e, &b)| (instance.ground().item(e).to_string(), b)).collect(),
        utility,
    };
    let (best_bids, best_utility) = results
        .iter()
        .fold(None::<&(BTreeMap<usize, u64>, i64)>, |best, r| match best {
            Some(b) if b.1 >= r.1 => Some(b),
            _ => Some(r),
        })
        .expect("the grid is nonempty");
    Ok(EquilibriumReport {
        buyer,
        bound,
        vectors_checked: total,
        truthful_utility,
        best_deviation: named(best_bids, *best_utility),
        counterexamples: results
            .iter()
            .filter(|(_, u)| *u > truthful_utility)
            .map(|(b, u)| named(b, *u))
            .collect(),
    })
}

/// One strategy profile's result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileResult {
    pub name: String,
    pub description: String,
    pub outcome: OutcomeReport,
    pub utilities: BTreeMap<BuyerId, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PayoffReport {
    pub profiles: Vec<ProfileResult>,
}

impl PayoffReport {
    pub fn utilities_of(&self, buyer: BuyerId) -> Vec<i64> {
        self.profiles.iter().map(|p| p.utilities[&buyer]).collect()
    }

    /// Plain-text table, one profile per row.
    pub fn table(&self) -> String {
        let buyers: Vec<BuyerId> = self
            .profiles
            .first()
            .map(|p| p.utilities.keys().copied().collect())
            .unwrap_or_default();
        let mut out = format!("{:<12}", "profile");
        for b in &buyers {
            out.push_str(&format!("{:>10}", format!("buyer {b}")));
        }
        out.push_str("  sold\n");
        for p in &self.profiles {
            out.push_str(&format!("{:<12}", p.name));
            for b in &buyers {
                out.push_str(&format!("{:>10}", p.utilities[b]));
            }
            let sold: Vec<String> = p
                .outcome
                .item_prices
                .iter()
                .map(|(item, price)| format!("{item}@{price}"))
                .collect();
            out.push_str(&format!("  {}\n", sold.join(" ")));
        }
        out
    }
}

fn announced_at_one() -> EventPattern {
    EventPattern {
        event: EventKind::Critical,
        buyer: Some(BuyerId(1)),
        item: None,
        price: Some(1),
    }
}

fn script(valuation: &[(&str, u64)], rules: Vec<Rule>) -> Script {
    Script {
        valuation: valuation.iter().map(|&(id, v)| (id.to_string(), v)).collect(),
        rules,
    }
}

fn conditional(threshold: &[(&str, u64)]) -> Rule {
    Rule {
        when: vec![announced_at_one()],
        threshold: threshold.iter().map(|&(id, v)| (id.to_string(), v)).collect(),
        prefer: Vec::new(),
    }
}

/// The four profiles on the parallel path with values (2, 4) and (3, 3).
///
/// * `s1` truthful; `s1'` truthful except `e1` is announced at 1.
/// * `s2` truthful; `s2'` announces `f2` at 2 once buyer 1 announced at 1;
///   `s2''` then holds `f2` back until 4.
///
/// Buyer 1's utilities come out 1, 1, 2, 0, so neither of her strategies
/// dominates the other.
pub fn appendix_b_scenarios() -> Result<PayoffReport> {
    let instance = parallel_path();
    let s1_dash = script(&[("e1", 1)], Vec::new());
    let s2_dash = script(&[], vec![conditional(&[("f2", 2)])]);
    let s2_ddash = script(&[], vec![conditional(&[("f2", 4)])]);
    let profiles: [(&str, &str, Option<&Script>, Option<&Script>); 4] = [
        ("(s1, s2)", "both truthful", None, None),
        ("(s1', s2)", "buyer 1 announces e1 at 1", Some(&s1_dash), None),
        (
            "(s1', s2')",
            "buyer 2 answers with f2 at 2",
            Some(&s1_dash),
            Some(&s2_dash),
        ),
        (
            "(s1', s2'')",
            "buyer 2 answers by holding f2 until 4",
            Some(&s1_dash),
            Some(&s2_ddash),
        ),
    ];
    let mut results = Vec::new();
    for (name, description, one, two) in profiles {
        let mut bidders: Bidders<'static> = BTreeMap::new();
        for (buyer, script) in [(BuyerId(1), one), (BuyerId(2), two)] {
            let strategy = match script {
                Some(s) => Strategy::scripted(s, &instance, buyer)?,
                None => truthful_strategy(instance.buyer_valuation(buyer)),
            };
            bidders.insert(buyer, Box::new(strategy));
        }
        let (outcome, _) = run_auction(&instance, &mut bidders, &AuctionConfig::default())?;
        let utilities: BTreeMap<BuyerId, i64> = instance
            .buyers()
            .iter()
            .map(|&b| (b, outcome.utility(&instance, b)))
            .collect();
        for (buyer, script) in [(BuyerId(1), one), (BuyerId(2), two)] {
            if script.is_none() && utilities[&buyer] < 0 {
                return Err(Error::Invariant(format!(
                    "truthful buyer {buyer} has negative utility in {name}"
                )));
            }
        }
        results.push(ProfileResult {
            name: name.to_string(),
            description: description.to_string(),
            outcome: outcome.report(&instance),
            utilities,
        });
    }
    Ok(PayoffReport { profiles: results })
}
