//! Auction events and their line-oriented text form.
//!
//! ```text
//! PRICE <p>
//! CRITICAL buyer=<id> item=<id> price=<p>
//! DELETE item=<id> price=<p>
//! MONOPSONY buyer=<id> cocircuit=[<id>,<id>,...] price=<p>
//! SELL buyer=<id> item=<id> price=<p>
//! INITSALE buyer=<id> item=<id>
//! ```

use std::fmt;
use std::str::FromStr;

use crate::catalog::BuyerId;
use crate::error::{Error, Result};
use crate::item::Item;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AuctionEvent {
    /// A new price round begins.
    PriceRaised { price: u64 },
    CriticalAnnounced { buyer: BuyerId, item: Item, price: u64 },
    Deleted { item: Item, price: u64 },
    MonopsonyDetected { buyer: BuyerId, cocircuit: Vec<Item>, price: u64 },
    Sold { buyer: BuyerId, item: Item, price: u64 },
    /// Sale at price 0 while resolving monopsonies present before the first round.
    InitialSale { buyer: BuyerId, item: Item },
}

/// Event kinds, as named in the text form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EventKind {
    Price,
    Critical,
    Delete,
    Monopsony,
    Sell,
    Initsale,
}

impl AuctionEvent {
    pub fn kind(&self) -> EventKind {
        match self {
            AuctionEvent::PriceRaised { .. } => EventKind::Price,
            AuctionEvent::CriticalAnnounced { .. } => EventKind::Critical,
            AuctionEvent::Deleted { .. } => EventKind::Delete,
            AuctionEvent::MonopsonyDetected { .. } => EventKind::Monopsony,
            AuctionEvent::Sold { .. } => EventKind::Sell,
            AuctionEvent::InitialSale { .. } => EventKind::Initsale,
        }
    }

    pub fn buyer(&self) -> Option<BuyerId> {
        match self {
            AuctionEvent::CriticalAnnounced { buyer, .. }
            | AuctionEvent::MonopsonyDetected { buyer, .. }
            | AuctionEvent::Sold { buyer, .. }
            | AuctionEvent::InitialSale { buyer, .. } => Some(*buyer),
            _ => None,
        }
    }

    pub fn item(&self) -> Option<&Item> {
        match self {
            AuctionEvent::CriticalAnnounced { item, .. }
            | AuctionEvent::Deleted { item, .. }
            | AuctionEvent::Sold { item, .. }
            | AuctionEvent::InitialSale { item, .. } => Some(item),
            _ => None,
        }
    }

    /// The price the event happened at; initial sales happen at 0.
    pub fn price(&self) -> u64 {
        match self {
            AuctionEvent::PriceRaised { price }
            | AuctionEvent::CriticalAnnounced { price, .. }
            | AuctionEvent::Deleted { price, .. }
            | AuctionEvent::MonopsonyDetected { price, .. }
            | AuctionEvent::Sold { price, .. } => *price,
            AuctionEvent::InitialSale { .. } => 0,
        }
    }
}

impl fmt::Display for AuctionEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuctionEvent::PriceRaised { price } => write!(f, "PRICE {price}"),
            AuctionEvent::CriticalAnnounced { buyer, item, price } => {
                write!(f, "CRITICAL buyer={buyer} item={item} price={price}")
            }
            AuctionEvent::Deleted { item, price } => write!(f, "DELETE item={item} price={price}"),
            AuctionEvent::MonopsonyDetected {
                buyer,
                cocircuit,
                price,
            } => {
                let ids: Vec<&str> = cocircuit.iter().map(Item::as_str).collect();
                write!(
                    f,
                    "MONOPSONY buyer={buyer} cocircuit=[{}] price={price}",
                    ids.join(",")
                )
            }
            AuctionEvent::Sold { buyer, item, price } => {
                write!(f, "SELL buyer={buyer} item={item} price={price}")
            }
            AuctionEvent::InitialSale { buyer, item } => {
                write!(f, "INITSALE buyer={buyer} item={item}")
            }
        }
    }
}

/// Field cursor over one line's `key=value` tokens.
struct Fields<'a> {
    tokens: std::str::SplitWhitespace<'a>,
}

impl<'a> Fields<'a> {
    fn value(&mut self, key: &str) -> std::result::Result<&'a str, String> {
        let token = self
            .tokens
            .next()
            .ok_or_else(|| format!("missing field `{key}`"))?;
        token
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| format!("expected `{key}=...`, found `{token}`"))
    }

    fn number(&mut self, key: &str) -> std::result::Result<u64, String> {
        let raw = self.value(key)?;
        raw.parse()
            .map_err(|_| format!("`{key}` must be a nonnegative integer, found `{raw}`"))
    }

    fn buyer(&mut self) -> std::result::Result<BuyerId, String> {
        let raw = self.value("buyer")?;
        raw.parse()
            .map(BuyerId)
            .map_err(|_| format!("bad buyer id `{raw}`"))
    }

    fn item(&mut self) -> std::result::Result<Item, String> {
        Item::new(self.value("item")?).map_err(|e| e.to_string())
    }

    fn finish(mut self) -> std::result::Result<(), String> {
        match self.tokens.next() {
            None => Ok(()),
            Some(extra) => Err(format!("unexpected trailing `{extra}`")),
        }
    }
}

impl FromStr for AuctionEvent {
    type Err = String;

    fn from_str(line: &str) -> std::result::Result<Self, String> {
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().ok_or("empty line")?;
        let mut fields = Fields { tokens };
        let event = match keyword {
            "PRICE" => {
                let raw = fields.tokens.next().ok_or("missing price")?;
                AuctionEvent::PriceRaised {
                    price: raw.parse().map_err(|_| format!("bad price `{raw}`"))?,
                }
            }
            "CRITICAL" => AuctionEvent::CriticalAnnounced {
                buyer: fields.buyer()?,
                item: fields.item()?,
                price: fields.number("price")?,
            },
            "DELETE" => AuctionEvent::Deleted {
                item: fields.item()?,
                price: fields.number("price")?,
            },
            "MONOPSONY" => {
                let buyer = fields.buyer()?;
                let raw = fields.value("cocircuit")?;
                let inner = raw
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| format!("cocircuit must be bracketed, found `{raw}`"))?;
                let cocircuit = inner
                    .split(',')
                    .map(|id| Item::new(id).map_err(|e| e.to_string()))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                AuctionEvent::MonopsonyDetected {
                    buyer,
                    cocircuit,
                    price: fields.number("price")?,
                }
            }
            "SELL" => AuctionEvent::Sold {
                buyer: fields.buyer()?,
                item: fields.item()?,
                price: fields.number("price")?,
            },
            "INITSALE" => AuctionEvent::InitialSale {
                buyer: fields.buyer()?,
                item: fields.item()?,
            },
            other => return Err(format!("unknown event `{other}`")),
        };
        fields.finish()?;
        Ok(event)
    }
}

/// One event per line, newline terminated.
pub fn emit_trace(events: &[AuctionEvent]) -> String {
    let mut out = String::new();
    for event in events {
        out.push_str(&event.to_string());
        out.push('\n');
    }
    out
}

/// Parses a trace; blank lines are ignored.
pub fn parse_trace(text: &str) -> Result<Vec<AuctionEvent>> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            line.parse().map_err(|message| Error::TraceParse {
                line: i + 1,
                message,
            })
        })
        .collect()
}
