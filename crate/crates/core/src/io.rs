//! JSON documents: instances, bid vectors, and bidding scripts.
//!
//! An instance document looks like
//!
//! ```json
//! {
//!   "matroid": {"kind": "uniform", "n": 3, "k": 2, "items": ["a", "b", "c"]},
//!   "buyers": [
//!     {"id": 1, "items": {"a": 3, "b": 1}},
//!     {"id": 2, "items": {"c": 2}}
//!   ]
//! }
//! ```
//!
//! With `"allow_overlap": true` several buyers may name the same item; it is
//! then split into parallel copies, one per buyer.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::catalog::{build_matroid, describe, parallel_copy_reduction, BuyerId, Instance, MatroidSpec, Valuations};
use crate::error::{Error, Result};
use crate::strategy::Script;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub matroid: MatroidSpec,
    pub buyers: Vec<BuyerDocument>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_overlap: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuyerDocument {
    pub id: u32,
    pub items: BTreeMap<String, u64>,
}

/// Deserializes `text`, reporting failures with the path of the offending field.
fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        Error::schema(path, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| Error::schema(".", e.to_string()))?;
    Ok(value)
}

fn prefixed(prefix: &str, error: Error) -> Error {
    match error {
        Error::Schema { path, message } => Error::Schema {
            path: format!("{prefix}.{path}"),
            message,
        },
        other => other,
    }
}

impl InstanceDocument {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    /// Builds the instance, splitting shared items when overlap is allowed.
    pub fn build(&self) -> Result<Instance> {
        let matroid = build_matroid(&self.matroid).map_err(|e| prefixed("matroid", e))?;
        let ground = matroid.ground();
        let mut valuations = Valuations::new();
        let mut claimed: BTreeMap<usize, BuyerId> = BTreeMap::new();
        for (i, buyer) in self.buyers.iter().enumerate() {
            let id = BuyerId(buyer.id);
            if valuations.contains_key(&id) {
                return Err(Error::schema(format!("buyers[{i}].id"), format!("buyer {id} appears twice")));
            }
            let mut items = BTreeMap::new();
            for (item, &v) in &buyer.items {
                let e = ground.index_of(item).map_err(|_| {
                    Error::schema(format!("buyers[{i}].items.{item}"), format!("unknown item `{item}`"))
                })?;
                if let Some(other) = claimed.insert(e, id) {
                    if !self.allow_overlap {
                        return Err(Error::input(format!(
                            "item `{item}` is wanted by buyers {other} and {id}; \
                             set allow_overlap to split it into parallel copies"
                        )));
                    }
                }
                items.insert(e, v);
            }
            valuations.insert(id, items);
        }
        if self.allow_overlap {
            parallel_copy_reduction(&matroid, &valuations)
        } else {
            Instance::new(matroid, valuations)
        }
    }

    /// A document reproducing `instance`.
    pub fn of(instance: &Instance) -> Result<Self> {
        let ground = instance.ground();
        Ok(InstanceDocument {
            matroid: describe(instance.matroid())?,
            buyers: instance
                .valuation_map()
                .into_iter()
                .map(|(id, items)| BuyerDocument {
                    id: id.0,
                    items: items
                        .into_iter()
                        .map(|(e, v)| (ground.item(e).to_string(), v))
                        .collect(),
                })
                .collect(),
            allow_overlap: false,
        })
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    InstanceDocument::parse(text)?.build()
}

/// Pretty-printed JSON that [`parse_instance`] turns back into `instance`.
pub fn emit_instance(instance: &Instance) -> Result<String> {
    let doc = InstanceDocument::of(instance)?;
    Ok(serde_json::to_string_pretty(&doc).expect("documents serialize"))
}

/// A bid file, `{"<item>": <bid>, ...}`, covering every item of `instance`.
/// Returns bids indexed like the ground set.
pub fn parse_bids(text: &str, instance: &Instance) -> Result<Vec<u64>> {
    let raw: BTreeMap<String, u64> = from_json(text)?;
    let ground = instance.ground();
    let mut bids = vec![None; ground.len()];
    for (item, &bid) in &raw {
        let e = ground
            .index_of(item)
            .map_err(|_| Error::schema(item.as_str(), format!("unknown item `{item}`")))?;
        bids[e] = Some(bid);
    }
    bids.iter()
        .enumerate()
        .map(|(e, b)| b.ok_or_else(|| Error::schema(".", format!("no bid for item `{}`", ground.item(e)))))
        .collect()
}

pub fn parse_script(text: &str) -> Result<Script> {
    from_json(text)
}
