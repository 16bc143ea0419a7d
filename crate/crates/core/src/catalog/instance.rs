use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item::{GroundSet, Item, ItemSet};
use crate::matroid::{Matroid, SubsetTable};

use super::oracles::ParallelCopies;
use super::spec::{build_matroid, EdgeSpec, MatroidSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BuyerId(pub u32);

impl fmt::Display for BuyerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Per-buyer valuations keyed by item index.
pub type Valuations = BTreeMap<BuyerId, BTreeMap<usize, u64>>;

/// An auction instance: a matroid whose items are partitioned among buyers,
/// each item carrying its owner's valuation.
#[derive(Clone, Debug)]
pub struct Instance {
    matroid: Matroid,
    buyers: Vec<BuyerId>,
    interests: Vec<ItemSet>,
    owner: Vec<usize>,
    valuations: Vec<u64>,
}

impl Instance {
    /// Fails unless the buyers' item sets partition the ground set.
    pub fn new(matroid: Matroid, valuations: Valuations) -> Result<Self> {
        let n = matroid.ground().len();
        let mut owner = vec![usize::MAX; n];
        let mut values = vec![0; n];
        let mut buyers = Vec::with_capacity(valuations.len());
        let mut interests = Vec::with_capacity(valuations.len());
        for (slot, (&buyer, items)) in valuations.iter().enumerate() {
            let mut set = ItemSet::EMPTY;
            for (&e, &v) in items {
                if e >= n {
                    return Err(Error::UnknownItem(format!("#{e}")));
                }
                if owner[e] != usize::MAX {
                    return Err(Error::input(format!(
                        "item `{}` is wanted by buyers {} and {}",
                        matroid.ground().item(e),
                        buyers[owner[e]],
                        buyer
                    )));
                }
                owner[e] = slot;
                values[e] = v;
                set.insert(e);
            }
            buyers.push(buyer);
            interests.push(set);
        }
        if let Some(e) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::input(format!(
                "item `{}` is not wanted by any buyer",
                matroid.ground().item(e)
            )));
        }
        Ok(Instance {
            matroid,
            buyers,
            interests,
            owner,
            valuations: values,
        })
    }

    /// Convenience constructor from item ids.
    pub fn from_ids(matroid: Matroid, buyers: &[(u32, &[(&str, u64)])]) -> Result<Self> {
        let valuations = resolve_ids(matroid.ground(), buyers)?;
        Instance::new(matroid, valuations)
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn ground(&self) -> &GroundSet {
        self.matroid.ground()
    }

    /// Buyers in ascending id.
    pub fn buyers(&self) -> &[BuyerId] {
        &self.buyers
    }

    fn slot(&self, buyer: BuyerId) -> Option<usize> {
        self.buyers.binary_search(&buyer).ok()
    }

    /// Items of `buyer`; empty for unknown buyers.
    pub fn interest(&self, buyer: BuyerId) -> ItemSet {
        self.slot(buyer).map_or(ItemSet::EMPTY, |s| self.interests[s])
    }

    pub fn has_buyer(&self, buyer: BuyerId) -> bool {
        self.slot(buyer).is_some()
    }

    /// `(buyer, items)` pairs in ascending buyer id.
    pub fn interests(&self) -> impl Iterator<Item = (BuyerId, ItemSet)> + '_ {
        self.buyers.iter().copied().zip(self.interests.iter().copied())
    }

    pub fn owner(&self, item: usize) -> BuyerId {
        self.buyers[self.owner[item]]
    }

    pub fn valuation(&self, item: usize) -> u64 {
        self.valuations[item]
    }

    /// Valuations indexed by item.
    pub fn valuations(&self) -> &[u64] {
        &self.valuations
    }

    pub fn max_valuation(&self) -> u64 {
        self.valuations.iter().copied().max().unwrap_or(0)
    }

    /// Valuations of one buyer, keyed by item index.
    pub fn buyer_valuation(&self, buyer: BuyerId) -> BTreeMap<usize, u64> {
        self.interest(buyer)
            .iter()
            .map(|e| (e, self.valuations[e]))
            .collect()
    }

    /// The same instance with the valuations replaced (e.g. by bids).
    pub fn with_valuations(&self, values: &[u64]) -> Result<Instance> {
        if values.len() != self.valuations.len() {
            return Err(Error::input(format!(
                "expected {} values, got {}",
                self.valuations.len(),
                values.len()
            )));
        }
        Ok(Instance {
            valuations: values.to_vec(),
            ..self.clone()
        })
    }

    /// Every item's valuation as an `i64` weight.
    pub fn weights(&self) -> Vec<i64> {
        to_weights(&self.valuations)
    }

    /// All valuations as one buyer-keyed map.
    pub fn valuation_map(&self) -> Valuations {
        self.buyers
            .iter()
            .map(|&b| (b, self.buyer_valuation(b)))
            .collect()
    }
}

pub(crate) fn to_weights(values: &[u64]) -> Vec<i64> {
    values
        .iter()
        .map(|&v| i64::try_from(v).expect("valuations fit in i64"))
        .collect()
}

fn resolve_ids(ground: &GroundSet, buyers: &[(u32, &[(&str, u64)])]) -> Result<Valuations> {
    let mut out = Valuations::new();
    for &(b, items) in buyers {
        let entry = out.entry(BuyerId(b)).or_default();
        for &(id, v) in items {
            entry.insert(ground.index_of(id)?, v);
        }
    }
    Ok(out)
}

/// Makes overlapping interest sets disjoint.
///
/// Each item wanted by several buyers is replaced by one parallel copy per
/// buyer, labeled `<item>#<buyer>`; items wanted by a single buyer keep
/// their id. Graphic matroids stay graphic (copies become parallel edges).
pub fn parallel_copy_reduction(matroid: &Matroid, raw: &Valuations) -> Result<Instance> {
    let ground = matroid.ground();
    let mut wanted: Vec<Vec<(BuyerId, u64)>> = vec![Vec::new(); ground.len()];
    for (&buyer, items) in raw {
        for (&e, &v) in items {
            if e >= ground.len() {
                return Err(Error::UnknownItem(format!("#{e}")));
            }
            wanted[e].push((buyer, v));
        }
    }
    if let Some(e) = wanted.iter().position(Vec::is_empty) {
        return Err(Error::input(format!(
            "item `{}` is not wanted by any buyer",
            ground.item(e)
        )));
    }
    if wanted.iter().all(|w| w.len() == 1) {
        return Instance::new(matroid.clone(), raw.clone());
    }

    // (label, original index, buyer, value) for every copy
    let mut copies = Vec::new();
    for (e, buyers) in wanted.iter().enumerate() {
        let id = ground.item(e).as_str();
        for &(buyer, v) in buyers {
            let label = if buyers.len() == 1 {
                id.to_string()
            } else {
                format!("{id}#{buyer}")
            };
            copies.push((label, e, buyer, v));
        }
    }

    let reduced = match matroid.spec() {
        Some(MatroidSpec::Graphic { vertices, edges }) => {
            let ends: BTreeMap<&str, [usize; 2]> =
                edges.iter().map(|e| (e.id.as_str(), e.ends)).collect();
            let edges = copies
                .iter()
                .map(|(label, e, _, _)| EdgeSpec {
                    id: label.clone(),
                    ends: ends[ground.item(*e).as_str()],
                })
                .collect();
            build_matroid(&MatroidSpec::Graphic {
                vertices: *vertices,
                edges,
            })?
        }
        _ => {
            let new_ground = GroundSet::new(
                copies
                    .iter()
                    .map(|(label, ..)| Item::new(label.as_str()))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let mut origin = vec![0; copies.len()];
            for (label, e, ..) in &copies {
                origin[new_ground.index_of(label)?] = *e;
            }
            Matroid::new(
                new_ground,
                ParallelCopies::new(Arc::clone(matroid.oracle()), origin),
            )
        }
    };

    let mut valuations = Valuations::new();
    for (label, _, buyer, v) in &copies {
        valuations
            .entry(*buyer)
            .or_default()
            .insert(reduced.ground().index_of(label)?, *v);
    }
    for &buyer in raw.keys() {
        valuations.entry(buyer).or_default();
    }
    Instance::new(reduced, valuations)
}

/// A spec reproducing `matroid`: its own description when it has one,
/// otherwise an explicit base list (enumerated, so subject to the guard).
pub fn describe(matroid: &Matroid) -> Result<MatroidSpec> {
    if let Some(spec) = matroid.spec() {
        return Ok(spec.clone());
    }
    let ground = matroid.ground();
    let bases = SubsetTable::build(&matroid.view())?
        .bases()
        .into_iter()
        .map(|b| ground.names(b).into_iter().map(String::from).collect())
        .collect();
    Ok(MatroidSpec::Explicit {
        items: ground.items().iter().map(|i| i.to_string()).collect(),
        bases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::triangle;

    fn tri_with_overlap() -> Instance {
        let tri = triangle();
        let raw = resolve_ids(
            tri.ground(),
            &[(1, &[("a", 3), ("b", 1)]), (2, &[("a", 5), ("c", 2)])],
        )
        .unwrap();
        parallel_copy_reduction(&tri, &raw).unwrap()
    }

    #[test]
    fn instance_rejects_overlap_and_uncovered_items() {
        let tri = triangle();
        let err = Instance::from_ids(tri.clone(), &[(1, &[("a", 1), ("b", 1)]), (2, &[("a", 1), ("c", 1)])])
            .unwrap_err();
        assert!(err.to_string().contains("wanted by buyers 1 and 2"), "{err}");
        let err = Instance::from_ids(tri, &[(1, &[("a", 1), ("b", 1)])]).unwrap_err();
        assert!(err.to_string().contains("`c` is not wanted"), "{err}");
    }

    #[test]
    fn disjoint_interests_pass_through() {
        let tri = triangle();
        let raw = resolve_ids(tri.ground(), &[(1, &[("a", 1), ("b", 1)]), (2, &[("c", 1)])]).unwrap();
        let inst = parallel_copy_reduction(&tri, &raw).unwrap();
        assert_eq!(inst.ground(), tri.ground());
        assert_eq!(inst.valuation_map(), raw);
    }

    #[test]
    fn shared_item_becomes_parallel_copies() {
        let inst = tri_with_overlap();
        let g = inst.ground();
        assert_eq!(g.names(g.all()), vec!["a#1", "a#2", "b", "c"]);
        let copies = g.set_of(&["a#1", "a#2"]).unwrap();
        let circuits = SubsetTable::build(&inst.matroid().view()).unwrap().circuits();
        assert!(circuits.contains(&copies));
        assert_eq!(inst.valuation(g.index_of("a#2").unwrap()), 5);
        assert_eq!(inst.owner(g.index_of("a#1").unwrap()), BuyerId(1));
        assert!(matches!(inst.matroid().spec(), Some(MatroidSpec::Graphic { .. })));
    }

    #[test]
    fn three_buyers_on_a_rank_one_item() {
        let m = build_matroid(&MatroidSpec::uniform(1, 1)).unwrap();
        let raw: Valuations = (1..=3).map(|b| (BuyerId(b), BTreeMap::from([(0, u64::from(b))]))).collect();
        let inst = parallel_copy_reduction(&m, &raw).unwrap();
        assert_eq!(inst.ground().len(), 3);
        let circuits = SubsetTable::build(&inst.matroid().view()).unwrap().circuits();
        assert_eq!(circuits.len(), 3);
        assert!(circuits.iter().all(|c| c.len() == 2));
        assert!(inst.matroid().spec().is_none());
        // the derived description round-trips through an explicit base list
        let spec = describe(inst.matroid()).unwrap();
        let rebuilt = build_matroid(&spec).unwrap();
        assert_eq!(rebuilt.rank(), 1);
    }

    #[test]
    fn unwanted_item_is_an_error() {
        let tri = triangle();
        let raw = resolve_ids(tri.ground(), &[(1, &[("a", 1)])]).unwrap();
        let err = parallel_copy_reduction(&tri, &raw).unwrap_err();
        assert!(err.to_string().contains("not wanted"));
    }
}
