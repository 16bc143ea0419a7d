use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item::{GroundSet, Item, ItemSet};
use crate::matroid::Matroid;

use super::oracles::{ExplicitOracle, GraphicOracle, PartitionOracle, UniformOracle};

/// Explicit matroids are checked for base exchange up to this many items.
const EXCHANGE_CHECK_LIMIT: usize = 12;

/// A serializable description of a concrete matroid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatroidSpec {
    /// Edges of a multigraph on vertices `0..vertices`; parallel edges and
    /// self-loops are allowed. Bases are spanning forests.
    Graphic { vertices: usize, edges: Vec<EdgeSpec> },
    /// `U(n, k)`; items default to `u0, u1, ...` (zero padded).
    Uniform {
        n: usize,
        k: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        items: Option<Vec<String>>,
    },
    Partition { blocks: Vec<BlockSpec> },
    /// Given by its list of bases.
    Explicit {
        items: Vec<String>,
        bases: Vec<Vec<String>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub ends: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub items: Vec<String>,
    pub capacity: usize,
}

impl MatroidSpec {
    pub fn graphic(vertices: usize, edges: &[(&str, usize, usize)]) -> Self {
        MatroidSpec::Graphic {
            vertices,
            edges: edges
                .iter()
                .map(|&(id, u, v)| EdgeSpec {
                    id: id.to_string(),
                    ends: [u, v],
                })
                .collect(),
        }
    }

    pub fn uniform(n: usize, k: usize) -> Self {
        MatroidSpec::Uniform { n, k, items: None }
    }

    /// Item ids in declaration order.
    pub fn item_ids(&self) -> Vec<String> {
        match self {
            MatroidSpec::Graphic { edges, .. } => edges.iter().map(|e| e.id.clone()).collect(),
            MatroidSpec::Uniform { n, items, .. } => match items {
                Some(items) => items.clone(),
                None => default_labels("u", *n),
            },
            MatroidSpec::Partition { blocks } => {
                blocks.iter().flat_map(|b| b.items.iter().cloned()).collect()
            }
            MatroidSpec::Explicit { items, .. } => items.clone(),
        }
    }
}

/// `prefix0, prefix1, ...`, zero padded so that id order matches numeric order.
pub(crate) fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

fn ground_from(ids: &[String], path: &str) -> Result<GroundSet> {
    let items = ids
        .iter()
        .enumerate()
        .map(|(i, id)| Item::new(id.as_str()).map_err(|e| Error::schema(format!("{path}[{i}]"), e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    GroundSet::new(items).map_err(|e| Error::schema(path, e.to_string()))
}

/// Builds the matroid a spec describes, validating the spec first.
///
/// Errors carry a field path relative to the spec, e.g. `edges[3].ends`.
pub fn build_matroid(spec: &MatroidSpec) -> Result<Matroid> {
    let ids = spec.item_ids();
    let matroid = match spec {
        MatroidSpec::Graphic { vertices, edges } => {
            let ground = ground_from(&ids, "edges")?;
            let mut ends = vec![(0, 0); edges.len()];
            for (i, edge) in edges.iter().enumerate() {
                if let Some(&v) = edge.ends.iter().find(|&&v| v >= *vertices) {
                    return Err(Error::schema(
                        format!("edges[{i}].ends"),
                        format!("endpoint {v} outside 0..{vertices}"),
                    ));
                }
                ends[ground.index_of(&edge.id)?] = (edge.ends[0], edge.ends[1]);
            }
            Matroid::new(ground, GraphicOracle::new(*vertices, ends))
        }
        MatroidSpec::Uniform { n, k, items } => {
            if k > n {
                return Err(Error::schema("k", format!("rank {k} exceeds n = {n}")));
            }
            if items.as_ref().is_some_and(|items| items.len() != *n) {
                return Err(Error::schema("items", format!("expected {n} item ids")));
            }
            Matroid::new(ground_from(&ids, "items")?, UniformOracle { rank: *k })
        }
        MatroidSpec::Partition { blocks } => {
            let ground = ground_from(&ids, "blocks")?;
            let mut block_of = vec![0; ground.len()];
            let mut capacity = Vec::with_capacity(blocks.len());
            for (b, block) in blocks.iter().enumerate() {
                if block.capacity > block.items.len() {
                    return Err(Error::schema(
                        format!("blocks[{b}].capacity"),
                        format!(
                            "capacity {} exceeds block size {}",
                            block.capacity,
                            block.items.len()
                        ),
                    ));
                }
                for id in &block.items {
                    block_of[ground.index_of(id)?] = b;
                }
                capacity.push(block.capacity);
            }
            Matroid::new(ground, PartitionOracle::new(block_of, capacity))
        }
        MatroidSpec::Explicit { bases, .. } => {
            let ground = ground_from(&ids, "items")?;
            let mut listed = BTreeSet::new();
            for (i, base) in bases.iter().enumerate() {
                let set = ground
                    .set_of(base)
                    .map_err(|e| Error::schema(format!("bases[{i}]"), e.to_string()))?;
                if set.len() != base.len() {
                    return Err(Error::schema(format!("bases[{i}]"), "repeated item"));
                }
                listed.insert(set);
            }
            let bases: Vec<ItemSet> = listed.into_iter().collect();
            check_bases(&ground, &bases)?;
            Matroid::new(ground, ExplicitOracle::new(bases))
        }
    };
    Ok(matroid.with_spec(spec.clone()))
}

fn check_bases(ground: &GroundSet, bases: &[ItemSet]) -> Result<()> {
    let Some(first) = bases.first() else {
        return Err(Error::schema("bases", "at least one base is required"));
    };
    if let Some(b) = bases.iter().find(|b| b.len() != first.len()) {
        return Err(Error::schema(
            "bases",
            format!(
                "bases {} and {} differ in size",
                ground.display(*first),
                ground.display(*b)
            ),
        ));
    }
    if ground.len() > EXCHANGE_CHECK_LIMIT {
        return Ok(());
    }
    let listed: BTreeSet<ItemSet> = bases.iter().copied().collect();
    for &b1 in bases {
        for &b2 in bases {
            for x in (b1 - b2).iter() {
                let exchangeable = (b2 - b1).iter().any(|y| listed.contains(&b1.without(x).with(y)));
                if !exchangeable {
                    return Err(Error::schema(
                        "bases",
                        format!(
                            "base exchange fails: removing `{}` from {} admits no replacement from {}",
                            ground.item(x),
                            ground.display(b1),
                            ground.display(b2)
                        ),
                    ));
                }
            }
        }
    }
    Ok(())
}
