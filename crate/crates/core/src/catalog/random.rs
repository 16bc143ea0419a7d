//! Seeded random matroids and instances.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::instance::{BuyerId, Instance, Valuations};
use super::spec::{build_matroid, default_labels, BlockSpec, EdgeSpec, MatroidSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Graphic,
    Uniform,
    Partition,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Graphic, Family::Uniform, Family::Partition];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Graphic => "graphic",
            Family::Uniform => "uniform",
            Family::Partition => "partition",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graphic" => Ok(Family::Graphic),
            "uniform" => Ok(Family::Uniform),
            "partition" => Ok(Family::Partition),
            other => Err(Error::input(format!("unknown matroid family `{other}`"))),
        }
    }
}

/// Shape of a random matroid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Connected multigraph on `vertices` vertices with between
    /// `vertices - 1` and `max_edges` edges (self-loops possible).
    Graphic { vertices: usize, max_edges: usize },
    Uniform { n: usize, k: usize },
    /// `items` items split into at most `max_blocks` blocks with random capacities.
    Partition { items: usize, max_blocks: usize },
}

impl Shape {
    /// A random shape of the given family with at most `max_items` items.
    pub fn sample(family: Family, max_items: usize, rng: &mut impl Rng) -> Shape {
        let max_items = max_items.max(1);
        match family {
            Family::Graphic => {
                let vertices = rng.random_range(2..=(max_items + 1).min(6));
                Shape::Graphic {
                    vertices,
                    max_edges: rng.random_range(vertices - 1..=max_items),
                }
            }
            Family::Uniform => {
                let n = rng.random_range(1..=max_items);
                Shape::Uniform {
                    n,
                    k: rng.random_range(0..=n),
                }
            }
            Family::Partition => Shape::Partition {
                items: rng.random_range(1..=max_items),
                max_blocks: rng.random_range(1..=4),
            },
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Shape::Graphic { .. } => Family::Graphic,
            Shape::Uniform { .. } => Family::Uniform,
            Shape::Partition { .. } => Family::Partition,
        }
    }
}

/// Draws a matroid description of the given shape.
pub fn random_matroid_spec(shape: Shape, rng: &mut impl Rng) -> Result<MatroidSpec> {
    match shape {
        Shape::Graphic { vertices, max_edges } => {
            if vertices == 0 || max_edges + 1 < vertices {
                return Err(Error::input(format!(
                    "a connected graph on {vertices} vertices needs at least {} edges, max_edges is {max_edges}",
                    vertices.saturating_sub(1)
                )));
            }
            let edge_count = rng.random_range(vertices - 1..=max_edges);
            let labels = default_labels("e", edge_count);
            // random spanning tree: attach each vertex of a shuffled order to an earlier one
            let mut order: Vec<usize> = (0..vertices).collect();
            order.shuffle(rng);
            let mut ends: Vec<[usize; 2]> = (1..vertices)
                .map(|i| [order[rng.random_range(0..i)], order[i]])
                .collect();
            while ends.len() < edge_count {
                ends.push([rng.random_range(0..vertices), rng.random_range(0..vertices)]);
            }
            ends.shuffle(rng);
            Ok(MatroidSpec::Graphic {
                vertices,
                edges: labels
                    .into_iter()
                    .zip(ends)
                    .map(|(id, ends)| EdgeSpec { id, ends })
                    .collect(),
            })
        }
        Shape::Uniform { n, k } => {
            if k > n {
                return Err(Error::input(format!("uniform rank {k} exceeds n = {n}")));
            }
            Ok(MatroidSpec::uniform(n, k))
        }
        Shape::Partition { items, max_blocks } => {
            if max_blocks == 0 && items > 0 {
                return Err(Error::input("partition matroid needs at least one block"));
            }
            let labels = default_labels("p", items);
            let blocks_n = rng.random_range(1..=max_blocks.min(items).max(1));
            let mut members: Vec<Vec<String>> = vec![Vec::new(); blocks_n];
            for (i, label) in labels.into_iter().enumerate() {
                // first `blocks_n` items seed the blocks so none is empty
                let b = if i < blocks_n { i } else { rng.random_range(0..blocks_n) };
                members[b].push(label);
            }
            let blocks = members
                .into_iter()
                .filter(|m| !m.is_empty())
                .map(|items| BlockSpec {
                    capacity: rng.random_range(0..=items.len()),
                    items,
                })
                .collect();
            Ok(MatroidSpec::Partition { blocks })
        }
    }
}

/// Parameters for [`random_instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub shape: Shape,
    pub buyers: usize,
    pub min_value: u64,
    pub max_value: u64,
}

impl RandomParams {
    pub fn new(shape: Shape, buyers: usize, max_value: u64) -> Self {
        RandomParams {
            shape,
            buyers,
            min_value: 1,
            max_value,
        }
    }
}

/// A random instance, fully determined by `(params, seed)`.
///
/// Items go to buyers uniformly at random; valuations are uniform integers
/// in `[min_value, max_value]`.
pub fn random_instance(params: &RandomParams, seed: u64) -> Result<Instance> {
    if params.buyers == 0 {
        return Err(Error::input("at least one buyer is required"));
    }
    if params.min_value > params.max_value {
        return Err(Error::input("min_value exceeds max_value"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = random_matroid_spec(params.shape, &mut rng)?;
    let matroid = build_matroid(&spec)?;
    let mut valuations: Valuations = (1..=params.buyers as u32)
        .map(|b| (BuyerId(b), Default::default()))
        .collect();
    for e in 0..matroid.ground().len() {
        let buyer = BuyerId(rng.random_range(1..=params.buyers as u32));
        let value = rng.random_range(params.min_value..=params.max_value);
        valuations.get_mut(&buyer).expect("buyer exists").insert(e, value);
    }
    Instance::new(matroid, valuations)
}

/// `per_family` instances of each family with between `max_items / 2` and
/// `max_items` items, nonzero rank, two to four buyers, and valuations in
/// `[0, max_value]`. Smaller draws are rejected and redrawn.
pub fn random_corpus(per_family: usize, max_items: usize, max_value: u64, seed: u64) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_family * Family::ALL.len());
    for family in Family::ALL {
        let mut kept = 0;
        while kept < per_family {
            let shape = Shape::sample(family, max_items, &mut rng);
            let params = RandomParams {
                min_value: 0,
                ..RandomParams::new(shape, rng.random_range(2..=4), max_value)
            };
            let inst = random_instance(&params, rng.random())?;
            let m = inst.matroid().view();
            if inst.ground().len() >= max_items / 2 && m.full_rank() > 0 {
                out.push(inst);
                kept += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{verify_axioms, SubsetTable};

    fn graphic_params() -> RandomParams {
        RandomParams::new(Shape::Graphic { vertices: 5, max_edges: 8 }, 3, 6)
    }

    #[test]
    fn corpus_sizes() {
        let corpus = random_corpus(5, 8, 9, 1).unwrap();
        assert_eq!(corpus.len(), 15);
        assert!(corpus
            .iter()
            .all(|i| (4..=8).contains(&i.ground().len()) && i.max_valuation() <= 9 && i.buyers().len() >= 2));
    }

    #[test]
    fn deterministic_per_seed() {
        let a = random_instance(&graphic_params(), 7).unwrap();
        let b = random_instance(&graphic_params(), 7).unwrap();
        assert_eq!(a.matroid().spec(), b.matroid().spec());
        assert_eq!(a.valuation_map(), b.valuation_map());
        let c = random_instance(&graphic_params(), 8).unwrap();
        assert!(a.matroid().spec() != c.matroid().spec() || a.valuation_map() != c.valuation_map());
    }

    #[test]
    fn graphic_instances_are_connected() {
        for seed in 0..50 {
            let inst = random_instance(&graphic_params(), seed).unwrap();
            assert_eq!(inst.matroid().rank(), 4, "seed {seed}");
            assert!(inst.ground().len() <= 8);
            assert!(inst.valuations().iter().all(|&v| (1..=6).contains(&v)));
        }
    }

    #[test]
    fn uniform_shape_contract() {
        let params = RandomParams::new(Shape::Uniform { n: 6, k: 3 }, 2, 5);
        let inst = random_instance(&params, 1).unwrap();
        assert_eq!(inst.ground().len(), 6);
        assert_eq!(inst.matroid().rank(), 3);
    }

    #[test]
    fn generated_matroids_satisfy_the_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..60 {
            let family = Family::ALL[seed % 3];
            let shape = Shape::sample(family, 10, &mut rng);
            let inst = random_instance(&RandomParams::new(shape, 3, 9), seed as u64).unwrap();
            let sets = SubsetTable::build(&inst.matroid().view()).unwrap().independent_sets();
            let report = verify_axioms(inst.ground(), &sets).unwrap();
            assert!(report.is_matroid(), "{shape:?}: {:?}", report.describe(inst.ground()));
        }
    }

    #[test]
    fn impossible_connectivity_is_an_error() {
        let params = RandomParams::new(Shape::Graphic { vertices: 6, max_edges: 3 }, 2, 5);
        assert!(matches!(random_instance(&params, 0), Err(Error::Input(_))));
    }
}
