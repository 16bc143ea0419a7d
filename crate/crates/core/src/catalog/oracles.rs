//! Independence oracles for the concrete matroid families.

use std::sync::Arc;

use crate::item::ItemSet;
use crate::matroid::IndependenceOracle;

/// Cycle-free edge sets of a multigraph. Self-loops are always dependent.
#[derive(Debug)]
pub struct GraphicOracle {
    vertices: usize,
    ends: Vec<(usize, usize)>,
}

impl GraphicOracle {
    /// `ends[i]` are the endpoints of the edge with item index `i`.
    pub fn new(vertices: usize, ends: Vec<(usize, usize)>) -> Self {
        GraphicOracle { vertices, ends }
    }
}

impl IndependenceOracle for GraphicOracle {
    fn is_independent(&self, set: ItemSet) -> bool {
        let mut forest = DisjointSets::new(self.vertices);
        set.iter().all(|e| {
            let (u, v) = self.ends[e];
            forest.union(u, v)
        })
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already one class.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[derive(Debug)]
pub struct UniformOracle {
    pub rank: usize,
}

impl IndependenceOracle for UniformOracle {
    fn is_independent(&self, set: ItemSet) -> bool {
        set.len() <= self.rank
    }
}

/// At most `capacity[b]` items from each block `b`.
#[derive(Debug)]
pub struct PartitionOracle {
    block_of: Vec<usize>,
    capacity: Vec<usize>,
}

impl PartitionOracle {
    pub fn new(block_of: Vec<usize>, capacity: Vec<usize>) -> Self {
        PartitionOracle { block_of, capacity }
    }
}

impl IndependenceOracle for PartitionOracle {
    fn is_independent(&self, set: ItemSet) -> bool {
        let mut used = vec![0usize; self.capacity.len()];
        set.iter().all(|e| {
            let b = self.block_of[e];
            used[b] += 1;
            used[b] <= self.capacity[b]
        })
    }
}

/// Subsets of a listed base.
#[derive(Debug)]
pub struct ExplicitOracle {
    bases: Vec<ItemSet>,
}

impl ExplicitOracle {
    pub fn new(bases: Vec<ItemSet>) -> Self {
        ExplicitOracle { bases }
    }
}

impl IndependenceOracle for ExplicitOracle {
    fn is_independent(&self, set: ItemSet) -> bool {
        self.bases.iter().any(|&b| set.is_subset(b))
    }
}

/// Replaces items by parallel copies: `origin[i]` is the original item behind
/// copy `i`. A set is independent iff it holds at most one copy per original
/// and its projection is independent in the original matroid.
#[derive(Debug)]
pub struct ParallelCopies {
    inner: Arc<dyn IndependenceOracle>,
    origin: Vec<usize>,
}

impl ParallelCopies {
    pub fn new(inner: Arc<dyn IndependenceOracle>, origin: Vec<usize>) -> Self {
        ParallelCopies { inner, origin }
    }
}

impl IndependenceOracle for ParallelCopies {
    fn is_independent(&self, set: ItemSet) -> bool {
        let mut projected = ItemSet::EMPTY;
        for e in set {
            let o = self.origin[e];
            if projected.contains(o) {
                return false;
            }
            projected.insert(o);
        }
        self.inner.is_independent(projected)
    }
}
