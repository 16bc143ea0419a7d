//! Brute-force enumeration over all subsets of a view's active items.

use crate::error::{Error, Result};
use crate::item::ItemSet;

use super::MinorView;

/// Largest active ground set the brute-force enumerators accept.
pub const ENUMERATION_LIMIT: usize = 16;

/// Greedy bases of every subset of a view's active items.
///
/// Entry `mask` holds the independent set grown by scanning the subset in
/// ascending id; it extends the entry for `mask` minus its top element, so
/// building the table costs one oracle call per subset.
pub struct SubsetTable {
    local: Vec<usize>,
    basis: Vec<u32>,
}

impl SubsetTable {
    pub fn build(view: &MinorView) -> Result<Self> {
        let local: Vec<usize> = view.active().iter().collect();
        if local.len() > ENUMERATION_LIMIT {
            return Err(Error::TooLarge {
                what: "active ground set",
                size: local.len(),
                limit: ENUMERATION_LIMIT,
            });
        }
        let n = local.len();
        let mut basis = vec![0u32; 1 << n];
        let mut table = SubsetTable {
            local,
            basis: Vec::new(),
        };
        for mask in 1u32..(1 << n) {
            let top = 31 - mask.leading_zeros();
            let prev = basis[(mask & !(1 << top)) as usize];
            let grown = prev | (1 << top);
            basis[mask as usize] = if view.independent_unchecked(table.to_global(grown)) {
                grown
            } else {
                prev
            };
        }
        table.basis = basis;
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.local.len()
    }

    pub fn is_empty(&self) -> bool {
        self.local.is_empty()
    }

    fn full_mask(&self) -> u32 {
        ((1u64 << self.local.len()) - 1) as u32
    }

    pub fn to_global(&self, mask: u32) -> ItemSet {
        self.local
            .iter()
            .enumerate()
            .filter(|(j, _)| mask & (1 << j) != 0)
            .map(|(_, &e)| e)
            .collect()
    }

    /// `set` must be a subset of the active items the table was built for.
    pub fn to_local(&self, set: ItemSet) -> u32 {
        let mut mask = 0u32;
        for (j, &e) in self.local.iter().enumerate() {
            if set.contains(e) {
                mask |= 1 << j;
            }
        }
        debug_assert_eq!(mask.count_ones() as usize, set.len());
        mask
    }

    fn rank_local(&self, mask: u32) -> usize {
        self.basis[mask as usize].count_ones() as usize
    }

    pub fn rank(&self, set: ItemSet) -> usize {
        self.rank_local(self.to_local(set))
    }

    pub fn full_rank(&self) -> usize {
        self.rank_local(self.full_mask())
    }

    pub fn is_independent(&self, set: ItemSet) -> bool {
        let m = self.to_local(set);
        self.basis[m as usize] == m
    }

    fn masks(&self) -> impl Iterator<Item = u32> {
        0u32..=self.full_mask()
    }

    pub fn independent_sets(&self) -> Vec<ItemSet> {
        let mut out: Vec<ItemSet> = self
            .masks()
            .filter(|&m| self.basis[m as usize] == m)
            .map(|m| self.to_global(m))
            .collect();
        out.sort();
        out
    }

    pub fn bases(&self) -> Vec<ItemSet> {
        let r = self.full_rank();
        let mut out: Vec<ItemSet> = self
            .masks()
            .filter(|&m| m.count_ones() as usize == r && self.basis[m as usize] == m)
            .map(|m| self.to_global(m))
            .collect();
        out.sort();
        out
    }

    /// Minimal dependent sets.
    pub fn circuits(&self) -> Vec<ItemSet> {
        let dependent = |m: u32| self.basis[m as usize] != m;
        let mut out: Vec<ItemSet> = self
            .masks()
            .filter(|&m| dependent(m) && bits(m).all(|b| !dependent(m & !b)))
            .map(|m| self.to_global(m))
            .collect();
        out.sort();
        out
    }

    /// Minimal sets meeting every base.
    pub fn cocircuits(&self) -> Vec<ItemSet> {
        let full = self.full_mask();
        let r = self.full_rank();
        let hits = |m: u32| self.rank_local(full & !m) < r;
        let mut out: Vec<ItemSet> = self
            .masks()
            .filter(|&m| m != 0 && hits(m) && bits(m).all(|b| !hits(m & !b)))
            .map(|m| self.to_global(m))
            .collect();
        out.sort();
        out
    }

    /// Largest total weight over all bases, by exhaustive search.
    pub fn max_base_weight(&self, weights: &[i64]) -> i64 {
        let r = self.full_rank();
        self.masks()
            .filter(|&m| m.count_ones() as usize == r && self.basis[m as usize] == m)
            .map(|m| self.to_global(m).iter().map(|e| weights[e]).sum::<i64>())
            .max()
            .expect("every matroid has a base")
    }
}

/// Single-bit masks of the members of `m`.
fn bits(m: u32) -> impl Iterator<Item = u32> {
    (0..32).map(|j| 1u32 << j).filter(move |b| m & b != 0)
}
