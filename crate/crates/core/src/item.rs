//! Items, item sets and ground sets.
//!
//! A [`GroundSet`] stores its items sorted by id, so the position of an item
//! (its *index*) respects the id order. Every deterministic tie-break in the
//! crate ("ascending item id") is therefore "ascending index", and an
//! [`ItemSet`] iterates its members in that order.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set an [`ItemSet`] can address.
pub const MAX_ITEMS: usize = 64;

/// An item label. Ordered lexicographically by its id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Item(String);

impl Item {
    /// Creates an item, rejecting ids that cannot appear as a trace token.
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::input("item id must not be empty"));
        }
        if let Some(c) = id
            .chars()
            .find(|c| c.is_whitespace() || matches!(c, '=' | ',' | '[' | ']'))
        {
            return Err(Error::input(format!(
                "item id `{id}` contains the reserved character {c:?}"
            )));
        }
        Ok(Item(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Item {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A subset of a ground set, stored as a bitmask over item indices.
///
/// Ordering is lexicographic on the ascending index lists, so `{0,1} < {0,2} < {1}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ItemSet(u64);

impl ItemSet {
    pub const EMPTY: ItemSet = ItemSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ItemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ITEMS, "ground set larger than {MAX_ITEMS} items");
        if n == MAX_ITEMS {
            ItemSet(u64::MAX)
        } else {
            ItemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(index: usize) -> Self {
        ItemSet(1u64 << index)
    }

    pub fn contains(self, index: usize) -> bool {
        index < MAX_ITEMS && self.0 & (1u64 << index) != 0
    }

    pub fn with(self, index: usize) -> Self {
        ItemSet(self.0 | (1u64 << index))
    }

    pub fn without(self, index: usize) -> Self {
        ItemSet(self.0 & !(1u64 << index))
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1u64 << index;
    }

    pub fn remove(&mut self, index: usize) {
        self.0 &= !(1u64 << index);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ItemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: ItemSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest index in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending index order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

impl FromIterator<usize> for ItemSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut set = ItemSet::EMPTY;
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl IntoIterator for ItemSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl BitOr for ItemSet {
    type Output = ItemSet;
    fn bitor(self, rhs: ItemSet) -> ItemSet {
        ItemSet(self.0 | rhs.0)
    }
}

impl BitAnd for ItemSet {
    type Output = ItemSet;
    fn bitand(self, rhs: ItemSet) -> ItemSet {
        ItemSet(self.0 & rhs.0)
    }
}

impl Sub for ItemSet {
    type Output = ItemSet;
    fn sub(self, rhs: ItemSet) -> ItemSet {
        ItemSet(self.0 & !rhs.0)
    }
}

impl Ord for ItemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ItemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite ground set of items, sorted by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    items: Vec<Item>,
}

impl GroundSet {
    /// Sorts the items; fails on duplicates or more than [`MAX_ITEMS`] items.
    pub fn new(mut items: Vec<Item>) -> Result<Self> {
        if items.len() > MAX_ITEMS {
            return Err(Error::TooLarge {
                what: "ground set",
                size: items.len(),
                limit: MAX_ITEMS,
            });
        }
        items.sort();
        if let Some(pair) = items.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate item `{}`", pair[0])));
        }
        Ok(GroundSet { items })
    }

    pub fn from_ids<S: AsRef<str>>(ids: &[S]) -> Result<Self> {
        let items = ids
            .iter()
            .map(|s| Item::new(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(items)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item(&self, index: usize) -> &Item {
        &self.items[index]
    }

    pub fn all(&self) -> ItemSet {
        ItemSet::full(self.items.len())
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.items
            .binary_search_by(|item| item.as_str().cmp(id))
            .map_err(|_| Error::UnknownItem(id.to_string()))
    }

    /// Resolves a list of ids into a set.
    pub fn set_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<ItemSet> {
        ids.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    pub fn names(&self, set: ItemSet) -> Vec<&str> {
        set.iter().map(|i| self.items[i].as_str()).collect()
    }

    /// `{a, b, c}` style rendering.
    pub fn display(&self, set: ItemSet) -> String {
        format!("{{{}}}", self.names(set).join(", "))
    }
}
