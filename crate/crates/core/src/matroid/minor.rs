use std::fmt;

use crate::error::{Error, Result};
use crate::item::{GroundSet, ItemSet};

use super::enumerate::SubsetTable;
use super::Matroid;

/// The minor `M \ D / I` of a base matroid `M`.
///
/// Independence in the view: `X` (a subset of the active items) is
/// independent iff `X ∪ contraction_base` is independent in `M`, where the
/// contraction base is a maximal independent subset of the contracted set.
#[derive(Clone, Debug)]
pub struct MinorView {
    matroid: Matroid,
    deleted: ItemSet,
    contracted: ItemSet,
    contraction_base: ItemSet,
}

/// Loop, coloop, or neither, relative to a view.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementClass {
    Loop,
    Coloop,
    Regular,
}

/// An inclusion-wise minimal set meeting every base of a view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cocircuit(ItemSet);

impl Cocircuit {
    pub(crate) fn new_unchecked(items: ItemSet) -> Self {
        debug_assert!(!items.is_empty());
        Cocircuit(items)
    }

    pub fn items(self) -> ItemSet {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(self, index: usize) -> bool {
        self.0.contains(index)
    }
}

impl MinorView {
    pub fn new(matroid: Matroid) -> Self {
        MinorView {
            matroid,
            deleted: ItemSet::EMPTY,
            contracted: ItemSet::EMPTY,
            contraction_base: ItemSet::EMPTY,
        }
    }

    /// Builds a view with an explicitly chosen contraction base.
    pub fn from_parts(
        matroid: Matroid,
        deleted: ItemSet,
        contracted: ItemSet,
        contraction_base: ItemSet,
    ) -> Result<Self> {
        let all = matroid.ground().all();
        if !(deleted | contracted).is_subset(all) {
            return Err(Error::input("deleted/contracted items outside the ground set"));
        }
        if !deleted.is_disjoint(contracted) {
            return Err(Error::input("deleted and contracted sets overlap"));
        }
        if !contraction_base.is_subset(contracted) {
            return Err(Error::input("contraction base is not inside the contracted set"));
        }
        if !matroid.is_independent(contraction_base) {
            return Err(Error::input("contraction base is dependent"));
        }
        let full = MinorView::new(matroid.clone());
        if full.greedy_basis(contracted).len() != contraction_base.len() {
            return Err(Error::input("contraction base does not span the contracted set"));
        }
        Ok(MinorView {
            matroid,
            deleted,
            contracted,
            contraction_base,
        })
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn ground(&self) -> &GroundSet {
        self.matroid.ground()
    }

    pub fn deleted(&self) -> ItemSet {
        self.deleted
    }

    pub fn contracted(&self) -> ItemSet {
        self.contracted
    }

    pub fn contraction_base(&self) -> ItemSet {
        self.contraction_base
    }

    /// Items neither deleted nor contracted.
    pub fn active(&self) -> ItemSet {
        self.ground().all() - self.deleted - self.contracted
    }

    pub(crate) fn check_active(&self, set: ItemSet) -> Result<()> {
        match (set - self.active()).first() {
            None => Ok(()),
            Some(i) if i < self.ground().len() => {
                Err(Error::InactiveItem(self.ground().item(i).to_string()))
            }
            Some(i) => Err(Error::UnknownItem(format!("#{i}"))),
        }
    }

    /// Oracle query without the active-set check.
    pub(crate) fn independent_unchecked(&self, set: ItemSet) -> bool {
        self.matroid.is_independent(set | self.contraction_base)
    }

    pub fn is_independent(&self, set: ItemSet) -> Result<bool> {
        self.check_active(set)?;
        Ok(self.independent_unchecked(set))
    }

    /// Independent subset grown by scanning `set` in ascending id.
    pub(crate) fn greedy_basis(&self, set: ItemSet) -> ItemSet {
        let mut basis = ItemSet::EMPTY;
        for e in set {
            if self.independent_unchecked(basis.with(e)) {
                basis.insert(e);
            }
        }
        basis
    }

    pub fn rank(&self, set: ItemSet) -> Result<usize> {
        self.check_active(set)?;
        Ok(self.greedy_basis(set).len())
    }

    /// Rank of the view itself.
    pub fn full_rank(&self) -> usize {
        self.greedy_basis(self.active()).len()
    }

    pub fn is_base(&self, set: ItemSet) -> Result<bool> {
        Ok(self.is_independent(set)? && set.len() == self.full_rank())
    }

    /// Deletes `delete` and contracts `contract` from this view.
    ///
    /// Every item of `contract` must be a non-loop of this view; the set as a
    /// whole may be dependent, in which case only a maximal independent part
    /// joins the contraction base.
    pub fn minor(&self, delete: ItemSet, contract: ItemSet) -> Result<MinorView> {
        self.check_active(delete | contract)?;
        if !delete.is_disjoint(contract) {
            return Err(Error::input(format!(
                "items {} are both deleted and contracted",
                self.ground().display(delete & contract)
            )));
        }
        if let Some(l) = contract
            .iter()
            .find(|&e| !self.independent_unchecked(ItemSet::singleton(e)))
        {
            return Err(Error::input(format!(
                "cannot contract `{}`: it is a loop",
                self.ground().item(l)
            )));
        }
        let mut base = self.contraction_base;
        for e in contract {
            if self.matroid.is_independent(base.with(e)) {
                base.insert(e);
            }
        }
        Ok(MinorView {
            matroid: self.matroid.clone(),
            deleted: self.deleted | delete,
            contracted: self.contracted | contract,
            contraction_base: base,
        })
    }

    pub fn delete(&self, e: usize) -> Result<MinorView> {
        self.minor(ItemSet::singleton(e), ItemSet::EMPTY)
    }

    pub fn contract(&self, e: usize) -> Result<MinorView> {
        self.minor(ItemSet::EMPTY, ItemSet::singleton(e))
    }

    /// Whether `set` meets every base, i.e. its complement has lower rank.
    pub(crate) fn meets_every_base(&self, set: ItemSet, rank: usize) -> bool {
        self.greedy_basis(self.active() - set).len() < rank
    }

    /// A cocircuit inside `within`, or `None` when some base avoids `within`.
    ///
    /// Candidates are dropped in ascending id while the remainder still meets
    /// every base; what survives is inclusion-wise minimal.
    pub fn find_cocircuit_within(&self, within: ItemSet) -> Result<Option<Cocircuit>> {
        self.check_active(within)?;
        let rank = self.full_rank();
        if !self.meets_every_base(within, rank) {
            return Ok(None);
        }
        let mut cocircuit = within;
        for e in within {
            let smaller = cocircuit.without(e);
            if self.meets_every_base(smaller, rank) {
                cocircuit = smaller;
            }
        }
        Ok(Some(Cocircuit::new_unchecked(cocircuit)))
    }

    /// Whether `set` is a cocircuit of this view.
    pub fn is_cocircuit(&self, set: ItemSet) -> Result<bool> {
        self.check_active(set)?;
        let rank = self.full_rank();
        Ok(!set.is_empty()
            && self.meets_every_base(set, rank)
            && set.iter().all(|e| !self.meets_every_base(set.without(e), rank)))
    }

    /// All cocircuits, by brute force over subsets of the active items.
    pub fn enumerate_cocircuits(&self) -> Result<Vec<Cocircuit>> {
        Ok(SubsetTable::build(self)?
            .cocircuits()
            .into_iter()
            .map(Cocircuit::new_unchecked)
            .collect())
    }

    pub fn element_class(&self, e: usize) -> Result<ElementClass> {
        let single = ItemSet::singleton(e);
        self.check_active(single)?;
        if !self.independent_unchecked(single) {
            Ok(ElementClass::Loop)
        } else if self.meets_every_base(single, self.full_rank()) {
            Ok(ElementClass::Coloop)
        } else {
            Ok(ElementClass::Regular)
        }
    }
}

impl fmt::Display for MinorView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.ground();
        write!(
            f,
            "M \\ {} / {}",
            g.display(self.deleted),
            g.display(self.contracted)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{four_buyer_graph, triangle};

    fn set(view: &MinorView, ids: &[&str]) -> ItemSet {
        view.ground().set_of(ids).unwrap()
    }

    /// Bases of a view by brute force over all subsets of the active items.
    fn bases(view: &MinorView) -> Vec<Vec<String>> {
        let active: Vec<usize> = view.active().iter().collect();
        let r = view.full_rank();
        let mut out = Vec::new();
        for mask in 0u32..(1 << active.len()) {
            let s: ItemSet = active
                .iter()
                .enumerate()
                .filter(|(j, _)| mask & (1 << j) != 0)
                .map(|(_, &e)| e)
                .collect();
            if s.len() == r && view.is_independent(s).unwrap() {
                out.push(view.ground().names(s).iter().map(|s| s.to_string()).collect());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn triangle_independence() {
        let tri = triangle().view();
        assert!(tri.is_independent(set(&tri, &["a", "b"])).unwrap());
        assert!(!tri.is_independent(set(&tri, &["a", "b", "c"])).unwrap());
        let tri_a = tri.contract(0).unwrap();
        assert!(!tri_a.is_independent(set(&tri, &["b", "c"])).unwrap());
        assert_eq!(bases(&tri_a), vec![vec!["b"], vec!["c"]]);
    }

    #[test]
    fn inactive_items_are_rejected_by_name() {
        let tri = triangle().view().delete(0).unwrap();
        let err = tri.is_independent(ItemSet::singleton(0)).unwrap_err();
        assert!(matches!(err, Error::InactiveItem(ref a) if a == "a"), "{err}");
        assert!(matches!(
            tri.rank(ItemSet::singleton(7)),
            Err(Error::UnknownItem(_))
        ));
    }

    #[test]
    fn rank_examples() {
        let tri = triangle().view();
        assert_eq!(tri.rank(tri.active()).unwrap(), 2);
        let g = four_buyer_graph();
        assert_eq!(g.matroid().view().full_rank(), 4);
        let tri_a = tri.contract(0).unwrap();
        assert_eq!(tri_a.rank(set(&tri, &["b", "c"])).unwrap(), 1);
    }

    #[test]
    fn base_examples() {
        let tri = triangle().view();
        assert!(tri.is_base(set(&tri, &["a", "c"])).unwrap());
        assert!(!tri.is_base(set(&tri, &["a"])).unwrap());
        let g = four_buyer_graph().matroid().view();
        assert!(g.is_base(set(&g, &["y2", "z2", "w", "z1"])).unwrap());
    }

    #[test]
    fn minor_examples() {
        let tri = triangle().view();
        let del = tri.minor(set(&tri, &["a"]), ItemSet::EMPTY).unwrap();
        assert_eq!(bases(&del), vec![vec!["b", "c"]]);
        let con = tri.minor(ItemSet::EMPTY, set(&tri, &["a"])).unwrap();
        assert_eq!(bases(&con), vec![vec!["b"], vec!["c"]]);
        let same = tri.minor(ItemSet::EMPTY, ItemSet::EMPTY).unwrap();
        assert_eq!(bases(&same), bases(&tri));
    }

    #[test]
    fn minor_errors() {
        let tri = triangle().view();
        let a = set(&tri, &["a"]);
        assert!(matches!(tri.minor(a, a), Err(Error::Input(_))));
        let bc = tri.minor(ItemSet::EMPTY, set(&tri, &["b", "c"])).unwrap();
        let err = bc.contract(0).unwrap_err();
        assert!(err.to_string().contains("loop"), "{err}");
    }

    #[test]
    fn dependent_contraction_picks_greedy_base() {
        let tri = triangle().view();
        let all = tri.minor(ItemSet::EMPTY, tri.active()).unwrap();
        assert_eq!(all.contraction_base(), set(&tri, &["a", "b"]));
        assert_eq!(all.full_rank(), 0);
    }

    #[test]
    fn explicit_contraction_base_is_validated() {
        let m = triangle();
        let all = m.ground().all();
        let bc = m.ground().set_of(&["b", "c"]).unwrap();
        assert!(MinorView::from_parts(m.clone(), ItemSet::EMPTY, all, bc).is_ok());
        let a = m.ground().set_of(&["a"]).unwrap();
        assert!(MinorView::from_parts(m.clone(), ItemSet::EMPTY, all, a).is_err());
        assert!(MinorView::from_parts(m.clone(), a, a, ItemSet::EMPTY).is_err());
        assert!(MinorView::from_parts(m, ItemSet::EMPTY, all, all).is_err());
    }

    #[test]
    fn cocircuit_search_examples() {
        let tri = triangle().view();
        let ab = set(&tri, &["a", "b"]);
        assert_eq!(tri.find_cocircuit_within(ab).unwrap().unwrap().items(), ab);
        assert_eq!(tri.find_cocircuit_within(set(&tri, &["a"])).unwrap(), None);

        let g = four_buyer_graph();
        let view = g.matroid().view();
        let x = set(&view, &["x"]);
        let after = view.minor(x, ItemSet::EMPTY).unwrap();
        let ys = set(&view, &["y1", "y2"]);
        assert_eq!(after.find_cocircuit_within(ys).unwrap().unwrap().items(), ys);
    }

    #[test]
    fn cocircuit_enumeration_examples() {
        let tri = triangle().view();
        fn names(v: &MinorView) -> Vec<Vec<String>> {
            v.enumerate_cocircuits()
                .unwrap()
                .into_iter()
                .map(|c| v.ground().names(c.items()).into_iter().map(String::from).collect())
                .collect()
        }
        assert_eq!(names(&tri), vec![vec!["a", "b"], vec!["a", "c"], vec!["b", "c"]]);
        assert_eq!(names(&tri.delete(0).unwrap()), vec![vec!["b"], vec!["c"]]);
    }

    #[test]
    fn element_class_examples() {
        let tri = triangle().view();
        assert_eq!(tri.element_class(0).unwrap(), ElementClass::Regular);
        assert_eq!(tri.delete(0).unwrap().element_class(1).unwrap(), ElementClass::Coloop);
        let bc = tri.minor(ItemSet::EMPTY, set(&tri, &["b", "c"])).unwrap();
        assert_eq!(bc.element_class(0).unwrap(), ElementClass::Loop);
        assert!(tri.delete(0).unwrap().element_class(0).is_err());
    }
}
