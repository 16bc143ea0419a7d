//! Re-verifies counterexamples from first principles.
//!
//! Nothing here uses minors, subset tables, or greedy ranks: every notion
//! is rebuilt from the oracle's `is_independent` by exhaustive search, so
//! a reported violation cannot be an artifact of the checker's own code.

use crate::item::ItemSet;
use crate::matroid::Matroid;

use super::Counterexample;

struct Naive<'a> {
    m: &'a Matroid,
    all: ItemSet,
}

/// All subsets of `set`.
fn subsets(set: ItemSet) -> impl Iterator<Item = ItemSet> {
    let bits = set.bits();
    let mut sub = bits;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & bits;
        }
        Some(ItemSet::from_bits(out))
    })
}

impl<'a> Naive<'a> {
    fn new(m: &'a Matroid) -> Self {
        Naive {
            m,
            all: m.ground().all(),
        }
    }

    /// Size of a largest independent subset.
    fn rank(&self, set: ItemSet) -> usize {
        subsets(set)
            .filter(|&s| self.m.is_independent(s))
            .map(ItemSet::len)
            .max()
            .unwrap_or(0)
    }

    /// Rank in `M / z \ d`, for `x` disjoint from `z`.
    fn minor_rank(&self, x: ItemSet, z: ItemSet) -> usize {
        self.rank(x | z) - self.rank(z)
    }

    /// Whether `c` is a cocircuit of `M / z \ d` with active items `active`.
    fn is_cocircuit(&self, c: ItemSet, active: ItemSet, z: ItemSet) -> bool {
        let r = self.minor_rank(active, z);
        let hits = |s: ItemSet| self.minor_rank(active - s, z) < r;
        !c.is_empty() && c.is_subset(active) && hits(c) && c.iter().all(|x| !hits(c.without(x)))
    }

    fn is_circuit(&self, c: ItemSet, z: ItemSet) -> bool {
        let independent = |s: ItemSet| self.minor_rank(s, z) == s.len();
        !c.is_empty() && !independent(c) && c.iter().all(|x| independent(c.without(x)))
    }

    fn is_base(&self, b: ItemSet) -> bool {
        self.m.is_independent(b) && b.len() == self.rank(self.all)
    }

    /// Heaviest base of `M / z` over the items outside `z`.
    fn best(&self, z: ItemSet, weights: &[i64]) -> i64 {
        let active = self.all - z;
        let r = self.minor_rank(active, z);
        subsets(active)
            .filter(|&b| b.len() == r && self.minor_rank(b, z) == r)
            .map(|b| b.iter().map(|e| weights[e]).sum())
            .max()
            .unwrap_or(i64::MIN)
    }

    /// Whether some cocircuit of the minor lies inside `within`, optionally
    /// required to contain `x`.
    fn cocircuit_inside(&self, within: ItemSet, x: Option<usize>, active: ItemSet, z: ItemSet) -> bool {
        subsets(within)
            .filter(|d| x.is_none_or(|x| d.contains(x)))
            .any(|d| self.is_cocircuit(d, active, z))
    }
}

/// Whether `counterexample` is a genuine violation in `m`.
pub fn recheck(m: &Matroid, counterexample: &Counterexample) -> bool {
    let n = Naive::new(m);
    let all = n.all;
    let none = ItemSet::EMPTY;
    match counterexample {
        Counterexample::CocircuitAfterDeletion { e, cocircuit, uncovered } => {
            let rest = cocircuit.without(*e);
            n.is_cocircuit(*cocircuit, all, none)
                && rest.contains(*uncovered)
                && !n.cocircuit_inside(rest, Some(*uncovered), all.without(*e), none)
        }
        Counterexample::CocircuitBeforeDeletion { e, cocircuit } => {
            n.is_cocircuit(*cocircuit, all.without(*e), none)
                && n.is_cocircuit(*cocircuit, all, none) == n.is_cocircuit(cocircuit.with(*e), all, none)
        }
        Counterexample::Augmentation {
            independent,
            cocircuit,
            e,
            weights,
        } => {
            let optimum = n.best(none, weights);
            let weight = |s: ItemSet| s.iter().map(|f| weights[f]).sum::<i64>();
            let extendable = |s: ItemSet| m.is_independent(s) && weight(s) + n.best(s, weights) == optimum;
            let heaviest = cocircuit.iter().all(|f| weights[f] <= weights[*e]);
            extendable(*independent)
                && n.is_cocircuit(*cocircuit, all - *independent, *independent)
                && cocircuit.contains(*e)
                && heaviest
                && !extendable(independent.with(*e))
        }
        Counterexample::NotExtendable { independent, weights } => {
            let optimum = n.best(none, weights);
            let weight: i64 = independent.iter().map(|f| weights[f]).sum();
            !m.is_independent(*independent) || weight + n.best(*independent, weights) != optimum
        }
        Counterexample::CocircuitExchange { first, second, e } => {
            first != second
                && n.is_cocircuit(*first, all, none)
                && n.is_cocircuit(*second, all, none)
                && first.contains(*e)
                && second.contains(*e)
                && !n.cocircuit_inside((*first | *second).without(*e), None, all, none)
        }
        Counterexample::StrongBaseExchange { hat, base, e } => {
            n.is_base(*hat)
                && n.is_base(*base)
                && (*base - *hat).contains(*e)
                && !(*hat - *base)
                    .iter()
                    .any(|f| n.is_base(hat.without(f).with(*e)) && n.is_base(base.without(*e).with(f)))
        }
        Counterexample::CircuitContraction { e, circuit } => {
            // contracting a loop is deleting it, which leaves circuits alone
            let z = if m.is_independent(ItemSet::singleton(*e)) {
                ItemSet::singleton(*e)
            } else {
                none
            };
            let after = |c: ItemSet| !c.contains(*e) && n.is_circuit(c, z);
            if !n.is_circuit(*circuit, none) {
                return false;
            }
            if circuit.contains(*e) {
                *circuit != ItemSet::singleton(*e) && !after(circuit.without(*e))
            } else {
                circuit
                    .iter()
                    .any(|x| !subsets(*circuit).any(|d| d.contains(x) && after(d)))
            }
        }
        Counterexample::RankIdentity { x, z, reported } => {
            // rank of x in M / z by definition: largest y ⊆ x with y ∪ (basis of z) independent
            let basis = subsets(*z)
                .filter(|&s| m.is_independent(s))
                .max_by_key(|s| s.len())
                .unwrap_or(none);
            let direct = subsets(*x)
                .filter(|&y| m.is_independent(y | basis))
                .map(ItemSet::len)
                .max()
                .unwrap_or(0);
            direct != *reported
        }
    }
}
