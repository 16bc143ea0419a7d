//! Brute-force checks of cocircuit, circuit, and exchange properties.
//!
//! Each check returns `Ok(None)` when the property holds and the first
//! violation found otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::item::ItemSet;
use crate::matroid::{Matroid, MinorView, SubsetTable};

use super::Counterexample;

/// Ground-set guard for the deletion and contraction checks.
pub const SMALL_LIMIT: usize = 14;
/// Ground-set guard for the pairwise checks.
pub const PAIR_LIMIT: usize = 12;

fn guard(m: &Matroid, limit: usize) -> Result<()> {
    let size = m.ground().len();
    if size > limit {
        return Err(Error::TooLarge {
            what: "ground set",
            size,
            limit,
        });
    }
    Ok(())
}

fn check_item(m: &Matroid, e: usize) -> Result<()> {
    if e >= m.ground().len() {
        return Err(Error::UnknownItem(format!("#{e}")));
    }
    Ok(())
}

/// `M / e`, or `M \ e` when `e` is a loop (the two coincide).
pub(crate) fn contract_or_delete(view: &MinorView, e: usize) -> Result<MinorView> {
    if view.independent_unchecked(ItemSet::singleton(e)) {
        view.contract(e)
    } else {
        view.delete(e)
    }
}

/// Whether each member of `set` lies in some family member inside `set`.
fn covered(family: &[ItemSet], set: ItemSet) -> Option<usize> {
    set.iter()
        .find(|&x| !family.iter().any(|d| d.contains(x) && d.is_subset(set)))
}

/// Every cocircuit of `M`, minus `e`, is a union of cocircuits of `M \ e`.
pub fn check_cocircuits_after_deletion(m: &Matroid, e: usize) -> Result<Option<Counterexample>> {
    guard(m, SMALL_LIMIT)?;
    check_item(m, e)?;
    let view = m.view();
    let before = SubsetTable::build(&view)?.cocircuits();
    let after = SubsetTable::build(&view.delete(e)?)?.cocircuits();
    for c in before {
        if let Some(uncovered) = covered(&after, c.without(e)) {
            return Ok(Some(Counterexample::CocircuitAfterDeletion {
                e,
                cocircuit: c,
                uncovered,
            }));
        }
    }
    Ok(None)
}

/// For every cocircuit `C` of `M \ e`, exactly one of `C`, `C + e` is a
/// cocircuit of `M`.
pub fn check_cocircuits_before_deletion(m: &Matroid, e: usize) -> Result<Option<Counterexample>> {
    guard(m, SMALL_LIMIT)?;
    check_item(m, e)?;
    let view = m.view();
    let whole = SubsetTable::build(&view)?.cocircuits();
    for c in SubsetTable::build(&view.delete(e)?)?.cocircuits() {
        let plain = whole.binary_search(&c).is_ok();
        let grown = whole.binary_search(&c.with(e)).is_ok();
        if plain == grown {
            return Ok(Some(Counterexample::CocircuitBeforeDeletion { e, cocircuit: c }));
        }
    }
    Ok(None)
}

/// Largest base weight of `M / independent`, by enumeration.
fn best_after(view: &MinorView, independent: ItemSet, weights: &[i64]) -> Result<i64> {
    let rest = view.minor(ItemSet::EMPTY, independent)?;
    Ok(SubsetTable::build(&rest)?.max_base_weight(weights))
}

fn weight(set: ItemSet, weights: &[i64]) -> i64 {
    set.iter().map(|e| weights[e]).sum()
}

/// Adding a heaviest item of any cocircuit of `M / I` keeps `I` extendable
/// to a maximum-weight base.
///
/// `I` must itself be independent and extendable.
pub fn check_dawson_augmentation(m: &Matroid, weights: &[i64], independent: ItemSet) -> Result<Option<Counterexample>> {
    guard(m, PAIR_LIMIT)?;
    if weights.len() != m.ground().len() {
        return Err(Error::input(format!(
            "weights cover {} items, ground set has {}",
            weights.len(),
            m.ground().len()
        )));
    }
    let view = m.view();
    let table = SubsetTable::build(&view)?;
    let optimum = table.max_base_weight(weights);
    if !table.is_independent(independent) {
        return Err(Error::input(format!("{} is not independent", m.ground().display(independent))));
    }
    if weight(independent, weights) + best_after(&view, independent, weights)? != optimum {
        return Err(Error::input(format!(
            "{} does not extend to a maximum-weight base",
            m.ground().display(independent)
        )));
    }
    let contracted = view.minor(ItemSet::EMPTY, independent)?;
    let mut reached_by: Vec<Option<i64>> = vec![None; m.ground().len()];
    for c in SubsetTable::build(&contracted)?.cocircuits() {
        let top = c.iter().map(|e| weights[e]).max().expect("cocircuits are nonempty");
        for e in c.iter().filter(|&e| weights[e] == top) {
            let grown = independent.with(e);
            let reached = match reached_by[e] {
                Some(r) => r,
                None => {
                    let r = if table.is_independent(grown) {
                        weight(grown, weights) + best_after(&view, grown, weights)?
                    } else {
                        i64::MIN
                    };
                    reached_by[e] = Some(r);
                    r
                }
            };
            if reached != optimum {
                return Ok(Some(Counterexample::Augmentation {
                    independent,
                    cocircuit: c,
                    e,
                    weights: weights.to_vec(),
                }));
            }
        }
    }
    Ok(None)
}

/// For cocircuits `C1 != C2` sharing `e`, some cocircuit lies inside
/// `(C1 ∪ C2) - e`.
pub fn check_cocircuit_exchange(m: &Matroid) -> Result<Option<Counterexample>> {
    guard(m, PAIR_LIMIT)?;
    let table = SubsetTable::build(&m.view())?;
    let cocircuits = table.cocircuits();
    // contains[mask]: some cocircuit lies inside the local subset `mask`
    let n = table.len();
    let mut contains = vec![false; 1 << n];
    for c in &cocircuits {
        contains[table.to_local(*c) as usize] = true;
    }
    for mask in 1usize..(1 << n) {
        if !contains[mask] {
            contains[mask] = (0..n).any(|j| mask & (1 << j) != 0 && contains[mask & !(1 << j)]);
        }
    }
    for (i, &c1) in cocircuits.iter().enumerate() {
        for &c2 in &cocircuits[i + 1..] {
            for e in c1 & c2 {
                let union = (c1 | c2).without(e);
                if !contains[table.to_local(union) as usize] {
                    return Ok(Some(Counterexample::CocircuitExchange { first: c1, second: c2, e }));
                }
            }
        }
    }
    Ok(None)
}

/// For bases `B̂, B` and `e ∈ B - B̂`, some `f ∈ B̂ - B` makes both
/// `B̂ - f + e` and `B - e + f` bases.
pub fn check_strong_base_exchange(m: &Matroid) -> Result<Option<Counterexample>> {
    guard(m, PAIR_LIMIT)?;
    let table = SubsetTable::build(&m.view())?;
    let bases = table.bases();
    let is_base = |s: ItemSet| bases.binary_search(&s).is_ok();
    for &hat in &bases {
        for &b in &bases {
            for e in b - hat {
                let swapped = (hat - b).iter().any(|f| is_base(hat.without(f).with(e)) && is_base(b.without(e).with(f)));
                if !swapped {
                    return Ok(Some(Counterexample::StrongBaseExchange { hat, base: b, e }));
                }
            }
        }
    }
    Ok(None)
}

/// Circuits under contraction of `e`: a circuit through `e` is either `{e}`
/// or loses `e` to become a circuit of `M / e`; any other circuit is a union
/// of circuits of `M / e`. Also spot-checks the rank of minors against
/// `rank(X ∪ Z) - rank(Z)` on 100 pairs drawn from a generator seeded by `e`.
pub fn check_circuit_contraction(m: &Matroid, e: usize) -> Result<Option<Counterexample>> {
    guard(m, SMALL_LIMIT)?;
    check_item(m, e)?;
    let view = m.view();
    let table = SubsetTable::build(&view)?;
    let after = SubsetTable::build(&contract_or_delete(&view, e)?)?.circuits();
    for c in table.circuits() {
        let holds = if c.contains(e) {
            c == ItemSet::singleton(e) || after.binary_search(&c.without(e)).is_ok()
        } else {
            covered(&after, c).is_none()
        };
        if !holds {
            return Ok(Some(Counterexample::CircuitContraction { e, circuit: c }));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(e as u64);
    let n = m.ground().len();
    for _ in 0..100 {
        let z = ItemSet::from_bits(rng.random::<u64>()) & ItemSet::full(n);
        let x = (ItemSet::from_bits(rng.random::<u64>()) & ItemSet::full(n)) - z;
        let loops: ItemSet = z.iter().filter(|&f| !table.is_independent(ItemSet::singleton(f))).collect();
        let minor = view.minor(loops, z - loops)?;
        let reported = minor.rank(x)?;
        let expected = table.rank(x | z).checked_sub(table.rank(z));
        if expected != Some(reported) {
            return Ok(Some(Counterexample::RankIdentity { x, z, reported }));
        }
    }
    Ok(None)
}
