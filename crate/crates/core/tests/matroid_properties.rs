use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matroid_auction::catalog::{
    build_matroid, parallel_copy_reduction, random_instance, random_matroid_spec, BuyerId, Family, Instance,
    MatroidSpec, RandomParams, Shape, Valuations,
};
use matroid_auction::greedy::{max_weight_base, sealed_bid_vcg, vickrey_prices_at};
use matroid_auction::io::{emit_instance, parse_instance};
use matroid_auction::matroid::{ElementClass, Matroid, MinorView, SubsetTable};
use matroid_auction::ItemSet;

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn spec_of(family: Family, max_items: usize, seed: u64) -> MatroidSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = Shape::sample(family, max_items, &mut rng);
    random_matroid_spec(shape, &mut rng).unwrap()
}

fn matroid(max_items: usize) -> impl Strategy<Value = Matroid> {
    (family(), any::<u64>()).prop_map(move |(f, seed)| build_matroid(&spec_of(f, max_items, seed)).unwrap())
}

fn instance(max_items: usize) -> impl Strategy<Value = Instance> {
    (family(), any::<u64>(), 1usize..=4).prop_map(move |(f, seed, buyers)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape::sample(f, max_items, &mut rng);
        let params = RandomParams {
            min_value: 0,
            ..RandomParams::new(shape, buyers, 9)
        };
        random_instance(&params, seed).unwrap()
    })
}

fn subsets(set: ItemSet) -> impl Iterator<Item = ItemSet> {
    let bits = set.bits();
    let mut sub = Some(bits);
    std::iter::from_fn(move || {
        let out = sub?;
        sub = (out != 0).then(|| (out - 1) & bits);
        Some(ItemSet::from_bits(out))
    })
}

fn non_loops(m: &Matroid) -> ItemSet {
    m.ground().all().iter().filter(|&e| m.is_independent(ItemSet::singleton(e))).collect()
}

fn agree(a: &MinorView, b: &MinorView) -> bool {
    a.active() == b.active() && subsets(a.active()).all(|s| a.is_independent(s).unwrap() == b.is_independent(s).unwrap())
}

/// Contracting a loop means deleting it.
fn contract_or_delete(view: &MinorView, e: usize) -> MinorView {
    match view.element_class(e).unwrap() {
        ElementClass::Loop => view.delete(e).unwrap(),
        _ => view.contract(e).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn minors_commute(m in matroid(10), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut delete = ItemSet::EMPTY;
        let mut contract = ItemSet::EMPTY;
        let candidates = non_loops(&m);
        for e in m.ground().all() {
            match rng.random_range(0..3) {
                0 => delete.insert(e),
                1 if candidates.contains(e) => contract.insert(e),
                _ => {}
            }
        }
        let batch = m.view().minor(delete, contract).unwrap();
        let mut steps: Vec<(bool, usize)> =
            delete.iter().map(|e| (true, e)).chain(contract.iter().map(|e| (false, e))).collect();
        steps.shuffle(&mut rng);
        let mut one_by_one = m.view();
        for (del, e) in steps {
            one_by_one = if del { one_by_one.delete(e).unwrap() } else { contract_or_delete(&one_by_one, e) };
        }
        prop_assert!(agree(&batch, &one_by_one));
    }

    #[test]
    fn contraction_base_choice_is_irrelevant(m in matroid(10), bits in any::<u64>()) {
        let contract = ItemSet::from_bits(bits) & non_loops(&m);
        let grow = |order: Vec<usize>| {
            order.into_iter().fold(ItemSet::EMPTY, |b, e| if m.is_independent(b.with(e)) { b.with(e) } else { b })
        };
        let up = grow(contract.iter().collect());
        let mut reversed: Vec<usize> = contract.iter().collect();
        reversed.reverse();
        let down = grow(reversed);
        let a = MinorView::from_parts(m.clone(), ItemSet::EMPTY, contract, up).unwrap();
        let b = MinorView::from_parts(m.clone(), ItemSet::EMPTY, contract, down).unwrap();
        prop_assert!(agree(&a, &b));
    }

    #[test]
    fn cocircuit_search_matches_enumeration(m in matroid(9), del in any::<u64>(), within in any::<u64>()) {
        let view = m.view().minor(ItemSet::from_bits(del) & m.ground().all(), ItemSet::EMPTY).unwrap();
        let within = ItemSet::from_bits(within) & view.active();
        let all = view.enumerate_cocircuits().unwrap();
        let bases = SubsetTable::build(&view).unwrap().bases();
        let meets_all = |s: ItemSet| bases.iter().all(|b| !b.is_disjoint(s));
        for c in &all {
            prop_assert!(meets_all(c.items()));
            prop_assert!(c.items().iter().all(|e| !meets_all(c.items().without(e))));
        }
        match view.find_cocircuit_within(within).unwrap() {
            None => prop_assert!(all.iter().all(|c| !c.items().is_subset(within))),
            Some(c) => {
                prop_assert!(c.items().is_subset(within));
                prop_assert!(all.contains(&c));
            }
        }
    }

    #[test]
    fn rank_is_monotone_and_submodular(m in matroid(8)) {
        let view = m.view();
        let all = m.ground().all();
        let rank: BTreeMap<u64, usize> = subsets(all).map(|s| (s.bits(), view.rank(s).unwrap())).collect();
        let r = |s: ItemSet| rank[&s.bits()];
        for x in subsets(all) {
            for e in all - x {
                prop_assert!(r(x) <= r(x.with(e)) && r(x.with(e)) <= r(x) + 1);
            }
            for y in subsets(all) {
                prop_assert!(r(x | y) + r(x & y) <= r(x) + r(y));
            }
        }
    }

    #[test]
    fn graphic_oracle_finds_forests(seed in any::<u64>()) {
        let spec = spec_of(Family::Graphic, 8, seed);
        let MatroidSpec::Graphic { vertices, edges } = &spec else { unreachable!() };
        let m = build_matroid(&spec).unwrap();
        let ends: Vec<[usize; 2]> = m
            .ground()
            .items()
            .iter()
            .map(|i| edges.iter().find(|e| e.id == i.as_str()).unwrap().ends)
            .collect();
        for s in subsets(m.ground().all()) {
            // a forest on s: edges never close a cycle, by repeated relabeling
            let mut comp: Vec<usize> = (0..*vertices).collect();
            let mut forest = true;
            for e in s {
                let [u, v] = ends[e];
                let (cu, cv) = (comp[u], comp[v]);
                if cu == cv {
                    forest = false;
                    break;
                }
                comp.iter_mut().filter(|c| **c == cv).for_each(|c| *c = cu);
            }
            prop_assert_eq!(m.is_independent(s), forest, "{}", m.ground().display(s));
        }
    }

    #[test]
    fn greedy_is_optimal(m in matroid(10), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<i64> = (0..m.ground().len()).map(|_| rng.random_range(-3..=9)).collect();
        let view = m.view();
        let greedy = max_weight_base(&view, &weights).unwrap();
        prop_assert!(view.is_base(greedy.items).unwrap());
        prop_assert_eq!(greedy.weight, SubsetTable::build(&view).unwrap().max_base_weight(&weights));
    }

    #[test]
    fn vickrey_prices_across_optima(inst in instance(9)) {
        let view = inst.matroid().view();
        let weights = inst.weights();
        let Ok(greedy) = sealed_bid_vcg(&inst, inst.valuations()) else {
            // some buyer holds a monopsony
            return Ok(());
        };
        let optimum = greedy.base.weight;
        let won = |base: ItemSet, items: ItemSet| -> i64 { (base - items).iter().map(|e| weights[e]).sum() };
        for b in SubsetTable::build(&view).unwrap().bases() {
            if b.iter().map(|e| weights[e]).sum::<i64>() != optimum {
                continue;
            }
            let other = vickrey_prices_at(&view, &inst, inst.valuations(), b).unwrap();
            let same_split = inst.interests().all(|(_, items)| won(b, items) == won(greedy.base.items, items));
            if same_split {
                prop_assert_eq!(&other.buyer_prices, &greedy.buyer_prices);
            }
            // utilities never depend on the optimum chosen
            for (buyer, items) in inst.interests() {
                let utility = |base: ItemSet, prices: &BTreeMap<BuyerId, u64>| {
                    (base & items).iter().map(|e| weights[e]).sum::<i64>() - prices[&buyer] as i64
                };
                prop_assert_eq!(utility(b, &other.buyer_prices), utility(greedy.base.items, &greedy.buyer_prices));
            }
        }
    }

    #[test]
    fn sealed_bid_is_individually_rational(inst in instance(10)) {
        if let Ok(vcg) = sealed_bid_vcg(&inst, inst.valuations()) {
            for (buyer, items) in inst.interests() {
                let won: u64 = (vcg.base.items & items).iter().map(|e| inst.valuation(e)).sum();
                prop_assert!(vcg.buyer_prices[&buyer] <= won);
            }
        }
    }

    #[test]
    fn instances_round_trip(inst in instance(10)) {
        let back = parse_instance(&emit_instance(&inst).unwrap()).unwrap();
        prop_assert_eq!(back.ground(), inst.ground());
        prop_assert_eq!(back.valuation_map(), inst.valuation_map());
        for s in subsets(inst.ground().all()) {
            prop_assert_eq!(back.matroid().is_independent(s), inst.matroid().is_independent(s));
        }
    }

    #[test]
    fn parallel_copies(m in matroid(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = m.ground().len();
        let buyers = rng.random_range(1..=3u32);
        let mut raw = Valuations::new();
        let mut wanted: Vec<Vec<(BuyerId, u64)>> = vec![Vec::new(); n];
        for (e, w) in wanted.iter_mut().enumerate() {
            let mut who: Vec<u32> = (1..=buyers).filter(|_| rng.random_bool(0.5)).collect();
            if who.is_empty() {
                who.push(rng.random_range(1..=buyers));
            }
            for b in who {
                let v = rng.random_range(0..=9);
                raw.entry(BuyerId(b)).or_default().insert(e, v);
                w.push((BuyerId(b), v));
            }
        }
        let reduced = parallel_copy_reduction(&m, &raw).unwrap();
        let best_reduced = max_weight_base(&reduced.matroid().view(), &reduced.weights()).unwrap().weight;

        // every way of selling each item to one of its buyers
        let mut best_raw = i64::MIN;
        let choices: usize = wanted.iter().map(Vec::len).product();
        for mut k in 0..choices {
            let weights: Vec<i64> = wanted
                .iter()
                .map(|w| {
                    let pick = w[k % w.len()].1;
                    k /= w.len();
                    pick as i64
                })
                .collect();
            best_raw = best_raw.max(SubsetTable::build(&m.view()).unwrap().max_base_weight(&weights));
        }
        prop_assert_eq!(best_reduced, best_raw);

        // copies of a non-loop are pairwise parallel
        let g = reduced.ground();
        for (e, w) in wanted.iter().enumerate().filter(|(_, w)| w.len() > 1) {
            if !m.is_independent(ItemSet::singleton(e)) {
                continue;
            }
            let id = m.ground().item(e).as_str();
            let copies: Vec<usize> = w.iter().map(|(b, _)| g.index_of(&format!("{id}#{b}")).unwrap()).collect();
            for (i, &a) in copies.iter().enumerate() {
                for &b in &copies[i + 1..] {
                    let pair = ItemSet::singleton(a).with(b);
                    prop_assert!(!reduced.matroid().is_independent(pair));
                    prop_assert!(reduced.matroid().is_independent(ItemSet::singleton(a)));
                }
            }
        }
    }
}
