use std::collections::BTreeMap;

use matroid_auction::auction::{emit_trace, run_auction, AuctionConfig, Bidders, Observation, Signaling};
use matroid_auction::catalog::{BuyerId, Instance};
use matroid_auction::fixtures::{doubled_triangle, four_buyer_graph, parallel_path};
use matroid_auction::matroid::MinorView;
use matroid_auction::strategy::{
    appendix_b_scenarios, consistency_check, ex_post_equilibrium_check, proxy_auction, truthful_bidders,
    truthful_strategy, Constraint, Script, Strategy, Verdict,
};
use matroid_auction::{Item, ItemSet};

fn item(s: &str) -> Item {
    Item::new(s).unwrap()
}

fn observe<'a>(inst: &'a Instance, view: &MinorView, last: Option<u64>) -> Observation<'a> {
    Observation { last_price: last, active: view.active(), ground: inst.ground(), history: &[] }
}

#[test]
fn truthful_thresholds_and_choices() {
    let inst = parallel_path();
    let g = inst.ground();
    let mut s = truthful_strategy(inst.buyer_valuation(BuyerId(1)));
    let view = inst.matroid().view();
    assert_eq!(s.next_critical_threshold(&observe(&inst, &view, None)), Some(2));
    let after = view.delete(g.index_of("e1").unwrap()).unwrap();
    assert_eq!(s.next_critical_threshold(&observe(&inst, &after, Some(2))), Some(4));
    let f1 = g.index_of("f1").unwrap();
    let lone = after.delete(g.index_of("f2").unwrap()).unwrap();
    let c = lone.find_cocircuit_within(ItemSet::singleton(f1)).unwrap().unwrap();
    assert_eq!(s.choose_from_monopsony(c, &observe(&inst, &lone, Some(3))), f1);

    let graph = four_buyer_graph();
    let g = graph.ground();
    let mut two = truthful_strategy(graph.buyer_valuation(BuyerId(2)));
    let view = graph.matroid().view().delete(g.index_of("x").unwrap()).unwrap();
    let ys = view.find_cocircuit_within(g.set_of(&["y1", "y2"]).unwrap()).unwrap().unwrap();
    assert_eq!(two.choose_from_monopsony(ys, &observe(&graph, &view, Some(2))), g.index_of("y2").unwrap());

    // equal values: smallest id
    let (y1, y2) = (g.index_of("y1").unwrap(), g.index_of("y2").unwrap());
    let mut tie = truthful_strategy(BTreeMap::from([(y1, 3), (y2, 3)]));
    let c = view.find_cocircuit_within(g.set_of(&["y1", "y2"]).unwrap()).unwrap().unwrap();
    assert_eq!(tie.choose_from_monopsony(c, &observe(&graph, &view, Some(2))), y1);
}

#[test]
fn proxy_auction_examples() {
    let graph = four_buyer_graph();
    let (outcome, vcg) = proxy_auction(&graph, graph.valuations()).unwrap();
    assert_eq!(outcome.payments(), vec![0, 2, 4, 2]);
    assert_eq!(outcome.buyer_payments, vcg);

    let path = parallel_path();
    let (outcome, vcg) = proxy_auction(&path, &[2, 3, 4, 3]).unwrap();
    assert_eq!(outcome.payments(), vec![3, 2]);
    assert_eq!(outcome.base, path.ground().set_of(&["e2", "f1"]).unwrap());
    assert_eq!(outcome.buyer_payments, vcg);

    let (outcome, vcg) = proxy_auction(&graph, &[0; 6]).unwrap();
    assert_eq!(outcome.base.len(), 4);
    assert_eq!(outcome.payments(), vec![0; 4]);
    assert_eq!(outcome.buyer_payments, vcg);
}

#[test]
fn appendix_b_payoffs() {
    let report = appendix_b_scenarios().unwrap();
    assert_eq!(report.utilities_of(BuyerId(1)), vec![1, 1, 2, 0]);
    let spiteful = &report.profiles[3].outcome;
    assert_eq!(spiteful.item_prices["f2"], 4);
    assert!(report.table().contains("(s1', s2'')"));
}

fn prefer_critical_run() -> (Instance, Vec<matroid_auction::auction::AuctionEvent>) {
    let inst = doubled_triangle();
    let script: Script = serde_json::from_str(r#"{ "rules": [ { "prefer": ["m"] } ] }"#).unwrap();
    let mut bidders: Bidders = truthful_bidders(&inst);
    bidders.insert(BuyerId(1), Box::new(Strategy::scripted(&script, &inst, BuyerId(1)).unwrap()));
    let (_, trace) = run_auction(&inst, &mut bidders, &AuctionConfig::default()).unwrap();
    (inst, trace)
}

#[test]
fn preferring_the_critical_item_is_inconsistent() {
    let (inst, trace) = prefer_critical_run();
    let text = emit_trace(&trace);
    assert!(text.contains("CRITICAL buyer=1 item=m price=2\n"), "{text}");
    assert!(text.contains("MONOPSONY buyer=1 cocircuit=[l,m] price=2\nSELL buyer=1 item=m price=2\n"), "{text}");
    let report = consistency_check(&inst, &trace, BuyerId(1)).unwrap();
    let Verdict::Inconsistent { conflict } = &report.verdict else { panic!("{report:?}") };
    assert_eq!(
        conflict.pair(),
        (
            &Constraint::CriticalAt { item: item("m"), price: 2 },
            &Constraint::Choice { chosen: item("m"), over: item("l") }
        )
    );
    assert_eq!(conflict.lower[1], Constraint::SilentAt { item: item("l"), price: 2 });
    // the other buyers stayed truthful
    for b in [2, 3] {
        assert!(consistency_check(&inst, &trace, BuyerId(b)).unwrap().is_consistent());
    }
}

#[test]
fn truthful_traces_are_consistent_with_the_truth() {
    for inst in [four_buyer_graph(), parallel_path(), doubled_triangle()] {
        for config in [AuctionConfig::default(), AuctionConfig::long_step()] {
            let (_, trace) = run_auction(&inst, &mut truthful_bidders(&inst), &config).unwrap();
            for &b in inst.buyers() {
                let report = consistency_check(&inst, &trace, b).unwrap();
                let Verdict::Consistent { witness } = &report.verdict else { panic!("{report:?}") };
                let truth: BTreeMap<Item, u64> = inst
                    .buyer_valuation(b)
                    .into_iter()
                    .map(|(e, v)| (inst.ground().item(e).clone(), v))
                    .collect();
                assert!(report.constraints.iter().all(|c| c.holds(&truth)));
                assert!(report.constraints.iter().all(|c| c.holds(witness)));
            }
        }
    }
}

#[test]
fn silent_buyer_is_consistent_above_the_final_price() {
    let inst = four_buyer_graph();
    let (_, trace) = run_auction(&inst, &mut truthful_bidders(&inst), &AuctionConfig::default()).unwrap();
    // buyer 4 never announces anything
    let report = consistency_check(&inst, &trace, BuyerId(4)).unwrap();
    let Verdict::Consistent { witness } = report.verdict else { panic!() };
    assert_eq!(witness[&item("w")], 3);
}

#[test]
fn ex_post_examples() {
    let path = parallel_path();
    let report = ex_post_equilibrium_check(&path, BuyerId(1), 5).unwrap();
    assert_eq!(report.vectors_checked, 36);
    assert_eq!(report.truthful_utility, 1);
    assert!(report.holds(), "{report:?}");
    let graph = four_buyer_graph();
    for &b in graph.buyers() {
        assert!(ex_post_equilibrium_check(&graph, b, 6).unwrap().holds());
    }
    assert!(ex_post_equilibrium_check(&graph, BuyerId(2), 400).is_err());
}
