use matroid_auction::auction::{
    audit_trace, emit_trace, parse_trace, resolve_initial_monopsonies, run_auction, validate_trace, AuctionConfig,
    AuctionEvent, ResolutionOrder,
};
use matroid_auction::catalog::{build_matroid, BuyerId, Instance, MatroidSpec};
use matroid_auction::fixtures::{doubled_triangle, four_buyer_graph, parallel_path};
use matroid_auction::strategy::truthful_bidders;

fn run(instance: &Instance, config: AuctionConfig) -> (matroid_auction::auction::Outcome, Vec<AuctionEvent>) {
    run_auction(instance, &mut truthful_bidders(instance), &config).unwrap()
}

#[test]
fn four_buyer_graph_unit_step() {
    let inst = four_buyer_graph();
    let (outcome, trace) = run(&inst, AuctionConfig::default());
    let g = inst.ground();
    assert_eq!(outcome.base, g.set_of(&["y2", "z2", "w", "z1"]).unwrap());
    assert!(outcome.item_prices.values().all(|&p| p == 2));
    assert_eq!(outcome.payments(), vec![0, 2, 4, 2]);
    assert_eq!(outcome.welfare, 14);
    let text = emit_trace(&trace);
    assert_eq!(
        text,
        "PRICE 0\nPRICE 1\nPRICE 2\n\
         CRITICAL buyer=1 item=x price=2\n\
         CRITICAL buyer=2 item=y1 price=2\n\
         CRITICAL buyer=3 item=z1 price=2\n\
         DELETE item=x price=2\n\
         MONOPSONY buyer=2 cocircuit=[y1,y2] price=2\n\
         SELL buyer=2 item=y2 price=2\n\
         MONOPSONY buyer=3 cocircuit=[z2] price=2\n\
         SELL buyer=3 item=z2 price=2\n\
         MONOPSONY buyer=4 cocircuit=[w] price=2\n\
         SELL buyer=4 item=w price=2\n\
         DELETE item=y1 price=2\n\
         MONOPSONY buyer=3 cocircuit=[z1] price=2\n\
         SELL buyer=3 item=z1 price=2\n"
    );
    assert!(audit_trace(&trace, &inst).unwrap().is_clean());
}

#[test]
fn four_buyer_graph_long_step_matches() {
    let inst = four_buyer_graph();
    let (unit, _) = run(&inst, AuctionConfig::default());
    let (long, trace) = run(&inst, AuctionConfig::long_step());
    assert_eq!(unit, long);
    assert_eq!(trace[0], AuctionEvent::PriceRaised { price: 2 });
    assert!(audit_trace(&trace, &inst).unwrap().is_clean());
}

#[test]
fn parallel_path_sales() {
    let inst = parallel_path();
    let (outcome, trace) = run(&inst, AuctionConfig::default());
    let text = emit_trace(&trace);
    assert!(text.contains("SELL buyer=2 item=e2 price=2\n"), "{text}");
    assert!(text.contains("SELL buyer=1 item=f1 price=3\n"), "{text}");
    assert_eq!(outcome.welfare, 7);
    assert!(audit_trace(&trace, &inst).unwrap().is_clean());
}

#[test]
fn doubled_triangle_truthful() {
    let inst = doubled_triangle();
    let (outcome, trace) = run(&inst, AuctionConfig::default());
    assert!(audit_trace(&trace, &inst).unwrap().is_clean(), "{}", emit_trace(&trace));
    assert_eq!(outcome.welfare, 7);
}

#[test]
fn initial_monopsonies() {
    // coloop c owned by buyer 2
    let spec = MatroidSpec::graphic(3, &[("a", 0, 1), ("b", 0, 1), ("c", 1, 2)]);
    let inst = Instance::from_ids(build_matroid(&spec).unwrap(), &[(1, &[("a", 1), ("b", 2)]), (2, &[("c", 3)])]).unwrap();
    let (sales, view) = resolve_initial_monopsonies(&inst, &mut truthful_bidders(&inst)).unwrap();
    assert_eq!(sales.len(), 2);
    assert_eq!(
        sales[0],
        AuctionEvent::InitialSale { buyer: BuyerId(1), item: matroid_auction::Item::new("b").unwrap() }
    );
    assert_eq!(view.full_rank(), 0);
    // rank-1, single buyer
    let u = build_matroid(&MatroidSpec::uniform(3, 1)).unwrap();
    let ids: Vec<String> = u.ground().items().iter().map(|i| i.to_string()).collect();
    let inst = Instance::from_ids(u, &[(1, &[(ids[0].as_str(), 1), (ids[1].as_str(), 5), (ids[2].as_str(), 2)])]).unwrap();
    let (outcome, trace) = run(&inst, AuctionConfig::default());
    assert_eq!(trace.len(), 2, "{}", emit_trace(&trace));
    assert_eq!(outcome.base.len(), 1);
    assert_eq!(outcome.payments(), vec![0]);
    assert!(audit_trace(&trace, &inst).unwrap().is_clean());
}

#[test]
fn four_buyer_graph_has_no_initial_sales() {
    let inst = four_buyer_graph();
    let (sales, view) = resolve_initial_monopsonies(&inst, &mut truthful_bidders(&inst)).unwrap();
    assert!(sales.is_empty());
    assert_eq!(view.full_rank(), 4);
}

#[test]
fn shuffled_orders_keep_the_outcome_value() {
    let inst = four_buyer_graph();
    for seed in 0..20 {
        let config = AuctionConfig { order: ResolutionOrder::Shuffled { seed }, ..Default::default() };
        let (outcome, trace) = run(&inst, config);
        assert_eq!(outcome.welfare, 14);
        assert_eq!(outcome.payments().iter().sum::<u64>(), 8);
        assert!(validate_trace(&trace, &inst).is_clean());
    }
}

#[test]
fn tampered_traces_are_flagged() {
    let inst = four_buyer_graph();
    let (_, trace) = run(&inst, AuctionConfig::default());
    let text = emit_trace(&trace).replace("SELL buyer=4 item=w price=2", "SELL buyer=4 item=w price=99");
    let report = validate_trace(&parse_trace(&text).unwrap(), &inst);
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].index, Some(12));
    assert!(report.violations[0].message.contains("sale price 99"), "{:?}", report);

    let text = emit_trace(&trace).replace("SELL buyer=2 item=y2", "SELL buyer=2 item=x");
    assert!(!validate_trace(&parse_trace(&text).unwrap(), &inst).is_clean());
    let truncated = &trace[..trace.len() - 1];
    assert!(!validate_trace(truncated, &inst).is_clean());
}
