use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use claimtrade::clearing::is_fixed_point;
use claimtrade::hierarchy::build_hierarchy;
use claimtrade::io::{parse_network, parse_solution, serialize_network, serialize_solution};
use claimtrade::multi_in::{greedy_restructure, optimal_multi_in, tradable_edges};
use claimtrade::oracle::{
    picard_clearing, random_network, Direction, GridSearchConfig, RandomNetworkSpec,
};
use claimtrade::outgoing::{
    optimal_multi_out_excess, optimal_unbounded_returns, AssetWeights, UnboundedOptions,
};
use claimtrade::rational::{int, ratio, to_f64};
use claimtrade::single::optimal_single_trade;
use claimtrade::solution::Outcome;
use claimtrade::trade::{apply_trade, post_trade_state, InLeg, TradeSpec};
use claimtrade::{clearing_state, BankId, EdgeId, FinancialNetwork, Rational};

fn network(seed: u64, n: usize, delta: Rational) -> FinancialNetwork {
    random_network(
        seed,
        &RandomNetworkSpec {
            n,
            edge_density: 0.5,
            max_liability: 6,
            max_assets: 4,
            delta,
        },
    )
}

fn delta_strategy() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(int(1)), Just(ratio(1, 2)), Just(ratio(1, 4))]
}

fn net_strategy() -> impl Strategy<Value = FinancialNetwork> {
    (any::<u64>(), 2usize..=6, delta_strategy())
        .prop_map(|(seed, n, delta)| network(seed, n, delta))
}

fn unit_fraction() -> impl Strategy<Value = Rational> {
    (0i64..=12).prop_map(|k| ratio(k, 12))
}

/// First (creditor, buyer) pair with at least one tradable edge.
fn trade_pair(net: &FinancialNetwork) -> Option<(BankId, BankId)> {
    net.bank_ids()
        .flat_map(|v| net.bank_ids().map(move |w| (v, w)))
        .find(|(v, w)| v != w && !tradable_edges(net, *v, *w).is_empty())
}

fn total_liabilities(net: &FinancialNetwork) -> Vec<Rational> {
    net.bank_ids()
        .map(|b| net.total_liability(b).clone())
        .collect()
}

/// Random multi-in trade within the buyer's budget.
fn multi_in_trade(
    net: &FinancialNetwork,
    v: BankId,
    w: BankId,
    betas: &[Rational],
    alpha: &Rational,
) -> TradeSpec {
    let edges = tradable_edges(net, v, w);
    let legs: Vec<(EdgeId, Rational)> = edges
        .iter()
        .zip(betas.iter().cycle())
        .map(|(e, b)| (*e, b.clone()))
        .collect();
    let traded: Rational = legs.iter().map(|(e, b)| b * &net.edge(*e).liability).sum();
    let mut alpha = alpha.clone();
    if !traded.is_zero() && &alpha * &traded > *net.external(w) {
        alpha = net.external(w) / &traded;
    }
    TradeSpec::MultiIn {
        creditor: v,
        buyer: w,
        legs: legs
            .into_iter()
            .map(|(edge, beta)| InLeg {
                edge,
                beta,
                alpha: alpha.clone(),
            })
            .collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn clearing_is_the_greatest_fixed_point(net in net_strategy()) {
        let state = clearing_state(&net);
        prop_assert!(is_fixed_point(&net, &state));
        let config = GridSearchConfig::default();
        let below = picard_clearing(&net, Direction::FromBelow, &config).unwrap();
        let above = picard_clearing(&net, Direction::FromAbove, &config).unwrap();
        for (k, p) in state.payments.iter().enumerate() {
            let p = to_f64(p);
            prop_assert!(below.payments[k] <= p + 1e-9);
            prop_assert!((above.payments[k] - p).abs() <= 1e-9);
        }
    }

    #[test]
    fn clearing_is_monotone_in_external_assets(net in net_strategy(), pick in any::<prop::sample::Index>(), cut in 1i64..=4) {
        let b = BankId(pick.index(net.num_banks()));
        let lowered = (net.external(b) - int(cut)).max(Rational::zero());
        let before = clearing_state(&net);
        let after = clearing_state(&net.with_external(b, lowered));
        prop_assert!(after.assets.iter().zip(&before.assets).all(|(a, b)| a <= b));
        prop_assert!(after.recovery.iter().zip(&before.recovery).all(|(a, b)| a <= b));
    }

    #[test]
    fn merging_parallel_edges_keeps_assets(net in net_strategy()) {
        let merged = net.merge_parallel_edges();
        prop_assert_eq!(clearing_state(&merged).assets, clearing_state(&net).assets);
    }

    #[test]
    fn trades_keep_total_liabilities(
        net in net_strategy(),
        betas in prop::collection::vec(unit_fraction(), 1..4),
        alpha in unit_fraction(),
    ) {
        let Some((v, w)) = trade_pair(&net) else { return Ok(()) };
        let trade = multi_in_trade(&net, v, w, &betas, &alpha);
        let post = apply_trade(&net, &trade).unwrap();
        prop_assert_eq!(total_liabilities(&post), total_liabilities(&net));
    }

    #[test]
    fn no_positive_trade_without_default_cost(
        seed in any::<u64>(),
        n in 3usize..=6,
        betas in prop::collection::vec(unit_fraction(), 1..4),
        alpha in unit_fraction(),
    ) {
        let net = network(seed, n, int(1));
        let Some((v, w)) = trade_pair(&net) else { return Ok(()) };
        let pre = clearing_state(&net);
        let post = post_trade_state(&net, &multi_in_trade(&net, v, w, &betas, &alpha)).unwrap();
        prop_assert!(!(post.assets[v.0] > pre.assets[v.0] && post.assets[w.0] > pre.assets[w.0]));
    }

    #[test]
    fn greedy_restructure_keeps_a_dominated_fixed_point(
        net in net_strategy(),
        betas in prop::collection::vec(unit_fraction(), 1..4),
        alpha in unit_fraction(),
    ) {
        let Some((v, w)) = trade_pair(&net) else { return Ok(()) };
        let trade = multi_in_trade(&net, v, w, &betas, &alpha);
        let original = post_trade_state(&net, &trade).unwrap();
        let greedy = greedy_restructure(&net, &trade).unwrap();
        let TradeSpec::MultiIn { legs, .. } = &greedy else { panic!("greedy changed the trade kind") };
        prop_assert!(legs.iter().all(|l| l.alpha <= alpha));
        let post_net = apply_trade(&net, &greedy).unwrap();
        let state = clearing_state(&post_net);
        prop_assert!(state.assets.iter().zip(&original.assets).all(|(a, b)| a >= b));
        if state.assets != original.assets {
            let mut old = original.clone();
            old.payments = post_net.edges().iter().map(|e| &old.recovery[e.debtor.0] * &e.liability).collect();
            prop_assert!(is_fixed_point(&post_net, &old));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hierarchy_sets_are_nested(net in net_strategy()) {
        let Some((v, w)) = trade_pair(&net) else { return Ok(()) };
        let h = build_hierarchy(&net, v, w, net.external(w)).unwrap();
        prop_assert!(h.parts.len() <= h.split.network().num_banks() + 1);
        for pair in h.parts.windows(2) {
            prop_assert!(pair[1].solvent.is_subset(&pair[0].solvent));
            prop_assert!(pair[1].solvent.len() < pair[0].solvent.len());
        }
    }

    #[test]
    fn single_trades_are_canonical_and_resimulate(net in net_strategy()) {
        let Some((v, w)) = trade_pair(&net) else { return Ok(()) };
        let edge = tradable_edges(&net, v, w)[0];
        let Outcome::Found(sol) = optimal_single_trade(&net, edge, w, None).unwrap() else { return Ok(()) };
        let TradeSpec::Single { beta, alpha, .. } = &sol.trade else { panic!("not a single trade") };
        let rho = alpha * beta * &net.edge(edge).liability;
        prop_assert!(beta.is_one() || rho == *net.external(w));
        let post = post_trade_state(&net, &sol.trade).unwrap();
        prop_assert_eq!(&post, &sol.post_state);
        prop_assert!(post.gross_assets[v.0] > sol.pre_state.gross_assets[v.0]);
        prop_assert!(post.gross_assets[w.0] >= sol.pre_state.gross_assets[w.0]);
    }

    #[test]
    fn one_edge_multi_in_matches_single(seed in any::<u64>(), n in 3usize..=6, delta in delta_strategy()) {
        let net = network(seed, n, delta);
        let Some((v, w)) = net
            .bank_ids()
            .flat_map(|v| net.bank_ids().map(move |w| (v, w)))
            .find(|(v, w)| v != w && tradable_edges(&net, *v, *w).len() == 1)
        else {
            return Ok(());
        };
        let edge = tradable_edges(&net, v, w)[0];
        let single = optimal_single_trade(&net, edge, w, None).unwrap();
        let multi = optimal_multi_in(&net, v, w, None).unwrap();
        match (single, multi) {
            (Outcome::Found(s), Outcome::Found(m)) => prop_assert_eq!(s.post_state.assets, m.post_state.assets),
            (Outcome::NotFound(_), Outcome::NotFound(_)) => {}
            (s, m) => prop_assert!(false, "single {:?} vs multi {:?}", s.is_found(), m.is_found()),
        }
    }

    #[test]
    fn excess_returns_are_pareto_and_excess(seed in any::<u64>(), n in 3usize..=6) {
        let net = network(seed, n, int(1));
        let pre = clearing_state(&net);
        let Some(u) = net.bank_ids().find(|u| pre.recovery[u.0] < Rational::one()) else { return Ok(()) };
        for w in net.bank_ids().filter(|w| *w != u) {
            let Outcome::Found(sol) = optimal_multi_out_excess(&net, u, w).unwrap() else { continue };
            prop_assert!(sol.post_state.assets.iter().zip(&pre.assets).all(|(a, b)| a >= b));
            prop_assert!(sol.excess.as_ref().unwrap().iter().all(|x| !x.is_negative()));
            prop_assert_eq!(&post_trade_state(&net, &sol.trade).unwrap().assets, &sol.post_state.assets);
        }
    }

    #[test]
    fn unbounded_returns_respect_caps(seed in any::<u64>(), n in 3usize..=6, mask in any::<u16>(), pareto in any::<bool>()) {
        let net = network(seed, n, int(1));
        let w = BankId(0);
        let claims: Vec<EdgeId> = (0..net.num_edges())
            .map(EdgeId)
            .filter(|e| mask & (1 << (e.0 % 16)) != 0)
            .filter(|e| net.edge(*e).creditor != w && net.edge(*e).debtor != w)
            .collect();
        let creditors: Vec<BankId> = claims.iter().map(|e| net.edge(*e).creditor).collect();
        let options = UnboundedOptions {
            buyer_pareto: true,
            creditor_pareto: pareto,
            objective: AssetWeights::sum_of(&creditors),
            ..Default::default()
        };
        let Outcome::Found(sol) = optimal_unbounded_returns(&net, &claims, w, &options).unwrap() else { return Ok(()) };
        let TradeSpec::ClaimSet { returns, .. } = &sol.trade else { panic!("not a claim set") };
        let mut cap: BTreeMap<BankId, Rational> = BTreeMap::new();
        for e in &claims {
            *cap.entry(net.edge(*e).creditor).or_insert_with(Rational::zero) += &net.edge(*e).liability;
        }
        let mut paid = Rational::zero();
        for t in returns {
            prop_assert!(!t.amount.is_negative());
            prop_assert!(t.amount <= cap.get(&t.recipient).cloned().unwrap_or_else(Rational::zero));
            paid += &t.amount;
        }
        let gross = sol.buyer_gross.clone().unwrap();
        prop_assert!(gross >= paid);
        prop_assert!(gross >= sol.pre_state.assets[w.0]);
        if pareto {
            for c in &creditors {
                prop_assert!(sol.post_state.assets[c.0] >= sol.pre_state.assets[c.0]);
            }
        }
    }

    #[test]
    fn documents_round_trip(net in net_strategy()) {
        let text = serialize_network(&net);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(serialize_network(&back), text);
        let Some((v, w)) = trade_pair(&net) else { return Ok(()) };
        let Outcome::Found(sol) = optimal_multi_in(&net, v, w, None).unwrap() else { return Ok(()) };
        let doc = serialize_solution(&net, &sol);
        let parsed = parse_solution(&doc).unwrap();
        prop_assert!(parsed.verify(&net).unwrap().is_empty());
        prop_assert_eq!(serialize_solution(&net, &sol), doc);
    }
}
