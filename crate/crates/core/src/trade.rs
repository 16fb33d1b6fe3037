//! Claims trades: post-trade networks, canonical forms and Pareto checks.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::clearing::{clearing_state, ClearingState};
use crate::error::{Error, Result};
use crate::network::{BankId, Edge, EdgeId, FinancialNetwork};
use crate::rational::{min, Rational};

/// One traded incoming edge: fraction `beta` at haircut rate `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct InLeg {
    pub edge: EdgeId,
    pub beta: Rational,
    pub alpha: Rational,
}

/// One traded outgoing edge: fraction `beta` with absolute return `ret`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutLeg {
    pub edge: EdgeId,
    pub beta: Rational,
    pub ret: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transfer {
    pub recipient: BankId,
    pub amount: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TradeSpec {
    Single {
        edge: EdgeId,
        buyer: BankId,
        beta: Rational,
        alpha: Rational,
    },
    MultiIn {
        creditor: BankId,
        buyer: BankId,
        legs: Vec<InLeg>,
    },
    MultiOut {
        debtor: BankId,
        buyer: BankId,
        legs: Vec<OutLeg>,
    },
    Donation {
        donor: BankId,
        recipient: BankId,
        amount: Rational,
    },
    MultiDonation {
        donor: BankId,
        transfers: Vec<Transfer>,
    },
    /// A set of claims traded completely to `buyer`, with per-creditor returns.
    ClaimSet {
        buyer: BankId,
        claims: Vec<EdgeId>,
        returns: Vec<Transfer>,
    },
}

/// Whether returns must be funded from the buyer's external assets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReturnBound {
    #[default]
    Budgeted,
    Unbounded,
}

impl TradeSpec {
    /// The bank paying returns or donations.
    pub fn buyer(&self) -> BankId {
        match self {
            TradeSpec::Single { buyer, .. }
            | TradeSpec::MultiIn { buyer, .. }
            | TradeSpec::MultiOut { buyer, .. }
            | TradeSpec::ClaimSet { buyer, .. } => *buyer,
            TradeSpec::Donation { donor, .. } | TradeSpec::MultiDonation { donor, .. } => *donor,
        }
    }

    pub fn identity(edge: EdgeId, buyer: BankId) -> Self {
        TradeSpec::Single {
            edge,
            buyer,
            beta: Rational::zero(),
            alpha: Rational::zero(),
        }
    }

    /// Total money moved from the buyer's external assets.
    pub fn total_return(&self, net: &FinancialNetwork) -> Rational {
        self.transfers(net).into_iter().map(|t| t.amount).sum()
    }

    /// Return payments and donations as plain transfers.
    pub fn transfers(&self, net: &FinancialNetwork) -> Vec<Transfer> {
        match self {
            TradeSpec::Single {
                edge, beta, alpha, ..
            } => vec![Transfer {
                recipient: net.edge(*edge).creditor,
                amount: alpha * beta * &net.edge(*edge).liability,
            }],
            TradeSpec::MultiIn { creditor, legs, .. } => vec![Transfer {
                recipient: *creditor,
                amount: legs
                    .iter()
                    .map(|l| &l.alpha * &l.beta * &net.edge(l.edge).liability)
                    .sum(),
            }],
            TradeSpec::MultiOut { legs, .. } => legs
                .iter()
                .map(|l| Transfer {
                    recipient: net.edge(l.edge).creditor,
                    amount: l.ret.clone(),
                })
                .collect(),
            TradeSpec::Donation {
                recipient, amount, ..
            } => vec![Transfer {
                recipient: *recipient,
                amount: amount.clone(),
            }],
            TradeSpec::MultiDonation { transfers, .. } => transfers.clone(),
            TradeSpec::ClaimSet { returns, .. } => returns.clone(),
        }
    }

    /// Traded fractions per edge.
    pub fn traded_fractions(&self) -> Vec<(EdgeId, Rational)> {
        match self {
            TradeSpec::Single { edge, beta, .. } => vec![(*edge, beta.clone())],
            TradeSpec::MultiIn { legs, .. } => {
                legs.iter().map(|l| (l.edge, l.beta.clone())).collect()
            }
            TradeSpec::MultiOut { legs, .. } => {
                legs.iter().map(|l| (l.edge, l.beta.clone())).collect()
            }
            TradeSpec::ClaimSet { claims, .. } => {
                claims.iter().map(|e| (*e, Rational::one())).collect()
            }
            TradeSpec::Donation { .. } | TradeSpec::MultiDonation { .. } => Vec::new(),
        }
    }
}

fn check_fraction(what: &'static str, value: &Rational) -> Result<()> {
    if value.is_negative() || *value > Rational::one() {
        Err(Error::FractionOutOfRange {
            what,
            value: value.clone(),
        })
    } else {
        Ok(())
    }
}

fn check_trade(net: &FinancialNetwork, trade: &TradeSpec, bound: ReturnBound) -> Result<()> {
    let buyer = trade.buyer();
    net.check_bank(buyer)?;
    let budgeted = bound == ReturnBound::Budgeted;
    let mut seen = std::collections::BTreeSet::new();
    let mut check_leg_edge = |edge: EdgeId| -> Result<&Edge> {
        net.check_edge(edge)?;
        if !seen.insert(edge) {
            return Err(Error::InvalidTrade(format!("{edge} traded twice")));
        }
        let e = net.edge(edge);
        if e.debtor == buyer || e.creditor == buyer {
            return Err(Error::InvalidTrade(format!("{edge} touches the buyer")));
        }
        Ok(e)
    };
    match trade {
        TradeSpec::Single {
            edge, beta, alpha, ..
        } => {
            check_leg_edge(*edge)?;
            check_fraction("beta", beta)?;
            if budgeted || alpha.is_negative() {
                check_fraction("alpha", alpha)?;
            }
        }
        TradeSpec::MultiIn { creditor, legs, .. } => {
            net.check_bank(*creditor)?;
            for leg in legs {
                let e = check_leg_edge(leg.edge)?;
                if e.creditor != *creditor {
                    return Err(Error::InvalidTrade(format!(
                        "{} is not an incoming edge of {}",
                        leg.edge,
                        net.name(*creditor)
                    )));
                }
                check_fraction("beta", &leg.beta)?;
                if budgeted || leg.alpha.is_negative() {
                    check_fraction("alpha", &leg.alpha)?;
                }
            }
        }
        TradeSpec::MultiOut { debtor, legs, .. } => {
            net.check_bank(*debtor)?;
            for leg in legs {
                let e = check_leg_edge(leg.edge)?;
                if e.debtor != *debtor {
                    return Err(Error::InvalidTrade(format!(
                        "{} is not an outgoing edge of {}",
                        leg.edge,
                        net.name(*debtor)
                    )));
                }
                check_fraction("beta", &leg.beta)?;
                if leg.ret.is_negative() {
                    return Err(Error::InvalidTrade("negative return".into()));
                }
                if budgeted && leg.ret > &leg.beta * &e.liability {
                    let value = if leg.beta.is_zero() {
                        leg.ret.clone()
                    } else {
                        &leg.ret / (&leg.beta * &e.liability)
                    };
                    return Err(Error::FractionOutOfRange {
                        what: "alpha",
                        value,
                    });
                }
            }
        }
        TradeSpec::Donation {
            recipient, amount, ..
        } => {
            net.check_bank(*recipient)?;
            if *recipient == buyer || amount.is_negative() {
                return Err(Error::InvalidTrade("invalid donation".into()));
            }
        }
        TradeSpec::MultiDonation { transfers, .. } => {
            for t in transfers {
                net.check_bank(t.recipient)?;
                if t.recipient == buyer || t.amount.is_negative() {
                    return Err(Error::InvalidTrade("invalid donation".into()));
                }
            }
        }
        TradeSpec::ClaimSet {
            claims, returns, ..
        } => {
            let mut traded: BTreeMap<BankId, Rational> = BTreeMap::new();
            for claim in claims {
                let e = check_leg_edge(*claim)?;
                *traded.entry(e.creditor).or_insert_with(Rational::zero) += &e.liability;
            }
            for t in returns {
                let Some(cap) = traded.get(&t.recipient) else {
                    return Err(Error::InvalidTrade(format!(
                        "{} holds no traded claim",
                        net.name(t.recipient)
                    )));
                };
                if t.amount.is_negative() {
                    return Err(Error::InvalidTrade("negative return".into()));
                }
                if budgeted && t.amount > *cap {
                    return Err(Error::FractionOutOfRange {
                        what: "alpha",
                        value: &t.amount / cap,
                    });
                }
            }
        }
    }
    let total = trade.total_return(net);
    if budgeted && total > *net.external(buyer) {
        return Err(Error::BudgetExceeded {
            required: Box::new(total),
            available: Box::new(net.external(buyer).clone()),
        });
    }
    Ok(())
}

/// Post-trade network with budgeted returns.
pub fn apply_trade(net: &FinancialNetwork, trade: &TradeSpec) -> Result<FinancialNetwork> {
    apply_trade_with(net, trade, ReturnBound::Budgeted)
}

/// Post-trade network: each traded edge keeps `(1 - beta)` of its liability
/// (dropped at zero) and the buyer gains a claim of `beta * l` on the
/// debtor, merged into an existing debtor-to-buyer edge when present.
/// Returns move external assets from the buyer to the recipients; with
/// [`ReturnBound::Unbounded`] the buyer's external assets may go negative.
pub fn apply_trade_with(
    net: &FinancialNetwork,
    trade: &TradeSpec,
    bound: ReturnBound,
) -> Result<FinancialNetwork> {
    check_trade(net, trade, bound)?;
    let buyer = trade.buyer();
    let mut liabilities: Vec<Rational> = net.edges().iter().map(|e| e.liability.clone()).collect();
    let mut to_buyer: BTreeMap<BankId, Rational> = BTreeMap::new();
    for (edge, beta) in trade.traded_fractions() {
        if beta.is_zero() {
            continue;
        }
        let e = net.edge(edge);
        let moved = &beta * &e.liability;
        liabilities[edge.0] -= &moved;
        *to_buyer.entry(e.debtor).or_insert_with(Rational::zero) += moved;
    }
    let mut edges: Vec<Edge> = Vec::with_capacity(net.num_edges() + to_buyer.len());
    for (idx, e) in net.edges().iter().enumerate() {
        let mut liability = liabilities[idx].clone();
        if e.creditor == buyer {
            if let Some(extra) = to_buyer.get(&e.debtor) {
                if net.find_edge(e.debtor, buyer) == Some(EdgeId(idx)) {
                    liability += extra;
                }
            }
        }
        if liability.is_positive() {
            edges.push(Edge {
                debtor: e.debtor,
                creditor: e.creditor,
                liability,
            });
        }
    }
    for (debtor, extra) in to_buyer {
        if net.find_edge(debtor, buyer).is_none() && extra.is_positive() {
            edges.push(Edge {
                debtor,
                creditor: buyer,
                liability: extra,
            });
        }
    }
    let mut externals: Vec<Rational> = net.banks().iter().map(|b| b.external.clone()).collect();
    for t in trade.transfers(net) {
        externals[buyer.0] -= &t.amount;
        externals[t.recipient.0] += &t.amount;
    }
    let banks = net
        .banks()
        .iter()
        .zip(externals)
        .map(|(b, external)| crate::network::Bank {
            name: b.name.clone(),
            external,
        })
        .collect();
    FinancialNetwork::new(banks, edges, net.delta().clone())
}

/// Clearing state of the post-trade network.
pub fn post_trade_state(net: &FinancialNetwork, trade: &TradeSpec) -> Result<ClearingState> {
    Ok(clearing_state(&apply_trade(net, trade)?))
}

/// Equivalent trade with `rho = a^x_w` or every traded fraction at 1.
///
/// Raising a fraction by `eta` reroutes `r'_u * eta * l_e` of the debtor's
/// payments to the buyer; the same amount is added to the return, so every
/// bank's assets are unchanged.
pub fn normalize_trade(net: &FinancialNetwork, trade: &TradeSpec) -> Result<TradeSpec> {
    let post = post_trade_state(net, trade)?;
    let budget = net.external(trade.buyer()).clone();
    match trade {
        TradeSpec::Single {
            edge,
            buyer,
            beta,
            alpha,
        } => {
            let liability = &net.edge(*edge).liability;
            let rho = alpha * beta * liability;
            let recovery = &post.recovery[net.edge(*edge).debtor.0];
            let (beta, rho) = raise_fraction(beta, &rho, &budget, recovery, liability);
            Ok(TradeSpec::Single {
                edge: *edge,
                buyer: *buyer,
                alpha: haircut(&rho, &beta, liability),
                beta,
            })
        }
        TradeSpec::MultiIn {
            creditor,
            buyer,
            legs,
        } => {
            let mut spent = trade.total_return(net);
            let mut out = Vec::with_capacity(legs.len());
            for leg in legs {
                let liability = &net.edge(leg.edge).liability;
                let rho = &leg.alpha * &leg.beta * liability;
                let recovery = &post.recovery[net.edge(leg.edge).debtor.0];
                let remaining = &budget - &spent + &rho;
                let (beta, new_rho) =
                    raise_fraction(&leg.beta, &rho, &remaining, recovery, liability);
                spent += &new_rho - &rho;
                out.push(InLeg {
                    edge: leg.edge,
                    alpha: haircut(&new_rho, &beta, liability),
                    beta,
                });
            }
            Ok(TradeSpec::MultiIn {
                creditor: *creditor,
                buyer: *buyer,
                legs: out,
            })
        }
        other => Err(Error::InvalidTrade(format!(
            "normalization applies to incoming-edge trades, got {other:?}"
        ))),
    }
}

fn raise_fraction(
    beta: &Rational,
    rho: &Rational,
    budget: &Rational,
    recovery: &Rational,
    liability: &Rational,
) -> (Rational, Rational) {
    let one = Rational::one();
    if *beta >= one || rho >= budget {
        return (beta.clone(), rho.clone());
    }
    let eta = if recovery.is_zero() {
        &one - beta
    } else {
        min(&(&one - beta), &((budget - rho) / (recovery * liability)))
    };
    (beta + &eta, rho + recovery * &eta * liability)
}

fn haircut(rho: &Rational, beta: &Rational, liability: &Rational) -> Rational {
    if beta.is_zero() {
        Rational::zero()
    } else {
        rho / (beta * liability)
    }
}

/// Per-bank asset changes between two clearing states.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoReport {
    pub deltas: Vec<Rational>,
    /// No bank lost assets.
    pub weak_pareto: bool,
    /// Creditor strictly better, buyer unchanged.
    pub creditor_positive: bool,
    /// Creditor and buyer both strictly better.
    pub positive: bool,
}

pub fn pareto_report(
    pre: &ClearingState,
    post: &ClearingState,
    creditor: BankId,
    buyer: BankId,
) -> ParetoReport {
    let deltas: Vec<Rational> = post
        .assets
        .iter()
        .zip(&pre.assets)
        .map(|(a, b)| a - b)
        .collect();
    let weak_pareto = deltas.iter().all(|d| !d.is_negative());
    let creditor_up = deltas[creditor.0].is_positive();
    ParetoReport {
        creditor_positive: creditor_up && deltas[buyer.0].is_zero(),
        positive: creditor_up && deltas[buyer.0].is_positive(),
        weak_pareto,
        deltas,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    const U: BankId = BankId(0);
    const V: BankId = BankId(1);
    const W: BankId = BankId(2);

    fn single(beta: Rational, alpha: Rational) -> TradeSpec {
        TradeSpec::Single {
            edge: EdgeId(0),
            buyer: W,
            beta,
            alpha,
        }
    }

    #[test]
    fn binary_trade_on_fig1() {
        let net = fixtures::fig1();
        let trade = single(int(1), ratio(3, 4));
        let post_net = apply_trade(&net, &trade).unwrap();
        assert_eq!(post_net.find_edge(U, V), None);
        let uw = post_net.find_edge(U, W).unwrap();
        assert_eq!(post_net.edge(uw).liability, int(4));
        assert_eq!(post_net.external(V), &int(3));
        assert_eq!(post_net.external(W), &int(0));
        let state = clearing_state(&post_net);
        assert_eq!(state.assets[1], int(3));
        assert_eq!(state.assets[2], int(5));
    }

    #[test]
    fn fractional_trade_on_fig1() {
        let net = fixtures::fig1();
        let trade = single(ratio(3, 4), int(1));
        let post_net = apply_trade(&net, &trade).unwrap();
        assert_eq!(
            post_net.edge(post_net.find_edge(U, V).unwrap()).liability,
            int(1)
        );
        assert_eq!(
            post_net.edge(post_net.find_edge(U, W).unwrap()).liability,
            int(3)
        );
        let state = clearing_state(&post_net);
        assert_eq!(state.assets[1], ratio(7, 2));
        assert_eq!(state.assets[2], int(5));
        let report = pareto_report(&clearing_state(&net), &state, V, W);
        assert!(report.weak_pareto && report.creditor_positive && !report.positive);
        assert_eq!(report.deltas, vec![int(0), ratio(3, 2), int(0)]);
    }

    #[test]
    fn identity_trade_keeps_network() {
        let net = fixtures::fig1();
        let post = apply_trade(&net, &TradeSpec::identity(EdgeId(0), W)).unwrap();
        assert_eq!(post, net);
        let state = clearing_state(&net);
        let report = pareto_report(&state, &state, V, W);
        assert!(report.weak_pareto && !report.creditor_positive);
    }

    #[test]
    fn budget_and_fraction_errors() {
        let net = fixtures::fig1();
        assert!(matches!(
            apply_trade(&net, &single(int(1), int(1))),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            apply_trade(&net, &single(ratio(3, 2), int(0))),
            Err(Error::FractionOutOfRange { what: "beta", .. })
        ));
        assert!(matches!(
            apply_trade(&net, &single(ratio(1, 4), int(2))),
            Err(Error::FractionOutOfRange { what: "alpha", .. })
        ));
        assert!(apply_trade_with(&net, &single(int(1), int(1)), ReturnBound::Unbounded).is_ok());
    }

    #[test]
    fn existing_buyer_edge_absorbs_traded_claim() {
        let net = FinancialNetwork::builder()
            .bank("u", int(2))
            .bank("v", int(0))
            .bank("w", int(3))
            .edge("u", "v", int(4))
            .edge("u", "w", int(2))
            .build()
            .unwrap();
        let post = apply_trade(&net, &single(ratio(1, 2), int(0))).unwrap();
        assert_eq!(post.num_edges(), 2);
        assert_eq!(post.edge(EdgeId(1)).liability, int(4));
        assert_eq!(post.total_liability(U), net.total_liability(U));
    }

    #[test]
    fn normalization_on_fig1() {
        let net = fixtures::fig1();
        let trade = single(ratio(1, 2), ratio(1, 2)); // rho = 1
        let normalized = normalize_trade(&net, &trade).unwrap();
        let TradeSpec::Single { beta, alpha, .. } = &normalized else {
            panic!()
        };
        assert_eq!(beta, &int(1));
        assert_eq!(alpha * beta * int(4), int(2));
        let a = post_trade_state(&net, &trade).unwrap();
        let b = post_trade_state(&net, &normalized).unwrap();
        assert_eq!(a.assets, b.assets);
        assert_eq!(a.assets[1], int(2));
        assert_eq!(a.assets[2], int(5));
    }

    #[test]
    fn normalization_fixed_points() {
        let net = fixtures::fig1();
        let full = single(int(1), ratio(1, 4));
        assert_eq!(normalize_trade(&net, &full).unwrap(), full);
        let spent = single(ratio(3, 4), int(1)); // rho = 3 = a^x_w
        assert_eq!(normalize_trade(&net, &spent).unwrap(), spent);
    }

    #[test]
    fn donation_changes_only_external_assets() {
        let net = fixtures::fig1();
        let post = apply_trade(
            &net,
            &TradeSpec::Donation {
                donor: W,
                recipient: V,
                amount: int(2),
            },
        )
        .unwrap();
        assert_eq!(post.edges(), net.edges());
        assert_eq!(post.external(V), &int(2));
        assert_eq!(post.external(W), &int(1));
    }
}
