//! Single claims trades and single donations that dominate every
//! creditor-positive (or buyer-omega-improved) alternative.
//!
//! For each part of the default hierarchy a linear program maximizes the
//! creditor's post-trade assets over the fixed-point relaxation of that
//! part. Every candidate is re-simulated on the post-trade network; the
//! clearing state dominates the program's fixed point, so the reported
//! values are never below the program's optimum.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::clearing::{clearing_state, ClearingState};
use crate::error::{Error, Result};
use crate::hierarchy::{build_hierarchy, DefaultHierarchy};
use crate::lp::{solve_lp, LinExpr, LinearProgram, LpOutcome, Relation, Sense};
use crate::network::{BankId, EdgeId, FinancialNetwork};
use crate::rational::{min, Rational};
use crate::solution::{Benchmark, NotFound, Outcome, TradeSolution};
use crate::trade::{apply_trade, InLeg, TradeSpec};

/// Linearization of the trade constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TradeCase {
    /// The edge is traded completely; the return is free.
    BetaOne,
    /// The whole budget is paid and the debtor pays nothing after the trade.
    FullBudgetRZero,
    /// The whole budget is paid and the debtor pays a positive amount;
    /// solved through `y = r'_u * beta * l_e`.
    FullBudgetRPos,
}

pub const ALL_CASES: [TradeCase; 3] = [
    TradeCase::BetaOne,
    TradeCase::FullBudgetRZero,
    TradeCase::FullBudgetRPos,
];

/// Assumed post-trade solvency of the buyer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuyerRegime {
    Insolvent,
    Solvent,
}

/// Buyer regimes worth solving for a target `omega`.
pub fn buyer_regimes(net: &FinancialNetwork, w: BankId, omega: &Rational) -> Vec<BuyerRegime> {
    let liability = net.total_liability(w);
    if liability.is_zero() || omega >= liability {
        vec![BuyerRegime::Solvent]
    } else {
        vec![BuyerRegime::Insolvent, BuyerRegime::Solvent]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pivot {
    Donation,
    Edge(EdgeId, TradeCase),
}

/// Program for trading incoming edges of the hierarchy's creditor within
/// one part: `prefix` edges are traded completely, `pivot` by the case.
pub(crate) struct InProgram<'a> {
    pub net: &'a FinancialNetwork,
    pub hierarchy: &'a DefaultHierarchy,
    pub part: usize,
    pub regime: BuyerRegime,
    pub omega: &'a Rational,
    /// Further restriction of the creditor's assets, inside the part.
    pub window: Option<(Rational, Option<Rational>)>,
    pub prefix: &'a [EdgeId],
    pub pivot: Pivot,
}

/// A candidate from one program, before re-simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct PartSolution {
    pub trade: TradeSpec,
    /// Creditor assets at the program's optimum.
    pub program_value: Rational,
}

impl InProgram<'_> {
    pub(crate) fn solve(&self, as_multi: bool) -> Option<PartSolution> {
        let net = self.net;
        let h = self.hierarchy;
        let (v, w) = (h.creditor, h.buyer);
        let part = &h.parts[self.part];
        let solvent = h.solvent_base_banks(self.part);
        let delta = net.delta();
        let budget = net.external(w);
        let zero_debtor = match self.pivot {
            Pivot::Edge(e, TradeCase::FullBudgetRZero) => Some(net.edge(e).debtor),
            _ => None,
        };

        let mut lp = LinearProgram::new(Sense::Maximize);
        let mut free = BTreeSet::new();
        let r: Vec<LinExpr> = net
            .bank_ids()
            .map(|b| {
                let pinned = net.total_liability(b).is_zero()
                    || solvent.contains(&b)
                    || (b == v && part.is_top())
                    || (b == w && self.regime == BuyerRegime::Solvent);
                if Some(b) == zero_debtor {
                    if pinned {
                        return LinExpr::constant(Rational::one());
                    }
                    LinExpr::new()
                } else if pinned {
                    LinExpr::constant(Rational::one())
                } else {
                    free.insert(b);
                    LinExpr::var(lp.add_unit_var(format!("r_{}", net.name(b))))
                }
            })
            .collect();
        if let Some(u) = zero_debtor {
            if !r[u.0].constant_term().is_zero() {
                return None;
            }
        }

        let prefix_total: Rational = self.prefix.iter().map(|e| &net.edge(*e).liability).sum();
        let mut traded: BTreeSet<EdgeId> = self.prefix.iter().copied().collect();
        if let Pivot::Edge(e, _) = self.pivot {
            traded.insert(e);
        }
        let inflow = |b: BankId| {
            let mut sum = LinExpr::new();
            for e in net.incoming(b) {
                if !traded.contains(e) {
                    let edge = net.edge(*e);
                    sum.add_scaled(&r[edge.debtor.0], &edge.liability);
                }
            }
            sum
        };

        for b in net.bank_ids().filter(|b| *b != v && *b != w) {
            let mut assets = inflow(b);
            assets.add_constant(net.external(b));
            let liability = net.total_liability(b);
            if solvent.contains(&b) {
                lp.constrain(assets, Relation::Ge, LinExpr::constant(liability.clone()));
            } else if free.contains(&b) {
                lp.constrain(r[b.0].clone() * liability, Relation::Le, assets * delta);
            }
        }

        let mut a_v = inflow(v);
        a_v.add_constant(net.external(v));
        let mut a_w = inflow(w);
        a_w.add_constant(budget);
        for e in self.prefix {
            let edge = net.edge(*e);
            a_w.add_scaled(&r[edge.debtor.0], &edge.liability);
        }

        let mut rho_var = None;
        let mut y_var = None;
        let rho = match self.pivot {
            Pivot::Donation => {
                let x = lp.add_var("rho", Some(Rational::zero()), Some(budget.clone()));
                rho_var = Some(x);
                LinExpr::var(x)
            }
            Pivot::Edge(e, TradeCase::BetaOne) => {
                let cap = min(budget, &(&prefix_total + &net.edge(e).liability));
                let x = lp.add_var("rho", Some(Rational::zero()), Some(cap));
                rho_var = Some(x);
                let edge = net.edge(e);
                a_w.add_scaled(&r[edge.debtor.0], &edge.liability);
                LinExpr::var(x)
            }
            Pivot::Edge(e, TradeCase::FullBudgetRZero) => {
                if *budget > &prefix_total + &net.edge(e).liability {
                    return None;
                }
                LinExpr::constant(budget.clone())
            }
            Pivot::Edge(e, TradeCase::FullBudgetRPos) => {
                let edge = net.edge(e);
                let y = lp.add_var("y", Some(Rational::zero()), None);
                y_var = Some(y);
                let r_u = &r[edge.debtor.0];
                a_v.add_scaled(r_u, &edge.liability);
                a_v.add_term(y, -Rational::one());
                a_w.add_term(y, Rational::one());
                lp.constrain(LinExpr::var(y), Relation::Le, r_u.clone() * &edge.liability);
                let mut covered = r_u.clone() * &prefix_total;
                covered.add_term(y, Rational::one());
                lp.constrain(r_u.clone() * budget, Relation::Le, covered);
                LinExpr::constant(budget.clone())
            }
        };
        a_v = a_v + rho.clone();
        a_w = a_w - rho;

        let l_v = net.total_liability(v);
        if part.is_top() {
            lp.constrain(a_v.clone(), Relation::Ge, LinExpr::constant(l_v.clone()));
        } else {
            lp.constrain(r[v.0].clone() * l_v, Relation::Le, a_v.clone() * delta);
        }
        let (lo, hi) = match &self.window {
            Some((lo, hi)) => (lo.clone(), hi.clone()),
            None => (part.lower.clone(), part.upper.clone()),
        };
        lp.constrain(a_v.clone(), Relation::Ge, LinExpr::constant(lo));
        if let Some(hi) = hi {
            lp.constrain(a_v.clone(), Relation::Le, LinExpr::constant(hi));
        }
        lp.constrain(
            a_w.clone(),
            Relation::Ge,
            LinExpr::constant(self.omega.clone()),
        );
        let l_w = net.total_liability(w);
        match self.regime {
            BuyerRegime::Solvent => {
                lp.constrain(a_w, Relation::Ge, LinExpr::constant(l_w.clone()));
            }
            BuyerRegime::Insolvent => {
                if free.contains(&w) {
                    lp.constrain(r[w.0].clone() * l_w, Relation::Le, a_w * delta);
                }
            }
        }
        lp.set_objective(a_v.clone());

        let LpOutcome::Optimal(sol) = solve_lp(&lp) else {
            return None;
        };
        let program_value = sol.eval(&a_v);
        let trade = match self.pivot {
            Pivot::Donation => {
                let amount = sol.value(rho_var.expect("donation amount")).clone();
                if amount.is_zero() {
                    return None;
                }
                TradeSpec::Donation {
                    donor: w,
                    recipient: v,
                    amount,
                }
            }
            Pivot::Edge(e, case) => {
                let liability = &net.edge(e).liability;
                let (beta, rho) = match case {
                    TradeCase::BetaOne => {
                        (Rational::one(), sol.value(rho_var.expect("return")).clone())
                    }
                    TradeCase::FullBudgetRZero => (Rational::one(), budget.clone()),
                    TradeCase::FullBudgetRPos => {
                        let r_u = sol.eval(&r[net.edge(e).debtor.0]);
                        if r_u.is_zero() {
                            return None;
                        }
                        let y = sol.value(y_var.expect("substitution")).clone();
                        (y / (r_u * liability), budget.clone())
                    }
                };
                let total = &prefix_total + &beta * liability;
                let alpha = if total.is_zero() {
                    Rational::zero()
                } else {
                    rho / total
                };
                if as_multi {
                    let mut legs: Vec<InLeg> = self
                        .prefix
                        .iter()
                        .map(|p| InLeg {
                            edge: *p,
                            beta: Rational::one(),
                            alpha: alpha.clone(),
                        })
                        .collect();
                    legs.push(InLeg {
                        edge: e,
                        beta,
                        alpha,
                    });
                    TradeSpec::MultiIn {
                        creditor: v,
                        buyer: w,
                        legs,
                    }
                } else {
                    TradeSpec::Single {
                        edge: e,
                        buyer: w,
                        beta,
                        alpha,
                    }
                }
            }
        };
        Some(PartSolution {
            trade,
            program_value,
        })
    }
}

/// Optimum of one part, case and buyer regime for a single trade of
/// `edge`; `None` when the program is infeasible or the case does not
/// apply.
#[allow(clippy::too_many_arguments)]
pub fn solve_single_part(
    net: &FinancialNetwork,
    edge: EdgeId,
    hierarchy: &DefaultHierarchy,
    part: usize,
    regime: BuyerRegime,
    case: TradeCase,
    omega: &Rational,
) -> Option<PartSolution> {
    if hierarchy.parts[part].degenerate {
        return None;
    }
    InProgram {
        net,
        hierarchy,
        part,
        regime,
        omega,
        window: None,
        prefix: &[],
        pivot: Pivot::Edge(edge, case),
    }
    .solve(false)
}

/// Re-simulates candidates and keeps the one with the most creditor
/// assets, then the most buyer assets; earlier candidates win ties.
pub(crate) fn select_best(
    net: &FinancialNetwork,
    pre_state: &ClearingState,
    v: BankId,
    w: BankId,
    omega: &Rational,
    candidates: impl IntoIterator<Item = TradeSpec>,
) -> Outcome {
    let mut best: Option<(TradeSpec, FinancialNetwork, ClearingState)> = None;
    for trade in candidates {
        let Ok(post_net) = apply_trade(net, &trade) else {
            continue;
        };
        let post = clearing_state(&post_net);
        if post.gross_assets[w.0] < *omega {
            continue;
        }
        let better = match &best {
            None => true,
            Some((_, _, cur)) => {
                let key = (&post.gross_assets[v.0], &post.gross_assets[w.0]);
                key > (&cur.gross_assets[v.0], &cur.gross_assets[w.0])
            }
        };
        if better {
            best = Some((trade, post_net, post));
        }
    }
    match best {
        Some((trade, post_network, post_state))
            if post_state.gross_assets[v.0] > pre_state.gross_assets[v.0] =>
        {
            let benchmark = if *omega > pre_state.gross_assets[w.0] {
                Benchmark::BuyerOmegaImproved
            } else {
                Benchmark::CreditorPositive
            };
            Outcome::Found(Box::new(TradeSolution {
                objective: post_state.assets[v.0].clone(),
                trade,
                post_network,
                pre_state: pre_state.clone(),
                post_state,
                creditor: Some(v),
                benchmark,
                excess: None,
                buyer_gross: None,
            }))
        }
        _ => Outcome::NotFound(NotFound::NoBenchmarkTrade),
    }
}

fn target(pre: &ClearingState, w: BankId, omega: Option<&Rational>) -> Rational {
    omega
        .cloned()
        .unwrap_or_else(|| pre.gross_assets[w.0].clone())
}

/// Single trade of `edge` to `w` whose post-trade assets weakly dominate
/// every creditor-positive trade of that edge (or every trade leaving the
/// buyer at least `omega`).
pub fn optimal_single_trade(
    net: &FinancialNetwork,
    edge: EdgeId,
    w: BankId,
    omega: Option<&Rational>,
) -> Result<Outcome> {
    net.check_edge(edge)?;
    net.check_bank(w)?;
    let (u, v) = (net.edge(edge).debtor, net.edge(edge).creditor);
    if u == w || v == w {
        return Err(Error::InvalidTrade(
            "buyer must differ from debtor and creditor".into(),
        ));
    }
    let pre = clearing_state(net);
    let omega = target(&pre, w, omega);
    let h = build_hierarchy(net, v, w, &omega)?;
    let mut candidates = Vec::new();
    for part in 0..h.parts.len() {
        for regime in buyer_regimes(net, w, &omega) {
            for case in ALL_CASES {
                if let Some(s) = solve_single_part(net, edge, &h, part, regime, case, &omega) {
                    candidates.push(s.trade);
                }
            }
        }
    }
    Ok(select_best(net, &pre, v, w, &omega, candidates))
}

/// Donation from `w` to `v` maximizing `v`'s assets with the donor keeping
/// at least `omega`.
pub fn optimal_single_donation(
    net: &FinancialNetwork,
    v: BankId,
    w: BankId,
    omega: Option<&Rational>,
) -> Result<Outcome> {
    net.check_bank(v)?;
    net.check_bank(w)?;
    let pre = clearing_state(net);
    let omega = target(&pre, w, omega);
    let h = build_hierarchy(net, v, w, &omega)?;
    let mut candidates = Vec::new();
    for part in 0..h.parts.len() {
        if h.parts[part].degenerate {
            continue;
        }
        for regime in buyer_regimes(net, w, &omega) {
            let program = InProgram {
                net,
                hierarchy: &h,
                part,
                regime,
                omega: &omega,
                window: None,
                prefix: &[],
                pivot: Pivot::Donation,
            };
            if let Some(s) = program.solve(false) {
                candidates.push(s.trade);
            }
        }
    }
    Ok(select_best(net, &pre, v, w, &omega, candidates))
}
