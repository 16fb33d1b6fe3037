//! Trades of outgoing edges of one debtor, multi-donations and complete
//! claim-set trades with returns not funded from external assets.
//!
//! All programs here assume no default cost: the fixed-point relaxation
//! is then dominated by the clearing state, so re-simulating the
//! program's trade can only improve every bank.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::clearing::{clearing_state, ClearingState};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinExpr, LinearProgram, LpOutcome, LpSolution, Relation, Sense, Var};
use crate::network::{Bank, BankId, Edge, EdgeId, FinancialNetwork};
use crate::rational::{int, Rational};
use crate::solution::{Benchmark, NotFound, Outcome, TradeSolution};
use crate::trade::{apply_trade, apply_trade_with, OutLeg, ReturnBound, TradeSpec, Transfer};

fn require_no_default_cost(net: &FinancialNetwork) -> Result<()> {
    if *net.delta() != Rational::one() {
        return Err(Error::DefaultCostUnsupported);
    }
    Ok(())
}

/// Recovery-rate variables with `r_b * L_b <= a'_b`.
struct FixedPointModel {
    lp: LinearProgram,
    recovery: Vec<Var>,
}

impl FixedPointModel {
    fn new(net: &FinancialNetwork) -> Self {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let recovery = net
            .bank_ids()
            .map(|b| {
                if net.total_liability(b).is_zero() {
                    lp.add_var(
                        format!("r_{}", net.name(b)),
                        Some(Rational::zero()),
                        Some(Rational::zero()),
                    )
                } else {
                    lp.add_unit_var(format!("r_{}", net.name(b)))
                }
            })
            .collect();
        Self { lp, recovery }
    }

    /// `a^x_b` plus payments on incoming edges not excluded by `skip`.
    fn inflow(&self, net: &FinancialNetwork, b: BankId, skip: impl Fn(EdgeId) -> bool) -> LinExpr {
        let mut expr = LinExpr::constant(net.external(b).clone());
        for e in net.incoming(b) {
            if !skip(*e) {
                let edge = net.edge(*e);
                expr.add_term(self.recovery[edge.debtor.0], edge.liability.clone());
            }
        }
        expr
    }

    fn bound_payments(&mut self, net: &FinancialNetwork, b: BankId, assets: &LinExpr) {
        let liability = net.total_liability(b);
        if !liability.is_zero() {
            self.lp.constrain(
                LinExpr::term(self.recovery[b.0], liability.clone()),
                Relation::Le,
                assets.clone(),
            );
        }
    }

    /// Maximizes `objective`, then minimizes `spend` among the optima.
    fn solve_lexicographic(mut self, objective: LinExpr, spend: LinExpr) -> LpOutcome {
        self.lp.set_objective(objective.clone());
        let first = match solve_lp(&self.lp) {
            LpOutcome::Optimal(s) => s,
            other => return other,
        };
        let best = first.eval(&objective);
        let mut second = self.lp.clone();
        second.constrain(objective, Relation::Ge, LinExpr::constant(best));
        let mut minimize = LinearProgram::new(Sense::Minimize);
        for def in second.vars() {
            minimize.add_var(def.name.clone(), def.lower.clone(), def.upper.clone());
        }
        for c in second.constraints() {
            minimize.constrain(c.expr.clone(), c.relation, LinExpr::new());
        }
        minimize.set_objective(spend);
        match solve_lp(&minimize) {
            LpOutcome::Optimal(s) => LpOutcome::Optimal(s),
            _ => LpOutcome::Optimal(first),
        }
    }
}

fn distinct(banks: impl IntoIterator<Item = BankId>) -> Vec<BankId> {
    let mut seen = BTreeSet::new();
    banks.into_iter().filter(|b| seen.insert(*b)).collect()
}

fn total(assets: &[Rational], banks: &[BankId]) -> Rational {
    banks.iter().map(|b| &assets[b.0]).sum()
}

fn dominates(post: &[Rational], pre: &[Rational]) -> bool {
    post.iter().zip(pre).all(|(a, b)| a >= b)
}

/// Outgoing edges of `u` that `w` may buy.
pub fn tradable_out_edges(net: &FinancialNetwork, u: BankId, w: BankId) -> Vec<EdgeId> {
    net.outgoing(u)
        .iter()
        .copied()
        .filter(|e| net.edge(*e).creditor != w)
        .collect()
}

struct ExcessPlan {
    eta: Vec<Rational>,
}

fn solve_excess(
    net: &FinancialNetwork,
    u: BankId,
    w: BankId,
    edges: &[EdgeId],
    pre: &ClearingState,
    floor: &Rational,
) -> Option<ExcessPlan> {
    let mut model = FixedPointModel::new(net);
    let ru = model.recovery[u.0];
    let eta: Vec<Var> = edges
        .iter()
        .enumerate()
        .map(|(i, _)| {
            model
                .lp
                .add_var(format!("eta_{i}"), Some(Rational::zero()), None)
        })
        .collect();
    let one_minus_ru = LinExpr::constant(Rational::one()) - LinExpr::var(ru);
    let creditors = distinct(edges.iter().map(|e| net.edge(*e).creditor));
    let mut objective = LinExpr::new();
    let mut spend = LinExpr::new();
    for b in net.bank_ids() {
        let mut assets = model.inflow(net, b, |_| false);
        for (e, var) in edges.iter().zip(&eta) {
            if net.edge(*e).creditor == b {
                assets.add_term(*var, Rational::one());
            }
            if b == w {
                assets.add_term(*var, -Rational::one());
            }
        }
        model.lp.constrain(
            assets.clone(),
            Relation::Ge,
            LinExpr::constant(pre.assets[b.0].clone()),
        );
        model.bound_payments(net, b, &assets);
        if creditors.contains(&b) {
            objective = objective + assets;
        }
    }
    for (e, var) in edges.iter().zip(&eta) {
        model.lp.constrain(
            LinExpr::var(*var),
            Relation::Le,
            one_minus_ru.clone() * &net.edge(*e).liability,
        );
        spend.add_term(*var, Rational::one());
    }
    model
        .lp
        .constrain(spend.clone(), Relation::Le, one_minus_ru * net.external(w));
    model.lp.constrain(
        LinExpr::var(ru),
        Relation::Ge,
        LinExpr::constant(floor.clone()),
    );
    let solution: LpSolution = model.solve_lexicographic(objective, spend).optimal()?;
    Some(ExcessPlan {
        eta: eta.iter().map(|v| solution.value(*v).clone()).collect(),
    })
}

fn donation_view(
    net: &FinancialNetwork,
    w: BankId,
    edges: &[EdgeId],
    eta: &[Rational],
) -> Result<FinancialNetwork> {
    let transfers = edges
        .iter()
        .zip(eta)
        .map(|(e, amount)| Transfer {
            recipient: net.edge(*e).creditor,
            amount: amount.clone(),
        })
        .collect();
    apply_trade(
        net,
        &TradeSpec::MultiDonation {
            donor: w,
            transfers,
        },
    )
}

fn excess_is_consistent(
    net: &FinancialNetwork,
    w: BankId,
    edges: &[EdgeId],
    eta: &[Rational],
    ru: &Rational,
) -> bool {
    let slack = Rational::one() - ru;
    let spent: Rational = eta.iter().sum();
    if spent.is_zero() {
        return true;
    }
    slack.is_positive()
        && spent <= net.external(w) * &slack
        && edges
            .iter()
            .zip(eta)
            .all(|(e, x)| *x <= &net.edge(*e).liability * &slack)
}

/// Multi-trade of outgoing edges of `u` to `w` with excess returns that
/// maximizes the total assets of the creditors without harming any bank.
pub fn optimal_multi_out_excess(net: &FinancialNetwork, u: BankId, w: BankId) -> Result<Outcome> {
    require_no_default_cost(net)?;
    net.check_bank(u)?;
    net.check_bank(w)?;
    if u == w {
        return Err(Error::InvalidTrade("debtor and buyer coincide".into()));
    }
    let pre = clearing_state(net);
    if pre.recovery[u.0] == Rational::one() {
        return Err(Error::DebtorFullyPaid);
    }
    let edges = tradable_out_edges(net, u, w);
    let creditors = distinct(edges.iter().map(|e| net.edge(*e).creditor));
    let mut floor = Rational::zero();
    let mut accepted = None;
    for _ in 0..=net.num_banks() {
        let Some(plan) = solve_excess(net, u, w, &edges, &pre, &floor) else {
            break;
        };
        let view = clearing_state(&donation_view(net, w, &edges, &plan.eta)?);
        let ru = view.recovery[u.0].clone();
        if excess_is_consistent(net, w, &edges, &plan.eta, &ru) {
            accepted = Some((plan, view, ru));
            break;
        }
        if ru <= floor {
            break;
        }
        floor = ru;
    }
    let Some((plan, view, ru)) = accepted else {
        return Err(Error::ResimulationMismatch(
            "excess returns do not fit the post-trade recovery rate".into(),
        ));
    };
    if total(&view.assets, &creditors) <= total(&pre.assets, &creditors) {
        return Ok(Outcome::NotFound(NotFound::NoParetoPositiveTrade));
    }
    let slack = Rational::one() - &ru;
    let legs: Vec<OutLeg> = edges
        .iter()
        .zip(&plan.eta)
        .map(|(e, eta)| {
            let liability = &net.edge(*e).liability;
            let beta = eta / (&slack * liability);
            OutLeg {
                edge: *e,
                ret: &beta * liability,
                beta,
            }
        })
        .collect();
    let trade = TradeSpec::MultiOut {
        debtor: u,
        buyer: w,
        legs,
    };
    let post_network = apply_trade(net, &trade)?;
    let post_state = clearing_state(&post_network);
    if post_state.assets != view.assets {
        return Err(Error::ResimulationMismatch(
            "literal trade and donation view disagree".into(),
        ));
    }
    if !dominates(&post_state.assets, &pre.assets) {
        return Ok(Outcome::NotFound(NotFound::NoParetoPositiveTrade));
    }
    Ok(Outcome::Found(Box::new(TradeSolution {
        objective: total(&post_state.assets, &creditors),
        trade,
        post_network,
        pre_state: pre,
        post_state,
        creditor: None,
        benchmark: Benchmark::ParetoPositive,
        excess: Some(plan.eta),
        buyer_gross: None,
    })))
}

/// Donations from `w` to `recipients` that maximize the total assets of
/// `objective` without harming any bank.
pub fn optimal_multi_donation(
    net: &FinancialNetwork,
    w: BankId,
    recipients: &[BankId],
    objective: &[BankId],
) -> Result<Outcome> {
    require_no_default_cost(net)?;
    net.check_bank(w)?;
    for b in recipients.iter().chain(objective) {
        net.check_bank(*b)?;
    }
    if recipients.contains(&w) {
        return Err(Error::InvalidTrade("donor among the recipients".into()));
    }
    let recipients = distinct(recipients.iter().copied());
    let targets = distinct(objective.iter().copied());
    let pre = clearing_state(net);
    let mut model = FixedPointModel::new(net);
    let amounts: Vec<Var> = recipients
        .iter()
        .map(|b| {
            model.lp.add_var(
                format!("rho_{}", net.name(*b)),
                Some(Rational::zero()),
                None,
            )
        })
        .collect();
    let mut goal = LinExpr::new();
    let mut spend = LinExpr::new();
    for var in &amounts {
        spend.add_term(*var, Rational::one());
    }
    for b in net.bank_ids() {
        let mut assets = model.inflow(net, b, |_| false);
        if let Some(i) = recipients.iter().position(|r| *r == b) {
            assets.add_term(amounts[i], Rational::one());
        }
        if b == w {
            assets = assets - spend.clone();
        }
        model.lp.constrain(
            assets.clone(),
            Relation::Ge,
            LinExpr::constant(pre.assets[b.0].clone()),
        );
        model.bound_payments(net, b, &assets);
        if targets.contains(&b) {
            goal = goal + assets;
        }
    }
    model.lp.constrain(
        spend.clone(),
        Relation::Le,
        LinExpr::constant(net.external(w).clone()),
    );
    let solution = match model.solve_lexicographic(goal, spend) {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Infeasible => return Ok(Outcome::NotFound(NotFound::Infeasible)),
        LpOutcome::Unbounded => return Err(Error::UnboundedProgram),
    };
    let trade = TradeSpec::MultiDonation {
        donor: w,
        transfers: recipients
            .iter()
            .zip(&amounts)
            .map(|(b, v)| Transfer {
                recipient: *b,
                amount: solution.value(*v).clone(),
            })
            .collect(),
    };
    let post_network = apply_trade(net, &trade)?;
    let post_state = clearing_state(&post_network);
    let value = total(&post_state.assets, &targets);
    if value <= total(&pre.assets, &targets) || !dominates(&post_state.assets, &pre.assets) {
        return Ok(Outcome::NotFound(NotFound::NoParetoPositiveDonation));
    }
    Ok(Outcome::Found(Box::new(TradeSolution {
        objective: value,
        trade,
        post_network,
        pre_state: pre,
        post_state,
        creditor: None,
        benchmark: Benchmark::ParetoPositive,
        excess: None,
        buyer_gross: None,
    })))
}

/// Upper bound on each creditor's return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReturnCap {
    /// At most the liability of the creditor's traded claims.
    #[default]
    ClaimLiability,
    None,
}

/// Linear objective over post-trade assets; the buyer counts with its
/// assets before paying returns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AssetWeights(pub Vec<(BankId, Rational)>);

impl AssetWeights {
    pub fn sum_of(banks: &[BankId]) -> Self {
        Self(banks.iter().map(|b| (*b, Rational::one())).collect())
    }

    pub fn eval(&self, assets: &[Rational]) -> Rational {
        self.0.iter().map(|(b, c)| c * &assets[b.0]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct UnboundedOptions {
    pub cap: ReturnCap,
    /// `a'_w >= a_w` on the buyer's assets before returns.
    pub buyer_pareto: bool,
    /// `a'_b >= a_b` for every creditor of a traded claim.
    pub creditor_pareto: bool,
    /// Creditors' total assets do not decrease.
    pub aggregate: bool,
    pub objective: AssetWeights,
}

/// Trades every claim in `claims` completely to `w` and picks per-creditor
/// returns, paid with priority out of the buyer's incoming payments, that
/// maximize the objective.
pub fn optimal_unbounded_returns(
    net: &FinancialNetwork,
    claims: &[EdgeId],
    w: BankId,
    options: &UnboundedOptions,
) -> Result<Outcome> {
    require_no_default_cost(net)?;
    net.check_bank(w)?;
    for (b, _) in &options.objective.0 {
        net.check_bank(*b)?;
    }
    let claims = {
        let mut seen = BTreeSet::new();
        claims
            .iter()
            .copied()
            .filter(|c| seen.insert(*c))
            .collect::<Vec<_>>()
    };
    for c in &claims {
        net.check_edge(*c)?;
        let e = net.edge(*c);
        if e.creditor == w || e.debtor == w {
            return Err(Error::InvalidTrade(format!("{c} touches the buyer")));
        }
    }
    let pre = clearing_state(net);
    let traded: BTreeSet<EdgeId> = claims.iter().copied().collect();
    let creditors = distinct(claims.iter().map(|c| net.edge(*c).creditor));
    let mut model = FixedPointModel::new(net);
    let returns: Vec<Var> = creditors
        .iter()
        .map(|b| {
            let cap = match options.cap {
                ReturnCap::ClaimLiability => Some(
                    claims
                        .iter()
                        .filter(|c| net.edge(**c).creditor == *b)
                        .map(|c| &net.edge(*c).liability)
                        .sum(),
                ),
                ReturnCap::None => None,
            };
            model
                .lp
                .add_var(format!("rho_{}", net.name(*b)), Some(Rational::zero()), cap)
        })
        .collect();
    let mut paid = LinExpr::new();
    for var in &returns {
        paid.add_term(*var, Rational::one());
    }
    let mut reported = Vec::with_capacity(net.num_banks());
    for b in net.bank_ids() {
        let mut assets = model.inflow(net, b, |e| traded.contains(&e));
        if let Some(i) = creditors.iter().position(|c| *c == b) {
            assets.add_term(returns[i], Rational::one());
        }
        if b == w {
            for c in &claims {
                let e = net.edge(*c);
                assets.add_term(model.recovery[e.debtor.0], e.liability.clone());
            }
            let net_assets = assets.clone() - paid.clone();
            model
                .lp
                .constrain(net_assets.clone(), Relation::Ge, LinExpr::new());
            model.bound_payments(net, b, &net_assets);
            if options.buyer_pareto {
                model.lp.constrain(
                    assets.clone(),
                    Relation::Ge,
                    LinExpr::constant(pre.assets[b.0].clone()),
                );
            }
        } else {
            model.bound_payments(net, b, &assets);
            if options.creditor_pareto && creditors.contains(&b) {
                model.lp.constrain(
                    assets.clone(),
                    Relation::Ge,
                    LinExpr::constant(pre.assets[b.0].clone()),
                );
            }
        }
        reported.push(assets);
    }
    if options.aggregate && !creditors.is_empty() {
        let mut sum = LinExpr::new();
        for b in &creditors {
            sum = sum + reported[b.0].clone();
        }
        model.lp.constrain(
            sum,
            Relation::Ge,
            LinExpr::constant(total(&pre.assets, &creditors)),
        );
    }
    let mut goal = LinExpr::new();
    for (b, c) in &options.objective.0 {
        goal.add_scaled(&reported[b.0], c);
    }
    let solution = match model.solve_lexicographic(goal, paid) {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Infeasible => return Ok(Outcome::NotFound(NotFound::Infeasible)),
        LpOutcome::Unbounded => return Err(Error::UnboundedProgram),
    };
    let trade = TradeSpec::ClaimSet {
        buyer: w,
        claims,
        returns: creditors
            .iter()
            .zip(&returns)
            .map(|(b, v)| Transfer {
                recipient: *b,
                amount: solution.value(*v).clone(),
            })
            .collect(),
    };
    let post_network = apply_trade_with(net, &trade, ReturnBound::Unbounded)?;
    let post_state = clearing_state(&post_network);
    let buyer_gross = &post_state.assets[w.0] + trade.total_return(net);
    let mut view = post_state.assets.clone();
    view[w.0] = buyer_gross.clone();
    Ok(Outcome::Found(Box::new(TradeSolution {
        objective: options.objective.eval(&view),
        trade,
        post_network,
        pre_state: pre,
        post_state,
        creditor: None,
        benchmark: Benchmark::Custom,
        excess: None,
        buyer_gross: Some(buyer_gross),
    })))
}

/// Banks of a set-packing gadget, by role.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetLayout {
    pub debtor: Option<BankId>,
    pub sets: Vec<BankId>,
    pub elements: Vec<BankId>,
    pub buyer: BankId,
    /// Edges from the debtor to each set bank.
    pub set_edges: Vec<EdgeId>,
}

/// Set-packing network over elements `1..=m`: debtor `u` owes `big_m` to
/// every set bank `S_i`, `S_i` owes 1 to each of its elements and
/// `big_m - |S_i|` to `w`, every element owes 1 to `w`, and `w` holds
/// `l * big_m`. Without `with_debtor` the bank `u` and its edges are left
/// out, which is the multi-donation variant.
pub fn gen_set_packing_gadget(
    m: usize,
    sets: &[Vec<usize>],
    l: usize,
    big_m: &Rational,
    delta: Rational,
    with_debtor: bool,
) -> Result<(FinancialNetwork, GadgetLayout)> {
    let mut banks = Vec::new();
    let mut add = |name: String, external: Rational| {
        banks.push(Bank { name, external });
        BankId(banks.len() - 1)
    };
    let debtor = with_debtor.then(|| add("u".into(), Rational::zero()));
    let set_ids: Vec<BankId> = (1..=sets.len())
        .map(|i| add(format!("S{i}"), Rational::zero()))
        .collect();
    let element_ids: Vec<BankId> = (1..=m)
        .map(|j| add(format!("x{j}"), Rational::zero()))
        .collect();
    let buyer = add("w".into(), big_m * int(l as i64));
    let mut edges = Vec::new();
    let mut set_edges = Vec::new();
    if let Some(u) = debtor {
        for s in &set_ids {
            set_edges.push(EdgeId(edges.len()));
            edges.push(Edge {
                debtor: u,
                creditor: *s,
                liability: big_m.clone(),
            });
        }
    }
    for (set, s) in sets.iter().zip(&set_ids) {
        let members: BTreeSet<usize> = set.iter().copied().collect();
        if members.iter().any(|j| *j == 0 || *j > m) {
            return Err(Error::InvalidNetwork(format!(
                "set {set:?} has an element outside 1..={m}"
            )));
        }
        let rest = big_m - int(members.len() as i64);
        if !rest.is_positive() {
            return Err(Error::InvalidNetwork("M must exceed every set size".into()));
        }
        for j in &members {
            edges.push(Edge {
                debtor: *s,
                creditor: element_ids[j - 1],
                liability: Rational::one(),
            });
        }
        edges.push(Edge {
            debtor: *s,
            creditor: buyer,
            liability: rest,
        });
    }
    for x in &element_ids {
        edges.push(Edge {
            debtor: *x,
            creditor: buyer,
            liability: Rational::one(),
        });
    }
    let net = FinancialNetwork::new(banks, edges, delta)?;
    Ok((
        net,
        GadgetLayout {
            debtor,
            sets: set_ids,
            elements: element_ids,
            buyer,
            set_edges,
        },
    ))
}

/// Whether `l` pairwise disjoint sets exist among `sets`.
pub fn has_set_packing(sets: &[Vec<usize>], l: usize) -> bool {
    fn search(sets: &[Vec<usize>], start: usize, need: usize, used: &mut BTreeSet<usize>) -> bool {
        if need == 0 {
            return true;
        }
        for i in start..sets.len() {
            if sets[i].iter().all(|x| !used.contains(x)) {
                let added: Vec<usize> = sets[i]
                    .iter()
                    .copied()
                    .filter(|x| used.insert(*x))
                    .collect();
                let found = search(sets, i + 1, need - 1, used);
                for x in added {
                    used.remove(&x);
                }
                if found {
                    return true;
                }
            }
        }
        false
    }
    search(sets, 0, l, &mut BTreeSet::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::ratio;

    #[test]
    fn f2_excess_plan() {
        let net = fixtures::f2();
        let sol = optimal_multi_out_excess(&net, BankId(0), BankId(3))
            .unwrap()
            .into_found()
            .unwrap();
        assert_eq!(sol.excess, Some(vec![int(2), int(0)]));
        assert_eq!(sol.objective, int(7));
        assert_eq!(sol.post_state.assets, vec![int(2), int(3), int(4), int(6)]);
        let TradeSpec::MultiOut { legs, .. } = &sol.trade else {
            panic!()
        };
        assert_eq!(legs[0].beta, ratio(2, 3));
        assert_eq!(legs[0].ret, ratio(8, 3));
        assert!(legs[0].ret >= &sol.post_state.recovery[0] * &legs[0].beta * int(4));
    }

    #[test]
    fn excess_refusals() {
        let net = fixtures::f2().with_delta(ratio(1, 2));
        assert_eq!(
            optimal_multi_out_excess(&net, BankId(0), BankId(3)),
            Err(Error::DefaultCostUnsupported)
        );
        let broke = fixtures::f2().with_external(BankId(3), int(0));
        assert_eq!(
            optimal_multi_out_excess(&broke, BankId(0), BankId(3)).unwrap(),
            Outcome::NotFound(NotFound::NoParetoPositiveTrade)
        );
        let paid = fixtures::f2().with_external(BankId(0), int(8));
        assert_eq!(
            optimal_multi_out_excess(&paid, BankId(0), BankId(3)),
            Err(Error::DebtorFullyPaid)
        );
    }

    #[test]
    fn no_path_back_means_no_trade() {
        let net = FinancialNetwork::builder()
            .bank("u", int(1))
            .bank("v", int(0))
            .bank("w", int(5))
            .edge("u", "v", int(4))
            .build()
            .unwrap();
        assert_eq!(
            optimal_multi_out_excess(&net, BankId(0), BankId(2)).unwrap(),
            Outcome::NotFound(NotFound::NoParetoPositiveTrade)
        );
    }

    #[test]
    fn fig1_donation_to_creditor() {
        let net = fixtures::fig1();
        let sol = optimal_multi_donation(&net, BankId(2), &[BankId(1)], &[BankId(1)])
            .unwrap()
            .into_found()
            .unwrap();
        assert_eq!(sol.trade.total_return(&net), int(2));
        assert_eq!(sol.post_state.assets[1], int(4));
        assert_eq!(sol.post_state.assets[2], int(5));
    }

    #[test]
    fn dead_end_donation_is_refused() {
        let net = FinancialNetwork::builder()
            .bank("v", int(0))
            .bank("w", int(3))
            .build()
            .unwrap();
        assert_eq!(
            optimal_multi_donation(&net, BankId(1), &[BankId(0)], &[BankId(0), BankId(1)]).unwrap(),
            Outcome::NotFound(NotFound::NoParetoPositiveDonation)
        );
    }

    #[test]
    fn f3_unbounded_returns() {
        let net = fixtures::f3();
        let options = UnboundedOptions {
            buyer_pareto: true,
            objective: AssetWeights::sum_of(&[BankId(1), BankId(2)]),
            ..Default::default()
        };
        let sol = optimal_unbounded_returns(&net, &[EdgeId(0)], BankId(2), &options)
            .unwrap()
            .into_found()
            .unwrap();
        assert_eq!(sol.trade.total_return(&net), int(1));
        assert_eq!(sol.post_state.assets[1], int(1));
        assert_eq!(sol.buyer_gross, Some(int(1)));
        assert_eq!(sol.objective, int(2));
    }

    #[test]
    fn empty_claim_set_is_identity() {
        let net = fixtures::fig1();
        let options = UnboundedOptions {
            objective: AssetWeights::sum_of(&[BankId(1)]),
            ..Default::default()
        };
        let sol = optimal_unbounded_returns(&net, &[], BankId(2), &options)
            .unwrap()
            .into_found()
            .unwrap();
        assert_eq!(sol.objective, int(2));
        assert_eq!(sol.post_state, sol.pre_state);
    }

    #[test]
    fn gadget_shape_and_packing() {
        let sets = vec![vec![1, 2], vec![2, 3]];
        let (net, layout) =
            gen_set_packing_gadget(3, &sets, 1, &int(10), ratio(1, 2), true).unwrap();
        assert_eq!(net.num_banks(), 7);
        assert_eq!(net.external(layout.buyer), &int(10));
        assert_eq!(net.total_liability(layout.sets[0]), &int(10));
        assert_eq!(net.edges().len(), 2 + 4 + 2 + 3);
        assert!(has_set_packing(&sets, 1));
        assert!(!has_set_packing(&sets, 2));
        assert!(has_set_packing(&[vec![1], vec![2]], 2));
    }

    #[test]
    fn gadget_donation_reaches_one_set() {
        let sets = vec![vec![1, 2], vec![2, 3]];
        let (net, layout) = gen_set_packing_gadget(3, &sets, 1, &int(10), int(1), false).unwrap();
        let all: Vec<BankId> = net.bank_ids().collect();
        let sol = optimal_multi_donation(&net, layout.buyer, &layout.sets, &all)
            .unwrap()
            .into_found()
            .unwrap();
        assert_eq!(sol.objective, int(22));
        assert_eq!(sol.post_state.assets[layout.buyer.0], int(10));
    }
}
