//! Independent brute-force checks: floating-point fixed-point iteration,
//! grid search over trade parameters and seeded random networks.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clearing::{clearing_state, ClearingState};
use crate::error::{Error, Result};
use crate::network::{BankId, EdgeId, FinancialNetwork};
use crate::rational::{int, to_f64, Rational};
use crate::trade::{apply_trade, InLeg, TradeSpec, Transfer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Start with every bank paying in full.
    FromAbove,
    /// Start with no payments.
    FromBelow,
}

/// Floating-point approximation of a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxState {
    pub payments: Vec<f64>,
    pub gross_assets: Vec<f64>,
    pub assets: Vec<f64>,
    pub recovery: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchConfig {
    pub granularity: Rational,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for GridSearchConfig {
    fn default() -> Self {
        Self {
            granularity: Rational::new(1.into(), 64.into()),
            tolerance: 1e-9,
            max_iterations: 100_000,
        }
    }
}

impl GridSearchConfig {
    pub fn with_granularity(granularity: Rational) -> Self {
        Self {
            granularity,
            ..Self::default()
        }
    }
}

/// Network lowered to floats for repeated iteration.
#[derive(Debug, Clone)]
struct FloatNet {
    external: Vec<f64>,
    edges: Vec<(usize, usize, f64)>,
    liabilities: Vec<f64>,
    delta: f64,
}

impl FloatNet {
    fn new(net: &FinancialNetwork) -> Self {
        let mut liabilities = vec![0.0; net.num_banks()];
        let edges = net
            .edges()
            .iter()
            .map(|e| {
                let l = to_f64(&e.liability);
                liabilities[e.debtor.0] += l;
                (e.debtor.0, e.creditor.0, l)
            })
            .collect();
        Self {
            external: net.banks().iter().map(|b| to_f64(&b.external)).collect(),
            edges,
            liabilities,
            delta: to_f64(net.delta()),
        }
    }

    fn gross(&self, recovery: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.external);
        for &(d, c, l) in &self.edges {
            out[c] += recovery[d] * l;
        }
    }

    fn recovery_of(&self, b: usize, gross: f64) -> f64 {
        let l = self.liabilities[b];
        if l == 0.0 || gross >= l * (1.0 - 1e-12) {
            1.0
        } else {
            (self.delta * gross / l).clamp(0.0, 1.0)
        }
    }

    fn iterate(
        &self,
        direction: Direction,
        tolerance: f64,
        max_iterations: usize,
    ) -> Result<ApproxState> {
        let n = self.external.len();
        let mut recovery = vec![
            match direction {
                Direction::FromAbove => 1.0,
                Direction::FromBelow => 0.0,
            };
            n
        ];
        let mut gross = vec![0.0; n];
        for iteration in 1..=max_iterations {
            self.gross(&recovery, &mut gross);
            let mut change: f64 = 0.0;
            for b in 0..n {
                let next = self.recovery_of(b, gross[b]);
                change = change.max((next - recovery[b]).abs() * self.liabilities[b]);
                recovery[b] = next;
            }
            if change < tolerance {
                self.gross(&recovery, &mut gross);
                let assets = (0..n)
                    .map(|b| {
                        let l = self.liabilities[b];
                        if l == 0.0 || gross[b] >= l * (1.0 - 1e-12) {
                            gross[b]
                        } else {
                            self.delta * gross[b]
                        }
                    })
                    .collect();
                return Ok(ApproxState {
                    payments: self
                        .edges
                        .iter()
                        .map(|&(d, _, l)| recovery[d] * l)
                        .collect(),
                    gross_assets: gross,
                    assets,
                    recovery,
                    iterations: iteration,
                });
            }
        }
        Err(Error::NonConvergence(max_iterations))
    }
}

/// Iterates the payment map from the top or bottom of the lattice until
/// payments move by less than the tolerance.
pub fn picard_clearing(
    net: &FinancialNetwork,
    direction: Direction,
    config: &GridSearchConfig,
) -> Result<ApproxState> {
    FloatNet::new(net).iterate(direction, config.tolerance, config.max_iterations)
}

/// Parameterized family of trades to enumerate.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    /// `beta` and `alpha` of one incoming edge of the creditor.
    SingleTrade { edge: EdgeId, buyer: BankId },
    /// Per-edge `beta` with a common haircut `alpha`.
    MultiIn {
        creditor: BankId,
        buyer: BankId,
        edges: Vec<EdgeId>,
    },
    /// Donation amounts `rho in [0, a^x_w]` from the buyer to one bank.
    Donation { donor: BankId, recipient: BankId },
    /// Excess `eta_i` per outgoing edge of the debtor, evaluated in the
    /// donation view; steps are absolute amounts.
    ExcessReturns { debtor: BankId, buyer: BankId },
    /// Complete trades of `claims` with a grid of per-creditor returns;
    /// steps are absolute amounts.
    ClaimSetReturns { buyer: BankId, claims: Vec<EdgeId> },
    /// An explicit list of trades.
    Explicit(Vec<TradeSpec>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    /// `a'_v > a_v` and `a'_w = a_w`.
    CreditorPositive {
        creditor: BankId,
        buyer: BankId,
    },
    /// `a'_v > a_v` and `a'_w >= omega`.
    CreditorImproved {
        creditor: BankId,
        buyer: BankId,
        omega: Rational,
    },
    /// Both strictly better.
    Positive {
        creditor: BankId,
        buyer: BankId,
    },
    /// Nobody worse off, some listed bank strictly better.
    ParetoPositive {
        creditors: Vec<BankId>,
    },
    Any,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    Assets(BankId),
    TotalAssets(Vec<BankId>),
}

impl Objective {
    fn eval_f64(&self, assets: &[f64]) -> f64 {
        match self {
            Objective::Assets(b) => assets[b.0],
            Objective::TotalAssets(bs) => bs.iter().map(|b| assets[b.0]).sum(),
        }
    }

    pub fn eval(&self, assets: &[Rational]) -> Rational {
        match self {
            Objective::Assets(b) => assets[b.0].clone(),
            Objective::TotalAssets(bs) => bs.iter().map(|b| &assets[b.0]).sum(),
        }
    }
}

/// One enumerated trade with its approximate post-trade state.
#[derive(Debug, Clone)]
pub struct GridPoint {
    pub trade: TradeSpec,
    pub state: ApproxState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridBest {
    pub trade: TradeSpec,
    /// Exact post-trade clearing state.
    pub state: ClearingState,
    pub objective: Rational,
}

fn steps(upper: &Rational, step: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut x = Rational::zero();
    while x <= *upper {
        out.push(x.clone());
        x += step;
    }
    if out.last() != Some(upper) {
        out.push(upper.clone());
    }
    out
}

/// Grid values of one trade parameter.
struct Axis {
    exact: Vec<Rational>,
    float: Vec<f64>,
}

impl Axis {
    fn new(upper: &Rational, step: &Rational) -> Self {
        let exact = steps(upper, step);
        let float = exact.iter().map(to_f64).collect();
        Self { exact, float }
    }
}

const FEASIBILITY_SLACK: f64 = 1e-12;

fn creditor_caps(net: &FinancialNetwork, claims: &[EdgeId]) -> Vec<(BankId, Rational)> {
    let mut creditors: Vec<(BankId, Rational)> = Vec::new();
    for c in claims {
        let e = net.edge(*c);
        match creditors.iter_mut().find(|(b, _)| *b == e.creditor) {
            Some((_, cap)) => *cap += &e.liability,
            None => creditors.push((e.creditor, e.liability.clone())),
        }
    }
    creditors
}

fn scenario_axes(net: &FinancialNetwork, scenario: &Scenario, step: &Rational) -> Vec<Axis> {
    let one = Rational::one();
    match scenario {
        Scenario::SingleTrade { .. } => vec![Axis::new(&one, step), Axis::new(&one, step)],
        Scenario::MultiIn { edges, .. } => {
            (0..=edges.len()).map(|_| Axis::new(&one, step)).collect()
        }
        Scenario::Donation { donor, .. } => vec![Axis::new(net.external(*donor), step)],
        Scenario::ExcessReturns { debtor, buyer } => net
            .outgoing(*debtor)
            .iter()
            .map(|e| {
                Axis::new(
                    &crate::rational::min(&net.edge(*e).liability, net.external(*buyer)),
                    step,
                )
            })
            .collect(),
        Scenario::ClaimSetReturns { claims, .. } => creditor_caps(net, claims)
            .iter()
            .map(|(_, cap)| Axis::new(cap, step))
            .collect(),
        Scenario::Explicit(_) => Vec::new(),
    }
}

fn build_trade(net: &FinancialNetwork, scenario: &Scenario, x: &[Rational]) -> TradeSpec {
    match scenario {
        Scenario::SingleTrade { edge, buyer } => TradeSpec::Single {
            edge: *edge,
            buyer: *buyer,
            beta: x[0].clone(),
            alpha: x[1].clone(),
        },
        Scenario::MultiIn {
            creditor,
            buyer,
            edges,
        } => {
            let alpha = &x[edges.len()];
            TradeSpec::MultiIn {
                creditor: *creditor,
                buyer: *buyer,
                legs: edges
                    .iter()
                    .zip(x)
                    .map(|(e, b)| InLeg {
                        edge: *e,
                        beta: b.clone(),
                        alpha: alpha.clone(),
                    })
                    .collect(),
            }
        }
        Scenario::Donation { donor, recipient } => TradeSpec::Donation {
            donor: *donor,
            recipient: *recipient,
            amount: x[0].clone(),
        },
        Scenario::ExcessReturns { debtor, buyer } => TradeSpec::MultiDonation {
            donor: *buyer,
            transfers: net
                .outgoing(*debtor)
                .iter()
                .zip(x)
                .map(|(e, amount)| Transfer {
                    recipient: net.edge(*e).creditor,
                    amount: amount.clone(),
                })
                .collect(),
        },
        Scenario::ClaimSetReturns { buyer, claims } => TradeSpec::ClaimSet {
            buyer: *buyer,
            claims: claims.clone(),
            returns: creditor_caps(net, claims)
                .iter()
                .zip(x)
                .map(|((b, _), amount)| Transfer {
                    recipient: *b,
                    amount: amount.clone(),
                })
                .collect(),
        },
        Scenario::Explicit(_) => unreachable!("explicit trades have no axes"),
    }
}

impl FloatNet {
    fn trade_edge(&mut self, edge: EdgeId, buyer: usize, beta: f64) {
        let (d, _, l) = self.edges[edge.0];
        self.edges[edge.0].2 = l * (1.0 - beta);
        if beta > 0.0 {
            self.edges.push((d, buyer, l * beta));
        }
    }

    fn transfer(&mut self, from: usize, to: usize, amount: f64) {
        self.external[from] -= amount;
        self.external[to] += amount;
    }
}

/// Post-trade float network for grid values `x`, or `None` when the
/// trade breaks its budget or fraction limits.
fn float_post(
    base: &FloatNet,
    net: &FinancialNetwork,
    scenario: &Scenario,
    x: &[f64],
    config: &GridSearchConfig,
) -> Result<Option<(FloatNet, Option<ApproxState>)>> {
    let mut post = base.clone();
    let budget = |b: BankId| base.external[b.0] + FEASIBILITY_SLACK;
    match scenario {
        Scenario::SingleTrade { edge, buyer } => {
            let e = net.edge(*edge);
            let rho = x[0] * x[1] * base.edges[edge.0].2;
            if rho > budget(*buyer) {
                return Ok(None);
            }
            post.trade_edge(*edge, buyer.0, x[0]);
            post.transfer(buyer.0, e.creditor.0, rho);
        }
        Scenario::MultiIn {
            creditor,
            buyer,
            edges,
        } => {
            let alpha = x[edges.len()];
            let traded: f64 = edges
                .iter()
                .zip(x)
                .map(|(e, b)| b * base.edges[e.0].2)
                .sum();
            let rho = alpha * traded;
            if rho > budget(*buyer) {
                return Ok(None);
            }
            for (e, b) in edges.iter().zip(x) {
                post.trade_edge(*e, buyer.0, *b);
            }
            post.transfer(buyer.0, creditor.0, rho);
        }
        Scenario::Donation { donor, recipient } => post.transfer(donor.0, recipient.0, x[0]),
        Scenario::ExcessReturns { debtor, buyer } => {
            let out = net.outgoing(*debtor);
            for (e, eta) in out.iter().zip(x) {
                post.transfer(buyer.0, net.edge(*e).creditor.0, *eta);
            }
            let state = post.iterate(
                Direction::FromAbove,
                config.tolerance,
                config.max_iterations,
            )?;
            let slack = 1.0 - state.recovery[debtor.0];
            let mut total = 0.0;
            for (e, eta) in out.iter().zip(x) {
                if *eta == 0.0 {
                    continue;
                }
                if slack <= FEASIBILITY_SLACK {
                    return Ok(None);
                }
                let beta = eta / (slack * base.edges[e.0].2);
                if beta > 1.0 + 1e-9 {
                    return Ok(None);
                }
                total += beta * base.edges[e.0].2;
            }
            if total > budget(*buyer) + 1e-9 {
                return Ok(None);
            }
            return Ok(Some((post, Some(state))));
        }
        Scenario::ClaimSetReturns { buyer, claims } => {
            if x.iter().sum::<f64>() > budget(*buyer) {
                return Ok(None);
            }
            for c in claims {
                post.trade_edge(*c, buyer.0, 1.0);
            }
            for ((b, _), rho) in creditor_caps(net, claims).iter().zip(x) {
                post.transfer(buyer.0, b.0, *rho);
            }
        }
        Scenario::Explicit(_) => unreachable!("explicit trades have no axes"),
    }
    Ok(Some((post, None)))
}

/// Every trade of the scenario's grid that passes the budget and
/// fraction checks, with its approximate post-trade state. Trades are
/// applied in floating point; use [`realize`] for the exact network.
pub fn enumerate_grid(
    net: &FinancialNetwork,
    scenario: &Scenario,
    config: &GridSearchConfig,
) -> Result<Vec<GridPoint>> {
    enumerate_grid_filtered(net, scenario, config, |_| true)
}

/// Like [`enumerate_grid`], keeping only points whose approximate state
/// passes `keep`; exact trades are built for kept points only.
pub fn enumerate_grid_filtered(
    net: &FinancialNetwork,
    scenario: &Scenario,
    config: &GridSearchConfig,
    mut keep: impl FnMut(&ApproxState) -> bool,
) -> Result<Vec<GridPoint>> {
    if let Scenario::Explicit(trades) = scenario {
        let mut points = Vec::new();
        for trade in trades {
            if let Ok(post) = apply_trade(net, trade) {
                let state = FloatNet::new(&post).iterate(
                    Direction::FromAbove,
                    config.tolerance,
                    config.max_iterations,
                )?;
                if keep(&state) {
                    points.push(GridPoint {
                        trade: trade.clone(),
                        state,
                    });
                }
            }
        }
        return Ok(points);
    }
    let base = FloatNet::new(net);
    let axes = scenario_axes(net, scenario, &config.granularity);
    let mut index = vec![0usize; axes.len()];
    let mut x = vec![0.0; axes.len()];
    let mut points = Vec::new();
    'grid: loop {
        for (k, axis) in axes.iter().enumerate() {
            x[k] = axis.float[index[k]];
        }
        if let Some((post, state)) = float_post(&base, net, scenario, &x, config)? {
            let state = match state {
                Some(s) => s,
                None => post.iterate(
                    Direction::FromAbove,
                    config.tolerance,
                    config.max_iterations,
                )?,
            };
            if keep(&state) {
                let exact: Vec<Rational> = axes
                    .iter()
                    .zip(&index)
                    .map(|(a, i)| a.exact[*i].clone())
                    .collect();
                points.push(GridPoint {
                    trade: build_trade(net, scenario, &exact),
                    state,
                });
            }
        }
        for k in (0..axes.len()).rev() {
            index[k] += 1;
            if index[k] < axes[k].exact.len() {
                continue 'grid;
            }
            index[k] = 0;
        }
        break;
    }
    Ok(points)
}

/// Exact post-trade network for a grid trade. Excess-return profiles are
/// checked against the literal outgoing trade they stand for and dropped
/// when no such trade exists.
pub fn realize(
    net: &FinancialNetwork,
    scenario: &Scenario,
    trade: TradeSpec,
) -> Option<(TradeSpec, FinancialNetwork)> {
    if let Scenario::ExcessReturns { debtor, buyer } = scenario {
        let TradeSpec::MultiDonation { transfers, .. } = &trade else {
            return None;
        };
        let donated = apply_trade(net, &trade).ok()?;
        let r_u = clearing_state(&donated).recovery[debtor.0].clone();
        let slack = Rational::one() - &r_u;
        let mut legs = Vec::new();
        let mut total = Rational::zero();
        for (e, t) in net.outgoing(*debtor).iter().zip(transfers) {
            if t.amount.is_zero() {
                continue;
            }
            if slack.is_zero() {
                return None;
            }
            let beta = &t.amount / (&slack * &net.edge(*e).liability);
            if beta > Rational::one() {
                return None;
            }
            let ret = &beta * &net.edge(*e).liability;
            total += &ret;
            legs.push(crate::trade::OutLeg {
                edge: *e,
                beta,
                ret,
            });
        }
        if total > *net.external(*buyer) {
            return None;
        }
        let literal = TradeSpec::MultiOut {
            debtor: *debtor,
            buyer: *buyer,
            legs,
        };
        apply_trade(net, &literal).ok()?;
        return Some((trade, donated));
    }
    let post = apply_trade(net, &trade).ok()?;
    Some((trade, post))
}

/// Float check of a predicate against the pre-trade state.
pub fn predicate_holds(predicate: &Predicate, pre: &[f64], post: &[f64], tol: f64) -> bool {
    match predicate {
        Predicate::CreditorPositive { creditor, buyer } => {
            post[creditor.0] > pre[creditor.0] + tol && (post[buyer.0] - pre[buyer.0]).abs() <= tol
        }
        Predicate::CreditorImproved {
            creditor,
            buyer,
            omega,
        } => post[creditor.0] > pre[creditor.0] + tol && post[buyer.0] >= to_f64(omega) - tol,
        Predicate::Positive { creditor, buyer } => {
            post[creditor.0] > pre[creditor.0] + tol && post[buyer.0] > pre[buyer.0] + tol
        }
        Predicate::ParetoPositive { creditors } => {
            pre.iter().zip(post).all(|(a, b)| *b >= a - tol)
                && creditors.iter().any(|c| post[c.0] > pre[c.0] + tol)
        }
        Predicate::Any => true,
    }
}

/// Exact check of a predicate on gross assets.
pub fn predicate_holds_exact(predicate: &Predicate, pre: &[Rational], post: &[Rational]) -> bool {
    match predicate {
        Predicate::CreditorPositive { creditor, buyer } => {
            post[creditor.0] > pre[creditor.0] && post[buyer.0] == pre[buyer.0]
        }
        Predicate::CreditorImproved {
            creditor,
            buyer,
            omega,
        } => post[creditor.0] > pre[creditor.0] && post[buyer.0] >= *omega,
        Predicate::Positive { creditor, buyer } => {
            post[creditor.0] > pre[creditor.0] && post[buyer.0] > pre[buyer.0]
        }
        Predicate::ParetoPositive { creditors } => {
            pre.iter().zip(post).all(|(a, b)| b >= a)
                && creditors.iter().any(|c| post[c.0] > pre[c.0])
        }
        Predicate::Any => true,
    }
}

/// Best grid trade satisfying the predicate, by the objective on
/// (gross) assets. Candidates are ranked in floating point and the winner
/// is confirmed in exact arithmetic; `None` when nothing qualifies.
pub fn brute_force_best_trade(
    net: &FinancialNetwork,
    scenario: &Scenario,
    predicate: &Predicate,
    objective: &Objective,
    config: &GridSearchConfig,
) -> Result<Option<GridBest>> {
    let pre = clearing_state(net);
    let pre_f: Vec<f64> = pre.gross_assets.iter().map(to_f64).collect();
    let mut points: Vec<(f64, TradeSpec)> = enumerate_grid_filtered(net, scenario, config, |s| {
        predicate_holds(predicate, &pre_f, &s.gross_assets, config.tolerance)
    })?
    .into_iter()
    .map(|p| (objective.eval_f64(&p.state.gross_assets), p.trade))
    .collect();
    points.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best: Option<GridBest> = None;
    let cutoff = points.first().map(|p| p.0 - 1e-6);
    for (value, trade) in points {
        if cutoff.is_some_and(|c| value < c) && best.is_some() {
            break;
        }
        let Some((_, post_net)) = realize(net, scenario, trade.clone()) else {
            continue;
        };
        let state = clearing_state(&post_net);
        if !predicate_holds_exact(predicate, &pre.gross_assets, &state.gross_assets) {
            continue;
        }
        let exact = objective.eval(&state.gross_assets);
        if best.as_ref().is_none_or(|b| exact > b.objective) {
            best = Some(GridBest {
                trade,
                state,
                objective: exact,
            });
        }
    }
    Ok(best)
}

/// Parameters for [`random_network`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomNetworkSpec {
    pub n: usize,
    /// Probability of each ordered pair carrying an edge.
    pub edge_density: f64,
    pub max_liability: u32,
    pub max_assets: u32,
    pub delta: Rational,
}

/// Deterministic network from `seed`: integer liabilities in
/// `1..=max_liability`, integer external assets in `0..=max_assets`, no
/// self-loops. Banks are named `b0`, `b1`, ...
pub fn random_network(seed: u64, spec: &RandomNetworkSpec) -> FinancialNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut builder = FinancialNetwork::builder().delta(spec.delta.clone());
    for i in 0..spec.n {
        builder = builder.bank(
            &format!("b{i}"),
            int(rng.gen_range(0..=spec.max_assets) as i64),
        );
    }
    for i in 0..spec.n {
        for j in 0..spec.n {
            if i != j && rng.gen_bool(spec.edge_density.clamp(0.0, 1.0)) {
                let l = rng.gen_range(1..=spec.max_liability.max(1)) as i64;
                builder = builder.edge(&format!("b{i}"), &format!("b{j}"), int(l));
            }
        }
    }
    builder.build().expect("generated network is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::network::validate_network;
    use crate::rational::ratio;

    #[test]
    fn fig1_picard_from_above() {
        let s = picard_clearing(
            &fixtures::fig1(),
            Direction::FromAbove,
            &GridSearchConfig::default(),
        )
        .unwrap();
        assert!((s.payments[0] - 2.0).abs() < 1e-9);
        assert!((s.payments[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn acyclic_network_converges_quickly() {
        let s = picard_clearing(
            &fixtures::f2(),
            Direction::FromAbove,
            &GridSearchConfig::default(),
        )
        .unwrap();
        assert!(s.iterations <= 5);
    }

    #[test]
    fn costly_cycle_without_assets_has_two_extreme_fixed_points() {
        let net = FinancialNetwork::builder()
            .bank("u", int(0))
            .bank("v", int(0))
            .edge("u", "v", int(1))
            .edge("v", "u", int(1))
            .delta(ratio(1, 2))
            .build()
            .unwrap();
        let config = GridSearchConfig::default();
        let above = picard_clearing(&net, Direction::FromAbove, &config).unwrap();
        assert!(above.payments.iter().all(|p| (p - 1.0).abs() < 1e-9));
        let below = picard_clearing(&net, Direction::FromBelow, &config).unwrap();
        assert!(below.payments.iter().all(|p| p.abs() < 1e-9));
        assert_eq!(clearing_state(&net).payments, vec![int(1), int(1)]);
    }

    #[test]
    fn fig1_grid_best_single_trade() {
        let net = fixtures::fig1();
        let best = brute_force_best_trade(
            &net,
            &Scenario::SingleTrade {
                edge: EdgeId(0),
                buyer: BankId(2),
            },
            &Predicate::CreditorPositive {
                creditor: BankId(1),
                buyer: BankId(2),
            },
            &Objective::Assets(BankId(1)),
            &GridSearchConfig::default(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(best.objective, ratio(7, 2));
        assert_eq!(
            best.trade,
            TradeSpec::Single {
                edge: EdgeId(0),
                buyer: BankId(2),
                beta: ratio(3, 4),
                alpha: int(1)
            }
        );
        let positive = brute_force_best_trade(
            &net,
            &Scenario::SingleTrade {
                edge: EdgeId(0),
                buyer: BankId(2),
            },
            &Predicate::Positive {
                creditor: BankId(1),
                buyer: BankId(2),
            },
            &Objective::Assets(BankId(1)),
            &GridSearchConfig::default(),
        )
        .unwrap();
        assert!(positive.is_none());
    }

    #[test]
    fn random_networks_are_deterministic_and_valid() {
        let spec = RandomNetworkSpec {
            n: 4,
            edge_density: 0.5,
            max_liability: 5,
            max_assets: 3,
            delta: int(1),
        };
        assert_eq!(random_network(1, &spec), random_network(1, &spec));
        assert!(validate_network(&random_network(1, &spec)).is_valid());
        let empty = random_network(
            9,
            &RandomNetworkSpec {
                n: 2,
                edge_density: 0.0,
                ..spec
            },
        );
        assert_eq!(empty.num_edges(), 0);
    }
}
