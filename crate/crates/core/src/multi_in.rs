//! Multi-trades of incoming edges of one creditor.
//!
//! Within a hierarchy part the debtors' recovery rates are affine in the
//! creditor's assets, so the part splits into cells with a fixed order of
//! recovery rates. An optimal trade fully trades a prefix of that order
//! and at most one further edge fractionally; each (part, cell, pivot)
//! combination is solved with the single-trade programs.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::clearing::clearing_state;
use crate::error::{Error, Result};
use crate::hierarchy::{build_hierarchy, DefaultHierarchy};
use crate::network::{BankId, EdgeId, FinancialNetwork};
use crate::rational::{int, Rational};
use crate::single::{buyer_regimes, select_best, InProgram, Pivot, TradeCase, ALL_CASES};
use crate::solution::{NotFound, Outcome};
use crate::trade::{post_trade_state, InLeg, TradeSpec};

/// `r_u(x) = slope * x + offset` for the debtor of `edge` while the
/// creditor's out-node holds `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryLine {
    pub edge: EdgeId,
    pub slope: Rational,
    pub offset: Rational,
}

impl RecoveryLine {
    pub fn at(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.offset
    }
}

/// Sub-interval of a part with a constant order of recovery rates.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingCell {
    pub part: usize,
    pub lower: Rational,
    /// `None` stands for infinity.
    pub upper: Option<Rational>,
    /// Edges by non-decreasing recovery rate, ties by edge index.
    pub order: Vec<EdgeId>,
}

/// Incoming edges of `v` that `w` may buy.
pub fn tradable_edges(net: &FinancialNetwork, v: BankId, w: BankId) -> Vec<EdgeId> {
    net.incoming(v)
        .iter()
        .copied()
        .filter(|e| net.edge(*e).debtor != w)
        .collect()
}

fn sample_points(lower: &Rational, upper: &Option<Rational>) -> [Rational; 3] {
    match upper {
        Some(u) => {
            let width = u - lower;
            [
                lower.clone(),
                lower + &width / int(2),
                lower + &width * Rational::new(3.into(), 4.into()),
            ]
        }
        None => [lower.clone(), lower + int(1), lower + int(2)],
    }
}

/// Recovery lines of the debtors of `edges` over part `j`, fitted through
/// two clearing states and checked at a third point.
pub fn recovery_lines(
    hierarchy: &DefaultHierarchy,
    edges: &[EdgeId],
    j: usize,
) -> Result<Vec<RecoveryLine>> {
    let part = &hierarchy.parts[j];
    let xs = sample_points(&part.lower, &part.upper);
    let states: Vec<_> = xs
        .iter()
        .map(|x| clearing_state(&hierarchy.split_at(x)))
        .collect();
    let base = hierarchy.split.base();
    edges
        .iter()
        .map(|e| {
            let node = hierarchy.split.out_node(base.edge(*e).debtor);
            let r: Vec<&Rational> = states.iter().map(|s| &s.recovery[node.0]).collect();
            let slope = (r[1] - r[0]) / (&xs[1] - &xs[0]);
            let offset = r[0] - &slope * &xs[0];
            let line = RecoveryLine {
                edge: *e,
                slope,
                offset,
            };
            if line.at(&xs[2]) != *r[2] {
                return Err(Error::NonAffineRecovery { part: j, edge: e.0 });
            }
            Ok(line)
        })
        .collect()
}

fn sorted_at(lines: &[RecoveryLine], x: &Rational) -> Vec<EdgeId> {
    let mut keyed: Vec<(Rational, EdgeId)> = lines.iter().map(|l| (l.at(x), l.edge)).collect();
    keyed.sort();
    keyed.into_iter().map(|(_, e)| e).collect()
}

/// Cells of `[lower, upper)` cut at every crossing of two lines.
pub fn ordering_cells(
    lines: &[RecoveryLine],
    part: usize,
    lower: &Rational,
    upper: &Option<Rational>,
) -> Vec<OrderingCell> {
    let mut cuts = BTreeSet::new();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if a.slope == b.slope {
                continue;
            }
            let x = (&b.offset - &a.offset) / (&a.slope - &b.slope);
            if x > *lower && upper.as_ref().is_none_or(|u| x < *u) {
                cuts.insert(x);
            }
        }
    }
    let mut bounds: Vec<Rational> = vec![lower.clone()];
    bounds.extend(cuts);
    let mut cells = Vec::with_capacity(bounds.len());
    for (i, lo) in bounds.iter().enumerate() {
        let hi = bounds.get(i + 1).cloned().or_else(|| upper.clone());
        let probe = match &hi {
            Some(h) => (lo + h) / int(2),
            None => lo + int(1),
        };
        cells.push(OrderingCell {
            part,
            lower: lo.clone(),
            upper: hi,
            order: sorted_at(lines, &probe),
        });
    }
    cells
}

fn permutations(items: &[EdgeId]) -> Vec<Vec<EdgeId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Orders to try for a part: the ordering cells, or every permutation
/// over the whole part when the recovery rates are not affine there.
fn part_orders(h: &DefaultHierarchy, edges: &[EdgeId], j: usize) -> Result<Vec<OrderingCell>> {
    let part = &h.parts[j];
    match recovery_lines(h, edges, j) {
        Ok(lines) => Ok(ordering_cells(&lines, j, &part.lower, &part.upper)),
        Err(Error::NonAffineRecovery { .. }) if edges.len() <= 5 => Ok(permutations(edges)
            .into_iter()
            .map(|order| OrderingCell {
                part: j,
                lower: part.lower.clone(),
                upper: part.upper.clone(),
                order,
            })
            .collect()),
        Err(e) => Err(e),
    }
}

/// Multi-trade of incoming edges of `v` to `w` whose post-trade assets
/// weakly dominate every creditor-positive multi-trade (or every trade
/// leaving the buyer at least `omega`).
pub fn optimal_multi_in(
    net: &FinancialNetwork,
    v: BankId,
    w: BankId,
    omega: Option<&Rational>,
) -> Result<Outcome> {
    net.check_bank(v)?;
    net.check_bank(w)?;
    if v == w {
        return Err(Error::InvalidTrade("creditor and buyer coincide".into()));
    }
    let edges = tradable_edges(net, v, w);
    if edges.is_empty() {
        return Ok(Outcome::NotFound(NotFound::NoBenchmarkTrade));
    }
    let pre = clearing_state(net);
    let omega = omega
        .cloned()
        .unwrap_or_else(|| pre.gross_assets[w.0].clone());
    let h = build_hierarchy(net, v, w, &omega)?;
    let mut candidates = Vec::new();
    for j in 0..h.parts.len() {
        if h.parts[j].degenerate {
            continue;
        }
        for cell in part_orders(&h, &edges, j)? {
            for pivot in 0..cell.order.len() {
                let cases: &[TradeCase] = if pivot + 1 == cell.order.len() {
                    &ALL_CASES
                } else {
                    &[TradeCase::FullBudgetRZero, TradeCase::FullBudgetRPos]
                };
                for regime in buyer_regimes(net, w, &omega) {
                    for case in cases {
                        let program = InProgram {
                            net,
                            hierarchy: &h,
                            part: j,
                            regime,
                            omega: &omega,
                            window: Some((cell.lower.clone(), cell.upper.clone())),
                            prefix: &cell.order[..pivot],
                            pivot: Pivot::Edge(cell.order[pivot], *case),
                        };
                        if let Some(s) = program.solve(true) {
                            candidates.push(s.trade);
                        }
                    }
                }
            }
        }
    }
    Ok(select_best(net, &pre, v, w, &omega, candidates))
}

/// Equivalent multi-in trade that fully trades the legs with the lowest
/// post-trade recovery rates, at most one leg fractionally, with a common
/// haircut. Incoming payments of creditor and buyer and the total return
/// are unchanged.
pub fn greedy_restructure(net: &FinancialNetwork, trade: &TradeSpec) -> Result<TradeSpec> {
    let TradeSpec::MultiIn {
        creditor,
        buyer,
        legs,
    } = trade
    else {
        return Err(Error::InvalidTrade(
            "greedy restructuring needs a multi-in trade".into(),
        ));
    };
    let post = post_trade_state(net, trade)?;
    let rate = |l: &InLeg| post.recovery[net.edge(l.edge).debtor.0].clone();
    let rho: Rational = legs
        .iter()
        .map(|l| &l.alpha * &l.beta * &net.edge(l.edge).liability)
        .sum();
    let gamma: Rational = legs
        .iter()
        .map(|l| rate(l) * &l.beta * &net.edge(l.edge).liability)
        .sum();
    let mut order: Vec<usize> = (0..legs.len()).collect();
    order.sort_by(|a, b| (rate(&legs[*a]), legs[*a].edge).cmp(&(rate(&legs[*b]), legs[*b].edge)));
    let mut betas = vec![Rational::zero(); legs.len()];
    let mut remaining = gamma.clone();
    let active = !rho.is_zero() || !gamma.is_zero();
    for i in order {
        let r = rate(&legs[i]);
        let liability = &net.edge(legs[i].edge).liability;
        if r.is_zero() {
            if active {
                betas[i] = Rational::one();
            }
            continue;
        }
        if remaining.is_zero() {
            continue;
        }
        let full = &r * liability;
        if remaining >= full {
            betas[i] = Rational::one();
            remaining -= full;
        } else {
            betas[i] = &remaining / full;
            remaining = Rational::zero();
        }
    }
    let traded: Rational = legs
        .iter()
        .zip(&betas)
        .map(|(l, b)| b * &net.edge(l.edge).liability)
        .sum();
    let alpha = if traded.is_zero() {
        Rational::zero()
    } else {
        rho / traded
    };
    Ok(TradeSpec::MultiIn {
        creditor: *creditor,
        buyer: *buyer,
        legs: legs
            .iter()
            .zip(betas)
            .map(|(l, beta)| InLeg {
                edge: l.edge,
                beta,
                alpha: alpha.clone(),
            })
            .collect(),
    })
}
