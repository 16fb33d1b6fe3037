//! Default hierarchy of the split network `F_s(v, w)`: breakpoints of the
//! out-node assets of `v` and the nested solvent sets between them.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Zero};

use crate::clearing::{clearing_state, clearing_state_forced, solvency_set};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinExpr, LinearProgram, LpOutcome, Relation, Sense};
use crate::network::{BankId, FinancialNetwork};
use crate::rational::Rational;
use crate::split::{build_split, SplitNetwork};

/// One level of the hierarchy: `S^(j)` is the solvent set whenever the
/// out-node of `v` holds assets in `[lower, upper)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyPart {
    pub lower: Rational,
    /// `None` stands for infinity.
    pub upper: Option<Rational>,
    /// Solvent split-network nodes.
    pub solvent: BTreeSet<BankId>,
    /// `lower == upper`; kept for the nesting but skipped by optimizers.
    pub degenerate: bool,
}

impl HierarchyPart {
    pub fn contains(&self, x: &Rational) -> bool {
        *x >= self.lower && self.upper.as_ref().is_none_or(|u| x < u)
    }

    pub fn is_top(&self) -> bool {
        self.upper.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct DefaultHierarchy {
    pub creditor: BankId,
    pub buyer: BankId,
    /// Fixed external assets of the buyer's out-node.
    pub buyer_assets: Rational,
    /// Pre-trade (gross) assets of the creditor; the lowest breakpoint.
    pub creditor_assets: Rational,
    pub split: SplitNetwork,
    pub parts: Vec<HierarchyPart>,
}

impl DefaultHierarchy {
    /// `a^(0) = inf, a^(1), ..., a^(l)`; `None` is infinity.
    pub fn breakpoints(&self) -> Vec<Option<Rational>> {
        let mut out: Vec<Option<Rational>> = self.parts.iter().map(|p| p.upper.clone()).collect();
        if let Some(last) = self.parts.last() {
            out.push(Some(last.lower.clone()));
        }
        out
    }

    pub fn solvent_sets(&self) -> Vec<&BTreeSet<BankId>> {
        self.parts.iter().map(|p| &p.solvent).collect()
    }

    /// Banks of the base network other than creditor and buyer that are
    /// solvent in part `j`.
    pub fn solvent_base_banks(&self, j: usize) -> BTreeSet<BankId> {
        let base = self.split.base();
        base.bank_ids()
            .filter(|b| *b != self.creditor && *b != self.buyer)
            .filter(|b| self.parts[j].solvent.contains(&self.split.in_node(*b)))
            .collect()
    }

    /// Part whose interval contains `x`.
    pub fn part_of(&self, x: &Rational) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(x))
    }

    /// Split network with the creditor's out-node at `x`.
    pub fn split_at(&self, x: &Rational) -> FinancialNetwork {
        self.split.with_out_assets(&[(self.creditor, x.clone())])
    }

    /// Solvent split nodes at creditor out-node assets `x`.
    pub fn solvent_at(&self, x: &Rational) -> BTreeSet<BankId> {
        let net = self.split_at(x);
        solvency_set(&clearing_state(&net), &net)
    }
}

/// Solvent set below `breakpoint`, given the set `prev_solvent` above it.
///
/// Clears with the current default set forced, then searches from the
/// creditor's out-node through banks with `a_b <= L_b`, collecting banks
/// exactly at their frontier. Both the strictly insolvent and the critical
/// banks join the default set; repeat until it is stable.
pub fn next_default_set(
    split: &SplitNetwork,
    v: BankId,
    breakpoint: &Rational,
    prev_solvent: &BTreeSet<BankId>,
) -> BTreeSet<BankId> {
    let net = split.with_out_assets(&[(v, breakpoint.clone())]);
    let start = split.out_node(v);
    let mut defaulted: BTreeSet<BankId> = net
        .bank_ids()
        .filter(|b| !prev_solvent.contains(b))
        .collect();
    for _ in 0..=net.num_banks() {
        let state = clearing_state_forced(&net, &defaulted);
        let gross = &state.gross_assets;
        let liable = |b: BankId| !net.total_liability(b).is_zero();
        let mut critical: BTreeSet<BankId> = net
            .bank_ids()
            .filter(|b| liable(*b) && gross[b.0] < *net.total_liability(*b))
            .collect();
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            if liable(t) && gross[t.0] == *net.total_liability(t) {
                critical.insert(t);
            }
            for e in net.outgoing(t) {
                let c = net.edge(*e).creditor;
                if liable(c) && gross[c.0] <= *net.total_liability(c) && seen.insert(c) {
                    queue.push_back(c);
                }
            }
        }
        let before = defaulted.len();
        defaulted.extend(critical);
        if defaulted.len() == before {
            break;
        }
    }
    net.bank_ids().filter(|b| !defaulted.contains(b)).collect()
}

/// Smallest external assets of the creditor's out-node that admit a fixed
/// point with exactly the banks in `solvent` solvent.
pub fn min_breakpoint(
    split: &SplitNetwork,
    v: BankId,
    solvent: &BTreeSet<BankId>,
) -> Result<Rational> {
    let net = split.network();
    let source = split.out_node(v);
    let delta = net.delta();
    let mut lp = LinearProgram::new(Sense::Minimize);
    let x = lp.add_var("x", Some(Rational::zero()), None);
    let recovery: Vec<LinExpr> = net
        .bank_ids()
        .map(|b| {
            if solvent.contains(&b) || net.total_liability(b).is_zero() {
                LinExpr::constant(Rational::one())
            } else {
                LinExpr::var(lp.add_unit_var(format!("r_{}", net.name(b))))
            }
        })
        .collect();
    for b in net.bank_ids() {
        let mut assets = if b == source {
            LinExpr::var(x)
        } else {
            LinExpr::constant(net.external(b).clone())
        };
        for e in net.incoming(b) {
            let edge = net.edge(*e);
            assets.add_scaled(&recovery[edge.debtor.0], &edge.liability);
        }
        let liability = net.total_liability(b);
        if !liability.is_zero() {
            if solvent.contains(&b) {
                lp.constrain(
                    assets.clone(),
                    Relation::Ge,
                    LinExpr::constant(liability.clone()),
                );
            } else {
                lp.constrain(
                    assets.clone(),
                    Relation::Le,
                    LinExpr::constant(liability.clone()),
                );
                lp.constrain(
                    recovery[b.0].clone() * liability,
                    Relation::Eq,
                    assets.clone() * delta,
                );
            }
        }
        lp.constrain(assets, Relation::Ge, LinExpr::new());
    }
    lp.set_objective(LinExpr::var(x));
    match solve_lp(&lp) {
        LpOutcome::Optimal(sol) => Ok(sol.value(x).clone()),
        _ => Err(Error::InfeasibleSet),
    }
}

/// Default hierarchy of `F_s(v, w)` with the buyer's out-node fixed at
/// `buyer_assets`, descending from `L_v` to the creditor's current assets.
pub fn build_hierarchy(
    net: &FinancialNetwork,
    v: BankId,
    w: BankId,
    buyer_assets: &Rational,
) -> Result<DefaultHierarchy> {
    net.check_bank(v)?;
    net.check_bank(w)?;
    if v == w {
        return Err(Error::InvalidTrade("creditor and buyer coincide".into()));
    }
    let state = clearing_state(net);
    let a_v = state.gross_assets[v.0].clone();
    let mut split = build_split(net, &[v, w])?;
    split.set_out_external(w, buyer_assets.clone());
    let mut hierarchy = DefaultHierarchy {
        creditor: v,
        buyer: w,
        buyer_assets: buyer_assets.clone(),
        creditor_assets: a_v.clone(),
        split,
        parts: Vec::new(),
    };
    let l_v = net.total_liability(v).clone();
    if a_v >= l_v {
        let solvent = hierarchy.solvent_at(&a_v);
        hierarchy.parts.push(HierarchyPart {
            lower: a_v,
            upper: None,
            solvent,
            degenerate: false,
        });
        return Ok(hierarchy);
    }
    let mut prev = hierarchy.solvent_at(&l_v);
    hierarchy.parts.push(HierarchyPart {
        lower: l_v.clone(),
        upper: None,
        solvent: prev.clone(),
        degenerate: false,
    });
    let mut breakpoint = l_v;
    let limit = hierarchy.split.network().num_banks() + 2;
    for _ in 0..limit {
        let solvent = next_default_set(&hierarchy.split, v, &breakpoint, &prev);
        let next = min_breakpoint(&hierarchy.split, v, &solvent)?;
        let done = next <= a_v;
        let lower = if done {
            a_v.clone()
        } else {
            crate::rational::min(&next, &breakpoint)
        };
        hierarchy.parts.push(HierarchyPart {
            degenerate: lower == breakpoint,
            lower: lower.clone(),
            upper: Some(breakpoint),
            solvent: solvent.clone(),
        });
        if done {
            return Ok(hierarchy);
        }
        breakpoint = lower;
        prev = solvent;
    }
    Err(Error::InvalidNetwork(
        "default hierarchy did not reach the creditor's assets".into(),
    ))
}
