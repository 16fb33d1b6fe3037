//! Clearing states with default costs.
//!
//! The greatest fixed point is found with the default-set method: start
//! with every bank solvent, solve the linear system for the recovery rates
//! of the banks currently in default, move newly insolvent banks into the
//! default set and repeat. The default set only grows, so at most `n`
//! rounds are needed.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::lp::{solve_lp, LinExpr, LinearProgram, Relation, Sense};
use crate::network::{BankId, FinancialNetwork};
use crate::rational::Rational;

/// Payments, assets and recovery rates of a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct ClearingState {
    /// Per edge, `recovery[debtor] * liability`.
    pub payments: Vec<Rational>,
    /// External assets plus incoming payments, before any default-cost
    /// reduction. Solvency is decided on this value.
    pub gross_assets: Vec<Rational>,
    /// Total assets: gross for solvent banks, `delta * gross` for banks in
    /// default.
    pub assets: Vec<Rational>,
    pub recovery: Vec<Rational>,
}

impl ClearingState {
    pub fn asset(&self, bank: BankId) -> &Rational {
        &self.assets[bank.0]
    }

    pub fn gross(&self, bank: BankId) -> &Rational {
        &self.gross_assets[bank.0]
    }

    pub fn recovery_of(&self, bank: BankId) -> &Rational {
        &self.recovery[bank.0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Solvent,
    Default,
    /// Default with non-positive assets; pays nothing.
    Wiped,
}

/// Clearing state (maximal fixed point) of `net`.
pub fn clearing_state(net: &FinancialNetwork) -> ClearingState {
    clearing_state_forced(net, &BTreeSet::new())
}

/// Clearing state in which the banks in `forced` take the default-cost
/// reduction regardless of their assets.
pub fn clearing_state_forced(net: &FinancialNetwork, forced: &BTreeSet<BankId>) -> ClearingState {
    let n = net.num_banks();
    let delta = net.delta();
    let mut status = vec![Status::Solvent; n];
    for b in forced {
        if !net.total_liability(*b).is_zero() {
            status[b.0] = Status::Default;
        }
    }
    let mut recovery = vec![Rational::one(); n];
    for _round in 0..=2 * n + 1 {
        recovery = solve_recovery(net, &status);
        let gross = gross_assets(net, &recovery);
        let mut changed = false;
        for b in 0..n {
            let liability = net.total_liability(BankId(b));
            if liability.is_zero() {
                continue;
            }
            match status[b] {
                Status::Solvent if gross[b] < *liability => {
                    status[b] = Status::Default;
                    changed = true;
                }
                Status::Default if recovery[b].is_negative() || gross[b].is_negative() => {
                    status[b] = Status::Wiped;
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let gross = gross_assets(net, &recovery);
    let assets = (0..n)
        .map(|b| match status[b] {
            Status::Solvent => gross[b].clone(),
            _ => delta * &gross[b],
        })
        .collect();
    let payments = net
        .edges()
        .iter()
        .map(|e| &recovery[e.debtor.0] * &e.liability)
        .collect();
    ClearingState {
        payments,
        gross_assets: gross,
        assets,
        recovery,
    }
}

/// `a^x_b + sum of incoming payments` for the given recovery vector.
pub fn gross_assets(net: &FinancialNetwork, recovery: &[Rational]) -> Vec<Rational> {
    let mut gross: Vec<Rational> = net.banks().iter().map(|b| b.external.clone()).collect();
    for e in net.edges() {
        gross[e.creditor.0] += &recovery[e.debtor.0] * &e.liability;
    }
    gross
}

/// Recovery rates given fixed statuses: solvent banks pay in full, wiped
/// banks pay nothing, the rest satisfy `r_b L_b = delta * gross_b`.
fn solve_recovery(net: &FinancialNetwork, status: &[Status]) -> Vec<Rational> {
    let n = net.num_banks();
    let delta = net.delta();
    let mut recovery: Vec<Rational> = status
        .iter()
        .map(|s| match s {
            Status::Solvent => Rational::one(),
            _ => Rational::zero(),
        })
        .collect();
    let defaulted: Vec<usize> = (0..n).filter(|&b| status[b] == Status::Default).collect();
    if defaulted.is_empty() {
        return recovery;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &b) in defaulted.iter().enumerate() {
        pos[b] = i;
    }
    let k = defaulted.len();
    // Row i: L_b r_b - delta * sum_{e=(d,b), d defaulted} l_e r_d = delta * (a^x_b + sum_{e=(d,b), d solvent} l_e)
    let mut matrix = vec![vec![Rational::zero(); k]; k];
    let mut rhs = vec![Rational::zero(); k];
    for (i, &b) in defaulted.iter().enumerate() {
        let bank = BankId(b);
        matrix[i][i] += net.total_liability(bank);
        let mut constant = net.external(bank).clone();
        for e in net.incoming(bank) {
            let edge = net.edge(*e);
            let d = edge.debtor.0;
            match status[d] {
                Status::Solvent => constant += &edge.liability,
                Status::Default => matrix[i][pos[d]] -= delta * &edge.liability,
                Status::Wiped => {}
            }
        }
        rhs[i] = delta * constant;
    }
    let solution = gaussian_solve(matrix.clone(), rhs.clone())
        .filter(|x| x.iter().all(|r| *r <= Rational::one()))
        .unwrap_or_else(|| greatest_subsolution(&matrix, &rhs, net, &defaulted));
    for (i, &b) in defaulted.iter().enumerate() {
        recovery[b] = solution[i].clone();
    }
    recovery
}

/// Greatest `r` in `[0,1]^k` with `M r <= rhs`, used when the default
/// system is singular (closed default cycles without default cost).
fn greatest_subsolution(
    matrix: &[Vec<Rational>],
    rhs: &[Rational],
    net: &FinancialNetwork,
    defaulted: &[usize],
) -> Vec<Rational> {
    let k = rhs.len();
    let mut lp = LinearProgram::new(Sense::Maximize);
    let vars: Vec<_> = defaulted
        .iter()
        .map(|b| lp.add_unit_var(format!("r_{}", net.name(BankId(*b)))))
        .collect();
    let mut objective = LinExpr::new();
    for i in 0..k {
        let mut row = LinExpr::new();
        for j in 0..k {
            row.add_term(vars[j], matrix[i][j].clone());
        }
        lp.constrain(row, Relation::Le, LinExpr::constant(rhs[i].clone()));
        objective.add_term(vars[i], Rational::one());
    }
    lp.set_objective(objective);
    match solve_lp(&lp).optimal() {
        Some(sol) => vars.iter().map(|v| sol.value(*v).clone()).collect(),
        None => vec![Rational::zero(); k],
    }
}

/// Exact Gaussian elimination; `None` when singular.
pub(crate) fn gaussian_solve(
    mut matrix: Vec<Vec<Rational>>,
    mut rhs: Vec<Rational>,
) -> Option<Vec<Rational>> {
    let k = rhs.len();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !matrix[r][col].is_zero())?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = matrix[col][col].recip();
        for x in &mut matrix[col][col..k] {
            *x *= &inv;
        }
        rhs[col] *= &inv;
        for r in 0..k {
            if r == col || matrix[r][col].is_zero() {
                continue;
            }
            let factor = matrix[r][col].clone();
            let (pivot_row, row) = if r < col {
                let (head, tail) = matrix.split_at_mut(col);
                (&tail[0], &mut head[r])
            } else {
                let (head, tail) = matrix.split_at_mut(r);
                (&head[col], &mut tail[0])
            };
            for (x, p) in row[col..k].iter_mut().zip(&pivot_row[col..k]) {
                *x -= &factor * p;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}

/// Banks with `gross >= L` (every bank without liabilities is included).
pub fn solvency_set(state: &ClearingState, net: &FinancialNetwork) -> BTreeSet<BankId> {
    net.bank_ids()
        .filter(|b| state.gross_assets[b.0] >= *net.total_liability(*b))
        .collect()
}

/// Re-evaluates the fixed-point equations; true when `state` reproduces
/// itself exactly.
pub fn is_fixed_point(net: &FinancialNetwork, state: &ClearingState) -> bool {
    let gross = gross_assets(net, &state.recovery);
    if gross != state.gross_assets {
        return false;
    }
    net.bank_ids().all(|b| {
        let liability = net.total_liability(b);
        let expected_recovery = if liability.is_zero() || gross[b.0] >= *liability {
            Rational::one()
        } else if gross[b.0].is_negative() {
            Rational::zero()
        } else {
            net.delta() * &gross[b.0] / liability
        };
        let expected_assets = if liability.is_zero() || gross[b.0] >= *liability {
            gross[b.0].clone()
        } else {
            net.delta() * &gross[b.0]
        };
        state.recovery[b.0] == expected_recovery && state.assets[b.0] == expected_assets
    }) && net
        .edges()
        .iter()
        .zip(&state.payments)
        .all(|(e, p)| *p == &state.recovery[e.debtor.0] * &e.liability)
}
