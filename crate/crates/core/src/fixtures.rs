//! Small reference networks used across tests, examples and the CLI.

use crate::network::FinancialNetwork;
use crate::rational::{int, Rational};

/// Three banks in a line: `u -> v -> w`, all liabilities 4, external
/// assets `u: 2`, `w: 3`, no default cost.
pub fn fig1() -> FinancialNetwork {
    fig1_with_delta(int(1))
}

pub fn fig1_with_delta(delta: Rational) -> FinancialNetwork {
    FinancialNetwork::builder()
        .bank("u", int(2))
        .bank("v", int(0))
        .bank("w", int(3))
        .edge("u", "v", int(4))
        .edge("v", "w", int(4))
        .delta(delta)
        .build()
        .expect("static network")
}

/// Debtor `u` with creditors `v1`, `v2`; `v1 -> v2 -> w`; all liabilities 4,
/// external assets `u: 2`, `w: 4`, no default cost.
pub fn f2() -> FinancialNetwork {
    FinancialNetwork::builder()
        .bank("u", int(2))
        .bank("v1", int(0))
        .bank("v2", int(0))
        .bank("w", int(4))
        .edge("u", "v1", int(4))
        .edge("u", "v2", int(4))
        .edge("v1", "v2", int(4))
        .edge("v2", "w", int(4))
        .build()
        .expect("static network")
}

/// `u -> v -> w` with unit liabilities and no external assets.
pub fn f3() -> FinancialNetwork {
    FinancialNetwork::builder()
        .bank("u", int(0))
        .bank("v", int(0))
        .bank("w", int(0))
        .edge("u", "v", int(1))
        .edge("v", "w", int(1))
        .build()
        .expect("static network")
}

/// Creditor `v` with two debtors `u1`, `u2` and a single liability to `w`.
pub fn f4() -> FinancialNetwork {
    FinancialNetwork::builder()
        .bank("u1", int(2))
        .bank("u2", int(1))
        .bank("v", int(0))
        .bank("w", int(3))
        .edge("u1", "v", int(4))
        .edge("u2", "v", int(2))
        .edge("v", "w", int(6))
        .build()
        .expect("static network")
}
