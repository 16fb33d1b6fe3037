//! Clearing states of financial networks with default costs, and optimal
//! claims trades, donations and return schedules on top of them.

pub mod clearing;
pub mod error;
pub mod fixtures;
pub mod hierarchy;
pub mod io;
pub mod lp;
pub mod multi_in;
pub mod network;
pub mod oracle;
pub mod outgoing;
pub mod rational;
pub mod single;
pub mod solution;
pub mod split;
pub mod trade;

pub use clearing::{clearing_state, solvency_set, ClearingState};
pub use error::{Error, Result};
pub use network::{validate_network, BankId, EdgeId, FinancialNetwork};
pub use rational::Rational;
