use thiserror::Error;

use crate::rational::{format, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad rational {0:?}")]
pub struct ParseRationalError(pub String);

/// Errors raised by the solvers and network transformations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown bank {0}")]
    UnknownBank(String),
    #[error("unknown edge #{0}")]
    UnknownEdge(usize),
    #[error("invalid trade: {0}")]
    InvalidTrade(String),
    #[error("total return {} exceeds buyer external assets {}", format(.required), format(.available))]
    BudgetExceeded {
        required: Box<Rational>,
        available: Box<Rational>,
    },
    #[error("{what} = {} is outside [0, 1]", format(.value))]
    FractionOutOfRange { what: &'static str, value: Rational },
    #[error("solvent set admits no fixed point")]
    InfeasibleSet,
    #[error("default cost unsupported (NP-hard): delta must be 1")]
    DefaultCostUnsupported,
    #[error("debtor already pays in full; no Pareto-positive trade exists")]
    DebtorFullyPaid,
    #[error("recovery rate of edge #{edge} is not affine across hierarchy part {part}")]
    NonAffineRecovery { part: usize, edge: usize },
    #[error("linear program is unbounded")]
    UnboundedProgram,
    #[error("re-simulation diverged from the linear program: {0}")]
    ResimulationMismatch(String),
    #[error("fixed-point iteration did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
}

pub type Result<T> = std::result::Result<T, Error>;
