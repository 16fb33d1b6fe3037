//! Optimizer results.

use crate::clearing::ClearingState;
use crate::network::{BankId, FinancialNetwork};
use crate::rational::Rational;
use crate::trade::{pareto_report, ParetoReport, TradeSpec};

/// The class of trades a solution is guaranteed to dominate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    CreditorPositive,
    BuyerOmegaImproved,
    ParetoPositive,
    /// Caller-defined objective and constraints.
    Custom,
}

impl Benchmark {
    pub fn label(self) -> &'static str {
        match self {
            Benchmark::CreditorPositive => "creditor-positive",
            Benchmark::BuyerOmegaImproved => "buyer-omega-improved",
            Benchmark::ParetoPositive => "pareto-positive",
            Benchmark::Custom => "custom",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        [
            Benchmark::CreditorPositive,
            Benchmark::BuyerOmegaImproved,
            Benchmark::ParetoPositive,
            Benchmark::Custom,
        ]
        .into_iter()
        .find(|b| b.label() == label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeSolution {
    pub trade: TradeSpec,
    pub post_network: FinancialNetwork,
    pub pre_state: ClearingState,
    pub post_state: ClearingState,
    /// Creditor whose assets are maximized, for incoming-edge trades.
    pub creditor: Option<BankId>,
    /// Optimized value, re-evaluated on the post-trade clearing state.
    pub objective: Rational,
    pub benchmark: Benchmark,
    /// Per-leg excess over the post-trade payments on the traded fraction.
    pub excess: Option<Vec<Rational>>,
    /// Buyer assets before paying returns, when returns are not funded
    /// from external assets.
    pub buyer_gross: Option<Rational>,
}

impl TradeSolution {
    pub fn buyer(&self) -> BankId {
        self.trade.buyer()
    }

    /// Post-trade assets of the creditor, if there is one.
    pub fn creditor_assets(&self) -> Option<&Rational> {
        self.creditor.map(|v| &self.post_state.assets[v.0])
    }

    pub fn report(&self) -> ParetoReport {
        let buyer = self.buyer();
        pareto_report(
            &self.pre_state,
            &self.post_state,
            self.creditor.unwrap_or(buyer),
            buyer,
        )
    }
}

/// Why no solution was returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotFound {
    NoBenchmarkTrade,
    NoParetoPositiveTrade,
    NoParetoPositiveDonation,
    Infeasible,
}

impl NotFound {
    pub fn message(self) -> &'static str {
        match self {
            NotFound::NoBenchmarkTrade => "no trade improves the creditor",
            NotFound::NoParetoPositiveTrade => "no Pareto-positive trade exists",
            NotFound::NoParetoPositiveDonation => "no Pareto-positive donation exists",
            NotFound::Infeasible => "constraints admit no trade",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Found(Box<TradeSolution>),
    NotFound(NotFound),
}

impl Outcome {
    pub fn found(&self) -> Option<&TradeSolution> {
        match self {
            Outcome::Found(sol) => Some(sol),
            Outcome::NotFound(_) => None,
        }
    }

    pub fn into_found(self) -> Option<TradeSolution> {
        match self {
            Outcome::Found(sol) => Some(*sol),
            Outcome::NotFound(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }
}
