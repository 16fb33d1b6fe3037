//! Financial network data model and validation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format, one, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BankId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl fmt::Display for BankId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bank#{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edge#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bank {
    pub name: String,
    pub external: Rational,
}

/// A debt relation: `debtor` owes `liability` to `creditor`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub debtor: BankId,
    pub creditor: BankId,
    pub liability: Rational,
}

/// Banks, claims, external assets and the default-cost factor `delta`.
///
/// Adjacency lists and total liabilities are cached at construction; the
/// value is immutable afterwards.
#[derive(Debug, Clone)]
pub struct FinancialNetwork {
    banks: Vec<Bank>,
    edges: Vec<Edge>,
    delta: Rational,
    outgoing: Vec<Vec<EdgeId>>,
    incoming: Vec<Vec<EdgeId>>,
    liabilities: Vec<Rational>,
}

impl PartialEq for FinancialNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.banks == other.banks && self.edges == other.edges && self.delta == other.delta
    }
}

impl FinancialNetwork {
    /// Builds a network. Edge endpoints must index into `banks`; other
    /// invariants are reported by [`validate_network`].
    pub fn new(banks: Vec<Bank>, edges: Vec<Edge>, delta: Rational) -> Result<Self> {
        let n = banks.len();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        let mut liabilities = vec![Rational::zero(); n];
        for (idx, edge) in edges.iter().enumerate() {
            if edge.debtor.0 >= n {
                return Err(Error::UnknownBank(edge.debtor.to_string()));
            }
            if edge.creditor.0 >= n {
                return Err(Error::UnknownBank(edge.creditor.to_string()));
            }
            outgoing[edge.debtor.0].push(EdgeId(idx));
            incoming[edge.creditor.0].push(EdgeId(idx));
            liabilities[edge.debtor.0] += &edge.liability;
        }
        Ok(Self {
            banks,
            edges,
            delta,
            outgoing,
            incoming,
            liabilities,
        })
    }

    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    pub fn num_banks(&self) -> usize {
        self.banks.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn banks(&self) -> &[Bank] {
        &self.banks
    }

    pub fn bank_ids(&self) -> impl Iterator<Item = BankId> {
        (0..self.banks.len()).map(BankId)
    }

    pub fn bank(&self, id: BankId) -> &Bank {
        &self.banks[id.0]
    }

    pub fn name(&self, id: BankId) -> &str {
        &self.banks[id.0].name
    }

    pub fn external(&self, id: BankId) -> &Rational {
        &self.banks[id.0].external
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn outgoing(&self, id: BankId) -> &[EdgeId] {
        &self.outgoing[id.0]
    }

    pub fn incoming(&self, id: BankId) -> &[EdgeId] {
        &self.incoming[id.0]
    }

    /// Total liabilities `L_b`.
    pub fn total_liability(&self, id: BankId) -> &Rational {
        &self.liabilities[id.0]
    }

    pub fn find_bank(&self, name: &str) -> Option<BankId> {
        self.banks.iter().position(|b| b.name == name).map(BankId)
    }

    pub fn bank_by_name(&self, name: &str) -> Result<BankId> {
        self.find_bank(name)
            .ok_or_else(|| Error::UnknownBank(name.to_string()))
    }

    /// First edge from `debtor` to `creditor`.
    pub fn find_edge(&self, debtor: BankId, creditor: BankId) -> Option<EdgeId> {
        self.outgoing[debtor.0]
            .iter()
            .copied()
            .find(|e| self.edges[e.0].creditor == creditor)
    }

    pub fn check_bank(&self, id: BankId) -> Result<()> {
        if id.0 < self.banks.len() {
            Ok(())
        } else {
            Err(Error::UnknownBank(id.to_string()))
        }
    }

    pub fn check_edge(&self, id: EdgeId) -> Result<()> {
        if id.0 < self.edges.len() {
            Ok(())
        } else {
            Err(Error::UnknownEdge(id.0))
        }
    }

    /// Same network with different external assets.
    pub fn with_externals(&self, externals: Vec<Rational>) -> Self {
        assert_eq!(externals.len(), self.banks.len());
        let mut next = self.clone();
        for (bank, value) in next.banks.iter_mut().zip(externals) {
            bank.external = value;
        }
        next
    }

    pub fn with_external(&self, id: BankId, value: Rational) -> Self {
        let mut next = self.clone();
        next.banks[id.0].external = value;
        next
    }

    pub fn with_delta(&self, delta: Rational) -> Self {
        let mut next = self.clone();
        next.delta = delta;
        next
    }

    /// Collapses parallel edges by summing their liabilities. Proportional
    /// payments make the result equivalent for per-bank assets.
    pub fn merge_parallel_edges(&self) -> Self {
        let mut merged: BTreeMap<(BankId, BankId), Rational> = BTreeMap::new();
        let mut order = Vec::new();
        for edge in &self.edges {
            let key = (edge.debtor, edge.creditor);
            match merged.get_mut(&key) {
                Some(total) => *total += &edge.liability,
                None => {
                    order.push(key);
                    merged.insert(key, edge.liability.clone());
                }
            }
        }
        let edges = order
            .into_iter()
            .map(|key| Edge {
                debtor: key.0,
                creditor: key.1,
                liability: merged[&key].clone(),
            })
            .collect();
        Self::new(self.banks.clone(), edges, self.delta.clone()).expect("endpoints unchanged")
    }
}

#[derive(Debug, Default)]
pub struct NetworkBuilder {
    banks: Vec<Bank>,
    index: HashMap<String, BankId>,
    edges: Vec<(String, String, Rational)>,
    delta: Option<Rational>,
}

impl NetworkBuilder {
    pub fn bank(mut self, name: &str, external: impl Into<Rational>) -> Self {
        self.index
            .insert(name.to_string(), BankId(self.banks.len()));
        self.banks.push(Bank {
            name: name.to_string(),
            external: external.into(),
        });
        self
    }

    pub fn edge(mut self, debtor: &str, creditor: &str, liability: impl Into<Rational>) -> Self {
        self.edges
            .push((debtor.to_string(), creditor.to_string(), liability.into()));
        self
    }

    pub fn delta(mut self, delta: impl Into<Rational>) -> Self {
        self.delta = Some(delta.into());
        self
    }

    pub fn build(self) -> Result<FinancialNetwork> {
        let lookup = |name: &str| {
            self.index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownBank(name.to_string()))
        };
        let edges = self
            .edges
            .iter()
            .map(|(d, c, l)| {
                Ok(Edge {
                    debtor: lookup(d)?,
                    creditor: lookup(c)?,
                    liability: l.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FinancialNetwork::new(self.banks, edges, self.delta.unwrap_or_else(one))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SelfLoop { edge: EdgeId, bank: String },
    NonPositiveLiability { edge: EdgeId, value: String },
    NegativeExternal { bank: String, value: String },
    DeltaOutOfRange { value: String },
    DuplicateBankName { bank: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop { edge, bank } => write!(f, "self-loop on {bank} ({edge})"),
            Violation::NonPositiveLiability { edge, value } => {
                write!(f, "negative value: liability {value} on {edge}")
            }
            Violation::NegativeExternal { bank, value } => {
                write!(f, "negative value: external assets {value} of {bank}")
            }
            Violation::DeltaOutOfRange { value } => write!(f, "delta out of range: {value}"),
            Violation::DuplicateBankName { bank } => write!(f, "duplicate bank name {bank}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let text: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            Err(Error::InvalidNetwork(text.join("; ")))
        }
    }
}

pub fn validate_network(net: &FinancialNetwork) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen = HashMap::new();
    for bank in net.banks() {
        if seen.insert(bank.name.as_str(), ()).is_some() {
            violations.push(Violation::DuplicateBankName {
                bank: bank.name.clone(),
            });
        }
        if bank.external.is_negative() {
            violations.push(Violation::NegativeExternal {
                bank: bank.name.clone(),
                value: format(&bank.external),
            });
        }
    }
    for (idx, edge) in net.edges().iter().enumerate() {
        if edge.debtor == edge.creditor {
            violations.push(Violation::SelfLoop {
                edge: EdgeId(idx),
                bank: net.name(edge.debtor).to_string(),
            });
        }
        if !edge.liability.is_positive() {
            violations.push(Violation::NonPositiveLiability {
                edge: EdgeId(idx),
                value: format(&edge.liability),
            });
        }
    }
    if net.delta().is_negative() || *net.delta() > one() {
        violations.push(Violation::DeltaOutOfRange {
            value: format(net.delta()),
        });
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    #[test]
    fn fig1_network_is_valid() {
        let report = validate_network(&fixtures::fig1());
        assert!(report.is_valid(), "{report:?}");
    }

    #[test]
    fn self_loop_is_reported() {
        let net = FinancialNetwork::builder()
            .bank("u", int(1))
            .edge("u", "u", int(1))
            .build()
            .unwrap();
        let report = validate_network(&net);
        assert!(matches!(report.violations[0], Violation::SelfLoop { .. }));
        assert!(report.violations[0].to_string().contains("self-loop"));
    }

    #[test]
    fn delta_out_of_range_is_reported() {
        let net = fixtures::fig1().with_delta(ratio(3, 2));
        let report = validate_network(&net);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0]
            .to_string()
            .contains("delta out of range"));
    }

    #[test]
    fn negative_values_are_reported() {
        let net = FinancialNetwork::builder()
            .bank("a", int(-1))
            .bank("b", int(0))
            .edge("a", "b", int(0))
            .build()
            .unwrap();
        assert_eq!(validate_network(&net).violations.len(), 2);
    }

    #[test]
    fn merge_sums_parallel_liabilities() {
        let net = FinancialNetwork::builder()
            .bank("a", int(1))
            .bank("b", int(0))
            .edge("a", "b", int(1))
            .edge("a", "b", int(2))
            .build()
            .unwrap();
        let merged = net.merge_parallel_edges();
        assert_eq!(merged.num_edges(), 1);
        assert_eq!(merged.edge(EdgeId(0)).liability, int(3));
        assert_eq!(merged.total_liability(BankId(0)), &int(3));
    }
}
