//! JSON documents for networks, clearing states, hierarchies and trade
//! solutions. Every rational is a string such as `"7/2"` or `"4"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clearing::{clearing_state, ClearingState};
use crate::error::Error;
use crate::hierarchy::DefaultHierarchy;
use crate::network::{validate_network, Bank, BankId, Edge, EdgeId, FinancialNetwork};
use crate::rational::{format, parse, Rational};
use crate::solution::{Benchmark, TradeSolution};
use crate::trade::{
    apply_trade_with, pareto_report, InLeg, OutLeg, ReturnBound, TradeSpec, Transfer,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("duplicate bank id {0:?}")]
    DuplicateBankId(String),
    #[error("{field} refers to unknown bank {id:?}")]
    UnknownBankInEdge { field: String, id: String },
    #[error("bad rational {value:?} at {field}")]
    BadRational { field: String, value: String },
    #[error(transparent)]
    Invalid(#[from] Error),
}

pub type DocResult<T> = std::result::Result<T, DocumentError>;

fn rational_at(field: impl Into<String>, text: &str) -> DocResult<Rational> {
    parse(text).map_err(|_| DocumentError::BadRational {
        field: field.into(),
        value: text.to_string(),
    })
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> DocResult<T> {
    serde_json::from_str(text).map_err(|e| DocumentError::MalformedDocument(e.to_string()))
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents serialize");
    out.push('\n');
    out
}

fn check_version(version: u32) -> DocResult<()> {
    if version != SCHEMA_VERSION {
        return Err(DocumentError::MalformedDocument(format!(
            "unsupported schema_version {version}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BankEntry {
    pub id: String,
    pub external: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub debtor: String,
    pub creditor: String,
    pub liability: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub schema_version: u32,
    pub delta: String,
    pub banks: Vec<BankEntry>,
    pub edges: Vec<EdgeEntry>,
}

impl NetworkDocument {
    pub fn from_network(net: &FinancialNetwork) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            delta: format(net.delta()),
            banks: net
                .banks()
                .iter()
                .map(|b| BankEntry {
                    id: b.name.clone(),
                    external: format(&b.external),
                })
                .collect(),
            edges: net
                .edges()
                .iter()
                .map(|e| EdgeEntry {
                    debtor: net.name(e.debtor).to_string(),
                    creditor: net.name(e.creditor).to_string(),
                    liability: format(&e.liability),
                })
                .collect(),
        }
    }

    pub fn to_network(&self) -> DocResult<FinancialNetwork> {
        check_version(self.schema_version)?;
        let delta = rational_at("delta", &self.delta)?;
        let mut ids: BTreeMap<&str, BankId> = BTreeMap::new();
        let mut banks = Vec::with_capacity(self.banks.len());
        for (i, b) in self.banks.iter().enumerate() {
            if ids.insert(&b.id, BankId(i)).is_some() {
                return Err(DocumentError::DuplicateBankId(b.id.clone()));
            }
            banks.push(Bank {
                name: b.id.clone(),
                external: rational_at(format!("banks[{i}].external"), &b.external)?,
            });
        }
        let lookup = |field: String, id: &str| {
            ids.get(id)
                .copied()
                .ok_or_else(|| DocumentError::UnknownBankInEdge {
                    field,
                    id: id.to_string(),
                })
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            edges.push(Edge {
                debtor: lookup(format!("edges[{i}].debtor"), &e.debtor)?,
                creditor: lookup(format!("edges[{i}].creditor"), &e.creditor)?,
                liability: rational_at(format!("edges[{i}].liability"), &e.liability)?,
            });
        }
        let net = FinancialNetwork::new(banks, edges, delta)?;
        validate_network(&net).into_result()?;
        Ok(net)
    }
}

pub fn parse_network(text: &str) -> DocResult<FinancialNetwork> {
    from_json::<NetworkDocument>(text)?.to_network()
}

pub fn serialize_network(net: &FinancialNetwork) -> String {
    to_json(&NetworkDocument::from_network(net))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankState {
    pub id: String,
    pub gross: String,
    pub assets: String,
    pub recovery: String,
    pub solvent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaymentEntry {
    pub debtor: String,
    pub creditor: String,
    pub payment: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClearingDocument {
    pub schema_version: u32,
    pub banks: Vec<BankState>,
    pub payments: Vec<PaymentEntry>,
}

impl ClearingDocument {
    pub fn new(net: &FinancialNetwork, state: &ClearingState) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            banks: net
                .bank_ids()
                .map(|b| BankState {
                    id: net.name(b).to_string(),
                    gross: format(&state.gross_assets[b.0]),
                    assets: format(&state.assets[b.0]),
                    recovery: format(&state.recovery[b.0]),
                    solvent: state.gross_assets[b.0] >= *net.total_liability(b),
                })
                .collect(),
            payments: net
                .edges()
                .iter()
                .zip(&state.payments)
                .map(|(e, p)| PaymentEntry {
                    debtor: net.name(e.debtor).to_string(),
                    creditor: net.name(e.creditor).to_string(),
                    payment: format(p),
                })
                .collect(),
        }
    }
}

pub fn serialize_clearing(net: &FinancialNetwork, state: &ClearingState) -> String {
    to_json(&ClearingDocument::new(net, state))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartEntry {
    pub lower: String,
    /// Absent for the unbounded top part.
    pub upper: Option<String>,
    pub solvent: Vec<String>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyDocument {
    pub schema_version: u32,
    pub creditor: String,
    pub buyer: String,
    pub buyer_assets: String,
    pub parts: Vec<PartEntry>,
}

pub fn serialize_hierarchy(h: &DefaultHierarchy) -> String {
    let base = h.split.base();
    let nodes = h.split.network();
    to_json(&HierarchyDocument {
        schema_version: SCHEMA_VERSION,
        creditor: base.name(h.creditor).to_string(),
        buyer: base.name(h.buyer).to_string(),
        buyer_assets: format(&h.buyer_assets),
        parts: h
            .parts
            .iter()
            .map(|p| PartEntry {
                lower: format(&p.lower),
                upper: p.upper.as_ref().map(format),
                solvent: p
                    .solvent
                    .iter()
                    .map(|b| nodes.name(*b).to_string())
                    .collect(),
                degenerate: p.degenerate,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRef {
    pub index: usize,
    pub debtor: String,
    pub creditor: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InLegEntry {
    pub edge: EdgeRef,
    pub beta: String,
    pub alpha: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutLegEntry {
    pub edge: EdgeRef,
    pub beta: String,
    #[serde(rename = "return")]
    pub ret: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferEntry {
    pub recipient: String,
    pub amount: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TradeDocument {
    Single {
        edge: EdgeRef,
        buyer: String,
        beta: String,
        alpha: String,
    },
    MultiIn {
        creditor: String,
        buyer: String,
        legs: Vec<InLegEntry>,
    },
    MultiOut {
        debtor: String,
        buyer: String,
        legs: Vec<OutLegEntry>,
    },
    Donation {
        donor: String,
        recipient: String,
        amount: String,
    },
    MultiDonation {
        donor: String,
        transfers: Vec<TransferEntry>,
    },
    ClaimSet {
        buyer: String,
        claims: Vec<EdgeRef>,
        returns: Vec<TransferEntry>,
    },
}

fn edge_ref(net: &FinancialNetwork, e: EdgeId) -> EdgeRef {
    let edge = net.edge(e);
    EdgeRef {
        index: e.0,
        debtor: net.name(edge.debtor).to_string(),
        creditor: net.name(edge.creditor).to_string(),
    }
}

fn transfer_entries(net: &FinancialNetwork, transfers: &[Transfer]) -> Vec<TransferEntry> {
    transfers
        .iter()
        .map(|t| TransferEntry {
            recipient: net.name(t.recipient).to_string(),
            amount: format(&t.amount),
        })
        .collect()
}

impl TradeDocument {
    pub fn from_trade(net: &FinancialNetwork, trade: &TradeSpec) -> Self {
        let name = |b: &BankId| net.name(*b).to_string();
        match trade {
            TradeSpec::Single {
                edge,
                buyer,
                beta,
                alpha,
            } => TradeDocument::Single {
                edge: edge_ref(net, *edge),
                buyer: name(buyer),
                beta: format(beta),
                alpha: format(alpha),
            },
            TradeSpec::MultiIn {
                creditor,
                buyer,
                legs,
            } => TradeDocument::MultiIn {
                creditor: name(creditor),
                buyer: name(buyer),
                legs: legs
                    .iter()
                    .map(|l| InLegEntry {
                        edge: edge_ref(net, l.edge),
                        beta: format(&l.beta),
                        alpha: format(&l.alpha),
                    })
                    .collect(),
            },
            TradeSpec::MultiOut {
                debtor,
                buyer,
                legs,
            } => TradeDocument::MultiOut {
                debtor: name(debtor),
                buyer: name(buyer),
                legs: legs
                    .iter()
                    .map(|l| OutLegEntry {
                        edge: edge_ref(net, l.edge),
                        beta: format(&l.beta),
                        ret: format(&l.ret),
                    })
                    .collect(),
            },
            TradeSpec::Donation {
                donor,
                recipient,
                amount,
            } => TradeDocument::Donation {
                donor: name(donor),
                recipient: name(recipient),
                amount: format(amount),
            },
            TradeSpec::MultiDonation { donor, transfers } => TradeDocument::MultiDonation {
                donor: name(donor),
                transfers: transfer_entries(net, transfers),
            },
            TradeSpec::ClaimSet {
                buyer,
                claims,
                returns,
            } => TradeDocument::ClaimSet {
                buyer: name(buyer),
                claims: claims.iter().map(|c| edge_ref(net, *c)).collect(),
                returns: transfer_entries(net, returns),
            },
        }
    }

    /// Resolves names and edge references against `net`.
    pub fn to_trade(&self, net: &FinancialNetwork) -> DocResult<TradeSpec> {
        let bank = |field: &str, id: &str| {
            net.find_bank(id)
                .ok_or_else(|| DocumentError::UnknownBankInEdge {
                    field: field.to_string(),
                    id: id.to_string(),
                })
        };
        let edge = |r: &EdgeRef| -> DocResult<EdgeId> {
            let id = EdgeId(r.index);
            net.check_edge(id)?;
            let e = net.edge(id);
            if net.name(e.debtor) != r.debtor || net.name(e.creditor) != r.creditor {
                return Err(DocumentError::MalformedDocument(format!(
                    "edge {} is {} -> {}, not {} -> {}",
                    r.index,
                    net.name(e.debtor),
                    net.name(e.creditor),
                    r.debtor,
                    r.creditor
                )));
            }
            Ok(id)
        };
        let transfers = |entries: &[TransferEntry]| -> DocResult<Vec<Transfer>> {
            entries
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    Ok(Transfer {
                        recipient: bank("recipient", &t.recipient)?,
                        amount: rational_at(format!("transfers[{i}].amount"), &t.amount)?,
                    })
                })
                .collect()
        };
        Ok(match self {
            TradeDocument::Single {
                edge: e,
                buyer,
                beta,
                alpha,
            } => TradeSpec::Single {
                edge: edge(e)?,
                buyer: bank("buyer", buyer)?,
                beta: rational_at("beta", beta)?,
                alpha: rational_at("alpha", alpha)?,
            },
            TradeDocument::MultiIn {
                creditor,
                buyer,
                legs,
            } => TradeSpec::MultiIn {
                creditor: bank("creditor", creditor)?,
                buyer: bank("buyer", buyer)?,
                legs: legs
                    .iter()
                    .enumerate()
                    .map(|(i, l)| {
                        Ok(InLeg {
                            edge: edge(&l.edge)?,
                            beta: rational_at(format!("legs[{i}].beta"), &l.beta)?,
                            alpha: rational_at(format!("legs[{i}].alpha"), &l.alpha)?,
                        })
                    })
                    .collect::<DocResult<_>>()?,
            },
            TradeDocument::MultiOut {
                debtor,
                buyer,
                legs,
            } => TradeSpec::MultiOut {
                debtor: bank("debtor", debtor)?,
                buyer: bank("buyer", buyer)?,
                legs: legs
                    .iter()
                    .enumerate()
                    .map(|(i, l)| {
                        Ok(OutLeg {
                            edge: edge(&l.edge)?,
                            beta: rational_at(format!("legs[{i}].beta"), &l.beta)?,
                            ret: rational_at(format!("legs[{i}].return"), &l.ret)?,
                        })
                    })
                    .collect::<DocResult<_>>()?,
            },
            TradeDocument::Donation {
                donor,
                recipient,
                amount,
            } => TradeSpec::Donation {
                donor: bank("donor", donor)?,
                recipient: bank("recipient", recipient)?,
                amount: rational_at("amount", amount)?,
            },
            TradeDocument::MultiDonation {
                donor,
                transfers: t,
            } => TradeSpec::MultiDonation {
                donor: bank("donor", donor)?,
                transfers: transfers(t)?,
            },
            TradeDocument::ClaimSet {
                buyer,
                claims,
                returns,
            } => TradeSpec::ClaimSet {
                buyer: bank("buyer", buyer)?,
                claims: claims.iter().map(edge).collect::<DocResult<_>>()?,
                returns: transfers(returns)?,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankReport {
    pub id: String,
    pub pre: String,
    pub post: String,
    pub delta: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoFlags {
    pub weak_pareto: bool,
    pub creditor_positive: bool,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub schema_version: u32,
    pub benchmark: String,
    pub trade: TradeDocument,
    pub objective: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub creditor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub creditor_assets: Option<String>,
    /// Total assets of the creditors of a multi-out trade.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub creditor_total: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buyer_gross: Option<String>,
    pub banks: Vec<BankReport>,
    pub pareto: ParetoFlags,
}

fn out_creditors(net: &FinancialNetwork, trade: &TradeSpec) -> Option<Vec<BankId>> {
    let TradeSpec::MultiOut { legs, .. } = trade else {
        return None;
    };
    let mut out: Vec<BankId> = Vec::new();
    for l in legs {
        let c = net.edge(l.edge).creditor;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Some(out)
}

fn bank_reports(
    net: &FinancialNetwork,
    pre: &ClearingState,
    post: &ClearingState,
) -> Vec<BankReport> {
    net.bank_ids()
        .map(|b| BankReport {
            id: net.name(b).to_string(),
            pre: format(&pre.assets[b.0]),
            post: format(&post.assets[b.0]),
            delta: format(&(&post.assets[b.0] - &pre.assets[b.0])),
        })
        .collect()
}

impl SolutionDocument {
    /// `net` is the pre-trade network the solution was computed on.
    pub fn new(net: &FinancialNetwork, sol: &TradeSolution) -> Self {
        let report = sol.report();
        Self {
            schema_version: SCHEMA_VERSION,
            benchmark: sol.benchmark.label().to_string(),
            trade: TradeDocument::from_trade(net, &sol.trade),
            objective: format(&sol.objective),
            creditor: sol.creditor.map(|c| net.name(c).to_string()),
            creditor_assets: sol.creditor_assets().map(format),
            creditor_total: out_creditors(net, &sol.trade)
                .map(|cs| format(&cs.iter().map(|c| &sol.post_state.assets[c.0]).sum())),
            eta: sol
                .excess
                .as_ref()
                .map(|xs| xs.iter().map(format).collect()),
            buyer_gross: sol.buyer_gross.as_ref().map(format),
            banks: bank_reports(net, &sol.pre_state, &sol.post_state),
            pareto: ParetoFlags {
                weak_pareto: report.weak_pareto,
                creditor_positive: report.creditor_positive,
                positive: report.positive,
            },
        }
    }

    /// Re-simulates the trade on `net` and lists every reported value the
    /// clearing state does not reproduce exactly.
    pub fn verify(&self, net: &FinancialNetwork) -> DocResult<Vec<String>> {
        check_version(self.schema_version)?;
        if Benchmark::from_label(&self.benchmark).is_none() {
            return Err(DocumentError::MalformedDocument(format!(
                "unknown benchmark {:?}",
                self.benchmark
            )));
        }
        let trade = self.trade.to_trade(net)?;
        let bound = match trade {
            TradeSpec::ClaimSet { .. } => ReturnBound::Unbounded,
            _ => ReturnBound::Budgeted,
        };
        let pre = clearing_state(net);
        let post_net = apply_trade_with(net, &trade, bound)?;
        let post = clearing_state(&post_net);
        let mut mismatches = Vec::new();
        let mut check = |what: String, reported: Option<&String>, actual: Option<String>| {
            if reported != actual.as_ref() {
                mismatches.push(format!(
                    "{what}: reported {reported:?}, re-simulated {actual:?}"
                ));
            }
        };
        let expected = bank_reports(net, &pre, &post);
        if expected.len() != self.banks.len() {
            check(
                "bank count".into(),
                Some(&self.banks.len().to_string()),
                Some(expected.len().to_string()),
            );
        }
        for (got, want) in self.banks.iter().zip(&expected) {
            if got != want {
                check(
                    format!("bank {}", want.id),
                    Some(&format!("{got:?}")),
                    Some(format!("{want:?}")),
                );
            }
        }
        let creditor = match &self.creditor {
            Some(id) => {
                Some(
                    net.find_bank(id)
                        .ok_or_else(|| DocumentError::UnknownBankInEdge {
                            field: "creditor".into(),
                            id: id.clone(),
                        })?,
                )
            }
            None => None,
        };
        check(
            "creditor_assets".into(),
            self.creditor_assets.as_ref(),
            creditor.map(|c| format(&post.assets[c.0])),
        );
        check(
            "creditor_total".into(),
            self.creditor_total.as_ref(),
            out_creditors(net, &trade)
                .map(|cs| format(&cs.iter().map(|c| &post.assets[c.0]).sum())),
        );
        if let (Some(eta), TradeSpec::MultiOut { debtor, legs, .. }) = (&self.eta, &trade) {
            let actual: Vec<String> = legs
                .iter()
                .map(|l| {
                    format(
                        &(&l.ret
                            - &post.recovery[debtor.0] * &l.beta * &net.edge(l.edge).liability),
                    )
                })
                .collect();
            if *eta != actual {
                check("eta".into(), Some(&eta.join(",")), Some(actual.join(",")));
            }
        }
        if self.buyer_gross.is_some() {
            let buyer = trade.buyer();
            check(
                "buyer_gross".into(),
                self.buyer_gross.as_ref(),
                Some(format(&(&post.assets[buyer.0] + trade.total_return(net)))),
            );
        }
        let report = pareto_report(
            &pre,
            &post,
            creditor.unwrap_or(trade.buyer()),
            trade.buyer(),
        );
        let flags = ParetoFlags {
            weak_pareto: report.weak_pareto,
            creditor_positive: report.creditor_positive,
            positive: report.positive,
        };
        if flags != self.pareto {
            check(
                "pareto".into(),
                Some(&format!("{:?}", self.pareto)),
                Some(format!("{flags:?}")),
            );
        }
        Ok(mismatches)
    }
}

pub fn serialize_solution(net: &FinancialNetwork, sol: &TradeSolution) -> String {
    to_json(&SolutionDocument::new(net, sol))
}

pub fn parse_solution(text: &str) -> DocResult<SolutionDocument> {
    let doc: SolutionDocument = from_json(text)?;
    check_version(doc.schema_version)?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::outgoing::optimal_multi_out_excess;
    use crate::single::optimal_single_trade;

    #[test]
    fn network_round_trip() {
        for net in [
            fixtures::fig1(),
            fixtures::f2(),
            fixtures::fig1_with_delta(crate::rational::ratio(1, 3)),
        ] {
            let text = serialize_network(&net);
            assert_eq!(parse_network(&text).unwrap(), net);
            assert_eq!(serialize_network(&parse_network(&text).unwrap()), text);
        }
    }

    #[test]
    fn network_errors() {
        let doc = |banks: &str, edges: &str| {
            format!(r#"{{"schema_version":1,"delta":"1","banks":[{banks}],"edges":[{edges}]}}"#)
        };
        let a = r#"{"id":"a","external":"1"}"#;
        let b = r#"{"id":"b","external":"0"}"#;
        assert_eq!(
            parse_network(&doc(&format!("{a},{a}"), "")),
            Err(DocumentError::DuplicateBankId("a".into()))
        );
        assert!(matches!(
            parse_network(&doc(
                &format!("{a},{b}"),
                r#"{"debtor":"a","creditor":"c","liability":"1"}"#
            )),
            Err(DocumentError::UnknownBankInEdge { .. })
        ));
        assert!(matches!(
            parse_network(&doc(
                &format!("{a},{b}"),
                r#"{"debtor":"a","creditor":"b","liability":"4/0"}"#
            )),
            Err(DocumentError::BadRational { .. })
        ));
        assert!(matches!(
            parse_network("{"),
            Err(DocumentError::MalformedDocument(_))
        ));
        assert!(matches!(
            parse_network(&doc(a, r#"{"debtor":"a","creditor":"a","liability":"1"}"#)),
            Err(DocumentError::Invalid(_))
        ));
    }

    #[test]
    fn fig1_solution_document() {
        let net = fixtures::fig1();
        let sol = optimal_single_trade(&net, EdgeId(0), BankId(2), None)
            .unwrap()
            .into_found()
            .unwrap();
        let text = serialize_solution(&net, &sol);
        assert!(text.contains(r#""beta": "3/4""#));
        assert!(text.contains(r#""alpha": "1""#));
        assert!(text.contains(r#""creditor_assets": "7/2""#));
        let doc = parse_solution(&text).unwrap();
        assert_eq!(doc, SolutionDocument::new(&net, &sol));
        assert_eq!(to_json(&doc), text);
        assert!(doc.verify(&net).unwrap().is_empty());
        let mut forged = doc.clone();
        forged.creditor_assets = Some("4".into());
        assert_eq!(forged.verify(&net).unwrap().len(), 1);
    }

    #[test]
    fn f2_excess_document() {
        let net = fixtures::f2();
        let sol = optimal_multi_out_excess(&net, BankId(0), BankId(3))
            .unwrap()
            .into_found()
            .unwrap();
        let doc = SolutionDocument::new(&net, &sol);
        assert_eq!(doc.eta, Some(vec!["2".to_string(), "0".to_string()]));
        assert_eq!(doc.creditor_total.as_deref(), Some("7"));
        assert!(doc.verify(&net).unwrap().is_empty());
    }

    #[test]
    fn identity_trade_has_zero_deltas() {
        let net = fixtures::fig1();
        let pre = clearing_state(&net);
        let sol = TradeSolution {
            trade: TradeSpec::identity(EdgeId(0), BankId(2)),
            post_network: net.clone(),
            pre_state: pre.clone(),
            post_state: pre.clone(),
            creditor: Some(BankId(1)),
            objective: pre.assets[1].clone(),
            benchmark: Benchmark::CreditorPositive,
            excess: None,
            buyer_gross: None,
        };
        let doc = SolutionDocument::new(&net, &sol);
        assert!(doc.banks.iter().all(|b| b.delta == "0"));
        assert!(doc.verify(&net).unwrap().is_empty());
    }
}
