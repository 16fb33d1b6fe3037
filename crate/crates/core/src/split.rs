//! Split networks: selected banks divided into a sink and a source node.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::network::{Bank, BankId, Edge, FinancialNetwork};
use crate::rational::Rational;

/// Which side of the original bank a split-network node represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeRole {
    Whole,
    In,
    Out,
}

#[derive(Debug, Clone)]
pub struct SplitNetwork {
    base: FinancialNetwork,
    split_banks: Vec<BankId>,
    network: FinancialNetwork,
    /// Per base bank: (in-node, out-node); equal for unsplit banks.
    nodes: Vec<(BankId, BankId)>,
    /// Per split node: originating base bank and role.
    origin: Vec<(BankId, NodeRole)>,
}

/// Replaces every bank in `banks` by a sink `<name>_in`, which keeps the
/// incoming edges, and a source `<name>_out`, which keeps the outgoing
/// edges and the external assets. Edges keep their index.
pub fn build_split(net: &FinancialNetwork, banks: &[BankId]) -> Result<SplitNetwork> {
    let mut is_split = vec![false; net.num_banks()];
    for b in banks {
        net.check_bank(*b)?;
        if is_split[b.0] {
            return Err(Error::InvalidTrade(format!(
                "{} listed twice for splitting",
                net.name(*b)
            )));
        }
        is_split[b.0] = true;
    }
    let mut nodes = Vec::with_capacity(net.num_banks());
    let mut origin = Vec::new();
    let mut split_banks_out = Vec::new();
    for b in net.bank_ids() {
        let bank = net.bank(b);
        if is_split[b.0] {
            let in_node = BankId(origin.len());
            split_banks_out.push(Bank {
                name: format!("{}_in", bank.name),
                external: Rational::zero(),
            });
            origin.push((b, NodeRole::In));
            let out_node = BankId(origin.len());
            split_banks_out.push(Bank {
                name: format!("{}_out", bank.name),
                external: bank.external.clone(),
            });
            origin.push((b, NodeRole::Out));
            nodes.push((in_node, out_node));
        } else {
            let node = BankId(origin.len());
            split_banks_out.push(bank.clone());
            origin.push((b, NodeRole::Whole));
            nodes.push((node, node));
        }
    }
    let edges = net
        .edges()
        .iter()
        .map(|e| Edge {
            debtor: nodes[e.debtor.0].1,
            creditor: nodes[e.creditor.0].0,
            liability: e.liability.clone(),
        })
        .collect();
    let network = FinancialNetwork::new(split_banks_out, edges, net.delta().clone())?;
    Ok(SplitNetwork {
        base: net.clone(),
        split_banks: banks.to_vec(),
        network,
        nodes,
        origin,
    })
}

impl SplitNetwork {
    pub fn base(&self) -> &FinancialNetwork {
        &self.base
    }

    pub fn network(&self) -> &FinancialNetwork {
        &self.network
    }

    pub fn split_banks(&self) -> &[BankId] {
        &self.split_banks
    }

    /// Node receiving the bank's incoming edges.
    pub fn in_node(&self, bank: BankId) -> BankId {
        self.nodes[bank.0].0
    }

    /// Node carrying the bank's outgoing edges.
    pub fn out_node(&self, bank: BankId) -> BankId {
        self.nodes[bank.0].1
    }

    pub fn origin(&self, node: BankId) -> (BankId, NodeRole) {
        self.origin[node.0]
    }

    /// The split network with the given external assets on out-nodes.
    pub fn with_out_assets(&self, assets: &[(BankId, Rational)]) -> FinancialNetwork {
        let mut externals: Vec<Rational> = self
            .network
            .banks()
            .iter()
            .map(|b| b.external.clone())
            .collect();
        for (bank, value) in assets {
            externals[self.out_node(*bank).0] = value.clone();
        }
        self.network.with_externals(externals)
    }

    /// Fixes the external assets of a bank's out-node in place.
    pub fn set_out_external(&mut self, bank: BankId, value: Rational) {
        self.network = self.network.with_external(self.out_node(bank), value);
    }

    /// Maps a set of base banks to the split nodes that stand for them.
    pub fn nodes_of(&self, banks: impl IntoIterator<Item = BankId>) -> Vec<BankId> {
        let mut out = BTreeSet::new();
        for b in banks {
            out.insert(self.in_node(b));
            out.insert(self.out_node(b));
        }
        out.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clearing::clearing_state;
    use crate::fixtures;
    use crate::network::EdgeId;
    use crate::rational::int;

    #[test]
    fn fig1_split_of_v_and_w() {
        let net = fixtures::fig1();
        let v = BankId(1);
        let w = BankId(2);
        let split = build_split(&net, &[v, w]).unwrap();
        let s = split.network();
        let names: Vec<&str> = s.banks().iter().map(|b| b.name.as_str()).collect();
        assert_eq!(names, ["u", "v_in", "v_out", "w_in", "w_out"]);
        assert_eq!(s.edge(EdgeId(0)).debtor, BankId(0));
        assert_eq!(s.edge(EdgeId(0)).creditor, split.in_node(v));
        assert_eq!(s.edge(EdgeId(1)).debtor, split.out_node(v));
        assert_eq!(s.edge(EdgeId(1)).creditor, split.in_node(w));
        assert!(s.total_liability(split.in_node(v)).is_zero());
        assert!(s.incoming(split.out_node(v)).is_empty());
    }

    #[test]
    fn split_with_clearing_assets_reproduces_payments() {
        let net = fixtures::fig1();
        let (v, w) = (BankId(1), BankId(2));
        let state = clearing_state(&net);
        let split = build_split(&net, &[v, w]).unwrap();
        let s = split.with_out_assets(&[(v, int(2)), (w, int(5))]);
        let split_state = clearing_state(&s);
        assert_eq!(split_state.payments, state.payments);
    }

    #[test]
    fn isolated_bank_splits_into_isolated_nodes() {
        let net = FinancialNetwork::builder()
            .bank("a", int(1))
            .bank("b", int(0))
            .build()
            .unwrap();
        let split = build_split(&net, &[BankId(1)]).unwrap();
        assert_eq!(split.network().num_banks(), 3);
        assert_eq!(split.network().num_edges(), 0);
        assert!(matches!(
            build_split(&net, &[BankId(7)]),
            Err(Error::UnknownBank(_))
        ));
    }

    #[test]
    fn edge_between_split_banks_runs_out_to_in() {
        let net = FinancialNetwork::builder()
            .bank("v", int(0))
            .bank("w", int(1))
            .edge("w", "v", int(2))
            .build()
            .unwrap();
        let split = build_split(&net, &[BankId(0), BankId(1)]).unwrap();
        let e = split.network().edge(EdgeId(0));
        assert_eq!(e.debtor, split.out_node(BankId(1)));
        assert_eq!(e.creditor, split.in_node(BankId(0)));
    }
}
