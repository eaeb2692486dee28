//! Hash-consed formula graphs in the core connectives.

use std::collections::HashMap;

use crate::formula::Formula;
use crate::modality::Modality;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Atom(String),
    Const(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Diamond(Modality, usize),
}

#[derive(Debug, Clone)]
pub struct Node {
    pub kind: NodeKind,
    /// Source subformula the node was first built from, for diagnostics.
    pub formula: Formula,
}

/// Nodes are stored children first, so index order is a topological order.
#[derive(Debug, Clone)]
pub struct Dag {
    pub nodes: Vec<Node>,
    pub root: usize,
    index: HashMap<NodeKind, usize>,
}

impl Dag {
    pub fn compile(phi: &Formula) -> Dag {
        let mut dag = Dag { nodes: Vec::new(), root: 0, index: HashMap::new() };
        dag.root = dag.add(phi);
        dag
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, kind: NodeKind, formula: &Formula) -> usize {
        if let Some(&i) = self.index.get(&kind) {
            return i;
        }
        self.nodes.push(Node { kind: kind.clone(), formula: formula.clone() });
        self.index.insert(kind, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn not(&mut self, child: usize, formula: &Formula) -> usize {
        if let NodeKind::Not(inner) = self.nodes[child].kind {
            return inner;
        }
        if let NodeKind::Const(b) = self.nodes[child].kind {
            return self.intern(NodeKind::Const(!b), formula);
        }
        self.intern(NodeKind::Not(child), formula)
    }

    fn add(&mut self, phi: &Formula) -> usize {
        match phi {
            Formula::Atom(p) => self.intern(NodeKind::Atom(p.clone()), phi),
            Formula::True => self.intern(NodeKind::Const(true), phi),
            Formula::False => self.intern(NodeKind::Const(false), phi),
            Formula::Not(a) => {
                let c = self.add(a);
                self.not(c, phi)
            }
            Formula::And(l, r) => {
                let (l, r) = (self.add(l), self.add(r));
                self.intern(NodeKind::And(l, r), phi)
            }
            Formula::Or(l, r) => {
                let (l, r) = (self.add(l), self.add(r));
                self.intern(NodeKind::Or(l, r), phi)
            }
            Formula::Implies(l, r) => {
                let (l, r) = (self.add(l), self.add(r));
                let nl = self.not(l, phi);
                self.intern(NodeKind::Or(nl, r), phi)
            }
            Formula::Diamond(m, a) => {
                let c = self.add(a);
                self.intern(NodeKind::Diamond(*m, c), phi)
            }
            Formula::Box(m, a) => {
                let c = self.add(a);
                let nc = self.not(c, phi);
                let d = self.intern(NodeKind::Diamond(*m, nc), phi);
                self.not(d, phi)
            }
        }
    }
}
