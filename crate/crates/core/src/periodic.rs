//! Exact model checking over ultimately periodic models of the naturals.
//!
//! Every subformula `n` gets a pair `(P, K)` such that its truth table `T`
//! satisfies
//!
//! * `x >= P` implies `T[x,y] = T[x+per, y+per]`, and
//! * `y >= P` and `y - x >= K` imply `T[x,y] = T[x, y+per]`.
//!
//! Atoms inherit the pair from the model. Each modality derives its pair from
//! its argument's, which bounds how far witness searches for right-unbounded
//! relations have to look. Evaluation is memoized on class representatives.
//!
//! As a guard against a wrong derivation, [`mc_periodic`] evaluates again with
//! every bound widened by one period per round and requires that consecutive
//! rounds agree on every subformula over the model's canonical intervals.

use std::cell::RefCell;
use std::collections::HashMap;

use thiserror::Error;

use crate::dag::{Dag, NodeKind};
use crate::formula::Formula;
use crate::interval::{reduce_pair, Domain, Interval, Periodicity};
use crate::model::IntervalModel;
use crate::modality::{Base, Modality};

/// Which coordinates a subformula's truth depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Const,
    Full,
    /// Only the right endpoint matters (`<A>`, `<L>`).
    EndOnly,
    /// Only the left endpoint matters (`<iA>`, `<iL>`).
    StartOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeBound {
    pub p: u64,
    pub k: u64,
    pub shape: Shape,
}

/// Periodicity bounds for every node of a graph.
#[derive(Debug, Clone)]
pub struct PeriodicLayout {
    pub per: u64,
    pub bounds: Vec<NodeBound>,
}

fn join(a: Shape, b: Shape) -> Shape {
    match (a, b) {
        (Shape::Const, s) | (s, Shape::Const) => s,
        (s, t) if s == t => s,
        _ => Shape::Full,
    }
}

fn reduce1(p: u64, per: u64, v: u64) -> u64 {
    if v >= p + per {
        p + (v - p) % per
    } else {
        v
    }
}

impl PeriodicLayout {
    /// Bounds for `dag` over a model of shape `period`, widened by `round` periods.
    pub fn new(dag: &Dag, period: Periodicity, round: u64) -> Self {
        let per = period.per;
        let mut bounds: Vec<NodeBound> = Vec::with_capacity(dag.len());
        for node in &dag.nodes {
            let b = match &node.kind {
                NodeKind::Atom(_) => NodeBound { p: period.pre, k: period.stable_len, shape: Shape::Full },
                NodeKind::Const(_) => NodeBound { p: 1, k: 1, shape: Shape::Const },
                NodeKind::Not(c) => bounds[*c],
                NodeKind::And(l, r) | NodeKind::Or(l, r) => {
                    let (l, r) = (bounds[*l], bounds[*r]);
                    NodeBound { p: l.p.max(r.p), k: l.k.max(r.k), shape: join(l.shape, r.shape) }
                }
                NodeKind::Diamond(m, c) => {
                    let NodeBound { p, k, .. } = bounds[*c];
                    let (p, k, shape) = match (m.base, m.inverted) {
                        (Base::A, false) | (Base::L, false) => (p, 1, Shape::EndOnly),
                        (Base::A, true) => (p + per + k, 1, Shape::StartOnly),
                        (Base::L, true) => (p + 2 * per + k, 1, Shape::StartOnly),
                        (Base::B, false) => (p + per, k + per, Shape::Full),
                        (Base::B, true) => (p, k, Shape::Full),
                        (Base::E, false) => (p + per + k, k + per, Shape::Full),
                        (Base::E, true) => (p + per + k, k, Shape::Full),
                        (Base::D, false) => (p + 2 * per + k, k + 2 * per, Shape::Full),
                        (Base::D, true) => (p + per + k, k, Shape::Full),
                        (Base::O, _) => (p + per + k, k + per, Shape::Full),
                    };
                    NodeBound { p, k, shape }
                }
            };
            bounds.push(b);
        }
        for b in &mut bounds {
            b.p += round * per;
            b.k += round * per;
        }
        PeriodicLayout { per, bounds }
    }

    /// Memo key of `[x, y]` for node `n`; equal keys have equal truth values.
    pub fn key(&self, n: usize, x: u64, y: u64) -> (u64, u64) {
        let b = self.bounds[n];
        match b.shape {
            Shape::Const => (0, 0),
            Shape::EndOnly => (0, reduce1(b.p, self.per, y)),
            Shape::StartOnly => (reduce1(b.p, self.per, x), 0),
            Shape::Full => {
                let i = reduce_pair(b.p, b.k, self.per, x, y);
                (i.x, i.y)
            }
        }
    }

    /// A concrete interval with the given key.
    pub fn representative(&self, n: usize, key: (u64, u64)) -> (u64, u64) {
        match self.bounds[n].shape {
            Shape::Const => (0, 1),
            Shape::EndOnly => (key.1 - 1, key.1),
            Shape::StartOnly => (key.0, key.0 + 1),
            Shape::Full => key,
        }
    }

    /// Right endpoints `b` such that the intervals `[a, b]` cover every class of
    /// node `c` starting at `a`.
    pub fn right_ends(&self, c: usize, a: u64) -> std::ops::Range<u64> {
        let NodeBound { p, k, .. } = self.bounds[c];
        a + 1..(a + 1).max(p).max(a + k) + self.per
    }

    /// Left endpoints `a > y` whose classes of intervals starting at `a` cover
    /// every class of node `c` beyond `y`.
    pub fn later_starts(&self, c: usize, y: u64) -> std::ops::Range<u64> {
        y + 1..(y + 1).max(self.bounds[c].p) + self.per
    }

    /// Intervals `[a, b]` related to `[x, y]` by `m` covering every class of the
    /// argument node `c`.
    pub fn witnesses(&self, m: Modality, c: usize, x: u64, y: u64) -> Vec<(u64, u64)> {
        let NodeBound { p: pc, k: kc, .. } = self.bounds[c];
        let per = self.per;
        let ext = |a: u64, lo: u64| lo..lo.max(pc).max(a + kc) + per;
        let mut out = Vec::new();
        match (m.base, m.inverted) {
            (Base::A, false) => out.extend(ext(y, y + 1).map(|b| (y, b))),
            (Base::A, true) => out.extend((0..x).map(|a| (a, x))),
            (Base::L, false) => {
                for a in y + 1..(y + 1).max(pc) + per {
                    out.extend(ext(a, a + 1).map(|b| (a, b)));
                }
            }
            (Base::L, true) => {
                for b in 1..x {
                    out.extend((0..b).map(|a| (a, b)));
                }
            }
            (Base::B, false) => out.extend((x + 1..y).map(|b| (x, b))),
            (Base::B, true) => out.extend(ext(x, y + 1).map(|b| (x, b))),
            (Base::E, false) => out.extend((x + 1..y).map(|a| (a, y))),
            (Base::E, true) => out.extend((0..x).map(|a| (a, y))),
            (Base::D, false) => {
                for a in x + 1..y {
                    out.extend((a + 1..y).map(|b| (a, b)));
                }
            }
            (Base::D, true) => {
                for a in 0..x {
                    out.extend(ext(a, y + 1).map(|b| (a, b)));
                }
            }
            (Base::O, false) => {
                for a in x + 1..y {
                    out.extend(ext(a, y + 1).map(|b| (a, b)));
                }
            }
            (Base::O, true) => {
                for a in 0..x {
                    out.extend((x + 1..y).map(|b| (a, b)));
                }
            }
        }
        out
    }
}

/// Memoized evaluator for one widening round.
pub struct PeriodicEvaluator<'m> {
    model: &'m IntervalModel,
    dag: Dag,
    layout: PeriodicLayout,
    memo: RefCell<HashMap<(usize, u64, u64), bool>>,
}

impl<'m> PeriodicEvaluator<'m> {
    /// Panics if the model is not over an ultimately periodic domain.
    pub fn new(model: &'m IntervalModel, phi: &Formula, round: u64) -> Self {
        Self::from_dag(model, Dag::compile(phi), round)
    }

    pub fn from_dag(model: &'m IntervalModel, dag: Dag, round: u64) -> Self {
        let Domain::UltimatelyPeriodic(period) = model.domain else {
            panic!("periodic evaluation needs an ultimately periodic domain");
        };
        let layout = PeriodicLayout::new(&dag, period, round);
        PeriodicEvaluator { model, dag, layout, memo: RefCell::new(HashMap::new()) }
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn holds(&self, i: Interval) -> bool {
        self.node(self.dag.root, i.x, i.y)
    }

    pub fn node(&self, n: usize, x: u64, y: u64) -> bool {
        let key = self.layout.key(n, x, y);
        if let Some(&v) = self.memo.borrow().get(&(n, key.0, key.1)) {
            return v;
        }
        let (x, y) = self.layout.representative(n, key);
        let v = match &self.dag.nodes[n].kind {
            NodeKind::Atom(p) => self.model.holds_atom(p, Interval::new(x, y)),
            NodeKind::Const(b) => *b,
            NodeKind::Not(c) => !self.node(*c, x, y),
            NodeKind::And(l, r) => self.node(*l, x, y) && self.node(*r, x, y),
            NodeKind::Or(l, r) => self.node(*l, x, y) || self.node(*r, x, y),
            NodeKind::Diamond(m, c) => {
                self.layout.witnesses(*m, *c, x, y).into_iter().any(|(a, b)| self.node(*c, a, b))
            }
        };
        self.memo.borrow_mut().insert((n, key.0, key.1), v);
        v
    }
}

/// Two widening rounds disagreed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("evaluation did not stabilize: `{subformula}` differs at {cell}")]
pub struct NotStabilized {
    pub subformula: Formula,
    pub cell: Interval,
}

/// Truth of `phi` at `i` in an ultimately periodic model.
///
/// Rounds `0..max_rounds` are evaluated until two consecutive ones agree on every
/// subformula and canonical interval; fewer than two rounds cannot agree.
pub fn mc_periodic(
    model: &IntervalModel,
    i: Interval,
    phi: &Formula,
    max_rounds: usize,
) -> Result<bool, NotStabilized> {
    let Domain::UltimatelyPeriodic(period) = model.domain else {
        panic!("periodic evaluation needs an ultimately periodic domain");
    };
    let dag = Dag::compile(phi);
    let cells = period.canonical_intervals();
    let mut prev = PeriodicEvaluator::from_dag(model, dag.clone(), 0);
    let mut disagreement = NotStabilized { subformula: phi.clone(), cell: i };
    for round in 1..max_rounds as u64 {
        let cur = PeriodicEvaluator::from_dag(model, dag.clone(), round);
        let mismatch = (0..dag.len())
            .flat_map(|n| cells.iter().chain(std::iter::once(&i)).map(move |c| (n, *c)))
            .find(|&(n, c)| prev.node(n, c.x, c.y) != cur.node(n, c.x, c.y));
        match mismatch {
            None => return Ok(cur.holds(i)),
            Some((n, c)) => {
                disagreement = NotStabilized { subformula: dag.nodes[n].formula.clone(), cell: c };
            }
        }
        prev = cur;
    }
    Err(disagreement)
}

/// Default number of rounds: modal depth plus two.
pub fn default_rounds(phi: &Formula) -> usize {
    phi.modal_depth() + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_model;
    use crate::parser::parse_formula;

    fn mc(m: &IntervalModel, x: u64, y: u64, f: &str) -> bool {
        let f = parse_formula(f).unwrap();
        mc_periodic(m, Interval::new(x, y), &f, default_rounds(&f)).unwrap()
    }

    #[test]
    fn everywhere_true_letter() {
        let mut m = IntervalModel::new(Domain::periodic(1, 1).unwrap());
        for c in Periodicity::new(1, 1).canonical_intervals() {
            m.insert("p", c).unwrap();
        }
        assert!(mc(&m, 0, 1, "[A] <A> p"));
        assert!(mc(&m, 5, 17, "[iB] p & [L] p"));
    }

    #[test]
    fn single_interval_prefix() {
        let m = load_model("order periodic pre=2 per=1\nval p 0 1").unwrap();
        assert!(!mc(&m, 1, 2, "<iL> p"));
        assert!(mc(&m, 2, 3, "<iL> p"));
        assert!(!mc(&m, 0, 1, "<L> p"));
        assert!(mc(&m, 0, 5, "<B> p"));
        assert!(!mc(&m, 1, 5, "<B> p"));
    }

    #[test]
    fn future_boxes_are_not_truncated() {
        // every interval has a proper right extension over the naturals
        let m = load_model("order periodic pre=1 per=1").unwrap();
        assert!(!mc(&m, 0, 1, "<L> [iB] false"));
        assert!(mc(&m, 0, 1, "[L] <iB> true"));
    }

    #[test]
    fn too_few_rounds() {
        let m = load_model("order periodic pre=1 per=1").unwrap();
        let f = parse_formula("p").unwrap();
        assert!(mc_periodic(&m, Interval::new(0, 1), &f, 1).is_err());
    }
}
