//! Exact model checking over finite domains.

use crate::dag::{Dag, NodeKind};
use crate::formula::Formula;
use crate::interval::{Domain, Interval};
use crate::model::IntervalModel;
use crate::modality::Modality;

/// Truth tables of every subformula over every interval of a finite model.
pub struct FiniteEvaluator {
    dag: Dag,
    n: u64,
    tables: Vec<Vec<bool>>,
}

impl FiniteEvaluator {
    /// Panics if the model is not over a finite domain.
    pub fn new(model: &IntervalModel, phi: &Formula) -> Self {
        let Domain::Finite { max_point: n } = model.domain else {
            panic!("finite evaluation needs a finite domain");
        };
        let dag = Dag::compile(phi);
        let side = (n + 1) as usize;
        let idx = |x: u64, y: u64| x as usize * side + y as usize;
        let intervals: Vec<Interval> =
            (0..n).flat_map(|x| (x + 1..=n).map(move |y| Interval::new(x, y))).collect();
        let mut tables: Vec<Vec<bool>> = Vec::with_capacity(dag.len());
        for node in &dag.nodes {
            let mut t = vec![false; side * side];
            for &i in &intervals {
                let k = idx(i.x, i.y);
                t[k] = match &node.kind {
                    NodeKind::Atom(p) => model.holds_atom(p, i),
                    NodeKind::Const(b) => *b,
                    NodeKind::Not(c) => !tables[*c][k],
                    NodeKind::And(l, r) => tables[*l][k] && tables[*r][k],
                    NodeKind::Or(l, r) => tables[*l][k] || tables[*r][k],
                    NodeKind::Diamond(m, c) => {
                        related(n, i, *m).any(|j| tables[*c][idx(j.x, j.y)])
                    }
                };
            }
            tables.push(t);
        }
        FiniteEvaluator { dag, n, tables }
    }

    pub fn holds(&self, i: Interval) -> bool {
        assert!(i.y <= self.n, "interval {i} outside the domain");
        self.tables[self.dag.root][i.x as usize * (self.n as usize + 1) + i.y as usize]
    }

    /// Intervals satisfying the formula, ordered by `(x, y)`.
    pub fn satisfying(&self) -> Vec<Interval> {
        (0..self.n)
            .flat_map(|x| (x + 1..=self.n).map(move |y| Interval::new(x, y)))
            .filter(|&i| self.holds(i))
            .collect()
    }
}

/// Intervals of `[0, n]` related to `i` by `m`.
pub(crate) fn related(n: u64, i: Interval, m: Modality) -> impl Iterator<Item = Interval> {
    (0..n).flat_map(move |x| {
        (x + 1..=n).filter_map(move |y| {
            let j = Interval::new(x, y);
            i.related(m, &j).then_some(j)
        })
    })
}

/// Truth of `phi` at `i` in a finite model.
pub fn mc_finite(model: &IntervalModel, i: Interval, phi: &Formula) -> bool {
    FiniteEvaluator::new(model, phi).holds(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_model;
    use crate::parser::parse_formula;

    fn mc(m: &IntervalModel, x: u64, y: u64, f: &str) -> bool {
        mc_finite(m, Interval::new(x, y), &parse_formula(f).unwrap())
    }

    #[test]
    fn basic_examples() {
        let m = load_model("order finite 3\nval p 0 1").unwrap();
        assert!(mc(&m, 0, 2, "<B> p"));
        assert!(!mc(&m, 0, 1, "<L> p"));
        assert!(mc(&m, 2, 3, "<iL> p"));
        assert!(mc(&m, 1, 3, "p | ~p"));
        assert!(mc(&m, 0, 3, "[B] (p | <B> p)"));
        assert!(!mc(&m, 0, 3, "[E] p"));
    }

    #[test]
    fn satisfying_set() {
        let m = load_model("order finite 2\nval p 1 2").unwrap();
        let e = FiniteEvaluator::new(&m, &parse_formula("<A> p").unwrap());
        assert_eq!(e.satisfying(), vec![Interval::new(0, 1)]);
    }
}
