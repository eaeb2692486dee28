//! Satisfiability: a complete procedure for the B iB L iL fragment over the
//! naturals, bounded finite-model search for any fragment, and certificate
//! checking.
//!
//! Both searches translate "the formula holds somewhere in a model of this
//! shape" into CNF. Proposition letters become one variable per class of
//! intervals; subformulas get Tseitin variables created on demand for the
//! intervals the translation reaches.

use std::collections::HashMap;

use crate::closure::metrics;
use crate::dag::{Dag, NodeKind};
use crate::error::SatError;
use crate::finite::{self, FiniteEvaluator};
use crate::formula::Formula;
use crate::interval::{Domain, Interval, Periodicity};
use crate::model::IntervalModel;
use crate::modality::Modality;
use crate::periodic::{default_rounds, mc_periodic, PeriodicEvaluator, PeriodicLayout};
use crate::solver::{Lit, Solver};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat { model: IntervalModel, witness: Interval },
    Unsat,
    Unknown(String),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat { .. })
    }
}

/// `<L> <iL> phi`: satisfiable anywhere iff this holds at `[0,1]`.
pub fn tau(phi: &Formula) -> Formula {
    Formula::diamond(Modality::L, Formula::diamond(Modality::IL, phi.clone()))
}

const BBLL: [Modality; 4] = [Modality::B, Modality::IB, Modality::L, Modality::IL];

/// Letter variables in lexicographic order: letters sorted, then intervals by `(x, y)`.
struct Letters {
    names: Vec<String>,
    vars: Vec<(usize, Interval, Lit)>,
    index: HashMap<(usize, Interval), Lit>,
}

impl Letters {
    fn new(solver: &mut Solver, names: Vec<String>, cells: &[Interval]) -> Self {
        let mut vars = Vec::new();
        let mut index = HashMap::new();
        for (k, _) in names.iter().enumerate() {
            for &c in cells {
                let v = solver.new_var();
                vars.push((k, c, v));
                index.insert((k, c), v);
            }
        }
        Letters { names, vars, index }
    }

    fn get(&self, letter: &str, i: Interval) -> Lit {
        let k = self.names.iter().position(|n| n == letter).expect("letter of the formula");
        self.index[&(k, i)]
    }

    /// Fixes letter variables to false one at a time, where still satisfiable,
    /// giving the least valuation in variable order. The solver must be in a
    /// satisfiable state on entry.
    fn minimize(&self, solver: &mut Solver) -> Vec<bool> {
        let mut assumptions = Vec::with_capacity(self.vars.len());
        let mut model: Vec<bool> = self.vars.iter().map(|v| solver.model_value(v.2)).collect();
        for (k, &(_, _, v)) in self.vars.iter().enumerate() {
            if !model[k] {
                assumptions.push(!v);
                continue;
            }
            assumptions.push(!v);
            if solver.solve(&assumptions) {
                model = self.vars.iter().map(|v| solver.model_value(v.2)).collect();
            } else {
                assumptions.pop();
                assumptions.push(v);
            }
        }
        let ok = solver.solve(&assumptions);
        debug_assert!(ok);
        self.vars.iter().map(|v| solver.model_value(v.2)).collect()
    }

    fn fill(&self, values: &[bool], model: &mut IntervalModel) {
        for (&(k, i, _), &b) in self.vars.iter().zip(values) {
            if b {
                model.insert(&self.names[k], i).expect("cell within the domain");
            }
        }
    }
}

/// Tseitin translation over a [`Shape`], memoized on class keys.
struct Tseitin<'a> {
    dag: &'a Dag,
    solver: Solver,
    truth: Lit,
    cache: HashMap<(usize, u64, u64), Lit>,
    /// "some interval of node `c` starts at `a`" variables.
    starts: HashMap<(usize, u64), Lit>,
    /// "some interval of node `c` ends at `b`" variables.
    ends: HashMap<(usize, u64), Lit>,
}

/// How intervals are grouped into classes and where witnesses are searched.
trait Shape {
    fn key(&self, n: usize, x: u64, y: u64) -> (u64, u64);
    fn representative(&self, n: usize, key: (u64, u64)) -> (u64, u64);
    fn witnesses(&self, m: Modality, c: usize, x: u64, y: u64) -> Vec<(u64, u64)>;
    fn atom(&self, letters: &Letters, p: &str, x: u64, y: u64) -> Lit;
    /// Right endpoints covering all intervals of node `c` starting at `a`.
    fn right_ends(&self, c: usize, a: u64) -> std::ops::Range<u64>;
    /// Start points covering all intervals of node `c` starting after `y`.
    fn later_starts(&self, c: usize, y: u64) -> std::ops::Range<u64>;
}

struct PeriodicShape {
    layout: PeriodicLayout,
    period: Periodicity,
}

impl Shape for PeriodicShape {
    fn key(&self, n: usize, x: u64, y: u64) -> (u64, u64) {
        self.layout.key(n, x, y)
    }
    fn representative(&self, n: usize, key: (u64, u64)) -> (u64, u64) {
        self.layout.representative(n, key)
    }
    fn witnesses(&self, m: Modality, c: usize, x: u64, y: u64) -> Vec<(u64, u64)> {
        self.layout.witnesses(m, c, x, y)
    }
    fn atom(&self, letters: &Letters, p: &str, x: u64, y: u64) -> Lit {
        letters.get(p, self.period.reduce(Interval::new(x, y)))
    }
    fn right_ends(&self, c: usize, a: u64) -> std::ops::Range<u64> {
        self.layout.right_ends(c, a)
    }
    fn later_starts(&self, c: usize, y: u64) -> std::ops::Range<u64> {
        self.layout.later_starts(c, y)
    }
}

struct FiniteShape {
    n: u64,
}

impl Shape for FiniteShape {
    fn key(&self, _: usize, x: u64, y: u64) -> (u64, u64) {
        (x, y)
    }
    fn representative(&self, _: usize, key: (u64, u64)) -> (u64, u64) {
        key
    }
    fn witnesses(&self, m: Modality, _: usize, x: u64, y: u64) -> Vec<(u64, u64)> {
        finite::related(self.n, Interval::new(x, y), m).map(|j| (j.x, j.y)).collect()
    }
    fn atom(&self, letters: &Letters, p: &str, x: u64, y: u64) -> Lit {
        letters.get(p, Interval::new(x, y))
    }
    fn right_ends(&self, _: usize, a: u64) -> std::ops::Range<u64> {
        a + 1..self.n + 1
    }
    fn later_starts(&self, _: usize, y: u64) -> std::ops::Range<u64> {
        y + 1..self.n
    }
}

impl<'a> Tseitin<'a> {
    fn new(dag: &'a Dag, mut solver: Solver) -> Self {
        let truth = solver.new_var();
        solver.add_clause(&[truth]);
        Tseitin { dag, solver, truth, cache: HashMap::new(), starts: HashMap::new(), ends: HashMap::new() }
    }

    fn lit(&mut self, shape: &dyn Shape, letters: &Letters, n: usize, x: u64, y: u64) -> Lit {
        let key = shape.key(n, x, y);
        if let Some(&l) = self.cache.get(&(n, key.0, key.1)) {
            return l;
        }
        let (x, y) = shape.representative(n, key);
        let l = match &self.dag.nodes[n].kind {
            NodeKind::Atom(p) => shape.atom(letters, p, x, y),
            NodeKind::Const(b) => {
                if *b {
                    self.truth
                } else {
                    !self.truth
                }
            }
            NodeKind::Not(c) => !self.lit(shape, letters, *c, x, y),
            NodeKind::And(a, b) => {
                let (a, b) = (self.lit(shape, letters, *a, x, y), self.lit(shape, letters, *b, x, y));
                let v = self.solver.new_var();
                self.solver.add_clause(&[!v, a]);
                self.solver.add_clause(&[!v, b]);
                self.solver.add_clause(&[v, !a, !b]);
                v
            }
            NodeKind::Or(a, b) => {
                let (a, b) = (self.lit(shape, letters, *a, x, y), self.lit(shape, letters, *b, x, y));
                let v = self.solver.new_var();
                self.solver.add_clause(&[v, !a]);
                self.solver.add_clause(&[v, !b]);
                self.solver.add_clause(&[!v, a, b]);
                v
            }
            NodeKind::Diamond(m, c) if *m == Modality::L => {
                let lits: Vec<Lit> =
                    shape.later_starts(*c, y).map(|a| self.starts_at(shape, letters, *c, a)).collect();
                self.any(lits)
            }
            NodeKind::Diamond(m, c) if *m == Modality::IL => {
                // intervals ending before x: those ending before x-1, or at x-1
                let mut lits = Vec::new();
                if x >= 2 {
                    lits.push(self.lit(shape, letters, n, x - 1, x));
                    lits.push(self.ends_at(letters, *c, x - 1, shape));
                }
                self.any(lits)
            }
            // chains through the one-point-shorter interval; lengths strictly
            // decrease, so the definitions stay acyclic under class reduction
            NodeKind::Diamond(m, c) if *m == Modality::B => {
                let mut lits = Vec::new();
                if y - x >= 2 {
                    lits.push(self.lit(shape, letters, n, x, y - 1));
                    lits.push(self.lit(shape, letters, *c, x, y - 1));
                }
                self.any(lits)
            }
            NodeKind::Diamond(m, c) if *m == Modality::E => {
                let mut lits = Vec::new();
                if y - x >= 2 {
                    lits.push(self.lit(shape, letters, n, x + 1, y));
                    lits.push(self.lit(shape, letters, *c, x + 1, y));
                }
                self.any(lits)
            }
            NodeKind::Diamond(m, c) => {
                let ws = shape.witnesses(*m, *c, x, y);
                let lits: Vec<Lit> = ws.into_iter().map(|(a, b)| self.lit(shape, letters, *c, a, b)).collect();
                self.any(lits)
            }
        };
        self.cache.insert((n, key.0, key.1), l);
        l
    }

    /// A variable equivalent to the disjunction of `lits`.
    fn any(&mut self, mut lits: Vec<Lit>) -> Lit {
        lits.sort_unstable();
        lits.dedup();
        match lits.len() {
            0 => !self.truth,
            1 => lits[0],
            _ => {
                let v = self.solver.new_var();
                let mut big = vec![!v];
                for &w in &lits {
                    self.solver.add_clause(&[v, !w]);
                    big.push(w);
                }
                self.solver.add_clause(&big);
                v
            }
        }
    }

    fn starts_at(&mut self, shape: &dyn Shape, letters: &Letters, c: usize, a: u64) -> Lit {
        if let Some(&l) = self.starts.get(&(c, a)) {
            return l;
        }
        let lits: Vec<Lit> = shape.right_ends(c, a).map(|b| self.lit(shape, letters, c, a, b)).collect();
        let l = self.any(lits);
        self.starts.insert((c, a), l);
        l
    }

    fn ends_at(&mut self, letters: &Letters, c: usize, b: u64, shape: &dyn Shape) -> Lit {
        if let Some(&l) = self.ends.get(&(c, b)) {
            return l;
        }
        let lits: Vec<Lit> = (0..b).map(|a| self.lit(shape, letters, c, a, b)).collect();
        let l = self.any(lits);
        self.ends.insert((c, b), l);
        l
    }
}

/// One interval per class of node `n`, ordered by `(x, y)`.
fn classes(layout: &PeriodicLayout, n: usize) -> Vec<(u64, u64)> {
    let b = layout.bounds[n];
    let top = b.p + layout.per;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for x in 0..top {
        for y in x + 1..top.max(x + b.k + layout.per) {
            if seen.insert(layout.key(n, x, y)) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Least valuation (in variable order) of a model with the given shape in
/// which `phi` holds somewhere, which is `tau(phi)` holding at `[0,1]`.
///
/// Each class of `phi` is first tried on its own under an assumption: classes
/// where `phi` is locally contradictory are then refuted by propagation alone,
/// instead of by a search over all other candidates.
fn solve_periodic(dag: &Dag, letters: &[String], period: Periodicity) -> Option<IntervalModel> {
    let mut solver = Solver::new();
    let cells = period.canonical_intervals();
    let vars = Letters::new(&mut solver, letters.to_vec(), &cells);
    let shape = PeriodicShape { layout: PeriodicLayout::new(dag, period, 0), period };
    let mut t = Tseitin::new(dag, solver);
    let candidates: Vec<Lit> = classes(&shape.layout, dag.root)
        .into_iter()
        .map(|(x, y)| t.lit(&shape, &vars, dag.root, x, y))
        .collect();
    if !candidates.iter().any(|&l| t.solver.solve(&[l])) {
        return None;
    }
    t.solver.add_clause(&candidates);
    let ok = t.solver.solve(&[]);
    debug_assert!(ok);
    let values = vars.minimize(&mut t.solver);
    let mut model = IntervalModel::new(Domain::UltimatelyPeriodic(period));
    vars.fill(&values, &mut model);
    Some(model)
}

/// Least interval (by `(x, y)`) where `phi` holds, if any.
fn periodic_witness(model: &IntervalModel, phi: &Formula) -> Option<Interval> {
    let Domain::UltimatelyPeriodic(period) = model.domain else { return None };
    let dag = Dag::compile(phi);
    let b = PeriodicLayout::new(&dag, period, 0).bounds[dag.root];
    let eval = PeriodicEvaluator::from_dag(model, dag, 0);
    let top = b.p + period.per;
    (0..top)
        .flat_map(|x| (x + 1..top.max(x + b.k + period.per)).map(move |y| Interval::new(x, y)))
        .find(|&i| eval.holds(i))
}

/// Decides satisfiability over the naturals of a formula in the B iB L iL fragment.
///
/// Candidate shapes `(pre, per)` are tried by ascending `pre + per`, then `pre`,
/// and the least valuation of the first satisfiable shape is returned together
/// with the least interval satisfying `phi`. Every model with shape
/// `(pre, per)` also has shape `(pre + 1, per)`, so when no shape at the top
/// level of the bound is satisfiable the formula is unsatisfiable; that level is
/// checked early to cut the search short.
pub fn sat_bbll(phi: &Formula) -> Result<SatResult, SatError> {
    if let Some(m) = phi.fragment().iter().find(|m| !BBLL.contains(m)) {
        return Err(SatError::OutsideFragment(m));
    }
    let dag = Dag::compile(phi);
    let letters: Vec<String> = phi.letters().into_iter().collect();
    let bound = metrics(&tau(phi)).periodic_bound as u64;
    let attempt = |n: u64, pre: u64| -> Option<SatResult> {
        let model = solve_periodic(&dag, &letters, Periodicity::new(pre, n - pre))?;
        let witness = periodic_witness(&model, phi).expect("tau holds, so phi holds somewhere");
        Some(SatResult::Sat { model, witness })
    };
    let eager = bound.min(8);
    for n in 2..=eager {
        for pre in 1..n {
            if let Some(r) = attempt(n, pre) {
                return Ok(r);
            }
        }
    }
    if bound > eager {
        let top_sat = (1..bound).any(|per| solve_periodic(&dag, &letters, Periodicity::new(bound - per, per)).is_some());
        if !top_sat {
            return Ok(SatResult::Unsat);
        }
        for n in eager + 1..=bound {
            for pre in 1..n {
                if let Some(r) = attempt(n, pre) {
                    return Ok(r);
                }
            }
        }
    }
    Ok(SatResult::Unsat)
}

/// Searches finite models with at most `max_points` as largest point, smallest
/// first. Never answers `Unsat`.
pub fn sat_bounded_finite(phi: &Formula, max_points: u64) -> SatResult {
    let dag = Dag::compile(phi);
    let letters: Vec<String> = phi.letters().into_iter().collect();
    for n in 1..=max_points {
        let cells: Vec<Interval> = (0..n).flat_map(|x| (x + 1..=n).map(move |y| Interval::new(x, y))).collect();
        let mut solver = Solver::new();
        let vars = Letters::new(&mut solver, letters.clone(), &cells);
        let shape = FiniteShape { n };
        let mut t = Tseitin::new(&dag, solver);
        let roots: Vec<Lit> = cells.iter().map(|i| t.lit(&shape, &vars, dag.root, i.x, i.y)).collect();
        t.solver.add_clause(&roots);
        if !t.solver.solve(&[]) {
            continue;
        }
        let values = vars.minimize(&mut t.solver);
        let mut model = IntervalModel::new(Domain::Finite { max_point: n });
        vars.fill(&values, &mut model);
        let witness = FiniteEvaluator::new(&model, phi).satisfying()[0];
        return SatResult::Sat { model, witness };
    }
    SatResult::Unknown("bound exhausted".into())
}

/// Re-evaluates `phi` at `witness` with the model checker for the model's domain.
pub fn check_certificate(phi: &Formula, model: &IntervalModel, witness: Interval) -> bool {
    if !model.domain.contains(witness) {
        return false;
    }
    match model.domain {
        Domain::Finite { .. } => finite::mc_finite(model, witness, phi),
        Domain::UltimatelyPeriodic(_) => mc_periodic(model, witness, phi, default_rounds(phi)).unwrap_or(false),
    }
}
