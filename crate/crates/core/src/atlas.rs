//! Bisimulations, definability between fragments, and the classification of the
//! fragments built from A, iA, B, iB, E, iE, L and iL.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::AtlasError;
use crate::finite::{related, FiniteEvaluator};
use crate::formula::Formula;
use crate::interval::{Domain, Interval};
use crate::model::IntervalModel;
use crate::modality::{Fragment, Modality};
use crate::sat::{sat_bounded_finite, SatResult};

/// Pairs of intervals of a left and a right finite model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BisimRelation {
    pub pairs: BTreeSet<(Interval, Interval)>,
}

impl BisimRelation {
    pub fn new<I: IntoIterator<Item = (Interval, Interval)>>(pairs: I) -> Self {
        BisimRelation { pairs: pairs.into_iter().collect() }
    }

    pub fn contains(&self, i: Interval, j: Interval) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn max_point(m: &IntervalModel) -> u64 {
    match m.domain {
        Domain::Finite { max_point } => max_point,
        Domain::UltimatelyPeriodic(_) => panic!("bisimulations are checked on finite models"),
    }
}

fn intervals(n: u64) -> impl Iterator<Item = Interval> {
    (0..n).flat_map(move |x| (x + 1..=n).map(move |y| Interval::new(x, y)))
}

fn same_atoms(m: &IntervalModel, i: Interval, m2: &IntervalModel, j: Interval) -> bool {
    m.letters().chain(m2.letters()).all(|p| m.holds_atom(p, i) == m2.holds_atom(p, j))
}

/// Forth and back for one pair, against `z`.
fn zig_zag(
    m: &IntervalModel,
    m2: &IntervalModel,
    z: &BTreeSet<(Interval, Interval)>,
    f: &Fragment,
    i: Interval,
    j: Interval,
) -> bool {
    let (n, n2) = (max_point(m), max_point(m2));
    f.iter().all(|x| {
        let forth = related(n, i, x).all(|i2| related(n2, j, x).any(|j2| z.contains(&(i2, j2))));
        let back = related(n2, j, x).all(|j2| related(n, i, x).any(|i2| z.contains(&(i2, j2))));
        forth && back
    })
}

/// Whether `z` is an `f`-bisimulation between two finite models.
pub fn is_f_bisimulation(m: &IntervalModel, m2: &IntervalModel, z: &BisimRelation, f: &Fragment) -> bool {
    let (n, n2) = (max_point(m), max_point(m2));
    z.pairs.iter().all(|&(i, j)| {
        i.y <= n && j.y <= n2 && same_atoms(m, i, m2, j) && zig_zag(m, m2, &z.pairs, f, i, j)
    })
}

/// The greatest `f`-bisimulation, by refinement from all atom-agreeing pairs.
pub fn largest_f_bisimulation(m: &IntervalModel, m2: &IntervalModel, f: &Fragment) -> BisimRelation {
    let (n, n2) = (max_point(m), max_point(m2));
    let mut z: BTreeSet<(Interval, Interval)> = intervals(n)
        .flat_map(|i| intervals(n2).map(move |j| (i, j)))
        .filter(|&(i, j)| same_atoms(m, i, m2, j))
        .collect();
    loop {
        let dead: Vec<_> = z.iter().copied().filter(|&(i, j)| !zig_zag(m, m2, &z, f, i, j)).collect();
        if dead.is_empty() {
            return BisimRelation { pairs: z };
        }
        for pair in dead {
            z.remove(&pair);
        }
    }
}

/// Machine check that `<x>` is not definable in `f`: the two intervals are
/// `f`-bisimilar but disagree on `<x> letter`.
pub fn certify_undefinability(
    x: Modality,
    f: &Fragment,
    m: &IntervalModel,
    m2: &IntervalModel,
    i: Interval,
    i2: Interval,
    letter: &str,
) -> bool {
    let (n, n2) = (max_point(m), max_point(m2));
    if i.y > n || i2.y > n2 {
        return false;
    }
    let phi = Formula::diamond(x, Formula::atom(letter));
    largest_f_bisimulation(m, m2, f).contains(i, i2)
        && FiniteEvaluator::new(m, &phi).holds(i)
        && !FiniteEvaluator::new(m2, &phi).holds(i2)
}

/// A shipped pair of models separating `<modality>` from `fragment`.
#[derive(Debug, Clone)]
pub struct UndefinabilityWitness {
    pub modality: Modality,
    pub fragment: Fragment,
    pub left: IntervalModel,
    pub right: IntervalModel,
    pub left_at: Interval,
    pub right_at: Interval,
    pub letter: String,
}

impl UndefinabilityWitness {
    pub fn certify(&self) -> bool {
        certify_undefinability(
            self.modality,
            &self.fragment,
            &self.left,
            &self.right,
            self.left_at,
            self.right_at,
            &self.letter,
        )
    }
}

fn witness(x: Modality, f: &[Modality], n: u64, p_at: Interval) -> UndefinabilityWitness {
    let domain = Domain::finite(n).expect("at least two points");
    let mut left = IntervalModel::new(domain);
    left.insert("p", p_at).expect("inside the domain");
    let right = IntervalModel::new(domain);
    UndefinabilityWitness {
        modality: x,
        fragment: Fragment::new(f.iter().copied()),
        left,
        right,
        left_at: Interval::new(0, 1),
        right_at: Interval::new(0, 1),
        letter: "p".into(),
    }
}

/// Witnesses for `<L>` against `B iB` and `<A>` against `B iB L iL`.
///
/// In both, `p` sits only where the target relation reaches from `[0,1]` and the
/// fragment cannot look.
pub fn witness_library() -> Vec<UndefinabilityWitness> {
    use Modality as M;
    vec![
        witness(M::L, &[M::B, M::IB], 4, Interval::new(3, 4)),
        witness(M::A, &[M::B, M::IB, M::L, M::IL], 2, Interval::new(1, 2)),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquationResult {
    NoCountermodel,
    Countermodel { model: IntervalModel, witness: Interval },
}

/// Searches finite models up to `max_points` for an interval where
/// `<x> letter` and `template` differ.
pub fn check_equation(x: Modality, letter: &str, template: &Formula, max_points: u64) -> EquationResult {
    let lhs = Formula::diamond(x, Formula::atom(letter));
    let differ = Formula::not(Formula::iff(lhs, template.clone()));
    match sat_bounded_finite(&differ, max_points) {
        SatResult::Sat { model, witness } => EquationResult::Countermodel { model, witness },
        _ => EquationResult::NoCountermodel,
    }
}

/// Closes a fragment under the known definability equations.
pub fn definable_closure(f: &Fragment) -> Fragment {
    use Modality as M;
    let rules: [(&[Modality], Modality); 6] = [
        (&[M::A], M::L),
        (&[M::IA], M::IL),
        (&[M::B, M::E], M::D),
        (&[M::B, M::IE], M::IO),
        (&[M::E, M::IB], M::O),
        (&[M::IB, M::IE], M::ID),
    ];
    let mut out = f.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for (premise, m) in &rules {
            if premise.iter().all(|p| out.contains(*p)) {
                changed |= out.insert(*m);
            }
        }
    }
    out
}

const FAMILY_B: [Modality; 6] = [Modality::A, Modality::IA, Modality::B, Modality::IB, Modality::L, Modality::IL];
const FAMILY_E: [Modality; 6] = [Modality::A, Modality::IA, Modality::E, Modality::IE, Modality::L, Modality::IL];

/// Inside one of the two families where the closure rules are complete.
pub fn in_universe(f: &Fragment) -> bool {
    f.iter().all(|m| FAMILY_B.contains(&m)) || f.iter().all(|m| FAMILY_E.contains(&m))
}

fn check_universe(f: &Fragment) -> Result<(), AtlasError> {
    if in_universe(f) {
        Ok(())
    } else {
        Err(AtlasError::OutOfUniverse(f.compact_name()))
    }
}

/// `f1` is at most as expressive as `f2`.
pub fn fragment_leq(f1: &Fragment, f2: &Fragment) -> Result<bool, AtlasError> {
    check_universe(f1)?;
    check_universe(f2)?;
    Ok(f1.is_subset(&definable_closure(f2)))
}

/// Canonical representative: L is dropped next to A, iL next to iA.
pub fn reduce_fragment(f: &Fragment) -> Fragment {
    let mut out = f.clone();
    if out.contains(Modality::A) {
        out.remove(Modality::L);
    }
    if out.contains(Modality::IA) {
        out.remove(Modality::IL);
    }
    out
}

/// The 62 expressiveness classes, by size and then modality order.
pub fn enumerate_fragments() -> Vec<Fragment> {
    let mut classes = BTreeSet::new();
    for family in [FAMILY_B, FAMILY_E] {
        for mask in 1u32..64 {
            let f = Fragment::new((0..6).filter(|b| mask & (1 << b) != 0).map(|b| family[b]));
            classes.insert(reduce_fragment(&f));
        }
    }
    let mut out: Vec<Fragment> = classes.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplexityLabel {
    NPComplete,
    NEXPTIMEComplete,
    EXPSPACEComplete,
    DecidableNonPrimitiveRecursive,
    Undecidable,
}

impl ComplexityLabel {
    pub fn is_decidable(self) -> bool {
        self != ComplexityLabel::Undecidable
    }
}

impl fmt::Display for ComplexityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassContext {
    /// All strongly discrete linear orders.
    StronglyDiscrete,
    /// The natural numbers.
    Naturals,
}

/// Complexity of satisfiability for a nonempty fragment. The rules cover every
/// fragment, so only the empty one is refused.
pub fn classify(f: &Fragment, ctx: ClassContext) -> Result<ComplexityLabel, AtlasError> {
    use ComplexityLabel::*;
    use Modality as M;
    let has = |m: Modality| f.contains(m);
    let any = |ms: &[Modality]| ms.iter().any(|m| f.contains(*m));
    let b = any(&[M::B, M::IB]);
    let e = any(&[M::E, M::IE]);
    if f.is_empty() {
        return Err(AtlasError::OutOfUniverse(f.compact_name()));
    }
    if any(&[M::D, M::ID, M::O, M::IO]) {
        return Ok(Undecidable);
    }
    if b && e {
        return Ok(Undecidable);
    }
    if has(M::IA) && b {
        return Ok(match ctx {
            ClassContext::StronglyDiscrete => Undecidable,
            ClassContext::Naturals if has(M::A) || has(M::L) => Undecidable,
            ClassContext::Naturals => DecidableNonPrimitiveRecursive,
        });
    }
    if has(M::A) && e {
        return Ok(Undecidable);
    }
    if (has(M::A) && b) || (has(M::IA) && e) {
        return Ok(EXPSPACEComplete);
    }
    if any(&[M::A, M::IA]) {
        return Ok(NEXPTIMEComplete);
    }
    Ok(NPComplete)
}

/// Covering pairs `(lower, upper)` of the strict expressiveness order, as indices
/// into `classes`.
pub fn covering_edges(classes: &[Fragment]) -> Vec<(usize, usize)> {
    let n = classes.len();
    let leq = |a: usize, b: usize| fragment_leq(&classes[a], &classes[b]).expect("classes are in the universe");
    let lt: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| leq(a, b) && !leq(b, a)).collect()).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt[a][b] && !(0..n).any(|c| lt[a][c] && lt[c][b]) {
                edges.push((a, b));
            }
        }
    }
    edges
}

fn color(label: ComplexityLabel) -> &'static str {
    match label {
        ComplexityLabel::NPComplete => "palegreen",
        ComplexityLabel::NEXPTIMEComplete => "khaki",
        ComplexityLabel::EXPSPACEComplete => "orange",
        ComplexityLabel::DecidableNonPrimitiveRecursive => "plum",
        ComplexityLabel::Undecidable => "lightgray",
    }
}

/// Hasse diagram of the classes in DOT, edges pointing from less to more
/// expressive, nodes coloured by complexity.
pub fn hasse_dot(ctx: ClassContext) -> String {
    let classes = enumerate_fragments();
    let name = match ctx {
        ClassContext::StronglyDiscrete => "strongly_discrete",
        ClassContext::Naturals => "naturals",
    };
    let mut out = format!("digraph {name} {{\n  rankdir=BT;\n  node [shape=box, style=filled];\n");
    for (k, f) in classes.iter().enumerate() {
        let label = classify(f, ctx).expect("classes are in the universe");
        out.push_str(&format!(
            "  n{k} [label=\"{}\", complexity=\"{label}\", fillcolor={}];\n",
            f.compact_name(),
            color(label)
        ));
    }
    for (a, b) in covering_edges(&classes) {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modality::Modality as M;

    fn frag(ms: &[Modality]) -> Fragment {
        Fragment::new(ms.iter().copied())
    }

    #[test]
    fn closure_examples() {
        assert_eq!(definable_closure(&frag(&[M::A])), frag(&[M::A, M::L]));
        assert_eq!(definable_closure(&Fragment::empty()), Fragment::empty());
        assert_eq!(definable_closure(&frag(&[M::B, M::E])), frag(&[M::B, M::E, M::D]));
    }

    #[test]
    fn leq_examples() {
        assert!(fragment_leq(&frag(&[M::L]), &frag(&[M::A])).unwrap());
        assert!(!fragment_leq(&frag(&[M::A]), &frag(&[M::L])).unwrap());
        assert!(fragment_leq(&frag(&[M::B, M::IB]), &frag(&[M::B, M::IB])).unwrap());
        assert!(fragment_leq(&frag(&[M::D]), &frag(&[M::A])).is_err());
        assert!(fragment_leq(&frag(&[M::B]), &frag(&[M::E])).is_ok());
    }

    #[test]
    fn classify_examples() {
        use ClassContext::*;
        assert_eq!(classify(&frag(&[M::B, M::IB, M::L, M::IL]), StronglyDiscrete), Ok(ComplexityLabel::NPComplete));
        assert_eq!(classify(&frag(&[M::IA, M::B]), Naturals), Ok(ComplexityLabel::DecidableNonPrimitiveRecursive));
        assert_eq!(classify(&frag(&[M::A, M::E]), Naturals), Ok(ComplexityLabel::Undecidable));
        assert_eq!(classify(&frag(&[M::D]), Naturals), Ok(ComplexityLabel::Undecidable));
        assert_eq!(classify(&frag(&[M::B, M::A, M::E]), Naturals), Ok(ComplexityLabel::Undecidable));
        assert!(classify(&Fragment::empty(), Naturals).is_err());
    }
}
