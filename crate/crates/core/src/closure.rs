//! Subformula closure and the size measures that drive the periodic model bound.

use std::collections::BTreeSet;

use crate::formula::Formula;
use crate::modality::{Base, Modality};

/// Size measures of a formula, computed over its closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaMetrics {
    /// Number of AST nodes of the formula as written.
    pub length: usize,
    pub closure_size: usize,
    /// Distinct `<B> f` / `<iB> f` members of the closure.
    pub m_b: usize,
    /// Distinct `<L> f` / `<iL> f` members of the closure plus their negations.
    pub r_size: usize,
    pub m_l: usize,
    /// `(m_l + 2) * m_b + m_l + 4`
    pub periodic_bound: usize,
}

/// All subformulas of the desugared formula together with their negations.
///
/// Negation collapses double negation, so `~~f` is never produced.
pub fn closure(phi: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    collect(&phi.desugar(), &mut out);
    out
}

fn collect(f: &Formula, out: &mut BTreeSet<Formula>) {
    if out.contains(f) {
        return;
    }
    out.insert(f.clone());
    out.insert(f.negate());
    for c in f.children() {
        collect(c, out);
    }
}

fn is_diamond_of(f: &Formula, bases: Base) -> bool {
    matches!(f, Formula::Diamond(Modality { base, .. }, _) if *base == bases)
}

pub fn metrics(phi: &Formula) -> FormulaMetrics {
    let cl = closure(phi);
    let m_b = cl.iter().filter(|f| is_diamond_of(f, Base::B)).count();
    let r: BTreeSet<&Formula> = cl
        .iter()
        .filter(|f| match f {
            Formula::Not(inner) => is_diamond_of(inner, Base::L),
            other => is_diamond_of(other, Base::L),
        })
        .collect();
    let r_size = r.len();
    let m_l = 2 * r_size;
    FormulaMetrics {
        length: phi.size(),
        closure_size: cl.len(),
        m_b,
        r_size,
        m_l,
        periodic_bound: (m_l + 2) * m_b + m_l + 4,
    }
}
