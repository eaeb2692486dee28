//! Formula syntax trees and their concrete rendering.

use std::collections::BTreeSet;
use std::fmt;

use crate::modality::{Fragment, Modality};

/// Reserved letter used when `true`/`false` are expanded into `p | ~p`.
pub const TOP_LETTER: &str = "__top";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Diamond(Modality, Box<Formula>),
    Box(Modality, Box<Formula>),
}

impl Formula {
    pub fn atom(letter: impl Into<String>) -> Formula {
        Formula::Atom(letter.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    /// `(l -> r) & (r -> l)`
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(Formula::implies(l.clone(), r.clone()), Formula::implies(r, l))
    }

    pub fn diamond(m: Modality, f: Formula) -> Formula {
        Formula::Diamond(m, Box::new(f))
    }

    pub fn boxed(m: Modality, f: Formula) -> Formula {
        Formula::Box(m, Box::new(f))
    }

    /// Left-nested conjunction; the empty conjunction is `true`.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; the empty disjunction is `false`.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    /// Negation that collapses a leading double negation.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => Formula::not(other.clone()),
        }
    }

    /// Number of AST nodes; every atom, constant, connective and modality counts once.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Maximal nesting of modal operators.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Diamond(_, f) | Formula::Box(_, f) => 1 + f.modal_depth(),
            other => other.children().iter().map(|c| c.modal_depth()).max().unwrap_or(0),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => vec![],
            Formula::Not(f) | Formula::Diamond(_, f) | Formula::Box(_, f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => vec![l, r],
        }
    }

    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.collect_letters(out);
        }
    }

    /// The fragment of modalities occurring in the formula.
    pub fn fragment(&self) -> Fragment {
        let mut frag = Fragment::empty();
        self.collect_modalities(&mut frag);
        frag
    }

    fn collect_modalities(&self, frag: &mut Fragment) {
        if let Formula::Diamond(m, _) | Formula::Box(m, _) = self {
            frag.insert(*m);
        }
        for c in self.children() {
            c.collect_modalities(frag);
        }
    }

    /// Rewrites into the core grammar (atoms, `~`, `|`, `&`, diamonds).
    ///
    /// `a -> b` becomes `~a | b`, `[X] f` becomes `~<X> ~f`, and the constants
    /// become `__top | ~__top` and its negation.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::True => {
                let top = Formula::atom(TOP_LETTER);
                Formula::or(top.clone(), Formula::not(top))
            }
            Formula::False => Formula::not(Formula::True.desugar()),
            Formula::Not(f) => f.desugar().negate(),
            Formula::And(l, r) => Formula::and(l.desugar(), r.desugar()),
            Formula::Or(l, r) => Formula::or(l.desugar(), r.desugar()),
            Formula::Implies(l, r) => Formula::or(l.desugar().negate(), r.desugar()),
            Formula::Diamond(m, f) => Formula::diamond(*m, f.desugar()),
            Formula::Box(m, f) => Formula::not(Formula::diamond(*m, f.desugar().negate())),
        }
    }

    /// Replaces every modality by its time-reversal image.
    pub fn mirror(&self) -> Formula {
        self.map_modalities(&|m| m.mirror())
    }

    pub fn map_modalities(&self, f: &dyn Fn(Modality) -> Modality) -> Formula {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => self.clone(),
            Formula::Not(a) => Formula::not(a.map_modalities(f)),
            Formula::And(l, r) => Formula::and(l.map_modalities(f), r.map_modalities(f)),
            Formula::Or(l, r) => Formula::or(l.map_modalities(f), r.map_modalities(f)),
            Formula::Implies(l, r) => Formula::implies(l.map_modalities(f), r.map_modalities(f)),
            Formula::Diamond(m, a) => Formula::diamond(f(*m), a.map_modalities(f)),
            Formula::Box(m, a) => Formula::boxed(f(*m), a.map_modalities(f)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, phi: &Formula, min_prec: u8) -> fmt::Result {
    if phi.precedence() < min_prec {
        write!(f, "(")?;
        write_at(f, phi, 0)?;
        return write!(f, ")");
    }
    match phi {
        Formula::Atom(p) => write!(f, "{p}"),
        Formula::True => write!(f, "true"),
        Formula::False => write!(f, "false"),
        Formula::Not(a) => {
            write!(f, "~")?;
            write_at(f, a, 3)
        }
        Formula::Diamond(m, a) => {
            write!(f, "<{m}> ")?;
            write_at(f, a, 3)
        }
        Formula::Box(m, a) => {
            write!(f, "[{m}] ")?;
            write_at(f, a, 3)
        }
        Formula::And(l, r) => {
            write_at(f, l, 2)?;
            write!(f, " & ")?;
            write_at(f, r, 3)
        }
        Formula::Or(l, r) => {
            write_at(f, l, 1)?;
            write!(f, " | ")?;
            write_at(f, r, 2)
        }
        // right associative
        Formula::Implies(l, r) => {
            write_at(f, l, 1)?;
            write!(f, " -> ")?;
            write_at(f, r, 0)
        }
    }
}

/// Time-reversal image of a formula.
pub fn mirror_formula(f: &Formula) -> Formula {
    f.mirror()
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_minimal_parens() {
        let p = Formula::atom("p");
        let q = Formula::atom("q");
        let f = Formula::and(Formula::or(p.clone(), q.clone()), Formula::not(p.clone()));
        assert_eq!(f.to_string(), "(p | q) & ~p");
        let g = Formula::implies(Formula::implies(p.clone(), q.clone()), p.clone());
        assert_eq!(g.to_string(), "(p -> q) -> p");
        let h = Formula::diamond(Modality::B, Formula::and(p.clone(), q));
        assert_eq!(h.to_string(), "<B> (p & q)");
    }

    #[test]
    fn empty_connectives() {
        assert_eq!(Formula::conj(vec![]), Formula::True);
        assert_eq!(Formula::disj(vec![]), Formula::False);
    }

    #[test]
    fn desugar_box_and_implication() {
        let p = Formula::atom("p");
        let f = Formula::boxed(Modality::L, Formula::not(p.clone()));
        assert_eq!(f.desugar(), Formula::not(Formula::diamond(Modality::L, p.clone())));
        let g = Formula::implies(p.clone(), Formula::atom("q"));
        assert_eq!(g.desugar(), Formula::or(Formula::not(p), Formula::atom("q")));
    }

    #[test]
    fn mirror_is_structural() {
        let p = Formula::atom("p");
        let f = Formula::diamond(Modality::B, Formula::diamond(Modality::E, p.clone()));
        assert_eq!(f.mirror(), Formula::diamond(Modality::E, Formula::diamond(Modality::B, p.clone())));
        let g = Formula::diamond(Modality::A, p);
        assert_eq!(g.mirror().to_string(), "<iA> p");
        assert_eq!(f.mirror().mirror(), f);
    }
}
