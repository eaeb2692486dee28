mod common;

use std::collections::BTreeSet;

use common::{f, finite_model_strategy, formula_strategy};
use hs_core::atlas::{covering_edges, witness_library};
use hs_core::{
    certify_undefinability, check_equation, classify, enumerate_fragments, fragment_leq, hasse_dot,
    is_f_bisimulation, largest_f_bisimulation, BisimRelation, ClassContext, ComplexityLabel, Domain,
    EquationResult, FiniteEvaluator, Fragment, Interval, IntervalModel, Modality as M,
};
use proptest::prelude::*;

fn frag(ms: &[M]) -> Fragment {
    Fragment::new(ms.iter().copied())
}

fn p_at(n: u64, at: &[(u64, u64)]) -> IntervalModel {
    let mut m = IntervalModel::new(Domain::finite(n).unwrap());
    for &(x, y) in at {
        m.insert("p", Interval::new(x, y)).unwrap();
    }
    m
}

fn all_intervals(n: u64) -> Vec<Interval> {
    (0..n).flat_map(|x| (x + 1..=n).map(move |y| Interval::new(x, y))).collect()
}

#[test]
fn sixty_two_classes() {
    let classes = enumerate_fragments();
    assert_eq!(classes.len(), 62);
    assert!(!classes.contains(&frag(&[M::A, M::L])));
    assert!(classes.contains(&frag(&[M::A])));
    assert!(classes.contains(&frag(&[M::B, M::IB, M::L, M::IL])));
    let distinct: BTreeSet<_> = classes.iter().collect();
    assert_eq!(distinct.len(), 62);
}

#[test]
fn decidable_counts() {
    let classes = enumerate_fragments();
    let decidable = |ctx| -> BTreeSet<Fragment> {
        classes.iter().filter(|f| classify(f, ctx).unwrap().is_decidable()).cloned().collect()
    };
    let sd = decidable(ClassContext::StronglyDiscrete);
    let nat = decidable(ClassContext::Naturals);
    assert_eq!(sd.len(), 44);
    assert_eq!(nat.len(), 47);
    assert!(sd.is_subset(&nat));
    let extra: BTreeSet<Fragment> = nat.difference(&sd).cloned().collect();
    let expect: BTreeSet<Fragment> =
        [frag(&[M::IA, M::B]), frag(&[M::IA, M::IB]), frag(&[M::IA, M::B, M::IB])].into();
    assert_eq!(extra, expect);
}

#[test]
fn classification_is_mirror_invariant_on_strongly_discrete_orders() {
    for c in enumerate_fragments() {
        let ctx = ClassContext::StronglyDiscrete;
        assert_eq!(classify(&c, ctx), classify(&c.mirror(), ctx), "{c}");
    }
}

#[test]
fn leq_is_a_monotone_preorder() {
    let classes = enumerate_fragments();
    let leq = |a: &Fragment, b: &Fragment| fragment_leq(a, b).unwrap();
    for a in &classes {
        assert!(leq(a, a));
        for b in &classes {
            if a.is_subset(b) {
                assert!(leq(a, b));
            }
            for c in &classes {
                if leq(a, b) && leq(b, c) {
                    assert!(leq(a, c));
                }
            }
        }
    }
}

#[test]
fn hasse_diagram() {
    let classes = enumerate_fragments();
    for (ctx, undecidable) in [(ClassContext::StronglyDiscrete, 18), (ClassContext::Naturals, 15)] {
        let dot = hasse_dot(ctx);
        assert_eq!(dot.matches("complexity=").count(), 62);
        assert_eq!(dot.matches("complexity=\"Undecidable\"").count(), undecidable);
        assert_eq!(dot, hasse_dot(ctx));
    }
    let edges = covering_edges(&classes);
    let at = |ms: &[M]| classes.iter().position(|c| *c == frag(ms)).unwrap();
    assert!(edges.contains(&(at(&[M::B]), at(&[M::B, M::IB]))));
    assert!(edges.contains(&(at(&[M::L]), at(&[M::A]))));
    assert!(!edges.contains(&(at(&[M::B]), at(&[M::A, M::B, M::IB]))));
}

#[test]
fn cited_equations_have_no_small_countermodel() {
    let cases = [
        (M::L, "<A> <A> p"),
        (M::IL, "<iA> <iA> p"),
        (M::D, "<B> <E> p"),
        (M::IO, "<B> <iE> p"),
        (M::O, "<E> <iB> p"),
        (M::ID, "<iB> <iE> p"),
    ];
    for (x, template) in cases {
        assert_eq!(check_equation(x, "p", &f(template), 6), EquationResult::NoCountermodel, "{template}");
    }
}

#[test]
fn false_equation_has_a_countermodel() {
    let EquationResult::Countermodel { model, witness } = check_equation(M::L, "p", &f("<B> p"), 4) else {
        panic!("expected a countermodel");
    };
    let lhs = FiniteEvaluator::new(&model, &f("<L> p")).holds(witness);
    let rhs = FiniteEvaluator::new(&model, &f("<B> p")).holds(witness);
    assert_ne!(lhs, rhs);
}

#[test]
fn bisimulation_examples() {
    let m = p_at(4, &[(3, 4)]);
    let m2 = p_at(4, &[]);
    let z = BisimRelation::new([(Interval::new(0, 1), Interval::new(0, 1))]);
    let bb = frag(&[M::B, M::IB]);
    let starts_at_zero = BisimRelation::new((1..=4).map(|k| (Interval::new(0, k), Interval::new(0, k))));
    assert!(is_f_bisimulation(&m, &m2, &starts_at_zero, &bb));
    assert!(!is_f_bisimulation(&m, &m2, &z, &frag(&[M::L])));
    assert!(largest_f_bisimulation(&m, &m2, &bb).contains(Interval::new(0, 1), Interval::new(0, 1)));
    assert!(!largest_f_bisimulation(&m, &m2, &frag(&[M::L])).contains(Interval::new(0, 1), Interval::new(0, 1)));
    let identity = BisimRelation::new(all_intervals(4).into_iter().map(|i| (i, i)));
    let all = Fragment::new(M::ALL);
    assert!(is_f_bisimulation(&m, &m, &identity, &all));
    assert!(identity.pairs.is_subset(&largest_f_bisimulation(&m, &m, &all).pairs));
}

#[test]
fn shipped_witnesses_certify() {
    for w in witness_library() {
        assert!(w.certify(), "{:?}", w.modality);
        assert!(!certify_undefinability(
            w.modality,
            &w.fragment,
            &w.left,
            &w.right,
            Interval::new(0, 2),
            w.right_at,
            &w.letter
        ));
        let with_x = Fragment::new(w.fragment.iter().chain([w.modality]));
        assert!(!certify_undefinability(w.modality, &with_x, &w.left, &w.right, w.left_at, w.right_at, &w.letter));
    }
}

/// Flipping a bit the witness depends on breaks it: intervals the fragment reaches
/// from `[0,1]` (all start at 0), the left `p`, and the target relation's
/// successors on the right.
#[test]
fn relevant_witness_bits_matter() {
    for w in witness_library() {
        let Domain::Finite { max_point: n } = w.left.domain else { unreachable!() };
        for i in all_intervals(n) {
            let successor = w.left_at.related(w.modality, &i);
            for (side, relevant) in [(0, i.x == 0 || w.left.holds_atom("p", i)), (1, i.x == 0 || successor)] {
                if !relevant {
                    continue;
                }
                let mut v = w.clone();
                let m = if side == 0 { &mut v.left } else { &mut v.right };
                if !m.remove("p", i) {
                    m.insert("p", i).unwrap();
                }
                assert!(!v.certify(), "{:?} side {side} bit {i}", w.modality);
            }
        }
    }
}

fn truth_preserved(m: &IntervalModel, m2: &IntervalModel, frag: &Fragment, phi: &hs_core::Formula) -> bool {
    let z = largest_f_bisimulation(m, m2, frag);
    let (e, e2) = (FiniteEvaluator::new(m, phi), FiniteEvaluator::new(m2, phi));
    z.pairs.iter().all(|&(i, j)| e.holds(i) == e2.holds(j))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bisimulations_preserve_truth(
        m in finite_model_strategy(4),
        m2 in finite_model_strategy(4),
        mods in proptest::sample::subsequence(M::ALL.to_vec(), 1..4),
        seed_depth in 0u32..4,
    ) {
        let fr = Fragment::new(mods.iter().copied());
        let z = largest_f_bisimulation(&m, &m2, &fr);
        prop_assert!(is_f_bisimulation(&m, &m2, &z, &fr));
        let runner_formula = formula_strategy(mods.clone(), seed_depth);
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        for _ in 0..8 {
            let phi = runner_formula.new_tree(&mut runner).unwrap().current();
            prop_assert!(truth_preserved(&m, &m2, &fr, &phi), "{}", phi);
        }
    }

    #[test]
    fn largest_bisimulation_is_maximal(
        m in finite_model_strategy(3),
        m2 in finite_model_strategy(3),
        mods in proptest::sample::subsequence(M::ALL.to_vec(), 1..3),
    ) {
        let fr = Fragment::new(mods);
        let z = largest_f_bisimulation(&m, &m2, &fr);
        let n = |m: &IntervalModel| match m.domain { Domain::Finite { max_point } => max_point, _ => 0 };
        for i in all_intervals(n(&m)) {
            for j in all_intervals(n(&m2)) {
                if z.contains(i, j) {
                    continue;
                }
                let mut bigger = z.clone();
                bigger.pairs.insert((i, j));
                prop_assert!(!is_f_bisimulation(&m, &m2, &bigger, &fr));
            }
        }
    }
}

#[test]
fn complexity_labels_render() {
    assert_eq!(ComplexityLabel::DecidableNonPrimitiveRecursive.to_string(), "DecidableNonPrimitiveRecursive");
}
