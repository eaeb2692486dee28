//! Generators and independent reference evaluators shared by integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use hs_core::{Domain, Formula, Interval, IntervalModel, Modality, Periodicity};
use proptest::prelude::*;

pub const LETTERS: [&str; 2] = ["p", "q"];

/// Propositional and modal contradictions in B iB L iL.
pub const UNSAT_SUITE: [&str; 10] = [
    "p & ~p",
    "[B] false & <B> true",
    "<B> p & [B] ~p",
    "<B> <B> p & [B] ~p",
    "<L> p & [L] ~p",
    "<L> <L> p & [L] ~p",
    "<iB> p & [iB] ~p",
    "<iL> (p & ~p)",
    "<B> <B> true & [B] [B] false",
    "[iB] false",
];

pub fn formula_strategy(mods: Vec<Modality>, depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(LETTERS.to_vec()).prop_map(Formula::atom),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(depth, 24, 2, move |inner| {
        let mods = mods.clone();
        prop_oneof![
            2 => inner.clone().prop_map(Formula::not),
            2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
            3 => (prop::sample::select(mods.clone()), inner.clone()).prop_map(|(m, f)| Formula::diamond(m, f)),
            3 => (prop::sample::select(mods), inner).prop_map(|(m, f)| Formula::boxed(m, f)),
        ]
    })
    .boxed()
}

pub fn all_modalities() -> Vec<Modality> {
    Modality::ALL.to_vec()
}

/// Finite model over `0..=n` with each letter on a random subset of intervals.
pub fn finite_model_strategy(max_n: u64) -> BoxedStrategy<IntervalModel> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let cells = (n * (n + 1) / 2) as usize;
            (Just(n), prop::collection::vec(prop::bool::ANY, cells * LETTERS.len()))
        })
        .prop_map(|(n, bits)| {
            let mut m = IntervalModel::new(Domain::finite(n).unwrap());
            let mut k = 0;
            for letter in LETTERS {
                for x in 0..n {
                    for y in x + 1..=n {
                        if bits[k] {
                            m.insert(letter, Interval::new(x, y)).unwrap();
                        }
                        k += 1;
                    }
                }
            }
            m
        })
        .boxed()
}

pub fn periodic_model_strategy(max_pre: u64, max_per: u64, max_len: u64) -> BoxedStrategy<IntervalModel> {
    (1..=max_pre, 1..=max_per, 1..=max_len)
        .prop_flat_map(|(pre, per, len)| {
            let cells = Periodicity::with_stable_len(pre, per, len).canonical_intervals().len();
            (Just((pre, per, len)), prop::collection::vec(prop::bool::ANY, cells * LETTERS.len()))
        })
        .prop_map(|((pre, per, len), bits)| {
            let period = Periodicity::with_stable_len(pre, per, len);
            let mut m = IntervalModel::new(Domain::UltimatelyPeriodic(period));
            let mut k = 0;
            for letter in LETTERS {
                for c in period.canonical_intervals() {
                    if bits[k] {
                        m.insert(letter, c).unwrap();
                    }
                    k += 1;
                }
            }
            m
        })
        .boxed()
}

/// Table 1 written out directly, independent of the library's relation code.
pub fn table_relation(m: Modality, (x, y): (u64, u64), (a, b): (u64, u64)) -> bool {
    match m.token().as_str() {
        "A" => y == a,
        "L" => y < a,
        "B" => x == a && b < y,
        "E" => y == b && x < a,
        "D" => x < a && b < y,
        "O" => x < a && a < y && y < b,
        "iA" => b == x,
        "iL" => b < x,
        "iB" => x == a && y < b,
        "iE" => y == b && a < x,
        "iD" => a < x && y < b,
        "iO" => a < x && x < b && b < y,
        other => panic!("unknown modality {other}"),
    }
}

/// Naive recursive evaluation. Witnesses range over intervals whose endpoints
/// are at most `top(x, y)`; `atom` decides letters.
pub struct Naive<'a> {
    pub atom: &'a dyn Fn(&str, u64, u64) -> bool,
    pub top: &'a dyn Fn(u64, u64) -> u64,
    memo: HashMap<(usize, u64, u64), bool>,
}

impl<'a> Naive<'a> {
    pub fn new(atom: &'a dyn Fn(&str, u64, u64) -> bool, top: &'a dyn Fn(u64, u64) -> u64) -> Self {
        Naive { atom, top, memo: HashMap::new() }
    }

    pub fn eval(&mut self, f: &Formula, x: u64, y: u64) -> bool {
        let key = (f as *const Formula as usize, x, y);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = match f {
            Formula::Atom(p) => (self.atom)(p, x, y),
            Formula::True => true,
            Formula::False => false,
            Formula::Not(a) => !self.eval(a, x, y),
            Formula::And(l, r) => self.eval(l, x, y) && self.eval(r, x, y),
            Formula::Or(l, r) => self.eval(l, x, y) || self.eval(r, x, y),
            Formula::Implies(l, r) => !self.eval(l, x, y) || self.eval(r, x, y),
            Formula::Diamond(m, a) => self.exists(*m, a, x, y, true),
            Formula::Box(m, a) => !self.exists(*m, a, x, y, false),
        };
        self.memo.insert(key, v);
        v
    }

    fn exists(&mut self, m: Modality, a: &Formula, x: u64, y: u64, want: bool) -> bool {
        let top = (self.top)(x, y);
        for s in 0..top {
            for t in s + 1..=top {
                if table_relation(m, (x, y), (s, t)) && self.eval(a, s, t) == want {
                    return true;
                }
            }
        }
        false
    }
}

/// Naive evaluation on a finite model.
pub fn naive_finite(m: &IntervalModel, f: &Formula, i: Interval) -> bool {
    let Domain::Finite { max_point } = m.domain else { panic!("finite model expected") };
    let atom = |p: &str, x: u64, y: u64| m.holds_atom(p, Interval::new(x, y));
    let top = move |_: u64, _: u64| max_point;
    Naive::new(&atom, &top).eval(f, i.x, i.y)
}

/// Naive evaluation on a periodic model with witnesses at most `look` past the
/// current right endpoint.
pub fn naive_window(m: &IntervalModel, f: &Formula, i: Interval, look: u64) -> bool {
    let atom = |p: &str, x: u64, y: u64| m.holds_atom(p, Interval::new(x, y));
    let top = move |_: u64, y: u64| y + look;
    Naive::new(&atom, &top).eval(f, i.x, i.y)
}

pub fn f(s: &str) -> Formula {
    hs_core::parse_formula(s).unwrap()
}
