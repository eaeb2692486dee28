//! Reduction from counter automaton nonemptiness to AE satisfiability, and the
//! layout of a lasso-shaped run as an ultimately periodic model.
//!
//! A configuration occupies a block of unit intervals: state, letter, one unit per
//! counter value, then a `$b` separator. `conf` spans the block; `corr` links each
//! counter unit to its copy in the next block.

use std::collections::{BTreeMap, BTreeSet};

use crate::automaton::{Config, CounterAutomaton, Op, Transition};
use crate::error::AutomatonError;
use crate::formula::Formula;
use crate::interval::{Domain, Interval};
use crate::model::IntervalModel;
use crate::modality::{Fragment, Modality};

pub const EPS: &str = "__eps";
pub const P_Q: &str = "__q";
pub const P_A: &str = "__a";
pub const P_C: &str = "__c";
pub const P_B: &str = "__b";
pub const CONF: &str = "__conf";
pub const CONF_P: &str = "__confp";
pub const CONF_Q: &str = "__conf_q";
pub const CONF_A: &str = "__conf_a";
pub const C_DEC: &str = "__c_dec";
pub const C_NEW: &str = "__c_new";
pub const CONF_DEC: &str = "__conf_dec";
pub const CONF_NEW: &str = "__conf_new";
pub const CORR: &str = "__corr";
pub const CORR_P: &str = "__corrp";
pub const CORR_CONF: &str = "__corr_conf";

/// The fixed auxiliary letters.
pub const AUXILIARIES: [&str; 15] = [
    P_Q, P_A, P_C, P_B, CONF, CONF_P, CONF_Q, CONF_A, C_DEC, C_NEW, CONF_DEC, CONF_NEW, CORR, CORR_P, CORR_CONF,
];

/// Letter of the `i`-th counter (1-based).
pub fn counter_letter(i: usize) -> String {
    format!("__c{i}")
}

/// Suffix-of-configuration marker after a unit of counter `i`.
pub fn conf_counter_letter(i: usize) -> String {
    format!("__conf_c{i}")
}

fn transition_letter(t: &Transition) -> String {
    t.letter.clone().unwrap_or_else(|| EPS.to_string())
}

/// Alphabet letters used by the encoding: Σ, plus `__eps` when some move is silent.
pub fn encoded_alphabet(a: &CounterAutomaton) -> Vec<String> {
    let mut out = a.alphabet.clone();
    if a.transitions.iter().any(|t| t.letter.is_none()) {
        out.push(EPS.to_string());
    }
    out
}

fn p(l: &str) -> Formula {
    Formula::atom(l)
}

fn and(l: Formula, r: Formula) -> Formula {
    Formula::and(l, r)
}

fn imp(l: Formula, r: Formula) -> Formula {
    Formula::implies(l, r)
}

fn not(f: Formula) -> Formula {
    Formula::not(f)
}

fn da(f: Formula) -> Formula {
    Formula::diamond(Modality::A, f)
}

fn ba(f: Formula) -> Formula {
    Formula::boxed(Modality::A, f)
}

fn de(f: Formula) -> Formula {
    Formula::diamond(Modality::E, f)
}

fn be(f: Formula) -> Formula {
    Formula::boxed(Modality::E, f)
}

fn any_of<'a>(ls: impl IntoIterator<Item = &'a String>) -> Formula {
    Formula::disj(ls.into_iter().map(|l| p(l)))
}

/// `psi & [A] psi & [A][A] psi`: everything reachable from the starting unit.
pub fn universal(psi: Formula) -> Formula {
    Formula::conj([psi.clone(), ba(psi.clone()), ba(ba(psi))])
}

/// `psi & [L]([iA] psi & [iA][iA] psi)`, the universal modality over the naturals
/// for fragments with L and iA.
pub fn universal_nat(psi: Formula) -> Formula {
    let ia = |f| Formula::boxed(Modality::IA, f);
    Formula::and(psi.clone(), Formula::boxed(Modality::L, Formula::and(ia(psi.clone()), ia(ia(psi)))))
}

/// No two distinct letters of `ls` hold together.
fn exclusive(ls: &[String]) -> Formula {
    let mut parts = Vec::new();
    for (k, l) in ls.iter().enumerate() {
        for m in &ls[k + 1..] {
            parts.push(not(and(p(l), p(m))));
        }
    }
    Formula::conj(parts)
}

/// The conjunct groups of the encoding, in order, with short names.
pub fn encode_groups(a: &CounterAutomaton) -> Vec<(String, Formula)> {
    let u = universal;
    let states = &a.states;
    let letters = encoded_alphabet(a);
    let counters: Vec<String> = (1..=a.counters).map(counter_letter).collect();
    let top = || Formula::True;
    let bot = || Formula::False;
    let unit = || be(bot());
    let holders = [P_Q, P_A, P_C, P_B];

    let mut g: Vec<(&str, Formula)> = Vec::new();
    g.push((
        "placeholders set",
        u(Formula::conj([
            Formula::iff(p(P_Q), any_of(states)),
            Formula::iff(p(P_A), any_of(&letters)),
            Formula::iff(p(P_C), any_of(&counters)),
        ])),
    ));
    g.push(("placeholders are units", u(Formula::iff(unit(), Formula::disj(holders.map(p))))));
    g.push((
        "one placeholder per unit",
        u(Formula::conj(holders.map(|h| {
            imp(p(h), not(Formula::disj(holders.iter().filter(|o| **o != h).map(|o| p(o)))))
        }))),
    ));
    g.push((
        "one state, letter, counter",
        u(Formula::conj([exclusive(states), exclusive(&letters), exclusive(&counters)])),
    ));
    g.push(("first configuration", da(Formula::conj([p(CONF), de(de(top())), be(be(be(bot())))]))));
    g.push(("configurations chain", u(imp(p(CONF), and(da(p(CONF)), de(de(top())))))));
    g.push((
        "configuration suffixes",
        u(and(imp(p(CONF), be(p(CONF_P))), imp(p(CONF_P), not(p(CONF))))),
    ));
    g.push((
        "suffixes reach the next configuration",
        u(and(imp(da(p(CONF_P)), not(p(CONF))), imp(p(CONF_P), and(da(p(CONF)), not(de(p(CONF))))))),
    ));
    g.push((
        "configurations start with a state",
        and(da(p(&a.initial)), u(Formula::iff(da(p(CONF)), da(p(P_Q))))),
    ));
    g.push((
        "unit order",
        u(Formula::conj([
            imp(p(P_Q), da(p(P_A))),
            imp(Formula::or(p(P_A), p(P_C)), da(Formula::or(p(P_C), p(P_B)))),
            imp(p(P_B), da(p(P_Q))),
        ])),
    ));
    g.push((
        "state and letter suffixes",
        u(and(imp(p(P_Q), ba(imp(p(CONF_P), p(CONF_Q)))), imp(p(P_A), ba(imp(p(CONF_P), p(CONF_A)))))),
    ));
    g.push((
        "one state and letter suffix",
        u(and(not(and(p(CONF_Q), de(p(CONF_Q)))), not(and(p(CONF_A), de(p(CONF_A)))))),
    ));
    g.push((
        "counter suffixes",
        u(Formula::conj(
            (1..=a.counters).map(|i| imp(p(&counter_letter(i)), ba(imp(p(CONF_P), p(&conf_counter_letter(i)))))),
        )),
    ));
    let marks = [(C_NEW, CONF_NEW), (C_DEC, CONF_DEC)];
    g.push((
        "marked counter units",
        u(Formula::conj(marks.map(|(c, conf)| imp(p(c), and(p(P_C), ba(imp(p(CONF_P), p(conf)))))))),
    ));
    g.push((
        "marked suffixes follow marked units",
        u(Formula::conj(marks.map(|(c, conf)| imp(and(unit(), da(p(conf))), p(c))))),
    ));
    g.push((
        "one marked suffix of each kind",
        u(and(not(and(p(CONF_DEC), de(p(CONF_DEC)))), not(and(p(CONF_NEW), de(p(CONF_NEW)))))),
    ));
    g.push(("new units are not targets", ba(imp(da(p(C_NEW)), not(de(p(CORR)))))));
    g.push((
        "no correspondence from state, letter or decremented units",
        u(imp(Formula::disj([p(P_Q), p(P_A), p(C_DEC)]), ba(not(p(CORR))))),
    ));
    g.push(("counter units correspond", u(imp(and(p(P_C), not(p(C_DEC))), da(p(CORR))))));
    g.push(("correspondences leave counter units", u(imp(and(unit(), da(p(CORR))), p(P_C)))));
    g.push((
        "correspondence suffixes",
        u(and(
            imp(p(CORR), and(be(p(CORR_P)), da(p(P_C)))),
            imp(da(p(CONF)), ba(imp(p(CORR_P), p(CORR_CONF)))),
        )),
    ));
    g.push((
        "one correspondence suffix",
        u(and(not(and(p(CORR_CONF), de(p(CORR_CONF)))), imp(p(CORR), de(p(CORR_CONF))))),
    ));
    g.push(("correspondence suffixes start configurations", u(imp(da(p(CORR_CONF)), da(p(CONF))))));
    g.push((
        "correspondences preserve the counter",
        u(Formula::conj((1..=a.counters).map(|i| {
            let c = counter_letter(i);
            imp(p(&c), ba(imp(p(CORR), da(p(&c)))))
        }))),
    ));
    g.push(("no correspondence ends another", u(not(and(p(CORR), de(p(CORR)))))));

    let moves = a.transitions.iter().map(|t| {
        let head = da(and(p(&t.src), da(p(&transition_letter(t)))));
        let ci = p(&conf_counter_letter(t.counter));
        let next = and(p(CONF), da(p(&t.dst)));
        let tail = match t.op {
            Op::Inc => da(and(next, da(and(p(CONF), de(and(ci, p(CONF_NEW))))))),
            Op::Dec => da(and(next, de(and(ci, p(CONF_DEC))))),
            Op::Ifz => da(and(next, be(not(ci)))),
        };
        and(head, tail)
    });
    g.push(("transitions", u(imp(da(p(CONF)), Formula::disj(moves)))));
    g.push(("fairness", ba(da(da(any_of(&a.finals))))));

    g.into_iter().map(|(n, f)| (n.to_string(), f)).collect()
}

/// The AE formula satisfiable iff the automaton has a fair run.
pub fn encode_ae(a: &CounterAutomaton) -> Formula {
    Formula::conj(encode_groups(a).into_iter().map(|(_, f)| f))
}

/// Encoding into `AE` or its mirror image `iAB`.
pub fn encode_fragment(a: &CounterAutomaton, target: &Fragment) -> Result<Formula, AutomatonError> {
    let ae = Fragment::new([Modality::A, Modality::E]);
    if *target == ae {
        Ok(encode_ae(a))
    } else if *target == ae.mirror() {
        Ok(encode_ae(a).mirror())
    } else {
        Err(AutomatonError::UnsupportedTarget(target.compact_name()))
    }
}

/// A run that returns to an earlier configuration: `transitions[j]` leads from
/// `configs[j]` to `configs[j + 1]`, and the last configuration equals
/// `configs[loop_start]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub configs: Vec<Config>,
    pub transitions: Vec<Transition>,
    pub loop_start: usize,
}

impl Lasso {
    /// Checks the lasso against `a`, in the form the layout needs: decrements and
    /// increments act on the stored values directly, and all other growth is
    /// left to the successor.
    pub fn validate(&self, a: &CounterAutomaton) -> Result<(), AutomatonError> {
        let bad = |m: String| Err(AutomatonError::Invalid(m));
        let m = self.transitions.len();
        if self.configs.len() != m + 1 || self.loop_start >= m {
            return bad("a lasso needs one more configuration than transitions and a proper loop".into());
        }
        if self.configs[0] != a.initial_config() {
            return bad(format!("lasso starts at {} instead of the initial configuration", self.configs[0]));
        }
        if self.configs[m] != self.configs[self.loop_start] {
            return bad("the lasso does not close its loop".into());
        }
        if !self.transitions[self.loop_start..].iter().any(|t| a.is_final(&t.src)) {
            return bad("the loop visits no final state".into());
        }
        for (j, t) in self.transitions.iter().enumerate() {
            let (c, d) = (&self.configs[j], &self.configs[j + 1]);
            if !a.transitions.contains(t) || t.src != c.state || t.dst != d.state {
                return bad(format!("step {j}: {t} does not connect {c} and {d}"));
            }
            if c.values.len() != a.counters || d.values.len() != a.counters {
                return bad(format!("step {j}: wrong number of counters"));
            }
            let i = t.counter - 1;
            let mut floor = c.values.clone();
            match t.op {
                Op::Inc => floor[i] += 1,
                Op::Dec if c.values[i] == 0 => return bad(format!("step {j}: {t} on an empty counter")),
                Op::Dec => floor[i] -= 1,
                Op::Ifz if c.values[i] != 0 => return bad(format!("step {j}: {t} on a nonzero counter")),
                Op::Ifz => {}
            }
            if floor.iter().zip(&d.values).any(|(f, v)| f > v) {
                return bad(format!("step {j}: {d} lost a counter unit"));
            }
        }
        Ok(())
    }

    fn index(&self, j: usize) -> usize {
        let m = self.transitions.len();
        if j < m {
            j
        } else {
            self.loop_start + (j - self.loop_start) % (m - self.loop_start)
        }
    }
}

struct Block {
    start: u64,
    end: u64,
    /// (counter index, unit start) in layout order.
    counters: Vec<(usize, u64)>,
    dec: Option<u64>,
    new: Option<u64>,
}

/// The ultimately periodic model that lays the lasso out block by block, from
/// point 1 on; the formula is meant to hold at `[0, 1]`.
///
/// The period starts at the loop entry when the entry block looks like its later
/// copies, and one loop later otherwise.
pub fn layout_model(a: &CounterAutomaton, lasso: &Lasso) -> Result<IntervalModel, AutomatonError> {
    lasso.validate(a)?;
    let m = lasso.transitions.len();
    layout_from(a, lasso, lasso.loop_start).or_else(|_| layout_from(a, lasso, m))
}

fn layout_from(a: &CounterAutomaton, lasso: &Lasso, anchor: usize) -> Result<IntervalModel, AutomatonError> {
    let l = anchor;
    let m = anchor + lasso.transitions.len() - lasso.loop_start;
    let max_len =
        lasso.configs.iter().map(|c| 3 + c.values.iter().sum::<u64>()).max().unwrap_or(3);
    let config_at = |j: usize| &lasso.configs[lasso.index(j)];
    let trans_at = |j: usize| &lasso.transitions[lasso.index(j)];

    let mut blocks: Vec<Block> = Vec::new();
    let mut s = 1u64;
    let mut pre_per = None;
    let mut j = 0;
    loop {
        if j == l {
            pre_per = Some((s, 0));
        }
        if j == m {
            let (pre, _) = pre_per.unwrap();
            pre_per = Some((pre, s - pre));
        }
        if let Some((pre, per)) = pre_per {
            if j > m && s > pre + 3 * per + 4 * max_len + 4 {
                break;
            }
        }
        let c = config_at(j);
        let t = trans_at(j);
        let mut counters = Vec::new();
        let mut u = s + 2;
        for (i, &v) in c.values.iter().enumerate() {
            for _ in 0..v {
                counters.push((i + 1, u));
                u += 1;
            }
        }
        let last_of = |i: usize| counters.iter().rev().find(|(ci, _)| *ci == i).map(|&(_, u)| u);
        let dec = (t.op == Op::Dec).then(|| last_of(t.counter)).flatten();
        let new = match j.checked_sub(1).map(trans_at) {
            Some(prev) if prev.op == Op::Inc => last_of(prev.counter),
            _ => None,
        };
        blocks.push(Block { start: s, end: u + 1, counters, dec, new });
        s = u + 1;
        j += 1;
    }
    let (pre, per) = pre_per.unwrap();

    let mut labels: BTreeMap<String, BTreeSet<Interval>> = BTreeMap::new();
    let mut put = |letter: &str, x: u64, y: u64| {
        labels.entry(letter.to_string()).or_default().insert(Interval::new(x, y));
    };
    put(P_B, 0, 1);
    for (j, b) in blocks.iter().enumerate() {
        let c = config_at(j);
        let t = trans_at(j);
        let (s, e) = (b.start, b.end);
        put(&c.state, s, s + 1);
        put(P_Q, s, s + 1);
        put(&transition_letter(t), s + 1, s + 2);
        put(P_A, s + 1, s + 2);
        put(P_B, e - 1, e);
        put(CONF, s, e);
        for u in s + 1..e {
            put(CONF_P, u, e);
        }
        put(CONF_Q, s + 1, e);
        put(CONF_A, s + 2, e);
        for &(i, u) in &b.counters {
            put(&counter_letter(i), u, u + 1);
            put(P_C, u, u + 1);
            put(&conf_counter_letter(i), u + 1, e);
        }
        for (unit, mark, conf) in [(b.dec, C_DEC, CONF_DEC), (b.new, C_NEW, CONF_NEW)] {
            if let Some(u) = unit {
                put(mark, u, u + 1);
                put(conf, u + 1, e);
            }
        }
        let Some(next) = blocks.get(j + 1) else { continue };
        for i in 1..=a.counters {
            let sources = b.counters.iter().filter(|&&(ci, u)| ci == i && Some(u) != b.dec);
            let mut targets = next.counters.iter().filter(|&&(ci, u)| ci == i && Some(u) != next.new);
            for &(_, src) in sources {
                let Some(&(_, tgt)) = targets.next() else {
                    return Err(AutomatonError::Invalid(format!("block {j} has more units of counter {i} than its successor")));
                };
                put(CORR, src + 1, tgt);
                for u in src + 2..tgt {
                    put(CORR_P, u, tgt);
                }
                put(CORR_CONF, e, tgt);
            }
        }
    }

    let longest = labels.values().flatten().map(|i| i.len()).max().unwrap_or(1);
    let domain = Domain::periodic_with_len(pre, per, longest + 1).expect("positive layout parameters");
    let Domain::UltimatelyPeriodic(period) = domain else { unreachable!() };
    let mut model = IntervalModel::new(domain);
    for cell in period.canonical_intervals() {
        for (letter, set) in &labels {
            if set.contains(&cell) {
                model.insert(letter, cell).expect("canonical cell inside the domain");
            }
        }
    }

    // The unrolled labels must agree with the periodic model wherever they are complete.
    let horizon = blocks.last().map(|b| b.start).unwrap_or(1);
    for (letter, set) in &labels {
        for x in 0..horizon {
            for y in x + 1..=horizon {
                let i = Interval::new(x, y);
                if set.contains(&i) != model.holds_atom(letter, i) {
                    return Err(AutomatonError::Invalid(format!(
                        "lasso layout is not periodic: {letter} at {i}"
                    )));
                }
            }
        }
    }
    Ok(model)
}

/// The one-state automaton looping on `a` with a zero test, and its run.
pub fn ifz_loop() -> (CounterAutomaton, Lasso) {
    let t = Transition { src: "q0".into(), letter: Some("a".into()), op: Op::Ifz, counter: 1, dst: "q0".into() };
    let a = CounterAutomaton {
        alphabet: vec!["a".into()],
        states: vec!["q0".into()],
        initial: "q0".into(),
        counters: 1,
        transitions: vec![t.clone()],
        finals: vec!["q0".into()],
    };
    let c = a.initial_config();
    let lasso = Lasso { configs: vec![c.clone(), c], transitions: vec![t], loop_start: 0 };
    (a, lasso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::{default_rounds, mc_periodic};

    #[test]
    fn ifz_layout_shape() {
        let (a, lasso) = ifz_loop();
        let model = layout_model(&a, &lasso).unwrap();
        assert_eq!(model.domain, Domain::periodic_with_len(1, 3, 4).unwrap());
        assert!(model.holds_atom("q0", Interval::new(7, 8)));
        assert!(model.holds_atom(CONF, Interval::new(4, 7)));
        assert!(!model.holds_atom(CONF, Interval::new(4, 10)));
    }

    #[test]
    fn ifz_groups_hold() {
        let (a, lasso) = ifz_loop();
        let model = layout_model(&a, &lasso).unwrap();
        for (name, f) in encode_groups(&a) {
            assert!(mc_periodic(&model, Interval::new(0, 1), &f, default_rounds(&f)).unwrap(), "{name}");
        }
    }

    #[test]
    fn targets() {
        let (a, _) = ifz_loop();
        let iab = Fragment::new([Modality::IA, Modality::B]);
        assert_eq!(encode_fragment(&a, &iab).unwrap().fragment(), iab);
        assert!(matches!(
            encode_fragment(&a, &Fragment::new([Modality::A, Modality::IE])),
            Err(AutomatonError::UnsupportedTarget(_))
        ));
    }
}
