//! Incrementing counter automata and the `.ica` format.
//!
//! ```text
//! alphabet a b
//! states q0 q1
//! init q0
//! final q1
//! counters 1
//! trans q0 a inc 1 q1
//! trans q1 eps dec 1 q0
//! ```

use std::collections::BTreeSet;
use std::fmt;

use crate::error::AutomatonError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Inc,
    Dec,
    Ifz,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Inc => "inc",
            Op::Dec => "dec",
            Op::Ifz => "ifz",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub src: String,
    /// `None` is an epsilon move.
    pub letter: Option<String>,
    pub op: Op,
    /// 1-based counter index.
    pub counter: usize,
    pub dst: String,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = self.letter.as_deref().unwrap_or("eps");
        write!(f, "({}, {}, ({}, {}), {})", self.src, letter, self.op, self.counter, self.dst)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterAutomaton {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub counters: usize,
    pub transitions: Vec<Transition>,
    pub finals: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Config {
    pub state: String,
    pub values: Vec<u64>,
}

impl Config {
    pub fn new(state: impl Into<String>, values: Vec<u64>) -> Self {
        Config { state: state.into(), values }
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({}, [{}])", self.state, vals.join(","))
    }
}

impl CounterAutomaton {
    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<(), AutomatonError> {
        let invalid = |m: String| Err(AutomatonError::Invalid(m));
        let unique = |items: &[String], what: &str| -> Result<(), AutomatonError> {
            let set: BTreeSet<&String> = items.iter().collect();
            if set.len() != items.len() {
                return Err(AutomatonError::Invalid(format!("duplicate {what}")));
            }
            Ok(())
        };
        unique(&self.states, "state")?;
        unique(&self.alphabet, "letter")?;
        if let Some(n) = self.states.iter().chain(&self.alphabet).find(|n| n.starts_with("__")) {
            return invalid(format!("name {n} uses the reserved prefix __"));
        }
        if let Some(n) = self.states.iter().find(|q| self.alphabet.contains(q)) {
            return invalid(format!("{n} is both a state and a letter"));
        }
        if !self.states.contains(&self.initial) {
            return invalid(format!("initial state {} is not a state", self.initial));
        }
        if let Some(f) = self.finals.iter().find(|f| !self.states.contains(f)) {
            return invalid(format!("final state {f} is not a state"));
        }
        for t in &self.transitions {
            if !self.states.contains(&t.src) || !self.states.contains(&t.dst) {
                return invalid(format!("transition {t} uses an unknown state"));
            }
            if let Some(a) = &t.letter {
                if !self.alphabet.contains(a) {
                    return invalid(format!("transition {t} uses an unknown letter"));
                }
            }
            if t.counter == 0 || t.counter > self.counters {
                return invalid(format!("transition {t} uses counter {} outside 1..{}", t.counter, self.counters));
            }
        }
        Ok(())
    }

    pub fn initial_config(&self) -> Config {
        Config::new(self.initial.clone(), vec![0; self.counters])
    }

    pub fn is_final(&self, state: &str) -> bool {
        self.finals.iter().any(|f| f == state)
    }
}

fn malformed(line: usize, message: impl Into<String>) -> AutomatonError {
    AutomatonError::Malformed { line, message: message.into() }
}

/// Parses and validates a `.ica` document.
pub fn load_automaton(text: &str) -> Result<CounterAutomaton, AutomatonError> {
    let mut a = CounterAutomaton {
        alphabet: Vec::new(),
        states: Vec::new(),
        initial: String::new(),
        counters: 0,
        transitions: Vec::new(),
        finals: Vec::new(),
    };
    let (mut seen_init, mut seen_counters) = (false, false);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let words: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let Some((&head, rest)) = words.split_first() else { continue };
        let owned = || rest.iter().map(|s| s.to_string());
        match head {
            "alphabet" => a.alphabet.extend(owned()),
            "states" => a.states.extend(owned()),
            "final" => a.finals.extend(owned()),
            "init" => {
                let [q] = rest else { return Err(malformed(line, "expected `init STATE`")) };
                a.initial = q.to_string();
                seen_init = true;
            }
            "counters" => {
                let [k] = rest else { return Err(malformed(line, "expected `counters K`")) };
                a.counters = k.parse().map_err(|_| malformed(line, format!("bad counter count `{k}`")))?;
                seen_counters = true;
            }
            "trans" => {
                let [src, letter, op, index, dst] = rest else {
                    return Err(malformed(line, "expected `trans SRC LETTER|eps OP INDEX DST`"));
                };
                let op = match *op {
                    "inc" => Op::Inc,
                    "dec" => Op::Dec,
                    "ifz" => Op::Ifz,
                    other => return Err(malformed(line, format!("unknown operation `{other}`"))),
                };
                let counter = index.parse().map_err(|_| malformed(line, format!("bad counter index `{index}`")))?;
                let letter = (*letter != "eps").then(|| letter.to_string());
                a.transitions.push(Transition { src: src.to_string(), letter, op, counter, dst: dst.to_string() });
            }
            other => return Err(malformed(line, format!("unknown directive `{other}`"))),
        }
    }
    if !seen_init {
        return Err(malformed(0, "missing `init`"));
    }
    if !seen_counters {
        return Err(malformed(0, "missing `counters`"));
    }
    a.validate()?;
    Ok(a)
}

/// Exact step of a transition.
pub fn step_exact(a: &CounterAutomaton, c: &Config, t: &Transition) -> Result<Config, AutomatonError> {
    if !a.transitions.contains(t) {
        return Err(AutomatonError::Invalid(format!("{t} is not a transition")));
    }
    if t.src != c.state {
        return Err(AutomatonError::Invalid(format!("{t} does not leave state {}", c.state)));
    }
    if c.values.len() != a.counters {
        return Err(AutomatonError::Invalid(format!("configuration {c} has the wrong number of counters")));
    }
    let i = t.counter - 1;
    let mut values = c.values.clone();
    match t.op {
        Op::Inc => values[i] += 1,
        Op::Dec => {
            if values[i] == 0 {
                return Err(AutomatonError::Guard(format!("{t} decrements counter {} at zero", t.counter)));
            }
            values[i] -= 1;
        }
        Op::Ifz => {
            if values[i] != 0 {
                return Err(AutomatonError::Guard(format!("{t} tests counter {} = {} for zero", t.counter, values[i])));
            }
        }
    }
    Ok(Config::new(t.dst.clone(), values))
}

/// All vectors `v + d` with every `d_i` in `0..=slack`.
fn inflations(v: &[u64], slack: u64) -> Vec<Vec<u64>> {
    let mut out = vec![v.to_vec()];
    for i in 0..v.len() {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..=slack).map(move |d| {
                    let mut w = w.clone();
                    w[i] += d;
                    w
                })
            })
            .collect();
    }
    out
}

/// Successors under a faulty step: counters may grow by up to `slack` each,
/// before and after the exact step.
pub fn step_incrementing(a: &CounterAutomaton, c: &Config, t: &Transition, slack: u64) -> BTreeSet<Config> {
    let mut out = BTreeSet::new();
    for pre in inflations(&c.values, slack) {
        let Ok(next) = step_exact(a, &Config::new(c.state.clone(), pre), t) else { continue };
        for post in inflations(&next.values, slack) {
            out.insert(Config::new(next.state.clone(), post));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> CounterAutomaton {
        load_automaton(
            "alphabet a b\nstates q0 q1\ninit q0\nfinal q1\ncounters 1\n\
             trans q0 a inc 1 q1\ntrans q1 b dec 1 q0\ntrans q0 a ifz 1 q0\ntrans q0 eps dec 1 q0\n",
        )
        .unwrap()
    }

    fn t(a: &CounterAutomaton, k: usize) -> Transition {
        a.transitions[k].clone()
    }

    #[test]
    fn exact_steps() {
        let a = two_state();
        assert_eq!(step_exact(&a, &Config::new("q0", vec![0]), &t(&a, 0)).unwrap(), Config::new("q1", vec![1]));
        assert_eq!(step_exact(&a, &Config::new("q1", vec![1]), &t(&a, 1)).unwrap(), Config::new("q0", vec![0]));
        assert!(matches!(step_exact(&a, &Config::new("q0", vec![2]), &t(&a, 2)), Err(AutomatonError::Guard(_))));
        assert!(matches!(step_exact(&a, &Config::new("q1", vec![0]), &t(&a, 1)), Err(AutomatonError::Guard(_))));
        assert!(matches!(step_exact(&a, &Config::new("q1", vec![0]), &t(&a, 0)), Err(AutomatonError::Invalid(_))));
    }

    #[test]
    fn faulty_steps() {
        let a = two_state();
        let zero = Config::new("q0", vec![0]);
        let expect: BTreeSet<Config> = [Config::new("q0", vec![0]), Config::new("q0", vec![1])].into();
        assert_eq!(step_incrementing(&a, &zero, &t(&a, 2), 1), expect);
        assert_eq!(step_incrementing(&a, &zero, &t(&a, 3), 1), expect);
        let exact: BTreeSet<Config> = [Config::new("q1", vec![1])].into();
        assert_eq!(step_incrementing(&a, &zero, &t(&a, 0), 0), exact);
    }

    #[test]
    fn parse_errors() {
        assert!(load_automaton("states q0\ninit q1\ncounters 1").is_err());
        assert!(load_automaton("states q0\ninit q0\ncounters 1\ntrans q0 a inc 1 q0").is_err());
        assert!(load_automaton("states q0\ninit q0\ncounters 1\ntrans q0 eps inc 2 q0").is_err());
        assert!(matches!(
            load_automaton("states q0\ninit q0\ncounters 1\ntrans q0 eps jump 1 q0"),
            Err(AutomatonError::Malformed { line: 4, .. })
        ));
        assert!(load_automaton("states q0\ninit q0\ncounters 1\ntrans q0 eps ifz 1 q0\n").is_ok());
    }
}
