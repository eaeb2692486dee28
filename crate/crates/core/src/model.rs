//! Interval models and the `.ism` text format.
//!
//! ```text
//! # comment
//! order periodic pre=2 per=3
//! val p 1 4
//! ```
//!
//! Periodic headers accept an optional `len=K` (default 1), the minimal length
//! from which right extensions by a period are truth preserving.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::ModelError;
use crate::interval::{canonical_interval, Domain, Interval};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalModel {
    pub domain: Domain,
    valuation: BTreeMap<String, BTreeSet<Interval>>,
}

impl IntervalModel {
    pub fn new(domain: Domain) -> Self {
        IntervalModel { domain, valuation: BTreeMap::new() }
    }

    /// Adds `letter` at the class of `i`. Returns false if it was already there.
    pub fn insert(&mut self, letter: &str, i: Interval) -> Result<bool, ModelError> {
        if !self.domain.contains(i) {
            return Err(ModelError::OutOfDomain { line: 0, x: i.x, y: i.y });
        }
        let c = canonical_interval(&self.domain, i);
        Ok(self.valuation.entry(letter.to_string()).or_default().insert(c))
    }

    pub fn remove(&mut self, letter: &str, i: Interval) -> bool {
        let c = canonical_interval(&self.domain, i);
        self.valuation.get_mut(letter).is_some_and(|s| s.remove(&c))
    }

    /// Truth of a letter anywhere in the domain; absent letters are false everywhere.
    pub fn holds_atom(&self, letter: &str, i: Interval) -> bool {
        if !self.domain.contains(i) {
            return false;
        }
        let c = canonical_interval(&self.domain, i);
        self.valuation.get(letter).is_some_and(|s| s.contains(&c))
    }

    pub fn letters(&self) -> impl Iterator<Item = &str> {
        self.valuation.keys().map(|s| s.as_str())
    }

    /// Stored (canonical) intervals of a letter.
    pub fn intervals(&self, letter: &str) -> impl Iterator<Item = Interval> + '_ {
        self.valuation.get(letter).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<Interval>> {
        &self.valuation
    }

    /// Time reversal of a finite model: `[x,y]` becomes `[N-y, N-x]`.
    pub fn reverse(&self) -> Option<IntervalModel> {
        let Domain::Finite { max_point: n } = self.domain else {
            return None;
        };
        let mut out = IntervalModel::new(self.domain);
        for (p, set) in &self.valuation {
            let entry = out.valuation.entry(p.clone()).or_default();
            for i in set {
                entry.insert(Interval::new(n - i.y, n - i.x));
            }
        }
        Some(out)
    }
}

fn malformed(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Malformed { line, message: message.into() }
}

fn parse_num(line: usize, s: &str) -> Result<u64, ModelError> {
    s.parse().map_err(|_| malformed(line, format!("expected a natural number, found `{s}`")))
}

fn parse_key(line: usize, tok: &str, key: &str) -> Result<u64, ModelError> {
    let value = tok
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| malformed(line, format!("expected `{key}=N`, found `{tok}`")))?;
    parse_num(line, value)
}

fn parse_header(line: usize, words: &[&str]) -> Result<Domain, ModelError> {
    let domain = match words {
        ["order", "finite", n] => Domain::finite(parse_num(line, n)?),
        ["order", "periodic", pre, per] => {
            Domain::periodic(parse_key(line, pre, "pre")?, parse_key(line, per, "per")?)
        }
        ["order", "periodic", pre, per, len] => Domain::periodic_with_len(
            parse_key(line, pre, "pre")?,
            parse_key(line, per, "per")?,
            parse_key(line, len, "len")?,
        ),
        _ => return Err(malformed(line, "expected `order finite N` or `order periodic pre=P per=Q`")),
    };
    domain.map_err(|e| match e {
        ModelError::InvalidDomain(m) => malformed(line, m),
        other => other,
    })
}

fn is_letter(s: &str) -> bool {
    let mut chars = s.chars();
    let head = match chars.next() {
        Some(c) if c.is_ascii_lowercase() => true,
        Some('_') => s.starts_with("__") && s.len() > 2,
        _ => false,
    };
    head && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a `.ism` document.
pub fn load_model(text: &str) -> Result<IntervalModel, ModelError> {
    let mut model: Option<IntervalModel> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        match words[0] {
            "order" => {
                if model.is_some() {
                    return Err(malformed(line, "duplicate `order` header"));
                }
                model = Some(IntervalModel::new(parse_header(line, &words)?));
            }
            "val" => {
                let m = model.as_mut().ok_or_else(|| malformed(line, "`val` before the `order` header"))?;
                let [_, letter, x, y] = words[..] else {
                    return Err(malformed(line, "expected `val LETTER X Y`"));
                };
                if !is_letter(letter) {
                    return Err(malformed(line, format!("`{letter}` is not a proposition letter")));
                }
                let (x, y) = (parse_num(line, x)?, parse_num(line, y)?);
                let i = Interval::try_new(x, y).ok_or(ModelError::Degenerate { line, x, y })?;
                if !m.domain.contains(i) {
                    return Err(ModelError::OutOfDomain { line, x, y });
                }
                if !m.insert(letter, i)? {
                    let interval = canonical_interval(&m.domain, i);
                    return Err(ModelError::Duplicate { line, letter: letter.to_string(), interval });
                }
            }
            other => return Err(malformed(line, format!("unknown directive `{other}`"))),
        }
    }
    model.ok_or_else(|| malformed(0, "missing `order` header"))
}

/// Renders a model; `load_model(save_model(m)) == m`.
pub fn save_model(m: &IntervalModel) -> String {
    let mut out = String::new();
    match m.domain {
        Domain::Finite { max_point } => writeln!(out, "order finite {max_point}").unwrap(),
        Domain::UltimatelyPeriodic(p) if p.stable_len == 1 => {
            writeln!(out, "order periodic pre={} per={}", p.pre, p.per).unwrap()
        }
        Domain::UltimatelyPeriodic(p) => {
            writeln!(out, "order periodic pre={} per={} len={}", p.pre, p.per, p.stable_len).unwrap()
        }
    }
    for (p, set) in &m.valuation {
        for i in set {
            writeln!(out, "val {p} {} {}", i.x, i.y).unwrap();
        }
    }
    out
}

/// A model followed by its `witness X Y` record.
pub fn save_certificate(m: &IntervalModel, witness: Interval) -> String {
    format!("{}witness {} {}\n", save_model(m), witness.x, witness.y)
}

/// Parses a certificate: a `.ism` model with one `witness X Y` line.
pub fn load_certificate(text: &str) -> Result<(IntervalModel, Interval), ModelError> {
    let mut witness = None;
    let mut body = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let words: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        if words.first() == Some(&"witness") {
            let line = idx + 1;
            let [_, x, y] = words[..] else { return Err(malformed(line, "expected `witness X Y`")) };
            if witness.is_some() {
                return Err(malformed(line, "duplicate `witness` line"));
            }
            let (x, y) = (parse_num(line, x)?, parse_num(line, y)?);
            witness = Some(Interval::try_new(x, y).ok_or(ModelError::Degenerate { line, x, y })?);
            body.push('\n');
        } else {
            body.push_str(raw);
            body.push('\n');
        }
    }
    let model = load_model(&body)?;
    let witness = witness.ok_or_else(|| malformed(0, "missing `witness` line"))?;
    if !model.domain.contains(witness) {
        return Err(ModelError::OutOfDomain { line: 0, x: witness.x, y: witness.y });
    }
    Ok((model, witness))
}
