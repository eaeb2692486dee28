//! Discrete domains, intervals and Allen-relation navigation.

use std::fmt;

use crate::error::ModelError;
use crate::modality::Modality;

/// A strict interval `[x, y]` with `x < y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub x: u64,
    pub y: u64,
}

impl Interval {
    /// Panics on a degenerate interval; use [`Interval::try_new`] for input data.
    pub fn new(x: u64, y: u64) -> Self {
        assert!(x < y, "degenerate interval [{x},{y}]");
        Interval { x, y }
    }

    pub fn try_new(x: u64, y: u64) -> Option<Self> {
        (x < y).then_some(Interval { x, y })
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u64 {
        self.y - self.x
    }

    pub fn is_unit(&self) -> bool {
        self.len() == 1
    }

    pub fn related(&self, m: Modality, other: &Interval) -> bool {
        m.relates((self.x, self.y), (other.x, other.y))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.x, self.y)
    }
}

/// Shape of an ultimately periodic valuation over the naturals.
///
/// For `x >= pre`, `[x,y]` and `[x+per, y+per]` agree; for `y >= pre` and
/// `y - x >= stable_len`, `[x,y]` and `[x, y+per]` agree. With `stable_len = 1`
/// this is the usual prefix/period definition; larger values allow bounded-length
/// labels (unit intervals, blocks) that must not stretch under the period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Periodicity {
    pub pre: u64,
    pub per: u64,
    pub stable_len: u64,
}

impl Periodicity {
    pub fn new(pre: u64, per: u64) -> Self {
        Periodicity { pre, per, stable_len: 1 }
    }

    pub fn with_stable_len(pre: u64, per: u64, stable_len: u64) -> Self {
        Periodicity { pre, per, stable_len }
    }

    /// Maps an interval to the representative of its class.
    pub fn reduce(&self, i: Interval) -> Interval {
        reduce_pair(self.pre, self.stable_len, self.per, i.x, i.y)
    }

    pub fn is_canonical(&self, i: Interval) -> bool {
        self.reduce(i) == i
    }

    /// Every representative, ordered by `(x, y)`.
    pub fn canonical_intervals(&self) -> Vec<Interval> {
        let mut out = Vec::new();
        for x in 0..self.pre + self.per {
            let end = (self.pre + self.per).max(x + self.stable_len + self.per);
            for y in x + 1..end {
                out.push(Interval::new(x, y));
            }
        }
        out
    }
}

/// Class representative of `[x, y]` for a table that is periodic from `p`
/// (shifts) and from length `k` (right extensions), with period `per`.
pub(crate) fn reduce_pair(p: u64, k: u64, per: u64, mut x: u64, mut y: u64) -> Interval {
    if x >= p + per {
        let shifts = (x - p) / per;
        x -= shifts * per;
        y -= shifts * per;
    }
    if y >= p + per && y - per >= x + k {
        // largest t with y - t*per >= p and y - t*per - x >= k
        let lower = p.max(x + k);
        let shifts = (y - lower) / per;
        y -= shifts * per;
    }
    Interval { x, y }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// Points `0..=max_point`.
    Finite { max_point: u64 },
    /// The naturals, with an ultimately periodic valuation.
    UltimatelyPeriodic(Periodicity),
}

impl Domain {
    pub fn finite(max_point: u64) -> Result<Domain, ModelError> {
        if max_point < 1 {
            return Err(ModelError::InvalidDomain("a finite domain needs at least two points".into()));
        }
        Ok(Domain::Finite { max_point })
    }

    pub fn periodic(pre: u64, per: u64) -> Result<Domain, ModelError> {
        Domain::periodic_with_len(pre, per, 1)
    }

    pub fn periodic_with_len(pre: u64, per: u64, stable_len: u64) -> Result<Domain, ModelError> {
        if pre < 1 || per < 1 || stable_len < 1 {
            return Err(ModelError::InvalidDomain("pre, per and len must all be at least 1".into()));
        }
        Ok(Domain::UltimatelyPeriodic(Periodicity::with_stable_len(pre, per, stable_len)))
    }

    pub fn contains(&self, i: Interval) -> bool {
        match self {
            Domain::Finite { max_point } => i.y <= *max_point,
            Domain::UltimatelyPeriodic(_) => true,
        }
    }
}

/// Canonical representative of `i`; the identity on finite domains.
pub fn canonical_interval(d: &Domain, i: Interval) -> Interval {
    match d {
        Domain::Finite { .. } => i,
        Domain::UltimatelyPeriodic(p) => p.reduce(i),
    }
}

/// Intervals `j` with `i R_m j` whose endpoints lie within the domain (finite) or
/// at most `horizon` (periodic).
pub fn allen_related(d: &Domain, i: Interval, m: Modality, horizon: u64) -> Vec<Interval> {
    let top = match d {
        Domain::Finite { max_point } => *max_point,
        Domain::UltimatelyPeriodic(_) => horizon,
    };
    let mut out = Vec::new();
    for x in 0..top {
        for y in x + 1..=top {
            let j = Interval::new(x, y);
            if i.related(m, &j) {
                out.push(j);
            }
        }
    }
    out
}
