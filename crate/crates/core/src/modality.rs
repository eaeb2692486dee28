//! The twelve Allen modalities and fragments built from them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// One of the six basic Allen relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    /// meets
    A,
    /// started-by
    B,
    /// contains
    D,
    /// finished-by
    E,
    /// before
    L,
    /// overlaps
    O,
}

impl Base {
    pub const ALL: [Base; 6] = [Base::A, Base::B, Base::D, Base::E, Base::L, Base::O];

    fn letter(self) -> char {
        match self {
            Base::A => 'A',
            Base::B => 'B',
            Base::D => 'D',
            Base::E => 'E',
            Base::L => 'L',
            Base::O => 'O',
        }
    }
}

/// A HS modality: a basic relation, possibly inverted (transposed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modality {
    pub base: Base,
    pub inverted: bool,
}

impl Modality {
    pub const fn new(base: Base, inverted: bool) -> Self {
        Modality { base, inverted }
    }

    pub const A: Modality = Modality::new(Base::A, false);
    pub const IA: Modality = Modality::new(Base::A, true);
    pub const B: Modality = Modality::new(Base::B, false);
    pub const IB: Modality = Modality::new(Base::B, true);
    pub const D: Modality = Modality::new(Base::D, false);
    pub const ID: Modality = Modality::new(Base::D, true);
    pub const E: Modality = Modality::new(Base::E, false);
    pub const IE: Modality = Modality::new(Base::E, true);
    pub const L: Modality = Modality::new(Base::L, false);
    pub const IL: Modality = Modality::new(Base::L, true);
    pub const O: Modality = Modality::new(Base::O, false);
    pub const IO: Modality = Modality::new(Base::O, true);

    /// All twelve modalities in canonical (alphabetical) order.
    pub const ALL: [Modality; 12] = [
        Modality::A,
        Modality::IA,
        Modality::B,
        Modality::IB,
        Modality::D,
        Modality::ID,
        Modality::E,
        Modality::IE,
        Modality::L,
        Modality::IL,
        Modality::O,
        Modality::IO,
    ];

    pub fn inverse(self) -> Self {
        Modality::new(self.base, !self.inverted)
    }

    /// Time-reversal image: A<->iA, L<->iL, O<->iO, B<->E, iB<->iE; D and iD are fixed.
    pub fn mirror(self) -> Self {
        match self.base {
            Base::A | Base::L | Base::O => self.inverse(),
            Base::D => self,
            Base::B => Modality::new(Base::E, self.inverted),
            Base::E => Modality::new(Base::B, self.inverted),
        }
    }

    /// Concrete syntax token: `A`, `iA`, ...
    pub fn token(self) -> String {
        if self.inverted {
            format!("i{}", self.base.letter())
        } else {
            self.base.letter().to_string()
        }
    }

    /// Decides `[x,y] R [x2,y2]` on points of any linear order.
    pub fn relates(self, (x, y): (u64, u64), (x2, y2): (u64, u64)) -> bool {
        let (x, y, x2, y2) = if self.inverted { (x2, y2, x, y) } else { (x, y, x2, y2) };
        match self.base {
            Base::A => y == x2,
            Base::L => y < x2,
            Base::B => x == x2 && y2 < y,
            Base::E => y == y2 && x < x2,
            Base::D => x < x2 && y2 < y,
            Base::O => x < x2 && x2 < y && y < y2,
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for Modality {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (inverted, rest) = match s.strip_prefix('i') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let base = match rest {
            "A" => Base::A,
            "B" => Base::B,
            "D" => Base::D,
            "E" => Base::E,
            "L" => Base::L,
            "O" => Base::O,
            _ => return Err(ParseError::UnknownModality { token: s.to_string(), line: 1, column: 1 }),
        };
        Ok(Modality::new(base, inverted))
    }
}

/// A HS fragment, identified by its set of modalities.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fragment {
    modalities: BTreeSet<Modality>,
}

impl Fragment {
    pub fn new<I: IntoIterator<Item = Modality>>(mods: I) -> Self {
        Fragment { modalities: mods.into_iter().collect() }
    }

    pub fn empty() -> Self {
        Fragment::default()
    }

    pub fn contains(&self, m: Modality) -> bool {
        self.modalities.contains(&m)
    }

    pub fn insert(&mut self, m: Modality) -> bool {
        self.modalities.insert(m)
    }

    pub fn remove(&mut self, m: Modality) -> bool {
        self.modalities.remove(&m)
    }

    pub fn len(&self) -> usize {
        self.modalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modalities.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Modality> + '_ {
        self.modalities.iter().copied()
    }

    pub fn is_subset(&self, other: &Fragment) -> bool {
        self.modalities.is_subset(&other.modalities)
    }

    pub fn intersects(&self, mods: &[Modality]) -> bool {
        mods.iter().any(|m| self.contains(*m))
    }

    pub fn mirror(&self) -> Fragment {
        Fragment::new(self.iter().map(Modality::mirror))
    }

    /// Compact name such as `AiABiB`; empty fragment renders as `-`.
    pub fn compact_name(&self) -> String {
        if self.is_empty() {
            return "-".to_string();
        }
        self.iter().map(|m| m.token()).collect()
    }
}

/// Time-reversal image of a fragment.
pub fn mirror_fragment(f: &Fragment) -> Fragment {
    f.mirror()
}

impl FromIterator<Modality> for Fragment {
    fn from_iter<T: IntoIterator<Item = Modality>>(iter: T) -> Self {
        Fragment::new(iter)
    }
}

/// Space separated tokens in alphabetical order, e.g. `A iA B iB`.
impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self.iter().map(|m| m.token()).collect();
        f.write_str(&tokens.join(" "))
    }
}

impl FromStr for Fragment {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut frag = Fragment::empty();
        let mut column = 1;
        for raw in s.split(' ') {
            if !raw.is_empty() {
                let m = raw.parse::<Modality>().map_err(|_| ParseError::UnknownModality {
                    token: raw.to_string(),
                    line: 1,
                    column,
                })?;
                frag.insert(m);
            }
            column += raw.len() + 1;
        }
        Ok(frag)
    }
}
