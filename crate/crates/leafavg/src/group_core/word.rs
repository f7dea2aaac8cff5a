use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator or its inverse, packed as `2 * (index - 1) + inverse`.
///
/// The packed order `a1 < A1 < a2 < A2 < ...` is the letter order used for
/// lexicographic tie-breaks everywhere in the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(u16);

impl Gen {
    pub fn new(index: usize, inverse: bool) -> Gen {
        assert!((1..=32_768).contains(&index), "generator index out of range");
        Gen(((index - 1) * 2 + inverse as usize) as u16)
    }

    pub fn from_code(code: usize) -> Gen {
        Gen(code as u16)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// 1-based generator index.
    pub fn index(self) -> usize {
        (self.0 / 2) as usize + 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Gen {
        Gen(self.0 ^ 1)
    }

    /// All `2k` letters in letter order.
    pub fn all(k: usize) -> impl Iterator<Item = Gen> + Clone {
        (0..2 * k).map(Gen::from_code)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.is_inverse() { 'A' } else { 'a' };
        write!(f, "{}{}", c, self.index())
    }
}

impl fmt::Debug for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite word over the generators. Ordered shortlex: by length, then
/// lexicographically in letter order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Gen>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Gen>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_index(&self) -> usize {
        self.0.iter().map(|g| g.index()).max().unwrap_or(0)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Free reduction.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Gen> = Vec::with_capacity(self.0.len());
        for &g in &self.0 {
            if out.last() == Some(&g.inverse()) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

pub fn reduce(w: &Word) -> Word {
    w.reduce()
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for g in &self.0 {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `a1A2a1`; whitespace is ignored and `e` or `""` is the empty word.
    fn from_str(s: &str) -> Result<Word> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "e" {
            return Ok(Word::empty());
        }
        let bytes = s.as_bytes();
        let mut i = 0;
        let mut out = Vec::new();
        while i < bytes.len() {
            let inverse = match bytes[i] {
                b'a' => false,
                b'A' => true,
                c => return Err(Error::Parse(format!("unexpected '{}' in word {s:?}", c as char))),
            };
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let idx: usize = s[start..i]
                .parse()
                .map_err(|_| Error::Parse(format!("missing generator index in {s:?}")))?;
            if idx == 0 {
                return Err(Error::Parse("generator indices start at 1".into()));
            }
            out.push(Gen::new(idx, inverse));
        }
        Ok(Word(out))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation() {
        assert_eq!(w("a1A1").reduce(), Word::empty());
        assert_eq!(w("a1a2A2").reduce(), w("a1"));
        assert_eq!(w("a1a2A1").reduce(), w("a1a2A1"));
    }

    #[test]
    fn round_trip_text() {
        for s in ["e", "a1", "A3a12A1"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert!("b1".parse::<Word>().is_err());
        assert!("a0".parse::<Word>().is_err());
    }

    #[test]
    fn shortlex() {
        assert!(w("A2") < w("a1a1"));
        assert!(w("a1A2") < w("A1a1"));
        assert!(w("a1") < w("A1"));
    }

    #[test]
    fn inverse_flips() {
        let g = Gen::new(3, false);
        assert_eq!(g.inverse().inverse(), g);
        assert_eq!(g.inverse().index(), 3);
        assert!(g.inverse().is_inverse());
        assert_eq!(w("a1a2").inverse(), w("A2A1"));
    }
}
