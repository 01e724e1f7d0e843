//! Words over `A ∪ {x}` under concatenation.
//!
//! Constant words (no `x`) form a nice subsemigroup `C`, and each
//! substitution `σ_a: t ↦ t(a)` is a retraction onto it.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::{Catalog, Instance};
use crate::error::{Error, Result};
use crate::semigroup::{CoveringRelation, Morphism, Semigroup, Subsemigroup};

/// The distinguished variable symbol.
pub const VARIABLE: u8 = b'x';

/// A nonempty word; symbols are ASCII bytes. Ordered by length, then
/// bytewise.
#[derive(Clone)]
pub struct Word(Repr);

const INLINE: usize = 22;

// Short words are stored in place so that cloning them is a plain copy.
#[derive(Clone)]
enum Repr {
    Inline { len: u8, buf: [u8; INLINE] },
    Heap(Box<[u8]>),
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.symbols() == other.symbols()
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.symbols().hash(state);
    }
}

impl Word {
    pub fn new(symbols: impl AsRef<[u8]>) -> Self {
        let s = symbols.as_ref();
        if s.len() <= INLINE {
            let mut buf = [0; INLINE];
            buf[..s.len()].copy_from_slice(s);
            Word(Repr::Inline { len: s.len() as u8, buf })
        } else {
            Word(Repr::Heap(s.into()))
        }
    }

    pub fn symbols(&self) -> &[u8] {
        match &self.0 {
            Repr::Inline { len, buf } => &buf[..*len as usize],
            Repr::Heap(b) => b,
        }
    }

    pub fn len(&self) -> usize {
        self.symbols().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_constant(&self) -> bool {
        !self.symbols().contains(&VARIABLE)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let (a, b) = (self.symbols(), other.symbols());
        if a.len() + b.len() <= INLINE {
            let mut buf = [0; INLINE];
            buf[..a.len()].copy_from_slice(a);
            buf[a.len()..a.len() + b.len()].copy_from_slice(b);
            Word(Repr::Inline { len: (a.len() + b.len()) as u8, buf })
        } else {
            Word::new([a, b].concat())
        }
    }

    /// `t(a)`: every occurrence of the variable replaced by `a`.
    pub fn substituted(&self, a: u8) -> Word {
        let mut w = self.clone();
        let symbols = match &mut w.0 {
            Repr::Inline { len, buf } => &mut buf[..*len as usize],
            Repr::Heap(b) => &mut b[..],
        };
        for s in symbols.iter_mut().filter(|s| **s == VARIABLE) {
            *s = a;
        }
        w
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.symbols().cmp(other.symbols()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(self.symbols()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word::new(s)
    }
}

/// Words of length `1..=max_len` over `alphabet`, plus the variable unless
/// the instance is restricted to constant words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Words {
    alphabet: Vec<u8>,
    max_len: usize,
    with_variable: bool,
}

impl Words {
    pub fn new(alphabet: &str, max_len: usize) -> Result<Self> {
        let mut letters: Vec<u8> = alphabet.bytes().collect();
        letters.sort_unstable();
        letters.dedup();
        if letters.is_empty() {
            return Err(Error::Config("alphabet must be nonempty".into()));
        }
        if let Some(bad) = letters
            .iter()
            .find(|&&c| c == VARIABLE || !c.is_ascii_graphic())
        {
            return Err(Error::Config(format!(
                "alphabet symbol `{}` is reserved or not printable",
                *bad as char
            )));
        }
        if max_len == 0 {
            return Err(Error::Config("word budget must be positive".into()));
        }
        Ok(Words {
            alphabet: letters,
            max_len,
            with_variable: true,
        })
    }

    /// The free semigroup `C = A⁺` on its own.
    pub fn constants(alphabet: &str, max_len: usize) -> Result<Self> {
        let mut w = Words::new(alphabet, max_len)?;
        w.with_variable = false;
        Ok(w)
    }

    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    fn symbols(&self) -> Vec<u8> {
        let mut s = self.alphabet.clone();
        if self.with_variable {
            s.push(VARIABLE);
        }
        s.sort_unstable();
        s
    }

    /// The retraction `σ_a`.
    pub fn substitute(&self, w: &Word, a: u8) -> Result<Word> {
        if !self.alphabet.contains(&a) {
            return Err(Error::Precondition(format!(
                "`{}` is not in the alphabet",
                a as char
            )));
        }
        Ok(w.substituted(a))
    }

    pub fn constant_words() -> Subsemigroup<Word> {
        Subsemigroup::new("constants", Word::is_constant).nice()
    }

    pub fn sigma(&self, a: u8) -> Morphism<Word> {
        Morphism::retraction(
            format!("sub_{}", a as char),
            Self::constant_words(),
            move |w: &Word| Ok(w.substituted(a)),
        )
    }

    /// `{σ_a : a ∈ A}`.
    pub fn sigmas(&self) -> Vec<Morphism<Word>> {
        self.alphabet.iter().map(|&a| self.sigma(a)).collect()
    }

    /// Strict length order, covered by the variable words.
    pub fn length_order() -> CoveringRelation<Word> {
        CoveringRelation::new("length", |a: &Word, b: &Word| a.len() < b.len())
            .covered_by(|w: &Word| !w.is_constant())
    }

    pub fn variable_words_up_to(&self, len: usize) -> Vec<Word> {
        self.elements_up_to(len)
            .into_iter()
            .filter(|w| !w.is_constant())
            .collect()
    }

    /// All words of exactly `len` symbols over `symbols`, bytewise ordered.
    pub fn words_of_len(symbols: &[u8], len: usize) -> Vec<Word> {
        let mut out = vec![Vec::with_capacity(len)];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u8>| {
                    symbols.iter().map(move |&s| {
                        let mut p = prefix.clone();
                        p.push(s);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Word::new).collect()
    }
}

impl Semigroup for Words {
    type Elem = Word;

    fn name(&self) -> String {
        let kind = if self.with_variable { "words" } else { "constant_words" };
        format!(
            "{kind}({}, ≤{})",
            String::from_utf8_lossy(&self.alphabet),
            self.max_len
        )
    }

    fn product(&self, a: &Word, b: &Word) -> Result<Word> {
        if a.len() + b.len() > self.max_len {
            return Err(Error::budget(
                self.name(),
                format!("length {} exceeds {}", a.len() + b.len(), self.max_len),
            ));
        }
        Ok(a.concat(b))
    }

    fn contains(&self, a: &Word) -> bool {
        !a.is_empty()
            && a.len() <= self.max_len
            && a.symbols().iter().all(|s| {
                self.alphabet.contains(s) || (self.with_variable && *s == VARIABLE)
            })
    }
}

impl Instance for Words {
    fn parse_element(&self, s: &str) -> Result<Word> {
        let w = Word::from(s.trim());
        if w.is_empty() {
            return Err(Error::parse(s, "empty word"));
        }
        if !self.contains(&w) {
            return Err(Error::parse(s, format!("not a word of {}", self.name())));
        }
        Ok(w)
    }

    fn elements_up_to(&self, size: usize) -> Vec<Word> {
        let symbols = self.symbols();
        (1..=size.min(self.max_len))
            .flat_map(|len| Self::words_of_len(&symbols, len))
            .collect()
    }

    fn catalog(&self) -> Catalog<Word> {
        let mut morphisms = vec![Morphism::identity()];
        let mut subsemigroups = Vec::new();
        let mut relations = vec![CoveringRelation::new("length", |a: &Word, b: &Word| {
            a.len() < b.len()
        })];
        if self.with_variable {
            morphisms.extend(self.sigmas());
            subsemigroups.push(Self::constant_words());
            subsemigroups.push(Subsemigroup::new("variable_words", |w: &Word| !w.is_constant()));
            relations[0] = Self::length_order();
        }
        Catalog {
            morphisms,
            subsemigroups,
            relations,
        }
    }
}
