//! The coding semigroup `G_*` used to derive Carlson's theorem.
//!
//! `G_*` is the free semigroup on the letters `⟨σ, g⟩` with
//! `σ ∈ Σ ∪ {id}` and `g ∈ G ∖ C`; `C_*` is the part where no letter carries
//! `id`. Each `σ ∈ Σ` induces the retraction `σ_*` that rewrites every `id`
//! tag to `σ`, and a coded word evaluates back to `G` as
//! `σ_1 g_1 · … · σ_n g_n`. The covering relation ties coded words to a fixed
//! base sequence `s̄` through well-formedness.

use std::fmt;

use super::{Catalog, Instance};
use crate::error::{Error, Result};
use crate::semigroup::{CoveringRelation, Element, Morphism, Semigroup, Subsemigroup};

/// The map half of a letter `⟨σ, g⟩`; `Id` sorts last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Map(u16),
    Id,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Map(i) => write!(f, "{i}"),
            Tag::Id => write!(f, "id"),
        }
    }
}

/// A nonempty word over the letters `⟨σ, g⟩`, ordered by length then
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodedWord<E> {
    letters: Vec<(Tag, E)>,
}

impl<E: Element> CodedWord<E> {
    pub fn new(letters: Vec<(Tag, E)>) -> Self {
        CodedWord { letters }
    }

    pub fn letters(&self) -> &[(Tag, E)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Membership in `C_*`.
    pub fn is_retracted(&self) -> bool {
        self.letters.iter().all(|(t, _)| *t != Tag::Id)
    }

    pub fn concat(&self, other: &Self) -> Self {
        CodedWord {
            letters: self.letters.iter().chain(&other.letters).cloned().collect(),
        }
    }
}

impl<E: Ord> Ord for CodedWord<E> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl<E: Ord> PartialOrd for CodedWord<E> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders as `id:ax 0:xb`, with `Σ` members by index; the form
/// `parse_element` reads.
impl<E: fmt::Display> fmt::Display for CodedWord<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (t, g)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}:{g}")?;
        }
        Ok(())
    }
}

/// `G_*` over a base instance, a finite set of retractions onto a nice `C`,
/// and the base sequence `s̄` that defines well-formedness.
pub struct CarlsonCode<S: Semigroup> {
    base: S,
    sigma: Vec<Morphism<S::Elem>>,
    c: Subsemigroup<S::Elem>,
    seq: Vec<S::Elem>,
    max_len: usize,
}

impl<S: Semigroup> CarlsonCode<S> {
    pub fn new(
        base: S,
        sigma: Vec<Morphism<S::Elem>>,
        c: Subsemigroup<S::Elem>,
        seq: Vec<S::Elem>,
        max_len: usize,
    ) -> Result<Self> {
        if sigma.len() > u16::MAX as usize {
            return Err(Error::Config("too many retractions".into()));
        }
        if let Some(g) = seq.iter().find(|g| c.contains(g)) {
            return Err(Error::Config(format!(
                "base sequence element {g} lies in {}",
                c.name()
            )));
        }
        if max_len == 0 {
            return Err(Error::Config("coded word budget must be positive".into()));
        }
        Ok(CarlsonCode {
            base,
            sigma,
            c,
            seq,
            max_len,
        })
    }

    pub fn base(&self) -> &S {
        &self.base
    }

    pub fn sigma(&self) -> &[Morphism<S::Elem>] {
        &self.sigma
    }

    pub fn base_subsemigroup(&self) -> &Subsemigroup<S::Elem> {
        &self.c
    }

    pub fn sequence(&self) -> &[S::Elem] {
        &self.seq
    }

    /// `σ_*`: every `⟨id, g⟩` becomes `⟨σ, g⟩`.
    pub fn star_retraction(&self, sigma_index: usize, g: &CodedWord<S::Elem>) -> CodedWord<S::Elem> {
        let tag = Tag::Map(sigma_index as u16);
        CodedWord {
            letters: g
                .letters
                .iter()
                .map(|(t, e)| (if *t == Tag::Id { tag } else { *t }, e.clone()))
                .collect(),
        }
    }

    /// `eval(⟨σ_1,g_1⟩⋯⟨σ_n,g_n⟩) = σ_1 g_1 · … · σ_n g_n`.
    pub fn eval_star(&self, g: &CodedWord<S::Elem>) -> Result<S::Elem> {
        let mut acc: Option<S::Elem> = None;
        for (t, e) in &g.letters {
            let v = match t {
                Tag::Id => e.clone(),
                Tag::Map(i) => self
                    .sigma
                    .get(*i as usize)
                    .ok_or_else(|| Error::Precondition(format!("no retraction {i}")))?
                    .apply(e)?,
            };
            acc = Some(match acc {
                None => v,
                Some(p) => self.base.product(&p, &v)?,
            });
        }
        acc.ok_or_else(|| Error::Precondition("empty coded word".into()))
    }

    /// Whether `g` reads `⟨σ_1, s_{i_1}⟩⋯⟨σ_n, s_{i_n}⟩` for some
    /// `i_1 < … < i_n`. Matching each letter to the leftmost admissible
    /// occurrence decides this even when `s̄` repeats values.
    pub fn well_formed(&self, g: &CodedWord<S::Elem>) -> bool {
        well_formed_in(&g.letters, &self.seq)
    }

    /// `h ⊰ g`: `h` ill-formed while `g` is well-formed, or `h·g` well-formed.
    pub fn star_covering(&self, h: &CodedWord<S::Elem>, g: &CodedWord<S::Elem>) -> bool {
        star_covering_in(&self.seq, h, g)
    }

    pub fn retracted_part() -> Subsemigroup<CodedWord<S::Elem>> {
        Subsemigroup::new("c_star", CodedWord::is_retracted).nice()
    }

    /// The `⊰` relation on `G_*`, with covers drawn from `G_* ∖ C_*`.
    pub fn relation(&self) -> CoveringRelation<CodedWord<S::Elem>> {
        let seq = self.seq.clone();
        CoveringRelation::new("carlson", move |h: &CodedWord<S::Elem>, g: &CodedWord<S::Elem>| {
            star_covering_in(&seq, h, g)
        })
        .covered_by(|g: &CodedWord<S::Elem>| !g.is_retracted())
    }

    pub fn star_morphisms(&self) -> Vec<Morphism<CodedWord<S::Elem>>> {
        self.sigma
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let tag = Tag::Map(i as u16);
                Morphism::retraction(
                    format!("star_{}", m.name()),
                    Self::retracted_part(),
                    move |g: &CodedWord<S::Elem>| {
                        Ok(CodedWord {
                            letters: g
                                .letters
                                .iter()
                                .map(|(t, e)| (if *t == Tag::Id { tag } else { *t }, e.clone()))
                                .collect(),
                        })
                    },
                )
            })
            .collect()
    }

    /// Distinct base letters `g` used to enumerate pools: the values of `s̄`.
    pub fn letter_values(&self) -> Vec<S::Elem> {
        let mut v = self.seq.clone();
        v.sort();
        v.dedup();
        v
    }

    fn tags(&self) -> Vec<Tag> {
        (0..self.sigma.len() as u16)
            .map(Tag::Map)
            .chain(std::iter::once(Tag::Id))
            .collect()
    }

    /// All coded words of length `1..=len` over the letters of `s̄`.
    pub fn words_up_to(&self, len: usize) -> Vec<CodedWord<S::Elem>> {
        let letters: Vec<(Tag, S::Elem)> = self
            .tags()
            .into_iter()
            .flat_map(|t| self.letter_values().into_iter().map(move |g| (t, g)))
            .collect();
        let mut out = Vec::new();
        let mut layer: Vec<Vec<(Tag, S::Elem)>> = vec![Vec::new()];
        for _ in 0..len.min(self.max_len) {
            layer = layer
                .into_iter()
                .flat_map(|w| {
                    letters.iter().map(move |l| {
                        let mut v = w.clone();
                        v.push(l.clone());
                        v
                    })
                })
                .collect();
            out.extend(layer.iter().cloned().map(CodedWord::new));
        }
        out.sort();
        out
    }
}

fn well_formed_in<'a, E: PartialEq + 'a>(letters: impl IntoIterator<Item = &'a (Tag, E)>, seq: &[E]) -> bool {
    let mut pos = 0;
    for (_, g) in letters {
        match seq[pos.min(seq.len())..].iter().position(|s| s == g) {
            Some(off) => pos += off + 1,
            None => return false,
        }
    }
    true
}

fn star_covering_in<E: Element>(seq: &[E], h: &CodedWord<E>, g: &CodedWord<E>) -> bool {
    let g_ok = well_formed_in(&g.letters, seq);
    if g_ok && !well_formed_in(&h.letters, seq) {
        return true;
    }
    well_formed_in(h.letters.iter().chain(&g.letters), seq)
}

impl<S: Semigroup> Semigroup for CarlsonCode<S> {
    type Elem = CodedWord<S::Elem>;

    fn name(&self) -> String {
        format!("carlson_code({}, ≤{})", self.base.name(), self.max_len)
    }

    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        if a.len() + b.len() > self.max_len {
            return Err(Error::budget(
                self.name(),
                format!("length {} exceeds {}", a.len() + b.len(), self.max_len),
            ));
        }
        Ok(a.concat(b))
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        !a.is_empty()
            && a.len() <= self.max_len
            && a.letters.iter().all(|(t, g)| {
                let tag_ok = match t {
                    Tag::Id => true,
                    Tag::Map(i) => (*i as usize) < self.sigma.len(),
                };
                tag_ok && self.base.contains(g) && !self.c.contains(g)
            })
    }
}

impl<S: Instance> Instance for CarlsonCode<S> {
    /// Whitespace-separated letters `tag:g`, where `tag` is `id`, a
    /// retraction index, or a retraction name.
    fn parse_element(&self, s: &str) -> Result<CodedWord<S::Elem>> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (tag, g) = tok
                .split_once(':')
                .ok_or_else(|| Error::parse(tok, "expected `tag:element`"))?;
            let tag = if tag == "id" {
                Tag::Id
            } else if let Ok(i) = tag.parse::<u16>() {
                Tag::Map(i)
            } else {
                let i = self
                    .sigma
                    .iter()
                    .position(|m| m.name() == tag)
                    .ok_or_else(|| Error::parse(tok, format!("unknown retraction `{tag}`")))?;
                Tag::Map(i as u16)
            };
            letters.push((tag, self.base.parse_element(g)?));
        }
        let w = CodedWord::new(letters);
        if !self.contains(&w) {
            return Err(Error::parse(s, format!("not in {}", self.name())));
        }
        Ok(w)
    }

    fn elements_up_to(&self, size: usize) -> Vec<CodedWord<S::Elem>> {
        self.words_up_to(size)
    }

    fn catalog(&self) -> Catalog<CodedWord<S::Elem>> {
        Catalog {
            morphisms: {
                let mut m = vec![Morphism::identity()];
                m.extend(self.star_morphisms());
                m
            },
            subsemigroups: vec![Self::retracted_part()],
            relations: vec![self.relation()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{Word, Words};

    fn code(seq: &[&str]) -> CarlsonCode<Words> {
        let base = Words::new("ab", 16).unwrap();
        let sigma = base.sigmas();
        CarlsonCode::new(
            base,
            sigma,
            Words::constant_words(),
            seq.iter().map(|s| Word::from(*s)).collect(),
            6,
        )
        .unwrap()
    }

    fn cw(letters: &[(Tag, &str)]) -> CodedWord<Word> {
        CodedWord::new(letters.iter().map(|(t, g)| (*t, Word::from(*g))).collect())
    }

    #[test]
    fn eval_examples() {
        let g = code(&["ax", "xb"]);
        assert_eq!(g.eval_star(&cw(&[(Tag::Id, "ax")])).unwrap(), Word::from("ax"));
        let two = cw(&[(Tag::Map(0), "ax"), (Tag::Id, "xb")]);
        assert_eq!(g.eval_star(&two).unwrap(), Word::from("aaxb"));
    }

    #[test]
    fn star_retraction_rewrites_id_tags() {
        let g = code(&["ax", "xb"]);
        let w = cw(&[(Tag::Id, "ax")]);
        assert_eq!(g.star_retraction(1, &w), cw(&[(Tag::Map(1), "ax")]));
        let fixed = cw(&[(Tag::Map(0), "ax"), (Tag::Map(1), "xb")]);
        assert_eq!(g.star_retraction(0, &fixed), fixed);
    }

    #[test]
    fn well_formedness() {
        let g = code(&["x", "ax", "xb"]);
        assert!(g.well_formed(&cw(&[(Tag::Id, "x"), (Tag::Map(0), "xb")])));
        assert!(!g.well_formed(&cw(&[(Tag::Id, "xb"), (Tag::Map(0), "x")])));
        assert!(!g.well_formed(&cw(&[(Tag::Id, "xa")])));
        let rep = code(&["x", "x"]);
        assert!(rep.well_formed(&cw(&[(Tag::Id, "x"), (Tag::Id, "x")])));
        assert!(!rep.well_formed(&cw(&[(Tag::Id, "x"), (Tag::Id, "x"), (Tag::Id, "x")])));
    }

    #[test]
    fn covering_clauses() {
        let g = code(&["x", "ax", "xb", "xx"]);
        let ill = cw(&[(Tag::Id, "xb"), (Tag::Id, "x")]);
        let wf = cw(&[(Tag::Id, "ax")]);
        assert!(g.star_covering(&ill, &wf));
        let early = cw(&[(Tag::Id, "x"), (Tag::Map(1), "ax")]);
        let late = cw(&[(Tag::Id, "xb"), (Tag::Id, "xx")]);
        assert!(g.star_covering(&early, &late));
        let overlap = cw(&[(Tag::Id, "ax"), (Tag::Id, "xx")]);
        assert!(!g.star_covering(&early, &overlap) || g.well_formed(&early.concat(&overlap)));
        assert!(!g.star_covering(&overlap, &early));
    }

    #[test]
    fn rejects_sequence_inside_c() {
        let base = Words::new("ab", 8).unwrap();
        let sigma = base.sigmas();
        assert!(CarlsonCode::new(base, sigma, Words::constant_words(), vec![Word::from("ab")], 3).is_err());
    }
}
