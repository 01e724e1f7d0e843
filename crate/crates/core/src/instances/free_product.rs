//! Free products `L * R` and the polynomial semigroup `C[x] = C * ⟨x⟩`.

use std::fmt;

use super::{Catalog, Instance, Word, Words};
use crate::error::{Error, Result};
use crate::semigroup::{CoveringRelation, Element, Morphism, Semigroup, Subsemigroup};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side<A, B> {
    Left(A),
    Right(B),
}

/// An alternating sequence of items from the two factors (normal form).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeProductWord<A, B> {
    items: Vec<Side<A, B>>,
}

impl<A: Element, B: Element> FreeProductWord<A, B> {
    /// Builds the normal form from any item sequence, merging neighbours
    /// from the same factor with the given products.
    pub fn normalize(
        items: impl IntoIterator<Item = Side<A, B>>,
        left: impl Fn(&A, &A) -> Result<A>,
        right: impl Fn(&B, &B) -> Result<B>,
    ) -> Result<Self> {
        let mut out: Vec<Side<A, B>> = Vec::new();
        for item in items {
            let merged = match (out.last(), &item) {
                (Some(Side::Left(p)), Side::Left(q)) => Some(Side::Left(left(p, q)?)),
                (Some(Side::Right(p)), Side::Right(q)) => Some(Side::Right(right(p, q)?)),
                _ => None,
            };
            match merged {
                Some(m) => *out.last_mut().unwrap() = m,
                None => out.push(item),
            }
        }
        Ok(FreeProductWord { items: out })
    }

    pub fn left(a: A) -> Self {
        FreeProductWord {
            items: vec![Side::Left(a)],
        }
    }

    pub fn right(b: B) -> Self {
        FreeProductWord {
            items: vec![Side::Right(b)],
        }
    }

    pub fn items(&self) -> &[Side<A, B>] {
        &self.items
    }

    pub fn is_alternating(&self) -> bool {
        self.items.windows(2).all(|w| {
            matches!(
                (&w[0], &w[1]),
                (Side::Left(_), Side::Right(_)) | (Side::Right(_), Side::Left(_))
            )
        })
    }

    pub fn only_left(&self) -> bool {
        self.items.iter().all(|i| matches!(i, Side::Left(_)))
    }

    pub fn only_right(&self) -> bool {
        self.items.iter().all(|i| matches!(i, Side::Right(_)))
    }
}

impl<A: Ord, B: Ord> Ord for FreeProductWord<A, B> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.items
            .len()
            .cmp(&other.items.len())
            .then_with(|| self.items.cmp(&other.items))
    }
}

impl<A: Ord, B: Ord> PartialOrd for FreeProductWord<A, B> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<A: fmt::Display, B: fmt::Display> fmt::Display for FreeProductWord<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match item {
                Side::Left(a) => write!(f, "{a}")?,
                Side::Right(b) => write!(f, "{b}")?,
            }
        }
        Ok(())
    }
}

/// `L * R`, with at most `max_items` alternating items.
#[derive(Debug, Clone)]
pub struct FreeProduct<L, R> {
    pub left: L,
    pub right: R,
    pub max_items: usize,
}

impl<L: Semigroup, R: Semigroup> FreeProduct<L, R> {
    pub fn new(left: L, right: R, max_items: usize) -> Self {
        FreeProduct {
            left,
            right,
            max_items,
        }
    }

    /// `L` as a (nice) subsemigroup.
    pub fn left_factor() -> Subsemigroup<FreeProductWord<L::Elem, R::Elem>> {
        Subsemigroup::new("left_factor", |w: &FreeProductWord<L::Elem, R::Elem>| {
            w.only_left()
        })
        .nice()
    }

    pub fn right_factor() -> Subsemigroup<FreeProductWord<L::Elem, R::Elem>> {
        Subsemigroup::new("right_factor", |w: &FreeProductWord<L::Elem, R::Elem>| {
            w.only_right()
        })
        .nice()
    }
}

impl<L: Semigroup, R: Semigroup> Semigroup for FreeProduct<L, R> {
    type Elem = FreeProductWord<L::Elem, R::Elem>;

    fn name(&self) -> String {
        format!("{} * {}", self.left.name(), self.right.name())
    }

    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let w = FreeProductWord::normalize(
            a.items.iter().chain(&b.items).cloned(),
            |p, q| self.left.product(p, q),
            |p, q| self.right.product(p, q),
        )?;
        if w.items.len() > self.max_items {
            return Err(Error::budget(
                self.name(),
                format!("{} items exceed {}", w.items.len(), self.max_items),
            ));
        }
        Ok(w)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        !a.items.is_empty()
            && a.items.len() <= self.max_items
            && a.is_alternating()
            && a.items.iter().all(|i| match i {
                Side::Left(x) => self.left.contains(x),
                Side::Right(y) => self.right.contains(y),
            })
    }
}

/// `x^m` in the free semigroup on one generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Power(pub u32);

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 1 {
            write!(f, "x")
        } else {
            write!(f, "x^{}", self.0)
        }
    }
}

/// The free semigroup `⟨x⟩ ≅ (ℕ⁺, +)`, written multiplicatively.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeMonogenic {
    pub max_power: u32,
}

impl Semigroup for FreeMonogenic {
    type Elem = Power;

    fn name(&self) -> String {
        format!("x^(≤{})", self.max_power)
    }

    fn product(&self, a: &Power, b: &Power) -> Result<Power> {
        let s = a.0 + b.0;
        if s > self.max_power {
            return Err(Error::budget(self.name(), format!("x^{s} exceeds the budget")));
        }
        Ok(Power(s))
    }

    fn contains(&self, a: &Power) -> bool {
        (1..=self.max_power).contains(&a.0)
    }
}

impl FreeMonogenic {
    fn parse(&self, s: &str) -> Option<Power> {
        let s = s.trim();
        let m = if let Some(exp) = s.strip_prefix("x^") {
            exp.parse().ok()?
        } else if !s.is_empty() && s.bytes().all(|b| b == b'x') {
            s.len() as u32
        } else {
            return None;
        };
        self.contains(&Power(m)).then_some(Power(m))
    }
}

/// `C[x]` for `C` the free semigroup on a finite alphabet.
pub type Polynomials = FreeProduct<Words, FreeMonogenic>;
pub type Polynomial = FreeProductWord<Word, Power>;

impl Polynomials {
    pub fn polynomials(alphabet: &str, max_len: usize, max_items: usize) -> Result<Self> {
        Ok(FreeProduct::new(
            Words::constants(alphabet, max_len)?,
            FreeMonogenic {
                max_power: max_len as u32,
            },
            max_items,
        ))
    }

    /// `w(a)`: every `x^m` replaced by `a^m`, evaluated in `C`.
    pub fn eval_at(&self, w: &Polynomial, a: &Word) -> Result<Word> {
        polynomial_eval(&self.left, w, a)
    }

    /// `σ_a: w(x) ↦ w(a)` as a retraction onto `C`.
    pub fn evaluation(&self, a: Word) -> Morphism<Polynomial> {
        let c = self.left.clone();
        let name = format!("eval_{a}");
        Morphism::retraction(name, Self::left_factor(), move |w: &Polynomial| {
            Ok(FreeProductWord::left(polynomial_eval(&c, w, &a)?))
        })
    }

    /// Total length `Σ |c_i| + Σ m_j` of a polynomial word.
    pub fn weight(w: &Polynomial) -> usize {
        w.items()
            .iter()
            .map(|i| match i {
                Side::Left(c) => c.len(),
                Side::Right(p) => p.0 as usize,
            })
            .sum()
    }
}

/// Evaluates a word of `C * ⟨x⟩` at `a ∈ C`.
pub fn polynomial_eval<S: Semigroup>(
    c: &S,
    w: &FreeProductWord<S::Elem, Power>,
    a: &S::Elem,
) -> Result<S::Elem> {
    let mut acc: Option<S::Elem> = None;
    let push = |t: &S::Elem, acc: &mut Option<S::Elem>| -> Result<()> {
        *acc = Some(match acc.take() {
            None => t.clone(),
            Some(p) => c.product(&p, t)?,
        });
        Ok(())
    };
    for item in w.items() {
        match item {
            Side::Left(x) => push(x, &mut acc)?,
            Side::Right(Power(m)) => {
                for _ in 0..*m {
                    push(a, &mut acc)?;
                }
            }
        }
    }
    acc.ok_or_else(|| Error::Precondition("empty polynomial".into()))
}

/// Extends a homomorphism `σ: G → C` to `G * C → C`: items from `G` are
/// mapped by `σ`, items from `C` are kept, and the result is multiplied out
/// in `C`. The extension is a retraction onto the `C` factor.
pub fn extend_to_retraction<G, C>(
    c: C,
    name: impl Into<String>,
    sigma: impl Fn(&G::Elem) -> Result<C::Elem> + Send + Sync + 'static,
) -> Morphism<FreeProductWord<G::Elem, C::Elem>>
where
    G: Semigroup,
    C: Semigroup + 'static,
{
    Morphism::retraction(
        name,
        FreeProduct::<G, C>::right_factor(),
        move |w: &FreeProductWord<G::Elem, C::Elem>| {
            let mut acc: Option<C::Elem> = None;
            for item in w.items() {
                let t = match item {
                    Side::Left(g) => sigma(g)?,
                    Side::Right(x) => x.clone(),
                };
                acc = Some(match acc {
                    None => t,
                    Some(p) => c.product(&p, &t)?,
                });
            }
            acc.map(FreeProductWord::right)
                .ok_or_else(|| Error::Precondition("empty free-product word".into()))
        },
    )
}

/// `Σ^{-1}[c] = ⋂_σ σ^{-1}[c]` restricted to `pool`.
pub fn joint_preimage<E: Element>(maps: &[Morphism<E>], target: &E, pool: &[E]) -> Vec<E> {
    pool.iter()
        .filter(|g| maps.iter().all(|m| m.apply(g).is_ok_and(|v| &v == target)))
        .cloned()
        .collect()
}

impl Instance for Polynomials {
    /// Whitespace-separated items: `x`, `x^m` or `xx…` for powers of the
    /// variable, anything else a constant word.
    fn parse_element(&self, s: &str) -> Result<Polynomial> {
        let mut items = Vec::new();
        for tok in s.split_whitespace() {
            match self.right.parse(tok) {
                Some(p) => items.push(Side::Right(p)),
                None => items.push(Side::Left(self.left.parse_element(tok)?)),
            }
        }
        if items.is_empty() {
            return Err(Error::parse(s, "empty polynomial"));
        }
        let w = FreeProductWord::normalize(
            items,
            |p, q| self.left.product(p, q),
            |p, q| self.right.product(p, q),
        )?;
        if !self.contains(&w) {
            return Err(Error::parse(s, format!("not in {}", self.name())));
        }
        Ok(w)
    }

    /// Alternating words of at most `size` items whose constant items have
    /// length `≤ 2` and whose powers are `≤ 2`.
    fn elements_up_to(&self, size: usize) -> Vec<Polynomial> {
        let lefts: Vec<Word> = self.left.elements_up_to(2);
        let rights: Vec<Power> = (1..=self.right.max_power.min(2)).map(Power).collect();
        let mut out: Vec<Polynomial> = Vec::new();
        let mut frontier: Vec<Vec<Side<Word, Power>>> = Vec::new();
        for l in &lefts {
            frontier.push(vec![Side::Left(l.clone())]);
        }
        for r in &rights {
            frontier.push(vec![Side::Right(*r)]);
        }
        for _ in 0..size.min(self.max_items) {
            let mut next = Vec::new();
            for items in frontier {
                out.push(FreeProductWord {
                    items: items.clone(),
                });
                match items.last() {
                    Some(Side::Left(_)) => {
                        for r in &rights {
                            let mut v = items.clone();
                            v.push(Side::Right(*r));
                            next.push(v);
                        }
                    }
                    _ => {
                        for l in &lefts {
                            let mut v = items.clone();
                            v.push(Side::Left(l.clone()));
                            next.push(v);
                        }
                    }
                }
            }
            frontier = next;
        }
        out.retain(|w| self.contains(w));
        out.sort();
        out
    }

    fn catalog(&self) -> Catalog<Polynomial> {
        let mut morphisms = vec![Morphism::identity()];
        for &a in self.left.alphabet() {
            morphisms.push(self.evaluation(Word::new(vec![a])).renamed(format!("sub_{}", a as char)));
        }
        Catalog {
            morphisms,
            subsemigroups: vec![
                Subsemigroup::new("constants", |w: &Polynomial| w.only_left()).nice(),
                Subsemigroup::new("variable_powers", |w: &Polynomial| w.only_right()).nice(),
            ],
            relations: vec![CoveringRelation::new("weight", |a: &Polynomial, b: &Polynomial| {
                Polynomials::weight(a) < Polynomials::weight(b)
            })
            .covered_by(|w: &Polynomial| !w.only_left())],
        }
    }
}
