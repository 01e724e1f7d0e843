//! Abstract layer: semigroups, morphisms, nice subsemigroups and covering
//! relations.
//!
//! Every concrete semigroup in the crate implements [`Semigroup`]. Morphisms,
//! subsemigroups and relations are plain values wrapping shared closures so
//! they can be built at runtime (from a config file) and shared between
//! worker threads. The axioms the rest of the crate relies on are checked by
//! the exhaustive verifiers in [`verify`].

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::Result;

pub mod verify;

pub use verify::{
    verify_associativity, verify_covering, verify_dot_closed, verify_morphism, verify_niceness,
    Cover, CoveringReport, Report, Violation,
};

/// Bounds required of an element type.
///
/// `Ord` is the canonical total order of the instance; it decides which
/// witness a search reports when several exist.
pub trait Element: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl<T> Element for T where T: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {}

/// A semigroup with a (possibly generated) carrier and a budget.
pub trait Semigroup: Send + Sync {
    type Elem: Element;

    fn name(&self) -> String;

    /// Canonical form of `a · b`. Fails with a budget error instead of
    /// truncating, since truncation would break associativity.
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    /// Normal form of an element. Instances that build normalized values
    /// directly keep the default.
    fn canonical(&self, a: &Self::Elem) -> Self::Elem {
        a.clone()
    }

    /// Membership in the carrier (including the budget).
    fn contains(&self, a: &Self::Elem) -> bool;

    /// Product of a nonempty sequence, left to right.
    fn product_all<'a, I>(&self, items: I) -> Result<Option<Self::Elem>>
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut acc: Option<Self::Elem> = None;
        for x in items {
            acc = Some(match acc {
                None => x.clone(),
                Some(p) => self.product(&p, x)?,
            });
        }
        Ok(acc)
    }
}

impl<S: Semigroup + ?Sized> Semigroup for &S {
    type Elem = S::Elem;

    fn name(&self) -> String {
        (**self).name()
    }
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        (**self).product(a, b)
    }
    fn canonical(&self, a: &Self::Elem) -> Self::Elem {
        (**self).canonical(a)
    }
    fn contains(&self, a: &Self::Elem) -> bool {
        (**self).contains(a)
    }
}

impl<S: Semigroup + ?Sized> Semigroup for Arc<S> {
    type Elem = S::Elem;

    fn name(&self) -> String {
        (**self).name()
    }
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        (**self).product(a, b)
    }
    fn canonical(&self, a: &Self::Elem) -> Self::Elem {
        (**self).canonical(a)
    }
    fn contains(&self, a: &Self::Elem) -> bool {
        (**self).contains(a)
    }
}

pub type Predicate<E> = Arc<dyn Fn(&E) -> bool + Send + Sync>;
pub type Relation<E> = Arc<dyn Fn(&E, &E) -> bool + Send + Sync>;
pub type MapFn<E> = Arc<dyn Fn(&E) -> Result<E> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    Endomorphism,
    Retraction,
}

/// A named total map on the carrier, declared to be a homomorphism.
#[derive(Clone)]
pub struct Morphism<E> {
    name: String,
    kind: MorphismKind,
    map: MapFn<E>,
    target: Option<Subsemigroup<E>>,
}

impl<E: Element> Morphism<E> {
    pub fn endomorphism(
        name: impl Into<String>,
        map: impl Fn(&E) -> Result<E> + Send + Sync + 'static,
    ) -> Self {
        Morphism {
            name: name.into(),
            kind: MorphismKind::Endomorphism,
            map: Arc::new(map),
            target: None,
        }
    }

    /// A homomorphism onto `target` that fixes `target` pointwise.
    pub fn retraction(
        name: impl Into<String>,
        target: Subsemigroup<E>,
        map: impl Fn(&E) -> Result<E> + Send + Sync + 'static,
    ) -> Self {
        Morphism {
            name: name.into(),
            kind: MorphismKind::Retraction,
            map: Arc::new(map),
            target: Some(target),
        }
    }

    pub fn identity() -> Self {
        Morphism::endomorphism("id", |e: &E| Ok(e.clone()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> MorphismKind {
        self.kind
    }

    pub fn target(&self) -> Option<&Subsemigroup<E>> {
        self.target.as_ref()
    }

    pub fn apply(&self, e: &E) -> Result<E> {
        (self.map)(e)
    }

    /// `self ∘ inner`: apply `inner` first. The result is an endomorphism;
    /// retraction status is not inherited.
    pub fn compose(&self, inner: &Morphism<E>) -> Morphism<E> {
        let (outer, inner_map) = (self.map.clone(), inner.map.clone());
        Morphism {
            name: format!("{}∘{}", self.name, inner.name),
            kind: MorphismKind::Endomorphism,
            map: Arc::new(move |e| outer(&inner_map(e)?)),
            target: None,
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl<E> fmt::Debug for Morphism<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Morphism")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .finish()
    }
}

/// A subsemigroup given by a membership predicate over the parent carrier.
#[derive(Clone)]
pub struct Subsemigroup<E> {
    name: String,
    member: Predicate<E>,
    nice: bool,
}

impl<E: Element> Subsemigroup<E> {
    pub fn new(name: impl Into<String>, member: impl Fn(&E) -> bool + Send + Sync + 'static) -> Self {
        Subsemigroup {
            name: name.into(),
            member: Arc::new(member),
            nice: false,
        }
    }

    /// Flag the subsemigroup as nice: `a·b ∈ C` implies `a, b ∈ C`.
    pub fn nice(mut self) -> Self {
        self.nice = true;
        self
    }

    pub fn empty() -> Self {
        Subsemigroup::new("∅", |_| false).nice()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_nice(&self) -> bool {
        self.nice
    }

    pub fn contains(&self, e: &E) -> bool {
        (self.member)(e)
    }
}

impl<E> fmt::Debug for Subsemigroup<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subsemigroup")
            .field("name", &self.name)
            .field("nice", &self.nice)
            .finish()
    }
}

/// A binary relation `⊰` with an optional pool `B` that covers are drawn from.
#[derive(Clone)]
pub struct CoveringRelation<E> {
    name: String,
    rel: Relation<E>,
    cover_pool: Option<Predicate<E>>,
}

impl<E: Element> CoveringRelation<E> {
    pub fn new(name: impl Into<String>, rel: impl Fn(&E, &E) -> bool + Send + Sync + 'static) -> Self {
        CoveringRelation {
            name: name.into(),
            rel: Arc::new(rel),
            cover_pool: None,
        }
    }

    /// The relation that holds for every pair.
    pub fn total() -> Self {
        CoveringRelation::new("total", |_, _| true)
    }

    pub fn covered_by(mut self, pool: impl Fn(&E) -> bool + Send + Sync + 'static) -> Self {
        self.cover_pool = Some(Arc::new(pool));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn holds(&self, a: &E, b: &E) -> bool {
        (self.rel)(a, b)
    }

    /// `A ⊰ c`: every member of `set` is related to `c`.
    pub fn set_holds(&self, set: &[E], c: &E) -> bool {
        set.iter().all(|a| self.holds(a, c))
    }

    pub fn in_cover_pool(&self, c: &E) -> bool {
        self.cover_pool.as_ref().is_none_or(|p| p(c))
    }
}

impl<E> fmt::Debug for CoveringRelation<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoveringRelation")
            .field("name", &self.name)
            .field("has_cover_pool", &self.cover_pool.is_some())
            .finish()
    }
}
