//! Concrete semigroups: positive integers, words with a variable, FIN_k,
//! free products, the Carlson coding semigroup and FIN towers.

use crate::error::{Error, Result};
use crate::semigroup::{
    verify_associativity, verify_dot_closed, verify_morphism, verify_niceness, CoveringRelation, Element,
    Morphism, Report, Semigroup, Subsemigroup, Violation,
};

pub mod carlson;
pub mod fin;
pub mod free_product;
pub mod nat;
pub mod table;
pub mod tower;
pub mod words;

pub use carlson::{CarlsonCode, CodedWord, Tag};
pub use fin::{FinFn, FinK};
pub use free_product::{FreeMonogenic, FreeProduct, FreeProductWord, Polynomials, Power, Side};
pub use nat::NatPlus;
pub use table::TableSemigroup;
pub use tower::{Tower, TowerVariant};
pub use words::{Word, Words, VARIABLE};

/// Named morphisms, subsemigroups and relations shipped with an instance.
#[derive(Clone, Debug)]
pub struct Catalog<E> {
    pub morphisms: Vec<Morphism<E>>,
    pub subsemigroups: Vec<Subsemigroup<E>>,
    pub relations: Vec<CoveringRelation<E>>,
}

impl<E: Element> Default for Catalog<E> {
    fn default() -> Self {
        Catalog {
            morphisms: Vec::new(),
            subsemigroups: Vec::new(),
            relations: Vec::new(),
        }
    }
}

impl<E: Element> Catalog<E> {
    pub fn morphism(&self, name: &str) -> Result<Morphism<E>> {
        self.morphisms
            .iter()
            .find(|m| m.name() == name)
            .cloned()
            .ok_or_else(|| Error::Config(format!("unknown morphism `{name}`")))
    }

    pub fn subsemigroup(&self, name: &str) -> Result<Subsemigroup<E>> {
        if name == "empty" {
            return Ok(Subsemigroup::empty());
        }
        self.subsemigroups
            .iter()
            .find(|s| s.name() == name)
            .cloned()
            .ok_or_else(|| Error::Config(format!("unknown subsemigroup `{name}`")))
    }

    pub fn relation(&self, name: &str) -> Result<CoveringRelation<E>> {
        if name == "total" {
            return Ok(CoveringRelation::total());
        }
        self.relations
            .iter()
            .find(|r| r.name() == name)
            .cloned()
            .ok_or_else(|| Error::Config(format!("unknown relation `{name}`")))
    }
}

/// A semigroup that can be driven from text: elements parse from strings,
/// a default pool can be enumerated, and named structure is available.
pub trait Instance: Semigroup {
    fn parse_element(&self, s: &str) -> Result<Self::Elem>;

    /// Every carrier element of size at most `size` (length, support width,
    /// integer value, … depending on the instance), in canonical order.
    fn elements_up_to(&self, size: usize) -> Vec<Self::Elem>;

    fn catalog(&self) -> Catalog<Self::Elem>;
}

impl<S: Instance + ?Sized> Instance for std::sync::Arc<S> {
    fn parse_element(&self, s: &str) -> Result<Self::Elem> {
        (**self).parse_element(s)
    }

    fn elements_up_to(&self, size: usize) -> Vec<Self::Elem> {
        (**self).elements_up_to(size)
    }

    fn catalog(&self) -> Catalog<Self::Elem> {
        (**self).catalog()
    }
}

/// Every axiom of `inst` and its catalog on `pool`: associativity, each
/// morphism, closure of each subsemigroup (and niceness where flagged) and
/// `⊰·`-closedness of each relation.
pub fn verify_instance<S: Instance>(inst: &S, pool: &[S::Elem]) -> Vec<Report<S::Elem>> {
    verify_catalog(inst, &inst.catalog(), pool)
}

/// [`verify_instance`] with an explicit selection of catalog entries.
pub fn verify_catalog<S: Semigroup>(inst: &S, catalog: &Catalog<S::Elem>, pool: &[S::Elem]) -> Vec<Report<S::Elem>> {
    let mut reports = vec![verify_associativity(inst, pool)];
    reports.extend(catalog.morphisms.iter().map(|m| verify_morphism(inst, m, pool)));
    for sub in &catalog.subsemigroups {
        let mut r = verify_niceness(sub, inst, pool);
        if !sub.is_nice() {
            r.check = format!("closure of {} in {}", sub.name(), inst.name());
            r.violations.retain(|v| !matches!(v, Violation::NotNice { .. }));
        }
        reports.push(r);
    }
    reports.extend(catalog.relations.iter().map(|rel| verify_dot_closed(rel, inst, pool)));
    reports
}
