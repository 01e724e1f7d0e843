use super::{Catalog, Instance};
use crate::error::{Error, Result};
use crate::semigroup::{CoveringRelation, Morphism, Semigroup, Subsemigroup};

/// `(ℕ⁺, +)` truncated at `max`; sums above `max` are budget errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NatPlus {
    pub max: u64,
}

impl NatPlus {
    pub fn new(max: u64) -> Self {
        NatPlus { max }
    }

    /// `a ⊰ b ⇔ a < b`, the relation behind the classical Hindman theorem.
    pub fn less_than() -> CoveringRelation<u64> {
        CoveringRelation::new("lt", |a: &u64, b: &u64| a < b)
    }
}

impl Semigroup for NatPlus {
    type Elem = u64;

    fn name(&self) -> String {
        format!("nat_plus(≤{})", self.max)
    }

    fn product(&self, a: &u64, b: &u64) -> Result<u64> {
        match a.checked_add(*b) {
            Some(s) if s <= self.max => Ok(s),
            _ => Err(Error::budget(self.name(), format!("{a} + {b} exceeds {}", self.max))),
        }
    }

    fn contains(&self, a: &u64) -> bool {
        (1..=self.max).contains(a)
    }
}

impl Instance for NatPlus {
    fn parse_element(&self, s: &str) -> Result<u64> {
        let v: u64 = s
            .trim()
            .parse()
            .map_err(|e| Error::parse(s, format!("{e}")))?;
        if !self.contains(&v) {
            return Err(Error::parse(s, format!("not in 1..={}", self.max)));
        }
        Ok(v)
    }

    fn elements_up_to(&self, size: usize) -> Vec<u64> {
        (1..=self.max.min(size as u64)).collect()
    }

    fn catalog(&self) -> Catalog<u64> {
        let max = self.max;
        let name = self.name();
        Catalog {
            morphisms: vec![
                Morphism::identity(),
                Morphism::endomorphism("double", move |a: &u64| {
                    a.checked_mul(2)
                        .filter(|v| *v <= max)
                        .ok_or_else(|| Error::budget(name.clone(), format!("2·{a} exceeds {max}")))
                }),
            ],
            subsemigroups: vec![Subsemigroup::new("even", |a: &u64| a.is_multiple_of(2))],
            relations: vec![
                Self::less_than(),
                CoveringRelation::new("lt_gap", |a: &u64, b: &u64| a + 1 < *b),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_and_budget() {
        let n = NatPlus::new(10);
        assert_eq!(n.product(&2, &3).unwrap(), 5);
        assert!(n.product(&6, &5).unwrap_err().is_budget());
        assert!(n.parse_element("0").is_err());
        assert_eq!(n.elements_up_to(3), vec![1, 2, 3]);
    }
}
