//! FIN_k: finitely supported functions `ω → {0,…,k}` under pointwise max.

use std::cmp::Ordering;
use std::fmt;

use super::{Catalog, Instance};
use crate::error::{Error, Result};
use crate::semigroup::{CoveringRelation, Morphism, Semigroup, Subsemigroup};

/// A sparse finitely supported function. Entries are `(position, value)`
/// with strictly increasing positions and values in `1..`; zeros are not
/// stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FinFn {
    entries: Vec<(u32, u8)>,
}

impl FinFn {
    pub fn zero() -> Self {
        FinFn::default()
    }

    /// From a dense value list: `[0, 2, 1]` is `1 ↦ 2, 2 ↦ 1`.
    pub fn from_dense(values: &[u8]) -> Self {
        FinFn {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, &v)| (i as u32, v))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<u8> {
        let width = self.entries.last().map_or(0, |&(p, _)| p as usize + 1);
        let mut out = vec![0; width];
        for &(p, v) in &self.entries {
            out[p as usize] = v;
        }
        out
    }

    pub fn entries(&self) -> &[(u32, u8)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value_at(&self, x: u32) -> u8 {
        self.entries
            .binary_search_by_key(&x, |&(p, _)| p)
            .map_or(0, |i| self.entries[i].1)
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&(p, _)| p)
    }

    pub fn min_support(&self) -> Option<u32> {
        self.entries.first().map(|&(p, _)| p)
    }

    pub fn max_support(&self) -> Option<u32> {
        self.entries.last().map(|&(p, _)| p)
    }

    /// The least `i` with this function in `G_i`.
    pub fn level(&self) -> u8 {
        self.entries.iter().map(|&(_, v)| v).max().unwrap_or(0)
    }

    /// Pointwise max.
    pub fn join(&self, other: &FinFn) -> FinFn {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1.max(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        FinFn { entries: out }
    }

    /// Applies `f` pointwise; `f(0)` must be `0`.
    pub fn map_values(&self, f: impl Fn(u8) -> u8) -> FinFn {
        FinFn {
            entries: self
                .entries
                .iter()
                .map(|&(p, v)| (p, f(v)))
                .filter(|&(_, v)| v != 0)
                .collect(),
        }
    }

    /// `supp(self) < supp(other)`. False when either support is empty.
    pub fn support_before(&self, other: &FinFn) -> bool {
        match (self.max_support(), other.min_support()) {
            (Some(a), Some(b)) => a < b,
            _ => false,
        }
    }
}

/// `(σ a)x = max{a x − 1, 0}`. The result may be the zero function.
pub fn tetris(a: &FinFn) -> FinFn {
    a.map_values(|v| v.saturating_sub(1))
}

/// Keeps values `≤ 1` and lowers the rest by one. Together with `tetris`
/// it has a common preimage for every function one level down.
pub fn soften(a: &FinFn) -> FinFn {
    a.map_values(|v| if v <= 1 { v } else { v - 1 })
}

impl Ord for FinFn {
    /// Support first (as an increasing position list), then values.
    fn cmp(&self, other: &Self) -> Ordering {
        self.support()
            .cmp(other.support())
            .then_with(|| {
                self.entries
                    .iter()
                    .map(|e| e.1)
                    .cmp(other.entries.iter().map(|e| e.1))
            })
    }
}

impl PartialOrd for FinFn {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.to_dense().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `G_k`: functions with values in `{0..k}` and support inside
/// `[0, support_bound)`. The zero function is excluded unless `allow_zero`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinK {
    pub k: u8,
    pub support_bound: u32,
    pub allow_zero: bool,
}

impl FinK {
    pub fn new(k: u8, support_bound: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Config("FIN_k needs k ≥ 1".into()));
        }
        if support_bound == 0 || support_bound > 32 {
            return Err(Error::Config("support bound must be in 1..=32".into()));
        }
        Ok(FinK {
            k,
            support_bound,
            allow_zero: false,
        })
    }

    pub fn with_zero(mut self) -> Self {
        self.allow_zero = true;
        self
    }

    /// `G_j` inside this instance; nice for every `j`.
    pub fn level(j: u8) -> Subsemigroup<FinFn> {
        Subsemigroup::new(format!("level_{j}"), move |a: &FinFn| a.level() <= j).nice()
    }

    pub fn tetris_map() -> Morphism<FinFn> {
        Morphism::endomorphism("tetris", |a: &FinFn| Ok(tetris(a)))
    }

    pub fn soften_map() -> Morphism<FinFn> {
        Morphism::endomorphism("soften", |a: &FinFn| Ok(soften(a)))
    }

    /// `supp(a) < supp(b)`, covered by `G_k ∖ G_{k−1}`.
    pub fn block_order(k: u8) -> CoveringRelation<FinFn> {
        CoveringRelation::new("supp_lt", |a: &FinFn, b: &FinFn| a.support_before(b))
            .covered_by(move |b: &FinFn| b.level() == k)
    }

    /// Every function with support inside `[0, width)` and values `≤ k`,
    /// in canonical order; the zero function only when allowed.
    pub fn functions(&self, width: u32) -> Vec<FinFn> {
        let width = width.min(self.support_bound) as usize;
        let base = self.k as usize + 1;
        let total = base.pow(width as u32);
        let mut out: Vec<FinFn> = (0..total)
            .map(|mut code| {
                let mut dense = vec![0u8; width];
                for slot in dense.iter_mut() {
                    *slot = (code % base) as u8;
                    code /= base;
                }
                FinFn::from_dense(&dense)
            })
            .filter(|f| self.allow_zero || !f.is_zero())
            .collect();
        out.sort();
        out
    }
}

impl Semigroup for FinK {
    type Elem = FinFn;

    fn name(&self) -> String {
        format!("fin_{}(supp<{})", self.k, self.support_bound)
    }

    fn product(&self, a: &FinFn, b: &FinFn) -> Result<FinFn> {
        let p = a.join(b);
        if p.level() > self.k || p.max_support().is_some_and(|m| m >= self.support_bound) {
            return Err(Error::budget(self.name(), format!("{p} leaves the carrier")));
        }
        Ok(p)
    }

    fn canonical(&self, a: &FinFn) -> FinFn {
        FinFn::from_dense(&a.to_dense())
    }

    fn contains(&self, a: &FinFn) -> bool {
        (self.allow_zero || !a.is_zero())
            && a.level() <= self.k
            && a.max_support().is_none_or(|m| m < self.support_bound)
    }
}

impl Instance for FinK {
    fn parse_element(&self, s: &str) -> Result<FinFn> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let values: Vec<u8> = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|t| t.trim().parse::<u8>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::parse(s, format!("{e}")))?
        };
        let f = FinFn::from_dense(&values);
        if !self.contains(&f) {
            return Err(Error::parse(s, format!("not in {}", self.name())));
        }
        Ok(f)
    }

    fn elements_up_to(&self, size: usize) -> Vec<FinFn> {
        self.functions(size.min(32) as u32)
    }

    fn catalog(&self) -> Catalog<FinFn> {
        Catalog {
            morphisms: vec![Morphism::identity(), Self::tetris_map(), Self::soften_map()],
            subsemigroups: (0..self.k).map(Self::level).collect(),
            relations: vec![Self::block_order(self.k)],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: &[u8]) -> FinFn {
        FinFn::from_dense(v)
    }

    #[test]
    fn product_is_pointwise_max() {
        let g = FinK::new(2, 4).unwrap();
        assert_eq!(g.product(&f(&[0, 2, 1]), &f(&[1, 0, 2])).unwrap(), f(&[1, 2, 2]));
    }

    #[test]
    fn tetris_drops_one_level() {
        assert_eq!(tetris(&f(&[0, 2, 1, 0])), f(&[0, 1, 0, 0]));
        let flat = tetris(&f(&[1, 1]));
        assert!(flat.is_zero());
        assert!(!FinK::new(1, 4).unwrap().contains(&flat));
    }

    #[test]
    fn display_and_parse() {
        let g = FinK::new(2, 5).unwrap();
        let a = g.parse_element("[0,2,1,0]").unwrap();
        assert_eq!(a.to_string(), "[0,2,1]");
        assert_eq!(a.level(), 2);
        assert!(g.parse_element("[3]").is_err());
        assert!(g.parse_element("[0,0,0,0,0,1]").is_err());
    }

    #[test]
    fn carrier_enumeration() {
        let g = FinK::new(2, 4).unwrap();
        assert_eq!(g.functions(4).len(), 80);
        assert_eq!(g.with_zero().functions(4).len(), 81);
        let all = g.functions(3);
        assert!(all.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn support_order() {
        assert!(f(&[1]).support_before(&f(&[0, 0, 2, 1])));
        assert!(!f(&[0, 1]).support_before(&f(&[0, 2])));
        assert!(!FinFn::zero().support_before(&f(&[1])));
    }
}
