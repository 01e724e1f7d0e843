use std::fmt;

use super::{Catalog, Instance};
use crate::error::{Error, Result};
use crate::semigroup::{CoveringRelation, Morphism, Semigroup, Subsemigroup};

/// A finite magma on `{0..m−1}` given by a row-major operation table.
///
/// Construction only checks shape and range; associativity is checked by
/// [`TableSemigroup::checked`] or by the generic verifiers, so deliberately
/// broken tables can still be loaded and reported on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TableSemigroup {
    m: usize,
    table: Vec<u8>,
}

impl TableSemigroup {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::Config("operation table is empty".into()));
        }
        if m > 255 {
            return Err(Error::Config(format!("table of size {m} exceeds 255")));
        }
        let mut table = Vec::with_capacity(m * m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Config(format!(
                    "row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= m {
                    return Err(Error::Config(format!("entry {v} in row {i} is outside 0..{m}")));
                }
                table.push(v as u8);
            }
        }
        Ok(TableSemigroup { m, table })
    }

    /// Like [`new`](Self::new), additionally rejecting non-associative tables.
    pub fn checked(rows: Vec<Vec<usize>>) -> Result<Self> {
        let t = Self::new(rows)?;
        if let Some((a, b, c)) = t.first_non_associative() {
            return Err(Error::Verification(format!(
                "table is not associative at ({a}, {b}, {c})"
            )));
        }
        Ok(t)
    }

    /// Parses whitespace-separated rows, one per line; `#` starts a comment.
    pub fn parse_matrix(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(format!("line {}", n + 1), e.to_string()))?;
            rows.push(row);
        }
        Self::new(rows)
    }

    pub fn size(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.m + b] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.m)
            .map(|a| (0..self.m).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn first_non_associative(&self) -> Option<(usize, usize, usize)> {
        let m = self.m;
        for a in 0..m {
            for b in 0..m {
                let ab = self.mul(a, b);
                for c in 0..m {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.first_non_associative().is_none()
    }

    /// `ℤ_n` under addition.
    pub fn cyclic_group(n: usize) -> Self {
        Self::from_fn(n, |a, b| (a + b) % n)
    }

    /// `({0..n−1}, max)`.
    pub fn max_chain(n: usize) -> Self {
        Self::from_fn(n, |a, b| a.max(b))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        Self::new((0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect())
            .expect("generated table is well-shaped")
    }
}

impl fmt::Debug for TableSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TableSemigroup{:?}", self.rows())
    }
}

impl Semigroup for TableSemigroup {
    type Elem = usize;

    fn name(&self) -> String {
        format!("table({})", self.m)
    }

    fn product(&self, a: &usize, b: &usize) -> Result<usize> {
        if *a >= self.m || *b >= self.m {
            return Err(Error::Precondition(format!("({a}, {b}) outside table of size {}", self.m)));
        }
        Ok(self.mul(*a, *b))
    }

    fn contains(&self, a: &usize) -> bool {
        *a < self.m
    }
}

impl Instance for TableSemigroup {
    fn parse_element(&self, s: &str) -> Result<usize> {
        let v: usize = s.trim().parse().map_err(|e| Error::parse(s, format!("{e}")))?;
        if v >= self.m {
            return Err(Error::parse(s, format!("not in 0..{}", self.m)));
        }
        Ok(v)
    }

    fn elements_up_to(&self, size: usize) -> Vec<usize> {
        (0..self.m.min(size)).collect()
    }

    fn catalog(&self) -> Catalog<usize> {
        let idem: Vec<bool> = (0..self.m).map(|e| self.mul(e, e) == e).collect();
        Catalog {
            morphisms: vec![Morphism::identity()],
            subsemigroups: vec![Subsemigroup::new("idempotents", move |e: &usize| {
                idem.get(*e).copied().unwrap_or(false)
            })],
            relations: vec![CoveringRelation::new("lt", |a: &usize, b: &usize| a < b)],
        }
    }
}
