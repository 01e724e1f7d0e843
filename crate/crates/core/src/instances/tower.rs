//! Towers `G_1 ⊆ … ⊆ G_n` of nice subsemigroups with maps one level down,
//! and the composed morphism sets used for the Gowers theorem.

use super::fin::FinK;
use super::{Catalog, Instance};
use crate::error::{Error, Result};
use crate::semigroup::{verify_morphism, verify_niceness, Morphism, Report, Semigroup, Subsemigroup, Violation};
use crate::instances::fin::FinFn;

/// `Lemma`: one homomorphism `σ_i: G_{i+1} → G_i` per level.
/// `Remark`: a finite set `Σ_i` per level whose members share a preimage
/// for every `g ∈ G_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerVariant {
    Lemma,
    Remark,
}

pub struct Tower<S: Semigroup> {
    top: S,
    levels: Vec<Subsemigroup<S::Elem>>,
    maps: Vec<Vec<Morphism<S::Elem>>>,
    variant: TowerVariant,
}

impl<S: Semigroup> Tower<S> {
    /// `levels[j]` is `G_{j+1}` (the last is the whole of `top`) and
    /// `maps[j]` is `Σ_{j+1}: G_{j+2} → G_{j+1}`.
    pub fn new(
        top: S,
        levels: Vec<Subsemigroup<S::Elem>>,
        maps: Vec<Vec<Morphism<S::Elem>>>,
        variant: TowerVariant,
    ) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::Config("a tower needs at least two levels".into()));
        }
        if maps.len() + 1 != levels.len() {
            return Err(Error::Config(format!(
                "{} levels need {} map sets, got {}",
                levels.len(),
                levels.len() - 1,
                maps.len()
            )));
        }
        if let Some(j) = maps.iter().position(|m| m.is_empty()) {
            return Err(Error::Config(format!("level {} has no maps", j + 1)));
        }
        if variant == TowerVariant::Lemma && maps.iter().any(|m| m.len() != 1) {
            return Err(Error::Config("a Lemma tower has exactly one map per level".into()));
        }
        Ok(Tower {
            top,
            levels,
            maps,
            variant,
        })
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn top(&self) -> &S {
        &self.top
    }

    pub fn level(&self, i: usize) -> &Subsemigroup<S::Elem> {
        &self.levels[i - 1]
    }

    pub fn maps(&self, i: usize) -> &[Morphism<S::Elem>] {
        &self.maps[i - 1]
    }

    pub fn variant(&self) -> TowerVariant {
        self.variant
    }

    fn pool_at(&self, i: usize, pool: &[S::Elem]) -> Vec<S::Elem> {
        pool.iter().filter(|g| self.level(i).contains(g)).cloned().collect()
    }

    /// Checks, on `pool ∩ G_j`, that every `G_i` is nice in `G_{i+1}`, that
    /// every map of `Σ_i` is a homomorphism landing in `G_i`, and for the
    /// Remark variant that `Σ_i^{-1}[g]` is nonempty for sampled `g ∈ G_i`.
    pub fn verify(&self, pool: &[S::Elem]) -> Vec<Report<S::Elem>> {
        let mut reports = Vec::new();
        for i in 1..self.height() {
            let upper = self.pool_at(i + 1, pool);
            let mut nice = verify_niceness(self.level(i), &self.top, &upper);
            nice.check = format!("{} nice in {}", self.level(i).name(), self.level(i + 1).name());
            reports.push(nice);
            for m in self.maps(i) {
                let mut hom = verify_morphism(&self.top, m, &upper);
                hom.check = format!("{} homomorphism on {}", m.name(), self.level(i + 1).name());
                reports.push(hom);
                let mut into = Report::new(format!("{} maps into {}", m.name(), self.level(i).name()));
                for a in &upper {
                    into.cases += 1;
                    match m.apply(a) {
                        Ok(img) if self.level(i).contains(&img) => {}
                        Ok(img) => into.violations.push(Violation::LeavesTarget { a: a.clone(), image: img }),
                        Err(e) => into.violations.push(Violation::Budget {
                            context: format!("{}({a})", m.name()),
                            error: e.to_string(),
                        }),
                    }
                }
                reports.push(into);
            }
            if self.variant == TowerVariant::Remark {
                let mut pre = Report::new(format!("joint preimages of Σ_{i}"));
                for g in self.pool_at(i, pool) {
                    pre.cases += 1;
                    let found = upper.iter().any(|h| {
                        self.maps(i).iter().all(|m| m.apply(h).is_ok_and(|v| v == g))
                    });
                    if !found {
                        pre.violations.push(Violation::Uncovered { set: vec![g] });
                    }
                }
                reports.push(pre);
            }
        }
        reports
    }

    /// `Σ_i ∘ … ∘ Σ_{n−1}` for `0 < i < n`, shortest composites first and,
    /// within one length, outer map major.
    pub fn composites(&self) -> Vec<Morphism<S::Elem>> {
        let n = self.height();
        let mut current: Vec<Morphism<S::Elem>> = self.maps(n - 1).to_vec();
        let mut out = current.clone();
        for i in (1..n - 1).rev() {
            current = self
                .maps(i)
                .iter()
                .flat_map(|outer| current.iter().map(move |inner| outer.compose(inner)))
                .collect();
            out.extend(current.iter().cloned());
        }
        out
    }

    /// Verifies the tower on `pool`, then returns the composed set with each
    /// composite checked as a homomorphism on `pool`.
    pub fn compose_tower(&self, pool: &[S::Elem]) -> Result<Vec<Morphism<S::Elem>>> {
        for r in self.verify(pool) {
            if !r.passed() {
                return Err(Error::Verification(format!(
                    "{}: {}",
                    r.check,
                    r.violations.first().map(|v| v.to_string()).unwrap_or_default()
                )));
            }
        }
        let top = self.pool_at(self.height(), pool);
        let composites = self.composites();
        for m in &composites {
            let r = verify_morphism(&self.top, m, &top);
            if !r.passed() {
                return Err(Error::Verification(format!("{}: {}", r.check, r.violations[0])));
            }
        }
        Ok(composites)
    }
}

impl<S: Semigroup> Semigroup for Tower<S> {
    type Elem = S::Elem;

    fn name(&self) -> String {
        format!("tower({}, height {})", self.top.name(), self.height())
    }

    fn product(&self, a: &S::Elem, b: &S::Elem) -> Result<S::Elem> {
        self.top.product(a, b)
    }

    fn canonical(&self, a: &S::Elem) -> S::Elem {
        self.top.canonical(a)
    }

    fn contains(&self, a: &S::Elem) -> bool {
        self.top.contains(a)
    }
}

/// The top semigroup, with the composed maps added to its morphisms and the
/// proper levels to its subsemigroups.
impl<S: Instance> Instance for Tower<S> {
    fn parse_element(&self, s: &str) -> Result<S::Elem> {
        self.top.parse_element(s)
    }

    fn elements_up_to(&self, size: usize) -> Vec<S::Elem> {
        self.top.elements_up_to(size)
    }

    fn catalog(&self) -> Catalog<S::Elem> {
        let mut catalog = self.top.catalog();
        for m in self.composites() {
            if !catalog.morphisms.iter().any(|k| k.name() == m.name()) {
                catalog.morphisms.push(m);
            }
        }
        for level in &self.levels[..self.height() - 1] {
            if !catalog.subsemigroups.iter().any(|k| k.name() == level.name()) {
                catalog.subsemigroups.push(level.clone());
            }
        }
        catalog
    }
}

impl Tower<FinK> {
    /// The FIN tower `G_1 ⊆ … ⊆ G_n` inside `FIN_n` with supports below
    /// `support_bound`. The zero function is admitted so that tetris is
    /// total; it lies in every level. The Lemma variant uses tetris at each
    /// level, the Remark variant `{tetris, soften}`.
    pub fn fin(n: u8, support_bound: u32, variant: TowerVariant) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config("a FIN tower needs n ≥ 2".into()));
        }
        let top = FinK::new(n, support_bound)?.with_zero();
        let levels = (1..=n).map(FinK::level).collect();
        let maps = (1..n)
            .map(|_| match variant {
                TowerVariant::Lemma => vec![FinK::tetris_map()],
                TowerVariant::Remark => vec![FinK::tetris_map(), FinK::soften_map()],
            })
            .collect();
        Tower::new(top, levels, maps, variant)
    }

    /// Nonzero functions of `G_n` with support below `width`.
    pub fn default_pool(&self, width: u32) -> Vec<FinFn> {
        FinK::new(self.top.k, self.top.support_bound)
            .map(|g| g.functions(width))
            .unwrap_or_default()
    }
}
