//! Exhaustive axiom verifiers.
//!
//! Each verifier scans every tuple drawn from a finite pool and records every
//! counterexample; an empty violation list means the axiom holds on the whole
//! pool. A product that overflows the instance budget is itself reported as a
//! violation, since the pool is then not closed enough to decide the axiom.

use std::fmt;

use rayon::prelude::*;

use super::{CoveringRelation, Element, Morphism, MorphismKind, Semigroup, Subsemigroup};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation<E> {
    Associativity { a: E, b: E, c: E, left: E, right: E },
    Homomorphism { a: E, b: E, image_of_product: E, product_of_images: E },
    NotIdempotent { a: E, once: E, twice: E },
    NotFixed { c: E, image: E },
    LeavesTarget { a: E, image: E },
    NotClosed { a: E, b: E, product: E },
    NotNice { a: E, b: E, product: E },
    NotDotClosed { a: E, b: E, c: E },
    Uncovered { set: Vec<E> },
    Budget { context: String, error: String },
}

impl<E: fmt::Display> fmt::Display for Violation<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { a, b, c, left, right } => {
                write!(f, "({a}·{b})·{c} = {left} but {a}·({b}·{c}) = {right}")
            }
            Violation::Homomorphism { a, b, image_of_product, product_of_images } => write!(
                f,
                "σ({a}·{b}) = {image_of_product} but σ({a})·σ({b}) = {product_of_images}"
            ),
            Violation::NotIdempotent { a, once, twice } => {
                write!(f, "σ({a}) = {once} but σ(σ({a})) = {twice}")
            }
            Violation::NotFixed { c, image } => write!(f, "target element {c} moved to {image}"),
            Violation::LeavesTarget { a, image } => {
                write!(f, "σ({a}) = {image} lies outside the target")
            }
            Violation::NotClosed { a, b, product } => {
                write!(f, "{a}, {b} ∈ C but {a}·{b} = {product} ∉ C")
            }
            Violation::NotNice { a, b, product } => {
                write!(f, "{a}·{b} = {product} ∈ C but a factor is outside C")
            }
            Violation::NotDotClosed { a, b, c } => {
                write!(f, "{a} ⊰ {b} ⊰ {c} but not {a} ⊰ {b}·{c}")
            }
            Violation::Uncovered { set } => {
                write!(f, "no cover in pool for {{")?;
                for (i, e) in set.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "}}")
            }
            Violation::Budget { context, error } => write!(f, "{context}: {error}"),
        }
    }
}

/// Outcome of one exhaustive check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report<E> {
    pub check: String,
    pub cases: u64,
    pub violations: Vec<Violation<E>>,
}

impl<E> Report<E> {
    pub fn new(check: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            cases: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn absorb(&mut self, cases: u64, violations: Vec<Violation<E>>) {
        self.cases += cases;
        self.violations.extend(violations);
    }
}

fn budget<E>(context: String, err: Error) -> Violation<E> {
    Violation::Budget {
        context,
        error: err.to_string(),
    }
}

/// Checks `(a·b)·c = a·(b·c)` for every triple in `pool³`.
pub fn verify_associativity<S: Semigroup>(inst: &S, pool: &[S::Elem]) -> Report<S::Elem> {
    let mut report = Report::new(format!("associativity of {}", inst.name()));
    // Pairwise products are shared by both bracketings.
    let pairs: Vec<Vec<Result<S::Elem>>> = pool
        .par_iter()
        .map(|a| pool.iter().map(|b| inst.product(a, b)).collect())
        .collect();
    let per_row: Vec<Vec<Violation<S::Elem>>> = (0..pool.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let a = &pool[i];
            for (j, b) in pool.iter().enumerate() {
                for (l, c) in pool.iter().enumerate() {
                    let left = match &pairs[i][j] {
                        Ok(ab) => inst.product(ab, c),
                        Err(e) => Err(e.clone()),
                    };
                    let right = match &pairs[j][l] {
                        Ok(bc) => inst.product(a, bc),
                        Err(e) => Err(e.clone()),
                    };
                    match (left, right) {
                        (Ok(left), Ok(right)) => {
                            if left != right {
                                out.push(Violation::Associativity {
                                    a: a.clone(),
                                    b: b.clone(),
                                    c: c.clone(),
                                    left,
                                    right,
                                });
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            out.push(budget(format!("({a}, {b}, {c})"), e));
                        }
                    }
                }
            }
            out
        })
        .collect();
    let n = pool.len() as u64;
    report.absorb(n * n * n, per_row.into_iter().flatten().collect());
    report
}

/// Checks `σ(a·b) = σ(a)·σ(b)` on `pool²`; for retractions additionally
/// `σ∘σ = σ`, that images land in the target, and that the target is fixed.
pub fn verify_morphism<S: Semigroup>(
    inst: &S,
    m: &Morphism<S::Elem>,
    pool: &[S::Elem],
) -> Report<S::Elem> {
    let mut report = Report::new(format!("morphism {} on {}", m.name(), inst.name()));
    let images: Vec<Result<S::Elem>> = pool.iter().map(|a| m.apply(a)).collect();
    let rows: Vec<Vec<Violation<S::Elem>>> = (0..pool.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let a = &pool[i];
            for (j, b) in pool.iter().enumerate() {
                let lhs = inst.product(a, b).and_then(|ab| m.apply(&ab));
                let rhs = match (&images[i], &images[j]) {
                    (Ok(x), Ok(y)) => inst.product(x, y),
                    (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                };
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => {
                        if l != r {
                            out.push(Violation::Homomorphism {
                                a: a.clone(),
                                b: b.clone(),
                                image_of_product: l,
                                product_of_images: r,
                            });
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => out.push(budget(format!("({a}, {b})"), e)),
                }
            }
            out
        })
        .collect();
    let n = pool.len() as u64;
    report.absorb(n * n, rows.into_iter().flatten().collect());

    if m.kind() == MorphismKind::Retraction {
        let target = m.target().expect("retraction carries a target");
        let mut extra = Vec::new();
        for (a, img) in pool.iter().zip(&images) {
            let once = match img {
                Ok(x) => x.clone(),
                Err(e) => {
                    extra.push(budget(format!("σ({a})"), e.clone()));
                    continue;
                }
            };
            if !target.contains(&once) {
                extra.push(Violation::LeavesTarget {
                    a: a.clone(),
                    image: once.clone(),
                });
            }
            match m.apply(&once) {
                Ok(twice) if twice != once => extra.push(Violation::NotIdempotent {
                    a: a.clone(),
                    once: once.clone(),
                    twice,
                }),
                Ok(_) => {}
                Err(e) => extra.push(budget(format!("σ(σ({a}))"), e)),
            }
            if target.contains(a) && once != *a {
                extra.push(Violation::NotFixed {
                    c: a.clone(),
                    image: once,
                });
            }
        }
        report.absorb(n, extra);
    }
    report
}

/// Checks closure of `sub` and niceness (`a·b ∈ C ⇒ a, b ∈ C`) on `pool²`.
pub fn verify_niceness<S: Semigroup>(
    sub: &Subsemigroup<S::Elem>,
    inst: &S,
    pool: &[S::Elem],
) -> Report<S::Elem> {
    let mut report = Report::new(format!("niceness of {} in {}", sub.name(), inst.name()));
    let rows: Vec<Vec<Violation<S::Elem>>> = pool
        .par_iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in pool {
                let product = match inst.product(a, b) {
                    Ok(p) => p,
                    Err(e) => {
                        out.push(budget(format!("({a}, {b})"), e));
                        continue;
                    }
                };
                let (in_a, in_b, in_p) = (sub.contains(a), sub.contains(b), sub.contains(&product));
                if in_a && in_b && !in_p {
                    out.push(Violation::NotClosed {
                        a: a.clone(),
                        b: b.clone(),
                        product,
                    });
                } else if in_p && !(in_a && in_b) {
                    out.push(Violation::NotNice {
                        a: a.clone(),
                        b: b.clone(),
                        product,
                    });
                }
            }
            out
        })
        .collect();
    let n = pool.len() as u64;
    report.absorb(n * n, rows.into_iter().flatten().collect());
    report
}

/// One tested finite set together with the cover found for it, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover<E> {
    pub set: Vec<E>,
    pub cover: Option<E>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringReport<E> {
    pub check: String,
    pub covers: Vec<Cover<E>>,
}

impl<E: Element> CoveringReport<E> {
    pub fn passed(&self) -> bool {
        self.covers.iter().all(|c| c.cover.is_some())
    }

    pub fn into_report(self) -> Report<E> {
        let cases = self.covers.len() as u64;
        let violations = self
            .covers
            .into_iter()
            .filter(|c| c.cover.is_none())
            .map(|c| Violation::Uncovered { set: c.set })
            .collect();
        Report {
            check: self.check,
            cases,
            violations,
        }
    }
}

/// For each finite set `A`, finds the canonically least `c` in the pool (and in
/// the relation's cover pool `B`) with `A ⊰ c`.
///
/// Coveredness is a property of the whole, usually infinite, carrier; this
/// check only speaks for the supplied families.
pub fn verify_covering<S: Semigroup>(
    rel: &CoveringRelation<S::Elem>,
    inst: &S,
    finite_sets: &[Vec<S::Elem>],
    pool: &[S::Elem],
) -> Result<CoveringReport<S::Elem>> {
    if pool.is_empty() {
        return Err(Error::Config("covering check needs a nonempty pool".into()));
    }
    let mut sorted: Vec<S::Elem> = pool.to_vec();
    sorted.sort();
    sorted.dedup();
    let covers = finite_sets
        .iter()
        .map(|set| Cover {
            set: set.clone(),
            cover: sorted
                .iter()
                .find(|c| rel.in_cover_pool(c) && rel.set_holds(set, c))
                .cloned(),
        })
        .collect();
    Ok(CoveringReport {
        check: format!("{}-coveredness of {}", rel.name(), inst.name()),
        covers,
    })
}

/// Checks `a ⊰ b ⊰ c ⇒ a ⊰ b·c` over every triple in `pool³`.
pub fn verify_dot_closed<S: Semigroup>(
    rel: &CoveringRelation<S::Elem>,
    inst: &S,
    pool: &[S::Elem],
) -> Report<S::Elem> {
    let mut report = Report::new(format!("{}·-closedness of {}", rel.name(), inst.name()));
    let succ: Vec<Vec<usize>> = pool
        .par_iter()
        .map(|a| (0..pool.len()).filter(|&j| rel.holds(a, &pool[j])).collect())
        .collect();
    let rows: Vec<(u64, Vec<Violation<S::Elem>>)> = (0..pool.len())
        .into_par_iter()
        .map(|i| {
            let a = &pool[i];
            let mut out = Vec::new();
            let mut cases = 0u64;
            for &j in &succ[i] {
                let b = &pool[j];
                for c in succ[j].iter().map(|&k| &pool[k]) {
                    cases += 1;
                    match inst.product(b, c) {
                        Ok(bc) => {
                            if !rel.holds(a, &bc) {
                                out.push(Violation::NotDotClosed {
                                    a: a.clone(),
                                    b: b.clone(),
                                    c: c.clone(),
                                });
                            }
                        }
                        Err(e) => out.push(budget(format!("({b}, {c})"), e)),
                    }
                }
            }
            (cases, out)
        })
        .collect();
    for (cases, v) in rows {
        report.absorb(cases, v);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{Instance, NatPlus, TableSemigroup, Word, Words};

    #[test]
    fn corrupted_table_is_caught() {
        let mut rows = TableSemigroup::cyclic_group(3).rows();
        rows[1][1] = 0;
        let t = TableSemigroup::new(rows).unwrap();
        let r = verify_associativity(&t, &[0, 1, 2]);
        assert!(!r.passed());
        assert_eq!(r.cases, 27);
        assert!(matches!(r.violations[0], Violation::Associativity { .. }));
        assert!(verify_associativity(&TableSemigroup::cyclic_group(3), &[0, 1, 2]).passed());
    }

    #[test]
    fn overflow_is_reported() {
        let r = verify_associativity(&NatPlus::new(4), &[1, 2]);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Budget { .. })));
    }

    #[test]
    fn doubling_is_an_endomorphism_but_not_a_retraction() {
        let nat = NatPlus::new(100);
        let pool: Vec<u64> = (1..=10).collect();
        let double = Morphism::endomorphism("double", |a: &u64| Ok(2 * a));
        assert!(verify_morphism(&nat, &double, &pool).passed());
        let succ = Morphism::endomorphism("succ", |a: &u64| Ok(a + 1));
        assert!(!verify_morphism(&nat, &succ, &pool).passed());
        let evens = Subsemigroup::new("even", |a: &u64| a.is_multiple_of(2));
        let fake = Morphism::retraction("double", evens, |a: &u64| Ok(2 * a));
        let r = verify_morphism(&nat, &fake, &pool);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::NotIdempotent { .. })));
    }

    #[test]
    fn constants_are_nice_evens_are_not() {
        let g = Words::new("ab", 6).unwrap();
        let pool = g.elements_up_to(2);
        assert!(verify_niceness(&Words::constant_words(), &g, &pool).passed());
        let nat = NatPlus::new(100);
        let evens = Subsemigroup::new("even", |a: &u64| a.is_multiple_of(2));
        let r = verify_niceness(&evens, &nat, &[1, 2, 3]);
        assert!(r.violations.iter().all(|v| matches!(v, Violation::NotNice { .. })));
        assert!(!r.passed());
        let odds = Subsemigroup::new("odd", |a: &u64| a % 2 == 1);
        let r = verify_niceness(&odds, &nat, &[1, 3]);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::NotClosed { .. })));
    }

    #[test]
    fn successor_relation_is_not_dot_closed() {
        let nat = NatPlus::new(100);
        let pool: Vec<u64> = (1..=8).collect();
        assert!(verify_dot_closed(&NatPlus::less_than(), &nat, &pool).passed());
        let succ = CoveringRelation::new("succ", |a: &u64, b: &u64| *b == a + 1);
        let r = verify_dot_closed(&succ, &nat, &pool);
        assert_eq!(
            r.violations[0],
            Violation::NotDotClosed { a: 1, b: 2, c: 3 }
        );
    }

    #[test]
    fn covers_are_canonically_least() {
        let g = Words::new("ab", 6).unwrap();
        let pool = g.elements_up_to(3);
        let sets = vec![vec![Word::from("ab"), Word::from("a")], vec![Word::from("aaa")]];
        let r = verify_covering(&Words::length_order(), &g, &sets, &pool).unwrap();
        assert_eq!(r.covers[0].cover, Some(Word::from("aax")));
        assert_eq!(r.covers[1].cover, None);
        assert!(!r.passed());
        assert_eq!(r.into_report().violations.len(), 1);
        assert!(verify_covering(&Words::length_order(), &g, &sets, &[]).is_err());
    }
}
