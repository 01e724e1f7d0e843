//! Idempotent-set algebra on finite semigroups.
//!
//! The infinite arguments work with orbits `a_G` of elements in a saturated
//! extension and an orbit product `·_G`. Over a finite semigroup realized in
//! itself all of that collapses:
//!
//! * the orbit `a_G` becomes the element `a`;
//! * `𝒜 ·_G ℬ` becomes the plain subset product `A·B = {a·b : a ∈ A, b ∈ B}`;
//! * type-definable sets become arbitrary subsets of the carrier.
//!
//! In this collapsed form the statements used downstream are elementary and
//! are re-proved here before being asserted in tests:
//!
//! * a set is idempotent when `A·A ⊆ A`, i.e. product-closed, and every
//!   nonempty closed set contains an idempotent element (some power of any
//!   member is idempotent), so the minimal closed sets are exactly the
//!   singletons `{e}` with `e·e = e`;
//! * `c ∈ A` is left-minimal when `c ∈ A·g` for every `g ∈ A·c`. The
//!   descending chain `B_{α+1} = A·b_α` with `b_α ∈ B_α` stops at a minimal
//!   left ideal of `A`; all of its members are left-minimal and it is closed,
//!   so it contains an idempotent;
//! * for idempotent `c` with `c·A ⊆ A` and `A·c ⊆ A`, the set `c·A·c` contains
//!   an idempotent. If `c` is left-minimal and `g = c·a·c` is idempotent then
//!   `g ∈ A·c`, so `c = h·g` for some `h`, giving `c·g = c`; also `c·g = g`,
//!   hence `g = c`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod family;

pub use crate::instances::TableSemigroup as FiniteSemigroup;
pub use family::{generate_family, FamilyMember};

pub type Subset = BTreeSet<usize>;

fn check_subset(s: &FiniteSemigroup, a: &Subset, what: &str) -> Result<()> {
    match a.iter().find(|&&x| x >= s.size()) {
        Some(x) => Err(Error::Precondition(format!("{what} contains {x}, outside 0..{}", s.size()))),
        None => Ok(()),
    }
}

pub fn carrier(s: &FiniteSemigroup) -> Subset {
    (0..s.size()).collect()
}

/// `{e : e·e = e}` in increasing order.
pub fn idempotents(s: &FiniteSemigroup) -> Vec<usize> {
    (0..s.size()).filter(|&e| s.mul(e, e) == e).collect()
}

/// `A·B = {a·b : a ∈ A, b ∈ B}`.
pub fn subset_product(s: &FiniteSemigroup, a: &Subset, b: &Subset) -> Subset {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| s.mul(x, y)))
        .collect()
}

/// `A·A ⊆ A`.
pub fn is_closed(s: &FiniteSemigroup, a: &Subset) -> bool {
    a.iter().all(|&x| a.iter().all(|&y| a.contains(&s.mul(x, y))))
}

/// The subsemigroup `{a, a², a³, …}`.
pub fn monogenic(s: &FiniteSemigroup, a: usize) -> Subset {
    let mut out = Subset::new();
    let mut p = a;
    while out.insert(p) {
        p = s.mul(p, a);
    }
    out
}

/// All minimal nonempty product-closed subsets, ordered by least member.
///
/// Every closed set contains the monogenic subsemigroup of each of its
/// members, so the minimal closed sets are the minimal sets among the
/// monogenic ones.
pub fn minimal_subsemigroups(s: &FiniteSemigroup) -> Vec<Subset> {
    let mut candidates: Vec<Subset> = (0..s.size()).map(|a| monogenic(s, a)).collect();
    candidates.sort();
    candidates.dedup();
    let mut out: Vec<Subset> = candidates
        .iter()
        .filter(|c| !candidates.iter().any(|d| d != *c && d.is_subset(c)))
        .cloned()
        .collect();
    out.sort_by_key(|c| c.iter().next().copied());
    out
}

/// `c ∈ A·g` for every `g ∈ A·c`.
pub fn is_left_minimal(s: &FiniteSemigroup, a: &Subset, c: usize) -> Result<bool> {
    check_subset(s, a, "A")?;
    if !a.contains(&c) {
        return Err(Error::Precondition(format!("{c} is not in A")));
    }
    let ac = subset_product(s, a, &Subset::from([c]));
    Ok(ac
        .iter()
        .all(|&g| a.iter().any(|&h| s.mul(h, g) == c)))
}

/// The outcome of the descending iteration: the chosen `b_α` and the sets
/// `B_{α+1} = A·b_α`, ending at a minimal left ideal of `A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftMinimalCertificate {
    pub element: usize,
    pub steps: Vec<(usize, Subset)>,
    pub left_ideal: Subset,
}

/// Runs `B_0 = A`, `B_{α+1} = A·b_α` with `b_α` the least member of `B_α`
/// for which the inclusion is proper, until no member shrinks the set, and
/// returns the least idempotent of the final set.
pub fn find_left_minimal_idempotent(s: &FiniteSemigroup, a: &Subset) -> Result<LeftMinimalCertificate> {
    check_subset(s, a, "A")?;
    if a.is_empty() {
        return Err(Error::Precondition("A is empty".into()));
    }
    if !is_closed(s, a) {
        return Err(Error::Precondition("A is not product-closed".into()));
    }
    let mut b = a.clone();
    let mut steps = Vec::new();
    loop {
        let next = b.iter().find_map(|&x| {
            let ax = subset_product(s, a, &Subset::from([x]));
            (ax.len() < b.len()).then_some((x, ax))
        });
        match next {
            Some((x, ax)) => {
                steps.push((x, ax.clone()));
                b = ax;
            }
            None => break,
        }
    }
    let element = b
        .iter()
        .copied()
        .find(|&e| s.mul(e, e) == e)
        .ok_or_else(|| Error::Verification("minimal left ideal without idempotent".into()))?;
    Ok(LeftMinimalCertificate {
        element,
        steps,
        left_ideal: b,
    })
}

/// Idempotents of `c·A·c`, for idempotent `c` with `c·A ⊆ A` and `A·c ⊆ A`.
pub fn sandwich_idempotents(s: &FiniteSemigroup, a: &Subset, c: usize) -> Result<Subset> {
    check_subset(s, a, "A")?;
    if c >= s.size() {
        return Err(Error::Precondition(format!("{c} is outside 0..{}", s.size())));
    }
    if s.mul(c, c) != c {
        return Err(Error::Precondition(format!("{c} is not idempotent")));
    }
    let single = Subset::from([c]);
    let ca = subset_product(s, &single, a);
    if let Some(x) = ca.difference(a).next() {
        return Err(Error::Precondition(format!("{{c}}·A ⊄ A: {x} ∉ A")));
    }
    let ac = subset_product(s, a, &single);
    if let Some(x) = ac.difference(a).next() {
        return Err(Error::Precondition(format!("A·{{c}} ⊄ A: {x} ∉ A")));
    }
    Ok(subset_product(s, &ca, &single)
        .into_iter()
        .filter(|&g| s.mul(g, g) == g)
        .collect())
}

/// Everything the lab computes for one table, with `A` the whole carrier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetAlgebraReport {
    pub size: usize,
    pub idempotents: Vec<usize>,
    pub minimal_subsemigroups: Vec<Subset>,
    pub left_minimal: Vec<usize>,
    pub certificate: LeftMinimalCertificate,
    pub sandwich: Subset,
}

impl SubsetAlgebraReport {
    pub fn compute(s: &FiniteSemigroup) -> Result<Self> {
        if let Some((a, b, c)) = s.first_non_associative() {
            return Err(Error::Precondition(format!("table is not associative at ({a}, {b}, {c})")));
        }
        let all = carrier(s);
        let left_minimal = (0..s.size())
            .map(|c| is_left_minimal(s, &all, c).map(|ok| ok.then_some(c)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let certificate = find_left_minimal_idempotent(s, &all)?;
        let sandwich = sandwich_idempotents(s, &all, certificate.element)?;
        Ok(SubsetAlgebraReport {
            size: s.size(),
            idempotents: idempotents(s),
            minimal_subsemigroups: minimal_subsemigroups(s),
            left_minimal,
            certificate,
            sandwich,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> Subset {
        v.iter().copied().collect()
    }

    #[test]
    fn cyclic_group_z4() {
        let z4 = FiniteSemigroup::cyclic_group(4);
        assert_eq!(idempotents(&z4), vec![0]);
        assert_eq!(subset_product(&z4, &set(&[1, 2]), &set(&[2])), set(&[0, 3]));
        assert_eq!(minimal_subsemigroups(&z4), vec![set(&[0])]);
        let all = carrier(&z4);
        assert!((0..4).all(|c| is_left_minimal(&z4, &all, c).unwrap()));
        assert_eq!(find_left_minimal_idempotent(&z4, &all).unwrap().element, 0);
        assert_eq!(sandwich_idempotents(&z4, &all, 0).unwrap(), set(&[0]));
    }

    #[test]
    fn max_chain() {
        // 0 < 1 < 2 stand for 1 < 2 < 3.
        let m = FiniteSemigroup::max_chain(3);
        let all = carrier(&m);
        assert_eq!(idempotents(&m), vec![0, 1, 2]);
        assert_eq!(minimal_subsemigroups(&m), vec![set(&[0]), set(&[1]), set(&[2])]);
        assert!(is_left_minimal(&m, &all, 2).unwrap());
        assert!(!is_left_minimal(&m, &all, 0).unwrap());
        let cert = find_left_minimal_idempotent(&m, &all).unwrap();
        assert_eq!(cert.element, 2);
        assert_eq!(cert.steps, vec![(1, set(&[1, 2])), (2, set(&[2]))]);
        assert_eq!(sandwich_idempotents(&m, &all, 2).unwrap(), set(&[2]));
    }

    #[test]
    fn identity_sandwich_gives_all_idempotents() {
        let m = FiniteSemigroup::from_fn(3, |a, b| a.min(b));
        // 2 is the identity for min.
        assert_eq!(sandwich_idempotents(&m, &carrier(&m), 2).unwrap(), set(&[0, 1, 2]));
    }

    #[test]
    fn preconditions() {
        let z4 = FiniteSemigroup::cyclic_group(4);
        assert!(is_left_minimal(&z4, &set(&[0, 2]), 1).is_err());
        assert!(sandwich_idempotents(&z4, &carrier(&z4), 1).is_err());
        let m = FiniteSemigroup::max_chain(3);
        let only = sandwich_idempotents(&m, &set(&[0]), 0).unwrap();
        assert_eq!(only, set(&[0]));
        assert!(sandwich_idempotents(&m, &set(&[0]), 1).is_err());
        assert!(find_left_minimal_idempotent(&z4, &set(&[1])).is_err());
    }
}
