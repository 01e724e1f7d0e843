//! A seeded family of small finite semigroups that are associative by
//! construction.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FiniteSemigroup;

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub name: String,
    pub table: FiniteSemigroup,
}

fn member(name: impl Into<String>, table: FiniteSemigroup) -> FamilyMember {
    FamilyMember {
        name: name.into(),
        table,
    }
}

/// `⟨a⟩` with index `i` and period `p`: elements `a^1 … a^{i+p−1}`, where
/// `a^{i+p} = a^i`. Element `j` stands for `a^{j+1}`.
pub fn monogenic(index: usize, period: usize) -> FiniteSemigroup {
    let n = index + period - 1;
    FiniteSemigroup::from_fn(n, |x, y| {
        let s = x + y + 2;
        let e = if s <= n { s } else { index + (s - index) % period };
        e - 1
    })
}

/// Composition semigroup generated by maps on `points` points, with
/// elements numbered in lexicographic order of their value lists.
pub fn transformation_closure(points: usize, gens: &[Vec<usize>]) -> FiniteSemigroup {
    let compose = |f: &Vec<usize>, g: &Vec<usize>| -> Vec<usize> { (0..points).map(|x| g[f[x]]).collect() };
    let mut seen: BTreeSet<Vec<usize>> = gens.iter().cloned().collect();
    let mut frontier: Vec<Vec<usize>> = seen.iter().cloned().collect();
    while let Some(f) = frontier.pop() {
        for g in gens {
            let h = compose(&f, g);
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    let elems: Vec<Vec<usize>> = seen.into_iter().collect();
    let index: BTreeMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, f)| (f, i)).collect();
    FiniteSemigroup::from_fn(elems.len(), |a, b| index[&compose(&elems[a], &elems[b])])
}

pub fn direct_product(s: &FiniteSemigroup, t: &FiniteSemigroup) -> FiniteSemigroup {
    let m = t.size();
    FiniteSemigroup::from_fn(s.size() * m, |a, b| {
        s.mul(a / m, b / m) * m + t.mul(a % m, b % m)
    })
}

fn fixed_members() -> Vec<FamilyMember> {
    let mut out = Vec::new();
    for n in 1..=6 {
        for index in 1..=n {
            let period = n + 1 - index;
            out.push(member(format!("monogenic(i={index},p={period})"), monogenic(index, period)));
        }
    }
    for n in 1..=6 {
        out.push(member(format!("z{n}"), FiniteSemigroup::cyclic_group(n)));
        out.push(member(format!("max{n}"), FiniteSemigroup::max_chain(n)));
        out.push(member(format!("min{n}"), FiniteSemigroup::from_fn(n, |a, b| a.min(b))));
    }
    for n in 2..=6 {
        out.push(member(format!("left_zero{n}"), FiniteSemigroup::from_fn(n, |a, _| a)));
        out.push(member(format!("right_zero{n}"), FiniteSemigroup::from_fn(n, |_, b| b)));
        out.push(member(format!("null{n}"), FiniteSemigroup::from_fn(n, |_, _| 0)));
    }
    let small: Vec<FamilyMember> = vec![
        member("z2", FiniteSemigroup::cyclic_group(2)),
        member("max2", FiniteSemigroup::max_chain(2)),
        member("left_zero2", FiniteSemigroup::from_fn(2, |a, _| a)),
        member("right_zero2", FiniteSemigroup::from_fn(2, |_, b| b)),
        member("null2", FiniteSemigroup::from_fn(2, |_, _| 0)),
        member("z3", FiniteSemigroup::cyclic_group(3)),
        member("max3", FiniteSemigroup::max_chain(3)),
        member("monogenic(i=2,p=2)", monogenic(2, 2)),
    ];
    for s in &small {
        for t in &small {
            if s.table.size() * t.table.size() <= 6 {
                out.push(member(
                    format!("{}×{}", s.name, t.name),
                    direct_product(&s.table, &t.table),
                ));
            }
        }
    }
    out
}

/// At least `min_count` semigroups with carriers of size at most `max_size`:
/// a fixed list of standard examples followed by transformation semigroups
/// generated by random maps on 2 to 4 points, drawn from `seed`.
pub fn generate_family(seed: u64, min_count: usize, max_size: usize) -> Vec<FamilyMember> {
    let mut out: Vec<FamilyMember> = fixed_members()
        .into_iter()
        .filter(|m| m.table.size() <= max_size)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = 0u64;
    while out.len() < min_count {
        draws += 1;
        let points = rng.gen_range(2..=4);
        let ngens = rng.gen_range(1..=2);
        let gens: Vec<Vec<usize>> = (0..ngens)
            .map(|_| (0..points).map(|_| rng.gen_range(0..points)).collect())
            .collect();
        let t = transformation_closure(points, &gens);
        if t.size() <= max_size {
            out.push(member(format!("transformations#{draws}({points} points, {gens:?})"), t));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_is_associative_and_large_enough() {
        let fam = generate_family(7, 120, 6);
        assert!(fam.len() >= 120);
        for m in &fam {
            assert!(m.table.size() <= 6, "{}", m.name);
            assert!(m.table.is_associative(), "{}", m.name);
        }
    }

    #[test]
    fn family_is_deterministic() {
        let a: Vec<_> = generate_family(3, 110, 6).into_iter().map(|m| m.table).collect();
        let b: Vec<_> = generate_family(3, 110, 6).into_iter().map(|m| m.table).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn monogenic_shape() {
        let s = monogenic(2, 3);
        assert_eq!(s.size(), 4);
        // a²·a³ = a⁵ = a², i.e. 1·2 = 1.
        assert_eq!(s.mul(1, 2), 1);
        assert_eq!(s.mul(0, 2), 3);
        // With index 1 the semigroup is a cyclic group whose identity is a⁴.
        assert_eq!(crate::algebra::idempotents(&monogenic(1, 4)), vec![3]);
    }

    #[test]
    fn transformation_closure_of_a_swap() {
        let t = transformation_closure(2, &[vec![1, 0]]);
        assert_eq!(t.size(), 2);
        assert!(t.is_associative());
    }
}
