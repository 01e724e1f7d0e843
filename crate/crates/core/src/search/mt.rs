//! Chains whose Milliken–Taylor hypergraph `fp(ā)_n` is monochromatic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{run_tasks, Budget, Coloring, Halt, Outcome, SearchLimits, TaskResult};
use crate::error::{Error, Result};
use crate::fp::{mt_edges, MtEdge};
use crate::semigroup::{CoveringRelation, Element, Semigroup};

/// An `n`-element vertex set in canonical order; what edge colorings color.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge<E>(pub Vec<E>);

impl<E: fmt::Display> fmt::Display for Edge<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtWitness<E> {
    pub chain: Vec<E>,
    pub color: u8,
    pub edges: Vec<MtEdge<E>>,
}

struct Dfs<'a, S: Semigroup> {
    inst: &'a S,
    rel: &'a CoveringRelation<S::Elem>,
    coloring: &'a Coloring<Edge<S::Elem>>,
    pool: &'a [S::Elem],
    n: usize,
    len: usize,
}

impl<S: Semigroup> Dfs<'_, S> {
    /// The common color of the prefix's edges (`Some(None)` if it has none
    /// yet), or `None` when two colors appear.
    fn edge_color(&self, chain: &[S::Elem], budget: &mut Budget) -> Result<Option<Option<u8>>, Halt> {
        budget.tick()?;
        if chain.len() < self.n {
            return Ok(Some(None));
        }
        let mut color = None;
        for e in mt_edges(self.inst, chain, self.n)? {
            let c = self.coloring.color(&Edge(e.vertices))?;
            match color {
                None => color = Some(c),
                Some(prev) if prev != c => return Ok(None),
                Some(_) => {}
            }
        }
        Ok(Some(color))
    }

    fn search(&self, chain: &mut Vec<S::Elem>, budget: &mut Budget) -> Result<Option<MtWitness<S::Elem>>, Halt> {
        let Some(color) = self.edge_color(chain, budget)? else {
            return Ok(None);
        };
        if chain.len() == self.len {
            let edges = mt_edges(self.inst, chain, self.n)?;
            let color = color.expect("a chain of length ≥ n has edges");
            return Ok(Some(MtWitness {
                chain: chain.clone(),
                color,
                edges,
            }));
        }
        let last = chain.last().expect("chain is nonempty").clone();
        for a in self.pool {
            if !self.rel.holds(&last, a) {
                continue;
            }
            chain.push(a.clone());
            let found = self.search(chain, budget)?;
            chain.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// The lexicographically least `⊰`-chain of length `len` from `pool` all of
/// whose `fp(ā)_n` edges share a color.
pub fn find_mt_witness<S: Semigroup>(
    inst: &S,
    rel: &CoveringRelation<S::Elem>,
    coloring: &Coloring<Edge<S::Elem>>,
    n: usize,
    len: usize,
    pool: &[S::Elem],
    limits: &SearchLimits,
) -> Result<Outcome<MtWitness<S::Elem>>> {
    if n == 0 || len < n {
        return Err(Error::Precondition(format!("need 1 ≤ n ≤ L, got n = {n}, L = {len}")));
    }
    let pool: Vec<S::Elem> = pool.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let dfs = Dfs {
        inst,
        rel,
        coloring,
        pool: &pool,
        n,
        len,
    };
    let (outcome, _) = run_tasks(&pool, limits, |a, budget| -> TaskResult<_, ()> {
        let mut chain = vec![a.clone()];
        Ok(dfs.search(&mut chain, budget)?.ok_or(()))
    })?;
    Ok(outcome)
}

/// Recomputes every edge by assigning each chain index to one of the blocks
/// `1..=n` or to none, keeping assignments whose blocks are nonempty and
/// ordered, and compares vertex sets and colors with the witness.
pub fn verify_mt_witness<S: Semigroup>(
    inst: &S,
    rel: &CoveringRelation<S::Elem>,
    coloring: &Coloring<Edge<S::Elem>>,
    n: usize,
    w: &MtWitness<S::Elem>,
) -> std::result::Result<(), String> {
    let chain = &w.chain;
    let len = chain.len();
    if n == 0 || len < n || len > 10 {
        return Err(format!("cannot check n = {n} on a chain of length {len}"));
    }
    for (i, pair) in chain.windows(2).enumerate() {
        if !rel.holds(&pair[0], &pair[1]) {
            return Err(format!("entries {i} and {} are not related by {}", i + 1, rel.name()));
        }
    }
    let mut expected: BTreeSet<Vec<S::Elem>> = BTreeSet::new();
    let total = (n + 1).pow(len as u32);
    for mut code in 0..total {
        let labels: Vec<usize> = (0..len)
            .map(|_| {
                let l = code % (n + 1);
                code /= n + 1;
                l
            })
            .collect();
        let used: Vec<usize> = labels.iter().copied().filter(|&l| l > 0).collect();
        if used.windows(2).any(|p| p[0] > p[1]) || (1..=n).any(|j| !used.contains(&j)) {
            continue;
        }
        let mut vertices = Vec::with_capacity(n);
        for j in 1..=n {
            let mut acc: Option<S::Elem> = None;
            for (i, _) in labels.iter().enumerate().filter(|(_, &l)| l == j) {
                acc = Some(match acc {
                    None => chain[i].clone(),
                    Some(p) => inst.product(&p, &chain[i]).map_err(|e| e.to_string())?,
                });
            }
            vertices.push(acc.expect("block is nonempty"));
        }
        vertices.sort();
        vertices.dedup();
        if vertices.len() == n {
            expected.insert(vertices);
        }
    }
    let listed: BTreeMap<&Vec<S::Elem>, &MtEdge<S::Elem>> = w.edges.iter().map(|e| (&e.vertices, e)).collect();
    if listed.len() != w.edges.len() {
        return Err("edges repeat".into());
    }
    if let Some(v) = expected.iter().find(|v| !listed.contains_key(v)) {
        return Err(format!("edge {} is missing", Edge(v.clone())));
    }
    if let Some(v) = listed.keys().find(|v| !expected.contains(**v)) {
        return Err(format!("{} is not an edge of the chain", Edge((*v).clone())));
    }
    for e in &w.edges {
        let c = coloring.color(&Edge(e.vertices.clone())).map_err(|err| err.to_string())?;
        if c != w.color {
            return Err(format!("edge {} has color {c}, not {}", Edge(e.vertices.clone()), w.color));
        }
    }
    Ok(())
}

/// Colors `n`-sets of integers by the parity of their sum.
pub fn sum_parity_coloring() -> Result<Coloring<Edge<u64>>> {
    Coloring::rule("sum_parity", 2, |e: &Edge<u64>| Some((e.0.iter().sum::<u64>() % 2) as u8 + 1))
}

impl<E: Element> Edge<E> {
    pub fn vertices(&self) -> &[E] {
        &self.0
    }
}
