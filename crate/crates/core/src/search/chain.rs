//! Monochromatic `fp^Σ ∖ C` sets over `⊰`-chains.

use std::collections::{BTreeMap, BTreeSet};

use super::{run_tasks, Budget, Coloring, Halt, Outcome, SearchLimits, TaskResult};
use crate::error::{Error, Result};
use crate::fp::{FpBuilder, Provenance};
use crate::semigroup::{CoveringRelation, Morphism, Semigroup, Subsemigroup};

/// What a chain search is about: the instance, `Σ`, the excluded nice
/// subsemigroup `C` and the relation the chain follows.
pub struct FpProblem<S: Semigroup> {
    pub inst: S,
    pub sigma: Vec<Morphism<S::Elem>>,
    pub c: Subsemigroup<S::Elem>,
    pub rel: CoveringRelation<S::Elem>,
    /// Require pairwise distinct chain entries.
    pub distinct: bool,
}

impl<S: Semigroup> FpProblem<S> {
    /// Plain `fp` (no `Σ`, nothing excluded).
    pub fn plain(inst: S, rel: CoveringRelation<S::Elem>) -> Self {
        FpProblem {
            inst,
            sigma: Vec::new(),
            c: Subsemigroup::empty(),
            rel,
            distinct: false,
        }
    }

    pub fn with_sigma(mut self, sigma: Vec<Morphism<S::Elem>>, c: Subsemigroup<S::Elem>) -> Self {
        self.sigma = sigma;
        self.c = c;
        self
    }

    pub fn distinct(mut self, distinct: bool) -> Self {
        self.distinct = distinct;
        self
    }
}

/// A chain whose `fp^Σ ∖ C` set is monochromatic, with that set listed in
/// canonical order together with one provenance per member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpWitness<E> {
    pub chain: Vec<E>,
    pub color: u8,
    pub members: Vec<(E, Provenance)>,
}

struct Dfs<'a, S: Semigroup> {
    problem: &'a FpProblem<S>,
    coloring: &'a Coloring<S::Elem>,
    pool: &'a [S::Elem],
    len: usize,
}

impl<S: Semigroup> Dfs<'_, S> {
    /// Adds `a` to the chain; `None` when the new members break
    /// monochromaticity.
    fn extend<'b>(
        &self,
        builder: &FpBuilder<'b, S>,
        chain: &[S::Elem],
        color: Option<u8>,
        a: &S::Elem,
        budget: &mut Budget,
    ) -> Result<Option<(FpBuilder<'b, S>, u8)>, Halt> {
        budget.tick()?;
        let mut next = builder.clone();
        let added = next.push(a).map_err(|e| match e {
            Error::BudgetExceeded { instance, detail } => Error::BudgetExceeded {
                instance,
                detail: format!("{detail} while extending the chain ({}) by {a}", join(chain)),
            },
            other => other,
        })?;
        let mut color = color;
        for (e, _) in added.iter().filter(|(e, _)| !self.problem.c.contains(e)) {
            let c = self.coloring.color(e)?;
            match color {
                None => color = Some(c),
                Some(prev) if prev != c => return Ok(None),
                Some(_) => {}
            }
        }
        match color {
            Some(c) => Ok(Some((next, c))),
            None => Err(Halt::Fail(Error::Precondition(format!(
                "{a} contributes nothing outside {}",
                self.problem.c.name()
            )))),
        }
    }

    fn search(
        &self,
        builder: &FpBuilder<'_, S>,
        chain: &mut Vec<S::Elem>,
        color: u8,
        budget: &mut Budget,
    ) -> Result<Option<FpWitness<S::Elem>>, Halt> {
        if chain.len() == self.len {
            let members = builder
                .snapshot()
                .minus(&self.problem.c)
                .iter()
                .map(|(e, p)| (e.clone(), p.clone()))
                .collect();
            return Ok(Some(FpWitness {
                chain: chain.clone(),
                color,
                members,
            }));
        }
        let last = chain.last().expect("chain is nonempty").clone();
        for a in self.pool {
            if !self.problem.rel.holds(&last, a) || (self.problem.distinct && chain.contains(a)) {
                continue;
            }
            if let Some((next, c)) = self.extend(builder, chain, Some(color), a, budget)? {
                chain.push(a.clone());
                let found = self.search(&next, chain, c, budget)?;
                chain.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
        Ok(None)
    }
}

fn join<E: std::fmt::Display>(items: &[E]) -> String {
    items.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
}

/// The lexicographically least `⊰`-chain of length `len` drawn from `pool`
/// whose `fp^Σ ∖ C` set is monochromatic.
///
/// Partial chains are abandoned as soon as their `fp^Σ ∖ C` set shows two
/// colors, which is safe because the set only grows along an extension.
pub fn find_mono_fp_chain<S: Semigroup>(
    problem: &FpProblem<S>,
    coloring: &Coloring<S::Elem>,
    len: usize,
    pool: &[S::Elem],
    limits: &SearchLimits,
) -> Result<Outcome<FpWitness<S::Elem>>> {
    if len == 0 {
        return Err(Error::Precondition("chain length must be positive".into()));
    }
    let pool: Vec<S::Elem> = pool.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if let Some(a) = pool.iter().find(|a| problem.c.contains(a)) {
        return Err(Error::Precondition(format!("pool element {a} lies in {}", problem.c.name())));
    }
    let dfs = Dfs {
        problem,
        coloring,
        pool: &pool,
        len,
    };
    let (outcome, _) = run_tasks(&pool, limits, |a, budget| -> TaskResult<_, ()> {
        let root = FpBuilder::new(&problem.inst, &problem.sigma);
        let mut chain = Vec::with_capacity(len);
        match dfs.extend(&root, &chain, None, a, budget)? {
            None => Ok(Err(())),
            Some((builder, c)) => {
                chain.push(a.clone());
                Ok(dfs.search(&builder, &mut chain, c, budget)?.ok_or(()))
            }
        }
    })?;
    Ok(outcome)
}

/// Re-checks a chain witness without the incremental engine: the chain
/// condition, that no entry lies in `C`, that the listed members are exactly
/// the products over all index subsets and factor choices outside `C`, that
/// every provenance reproduces its member, and that all colors agree.
pub fn verify_fp_witness<S: Semigroup>(
    problem: &FpProblem<S>,
    coloring: &Coloring<S::Elem>,
    w: &FpWitness<S::Elem>,
) -> std::result::Result<(), String> {
    let chain = &w.chain;
    if chain.is_empty() || chain.len() > 16 {
        return Err(format!("chain length {} outside 1..=16", chain.len()));
    }
    for (i, pair) in chain.windows(2).enumerate() {
        if !problem.rel.holds(&pair[0], &pair[1]) {
            return Err(format!("entries {i} and {} are not related by {}", i + 1, problem.rel.name()));
        }
    }
    if problem.distinct {
        let distinct: BTreeSet<_> = chain.iter().collect();
        if distinct.len() != chain.len() {
            return Err("chain entries repeat".into());
        }
    }
    if let Some(a) = chain.iter().find(|a| problem.c.contains(a)) {
        return Err(format!("chain entry {a} lies in {}", problem.c.name()));
    }
    let expected = naive_fp_sigma_minus(problem, chain)?;
    let listed: BTreeMap<&S::Elem, &Provenance> = w.members.iter().map(|(e, p)| (e, p)).collect();
    if listed.len() != w.members.len() {
        return Err("members repeat".into());
    }
    if let Some(e) = expected.iter().find(|e| !listed.contains_key(e)) {
        return Err(format!("{e} is missing from the certified set"));
    }
    if let Some(e) = listed.keys().find(|e| !expected.contains(**e)) {
        return Err(format!("{e} is not in fp^Σ ∖ C of the chain"));
    }
    for (e, p) in &w.members {
        let replayed = replay(problem, chain, p)?;
        if &replayed != e {
            return Err(format!("provenance of {e} yields {replayed}"));
        }
        let c = coloring.color(e).map_err(|err| err.to_string())?;
        if c != w.color {
            return Err(format!("{e} has color {c}, not {}", w.color));
        }
    }
    Ok(())
}

fn image<S: Semigroup>(problem: &FpProblem<S>, choice: usize, a: &S::Elem) -> std::result::Result<S::Elem, String> {
    if choice == problem.sigma.len() {
        Ok(a.clone())
    } else {
        problem.sigma[choice].apply(a).map_err(|e| e.to_string())
    }
}

fn naive_fp_sigma_minus<S: Semigroup>(
    problem: &FpProblem<S>,
    chain: &[S::Elem],
) -> std::result::Result<BTreeSet<S::Elem>, String> {
    let n = chain.len();
    let m = problem.sigma.len() + 1;
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let combos = m.pow(idx.len() as u32);
        for mut code in 0..combos {
            let mut acc: Option<S::Elem> = None;
            for &i in &idx {
                let t = image(problem, code % m, &chain[i])?;
                code /= m;
                acc = Some(match acc {
                    None => t,
                    Some(p) => problem.inst.product(&p, &t).map_err(|e| e.to_string())?,
                });
            }
            let e = acc.expect("nonempty index set");
            if !problem.c.contains(&e) {
                out.insert(e);
            }
        }
    }
    Ok(out)
}

fn replay<S: Semigroup>(
    problem: &FpProblem<S>,
    chain: &[S::Elem],
    p: &Provenance,
) -> std::result::Result<S::Elem, String> {
    use crate::fp::Factor;
    if p.indices.is_empty() || p.indices.len() != p.factors.len() || p.indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("malformed provenance {p:?}"));
    }
    let mut acc: Option<S::Elem> = None;
    for (&i, f) in p.indices.iter().zip(&p.factors) {
        let a = chain.get(i).ok_or_else(|| format!("provenance index {i} out of range"))?;
        let t = match f {
            Factor::Id => a.clone(),
            Factor::Map(j) if *j < problem.sigma.len() => image(problem, *j, a)?,
            Factor::Map(j) => return Err(format!("provenance uses unknown map {j}")),
        };
        acc = Some(match acc {
            None => t,
            Some(prev) => problem.inst.product(&prev, &t).map_err(|e| e.to_string())?,
        });
    }
    Ok(acc.expect("nonempty provenance"))
}
