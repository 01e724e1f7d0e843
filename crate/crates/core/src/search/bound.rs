//! Least `n` such that every `k`-coloring of a finite carrier contains a
//! monochromatic pattern.
//!
//! Each problem turns into a carrier of `N` points and a list of patterns
//! (point sets). Colorings are explored as base-`k` strings over the
//! canonically ordered carrier, depth first, and a branch closes as soon as
//! some pattern is monochromatic. With symmetry pruning only
//! restricted-growth strings are explored (each point uses at most one color
//! more than those before it), which fixes the first point to color 1 and
//! keeps one coloring per color permutation class. The least witness-free
//! coloring is restricted-growth anyway, so pruning does not change it.
//!
//! A threshold comes with two certificates: the closed branches of the search
//! at `n` (a refutation that checks by walking the coloring tree) and the
//! least witness-free coloring at `n − 1`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{run_tasks, Budget, Cut, Halt, Outcome, SearchLimits, TaskResult};
use crate::error::{Error, Result};
use crate::fp::fp_sigma_minus;
use crate::instances::{FinFn, FinK, Tower, TowerVariant};
use crate::semigroup::Morphism;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum BoundProblem {
    /// `{x, y, x + y}` in `{1..n}`, `x = y` allowed.
    Schur,
    /// Arithmetic progressions of the given length in `{1..n}`.
    Vdw { len: usize },
    /// Combinatorial lines in `A^n` for an alphabet of the given size.
    Hj { alphabet: usize },
    /// `{a, b, a ∪ b}` for disjoint nonempty `a, b ⊆ {1..n}`.
    FiniteUnions,
    /// `fp^Σ(ā) ∖ FIN_{k−1}` for block sequences of length `len` in `FIN_k`
    /// with support below `n`, `Σ` the tetris powers.
    GowersFinK { k: u8, len: usize },
    /// Cliques of the given size in the complete graph on `n` points, edges
    /// colored.
    Ramsey { clique: usize },
}

impl fmt::Display for BoundProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundProblem::Schur => write!(f, "schur"),
            BoundProblem::Vdw { len } => write!(f, "vdw({len})"),
            BoundProblem::Hj { alphabet } => write!(f, "hj({alphabet})"),
            BoundProblem::FiniteUnions => write!(f, "finite_unions"),
            BoundProblem::GowersFinK { k, len } => write!(f, "gowers_fin_k({k},{len})"),
            BoundProblem::Ramsey { clique } => write!(f, "ramsey({clique})"),
        }
    }
}

impl FromStr for BoundProblem {
    type Err = Error;

    /// `schur`, `vdw(3)`, `hj(2)`, `finite_unions`, `gowers_fin_k(1,2)`,
    /// `ramsey(3)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, args) = match s.split_once('(') {
            Some((h, rest)) => {
                let body = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::parse(s, "missing `)`"))?;
                let args = body
                    .split(',')
                    .map(|a| a.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::parse(s, e.to_string()))?;
                (h.trim(), args)
            }
            None => (s, Vec::new()),
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::parse(s, format!("`{head}` takes {n} argument(s)")))
            }
        };
        let positive = |v: usize| {
            if v == 0 {
                Err(Error::parse(s, "arguments must be positive"))
            } else {
                Ok(v)
            }
        };
        match head {
            "schur" => arity(0).map(|_| BoundProblem::Schur),
            "finite_unions" => arity(0).map(|_| BoundProblem::FiniteUnions),
            "vdw" => {
                arity(1)?;
                Ok(BoundProblem::Vdw { len: positive(args[0])? })
            }
            "hj" => {
                arity(1)?;
                if args[0] > 26 {
                    return Err(Error::parse(s, "alphabet size must be at most 26"));
                }
                Ok(BoundProblem::Hj { alphabet: positive(args[0])? })
            }
            "gowers_fin_k" => {
                arity(2)?;
                let k = positive(args[0])?;
                if k > 8 {
                    return Err(Error::parse(s, "k must be at most 8"));
                }
                Ok(BoundProblem::GowersFinK {
                    k: k as u8,
                    len: positive(args[1])?,
                })
            }
            "ramsey" => {
                arity(1)?;
                if args[0] < 2 {
                    return Err(Error::parse(s, "clique size must be at least 2"));
                }
                Ok(BoundProblem::Ramsey { clique: args[0] })
            }
            _ => Err(Error::parse(s, "unknown bound problem")),
        }
    }
}

/// The carrier of size `n` in canonical order, with its patterns as sorted
/// index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundInstance {
    pub labels: Vec<String>,
    pub patterns: Vec<Vec<usize>>,
}

impl BoundInstance {
    fn new(labels: Vec<String>, patterns: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let set: BTreeSet<Vec<usize>> = patterns
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p.dedup();
                p
            })
            .collect();
        BoundInstance {
            labels,
            patterns: set.into_iter().collect(),
        }
    }
}

fn subset_label(mask: u32) -> String {
    let items: Vec<String> = (0..32).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

impl BoundProblem {
    /// The carrier at size `n`; size 0 is empty for every problem.
    pub fn instance(&self, n: usize) -> Result<BoundInstance> {
        if n == 0 {
            return Ok(BoundInstance::new(Vec::new(), Vec::new()));
        }
        match *self {
            BoundProblem::Schur => {
                let labels = (1..=n).map(|x| x.to_string()).collect();
                let pats = (1..=n).flat_map(|x| (x..=n).filter(move |y| x + y <= n).map(move |y| vec![x - 1, y - 1, x + y - 1]));
                Ok(BoundInstance::new(labels, pats))
            }
            BoundProblem::Vdw { len } => {
                let labels = (1..=n).map(|x| x.to_string()).collect();
                let mut pats = Vec::new();
                if len <= 1 {
                    pats.extend((0..n).map(|a| vec![a]));
                } else {
                    for a in 0..n {
                        for d in 1..n {
                            let last = a + d * (len - 1);
                            if last < n {
                                pats.push((0..len).map(|i| a + d * i).collect());
                            }
                        }
                    }
                }
                Ok(BoundInstance::new(labels, pats))
            }
            BoundProblem::Hj { alphabet } => {
                let total = alphabet
                    .checked_pow(n as u32)
                    .filter(|&t| t <= 1 << 20)
                    .ok_or_else(|| Error::budget(self.to_string(), format!("carrier {alphabet}^{n} too large")))?;
                // Point index = base-|A| number with the first coordinate most
                // significant, which is lexicographic word order.
                let letter = |i: usize| (b'a' + i as u8) as char;
                let labels = (0..total)
                    .map(|mut p| {
                        let mut w = vec![' '; n];
                        for slot in w.iter_mut().rev() {
                            *slot = letter(p % alphabet);
                            p /= alphabet;
                        }
                        w.into_iter().collect()
                    })
                    .collect();
                let mut pats = Vec::new();
                // Variable words as base-(|A|+1) strings with digit |A| the variable.
                for mut code in 0..(alphabet + 1).pow(n as u32) {
                    let mut digits = vec![0; n];
                    for d in digits.iter_mut().rev() {
                        *d = code % (alphabet + 1);
                        code /= alphabet + 1;
                    }
                    if !digits.contains(&alphabet) {
                        continue;
                    }
                    pats.push(
                        (0..alphabet)
                            .map(|a| digits.iter().fold(0, |acc, &d| acc * alphabet + if d == alphabet { a } else { d }))
                            .collect(),
                    );
                }
                Ok(BoundInstance::new(labels, pats))
            }
            BoundProblem::FiniteUnions => {
                if n > 16 {
                    return Err(Error::budget(self.to_string(), format!("2^{n} subsets")));
                }
                // Subsets as level-1 functions, in the FIN order.
                let mut sets: Vec<(FinFn, u32)> = (1u32..(1 << n))
                    .map(|m| {
                        let dense: Vec<u8> = (0..n).map(|i| (m >> i & 1) as u8).collect();
                        (FinFn::from_dense(&dense), m)
                    })
                    .collect();
                sets.sort();
                let index: HashMap<u32, usize> = sets.iter().enumerate().map(|(i, s)| (s.1, i)).collect();
                let labels = sets.iter().map(|s| subset_label(s.1)).collect();
                let mut pats = Vec::new();
                for &(_, a) in &sets {
                    for &(_, b) in &sets {
                        if a < b && a & b == 0 {
                            pats.push(vec![index[&a], index[&b], index[&(a | b)]]);
                        }
                    }
                }
                Ok(BoundInstance::new(labels, pats))
            }
            BoundProblem::GowersFinK { k, len } => gowers_instance(k, len, n),
            BoundProblem::Ramsey { clique } => {
                let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
                let index: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(e, &p)| (p, e)).collect();
                let labels = edges.iter().map(|(i, j)| format!("{{{},{}}}", i + 1, j + 1)).collect();
                let mut pats = Vec::new();
                let mut verts = Vec::with_capacity(clique);
                cliques(n, clique, 0, &mut verts, &mut |vs: &[usize]| {
                    let mut p = Vec::new();
                    for (x, &i) in vs.iter().enumerate() {
                        for &j in &vs[x + 1..] {
                            p.push(index[&(i, j)]);
                        }
                    }
                    pats.push(p);
                });
                Ok(BoundInstance::new(labels, pats))
            }
        }
    }
}

fn cliques(n: usize, size: usize, start: usize, verts: &mut Vec<usize>, out: &mut impl FnMut(&[usize])) {
    if verts.len() == size {
        out(verts);
        return;
    }
    for v in start..n {
        verts.push(v);
        cliques(n, size, v + 1, verts, out);
        verts.pop();
    }
}

fn gowers_instance(k: u8, len: usize, n: usize) -> Result<BoundInstance> {
    let name = format!("gowers_fin_k({k},{len})");
    if n > 12 {
        return Err(Error::budget(name, format!("support bound {n}")));
    }
    let g = FinK::new(k, n as u32)?;
    let carrier = g.functions(n as u32);
    if carrier.len() > 1 << 16 {
        return Err(Error::budget(name, format!("{} functions", carrier.len())));
    }
    let index: HashMap<&FinFn, usize> = carrier.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let sigma: Vec<Morphism<FinFn>> = if k >= 2 {
        Tower::fin(k, n as u32, TowerVariant::Lemma)?.composites()
    } else {
        Vec::new()
    };
    let top: Vec<&FinFn> = carrier.iter().filter(|f| f.level() == k).collect();
    let below = FinK::level(k - 1);
    let mut pats = Vec::new();
    let mut chain: Vec<FinFn> = Vec::with_capacity(len);
    fn blocks(
        top: &[&FinFn],
        len: usize,
        chain: &mut Vec<FinFn>,
        out: &mut dyn FnMut(&[FinFn]) -> Result<()>,
    ) -> Result<()> {
        if chain.len() == len {
            return out(chain);
        }
        for f in top {
            if chain.last().is_none_or(|l| l.support_before(f)) {
                chain.push((*f).clone());
                blocks(top, len, chain, out)?;
                chain.pop();
            }
        }
        Ok(())
    }
    blocks(&top, len, &mut chain, &mut |c: &[FinFn]| {
        let set = fp_sigma_minus(&g, c, &sigma, &below)?;
        pats.push(set.elements().map(|e| index[e]).collect());
        Ok(())
    })?;
    Ok(BoundInstance::new(carrier.iter().map(|f| f.to_string()).collect(), pats))
}

/// A closed branch: the colors of the first `prefix.len()` points and a
/// pattern inside that prefix on which they agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    pub prefix: Vec<u8>,
    pub pattern: Vec<usize>,
}

/// Closed branches covering every coloring (every restricted-growth coloring
/// when `symmetry` is set) of a carrier of `size` points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub size: usize,
    pub symmetry: bool,
    pub leaves: Vec<Leaf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeColoring {
    pub n: usize,
    pub labels: Vec<String>,
    pub colors: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub problem: BoundProblem,
    pub k: u8,
    pub threshold: usize,
    pub symmetry: bool,
    pub nodes: u64,
    pub refutation: Refutation,
    pub free_coloring: FreeColoring,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundOutcome {
    Resolved(BoundResult),
    /// No threshold up to `n_max`; `last_free` is the largest `n` with a
    /// witness-free coloring found.
    Unresolved {
        n_max: usize,
        last_free: Option<FreeColoring>,
        cut: Option<Cut>,
        at: usize,
    },
}

/// Depth at which the coloring tree is split into tasks.
const SPLIT_DEPTH: usize = 8;

struct Tree<'a> {
    k: u8,
    symmetry: bool,
    size: usize,
    by_max: &'a [Vec<&'a [usize]>],
}

impl Tree<'_> {
    fn allowed(&self, colors: &[u8]) -> u8 {
        if self.symmetry {
            (colors.iter().copied().max().unwrap_or(0) + 1).min(self.k)
        } else {
            self.k
        }
    }

    /// A pattern ending at the last point that is monochromatic.
    fn closing(&self, colors: &[u8]) -> Option<&[usize]> {
        let i = colors.len() - 1;
        self.by_max[i]
            .iter()
            .copied()
            .find(|p| p.iter().all(|&j| colors[j] == colors[i]))
    }

    /// Depth-first from `colors`; returns the first witness-free coloring or
    /// the closed branches below `colors`.
    fn explore(&self, colors: &mut Vec<u8>, leaves: &mut Vec<Leaf>, budget: &mut Budget) -> Result<bool, Halt> {
        if colors.len() == self.size {
            return Ok(true);
        }
        for c in 1..=self.allowed(colors) {
            budget.tick()?;
            colors.push(c);
            if let Some(p) = self.closing(colors) {
                leaves.push(Leaf {
                    prefix: colors.clone(),
                    pattern: p.to_vec(),
                });
            } else if self.explore(colors, leaves, budget)? {
                return Ok(true);
            }
            colors.pop();
        }
        Ok(false)
    }

    /// Open prefixes of length `SPLIT_DEPTH` (or complete colorings) and
    /// branches already closed above that depth, in order.
    fn split(&self, colors: &mut Vec<u8>, out: &mut Vec<Task>) {
        if colors.len() == self.size.min(SPLIT_DEPTH) {
            out.push(Task::Open(colors.clone()));
            return;
        }
        for c in 1..=self.allowed(colors) {
            colors.push(c);
            match self.closing(colors) {
                Some(p) => out.push(Task::Closed(Leaf {
                    prefix: colors.clone(),
                    pattern: p.to_vec(),
                })),
                None => self.split(colors, out),
            }
            colors.pop();
        }
    }
}

enum Task {
    Open(Vec<u8>),
    Closed(Leaf),
}

enum Search {
    Free(Vec<u8>),
    Refuted(Vec<Leaf>, u64),
    Cut(Cut),
}

fn search_instance(inst: &BoundInstance, k: u8, symmetry: bool, limits: &SearchLimits) -> Result<Search> {
    let size = inst.labels.len();
    let mut by_max: Vec<Vec<&[usize]>> = vec![Vec::new(); size];
    for p in &inst.patterns {
        if let Some(&m) = p.last() {
            by_max[m].push(p);
        }
    }
    let tree = Tree {
        k,
        symmetry,
        size,
        by_max: &by_max,
    };
    let mut tasks = Vec::new();
    tree.split(&mut Vec::new(), &mut tasks);
    let (outcome, leaves) = run_tasks(&tasks, limits, |task, budget| -> TaskResult<Vec<u8>, Vec<Leaf>> {
        match task {
            Task::Closed(leaf) => {
                budget.tick()?;
                Ok(Err(vec![leaf.clone()]))
            }
            Task::Open(prefix) => {
                budget.tick()?;
                let mut colors = prefix.clone();
                let mut leaves = Vec::new();
                if tree.explore(&mut colors, &mut leaves, budget)? {
                    Ok(Ok(colors))
                } else {
                    Ok(Err(leaves))
                }
            }
        }
    })?;
    Ok(match outcome {
        Outcome::Found { witness, .. } => Search::Free(witness),
        Outcome::Exhausted { nodes } => Search::Refuted(leaves.into_iter().flatten().collect(), nodes),
        Outcome::Unresolved { cut, .. } => Search::Cut(cut),
    })
}

/// The least `n ≤ n_max` such that every `k`-coloring of `carrier(n)` has a
/// monochromatic pattern. Limits apply to each `n` separately.
pub fn compute_bound(
    problem: BoundProblem,
    k: u8,
    n_max: usize,
    limits: &SearchLimits,
    symmetry: bool,
) -> Result<BoundOutcome> {
    if k == 0 {
        return Err(Error::Config("k must be positive".into()));
    }
    let mut last_free = FreeColoring {
        n: 0,
        labels: Vec::new(),
        colors: Vec::new(),
    };
    let mut have_free = false;
    for n in 1..=n_max {
        let inst = problem.instance(n)?;
        match search_instance(&inst, k, symmetry, limits)? {
            Search::Free(colors) => {
                last_free = FreeColoring {
                    n,
                    labels: inst.labels,
                    colors,
                };
                have_free = true;
            }
            Search::Refuted(leaves, nodes) => {
                return Ok(BoundOutcome::Resolved(BoundResult {
                    problem,
                    k,
                    threshold: n,
                    symmetry,
                    nodes,
                    refutation: Refutation {
                        size: inst.labels.len(),
                        symmetry,
                        leaves,
                    },
                    free_coloring: last_free,
                }));
            }
            Search::Cut(cut) => {
                return Ok(BoundOutcome::Unresolved {
                    n_max,
                    last_free: have_free.then_some(last_free),
                    cut: Some(cut),
                    at: n,
                })
            }
        }
    }
    Ok(BoundOutcome::Unresolved {
        n_max,
        last_free: have_free.then_some(last_free),
        cut: None,
        at: n_max,
    })
}

/// Checks a refutation by walking the coloring tree: every branch must reach
/// a leaf whose pattern is a real pattern, lies inside the prefix and is
/// monochromatic.
pub fn verify_refutation(inst: &BoundInstance, k: u8, r: &Refutation) -> std::result::Result<(), String> {
    if r.size != inst.labels.len() {
        return Err(format!("refutation is for {} points, carrier has {}", r.size, inst.labels.len()));
    }
    let patterns: BTreeSet<&Vec<usize>> = inst.patterns.iter().collect();
    let leaves: BTreeMap<&Vec<u8>, &Vec<usize>> = r.leaves.iter().map(|l| (&l.prefix, &l.pattern)).collect();
    let mut used = 0usize;
    let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        if let Some(p) = leaves.get(&prefix) {
            used += 1;
            if !patterns.contains(p) {
                return Err(format!("leaf {prefix:?} cites a non-pattern {p:?}"));
            }
            let Some(&first) = p.first() else {
                return Err(format!("leaf {prefix:?} cites an empty pattern"));
            };
            if p.iter().any(|&j| j >= prefix.len() || prefix[j] != prefix[first]) {
                return Err(format!("pattern {p:?} is not monochromatic under {prefix:?}"));
            }
            continue;
        }
        if prefix.len() == r.size {
            return Err(format!("coloring {prefix:?} is not refuted"));
        }
        let top = if r.symmetry {
            (prefix.iter().copied().max().unwrap_or(0) + 1).min(k)
        } else {
            k
        };
        for c in (1..=top).rev() {
            let mut next = prefix.clone();
            next.push(c);
            stack.push(next);
        }
    }
    if used != r.leaves.len() {
        return Err(format!("{} leaves are unreachable", r.leaves.len() - used));
    }
    Ok(())
}

/// Checks that a coloring leaves every pattern with two colors.
pub fn verify_free_coloring(inst: &BoundInstance, k: u8, c: &FreeColoring) -> std::result::Result<(), String> {
    if c.colors.len() != inst.labels.len() {
        return Err(format!("coloring has {} entries for {} points", c.colors.len(), inst.labels.len()));
    }
    if let Some(x) = c.colors.iter().find(|&&x| x == 0 || x > k) {
        return Err(format!("color {x} is outside 1..={k}"));
    }
    for p in &inst.patterns {
        if p.iter().all(|&j| c.colors[j] == c.colors[p[0]]) {
            return Err(format!("pattern {p:?} is monochromatic"));
        }
    }
    Ok(())
}

/// Replays both certificates of a bound.
pub fn verify_bound(r: &BoundResult) -> std::result::Result<(), String> {
    let at = r.problem.instance(r.threshold).map_err(|e| e.to_string())?;
    verify_refutation(&at, r.k, &r.refutation)?;
    if r.free_coloring.n + 1 != r.threshold {
        return Err(format!(
            "free coloring is for n = {}, threshold is {}",
            r.free_coloring.n, r.threshold
        ));
    }
    let below = r.problem.instance(r.free_coloring.n).map_err(|e| e.to_string())?;
    verify_free_coloring(&below, r.k, &r.free_coloring)
}
