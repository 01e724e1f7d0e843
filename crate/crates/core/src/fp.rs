//! Finite-products sets `fp(ā)` and `fp^Σ(ā)`, chains, extracted blocks and
//! the Milliken–Taylor hypergraph `fp(ā)_n`.
//!
//! `fp^Σ(ā)` is the set of products `σ_0 a_{i_0} · … · σ_k a_{i_k}` over all
//! strictly increasing index tuples and all choices `σ_j ∈ Σ ∪ {id}`. Each
//! member records the first witness that produced it, where witnesses are
//! ordered colexicographically by index set and then lexicographically by
//! factor choice with `id` last.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::{CoveringRelation, Element, Morphism, Semigroup, Subsemigroup};

/// Which map is applied to one factor of a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Factor {
    /// Index into the `Σ` slice the set was built with.
    Map(usize),
    Id,
}

impl Factor {
    pub fn apply<E: Element>(self, sigma: &[Morphism<E>], e: &E) -> Result<E> {
        match self {
            Factor::Id => Ok(e.clone()),
            Factor::Map(i) => sigma
                .get(i)
                .ok_or_else(|| Error::Precondition(format!("no morphism with index {i}")))?
                .apply(e),
        }
    }

    pub fn label<E: Element>(self, sigma: &[Morphism<E>]) -> String {
        match self {
            Factor::Id => "id".to_string(),
            Factor::Map(i) => sigma
                .get(i)
                .map_or_else(|| format!("#{i}"), |m| m.name().to_string()),
        }
    }
}

/// A witnessing index tuple `i_0 < … < i_k` with its factor choices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub indices: Vec<usize>,
    pub factors: Vec<Factor>,
}

impl Provenance {
    fn mask(&self) -> u64 {
        self.indices.iter().fold(0, |m, &i| m | (1u64 << i))
    }

    /// The enumeration key: colex over index sets, then factor choices.
    pub fn order_key(&self) -> (u64, &[Factor]) {
        (self.mask(), &self.factors)
    }

    /// Recomputes the product this provenance describes.
    pub fn replay<S: Semigroup>(
        &self,
        inst: &S,
        seq: &[S::Elem],
        sigma: &[Morphism<S::Elem>],
    ) -> Result<S::Elem> {
        if self.indices.is_empty() || self.indices.len() != self.factors.len() {
            return Err(Error::Precondition("malformed provenance".into()));
        }
        if self.indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("provenance indices not increasing".into()));
        }
        let mut acc: Option<S::Elem> = None;
        for (&i, &f) in self.indices.iter().zip(&self.factors) {
            let a = seq
                .get(i)
                .ok_or_else(|| Error::Precondition(format!("index {i} out of range")))?;
            let t = f.apply(sigma, a)?;
            acc = Some(match acc {
                None => t,
                Some(p) => inst.product(&p, &t)?,
            });
        }
        Ok(acc.expect("nonempty provenance"))
    }
}

/// A deduplicated finite-products set in canonical element order, with one
/// provenance per member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpSet<E: Ord> {
    members: BTreeMap<E, Provenance>,
}

impl<E: Element> FpSet<E> {
    pub fn empty() -> Self {
        FpSet {
            members: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.members.contains_key(e)
    }

    pub fn provenance(&self, e: &E) -> Option<&Provenance> {
        self.members.get(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, &Provenance)> {
        self.members.iter()
    }

    pub fn elements(&self) -> impl Iterator<Item = &E> {
        self.members.keys()
    }

    pub fn to_vec(&self) -> Vec<E> {
        self.members.keys().cloned().collect()
    }

    /// Members outside `c`.
    pub fn minus(&self, c: &Subsemigroup<E>) -> FpSet<E> {
        FpSet {
            members: self
                .members
                .iter()
                .filter(|(e, _)| !c.contains(e))
                .map(|(e, p)| (e.clone(), p.clone()))
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &FpSet<E>) -> bool {
        self.members.keys().all(|e| other.contains(e))
    }
}

/// Incremental `fp^Σ` over a growing prefix.
///
/// Pushing `a_i` adds `T_i = {σ a_i}` and `p · t` for every earlier member `p`
/// and `t ∈ T_i`. Earlier members are kept in discovery order, which equals
/// witness order, so the first time an element appears it carries its least
/// witness.
pub struct FpBuilder<'a, S: Semigroup> {
    inst: &'a S,
    sigma: &'a [Morphism<S::Elem>],
    len: usize,
    order: Vec<S::Elem>,
    prov: HashMap<S::Elem, Provenance>,
}

impl<S: Semigroup> Clone for FpBuilder<'_, S> {
    fn clone(&self) -> Self {
        FpBuilder {
            inst: self.inst,
            sigma: self.sigma,
            len: self.len,
            order: self.order.clone(),
            prov: self.prov.clone(),
        }
    }
}

impl<'a, S: Semigroup> FpBuilder<'a, S> {
    pub fn new(inst: &'a S, sigma: &'a [Morphism<S::Elem>]) -> Self {
        FpBuilder {
            inst,
            sigma,
            len: 0,
            order: Vec::new(),
            prov: HashMap::new(),
        }
    }

    pub fn prefix_len(&self) -> usize {
        self.len
    }

    /// Factor images of `a` in the fixed order: `Σ` first, `id` last.
    fn images(&self, a: &S::Elem) -> Result<Vec<(Factor, S::Elem)>> {
        let mut out = Vec::with_capacity(self.sigma.len() + 1);
        for (i, m) in self.sigma.iter().enumerate() {
            out.push((Factor::Map(i), self.inst.canonical(&m.apply(a)?)));
        }
        out.push((Factor::Id, a.clone()));
        Ok(out)
    }

    /// Appends the next tuple entry and returns the members it introduced.
    pub fn push(&mut self, a: &S::Elem) -> Result<Vec<(S::Elem, Provenance)>> {
        if self.len >= 64 {
            return Err(Error::Precondition("fp tuples are limited to 64 entries".into()));
        }
        let idx = self.len;
        let images = self.images(a)?;
        let mut added: Vec<(S::Elem, Provenance)> = Vec::new();
        let mut fresh: HashMap<S::Elem, ()> = HashMap::new();
        let mut offer = |e: S::Elem, p: Provenance, prov: &HashMap<S::Elem, Provenance>| {
            if !prov.contains_key(&e) && !fresh.contains_key(&e) {
                fresh.insert(e.clone(), ());
                added.push((e, p));
            }
        };
        for (f, t) in &images {
            offer(
                t.clone(),
                Provenance {
                    indices: vec![idx],
                    factors: vec![*f],
                },
                &self.prov,
            );
        }
        for p in &self.order {
            let base = &self.prov[p];
            for (f, t) in &images {
                let e = self.inst.product(p, t)?;
                let mut indices = base.indices.clone();
                indices.push(idx);
                let mut factors = base.factors.clone();
                factors.push(*f);
                offer(e, Provenance { indices, factors }, &self.prov);
            }
        }
        for (e, p) in &added {
            self.order.push(e.clone());
            self.prov.insert(e.clone(), p.clone());
        }
        self.len += 1;
        Ok(added)
    }

    pub fn members(&self) -> &[S::Elem] {
        &self.order
    }

    pub fn finish(self) -> FpSet<S::Elem> {
        FpSet {
            members: self.prov.into_iter().collect(),
        }
    }

    pub fn snapshot(&self) -> FpSet<S::Elem> {
        FpSet {
            members: self
                .prov
                .iter()
                .map(|(e, p)| (e.clone(), p.clone()))
                .collect(),
        }
    }
}

fn nonempty<E>(seq: &[E]) -> Result<()> {
    if seq.is_empty() {
        Err(Error::Precondition("fp needs a nonempty tuple".into()))
    } else {
        Ok(())
    }
}

/// `fp(ā)`: products of all ordered subsequences.
pub fn fp<S: Semigroup>(inst: &S, seq: &[S::Elem]) -> Result<FpSet<S::Elem>> {
    fp_sigma(inst, seq, &[])
}

/// `fp^Σ(ā)`. With `Σ` empty this is `fp(ā)`.
pub fn fp_sigma<S: Semigroup>(
    inst: &S,
    seq: &[S::Elem],
    sigma: &[Morphism<S::Elem>],
) -> Result<FpSet<S::Elem>> {
    nonempty(seq)?;
    let mut b = FpBuilder::new(inst, sigma);
    for a in seq {
        b.push(a)?;
    }
    Ok(b.finish())
}

/// `fp^Σ(ā) ∖ C`.
pub fn fp_sigma_minus<S: Semigroup>(
    inst: &S,
    seq: &[S::Elem],
    sigma: &[Morphism<S::Elem>],
    c: &Subsemigroup<S::Elem>,
) -> Result<FpSet<S::Elem>> {
    Ok(fp_sigma(inst, seq, sigma)?.minus(c))
}

/// Upper bound `Σ_{k=1}^{n} C(n, k)·(|Σ|+1)^k` on `|fp^Σ(ā)|` for `|ā| = n`.
pub fn fp_size_bound(n: usize, sigma_len: usize) -> u128 {
    let base = sigma_len as u128 + 1;
    let mut total = 0u128;
    let mut binom = 1u128;
    for k in 1..=n as u128 {
        binom = binom * (n as u128 - k + 1) / k;
        total += binom * base.pow(k as u32);
    }
    total
}

/// True iff consecutive entries are related: `a_i ⊰ a_{i+1}`.
pub fn is_chain<E: Element>(seq: &[E], rel: &CoveringRelation<E>) -> bool {
    seq.windows(2).all(|w| rel.holds(&w[0], &w[1]))
}

/// The fp^Σ sets of consecutive blocks `s↾[cuts_i, cuts_{i+1})`.
pub fn extracted_blocks<S: Semigroup>(
    inst: &S,
    s: &[S::Elem],
    sigma: &[Morphism<S::Elem>],
    cuts: &[usize],
) -> Result<Vec<FpSet<S::Elem>>> {
    if cuts.len() < 2 {
        return Err(Error::Precondition("cuts must delimit at least one block".into()));
    }
    if cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("empty block: cuts must be strictly increasing".into()));
    }
    if *cuts.last().unwrap() > s.len() {
        return Err(Error::Precondition(format!(
            "cut {} beyond sequence length {}",
            cuts.last().unwrap(),
            s.len()
        )));
    }
    cuts.windows(2)
        .map(|w| fp_sigma(inst, &s[w[0]..w[1]], sigma))
        .collect()
}

/// Checks that `a` is an extracted variable sequence of `s` for the given
/// cuts: `a_i ∈ fp^Σ(s↾[n_i, n_{i+1}))` and `a_i ∉ C`.
pub fn is_extracted_variable_sequence<S: Semigroup>(
    inst: &S,
    s: &[S::Elem],
    sigma: &[Morphism<S::Elem>],
    c: &Subsemigroup<S::Elem>,
    cuts: &[usize],
    a: &[S::Elem],
) -> Result<bool> {
    let blocks = extracted_blocks(inst, s, sigma, cuts)?;
    if blocks.len() != a.len() {
        return Ok(false);
    }
    Ok(blocks
        .iter()
        .zip(a)
        .all(|(block, ai)| block.contains(ai) && !c.contains(ai)))
}

/// `fp(ā)` over a lazily produced tuple: yields the members added by each
/// prefix. Callers bound the iteration themselves (e.g. with `take`).
pub struct FpPrefixes<'a, S: Semigroup, I> {
    builder: FpBuilder<'a, S>,
    source: I,
    failed: bool,
}

#[derive(Debug, Clone)]
pub struct PrefixStep<E> {
    pub prefix_len: usize,
    pub added: Vec<(E, Provenance)>,
}

pub fn fp_prefixes<'a, S, I>(
    inst: &'a S,
    sigma: &'a [Morphism<S::Elem>],
    source: I,
) -> FpPrefixes<'a, S, I::IntoIter>
where
    S: Semigroup,
    I: IntoIterator<Item = S::Elem>,
{
    FpPrefixes {
        builder: FpBuilder::new(inst, sigma),
        source: source.into_iter(),
        failed: false,
    }
}

impl<S: Semigroup, I: Iterator<Item = S::Elem>> Iterator for FpPrefixes<'_, S, I> {
    type Item = Result<PrefixStep<S::Elem>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let a = self.source.next()?;
        Some(match self.builder.push(&a) {
            Ok(added) => Ok(PrefixStep {
                prefix_len: self.builder.prefix_len(),
                added,
            }),
            Err(e) => {
                self.failed = true;
                Err(e)
            }
        })
    }
}

/// Block fp^Σ sets of one fixed tuple, memoized by index set.
///
/// The cache takes a read lock for lookups and a write lock only to insert;
/// a racing insert of the same block stores an equal value.
pub struct FpEngine<'a, S: Semigroup> {
    inst: &'a S,
    seq: &'a [S::Elem],
    sigma: &'a [Morphism<S::Elem>],
    memo: RwLock<HashMap<u64, Arc<FpSet<S::Elem>>>>,
}

impl<'a, S: Semigroup> FpEngine<'a, S> {
    pub fn new(inst: &'a S, seq: &'a [S::Elem], sigma: &'a [Morphism<S::Elem>]) -> Result<Self> {
        if seq.len() > 64 {
            return Err(Error::Precondition("fp tuples are limited to 64 entries".into()));
        }
        Ok(FpEngine {
            inst,
            seq,
            sigma,
            memo: RwLock::new(HashMap::new()),
        })
    }

    /// `fp^Σ(ā↾I)` for the index set encoded in `mask`. Provenance indices
    /// refer to positions in the full tuple.
    pub fn block(&self, mask: u64) -> Result<Arc<FpSet<S::Elem>>> {
        if mask == 0 {
            return Err(Error::Precondition("empty block".into()));
        }
        if let Some(hit) = self.memo.read().expect("memo lock").get(&mask) {
            return Ok(hit.clone());
        }
        let positions: Vec<usize> = (0..self.seq.len()).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<S::Elem> = positions.iter().map(|&i| self.seq[i].clone()).collect();
        let local = fp_sigma(self.inst, &sub, self.sigma)?;
        let set = Arc::new(FpSet {
            members: local
                .members
                .into_iter()
                .map(|(e, mut p)| {
                    p.indices = p.indices.iter().map(|&i| positions[i]).collect();
                    (e, p)
                })
                .collect(),
        });
        self.memo
            .write()
            .expect("memo lock")
            .entry(mask)
            .or_insert_with(|| set.clone());
        Ok(set)
    }

    pub fn cached_blocks(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }
}

/// An edge `{h_1, …, h_n}` of `fp(ā)_n` with its witnessing blocks
/// `I_1 < … < I_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtEdge<E> {
    /// The vertex set in canonical order.
    pub vertices: Vec<E>,
    /// `h_j` in block order.
    pub members: Vec<E>,
    pub blocks: Vec<Vec<usize>>,
}

/// All edges of the Milliken–Taylor hypergraph `fp(ā)_n`, sorted by vertex
/// set. An edge whose chosen `h_j` coincide does not have `n` vertices and is
/// left out.
pub fn mt_edges<S: Semigroup>(inst: &S, seq: &[S::Elem], n: usize) -> Result<Vec<MtEdge<S::Elem>>> {
    if n == 0 || n > seq.len() {
        return Err(Error::Precondition(format!(
            "edge size {n} must be in 1..={}",
            seq.len()
        )));
    }
    let engine = FpEngine::new(inst, seq, &[])?;
    let mut found: BTreeMap<Vec<S::Elem>, MtEdge<S::Elem>> = BTreeMap::new();
    let mut blocks: Vec<u64> = Vec::with_capacity(n);
    collect_edges(&engine, seq.len(), n, 0, &mut blocks, &mut found)?;
    Ok(found.into_values().collect())
}

fn collect_edges<S: Semigroup>(
    engine: &FpEngine<'_, S>,
    len: usize,
    n: usize,
    start: usize,
    blocks: &mut Vec<u64>,
    found: &mut BTreeMap<Vec<S::Elem>, MtEdge<S::Elem>>,
) -> Result<()> {
    if blocks.len() == n {
        let sets: Vec<Arc<FpSet<S::Elem>>> =
            blocks.iter().map(|&m| engine.block(m)).collect::<Result<_>>()?;
        let mut choice: Vec<S::Elem> = Vec::with_capacity(n);
        choose_members(&sets, blocks, &mut choice, found);
        return Ok(());
    }
    let remaining = n - blocks.len() - 1;
    // The next block lives in [start, len - remaining) and ends before the
    // room the later blocks need.
    let hi = len - remaining;
    if start >= hi {
        return Ok(());
    }
    let width = hi - start;
    for bits in 1u64..(1u64 << width) {
        let mask = bits << start;
        let top = 63 - mask.leading_zeros() as usize;
        blocks.push(mask);
        collect_edges(engine, len, n, top + 1, blocks, found)?;
        blocks.pop();
    }
    Ok(())
}

fn choose_members<E: Element>(
    sets: &[Arc<FpSet<E>>],
    masks: &[u64],
    choice: &mut Vec<E>,
    found: &mut BTreeMap<Vec<E>, MtEdge<E>>,
) {
    let j = choice.len();
    if j == sets.len() {
        let mut vertices = choice.clone();
        vertices.sort();
        vertices.dedup();
        if vertices.len() == sets.len() && !found.contains_key(&vertices) {
            let blocks = masks
                .iter()
                .map(|&m| (0..64).filter(|i| m >> i & 1 == 1).collect())
                .collect();
            found.insert(
                vertices.clone(),
                MtEdge {
                    vertices,
                    members: choice.clone(),
                    blocks,
                },
            );
        }
        return;
    }
    for e in sets[j].elements() {
        choice.push(e.clone());
        choose_members(sets, masks, choice, found);
        choice.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{NatPlus, Word, Words};

    fn w(s: &str) -> Word {
        Word::from(s)
    }

    #[test]
    fn sums_of_three() {
        let nat = NatPlus::new(100);
        let set = fp(&nat, &[1, 2, 4]).unwrap();
        assert_eq!(set.to_vec(), (1..=7).collect::<Vec<u64>>());
        let p = set.provenance(&5).unwrap();
        assert_eq!(p.indices, vec![0, 2]);
        assert_eq!(p.replay(&nat, &[1, 2, 4], &[]).unwrap(), 5);
    }

    #[test]
    fn first_witness_is_colex_least() {
        // 3 = a_2 and also a_0 + a_1; the index set {2} comes after {0, 1}.
        let nat = NatPlus::new(100);
        let set = fp(&nat, &[1, 2, 3]).unwrap();
        assert_eq!(set.provenance(&3).unwrap().indices, vec![0, 1]);
    }

    #[test]
    fn substitutions_and_minus() {
        let g = Words::new("ab", 8).unwrap();
        let sigma = g.sigmas();
        let seq = [w("ax"), w("xb")];
        let set = fp_sigma(&g, &seq, &sigma).unwrap();
        // σ_b(ax) = σ_a(xb) = ab; the 9 products are distinct.
        assert_eq!(set.len(), 5 + 9);
        assert!(set.contains(&w("aaab")));
        let p = set.provenance(&w("abxb")).unwrap();
        assert_eq!(p.factors, vec![Factor::Map(1), Factor::Id]);
        let minus = set.minus(&Words::constant_words());
        assert!(minus.elements().all(|e| !e.is_constant()));
        assert_eq!(minus.len(), 2 + 5);
        assert!(minus.is_subset(&set));
    }

    #[test]
    fn size_bound_counts_witnesses() {
        assert_eq!(fp_size_bound(3, 0), 7);
        assert_eq!(fp_size_bound(2, 2), 3 + 3 + 9);
        let g = Words::new("ab", 8).unwrap();
        let set = fp_sigma(&g, &[w("ax"), w("xb")], &g.sigmas()).unwrap();
        assert!(set.len() as u128 <= fp_size_bound(2, 2));
    }

    #[test]
    fn empty_tuple_is_rejected() {
        assert!(fp(&NatPlus::new(10), &[]).is_err());
    }

    #[test]
    fn budget_overflow_is_an_error() {
        assert!(fp(&NatPlus::new(5), &[2, 4]).unwrap_err().is_budget());
    }

    #[test]
    fn prefixes_agree_with_the_whole() {
        let nat = NatPlus::new(1000);
        let seq = [1u64, 3, 9, 27];
        let mut seen = Vec::new();
        for step in fp_prefixes(&nat, &[], seq.iter().copied()) {
            seen.extend(step.unwrap().added.into_iter().map(|(e, _)| e));
        }
        seen.sort();
        assert_eq!(seen, fp(&nat, &seq).unwrap().to_vec());
    }

    #[test]
    fn engine_blocks_use_global_indices() {
        let nat = NatPlus::new(1000);
        let seq = [1u64, 2, 4, 8];
        let engine = FpEngine::new(&nat, &seq, &[]).unwrap();
        let block = engine.block(0b1010).unwrap();
        assert_eq!(block.to_vec(), vec![2, 8, 10]);
        assert_eq!(block.provenance(&10).unwrap().indices, vec![1, 3]);
        engine.block(0b1010).unwrap();
        assert_eq!(engine.cached_blocks(), 1);
        assert!(engine.block(0).is_err());
    }

    #[test]
    fn extracted_sequences() {
        let g = Words::new("ab", 8).unwrap();
        let sigma = g.sigmas();
        let s = [w("x"), w("b"), w("x"), w("a")];
        let c = Words::constant_words();
        assert!(is_extracted_variable_sequence(&g, &s, &sigma, &c, &[0, 2, 4], &[w("xb"), w("xa")]).unwrap());
        assert!(!is_extracted_variable_sequence(&g, &s, &sigma, &c, &[0, 2, 4], &[w("ab"), w("xa")]).unwrap());
        assert!(extracted_blocks(&g, &s, &sigma, &[0, 0]).is_err());
        assert!(extracted_blocks(&g, &s, &sigma, &[0, 5]).is_err());
    }

    #[test]
    fn mt_pairs() {
        let nat = NatPlus::new(1000);
        let edges = mt_edges(&nat, &[1, 2, 4], 2).unwrap();
        let sets: Vec<Vec<u64>> = edges.iter().map(|e| e.vertices.clone()).collect();
        // Blocks I_1 < I_2 over three indices.
        assert_eq!(
            sets,
            vec![vec![1, 2], vec![1, 4], vec![1, 6], vec![2, 4], vec![3, 4]]
        );
        assert!(mt_edges(&nat, &[1], 2).is_err());
    }

    #[test]
    fn chains() {
        let rel = NatPlus::less_than();
        assert!(is_chain(&[1u64, 2, 5], &rel));
        assert!(!is_chain(&[1u64, 1], &rel));
        assert!(is_chain::<u64>(&[], &rel));
    }
}
