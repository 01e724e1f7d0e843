//! Reference implementations written without the engine: plain loops over
//! index masks, factor choices, colorings and chains.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::time::Duration;

use partreg_core::search::SearchLimits;
use partreg_core::{CoveringRelation, Morphism, Result, Semigroup, Subsemigroup};

pub fn limits(parallelism: usize) -> SearchLimits {
    SearchLimits::new(20_000_000, Duration::from_secs(120), parallelism).unwrap()
}

/// `fp^Σ(ā)`: for every nonempty index mask and every choice in
/// `(Σ ∪ {id})^k`, the product of the transformed entries.
pub fn naive_fp_sigma<S: Semigroup>(
    inst: &S,
    seq: &[S::Elem],
    sigma: &[Morphism<S::Elem>],
) -> Result<BTreeSet<S::Elem>> {
    let mut out = BTreeSet::new();
    let choices = sigma.len() + 1;
    for mask in 1u32..(1 << seq.len()) {
        let picked: Vec<&S::Elem> = (0..seq.len()).filter(|i| mask >> i & 1 == 1).map(|i| &seq[i]).collect();
        let total = choices.pow(picked.len() as u32);
        for mut code in 0..total {
            let mut acc: Option<S::Elem> = None;
            for x in &picked {
                let c = code % choices;
                code /= choices;
                let y = if c == sigma.len() { (*x).clone() } else { sigma[c].apply(x)? };
                acc = Some(match acc {
                    None => y,
                    Some(p) => inst.product(&p, &y)?,
                });
            }
            out.insert(acc.unwrap());
        }
    }
    Ok(out)
}

pub fn naive_fp_sigma_minus<S: Semigroup>(
    inst: &S,
    seq: &[S::Elem],
    sigma: &[Morphism<S::Elem>],
    c: &Subsemigroup<S::Elem>,
) -> Result<BTreeSet<S::Elem>> {
    Ok(naive_fp_sigma(inst, seq, sigma)?.into_iter().filter(|e| !c.contains(e)).collect())
}

/// The first chain of length `len` over the sorted pool, in lexicographic
/// order of index tuples, whose `fp^Σ ∖ C` set is monochromatic under
/// `color`. Plain odometer over `pool^len`.
pub fn naive_first_chain<S: Semigroup>(
    inst: &S,
    sigma: &[Morphism<S::Elem>],
    c: &Subsemigroup<S::Elem>,
    rel: &CoveringRelation<S::Elem>,
    color: impl Fn(&S::Elem) -> u8,
    len: usize,
    pool: &[S::Elem],
) -> Result<Option<Vec<S::Elem>>> {
    let mut pool = pool.to_vec();
    pool.sort();
    pool.dedup();
    let mut idx = vec![0usize; len];
    loop {
        let chain: Vec<S::Elem> = idx.iter().map(|&i| pool[i].clone()).collect();
        if chain.windows(2).all(|p| rel.holds(&p[0], &p[1])) {
            let colors: BTreeSet<u8> = naive_fp_sigma_minus(inst, &chain, sigma, c)?.iter().map(&color).collect();
            if colors.len() <= 1 {
                return Ok(Some(chain));
            }
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < pool.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Variable words of length `n` over `letters ∪ {x}`, as strings, with the
/// variable ordered first.
pub fn naive_variable_words(letters: &str, n: usize) -> Vec<String> {
    let mut symbols: Vec<char> = vec!['x'];
    symbols.extend(letters.chars());
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| symbols.iter().map(move |&s| format!("{w}{s}")))
            .collect();
    }
    out.retain(|w| w.contains('x'));
    out
}

/// The first variable word whose line is monochromatic.
pub fn naive_hj_line(letters: &str, n: usize, color: impl Fn(&str) -> u8) -> Option<String> {
    naive_variable_words(letters, n).into_iter().find(|w| {
        let colors: BTreeSet<u8> = letters.chars().map(|a| color(&w.replace('x', &a.to_string()))).collect();
        colors.len() == 1
    })
}

/// Whether some 2-coloring of `0..points` (as a bit string) avoids every
/// monochromatic pattern; checked by trying all `2^points` colorings.
pub fn two_coloring_avoids(points: usize, patterns: &[Vec<usize>]) -> Option<u64> {
    assert!(points <= 30);
    (0u64..(1 << points)).find(|&bits| {
        patterns.iter().all(|p| {
            let first = bits >> p[0] & 1;
            p.iter().any(|&j| bits >> j & 1 != first)
        })
    })
}

/// Schur triples `{x, y, x + y}` in `1..=n` as 0-based points.
pub fn schur_triples(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for x in 1..=n {
        for y in x..=n {
            if x + y <= n {
                out.push(vec![x - 1, y - 1, x + y - 1]);
            }
        }
    }
    out
}

pub fn progressions3(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..n {
        for d in 1..n {
            if a + 2 * d < n {
                out.push(vec![a, a + d, a + 2 * d]);
            }
        }
    }
    out
}

/// Lines in `{a, b}^n`, points numbered by reading words as binary.
pub fn binary_lines(n: usize) -> Vec<Vec<usize>> {
    naive_variable_words("ab", n)
        .iter()
        .map(|w| {
            ['a', 'b']
                .iter()
                .map(|&c| w.chars().fold(0, |acc, s| 2 * acc + usize::from(s == 'b' || (s == 'x' && c == 'b'))))
                .collect()
        })
        .collect()
}

/// Triangles of `K_n`, points being edges numbered in `(i, j)` order.
pub fn triangles(n: usize) -> Vec<Vec<usize>> {
    let id = |i: usize, j: usize| i * (2 * n - i - 1) / 2 + (j - i - 1);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push(vec![id(i, j), id(i, k), id(j, k)]);
            }
        }
    }
    out
}

/// The least `n` whose carrier admits no avoiding 2-coloring.
pub fn least_forcing(points: impl Fn(usize) -> usize, patterns: impl Fn(usize) -> Vec<Vec<usize>>, n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| two_coloring_avoids(points(n), &patterns(n)).is_none())
}

/// Vertex sets of `fp(ā)_n`: every way of labelling chain positions with a
/// block `1..=n` or none, blocks nonempty and in order, `h_j` the product of
/// block `j`. Sets with fewer than `n` distinct vertices are dropped.
pub fn naive_mt_edges<S: Semigroup>(inst: &S, chain: &[S::Elem], n: usize) -> Result<BTreeSet<Vec<S::Elem>>> {
    let len = chain.len();
    let mut out = BTreeSet::new();
    for mut code in 0..(n + 1).pow(len as u32) {
        let mut labels = Vec::with_capacity(len);
        for _ in 0..len {
            labels.push(code % (n + 1));
            code /= n + 1;
        }
        let used: Vec<usize> = labels.iter().copied().filter(|&l| l > 0).collect();
        if used.windows(2).any(|p| p[0] > p[1]) || (1..=n).any(|j| !used.contains(&j)) {
            continue;
        }
        let mut vs = BTreeSet::new();
        for j in 1..=n {
            let mut acc: Option<S::Elem> = None;
            for i in (0..len).filter(|&i| labels[i] == j) {
                acc = Some(match acc {
                    None => chain[i].clone(),
                    Some(p) => inst.product(&p, &chain[i])?,
                });
            }
            vs.insert(acc.unwrap());
        }
        if vs.len() == n {
            out.insert(vs.into_iter().collect());
        }
    }
    Ok(out)
}

/// The first chain of length `len` over the sorted pool whose MT edges
/// share one color.
pub fn naive_first_mt_chain<S: Semigroup>(
    inst: &S,
    rel: &CoveringRelation<S::Elem>,
    color: impl Fn(&[S::Elem]) -> u8,
    n: usize,
    len: usize,
    pool: &[S::Elem],
) -> Result<Option<Vec<S::Elem>>> {
    let mut pool = pool.to_vec();
    pool.sort();
    pool.dedup();
    let mut idx = vec![0usize; len];
    loop {
        let chain: Vec<S::Elem> = idx.iter().map(|&i| pool[i].clone()).collect();
        if chain.windows(2).all(|p| rel.holds(&p[0], &p[1])) {
            let colors: BTreeSet<u8> = naive_mt_edges(inst, &chain, n)?.iter().map(|e| color(e)).collect();
            if colors.len() <= 1 {
                return Ok(Some(chain));
            }
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < pool.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
