//! Acceptance criteria 1 to 8, one line each. Runs as a plain binary so the
//! lines are printed even when the harness captures output.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use partreg_core::algebra::{
    find_left_minimal_idempotent, generate_family, is_left_minimal, sandwich_idempotents, FiniteSemigroup, Subset,
};
use partreg_core::fp::fp_sigma;
use partreg_core::instances::{
    verify_instance, CarlsonCode, FinFn, FinK, Instance, NatPlus, Polynomials, TableSemigroup, Tower, TowerVariant,
    Word, Words,
};
use partreg_core::search::{
    compute_bound, find_hj_line, find_mono_fp_chain, find_mt_witness, find_sigma_mono, induced_by_evaluation, verify_bound,
    verify_fp_witness, verify_hj_witness, verify_mt_witness, verify_sigma_witness, BoundOutcome, BoundProblem,
    Coloring, Edge, FpProblem, Outcome,
};
use partreg_core::semigroup::{verify_associativity, verify_morphism, verify_niceness, Report};
use partreg_core::{Element, Morphism, Semigroup};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

/// Thresholds computed by `tests/oracles/finite_bounds.py`.
const FINITE_UNIONS_K2: usize = 5;
const GOWERS_FIN1_L2: usize = 5;

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass<E: Element>(reports: &[Report<E>]) -> std::result::Result<u64, String> {
    let mut cases = 0;
    for r in reports {
        if let Some(v) = r.violations.first() {
            return Err(format!("{}: {} violation(s), first {v}", r.check, r.violations.len()));
        }
        cases += r.cases;
    }
    Ok(cases)
}

fn words_code(max_len: usize) -> CarlsonCode<Words> {
    coded(&["ax", "xb", "xx"], max_len)
}

fn coded(seq: &[&str], max_len: usize) -> CarlsonCode<Words> {
    let base = Words::new("ab", 12).unwrap();
    let sigma = base.sigmas();
    let seq = seq.iter().map(|w| Word::from(*w)).collect();
    CarlsonCode::new(base, sigma, Words::constant_words(), seq, max_len).unwrap()
}

fn axioms() -> Check {
    let mut cases = 0;
    for alphabet in ["ab", "abc"] {
        let g = Words::new(alphabet, 12).unwrap();
        cases += all_pass(&verify_instance(&g, &g.elements_up_to(4)))?;
    }
    for k in 1..=2 {
        let g = FinK::new(k, 8).unwrap();
        cases += all_pass(&verify_instance(&g, &g.functions(4)))?;
    }
    let nat = NatPlus::new(120);
    cases += all_pass(&verify_instance(&nat, &nat.elements_up_to(30)))?;
    let poly = Polynomials::polynomials("ab", 12, 12).unwrap();
    cases += all_pass(&verify_instance(&poly, &poly.elements_up_to(3)))?;
    let code = coded(&["ax", "xb"], 9);
    cases += all_pass(&verify_instance(&code, &code.words_up_to(3)))?;
    let chain = TableSemigroup::max_chain(4);
    cases += all_pass(&verify_instance(&chain, &chain.elements_up_to(4)))?;
    let z3 = TableSemigroup::cyclic_group(3);
    cases += all_pass(&[verify_associativity(&z3, &z3.elements_up_to(3))])?;
    for (n, variant) in [(2, TowerVariant::Lemma), (3, TowerVariant::Lemma), (3, TowerVariant::Remark)] {
        let t = Tower::fin(n, 8, variant).map_err(|e| e.to_string())?;
        let mut pool = t.default_pool(4);
        pool.push(FinFn::zero());
        cases += all_pass(&t.verify(&pool))?;
        t.compose_tower(&pool).map_err(|e| e.to_string())?;
    }
    Ok(format!("{cases} cases, no violations"))
}

fn sample<T: Clone>(rng: &mut ChaCha8Rng, pool: &[T], max: usize) -> Vec<T> {
    let len = rng.gen_range(1..=max);
    (0..len).map(|_| pool.choose(rng).unwrap().clone()).collect()
}

fn sample_sigma<E: Element>(rng: &mut ChaCha8Rng, maps: &[Morphism<E>]) -> Vec<Morphism<E>> {
    let k = rng.gen_range(0..=2.min(maps.len()));
    let mut chosen: Vec<Morphism<E>> = maps.choose_multiple(rng, k).cloned().collect();
    chosen.sort_by(|a, b| a.name().cmp(b.name()));
    chosen
}

fn fp_case<S: Semigroup>(inst: &S, seq: &[S::Elem], sigma: &[Morphism<S::Elem>]) -> std::result::Result<bool, String> {
    let engine = fp_sigma(inst, seq, sigma);
    let naive = naive_fp_sigma(inst, seq, sigma);
    match (engine, naive) {
        (Ok(e), Ok(n)) => {
            let e: BTreeSet<S::Elem> = e.elements().cloned().collect();
            ensure(e == n, || format!("fp^Σ mismatch on {seq:?}: engine {e:?}, oracle {n:?}"))?;
            Ok(true)
        }
        (Err(a), Err(b)) if a.is_budget() && b.is_budget() => Ok(false),
        (a, b) => Err(format!("engine {:?} vs oracle {:?} on {seq:?}", a.err(), b.err())),
    }
}

fn fp_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let words = Words::new("ab", 16).unwrap();
    let word_pool = words.elements_up_to(3);
    let fin = FinK::new(2, 8).unwrap();
    let fin_pool = fin.functions(5);
    let fin_maps = vec![FinK::tetris_map(), FinK::soften_map()];
    let nat = NatPlus::new(1000);
    let nat_pool = nat.elements_up_to(50);
    let poly = Polynomials::polynomials("ab", 16, 16).unwrap();
    let poly_pool = poly.elements_up_to(3);
    let poly_maps: Vec<Morphism<_>> = ["a", "b"].iter().map(|a| poly.evaluation(Word::from(*a))).collect();
    let code = words_code(16);
    let code_pool = code.words_up_to(2);
    let code_maps = code.star_morphisms();
    let (mut compared, mut drawn) = (0, 0);
    while compared < 250 {
        drawn += 1;
        ensure(drawn < 2000, || "too many budget-limited samples".into())?;
        let hit = match drawn % 5 {
            0 => fp_case(&words, &sample(&mut rng, &word_pool, 4), &sample_sigma(&mut rng, &words.sigmas()))?,
            1 => fp_case(&fin, &sample(&mut rng, &fin_pool, 4), &sample_sigma(&mut rng, &fin_maps))?,
            2 => fp_case(&nat, &sample(&mut rng, &nat_pool, 4), &sample_sigma(&mut rng, &nat.catalog().morphisms))?,
            3 => fp_case(&poly, &sample(&mut rng, &poly_pool, 4), &sample_sigma(&mut rng, &poly_maps))?,
            _ => fp_case(&code, &sample(&mut rng, &code_pool, 4), &sample_sigma(&mut rng, &code_maps))?,
        };
        compared += usize::from(hit);
    }
    Ok(format!("{compared} cases equal to the naive enumerator"))
}

fn carlson_laws() -> Check {
    // Budget 6 so that products of two length-3 coded words stay inside it.
    let code = words_code(6);
    let base = code.base();
    let pool = code.words_up_to(3);
    let c = Words::constant_words();
    for g in &pool {
        let e = code.eval_star(g).map_err(|e| e.to_string())?;
        ensure(c.contains(&e) == g.is_retracted(), || format!("eval({g}) = {e} on the wrong side of C"))?;
        for (i, sigma) in code.sigma().iter().enumerate() {
            let lhs = code.eval_star(&code.star_retraction(i, g)).map_err(|e| e.to_string())?;
            let rhs = base.substitute(&e, b'a' + i as u8).map_err(|e| e.to_string())?;
            ensure(lhs == rhs && rhs == sigma.apply(&e).unwrap(), || format!("square fails at {g} for {}", sigma.name()))?;
        }
    }
    let mut reports = vec![verify_niceness(&CarlsonCode::<Words>::retracted_part(), &code, &pool)];
    reports.extend(code.star_morphisms().iter().map(|m| verify_morphism(&code, m, &pool)));
    let cases = all_pass(&reports)?;
    Ok(format!("{} coded words, {cases} cases", pool.len()))
}

fn threshold(problem: &str) -> std::result::Result<(usize, Duration), String> {
    let start = Instant::now();
    let p: BoundProblem = problem.parse().map_err(|e: partreg_core::Error| e.to_string())?;
    match compute_bound(p, 2, 16, &limits(4), true).map_err(|e| e.to_string())? {
        BoundOutcome::Resolved(r) => {
            verify_bound(&r).map_err(|e| format!("{problem}: {e}"))?;
            Ok((r.threshold, start.elapsed()))
        }
        other => Err(format!("{problem}: {other:?}")),
    }
}

fn finite_bounds() -> Check {
    let oracle = [
        ("schur", least_forcing(|n| n, schur_triples, 8)),
        ("vdw(3)", least_forcing(|n| n, progressions3, 12)),
        ("hj(2)", least_forcing(|n| 1 << n, binary_lines, 4)),
        ("finite_unions", Some(FINITE_UNIONS_K2)),
        ("gowers_fin_k(1,2)", Some(GOWERS_FIN1_L2)),
    ];
    let expected = [5, 9, 2, FINITE_UNIONS_K2, GOWERS_FIN1_L2];
    let mut out = Vec::new();
    for ((problem, oracle), want) in oracle.into_iter().zip(expected) {
        let (n, took) = threshold(problem)?;
        ensure(Some(n) == oracle && n == want, || format!("{problem}: engine {n}, oracle {oracle:?}, expected {want}"))?;
        ensure(took < Duration::from_secs(60), || format!("{problem} took {took:?}"))?;
        out.push(format!("{problem}={n}"));
    }
    Ok(out.join(" "))
}

fn ramsey() -> Check {
    ensure(two_coloring_avoids(15, &triangles(6)).is_none(), || "K6 oracle found a triangle-free coloring".into())?;
    ensure(two_coloring_avoids(10, &triangles(5)).is_some(), || "K5 oracle found no triangle-free coloring".into())?;
    let (n, _) = threshold("ramsey(3)")?;
    ensure(n == 6, || format!("engine threshold {n}"))?;
    Ok("R(3,3) = 6 by complete enumeration and by search".into())
}

fn closed_subsets(s: &FiniteSemigroup) -> Vec<Subset> {
    let m = s.size();
    (1u32..(1 << m))
        .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect::<Subset>())
        .filter(|a| a.iter().all(|&x| a.iter().all(|&y| a.contains(&s.mul(x, y)))))
        .collect()
}

fn algebra() -> Check {
    let family = generate_family(2024, 120, 6);
    ensure(family.len() >= 100, || format!("family has {} members", family.len()))?;
    for member in &family {
        let s = &member.table;
        let name = &member.name;
        let idem: Vec<usize> = (0..s.size()).filter(|&e| s.mul(e, e) == e).collect();
        ensure(!idem.is_empty(), || format!("{name}: no idempotent"))?;
        let closed = closed_subsets(s);
        let minimal: Vec<&Subset> = closed.iter().filter(|a| !closed.iter().any(|b| b.len() < a.len() && b.is_subset(a))).collect();
        for a in &minimal {
            ensure(a.len() == 1 && idem.contains(a.iter().next().unwrap()), || format!("{name}: minimal {a:?}"))?;
        }
        let all: Subset = (0..s.size()).collect();
        let cert = find_left_minimal_idempotent(s, &all).map_err(|e| format!("{name}: {e}"))?;
        let c = cert.element;
        ensure(s.mul(c, c) == c, || format!("{name}: {c} not idempotent"))?;
        let lm = (0..s.size()).map(|g| s.mul(g, c)).all(|g| (0..s.size()).any(|h| s.mul(h, g) == c));
        ensure(lm && is_left_minimal(s, &all, c).unwrap(), || format!("{name}: {c} not left-minimal"))?;
        let sw = sandwich_idempotents(s, &all, c).map_err(|e| format!("{name}: {e}"))?;
        ensure(sw == Subset::from([c]), || format!("{name}: sandwich {sw:?} for {c}"))?;
    }
    Ok(format!("{} semigroups", family.len()))
}

fn parity(n: &u64) -> u8 {
    (n % 2) as u8 + 1
}

fn mod3(n: &u64) -> u8 {
    (n % 3) as u8 + 1
}

fn chain_case<S: Semigroup + Clone>(
    problem: &FpProblem<S>,
    color: fn(&S::Elem) -> u8,
    k: u8,
    len: usize,
    pool: &[S::Elem],
    parallelism: usize,
) -> std::result::Result<String, String> {
    let coloring = Coloring::rule("c", k, move |e| Some(color(e))).unwrap();
    let engine = find_mono_fp_chain(problem, &coloring, len, pool, &limits(parallelism)).map_err(|e| e.to_string())?;
    let naive = naive_first_chain(&problem.inst, &problem.sigma, &problem.c, &problem.rel, color, len, pool)
        .map_err(|e| e.to_string())?;
    match (&engine, &naive) {
        (Outcome::Found { witness, .. }, Some(chain)) => {
            verify_fp_witness(problem, &coloring, witness)?;
            ensure(&witness.chain == chain, || format!("engine {:?}, oracle {chain:?}", witness.chain))?;
        }
        (Outcome::Exhausted { .. }, None) => {}
        _ => return Err(format!("engine {engine:?}, oracle {naive:?}")),
    }
    Ok(format!("{engine:?}"))
}

fn word_len_parity(w: &Word) -> u8 {
    (w.len() % 2) as u8 + 1
}

fn word_first(w: &Word) -> u8 {
    if w.symbols()[0] == b'a' {
        1
    } else {
        2
    }
}

fn fin_max_parity(f: &FinFn) -> u8 {
    (f.max_support().unwrap_or(0) % 2) as u8 + 1
}

fn fin_level(f: &FinFn) -> u8 {
    f.level().max(1)
}

/// Runs the whole small-case matrix, returning every rendered outcome.
fn search_matrix(parallelism: usize) -> std::result::Result<Vec<String>, String> {
    let mut out = Vec::new();
    let nat = NatPlus::new(10_000);
    let nat_pool: Vec<u64> = (1..=14).collect();
    let odd_pool: Vec<u64> = (1..=14).step_by(2).collect();
    for len in 1..=3 {
        for (color, k) in [(parity as fn(&u64) -> u8, 2), (mod3, 3)] {
            for pool in [&nat_pool, &odd_pool] {
                let p = FpProblem::plain(nat, NatPlus::less_than());
                out.push(chain_case(&p, color, k, len, pool, parallelism)?);
                let p = FpProblem::plain(nat, NatPlus::less_than()).distinct(true);
                out.push(chain_case(&p, color, k, len, pool, parallelism)?);
            }
        }
    }
    let words = Words::new("ab", 10).unwrap();
    let var_pool = words.variable_words_up_to(3);
    for len in 1..=2 {
        for (color, k) in [(word_len_parity as fn(&Word) -> u8, 2), (word_first, 2)] {
            let p = FpProblem::plain(words.clone(), Words::length_order())
                .with_sigma(words.sigmas(), Words::constant_words());
            out.push(chain_case(&p, color, k, len, &var_pool, parallelism)?);
            let p = FpProblem::plain(words.clone(), Words::length_order());
            out.push(chain_case(&p, color, k, len, &var_pool, parallelism)?);
        }
    }
    for k in 1..=2u8 {
        let fin = FinK::new(k, 8).unwrap();
        let pool: Vec<FinFn> = fin.functions(4).into_iter().filter(|f| f.level() == k).collect();
        let sigma = if k == 2 { vec![FinK::tetris_map()] } else { Vec::new() };
        for len in 1..=2 {
            for (color, colors) in [(fin_max_parity as fn(&FinFn) -> u8, 2), (fin_level, 2)] {
                let p = FpProblem::plain(fin, FinK::block_order(k)).with_sigma(sigma.clone(), FinK::level(k - 1));
                out.push(chain_case(&p, color, colors, len, &pool, parallelism)?);
            }
        }
    }
    // Lines: every 2-coloring of {a,b}^2 and {a,b}^3.
    for n in 2..=3usize {
        let points = Words::words_of_len(b"ab", n);
        for bits in 0u32..(1 << points.len()) {
            let table: BTreeMap<Word, u8> = points.iter().enumerate().map(|(i, w)| (w.clone(), (bits >> i & 1) as u8 + 1)).collect();
            let coloring = Coloring::table(format!("t{bits}"), 2, table.clone()).unwrap();
            let engine = find_hj_line("ab", n, &coloring, &limits(parallelism)).map_err(|e| e.to_string())?;
            let naive = naive_hj_line("ab", n, |s| table[&Word::from(s)]);
            match (&engine, &naive) {
                (Outcome::Found { witness, .. }, Some(w)) => {
                    verify_hj_witness("ab", n, &coloring, witness)?;
                    ensure(witness.element.to_string() == *w, || format!("line {} vs {w}", witness.element))?;
                }
                (Outcome::Exhausted { .. }, None) => {}
                _ => return Err(format!("hj: engine {engine:?}, oracle {naive:?}")),
            }
            out.push(format!("{engine:?}"));
        }
    }
    // Σ-images on FIN_2 with {tetris, soften}.
    let fin2 = FinK::new(2, 8).unwrap();
    let maps = vec![FinK::tetris_map(), FinK::soften_map()];
    let pool = fin2.functions(4);
    for (name, color) in [("max_parity", fin_max_parity as fn(&FinFn) -> u8), ("level", fin_level)] {
        let coloring = Coloring::rule(name, 2, move |f: &FinFn| Some(color(f))).unwrap();
        let c = FinK::level(1);
        let engine = find_sigma_mono::<FinK>(&maps, &c, &coloring, &pool, &limits(parallelism)).map_err(|e| e.to_string())?;
        let naive = pool.iter().filter(|a| !c.contains(a)).find(|a| {
            let cs: BTreeSet<u8> = maps.iter().map(|m| color(&m.apply(a).unwrap())).collect();
            cs.len() == 1
        });
        match (&engine, naive) {
            (Outcome::Found { witness, .. }, Some(a)) => {
                verify_sigma_witness(&maps, &c, &coloring, witness)?;
                ensure(&witness.element == a, || format!("{name}: {} vs {a}", witness.element))?;
            }
            (Outcome::Exhausted { .. }, None) => {}
            _ => return Err(format!("sigma {name}: engine {engine:?}, oracle {naive:?}")),
        }
        out.push(format!("{engine:?}"));
    }
    // Milliken–Taylor edges on (ℕ⁺, +).
    for (n, len) in [(1, 2), (2, 2), (2, 3)] {
        for modulus in [2u64, 3] {
            let coloring = Coloring::rule("sum_mod", modulus as u8, move |e: &Edge<u64>| {
                Some((e.0.iter().sum::<u64>() % modulus) as u8 + 1)
            })
            .unwrap();
            let pool: Vec<u64> = (1..=12).collect();
            let engine = find_mt_witness(&nat, &NatPlus::less_than(), &coloring, n, len, &pool, &limits(parallelism))
                .map_err(|e| e.to_string())?;
            let naive = naive_first_mt_chain(
                &nat,
                &NatPlus::less_than(),
                |e: &[u64]| (e.iter().sum::<u64>() % modulus) as u8 + 1,
                n,
                len,
                &pool,
            )
            .map_err(|e| e.to_string())?;
            match (&engine, &naive) {
                (Outcome::Found { witness, .. }, Some(chain)) => {
                    verify_mt_witness(&nat, &NatPlus::less_than(), &coloring, n, witness)?;
                    ensure(&witness.chain == chain, || format!("mt: {:?} vs {chain:?}", witness.chain))?;
                }
                (Outcome::Exhausted { .. }, None) => {}
                _ => return Err(format!("mt: engine {engine:?}, oracle {naive:?}")),
            }
            out.push(format!("{engine:?}"));
        }
    }
    // The coded-word coloring induced by evaluation.
    let code = words_code(4);
    let base = Coloring::rule("len_parity", 2, |w: &Word| Some(word_len_parity(w))).unwrap();
    let induced = induced_by_evaluation(Arc::new(words_code(4)), base).map_err(|e| e.to_string())?;
    let pool: Vec<_> = code.words_up_to(2).into_iter().filter(|g| !g.is_retracted()).collect();
    let (rel, stars) = (code.relation(), code.star_morphisms());
    let p = FpProblem::plain(code, rel).with_sigma(stars, CarlsonCode::<Words>::retracted_part());
    let engine = find_mono_fp_chain(&p, &induced, 2, &pool, &limits(parallelism)).map_err(|e| e.to_string())?;
    let w = engine.witness().ok_or("no coded chain")?;
    verify_fp_witness(&p, &induced, w)?;
    out.push(format!("{engine:?}"));
    Ok(out)
}

fn soundness() -> Check {
    let out = search_matrix(4)?;
    Ok(format!("{} searches agree with the oracles", out.len()))
}

fn bound_records(parallelism: usize) -> std::result::Result<Vec<String>, String> {
    ["schur", "hj(2)", "vdw(3)"]
        .iter()
        .map(|p| {
            let problem: BoundProblem = p.parse().unwrap();
            compute_bound(problem, 2, 12, &limits(parallelism), true)
                .map(|o| format!("{o:?}"))
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn determinism() -> Check {
    let mut runs = Vec::new();
    for parallelism in [1, 4, 1, 4] {
        let mut lines = search_matrix(parallelism)?;
        lines.extend(bound_records(parallelism)?);
        runs.push(lines);
    }
    for (i, run) in runs.iter().enumerate().skip(1) {
        if let Some(j) = (0..run.len()).find(|&j| run[j] != runs[0][j]) {
            return Err(format!("run {i} differs at record {j}: {} vs {}", run[j], runs[0][j]));
        }
        ensure(run.len() == runs[0].len(), || format!("run {i} has {} records", run.len()))?;
    }
    Ok(format!("{} records identical across 4 runs at parallelism 1 and 4", runs[0].len()))
}

/// Name, check and time budget in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

fn main() {
    let criteria: [Criterion; 8] = [
        ("axiom suite", axioms, 10),
        ("fp oracle equivalence", fp_oracle, 30),
        ("Carlson coding laws", carlson_laws, 10),
        ("finite bounds", finite_bounds, 300),
        ("Ramsey desk case", ramsey, 10),
        ("algebra lab", algebra, 30),
        ("search soundness and completeness", soundness, 60),
        ("determinism", determinism, 240),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        match (&result, over) {
            (Ok(detail), false) => println!("criterion {}: PASS {name} ({detail}; {took:.2?})", i + 1),
            (Ok(detail), true) => {
                failed += 1;
                println!("criterion {}: FAIL {name} (over {budget}s: {took:.2?}; {detail})", i + 1)
            }
            (Err(e), _) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({e})", i + 1)
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
