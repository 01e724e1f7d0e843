//! One runner per subcommand. Each returns the process exit code.

pub mod load;

use std::path::Path;

use partreg_core::algebra::{generate_family, SubsetAlgebraReport};
use partreg_core::fp::fp_sigma;
use partreg_core::instances::{verify_catalog, Catalog, TableSemigroup, Words};
use partreg_core::search::{
    compute_bound, find_hj_line, find_mono_fp_chain, find_mt_witness, find_sigma_mono, verify_bound,
    verify_fp_witness, verify_hj_witness, verify_mt_witness, verify_sigma_witness, BoundOutcome, FpProblem, Outcome,
    SearchLimits, SigmaWitness,
};
use partreg_core::semigroup::verify::{verify_covering, Report};
use partreg_core::{fp_sigma_minus, Element, Error, Provenance, Semigroup};

use crate::config::{JobConfig, SearchConfig};
use crate::records::{
    AlgebraRecord, BoundRecord, CheckRecord, Edge, FpRecord, Member, Record, SearchRecord, SearchStatus, VerifySummary,
    Witness,
};
use crate::{CliError, Output, EXIT_BUDGET, EXIT_FAILED, EXIT_OK};
use load::{build_coloring, build_edge_coloring, load_instance, resolve_pool, with_instance, Job, Loaded};

fn section<'a, T>(value: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    value
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("this job needs a [{name}] table")))
}

fn instance(cfg: &JobConfig, base: &Path) -> Result<Loaded, CliError> {
    load_instance(section(&cfg.instance, "instance")?, base)
}

fn limits(cfg: &JobConfig) -> Result<SearchLimits, CliError> {
    cfg.limits.to_limits()
}

fn strings<E: Element>(items: &[E]) -> Vec<String> {
    items.iter().map(|e| e.to_string()).collect()
}

fn member<E: Element>(e: &E, p: &Provenance, labels: &[String]) -> Member {
    Member {
        element: e.to_string(),
        indices: p.indices.clone(),
        factors: p
            .factors
            .iter()
            .map(|f| match f {
                partreg_core::Factor::Id => "id".to_string(),
                partreg_core::Factor::Map(i) => labels.get(*i).cloned().unwrap_or_else(|| format!("#{i}")),
            })
            .collect(),
    }
}

fn check_record<E: Element>(instance: &str, r: &Report<E>) -> CheckRecord {
    CheckRecord {
        instance: instance.to_string(),
        check: r.check.clone(),
        cases: r.cases,
        passed: r.passed(),
        violations: r.violations.iter().map(|v| v.to_string()).collect(),
    }
}

// verify

pub fn verify(cfg: &JobConfig, base: &Path, out: &mut Output) -> Result<u8, CliError> {
    let v = section(&cfg.verify, "verify")?;
    with_instance!(&instance(cfg, base)?, inst => run_verify(inst, v, out))
}

fn select<T: Clone>(
    all: &[T],
    names: &Option<Vec<String>>,
    lookup: impl Fn(&str) -> partreg_core::Result<T>,
) -> Result<Vec<T>, CliError> {
    match names {
        None => Ok(all.to_vec()),
        Some(names) => Ok(names.iter().map(|n| lookup(n)).collect::<Result<_, _>>()?),
    }
}

fn run_verify<I: Job>(inst: &I, v: &crate::config::VerifyConfig, out: &mut Output) -> Result<u8, CliError> {
    let pool = resolve_pool(inst, &v.pool)?;
    let full = inst.catalog();
    let catalog = Catalog {
        morphisms: select(&full.morphisms, &v.morphisms, |n| full.morphism(n))?,
        subsemigroups: select(&full.subsemigroups, &v.subsemigroups, |n| full.subsemigroup(n))?,
        relations: select(&full.relations, &v.relations, |n| full.relation(n))?,
    };
    let sets = v
        .covering
        .iter()
        .map(|set| set.iter().map(|s| inst.parse_element(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut reports = verify_catalog(inst, &catalog, &pool);
    reports.extend(inst.extra_reports(&pool));
    if !sets.is_empty() {
        for rel in &catalog.relations {
            reports.push(verify_covering(rel, inst, &sets, &pool)?.into_report());
        }
    }
    let name = inst.name();
    let mut failed = 0;
    for r in &reports {
        failed += usize::from(!r.passed());
        out.emit(&Record::Check(check_record(&name, r)))?;
    }
    out.emit(&Record::Verify(VerifySummary {
        instance: name,
        checks: reports.len(),
        failed,
    }))?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

// fp

pub fn fp(cfg: &JobConfig, base: &Path, count_only: bool, out: &mut Output) -> Result<u8, CliError> {
    let f = section(&cfg.fp, "fp")?;
    let count_only = count_only || f.count_only;
    with_instance!(&instance(cfg, base)?, inst => run_fp(inst, f, count_only, out))
}

fn run_fp<I: Job>(inst: &I, f: &crate::config::FpConfig, count_only: bool, out: &mut Output) -> Result<u8, CliError> {
    let catalog = inst.catalog();
    let seq = f.seq.iter().map(|s| inst.parse_element(s)).collect::<Result<Vec<_>, _>>()?;
    let sigma = f.sigma.iter().map(|n| catalog.morphism(n)).collect::<Result<Vec<_>, _>>()?;
    let set = match &f.minus {
        Some(c) => fp_sigma_minus(inst, &seq, &sigma, &catalog.subsemigroup(c)?)?,
        None => fp_sigma(inst, &seq, &sigma)?,
    };
    let labels = f.sigma.clone();
    out.emit(&Record::Fp(FpRecord {
        instance: inst.name(),
        seq: strings(&seq),
        sigma: labels.clone(),
        minus: f.minus.clone(),
        count: set.len(),
        members: (!count_only).then(|| set.iter().map(|(e, p)| member(e, p, &labels)).collect()),
    }))?;
    Ok(EXIT_OK)
}

// search

/// Builds the record for a search outcome, re-checking any witness with the
/// independent checker.
fn search_record<W>(
    instance: String,
    search: String,
    coloring: String,
    outcome: &Outcome<W>,
    render: impl FnOnce(&W) -> Witness,
    check: impl FnOnce(&W) -> Result<(), String>,
) -> (SearchRecord, u8) {
    let mut rec = SearchRecord {
        instance,
        search,
        coloring,
        status: SearchStatus::Exhausted,
        nodes: outcome.nodes(),
        cut: None,
        witness: None,
        verified: None,
        verify_error: None,
    };
    let code = match outcome {
        Outcome::Found { witness, .. } => {
            rec.status = SearchStatus::Found;
            rec.witness = Some(render(witness));
            let checked = check(witness);
            rec.verified = Some(checked.is_ok());
            rec.verify_error = checked.err();
            if rec.verify_error.is_none() {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Outcome::Exhausted { .. } => EXIT_FAILED,
        Outcome::Unresolved { cut, .. } => {
            rec.status = SearchStatus::Unresolved;
            rec.cut = Some(*cut);
            EXIT_BUDGET
        }
    };
    (rec, code)
}

pub fn search(cfg: &JobConfig, base: &Path, out: &mut Output) -> Result<u8, CliError> {
    let s = section(&cfg.search, "search")?;
    let coloring = section(&cfg.coloring, "coloring")?;
    let limits = limits(cfg)?;
    if let SearchConfig::Hj { alphabet, dimension } = s {
        let g = Words::new(alphabet, *dimension)?;
        let col = build_coloring(&g, coloring, cfg.seed)?;
        let outcome = find_hj_line(alphabet, *dimension, &col, &limits)?;
        let (rec, code) = search_record(
            format!("{}^{dimension}", g.name()),
            format!("hj line of dimension {dimension}"),
            col.name().to_string(),
            &outcome,
            |w| Witness::Sigma {
                element: w.element.to_string(),
                images: strings(&w.images),
                color: w.color,
            },
            |w| verify_hj_witness(alphabet, *dimension, &col, w),
        );
        out.emit(&Record::Search(rec))?;
        return Ok(code);
    }
    with_instance!(&instance(cfg, base)?, inst => run_search(inst, s, cfg, &limits, out))
}

/// An enumerated pool leaves out the excluded subsemigroup; an explicit
/// list is passed on as written.
fn search_pool<I: Job>(
    inst: &I,
    pool: &crate::config::PoolConfig,
    c: &partreg_core::Subsemigroup<I::Elem>,
) -> Result<Vec<I::Elem>, CliError> {
    let mut elems = resolve_pool(inst, pool)?;
    if pool.size.is_some() {
        elems.retain(|e| !c.contains(e));
    }
    Ok(elems)
}

fn run_search<I: Job>(
    inst: &I,
    s: &SearchConfig,
    cfg: &JobConfig,
    limits: &SearchLimits,
    out: &mut Output,
) -> Result<u8, CliError> {
    let catalog = inst.catalog();
    let coloring = section(&cfg.coloring, "coloring")?;
    let morphisms = |names: &[String]| names.iter().map(|n| catalog.morphism(n)).collect::<Result<Vec<_>, _>>();
    let (rec, code) = match s {
        SearchConfig::Chain { len, relation, sigma, minus, distinct, pool } => {
            let col = build_coloring(inst, coloring, cfg.seed)?;
            let c = match minus {
                Some(m) => catalog.subsemigroup(m)?,
                None => partreg_core::Subsemigroup::empty(),
            };
            let problem = FpProblem::plain(inst, catalog.relation(relation)?)
                .with_sigma(morphisms(sigma)?, c)
                .distinct(*distinct);
            let pool = search_pool(inst, pool, &problem.c)?;
            let outcome = find_mono_fp_chain(&problem, &col, *len, &pool, limits)?;
            search_record(
                inst.name(),
                format!("{relation}-chain of length {len}"),
                col.name().to_string(),
                &outcome,
                |w| Witness::Chain {
                    chain: strings(&w.chain),
                    color: w.color,
                    members: w.members.iter().map(|(e, p)| member(e, p, sigma)).collect(),
                },
                |w| verify_fp_witness(&problem, &col, w),
            )
        }
        SearchConfig::SigmaMono { sigma, minus, pool } => {
            let col = build_coloring(inst, coloring, cfg.seed)?;
            let maps = morphisms(sigma)?;
            let c = catalog.subsemigroup(minus)?;
            let pool = search_pool(inst, pool, &c)?;
            let outcome = find_sigma_mono::<I>(&maps, &c, &col, &pool, limits)?;
            search_record(
                inst.name(),
                format!("monochromatic images under {{{}}}", sigma.join(", ")),
                col.name().to_string(),
                &outcome,
                |w: &SigmaWitness<I::Elem>| Witness::Sigma {
                    element: w.element.to_string(),
                    images: strings(&w.images),
                    color: w.color,
                },
                |w| verify_sigma_witness(&maps, &c, &col, w),
            )
        }
        SearchConfig::Mt { n, len, relation, pool } => {
            let col = build_edge_coloring(inst, coloring, cfg.seed)?;
            let rel = catalog.relation(relation)?;
            let pool = resolve_pool(inst, pool)?;
            let outcome = find_mt_witness(inst, &rel, &col, *n, *len, &pool, limits)?;
            search_record(
                inst.name(),
                format!("{relation}-chain of length {len} with monochromatic {n}-edges"),
                col.name().to_string(),
                &outcome,
                |w| Witness::Mt {
                    chain: strings(&w.chain),
                    color: w.color,
                    edges: w
                        .edges
                        .iter()
                        .map(|e| Edge {
                            vertices: strings(&e.vertices),
                            blocks: e.blocks.clone(),
                        })
                        .collect(),
                },
                |w| verify_mt_witness(inst, &rel, &col, *n, w),
            )
        }
        SearchConfig::Hj { .. } => unreachable!("line searches need no instance"),
    };
    out.emit(&Record::Search(rec))?;
    Ok(code)
}

// bound

pub fn bound(cfg: &JobConfig, out: &mut Output) -> Result<u8, CliError> {
    let b = section(&cfg.bound, "bound")?;
    let problem = b.problem()?;
    let (rec, code) = match compute_bound(problem, b.k, b.n_max, &limits(cfg)?, b.symmetry)? {
        BoundOutcome::Resolved(result) => {
            let checked = verify_bound(&result);
            let code = if checked.is_ok() { EXIT_OK } else { EXIT_FAILED };
            (
                BoundRecord::Resolved {
                    result,
                    verified: checked.is_ok(),
                    verify_error: checked.err(),
                },
                code,
            )
        }
        BoundOutcome::Unresolved { n_max, last_free, cut, at } => (
            BoundRecord::Unresolved {
                problem: problem.to_string(),
                k: b.k,
                n_max,
                at,
                cut,
                last_free,
            },
            EXIT_BUDGET,
        ),
    };
    out.emit(&Record::Bound(rec))?;
    Ok(code)
}

// algebra

fn algebra_record(name: String, table: &TableSemigroup) -> Result<AlgebraRecord, CliError> {
    if let Some((a, b, c)) = table.first_non_associative() {
        return Err(Error::Verification(format!("{name} is not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})")).into());
    }
    Ok(AlgebraRecord {
        name,
        report: SubsetAlgebraReport::compute(table)?,
    })
}

pub fn algebra_table(path: &Path, out: &mut Output) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let table = TableSemigroup::parse_matrix(&text)?;
    let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    out.emit(&Record::Algebra(algebra_record(name, &table)?))?;
    Ok(EXIT_OK)
}

pub fn algebra_family(cfg: &JobConfig, out: &mut Output) -> Result<u8, CliError> {
    let a = section(&cfg.algebra, "algebra")?;
    for m in generate_family(cfg.seed, a.count, a.max_size).into_iter().take(a.count) {
        out.emit(&Record::Algebra(algebra_record(m.name, &m.table)?))?;
    }
    Ok(EXIT_OK)
}
