//! Turning the config's instance and coloring tables into core values.

use std::collections::BTreeMap;
use std::hash::Hasher;
use std::path::Path;
use std::sync::Arc;

use fnv::FnvHasher;
use partreg_core::instances::{
    CarlsonCode, CodedWord, FinFn, FinK, Instance, NatPlus, Polynomials, TableSemigroup, Tower, TowerVariant, Word,
    Words,
};
use partreg_core::search::{induced_by_evaluation, Coloring, Edge};
use partreg_core::semigroup::verify::Report;
use partreg_core::Element;

use crate::config::{ColoringConfig, InstanceConfig, PoolConfig, TowerKind};
use crate::CliError;

pub enum Loaded {
    Nat(NatPlus),
    Words(Words),
    Fin(FinK),
    Poly(Polynomials),
    Code(Arc<CarlsonCode<Words>>),
    Tower(Tower<FinK>),
    Table(TableSemigroup),
}

/// Runs `$body` with `$inst` bound to a reference to the concrete instance.
macro_rules! with_instance {
    ($loaded:expr, $inst:ident => $body:expr) => {
        match $loaded {
            $crate::jobs::load::Loaded::Nat($inst) => $body,
            $crate::jobs::load::Loaded::Words($inst) => $body,
            $crate::jobs::load::Loaded::Fin($inst) => $body,
            $crate::jobs::load::Loaded::Poly($inst) => $body,
            $crate::jobs::load::Loaded::Code($inst) => $body,
            $crate::jobs::load::Loaded::Tower($inst) => $body,
            $crate::jobs::load::Loaded::Table($inst) => $body,
        }
    };
}
pub(crate) use with_instance;

/// `base` is the directory table files are resolved against.
pub fn load_instance(cfg: &InstanceConfig, base: &Path) -> Result<Loaded, CliError> {
    Ok(match cfg {
        InstanceConfig::NatPlus { max } => Loaded::Nat(NatPlus::new(*max)),
        InstanceConfig::Words { alphabet, max_len } => Loaded::Words(Words::new(alphabet, *max_len)?),
        InstanceConfig::FinK { k, support_bound, with_zero } => {
            let g = FinK::new(*k, *support_bound)?;
            Loaded::Fin(if *with_zero { g.with_zero() } else { g })
        }
        InstanceConfig::FreeProduct { alphabet, max_len, max_items } => {
            Loaded::Poly(Polynomials::polynomials(alphabet, *max_len, *max_items)?)
        }
        InstanceConfig::CarlsonCode { alphabet, base_max_len, seq, max_len } => {
            let g = Words::new(alphabet, *base_max_len)?;
            let seq = seq.iter().map(|s| g.parse_element(s)).collect::<Result<Vec<_>, _>>()?;
            let sigma = g.sigmas();
            Loaded::Code(Arc::new(CarlsonCode::new(g, sigma, Words::constant_words(), seq, *max_len)?))
        }
        InstanceConfig::Tower { n, support_bound, variant } => {
            let variant = match variant {
                TowerKind::Lemma => TowerVariant::Lemma,
                TowerKind::Remark => TowerVariant::Remark,
            };
            Loaded::Tower(Tower::fin(*n, *support_bound, variant)?)
        }
        InstanceConfig::Table { rows, file } => {
            let t = match (rows, file) {
                (Some(rows), None) => TableSemigroup::new(rows.clone())?,
                (None, Some(file)) => {
                    let path = base.join(file);
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                    TableSemigroup::parse_matrix(&text)?
                }
                _ => return Err(CliError::Config("a table needs exactly one of `rows` and `file`".into())),
            };
            Loaded::Table(t)
        }
    })
}

/// Per-instance extras on top of [`Instance`]: the rule colorings that make
/// sense for its elements and any checks beyond the catalog.
pub trait Job: Instance + Sized {
    /// A rule coloring other than `table` and `hashed`, or `None` if the
    /// kind does not apply to this instance.
    fn rule_coloring(&self, _cfg: &ColoringConfig, _seed: u64) -> Result<Option<Coloring<Self::Elem>>, CliError> {
        Ok(None)
    }

    /// The residue coloring of edges by vertex sum, where sums exist.
    fn edge_residue(&self, _k: u8) -> Result<Option<Coloring<Edge<Self::Elem>>>, CliError> {
        Ok(None)
    }

    fn extra_reports(&self, _pool: &[Self::Elem]) -> Vec<Report<Self::Elem>> {
        Vec::new()
    }
}

fn modulo<E: Element>(name: String, k: u8, f: impl Fn(&E) -> u64 + Send + Sync + 'static) -> Result<Coloring<E>, CliError> {
    Ok(Coloring::rule(name, k, move |e: &E| Some((f(e) % k as u64) as u8 + 1))?)
}

impl Job for NatPlus {
    fn rule_coloring(&self, cfg: &ColoringConfig, _seed: u64) -> Result<Option<Coloring<u64>>, CliError> {
        match cfg {
            ColoringConfig::Residue { k } => modulo(format!("residue mod {k}"), *k, |a: &u64| *a).map(Some),
            _ => Ok(None),
        }
    }

    fn edge_residue(&self, k: u8) -> Result<Option<Coloring<Edge<u64>>>, CliError> {
        modulo(format!("edge sum mod {k}"), k, |e: &Edge<u64>| e.0.iter().sum()).map(Some)
    }
}

impl Job for TableSemigroup {
    fn rule_coloring(&self, cfg: &ColoringConfig, _seed: u64) -> Result<Option<Coloring<usize>>, CliError> {
        match cfg {
            ColoringConfig::Residue { k } => modulo(format!("residue mod {k}"), *k, |a: &usize| *a as u64).map(Some),
            _ => Ok(None),
        }
    }
}

impl Job for Words {
    fn rule_coloring(&self, cfg: &ColoringConfig, _seed: u64) -> Result<Option<Coloring<Word>>, CliError> {
        match cfg {
            ColoringConfig::Length { k } => modulo(format!("length mod {k}"), *k, |w: &Word| w.len() as u64).map(Some),
            _ => Ok(None),
        }
    }
}

impl Job for Polynomials {
    fn rule_coloring(&self, cfg: &ColoringConfig, _seed: u64) -> Result<Option<Coloring<Self::Elem>>, CliError> {
        match cfg {
            ColoringConfig::Length { k } => {
                modulo(format!("weight mod {k}"), *k, |w: &Self::Elem| Polynomials::weight(w) as u64).map(Some)
            }
            _ => Ok(None),
        }
    }
}

fn level_coloring(cfg: &ColoringConfig) -> Result<Option<Coloring<FinFn>>, CliError> {
    match cfg {
        ColoringConfig::Level { k } => modulo(format!("level mod {k}"), *k, |f: &FinFn| f.level() as u64).map(Some),
        _ => Ok(None),
    }
}

impl Job for FinK {
    fn rule_coloring(&self, cfg: &ColoringConfig, _seed: u64) -> Result<Option<Coloring<FinFn>>, CliError> {
        level_coloring(cfg)
    }
}

impl Job for Tower<FinK> {
    fn rule_coloring(&self, cfg: &ColoringConfig, _seed: u64) -> Result<Option<Coloring<FinFn>>, CliError> {
        level_coloring(cfg)
    }

    fn extra_reports(&self, pool: &[FinFn]) -> Vec<Report<FinFn>> {
        self.verify(pool)
    }
}

impl Job for Arc<CarlsonCode<Words>> {
    fn rule_coloring(&self, cfg: &ColoringConfig, seed: u64) -> Result<Option<Coloring<CodedWord<Word>>>, CliError> {
        match cfg {
            ColoringConfig::Length { k } => {
                modulo(format!("length mod {k}"), *k, |g: &CodedWord<Word>| g.len() as u64).map(Some)
            }
            ColoringConfig::Induced { base } => {
                let base = build_coloring(self.base(), base, seed)?;
                Ok(Some(induced_by_evaluation(Arc::clone(self), base)?))
            }
            _ => Ok(None),
        }
    }
}

fn kind_name(cfg: &ColoringConfig) -> &'static str {
    match cfg {
        ColoringConfig::Table { .. } => "table",
        ColoringConfig::Hashed { .. } => "hashed",
        ColoringConfig::Residue { .. } => "residue",
        ColoringConfig::Length { .. } => "length",
        ColoringConfig::Level { .. } => "level",
        ColoringConfig::Induced { .. } => "induced",
    }
}

fn hashed<E: Element>(k: u8, seed: u64) -> Result<Coloring<E>, CliError> {
    Ok(Coloring::rule(format!("hashed({seed}) into {k}"), k, move |e: &E| {
        let mut h = FnvHasher::default();
        h.write_u64(seed);
        h.write(e.to_string().as_bytes());
        Some((h.finish() % k as u64) as u8 + 1)
    })?)
}

fn table<E: Element>(
    k: u8,
    entries: &BTreeMap<String, u8>,
    parse: impl Fn(&str) -> Result<E, CliError>,
) -> Result<Coloring<E>, CliError> {
    let mut parsed = BTreeMap::new();
    for (key, &c) in entries {
        if parsed.insert(parse(key)?, c).is_some() {
            return Err(CliError::Config(format!("coloring table lists `{key}` twice")));
        }
    }
    Ok(Coloring::table("table", k, parsed)?)
}

pub fn build_coloring<I: Job>(inst: &I, cfg: &ColoringConfig, seed: u64) -> Result<Coloring<I::Elem>, CliError> {
    match cfg {
        ColoringConfig::Table { k, entries } => table(*k, entries, |s| Ok(inst.parse_element(s)?)),
        ColoringConfig::Hashed { k } => hashed(*k, seed),
        other => inst.rule_coloring(other, seed)?.ok_or_else(|| {
            CliError::Config(format!("a {} coloring does not apply to {}", kind_name(other), inst.name()))
        }),
    }
}

/// Table keys for edges list their vertices separated by `;`.
pub fn build_edge_coloring<I: Job>(inst: &I, cfg: &ColoringConfig, seed: u64) -> Result<Coloring<Edge<I::Elem>>, CliError> {
    match cfg {
        ColoringConfig::Table { k, entries } => table(*k, entries, |s| {
            let mut v = s
                .split(';')
                .map(|t| inst.parse_element(t.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            v.sort();
            v.dedup();
            Ok(Edge(v))
        }),
        ColoringConfig::Hashed { k } => hashed(*k, seed),
        ColoringConfig::Residue { k } => inst.edge_residue(*k)?.ok_or_else(|| {
            CliError::Config(format!("edges of {} have no residue coloring", inst.name()))
        }),
        other => Err(CliError::Config(format!("a {} coloring does not apply to edges", kind_name(other)))),
    }
}

pub fn resolve_pool<I: Instance>(inst: &I, pool: &PoolConfig) -> Result<Vec<I::Elem>, CliError> {
    match (&pool.size, &pool.elements) {
        (Some(n), None) => Ok(inst.elements_up_to(*n)),
        (None, Some(list)) => Ok(list.iter().map(|s| inst.parse_element(s)).collect::<Result<_, _>>()?),
        _ => Err(CliError::Config("a pool needs exactly one of `size` and `elements`".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hashed_colors_depend_on_the_seed_only() {
        let a: Coloring<u64> = hashed(3, 7).unwrap();
        let b: Coloring<u64> = hashed(3, 7).unwrap();
        let c: Coloring<u64> = hashed(3, 8).unwrap();
        let colors = |col: &Coloring<u64>| (1..50).map(|x| col.color(&x).unwrap()).collect::<Vec<_>>();
        assert_eq!(colors(&a), colors(&b));
        assert_ne!(colors(&a), colors(&c));
        assert!(colors(&a).iter().all(|&x| (1..=3).contains(&x)));
    }

    #[test]
    fn kinds_are_checked_against_the_instance() {
        let g = Words::new("ab", 4).unwrap();
        assert!(build_coloring(&g, &ColoringConfig::Length { k: 2 }, 0).is_ok());
        assert!(matches!(
            build_coloring(&g, &ColoringConfig::Level { k: 2 }, 0),
            Err(CliError::Config(_))
        ));
        let nat = NatPlus::new(100);
        assert!(build_edge_coloring(&nat, &ColoringConfig::Residue { k: 2 }, 0).is_ok());
        assert!(build_edge_coloring(&g, &ColoringConfig::Residue { k: 2 }, 0).is_err());
    }

    #[test]
    fn edge_table_keys() {
        let nat = NatPlus::new(100);
        let entries = BTreeMap::from([("3; 1".to_string(), 2u8)]);
        let col = build_edge_coloring(&nat, &ColoringConfig::Table { k: 2, entries }, 0).unwrap();
        assert_eq!(col.color(&Edge(vec![1, 3])).unwrap(), 2);
    }
}
