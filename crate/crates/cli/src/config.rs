//! The job file schema. Every table rejects unknown keys, and the file is
//! validated in full before any work starts.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use partreg_core::search::{BoundProblem, SearchLimits};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 2024;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub schema_version: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub limits: LimitsConfig,
    pub instance: Option<InstanceConfig>,
    pub verify: Option<VerifyConfig>,
    pub fp: Option<FpConfig>,
    pub search: Option<SearchConfig>,
    pub coloring: Option<ColoringConfig>,
    pub bound: Option<BoundConfig>,
    pub algebra: Option<AlgebraConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsConfig {
    pub max_nodes: u64,
    pub timeout_ms: u64,
    pub parallelism: usize,
}

impl LimitsConfig {
    pub fn to_limits(self) -> Result<SearchLimits, CliError> {
        Ok(SearchLimits::new(
            self.max_nodes,
            Duration::from_millis(self.timeout_ms),
            self.parallelism,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceConfig {
    NatPlus {
        max: u64,
    },
    Words {
        alphabet: String,
        max_len: usize,
    },
    FinK {
        k: u8,
        support_bound: u32,
        #[serde(default)]
        with_zero: bool,
    },
    /// Polynomials: the free product of `A⁺` with a free monogenic
    /// semigroup on the variable.
    FreeProduct {
        alphabet: String,
        max_len: usize,
        max_items: usize,
    },
    /// Coded words over the word instance on `alphabet`.
    CarlsonCode {
        alphabet: String,
        base_max_len: usize,
        seq: Vec<String>,
        max_len: usize,
    },
    /// The FIN tower inside `FIN_n`.
    Tower {
        n: u8,
        support_bound: u32,
        #[serde(default)]
        variant: TowerKind,
    },
    /// A finite table, given inline or as a path relative to the job file.
    Table {
        rows: Option<Vec<Vec<usize>>>,
        file: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerKind {
    #[default]
    Lemma,
    Remark,
}

/// Either `size` (the instance's own enumeration up to that size) or an
/// explicit element list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolConfig {
    pub size: Option<usize>,
    pub elements: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub pool: PoolConfig,
    /// Catalog selections; an omitted list selects the whole catalog.
    pub morphisms: Option<Vec<String>>,
    pub subsemigroups: Option<Vec<String>>,
    pub relations: Option<Vec<String>>,
    /// Finite sets to find covers for, one check per relation.
    #[serde(default)]
    pub covering: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpConfig {
    pub seq: Vec<String>,
    #[serde(default)]
    pub sigma: Vec<String>,
    pub minus: Option<String>,
    #[serde(default)]
    pub count_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SearchConfig {
    /// A `⊰`-chain of length `len` with monochromatic `fp^Σ ∖ C`.
    Chain {
        len: usize,
        relation: String,
        #[serde(default)]
        sigma: Vec<String>,
        minus: Option<String>,
        #[serde(default)]
        distinct: bool,
        pool: PoolConfig,
    },
    /// An element outside `C` whose `Σ`-images share a color.
    SigmaMono {
        sigma: Vec<String>,
        minus: String,
        pool: PoolConfig,
    },
    /// A monochromatic combinatorial line in `alphabet^dimension`; needs no
    /// instance.
    Hj {
        alphabet: String,
        dimension: usize,
    },
    /// A chain whose Milliken–Taylor edges of size `n` share a color.
    Mt {
        n: usize,
        len: usize,
        relation: String,
        pool: PoolConfig,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ColoringConfig {
    /// Explicit colors; elements are written as the instance parses them.
    Table { k: u8, entries: BTreeMap<String, u8> },
    /// A pseudo-random coloring keyed by the job seed and the element's
    /// rendering.
    Hashed { k: u8 },
    /// Integers (or edge sums) by residue: `a ↦ (a mod k) + 1`.
    Residue { k: u8 },
    /// Words and coded words by length: `w ↦ (|w| mod k) + 1`.
    Length { k: u8 },
    /// FIN functions by their maximum value: `f ↦ (max f mod k) + 1`.
    Level { k: u8 },
    /// Coded words by the color of their evaluation under `base`.
    Induced { base: Box<ColoringConfig> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConfig {
    /// `schur`, `vdw(3)`, `hj(2)`, `finite_unions`, `gowers_fin_k(1,2)` or
    /// `ramsey(3)`.
    pub problem: String,
    pub k: u8,
    pub n_max: usize,
    #[serde(default = "default_true")]
    pub symmetry: bool,
}

impl BoundConfig {
    pub fn problem(&self) -> Result<BoundProblem, CliError> {
        Ok(self.problem.parse()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    /// How many members of the generated family to analyse.
    pub count: usize,
    pub max_size: usize,
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: JobConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.limits.to_limits()?;
        let pools = [
            self.verify.as_ref().map(|v| &v.pool),
            match &self.search {
                Some(SearchConfig::Chain { pool, .. } | SearchConfig::SigmaMono { pool, .. } | SearchConfig::Mt { pool, .. }) => {
                    Some(pool)
                }
                _ => None,
            },
        ];
        for pool in pools.into_iter().flatten() {
            if pool.size.is_some() == pool.elements.is_some() {
                return Err(CliError::Config("a pool needs exactly one of `size` and `elements`".into()));
            }
        }
        if let Some(InstanceConfig::Table { rows, file }) = &self.instance {
            if rows.is_some() == file.is_some() {
                return Err(CliError::Config("a table needs exactly one of `rows` and `file`".into()));
            }
        }
        if let Some(b) = &self.bound {
            b.problem()?;
        }
        Ok(())
    }
}
