//! Bounded witness search and small partition numbers.
//!
//! Every search explores candidates in canonical order and reports the first
//! witness, so the reported witness is the canonically least one. Work is cut
//! into tasks (subtrees) that may run on several threads; results are merged
//! in task order, and the node budget is charged as if the tasks had run one
//! after another, so outcomes do not depend on the degree of parallelism.
//! Only a wall-clock timeout can make two runs differ.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod bound;
pub mod chain;
pub mod coloring;
pub mod lines;
pub mod mt;

pub use bound::{
    compute_bound, verify_bound, verify_free_coloring, verify_refutation, BoundInstance, BoundOutcome, BoundProblem, BoundResult,
    FreeColoring, Leaf, Refutation,
};
pub use chain::{find_mono_fp_chain, verify_fp_witness, FpProblem, FpWitness};
pub use coloring::{induced_by_evaluation, Coloring, ColoringKind};
pub use lines::{
    find_hj_line, find_sigma_mono, hj_line_order, verify_hj_witness, verify_sigma_witness,
    SigmaWitness,
};
pub use mt::{find_mt_witness, verify_mt_witness, Edge, MtWitness};

/// Node budget, wall-clock timeout and worker count. All three are required.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_nodes: u64,
    pub timeout: Duration,
    pub parallelism: usize,
}

impl SearchLimits {
    pub fn new(max_nodes: u64, timeout: Duration, parallelism: usize) -> Result<Self> {
        if max_nodes == 0 {
            return Err(Error::Config("max_nodes must be positive".into()));
        }
        if timeout.is_zero() {
            return Err(Error::Config("timeout must be positive".into()));
        }
        if parallelism == 0 {
            return Err(Error::Config("parallelism must be positive".into()));
        }
        Ok(SearchLimits {
            max_nodes,
            timeout,
            parallelism,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cut {
    NodeLimit,
    Timeout,
}

/// `Exhausted` means the whole space was searched; `Unresolved` means a limit
/// stopped the search first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<W> {
    Found { witness: W, nodes: u64 },
    Exhausted { nodes: u64 },
    Unresolved { nodes: u64, cut: Cut },
}

impl<W> Outcome<W> {
    pub fn witness(&self) -> Option<&W> {
        match self {
            Outcome::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Outcome::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            Outcome::Found { nodes, .. } | Outcome::Exhausted { nodes } | Outcome::Unresolved { nodes, .. } => *nodes,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, Outcome::Exhausted { .. })
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Outcome<V> {
        match self {
            Outcome::Found { witness, nodes } => Outcome::Found {
                witness: f(witness),
                nodes,
            },
            Outcome::Exhausted { nodes } => Outcome::Exhausted { nodes },
            Outcome::Unresolved { nodes, cut } => Outcome::Unresolved { nodes, cut },
        }
    }
}

/// Why a task stopped early.
#[derive(Debug)]
pub(crate) enum Halt {
    Cut(Cut),
    Fail(Error),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Fail(e)
    }
}

pub(crate) struct Budget {
    limit: u64,
    used: u64,
    deadline: Instant,
}

impl Budget {
    fn new(limit: u64, deadline: Instant) -> Self {
        Budget {
            limit,
            used: 0,
            deadline,
        }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<(), Halt> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Halt::Cut(Cut::NodeLimit));
        }
        if self.used & 0x3ff == 0 && Instant::now() >= self.deadline {
            return Err(Halt::Cut(Cut::Timeout));
        }
        Ok(())
    }
}

/// A task either finds a result or finishes its subtree, possibly leaving a
/// by-product (such as refutation leaves).
pub(crate) type TaskResult<R, X> = Result<Result<R, X>, Halt>;

/// Runs `tasks` in chunks of `parallelism` and merges in task order. Task `i`
/// is charged against what the tasks before it left of the node budget;
/// exceeding that share is reported exactly as a serial run would report it.
pub(crate) fn run_tasks<T, R, X, F>(tasks: &[T], limits: &SearchLimits, f: F) -> Result<(Outcome<R>, Vec<X>)>
where
    T: Sync,
    R: Send,
    X: Send,
    F: Fn(&T, &mut Budget) -> TaskResult<R, X> + Sync,
{
    let deadline = Instant::now() + limits.timeout;
    let pool = if limits.parallelism > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(limits.parallelism)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    let mut used_total = 0u64;
    let mut leftovers = Vec::new();
    for chunk in tasks.chunks(limits.parallelism) {
        let remaining = limits.max_nodes - used_total;
        let run = |t: &T| {
            let mut b = Budget::new(remaining, deadline);
            let r = f(t, &mut b);
            (r, b.used)
        };
        let results: Vec<(TaskResult<R, X>, u64)> = match &pool {
            Some(p) => p.install(|| chunk.par_iter().map(run).collect()),
            None => chunk.iter().map(run).collect(),
        };
        for (r, used) in results {
            let share = limits.max_nodes - used_total;
            if used > share {
                return Ok((
                    Outcome::Unresolved {
                        nodes: limits.max_nodes,
                        cut: Cut::NodeLimit,
                    },
                    leftovers,
                ));
            }
            used_total += used;
            match r {
                Ok(Ok(witness)) => {
                    return Ok((
                        Outcome::Found {
                            witness,
                            nodes: used_total,
                        },
                        leftovers,
                    ))
                }
                Ok(Err(x)) => leftovers.push(x),
                Err(Halt::Cut(cut)) => {
                    return Ok((
                        Outcome::Unresolved {
                            nodes: used_total,
                            cut,
                        },
                        leftovers,
                    ))
                }
                Err(Halt::Fail(e)) => return Err(e),
            }
        }
    }
    Ok((Outcome::Exhausted { nodes: used_total }, leftovers))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits(max_nodes: u64, parallelism: usize) -> SearchLimits {
        SearchLimits::new(max_nodes, Duration::from_secs(60), parallelism).unwrap()
    }

    /// Task `i` costs `i + 1` nodes and succeeds when `i == 5`.
    fn staircase(tasks: &[u64], l: &SearchLimits) -> Outcome<u64> {
        run_tasks(tasks, l, |&i, b| {
            for _ in 0..=i {
                b.tick()?;
            }
            Ok(if i == 5 { Ok(i) } else { Err(()) })
        })
        .unwrap()
        .0
    }

    #[test]
    fn merge_is_independent_of_parallelism() {
        let tasks: Vec<u64> = (0..10).collect();
        for budget in [1, 5, 15, 20, 21, 100] {
            let serial = staircase(&tasks, &limits(budget, 1));
            for p in [2, 3, 4, 8] {
                assert_eq!(serial, staircase(&tasks, &limits(budget, p)), "budget {budget}, p {p}");
            }
        }
        assert_eq!(
            staircase(&tasks, &limits(100, 1)),
            Outcome::Found { witness: 5, nodes: 21 }
        );
        assert_eq!(
            staircase(&tasks, &limits(20, 4)),
            Outcome::Unresolved { nodes: 20, cut: Cut::NodeLimit }
        );
    }

    #[test]
    fn limits_are_mandatory() {
        assert!(SearchLimits::new(0, Duration::from_secs(1), 1).is_err());
        assert!(SearchLimits::new(1, Duration::ZERO, 1).is_err());
        assert!(SearchLimits::new(1, Duration::from_secs(1), 0).is_err());
    }
}
