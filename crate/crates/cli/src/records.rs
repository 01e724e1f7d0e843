//! Machine-readable output: one JSON object per line, tagged by `record`.
//! Elements appear in the instance's own text form.

use std::fmt;

use partreg_core::algebra::SubsetAlgebraReport;
use partreg_core::search::{BoundResult, Cut, FreeColoring};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Check(CheckRecord),
    Verify(VerifySummary),
    Fp(FpRecord),
    Search(SearchRecord),
    Bound(BoundRecord),
    Algebra(AlgebraRecord),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub instance: String,
    pub check: String,
    pub cases: u64,
    pub passed: bool,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub instance: String,
    pub checks: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub element: String,
    pub indices: Vec<usize>,
    pub factors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpRecord {
    pub instance: String,
    pub seq: Vec<String>,
    pub sigma: Vec<String>,
    pub minus: Option<String>,
    pub count: usize,
    /// Omitted in count-only mode.
    pub members: Option<Vec<Member>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    Exhausted,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub instance: String,
    pub search: String,
    pub coloring: String,
    pub status: SearchStatus,
    pub nodes: u64,
    pub cut: Option<Cut>,
    pub witness: Option<Witness>,
    /// Result of re-checking the witness independently of the search.
    pub verified: Option<bool>,
    pub verify_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Chain {
        chain: Vec<String>,
        color: u8,
        members: Vec<Member>,
    },
    Sigma {
        element: String,
        images: Vec<String>,
        color: u8,
    },
    Mt {
        chain: Vec<String>,
        color: u8,
        edges: Vec<Edge>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub vertices: Vec<String>,
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BoundRecord {
    Resolved {
        result: BoundResult,
        verified: bool,
        verify_error: Option<String>,
    },
    Unresolved {
        problem: String,
        k: u8,
        n_max: usize,
        at: usize,
        cut: Option<Cut>,
        last_free: Option<FreeColoring>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraRecord {
    pub name: String,
    pub report: SubsetAlgebraReport,
}

impl Record {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_line(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }
}

fn list(items: &[String]) -> String {
    items.join(", ")
}

fn set<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// The human rendering written to standard error.
impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Record::Check(c) => {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                write!(f, "{mark} {} ({} cases)", c.check, c.cases)?;
                for v in c.violations.iter().take(5) {
                    write!(f, "\n       {v}")?;
                }
                if c.violations.len() > 5 {
                    write!(f, "\n       … {} more", c.violations.len() - 5)?;
                }
                Ok(())
            }
            Record::Verify(s) => write!(
                f,
                "{}: {} of {} checks passed",
                s.instance,
                s.checks - s.failed,
                s.checks
            ),
            Record::Fp(r) => {
                let minus = r.minus.as_ref().map(|m| format!(" ∖ {m}")).unwrap_or_default();
                let sigma = if r.sigma.is_empty() { String::new() } else { format!("^{{{}}}", list(&r.sigma)) };
                write!(f, "fp{sigma}({}){minus}: {} members", list(&r.seq), r.count)?;
                for m in r.members.iter().flatten() {
                    let how: Vec<String> = m.indices.iter().zip(&m.factors).map(|(i, s)| format!("{s}(a{i})")).collect();
                    write!(f, "\n  {} = {}", m.element, how.join(" · "))?;
                }
                Ok(())
            }
            Record::Search(r) => {
                write!(f, "{} on {} under {}: ", r.search, r.instance, r.coloring)?;
                match (&r.status, &r.witness) {
                    (SearchStatus::Found, Some(w)) => {
                        match w {
                            Witness::Chain { chain, color, members } => {
                                write!(f, "chain [{}], {} members of color {color}", list(chain), members.len())?
                            }
                            Witness::Sigma { element, images, color } => {
                                write!(f, "{element} with images {} of color {color}", set(images))?
                            }
                            Witness::Mt { chain, color, edges } => {
                                write!(f, "chain [{}], {} edges of color {color}", list(chain), edges.len())?
                            }
                        }
                        match (&r.verified, &r.verify_error) {
                            (Some(true), _) => write!(f, " (verified; {} nodes)", r.nodes),
                            (_, Some(e)) => write!(f, " (REJECTED by the checker: {e})"),
                            _ => write!(f, " ({} nodes)", r.nodes),
                        }
                    }
                    (SearchStatus::Exhausted, _) => write!(f, "no witness ({} nodes, exhaustive)", r.nodes),
                    _ => write!(f, "unresolved after {} nodes ({:?})", r.nodes, r.cut),
                }
            }
            Record::Bound(BoundRecord::Resolved { result, verified, verify_error }) => {
                write!(
                    f,
                    "{} with {} colors: threshold {} ({} nodes); free coloring of size {}: {:?}; refutation with {} leaves",
                    result.problem,
                    result.k,
                    result.threshold,
                    result.nodes,
                    result.free_coloring.n,
                    result.free_coloring.colors,
                    result.refutation.leaves.len()
                )?;
                if *verified {
                    write!(f, "; certificates verified")
                } else {
                    write!(f, "; certificate REJECTED: {}", verify_error.as_deref().unwrap_or("?"))
                }
            }
            Record::Bound(BoundRecord::Unresolved { problem, k, n_max, at, cut, .. }) => match cut {
                Some(c) => write!(f, "{problem} with {k} colors: stopped at n = {at} ({c:?})"),
                None => write!(f, "{problem} with {k} colors: no threshold up to {n_max}"),
            },
            Record::Algebra(a) => {
                let r = &a.report;
                write!(
                    f,
                    "{} (order {}): idempotents {}, minimal subsemigroups {}, left-minimal {}, chosen {} with minimal left ideal {}, sandwich {}",
                    a.name,
                    r.size,
                    set(&r.idempotents),
                    set(r.minimal_subsemigroups.iter().map(set)),
                    set(&r.left_minimal),
                    r.certificate.element,
                    set(&r.certificate.left_ideal),
                    set(&r.sandwich)
                )
            }
        }
    }
}
