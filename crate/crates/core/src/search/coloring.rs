use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instances::{CarlsonCode, CodedWord};
use crate::semigroup::{Element, Semigroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColoringKind {
    Table,
    Rule,
    Induced,
}

type RuleFn<E> = Arc<dyn Fn(&E) -> Result<u8> + Send + Sync>;

#[derive(Clone)]
enum Mode<E> {
    Table(Arc<BTreeMap<E, u8>>),
    Rule(RuleFn<E>),
    Induced(RuleFn<E>),
}

/// A coloring with colors `1..=k`. Asking for the color of an element the
/// coloring does not cover is an error, never a default color.
#[derive(Clone)]
pub struct Coloring<E> {
    name: String,
    k: u8,
    mode: Mode<E>,
}

impl<E: Element> Coloring<E> {
    pub fn table(name: impl Into<String>, k: u8, entries: BTreeMap<E, u8>) -> Result<Self> {
        let name = name.into();
        check_k(k)?;
        if let Some((e, c)) = entries.iter().find(|(_, &c)| c == 0 || c > k) {
            return Err(Error::Config(format!("coloring `{name}` gives {e} color {c}, outside 1..={k}")));
        }
        Ok(Coloring {
            name,
            k,
            mode: Mode::Table(Arc::new(entries)),
        })
    }

    /// A coloring computed by `f`, which may decline elements by returning
    /// `None`.
    pub fn rule(
        name: impl Into<String>,
        k: u8,
        f: impl Fn(&E) -> Option<u8> + Send + Sync + 'static,
    ) -> Result<Self> {
        check_k(k)?;
        let name = name.into();
        let label = name.clone();
        Ok(Coloring {
            name,
            k,
            mode: Mode::Rule(Arc::new(move |e: &E| {
                f(e).ok_or_else(|| Error::ColoringNotTotal {
                    coloring: label.clone(),
                    element: e.to_string(),
                })
            })),
        })
    }

    /// A coloring pulled back along a map into another colored set.
    pub fn induced(
        name: impl Into<String>,
        k: u8,
        f: impl Fn(&E) -> Result<u8> + Send + Sync + 'static,
    ) -> Result<Self> {
        check_k(k)?;
        Ok(Coloring {
            name: name.into(),
            k,
            mode: Mode::Induced(Arc::new(f)),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn colors(&self) -> u8 {
        self.k
    }

    pub fn kind(&self) -> ColoringKind {
        match self.mode {
            Mode::Table(_) => ColoringKind::Table,
            Mode::Rule(_) => ColoringKind::Rule,
            Mode::Induced(_) => ColoringKind::Induced,
        }
    }

    pub fn color(&self, e: &E) -> Result<u8> {
        let c = match &self.mode {
            Mode::Table(t) => *t.get(e).ok_or_else(|| Error::ColoringNotTotal {
                coloring: self.name.clone(),
                element: e.to_string(),
            })?,
            Mode::Rule(f) | Mode::Induced(f) => f(e)?,
        };
        if c == 0 || c > self.k {
            return Err(Error::Config(format!(
                "coloring `{}` gives {e} color {c}, outside 1..={}",
                self.name, self.k
            )));
        }
        Ok(c)
    }

    /// Fails on the first element of `carrier` without a valid color.
    pub fn check_total<'a>(&self, carrier: impl IntoIterator<Item = &'a E>) -> Result<()> {
        for e in carrier {
            self.color(e)?;
        }
        Ok(())
    }
}

fn check_k(k: u8) -> Result<()> {
    if k == 0 {
        Err(Error::Config("a coloring needs at least one color".into()))
    } else {
        Ok(())
    }
}

impl<E> fmt::Debug for Coloring<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.mode {
            Mode::Table(_) => "table",
            Mode::Rule(_) => "rule",
            Mode::Induced(_) => "induced",
        };
        write!(f, "Coloring({}, k={}, {kind})", self.name, self.k)
    }
}

/// Colors each coded word with the color of its evaluation.
pub fn induced_by_evaluation<S>(code: Arc<CarlsonCode<S>>, base: Coloring<S::Elem>) -> Result<Coloring<CodedWord<S::Elem>>>
where
    S: Semigroup + 'static,
{
    let name = format!("eval*({})", base.name());
    let k = base.colors();
    Coloring::induced(name, k, move |g: &CodedWord<S::Elem>| base.color(&code.eval_star(g)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_checked() {
        let t = Coloring::table("t", 2, BTreeMap::from([(1u64, 1), (2, 2)])).unwrap();
        assert_eq!(t.color(&2).unwrap(), 2);
        assert!(matches!(t.color(&3), Err(Error::ColoringNotTotal { .. })));
        assert!(Coloring::table("bad", 2, BTreeMap::from([(1u64, 3)])).is_err());
        assert!(t.check_total(&[1, 2, 3]).is_err());
    }

    #[test]
    fn rule_range_is_checked() {
        let parity = Coloring::rule("parity", 2, |n: &u64| Some((n % 2) as u8 + 1)).unwrap();
        assert_eq!(parity.color(&4).unwrap(), 1);
        let broken = Coloring::rule("mod3", 2, |n: &u64| Some((n % 3) as u8 + 1)).unwrap();
        assert!(broken.color(&2).is_err());
        let partial = Coloring::rule("small", 2, |n: &u64| (*n < 3).then_some(1)).unwrap();
        assert!(partial.color(&5).is_err());
    }
}
