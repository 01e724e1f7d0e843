//! Fixtures shared by the benchmarks.

use std::time::Duration;

use partreg_core::instances::{Word, Words};
use partreg_core::search::SearchLimits;

/// Words over `{a, b}` and a variable-word sequence of length `n` whose
/// `fp^Σ` set grows as `3^n`.
pub fn word_fixture(n: usize) -> (Words, Vec<Word>) {
    let g = Words::new("ab", 4 * n + 4).expect("valid alphabet");
    let seq = (0..n)
        .map(|i| Word::new(if i % 2 == 0 { "ax" } else { "xb" }))
        .collect();
    (g, seq)
}

pub fn limits(parallelism: usize) -> SearchLimits {
    SearchLimits::new(u64::MAX, Duration::from_secs(600), parallelism).expect("positive limits")
}
