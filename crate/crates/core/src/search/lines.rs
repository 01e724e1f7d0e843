//! Monochromatic images `{σ a : σ ∈ Σ}`, and combinatorial lines as the
//! special case of words with the substitutions `σ_a`.

use super::{run_tasks, Coloring, Outcome, SearchLimits, TaskResult};
use crate::error::{Error, Result};
use crate::instances::{Word, Words, VARIABLE};
use crate::semigroup::{Element, Morphism, Semigroup, Subsemigroup};

/// An element outside `C` whose images under `Σ` (in `Σ` order) share a
/// color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaWitness<E> {
    pub element: E,
    pub images: Vec<E>,
    pub color: u8,
}

const TASK_SIZE: usize = 64;

fn scan<S: Semigroup>(
    sigma: &[Morphism<S::Elem>],
    c: &Subsemigroup<S::Elem>,
    coloring: &Coloring<S::Elem>,
    ordered: &[S::Elem],
    limits: &SearchLimits,
) -> Result<Outcome<SigmaWitness<S::Elem>>> {
    if sigma.is_empty() {
        return Err(Error::Precondition("Σ must be nonempty".into()));
    }
    let tasks: Vec<&[S::Elem]> = ordered.chunks(TASK_SIZE).collect();
    let (outcome, _) = run_tasks(&tasks, limits, |chunk, budget| -> TaskResult<_, ()> {
        for a in chunk.iter().filter(|a| !c.contains(a)) {
            budget.tick()?;
            let images = sigma.iter().map(|m| m.apply(a)).collect::<Result<Vec<_>>>()?;
            let first = coloring.color(&images[0])?;
            let mut mono = true;
            for img in &images[1..] {
                if coloring.color(img)? != first {
                    mono = false;
                    break;
                }
            }
            if mono {
                return Ok(Ok(SigmaWitness {
                    element: a.clone(),
                    images,
                    color: first,
                }));
            }
        }
        Ok(Err(()))
    })?;
    Ok(outcome)
}

/// The canonically least `a ∈ pool ∖ C` with `{σ a : σ ∈ Σ}` monochromatic.
/// The coloring need only be defined on the images.
pub fn find_sigma_mono<S: Semigroup>(
    sigma: &[Morphism<S::Elem>],
    c: &Subsemigroup<S::Elem>,
    coloring: &Coloring<S::Elem>,
    pool: &[S::Elem],
    limits: &SearchLimits,
) -> Result<Outcome<SigmaWitness<S::Elem>>> {
    let mut ordered = pool.to_vec();
    ordered.sort();
    ordered.dedup();
    scan::<S>(sigma, c, coloring, &ordered, limits)
}

/// Variable words of length `n` in line order: lexicographic with the
/// variable ranked below every letter, so `x^n` comes first.
pub fn hj_line_order(alphabet: &[u8], n: usize) -> Vec<Word> {
    let mut symbols = vec![VARIABLE];
    symbols.extend_from_slice(alphabet);
    Words::words_of_len(&symbols, n)
        .into_iter()
        .filter(|w| !w.is_constant())
        .collect()
}

/// The first variable word `w` of length `n` (in [`hj_line_order`]) whose
/// line `{w(a) : a ∈ A}` is monochromatic; the coloring is on `A^n`.
pub fn find_hj_line(
    alphabet: &str,
    n: usize,
    coloring: &Coloring<Word>,
    limits: &SearchLimits,
) -> Result<Outcome<SigmaWitness<Word>>> {
    if n == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    let g = Words::new(alphabet, n)?;
    let ordered = hj_line_order(g.alphabet(), n);
    scan::<Words>(&g.sigmas(), &Words::constant_words(), coloring, &ordered, limits)
}

/// Recomputes the images and their colors.
pub fn verify_sigma_witness<E: Element>(
    sigma: &[Morphism<E>],
    c: &Subsemigroup<E>,
    coloring: &Coloring<E>,
    w: &SigmaWitness<E>,
) -> std::result::Result<(), String> {
    if c.contains(&w.element) {
        return Err(format!("{} lies in {}", w.element, c.name()));
    }
    if w.images.len() != sigma.len() {
        return Err(format!("{} images for {} maps", w.images.len(), sigma.len()));
    }
    for (m, img) in sigma.iter().zip(&w.images) {
        let actual = m.apply(&w.element).map_err(|e| e.to_string())?;
        if &actual != img {
            return Err(format!("{}({}) is {actual}, not {img}", m.name(), w.element));
        }
        let col = coloring.color(img).map_err(|e| e.to_string())?;
        if col != w.color {
            return Err(format!("{img} has color {col}, not {}", w.color));
        }
    }
    Ok(())
}

/// Checks a line witness by direct substitution, without the word instance.
pub fn verify_hj_witness(
    alphabet: &str,
    n: usize,
    coloring: &Coloring<Word>,
    w: &SigmaWitness<Word>,
) -> std::result::Result<(), String> {
    let mut letters: Vec<u8> = alphabet.bytes().collect();
    letters.sort_unstable();
    letters.dedup();
    let word = w.element.symbols();
    if word.len() != n {
        return Err(format!("{} has length {}, not {n}", w.element, word.len()));
    }
    if !word.contains(&VARIABLE) {
        return Err(format!("{} has no variable", w.element));
    }
    if let Some(s) = word.iter().find(|&&s| s != VARIABLE && !letters.contains(&s)) {
        return Err(format!("symbol `{}` is not in the alphabet", *s as char));
    }
    if w.images.len() != letters.len() {
        return Err(format!("line has {} points, expected {}", w.images.len(), letters.len()));
    }
    for (&a, img) in letters.iter().zip(&w.images) {
        let point: Vec<u8> = word.iter().map(|&s| if s == VARIABLE { a } else { s }).collect();
        if img.symbols() != point.as_slice() {
            return Err(format!("line point for `{}` is {img}", a as char));
        }
        let col = coloring.color(img).map_err(|e| e.to_string())?;
        if col != w.color {
            return Err(format!("{img} has color {col}, not {}", w.color));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::time::Duration;

    use super::*;

    fn limits() -> SearchLimits {
        SearchLimits::new(100_000, Duration::from_secs(60), 1).unwrap()
    }

    #[test]
    fn constant_coloring_gives_all_variable_word() {
        let col = Coloring::rule("const", 1, |_: &Word| Some(1)).unwrap();
        let w = find_hj_line("ab", 3, &col, &limits()).unwrap().into_witness().unwrap();
        assert_eq!(w.element, Word::from("xxx"));
        verify_hj_witness("ab", 3, &col, &w).unwrap();
    }

    #[test]
    fn first_letter_coloring() {
        let col = Coloring::rule("first", 2, |w: &Word| Some(if w.symbols()[0] == b'a' { 1 } else { 2 })).unwrap();
        let w = find_hj_line("ab", 2, &col, &limits()).unwrap().into_witness().unwrap();
        assert_eq!(w.element, Word::from("ax"));
        assert_eq!(w.images, vec![Word::from("aa"), Word::from("ab")]);
        verify_hj_witness("ab", 2, &col, &w).unwrap();
    }

    #[test]
    fn separated_points_have_no_line() {
        let col = Coloring::rule("sep", 2, |w: &Word| Some(if w.symbols()[0] == b'a' { 1 } else { 2 })).unwrap();
        assert!(find_hj_line("ab", 1, &col, &limits()).unwrap().is_exhausted());
    }

    #[test]
    fn tampered_line_is_rejected() {
        let col = Coloring::rule("const", 1, |_: &Word| Some(1)).unwrap();
        let mut w = find_hj_line("ab", 2, &col, &limits()).unwrap().into_witness().unwrap();
        w.images[1] = Word::from("ab");
        assert!(verify_hj_witness("ab", 2, &col, &w).is_err());
    }
}
