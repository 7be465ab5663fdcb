use std::collections::{BTreeSet, HashSet};

use crate::error::Error;
use crate::words::{count_occurrences, Letter, Word};

use super::FactorSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repetitivity {
    /// Every factor of this length contains every factor of length `n`.
    Within(usize),
    /// No such length up to the depth of the factor set.
    ExceedsMaxLength,
}

impl Repetitivity {
    pub fn value(self) -> Option<usize> {
        match self {
            Repetitivity::Within(l) => Some(l),
            Repetitivity::ExceedsMaxLength => None,
        }
    }
}

/// Smallest `L` such that every factor of length `L` contains every factor of
/// length `n`.
pub fn repetitivity_function(f: &FactorSet, n: usize) -> Result<Repetitivity, Error> {
    f.require_saturated()?;
    if n == 0 {
        return Err(Error::InvalidArgument("repetitivity length must be positive".into()));
    }
    if n > f.max_length() {
        return Err(Error::TooShallow { requested: n, available: f.max_length() });
    }
    let target = f.complexity(n);
    for len in n..=f.max_length() {
        let all = f.words_of_length(len).all(|w| {
            let seen: HashSet<&[Letter]> = w.windows(n).collect();
            seen.len() == target
        });
        if all {
            return Ok(Repetitivity::Within(len));
        }
    }
    Ok(Repetitivity::ExceedsMaxLength)
}

/// Smallest length whose factors all contain `v`, if within depth.
pub(crate) fn covering_length(f: &FactorSet, v: &[Letter]) -> Option<usize> {
    (v.len().max(1)..=f.max_length()).find(|&len| f.words_of_length(len).all(|w| crate::words::contains(w, v)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnWords {
    pub words: BTreeSet<Word>,
    /// The factor set was deep enough to see every return word.
    pub complete: bool,
    /// Smallest length whose factors all contain `v`, when found.
    pub gap_length: Option<usize>,
}

/// Return words of `v`: all `x` with `xv` a factor, `xv` starting with `v`,
/// and exactly two occurrences of `v` in `xv`.
///
/// If every factor of length `K` contains `v`, consecutive occurrences of `v`
/// are at most `K - |v| + 1` apart, so `|xv| <= K + 1`; the result is complete
/// once the factor set reaches that length.
pub fn return_words(f: &FactorSet, v: &[Letter]) -> Result<ReturnWords, Error> {
    f.require_saturated()?;
    if v.is_empty() {
        return Err(Error::EmptyWord("return_words"));
    }
    if !f.member(v)? {
        return Err(Error::InvalidArgument("word is not a factor".into()));
    }
    let gap_length = covering_length(f, v);
    let (limit, complete) = match gap_length {
        Some(k) if k < f.max_length() => (k + 1, true),
        _ => (f.max_length(), false),
    };
    let mut words = BTreeSet::new();
    for len in v.len() + 1..=limit {
        for u in f.words_of_length(len) {
            if u.starts_with(v) && u.ends_with(v) && count_occurrences(v, u)? == 2 {
                words.insert(Word::from(&u[..len - v.len()]));
            }
        }
    }
    Ok(ReturnWords { words, complete, gap_length })
}

/// Shortest (then lexicographically least) `u` satisfying `constraint` with
/// `u^exponent` followed by the first letter of `u` a factor; `None` if no such
/// word fits in the factor set.
pub fn find_power<P>(f: &FactorSet, constraint: P, exponent: usize) -> Option<Word>
where
    P: Fn(&[Letter]) -> bool,
{
    if exponent == 0 {
        return None;
    }
    let mut m = 1;
    while m * exponent < f.max_length() {
        for u in f.words_of_length(m) {
            if !constraint(u) {
                continue;
            }
            let mut candidate = u.power(exponent);
            candidate.push(u[0]);
            if f.contains(&candidate) {
                return Some(u.clone());
            }
        }
        m += 1;
    }
    None
}

/// Palindromic factors sorted by length, then lexicographically.
pub fn palindromes(f: &FactorSet) -> Vec<Word> {
    f.layers()
        .iter()
        .flat_map(|layer| layer.iter().filter(|w| w.is_palindrome()).cloned())
        .collect()
}
