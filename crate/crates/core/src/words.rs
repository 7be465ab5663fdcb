//! Finite words over a small alphabet.
//!
//! Letters are dense indices into an [`Alphabet`]; the alphabet carries the
//! printable symbol of each letter together with its real value (the value is
//! only consulted by the spectral code and the digit expansions).

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use crate::error::Error;

/// Index of a letter in its alphabet.
pub type Letter = u8;

/// Upper bound on alphabet size; letter sets are stored as `u64` bitmasks.
pub const MAX_ALPHABET: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    pub name: char,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    /// Builds an alphabet, rejecting duplicate symbols and duplicate values.
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, Error> {
        Self::with_options(symbols, false)
    }

    /// Like [`Alphabet::new`], but distinct letters may share a value when
    /// `allow_equal_values` is set.
    pub fn with_options(symbols: Vec<Symbol>, allow_equal_values: bool) -> Result<Self, Error> {
        if symbols.is_empty() {
            return Err(Error::Definition("alphabet is empty".into()));
        }
        if symbols.len() > MAX_ALPHABET {
            return Err(Error::Definition(format!(
                "alphabet has {} letters, at most {MAX_ALPHABET} supported",
                symbols.len()
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            if !s.value.is_finite() {
                return Err(Error::Definition(format!("symbol '{}' has a non-finite value", s.name)));
            }
            for t in &symbols[..i] {
                if t.name == s.name {
                    return Err(Error::Definition(format!("duplicate symbol '{}'", s.name)));
                }
                if !allow_equal_values && t.value == s.value {
                    return Err(Error::Definition(format!(
                        "symbols '{}' and '{}' share the value {}",
                        t.name, s.name, s.value
                    )));
                }
            }
        }
        Ok(Self { symbols })
    }

    /// Alphabet whose symbols are the given characters with values 0, 1, 2, ...
    pub fn from_chars(chars: &str) -> Result<Self, Error> {
        Self::new(
            chars
                .chars()
                .enumerate()
                .map(|(i, name)| Symbol { name, value: i as f64 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, letter: Letter) -> &Symbol {
        &self.symbols[letter as usize]
    }

    pub fn value(&self, letter: Letter) -> f64 {
        self.symbols[letter as usize].value
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.symbols.len()).map(|i| i as Letter)
    }

    pub fn letter_of(&self, name: char) -> Option<Letter> {
        self.symbols.iter().position(|s| s.name == name).map(|i| i as Letter)
    }

    /// Parses a string of symbol characters into a word.
    pub fn parse(&self, text: &str) -> Result<Word, Error> {
        text.chars()
            .map(|c| self.letter_of(c).ok_or(Error::UnknownSymbol(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(Word::from)
    }

    pub fn render(&self, word: &[Letter]) -> String {
        word.iter().map(|&l| self.symbols[l as usize].name).collect()
    }
}

/// A finite word; the empty word is representable but most operations reject it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn single(letter: Letter) -> Self {
        Self(vec![letter])
    }

    pub fn into_inner(self) -> Vec<Letter> {
        self.0
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from_slice(&mut self, letters: &[Letter]) {
        self.0.extend_from_slice(letters);
    }

    /// `self` repeated `times` times.
    pub fn power(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// Bitmask of the letters that occur in the word.
    pub fn letter_mask(&self) -> u64 {
        letter_mask(&self.0)
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl std::borrow::Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Self(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Self(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    // Without an alphabet at hand, print letter indices; single-digit indices
    // are concatenated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l < 10) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

pub fn letter_mask(word: &[Letter]) -> u64 {
    word.iter().fold(0u64, |m, &l| m | (1u64 << l))
}

/// Number of (possibly overlapping) occurrences of `pattern` in `text`.
pub fn count_occurrences(pattern: &[Letter], text: &[Letter]) -> Result<usize, Error> {
    if pattern.is_empty() {
        return Err(Error::EmptyWord("count_occurrences pattern"));
    }
    if pattern.len() > text.len() {
        return Ok(0);
    }
    Ok(text.windows(pattern.len()).filter(|w| *w == pattern).count())
}

pub fn contains(text: &[Letter], pattern: &[Letter]) -> bool {
    pattern.is_empty() || text.windows(pattern.len()).any(|w| w == pattern)
}

/// All nonempty factors of `word` of length at most `max_len`.
pub fn subwords(word: &[Letter], max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for len in 1..=max_len.min(word.len()) {
        for w in word.windows(len) {
            out.insert(Word::from(w));
        }
    }
    out
}

/// Smallest period of a nonempty word.
pub fn smallest_period(word: &[Letter]) -> usize {
    let n = word.len();
    // prefix function
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && word[i] != word[k] {
            k = pi[k - 1];
        }
        if word[i] == word[k] {
            k += 1;
        }
        pi[i] = k;
    }
    n - pi.last().copied().unwrap_or(0)
}

/// Lexicographically least rotation.
pub fn least_rotation(word: &[Letter]) -> Word {
    (0..word.len())
        .map(|i| {
            let mut r = word[i..].to_vec();
            r.extend_from_slice(&word[..i]);
            Word::from(r)
        })
        .min()
        .unwrap_or_default()
}
