use std::collections::HashMap;

use crate::error::Error;
use crate::words::{Alphabet, Letter, Word};

use super::{mask_letters, Substitution};

/// Bounded letters `B` (`|S^n(a)|` stays bounded) and growing letters `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetSplit {
    pub bounded: u64,
    pub growing: u64,
    /// Letters with `|S^k(c)| = 1` for every `k`.
    pub eternally_single: u64,
    /// Largest preperiod + period of the letter-set sequences seen.
    pub stabilization_depth: usize,
}

impl AlphabetSplit {
    pub fn is_bounded(&self, a: Letter) -> bool {
        self.bounded & (1 << a) != 0
    }

    pub fn is_growing(&self, a: Letter) -> bool {
        self.growing & (1 << a) != 0
    }

    pub fn bounded_letters(&self) -> impl Iterator<Item = Letter> {
        mask_letters(self.bounded)
    }

    pub fn growing_letters(&self) -> impl Iterator<Item = Letter> {
        mask_letters(self.growing)
    }

    /// `w` with every bounded letter removed.
    pub fn erase(&self, word: &[Letter]) -> Word {
        word.iter().copied().filter(|&l| self.is_growing(l)).collect()
    }
}

/// Eventually periodic sequence `mask, step(mask), step^2(mask), ...`.
/// Returns (preperiod, period, the sets on the cycle).
pub(crate) fn letter_set_cycle(subst: &Substitution, start: u64) -> (usize, usize, Vec<u64>) {
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut seq = Vec::new();
    let mut m = start;
    loop {
        if let Some(&i) = seen.get(&m) {
            return (i, seq.len() - i, seq[i..].to_vec());
        }
        seen.insert(m, seq.len());
        seq.push(m);
        m = subst.step_mask(m);
    }
}

/// Computes `B` and `C` exactly.
///
/// The eternally-single letters are the greatest fixed point of
/// `{c : |S(c)| = 1 and S(c) is eternally single}`; a letter is bounded iff
/// every letter set on the eventual cycle of `letters(S^n(a))` consists of
/// eternally-single letters.
pub fn bounded_letters(subst: &Substitution) -> AlphabetSplit {
    let mut single: u64 = subst.letters().filter(|&a| subst.image(a).len() == 1).fold(0, |m, a| m | (1 << a));
    loop {
        let next = mask_letters(single)
            .filter(|&a| single & (1 << subst.image(a)[0]) != 0)
            .fold(0u64, |m, a| m | (1 << a));
        if next == single {
            break;
        }
        single = next;
    }
    let mut bounded = 0u64;
    let mut depth = 0;
    for a in subst.letters() {
        let (pre, period, cycle) = letter_set_cycle(subst, 1 << a);
        depth = depth.max(pre + period);
        if cycle.iter().all(|&m| m & !single == 0) {
            bounded |= 1 << a;
        }
    }
    AlphabetSplit {
        bounded,
        growing: subst.full_mask() & !bounded,
        eternally_single: single,
        stabilization_depth: depth,
    }
}

/// `S~` on the growing letters: `c -> erase(S(c))`.
#[derive(Debug, Clone)]
pub struct ReducedSubstitution {
    pub base: Substitution,
    /// Original letter -> letter of `base` (growing letters only).
    pub projection: Vec<Option<Letter>>,
    /// Letter of `base` -> original letter.
    pub embedding: Vec<Letter>,
}

impl ReducedSubstitution {
    /// `tilde(w)` expressed in the letters of `base`.
    pub fn project(&self, word: &[Letter]) -> Word {
        word.iter().filter_map(|&l| self.projection[l as usize]).collect()
    }

    pub fn embed(&self, word: &[Letter]) -> Word {
        word.iter().map(|&l| self.embedding[l as usize]).collect()
    }
}

pub fn reduced_substitution(subst: &Substitution, split: &AlphabetSplit) -> Result<ReducedSubstitution, Error> {
    let embedding: Vec<Letter> = split.growing_letters().collect();
    if embedding.is_empty() {
        return Err(Error::NoGrowingLetters);
    }
    let mut projection = vec![None; subst.size()];
    for (i, &c) in embedding.iter().enumerate() {
        projection[c as usize] = Some(i as Letter);
    }
    let symbols = embedding.iter().map(|&c| subst.alphabet().symbol(c).clone()).collect();
    let alphabet = Alphabet::with_options(symbols, true)?;
    let project = |w: &[Letter]| -> Word { w.iter().filter_map(|&l| projection[l as usize]).collect() };
    let rules: Vec<Word> = embedding.iter().map(|&c| project(subst.image(c))).collect();
    // A growing letter always has a growing letter in its image.
    let base = Substitution::new(alphabet, rules, subst.name().map(|n| format!("{n} (reduced)")))?;
    let reduced = ReducedSubstitution { base, projection, embedding };
    for &c in &reduced.embedding {
        let mut w = Word::single(c);
        let mut t = reduced.project(&w);
        for n in 1..=6 {
            w = subst.apply(&w);
            t = reduced.base.apply(&t);
            if reduced.project(&w) != t {
                return Err(Error::Validation(format!(
                    "erasure does not intertwine at letter {} and power {n}",
                    subst.alphabet().symbol(c).name
                )));
            }
        }
    }
    Ok(reduced)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primitivity {
    /// `M^r > 0` with `r` minimal.
    Primitive { r: usize },
    /// `b` does not occur in `S^bound(a)`.
    NotPrimitive { a: Letter, b: Letter, bound: usize },
}

impl Primitivity {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Primitivity::Primitive { .. })
    }
}

/// Primitivity via positivity of boolean powers of the abelianization, up to
/// the Wielandt bound `(n-1)^2 + 1`.
pub fn is_primitive(subst: &Substitution) -> Primitivity {
    let n = subst.size();
    let bound = (n - 1) * (n - 1) + 1;
    let full = subst.full_mask();
    // rows[a] = letters of S^r(a)
    let mut rows: Vec<u64> = subst.letters().map(|a| subst.image_mask(a)).collect();
    for r in 1..=bound {
        if rows.iter().all(|&m| m == full) {
            return Primitivity::Primitive { r };
        }
        if r < bound {
            rows = rows.iter().map(|&m| subst.step_mask(m)).collect();
        }
    }
    let (a, m) = rows.iter().enumerate().find(|(_, &m)| m != full).expect("some row is not full");
    let b = (0..n).find(|&b| m & (1 << b) == 0).expect("missing letter");
    Primitivity::NotPrimitive { a: a as Letter, b: b as Letter, bound }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &Substitution, mask: u64) -> String {
        s.describe_mask(mask)
    }

    #[test]
    fn split_examples() {
        let s = Substitution::from_strs("ab", &["abaa", "b"]).unwrap();
        let sp = bounded_letters(&s);
        assert_eq!((names(&s, sp.bounded), names(&s, sp.growing)), ("b".into(), "a".into()));

        let s = Substitution::from_strs("01", &["101", "1"]).unwrap();
        let sp = bounded_letters(&s);
        assert_eq!((names(&s, sp.bounded), names(&s, sp.growing)), ("1".into(), "0".into()));

        let s = Substitution::from_strs("ab", &["b", "a"]).unwrap();
        let sp = bounded_letters(&s);
        assert_eq!(names(&s, sp.bounded), "ab");
        assert_eq!(sp.growing, 0);
    }

    #[test]
    fn split_agrees_with_direct_iteration() {
        // c -> de is bounded (length 2 forever), a grows linearly
        let s = Substitution::from_strs("abcde", &["ab", "b", "de", "e", "d"]).unwrap();
        let sp = bounded_letters(&s);
        for a in s.letters() {
            let l10 = s.iterate(&[a], 10).len();
            let l11 = s.iterate(&[a], 11).len();
            assert_eq!(sp.is_bounded(a), l10 == l11 && l10 < 4, "letter {a}");
        }
        assert_eq!(names(&s, sp.eternally_single), "bde");
    }

    #[test]
    fn b_is_invariant() {
        let s = Substitution::from_strs("abc", &["acb", "c", "b"]).unwrap();
        let sp = bounded_letters(&s);
        for b in sp.bounded_letters() {
            assert_eq!(s.image_mask(b) & sp.growing, 0);
        }
    }

    #[test]
    fn reduced_examples() {
        let s = Substitution::from_strs("ab", &["abaa", "b"]).unwrap();
        let r = reduced_substitution(&s, &bounded_letters(&s)).unwrap();
        assert_eq!(r.base.render(r.base.image(0)), "aaa");

        let f = Substitution::from_strs("ab", &["ab", "a"]).unwrap();
        let r = reduced_substitution(&f, &bounded_letters(&f)).unwrap();
        assert_eq!(r.base.rules(), f.rules());

        // growing letter whose reduced image does not grow
        let s = Substitution::from_strs("01", &["101", "1"]).unwrap();
        let r = reduced_substitution(&s, &bounded_letters(&s)).unwrap();
        assert_eq!(r.base.render(r.base.image(0)), "0");

        let swap = Substitution::from_strs("ab", &["b", "a"]).unwrap();
        assert!(matches!(reduced_substitution(&swap, &bounded_letters(&swap)), Err(Error::NoGrowingLetters)));
    }

    #[test]
    fn primitivity_examples() {
        let f = Substitution::from_strs("ab", &["ab", "a"]).unwrap();
        assert_eq!(is_primitive(&f), Primitivity::Primitive { r: 2 });
        let s = Substitution::from_strs("01", &["10", "1"]).unwrap();
        assert_eq!(is_primitive(&s), Primitivity::NotPrimitive { a: 1, b: 0, bound: 2 });
        let d = Substitution::from_strs("a", &["aa"]).unwrap();
        assert_eq!(is_primitive(&d), Primitivity::Primitive { r: 1 });
    }

    #[test]
    fn wielandt_extremal_matrix() {
        // the Wielandt matrix on 4 letters needs exactly (n-1)^2 + 1 = 10 steps
        let s = Substitution::from_strs("abcd", &["b", "c", "d", "ab"]).unwrap();
        assert_eq!(is_primitive(&s), Primitivity::Primitive { r: 10 });
    }
}
