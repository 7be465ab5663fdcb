//! Partial decision of `W(S) = W(Omega(S))`: every factor of every iterate
//! also occurs in some two-sided sequence of the subshift.

use crate::language::{factor_language, ClosureOptions, FactorSet};
use crate::words::{contains, Letter, Word};

use super::{word_mask, Substitution};

/// Length of the word in which the images `S^r(c)` are looked up.
const SAMPLE_MIN: usize = 4096;
const SAMPLE_MAX: usize = 1 << 20;
/// Longest factor tried as a two-sided seed.
const SEED_MAX_LEN: usize = 4;
/// Depth of the factor set used to look for words without extensions.
const EXTENSION_DEPTH: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompatibilityEvidence {
    /// `S^power(letter)` starts with `letter`, the letter recurs in the
    /// one-sided fixed point and that fixed point contains every `S^r(c)`.
    PrefixFixpoint { letter: Letter, power: usize },
    /// `S^power(seed) = y seed z` with `y`, `z` nonempty: the two-sided limit
    /// is a point of the subshift containing every `S^r(c)`.
    InteriorSeed { seed: Word, power: usize },
    /// A factor that cannot be extended on one side inside `W(S)`.
    MissingExtension { word: Word, side: Side },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compatibility {
    Holds(CompatibilityEvidence),
    Fails(CompatibilityEvidence),
    Unknown { depth: usize },
}

impl Compatibility {
    pub fn holds(&self) -> bool {
        matches!(self, Compatibility::Holds(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, Compatibility::Fails(_))
    }
}

/// Tries powers `S^p`, `p <= depth`, for a certificate either way.
pub fn check_compatibility(subst: &Substitution, depth: usize) -> Compatibility {
    let seeds = factor_language(subst, SEED_MAX_LEN, &ClosureOptions::default());
    for p in 1..=depth {
        let t = subst.power(p);
        let images: Vec<Word> = (0..p)
            .flat_map(|r| subst.letters().map(move |c| (r, c)))
            .map(|(r, c)| subst.iterate(&[c], r))
            .collect();
        let longest = images.iter().map(|w| w.len()).max().unwrap_or(1);
        let sample_len = (4 * longest).clamp(SAMPLE_MIN, SAMPLE_MAX);
        let covers = |sample: &[Letter]| images.iter().all(|w| contains(sample, w));

        for e in subst.letters() {
            if let Some(sample) = recurrent_prefix(&t, e, sample_len) {
                if covers(&sample) {
                    return Compatibility::Holds(CompatibilityEvidence::PrefixFixpoint { letter: e, power: p });
                }
            }
        }
        for x in seeds.iter() {
            if let Some(sample) = interior_orbit(&t, x, sample_len) {
                if covers(&sample) {
                    return Compatibility::Holds(CompatibilityEvidence::InteriorSeed { seed: x.clone(), power: p });
                }
            }
        }
    }
    let f = factor_language(subst, EXTENSION_DEPTH, &ClosureOptions::default());
    if let Some((word, side)) = missing_extension(&f) {
        return Compatibility::Fails(CompatibilityEvidence::MissingExtension { word, side });
    }
    Compatibility::Unknown { depth }
}

/// Prefix of the fixed point of `t` at `e`, if `t(e) = e x` with `x` nonempty
/// and `e` occurring again after position 0.
fn recurrent_prefix(t: &Substitution, e: Letter, len: usize) -> Option<Word> {
    let image = t.image(e);
    if image[0] != e || image.len() < 2 {
        return None;
    }
    let mut mask = word_mask(&image[1..]);
    loop {
        let next = mask | t.step_mask(mask);
        if next == mask {
            break;
        }
        mask = next;
    }
    if mask & (1 << e) == 0 {
        return None;
    }
    let mut w = Word::single(e);
    while w.len() < len {
        w = t.apply_prefix(&w, len);
    }
    Some(w)
}

/// `t^n(x)` for the first `n` reaching `len`, if `t(x) = y x z` with `y`, `z`
/// nonempty.
fn interior_orbit(t: &Substitution, x: &[Letter], len: usize) -> Option<Word> {
    let image = t.apply(x);
    let inner = (1..image.len().saturating_sub(x.len())).any(|i| &image[i..i + x.len()] == x);
    if !inner {
        return None;
    }
    let mut w = image;
    while w.len() < len {
        w = t.apply(&w);
    }
    Some(w)
}

/// Shortest (then least) factor lacking a left or right extension one level up.
pub(crate) fn missing_extension(f: &FactorSet) -> Option<(Word, Side)> {
    if !f.saturated() {
        return None;
    }
    for n in 1..f.max_length() {
        let longer = f.layer(n + 1);
        let mut right = std::collections::BTreeSet::new();
        let mut left = std::collections::BTreeSet::new();
        for w in longer.iter() {
            left.insert(&w[1..]);
            right.insert(&w[..n]);
        }
        for w in f.words_of_length(n) {
            if !right.contains(w.as_slice()) {
                return Some((w.clone(), Side::Right));
            }
            if !left.contains(w.as_slice()) {
                return Some((w.clone(), Side::Left));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(chars: &str, rules: &[&str]) -> Compatibility {
        check_compatibility(&Substitution::from_strs(chars, rules).unwrap(), 8)
    }

    #[test]
    fn remark_examples() {
        assert_eq!(
            check("01", &["10", "1"]),
            Compatibility::Fails(CompatibilityEvidence::MissingExtension { word: Word::from(vec![0]), side: Side::Right })
        );
        assert_eq!(
            check("01", &["101", "1"]),
            Compatibility::Holds(CompatibilityEvidence::InteriorSeed { seed: Word::from(vec![0]), power: 1 })
        );
    }

    #[test]
    fn prefix_fixpoints() {
        assert_eq!(
            check("ab", &["ab", "a"]),
            Compatibility::Holds(CompatibilityEvidence::PrefixFixpoint { letter: 0, power: 1 })
        );
        assert_eq!(
            check("ab", &["ba", "ab"]),
            Compatibility::Holds(CompatibilityEvidence::PrefixFixpoint { letter: 0, power: 2 })
        );
    }

    #[test]
    fn prefix_without_recurrence_is_not_enough() {
        // a -> ab, b -> bb: the fixed point ab^oo has "a" only once, and "a"
        // has no left extension
        let c = check("ab", &["ab", "bb"]);
        assert_eq!(
            c,
            Compatibility::Fails(CompatibilityEvidence::MissingExtension { word: Word::from(vec![0]), side: Side::Left })
        );
    }

    #[test]
    fn images_must_be_covered() {
        // two disjoint components: no single point carries every image, and
        // no factor is blocked either
        let c = check("abc", &["ab", "a", "cc"]);
        assert_eq!(c, Compatibility::Unknown { depth: 8 });
    }
}
