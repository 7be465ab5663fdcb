//! The factor language `W(S)`: all factors of all iterates `S^n(a)`.
//!
//! Factors are computed one length at a time. For a fixed length `n` the set
//! `W_n` is the closure of a finite seed under "take the length-`n` factors of
//! `S(y)` that start inside the image of `y`'s first letter". The seed holds
//! the length-`n` factors of the first iterate `S^j(a)` of length at least `n`,
//! and all length-`n` factors of `S(s)` for every length-`n` suffix `s` of a
//! later iterate (the suffix orbit is eventually periodic). Factors of later
//! iterates are then covered: a factor starting in the image of a letter that
//! is followed by at least `n - 1` letters sits in the image of a length-`n`
//! factor's first letter, and the remaining ones sit in the image of the
//! length-`n` suffix.

mod ops;

pub(crate) use ops::covering_length;
pub use ops::{find_power, palindromes, repetitivity_function, return_words, Repetitivity, ReturnWords};

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::error::Error;
use crate::par::Execution;
use crate::substitution::Substitution;
use crate::words::{contains, Letter, Word};

/// Where a factor was found: it is a factor of `S^power(letter)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub letter: Letter,
    pub power: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureLimits {
    /// Closure rounds (applications of `S`) per length.
    pub max_rounds: usize,
    /// Total words over all lengths.
    pub max_words: usize,
    /// Iterations of a single letter while seeding one length.
    pub max_seed_steps: usize,
}

impl Default for ClosureLimits {
    fn default() -> Self {
        Self { max_rounds: 64, max_words: 1_000_000, max_seed_steps: 100_000 }
    }
}

/// The factors of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub length: usize,
    pub words: BTreeMap<Word, Provenance>,
    pub rounds: usize,
    pub saturated: bool,
}

impl Layer {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.words.contains_key(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.keys()
    }
}

/// Factors of length exactly `n` (`n >= 1`).
pub fn factors_of_length(subst: &Substitution, n: usize, limits: &ClosureLimits) -> Layer {
    assert!(n >= 1, "factor length must be positive");
    let mut words: BTreeMap<Word, Provenance> = BTreeMap::new();
    let mut queue: VecDeque<(Word, usize)> = VecDeque::new();
    let mut saturated = true;

    fn add(
        w: &[Letter],
        prov: Provenance,
        words: &mut BTreeMap<Word, Provenance>,
        queue: &mut VecDeque<(Word, usize)>,
        round: usize,
    ) {
        if !words.contains_key(w) {
            words.insert(Word::from(w), prov);
            queue.push_back((Word::from(w), round));
        }
    }

    'letters: for a in subst.letters() {
        let mut w = Word::single(a);
        let mut seen: HashSet<Word> = HashSet::new();
        let mut j = 0usize;
        while w.len() < n {
            if !seen.insert(w.clone()) {
                continue 'letters;
            }
            w = subst.apply(&w);
            j += 1;
            if j > limits.max_seed_steps {
                saturated = false;
                continue 'letters;
            }
        }
        for f in w.windows(n) {
            add(f, Provenance { letter: a, power: j }, &mut words, &mut queue, 0);
        }
        // suffix orbit
        let mut suffix = Word::from(&w[w.len() - n..]);
        let mut seen_suffix: HashSet<Word> = HashSet::new();
        let mut power = j;
        while seen_suffix.insert(suffix.clone()) {
            let image = subst.apply(&suffix);
            power += 1;
            for f in image.windows(n) {
                add(f, Provenance { letter: a, power }, &mut words, &mut queue, 0);
            }
            suffix = Word::from(&image[image.len() - n..]);
            if seen_suffix.len() > limits.max_seed_steps {
                saturated = false;
                break;
            }
        }
    }

    let mut rounds = 0;
    while let Some((y, round)) = queue.pop_front() {
        if round >= limits.max_rounds || words.len() > limits.max_words {
            saturated = false;
            break;
        }
        rounds = rounds.max(round + 1);
        let prov = words[&y];
        let first = subst.image(y[0]).len();
        let image = subst.apply(&y);
        for start in 0..first {
            if start + n > image.len() {
                break;
            }
            let next = Provenance { letter: prov.letter, power: prov.power + 1 };
            add(&image[start..start + n], next, &mut words, &mut queue, round + 1);
        }
    }
    Layer { length: n, words, rounds, saturated }
}

/// Options for [`factor_language`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosureOptions {
    pub limits: ClosureLimits,
    pub execution: Execution,
}

/// The words of `W(S)` of length `1..=max_length`.
#[derive(Debug, Clone)]
pub struct FactorSet {
    layers: Vec<Layer>,
    saturated: bool,
}

impl FactorSet {
    pub fn max_length(&self) -> usize {
        self.layers.len()
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    /// Total number of closure rounds used by the deepest layer.
    pub fn rounds(&self) -> usize {
        self.layers.iter().map(|l| l.rounds).max().unwrap_or(0)
    }

    pub fn word_count(&self) -> usize {
        self.layers.iter().map(Layer::len).sum()
    }

    pub fn require_saturated(&self) -> Result<(), Error> {
        if self.saturated {
            Ok(())
        } else {
            Err(Error::Unsaturated { rounds: self.rounds(), words: self.word_count() })
        }
    }

    /// Factors of length `n`, `1 <= n <= max_length`.
    pub fn layer(&self, n: usize) -> &Layer {
        &self.layers[n - 1]
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn words_of_length(&self, n: usize) -> impl Iterator<Item = &Word> {
        self.layers.get(n.wrapping_sub(1)).into_iter().flat_map(|l| l.words.keys())
    }

    /// Factor complexity `p(n)`.
    pub fn complexity(&self, n: usize) -> usize {
        self.layer(n).len()
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        !w.is_empty() && w.len() <= self.max_length() && self.layer(w.len()).contains(w)
    }

    /// Membership with an explicit depth check.
    pub fn member(&self, w: &[Letter]) -> Result<bool, Error> {
        if w.len() > self.max_length() {
            return Err(Error::TooShallow { requested: w.len(), available: self.max_length() });
        }
        Ok(self.contains(w))
    }

    pub fn provenance(&self, w: &[Letter]) -> Option<Provenance> {
        self.layers.get(w.len().wrapping_sub(1))?.words.get(w).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.layers.iter().flat_map(|l| l.words.keys())
    }

    /// Grows the set to `new_max` (no-op when already deep enough).
    pub fn extend_to(&mut self, subst: &Substitution, new_max: usize, options: &ClosureOptions) {
        let have = self.layers.len();
        if new_max <= have {
            return;
        }
        let new = options
            .execution
            .map_range(have + 1..new_max + 1, |n| factors_of_length(subst, n, &options.limits));
        self.saturated &= new.iter().all(|l| l.saturated);
        self.layers.extend(new);
        if self.word_count() > options.limits.max_words {
            self.saturated = false;
        }
    }

    /// Re-checks every provenance certificate by direct iteration.
    pub fn verify_certificates(&self, subst: &Substitution) -> Result<(), Error> {
        let mut cache: BTreeMap<(Letter, usize), Word> = BTreeMap::new();
        for w in self.iter() {
            let p = self.provenance(w).expect("every word has a provenance");
            let image = cache.entry((p.letter, p.power)).or_insert_with(|| subst.iterate(&[p.letter], p.power));
            if !contains(image, w) {
                return Err(Error::Validation(format!(
                    "{} is not a factor of S^{}({})",
                    subst.render(w),
                    p.power,
                    subst.alphabet().symbol(p.letter).name
                )));
            }
        }
        Ok(())
    }
}

/// `W(S)` restricted to lengths `1..=max_length`.
pub fn factor_language(subst: &Substitution, max_length: usize, options: &ClosureOptions) -> FactorSet {
    let mut f = FactorSet { layers: Vec::new(), saturated: true };
    f.extend_to(subst, max_length, options);
    f
}
