//! Substitutions (non-erasing morphisms of the free monoid), their
//! abelianization, the bounded/growing alphabet split, the reduced
//! substitution, primitivity and Perron growth constants.

mod compat;
mod growth;
mod split;

pub use compat::{check_compatibility, Compatibility, CompatibilityEvidence, Side};
pub use growth::{perron_growth, perron_root, GrowthEstimate};
pub use split::{bounded_letters, is_primitive, reduced_substitution, AlphabetSplit, Primitivity, ReducedSubstitution};

use std::fmt;

use crate::error::Error;
use crate::words::{letter_mask, Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    alphabet: Alphabet,
    rules: Vec<Word>,
    name: Option<String>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, rules: Vec<Word>, name: Option<String>) -> Result<Self, Error> {
        if rules.len() != alphabet.len() {
            return Err(Error::Definition(format!(
                "{} rules for an alphabet of {} letters",
                rules.len(),
                alphabet.len()
            )));
        }
        for (a, rule) in rules.iter().enumerate() {
            if rule.is_empty() {
                return Err(Error::ErasingRule(alphabet.symbol(a as Letter).name));
            }
            if let Some(&bad) = rule.iter().find(|&&l| l as usize >= alphabet.len()) {
                return Err(Error::Definition(format!("rule uses letter index {bad} outside the alphabet")));
            }
        }
        Ok(Self { alphabet, rules, name })
    }

    /// Convenience constructor: letters are the characters of `chars` (values
    /// 0, 1, ...), `images[i]` is the image of the i-th character.
    pub fn from_strs(chars: &str, images: &[&str]) -> Result<Self, Error> {
        let alphabet = Alphabet::from_chars(chars)?;
        let rules = images
            .iter()
            .map(|s| alphabet.parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(alphabet, rules, None)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_alphabet(mut self, alphabet: Alphabet) -> Result<Self, Error> {
        if alphabet.len() != self.alphabet.len() {
            return Err(Error::Definition("alphabet size mismatch".into()));
        }
        self.alphabet = alphabet;
        Ok(self)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn size(&self) -> usize {
        self.rules.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.rules.len()).map(|i| i as Letter)
    }

    pub fn image(&self, letter: Letter) -> &Word {
        &self.rules[letter as usize]
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    pub fn max_image_len(&self) -> usize {
        self.rules.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    pub fn apply(&self, word: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(word.len() * self.max_image_len());
        for &l in word {
            out.extend_from_slice(&self.rules[l as usize]);
        }
        Word::from(out)
    }

    /// Prefix of length at most `limit` of `S(word)`.
    pub fn apply_prefix(&self, word: &[Letter], limit: usize) -> Word {
        let mut out = Vec::with_capacity(limit.min(word.len() * self.max_image_len()));
        for &l in word {
            if out.len() >= limit {
                break;
            }
            out.extend_from_slice(&self.rules[l as usize]);
        }
        out.truncate(limit);
        Word::from(out)
    }

    pub fn iterate(&self, word: &[Letter], n: usize) -> Word {
        let mut w = Word::from(word);
        for _ in 0..n {
            w = self.apply(&w);
        }
        w
    }

    /// The substitution `S^p` on the same alphabet.
    pub fn power(&self, p: usize) -> Substitution {
        let rules = self.letters().map(|a| self.iterate(&[a], p)).collect();
        Substitution { alphabet: self.alphabet.clone(), rules, name: None }
    }

    pub fn image_mask(&self, letter: Letter) -> u64 {
        self.rules[letter as usize].letter_mask()
    }

    /// Letters of `S(w)` for any `w` whose letter set is `mask`.
    pub fn step_mask(&self, mask: u64) -> u64 {
        let mut out = 0;
        for a in self.letters() {
            if mask & (1 << a) != 0 {
                out |= self.image_mask(a);
            }
        }
        out
    }

    /// Letters occurring in `S^n(letter)` for some `n >= 1`.
    pub fn reachable_from(&self, letter: Letter) -> u64 {
        let mut mask = self.image_mask(letter);
        loop {
            let next = mask | self.step_mask(mask);
            if next == mask {
                return mask;
            }
            mask = next;
        }
    }

    pub fn full_mask(&self) -> u64 {
        if self.size() == 64 {
            u64::MAX
        } else {
            (1u64 << self.size()) - 1
        }
    }

    pub fn abelianization(&self) -> AbelianizationMatrix {
        let n = self.size();
        let mut entries = vec![0u128; n * n];
        for a in 0..n {
            for &b in self.rules[a].iter() {
                entries[a * n + b as usize] += 1;
            }
        }
        AbelianizationMatrix { n, entries }
    }

    /// Letter-count vector of `word`.
    pub fn counts(&self, word: &[Letter]) -> Vec<u128> {
        let mut c = vec![0u128; self.size()];
        for &l in word {
            c[l as usize] += 1;
        }
        c
    }

    /// `|S^n(word)|` for `n = 0..=n_max`, exact, via the abelianization.
    pub fn lengths(&self, word: &[Letter], n_max: usize) -> Result<Vec<u128>, Error> {
        let m = self.abelianization();
        let mut counts = self.counts(word);
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(counts.iter().sum());
        for power in 1..=n_max {
            counts = m.left_apply(&counts).ok_or(Error::LengthOverflow { power })?;
            let total = counts
                .iter()
                .try_fold(0u128, |acc, &c| acc.checked_add(c))
                .ok_or(Error::LengthOverflow { power })?;
            out.push(total);
        }
        Ok(out)
    }

    pub fn length_of_power(&self, word: &[Letter], n: usize) -> Result<u128, Error> {
        Ok(*self.lengths(word, n)?.last().expect("nonempty"))
    }

    /// First `length` letters of the one-sided fixed point generated by `e`.
    ///
    /// Requires some power `S^p` (p at most the alphabet size) whose image of
    /// `e` starts with `e` and has length at least two; that power is iterated.
    pub fn fixed_point_prefix(&self, e: Letter, length: usize) -> Result<Word, Error> {
        let p = self.prefix_power(e).ok_or(Error::NoPrefixFixpoint(self.alphabet.symbol(e).name))?;
        let t = if p == 1 { self.clone() } else { self.power(p) };
        let mut w = Word::single(e);
        while w.len() < length {
            w = t.apply_prefix(&w, length);
        }
        Ok(Word::from(&w[..length]))
    }

    /// Smallest `p` with `S^p(e)` starting with `e` and `|S^p(e)| >= 2`.
    pub fn prefix_power(&self, e: Letter) -> Option<usize> {
        let mut first = e;
        for p in 1..=self.size() {
            first = self.rules[first as usize][0];
            if first == e {
                let len = self.length_of_power(&[e], p).ok()?;
                return (len >= 2).then_some(p);
            }
        }
        None
    }

    /// The same substitution with letters renamed by `perm` (old -> new).
    pub fn relabel(&self, perm: &[Letter]) -> Result<Substitution, Error> {
        let n = self.size();
        if perm.len() != n {
            return Err(Error::InvalidArgument("permutation size mismatch".into()));
        }
        let mut symbols = vec![None; n];
        let mut rules = vec![Word::new(); n];
        for a in 0..n {
            let new = perm[a] as usize;
            if new >= n || symbols[new].is_some() {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            symbols[new] = Some(self.alphabet.symbol(a as Letter).clone());
            rules[new] = self.rules[a].iter().map(|&l| perm[l as usize]).collect();
        }
        let alphabet = Alphabet::with_options(symbols.into_iter().map(Option::unwrap).collect(), true)?;
        Substitution::new(alphabet, rules, self.name.clone())
    }

    pub fn render(&self, word: &[Letter]) -> String {
        self.alphabet.render(word)
    }

    pub fn describe_mask(&self, mask: u64) -> String {
        self.letters()
            .filter(|a| mask & (1 << a) != 0)
            .map(|a| self.alphabet.symbol(a).name)
            .collect()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters()
            .map(|a| format!("{}->{}", self.alphabet.symbol(a).name, self.render(self.image(a))))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// `entries[a][b] = #_b(S(a))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianizationMatrix {
    n: usize,
    entries: Vec<u128>,
}

impl AbelianizationMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> u128 {
        self.entries[a * self.n + b]
    }

    pub fn row_sums(&self) -> Vec<u128> {
        self.entries.chunks(self.n).map(|r| r.iter().sum()).collect()
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let n = self.n;
        let mut entries = vec![0u128; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let add = x.checked_mul(other.get(k, j))?;
                    entries[i * n + j] = entries[i * n + j].checked_add(add)?;
                }
            }
        }
        Some(Self { n, entries })
    }

    pub fn checked_pow(&self, mut exp: usize) -> Option<Self> {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Some(acc)
    }

    /// Row vector times matrix: counts of `S(w)` from counts of `w`.
    pub fn left_apply(&self, counts: &[u128]) -> Option<Vec<u128>> {
        let n = self.n;
        let mut out = vec![0u128; n];
        for (a, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for b in 0..n {
                out[b] = out[b].checked_add(c.checked_mul(self.get(a, b))?)?;
            }
        }
        Some(out)
    }

    pub fn as_f64_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(|r| r.iter().map(|&x| x as f64).collect()).collect()
    }
}

/// Information gathered while validating a definition.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Letters with `|S^n(e)| -> oo`.
    pub growing: Vec<Letter>,
    pub candidates: Vec<CandidateLetter>,
    /// Smallest growing letter reaching the whole alphabet, if any.
    pub witness: Option<Letter>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateLetter {
    pub letter: Letter,
    /// Every letter of the alphabet occurs in some `S^n(letter)`, `n >= 1`.
    pub reaches_all: bool,
    /// `{letter}` together with everything reachable from it.
    pub pruned_alphabet: u64,
}

/// Checks the growth and occurrence conditions of a substitution.
pub fn validate(subst: &Substitution) -> Result<ValidationReport, Error> {
    let split = bounded_letters(subst);
    let growing: Vec<Letter> = subst.letters().filter(|&a| split.is_growing(a)).collect();
    if growing.is_empty() {
        return Err(Error::EmptySubshift);
    }
    let full = subst.full_mask();
    let candidates: Vec<CandidateLetter> = growing
        .iter()
        .map(|&e| {
            let reach = subst.reachable_from(e);
            CandidateLetter { letter: e, reaches_all: reach == full, pruned_alphabet: reach | (1 << e) }
        })
        .collect();
    let witness = candidates.iter().find(|c| c.reaches_all).map(|c| c.letter);
    Ok(ValidationReport { growing, candidates, witness })
}

pub(crate) fn mask_letters(mask: u64) -> impl Iterator<Item = Letter> {
    (0..64u8).filter(move |&a| mask & (1u64 << a) != 0)
}

pub(crate) fn word_mask(word: &[Letter]) -> u64 {
    letter_mask(word)
}
