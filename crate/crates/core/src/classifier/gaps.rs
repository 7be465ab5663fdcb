//! The bounded-gap condition for a letter `e`.
//!
//! `e` occurs with bounded gaps iff
//! - for every growing letter `c`, `e` occurs in `S^n(c)` for all large `n`
//!   (equivalently: every letter set on the eventual cycle of
//!   `letters(S^n(c))` contains `e`), and
//! - the words of `W(S)` made of bounded letters have bounded length.
//!
//! Both failures produce arbitrarily long `e`-free factors. Conversely, with
//! `K = max k(c)` and `beta` the longest bounded-letter factor, every factor
//! longer than `(beta + 2) * max_a |S^K(a)|` covers the full image of a growing
//! letter under `S^K` and hence contains `e`.
//!
//! Maximal runs of bounded letters are tracked as triples
//! `(left growing letter or edge, run, right growing letter or edge)`. Applying
//! `S` maps a triple to a single triple, so every run lies on the orbit of one
//! of finitely many seeds. The context pair evolves on its own; runs grow
//! without bound exactly when the context cycle adds a nonempty piece.

use std::collections::HashSet;

use crate::error::Error;
use crate::language::{covering_length, factor_language, ClosureOptions, Provenance};
use crate::substitution::{AlphabetSplit, Substitution};
use crate::words::{Letter, Word};

/// Length of the `e`-free witness reported for a violation.
pub const WITNESS_LENGTH: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct GapOptions {
    /// Distinct run triples visited before giving up.
    pub max_triples: usize,
    /// Longest run tracked before giving up.
    pub max_run: usize,
    /// Deepest factor set used to minimize `kappa`.
    pub max_scan: usize,
    pub closure: ClosureOptions,
}

impl Default for GapOptions {
    fn default() -> Self {
        Self { max_triples: 1_000, max_run: 10_000, max_scan: 4_096, closure: ClosureOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BgCertificate {
    pub e: Letter,
    /// Every factor of length at least `kappa` contains `e`.
    pub kappa: usize,
    /// The a priori bound `kappa` was minimized from.
    pub kappa_upper: usize,
    /// `false` when the scan could not reach the minimum; `kappa` is then the
    /// a priori bound.
    pub kappa_minimized: bool,
    /// `(c, k)`: `e` occurs in `S^n(c)` for every `n >= k`.
    pub reachability: Vec<(Letter, usize)>,
    /// Longest factor made of bounded letters only.
    pub bblock_bound: usize,
}

impl BgCertificate {
    /// Recomputes the reachability witnesses and the `kappa` scan.
    pub fn verify(&self, subst: &Substitution, options: &ClosureOptions) -> Result<(), Error> {
        for &(c, k) in &self.reachability {
            let mut mask = 1u64 << c;
            let mut seen = HashSet::new();
            for _ in 0..k {
                mask = subst.step_mask(mask);
            }
            // every set from k on, up to the repeat
            while seen.insert(mask) {
                if mask & (1 << self.e) == 0 {
                    return Err(Error::Validation(format!("reachability witness fails for letter index {c}")));
                }
                mask = subst.step_mask(mask);
            }
        }
        if self.kappa_minimized {
            let f = factor_language(subst, self.kappa, options);
            f.require_saturated()?;
            if f.words_of_length(self.kappa).any(|w| !w.contains(&self.e)) {
                return Err(Error::Validation("a factor of length kappa avoids e".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapCause {
    /// `letters(S^n(letter))` misses `e` for infinitely many `n`.
    NeverProduced { letter: Letter },
    /// Runs of bounded letters between these neighbours grow without bound.
    GrowingBBlocks { left: Option<Letter>, right: Option<Letter> },
}

/// An `e`-free factor of length at least [`WITNESS_LENGTH`], found in
/// `S^power(letter)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapViolation {
    pub e: Letter,
    pub cause: GapCause,
    pub witness: Word,
    pub provenance: Provenance,
}

impl GapViolation {
    pub fn verify(&self, subst: &Substitution) -> Result<(), Error> {
        let image = subst.iterate(&[self.provenance.letter], self.provenance.power);
        if !crate::words::contains(&image, &self.witness) || self.witness.contains(&self.e) {
            return Err(Error::Validation("gap violation witness does not check".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapDecision {
    Yes(BgCertificate),
    No(GapViolation),
    Undecided { reason: String },
}

pub fn bounded_gaps(
    subst: &Substitution,
    split: &AlphabetSplit,
    e: Letter,
    options: &GapOptions,
) -> Result<GapDecision, Error> {
    if !split.is_growing(e) {
        return Err(Error::Precondition("the letter must grow under iteration".into()));
    }
    if subst.reachable_from(e) != subst.full_mask() {
        return Err(Error::Precondition("every letter must occur in some iterate of the letter".into()));
    }
    let reachability = match reachability(subst, split, e) {
        Ok(r) => r,
        Err((c, n, period)) => return Ok(GapDecision::No(never_produced(subst, e, c, n, period))),
    };
    let runs = RunAnalysis::new(subst, split);
    let beta = match runs.bound(options) {
        RunBound::Bounded(b) => b,
        RunBound::Pumping(v) => return Ok(GapDecision::No(GapViolation { e, ..v })),
        RunBound::Exceeded => {
            return Ok(GapDecision::Undecided {
                reason: format!(
                    "bounded-letter runs exceed {} triples or length {}",
                    options.max_triples, options.max_run
                ),
            })
        }
    };
    let beta = beta.max(bounded_orbit_length(subst, split));
    let k0 = reachability.iter().map(|&(_, k)| k).max().unwrap_or(0);
    let mut m = 0u128;
    for a in subst.letters() {
        m = m.max(subst.length_of_power(&[a], k0)?);
    }
    let kappa_upper = ((beta as u128 + 2) * m + 1).min(usize::MAX as u128) as usize;

    let mut depth = kappa_upper.min(16);
    let mut f = factor_language(subst, depth, &options.closure);
    let (kappa, kappa_minimized) = loop {
        if !f.saturated() {
            break (kappa_upper, false);
        }
        if let Some(k) = covering_length(&f, &[e]) {
            break (k, true);
        }
        if depth >= kappa_upper {
            return Err(Error::Validation(format!("no covering length below the bound {kappa_upper}")));
        }
        if depth >= options.max_scan {
            break (kappa_upper, false);
        }
        depth = (depth * 2).min(kappa_upper).min(options.max_scan);
        f.extend_to(subst, depth, &options.closure);
    };
    Ok(GapDecision::Yes(BgCertificate { e, kappa, kappa_upper, kappa_minimized, reachability, bblock_bound: beta }))
}

/// `(c, k(c))` for every growing `c`, or `(c, n, period)` with `e` missing
/// from `letters(S^n(c))` on the cycle.
fn reachability(subst: &Substitution, split: &AlphabetSplit, e: Letter) -> Result<Vec<(Letter, usize)>, (Letter, usize, usize)> {
    let mut out = Vec::new();
    for c in split.growing_letters() {
        let mut seq: Vec<u64> = Vec::new();
        let mut m = 1u64 << c;
        let start = loop {
            if let Some(i) = seq.iter().position(|&x| x == m) {
                break i;
            }
            seq.push(m);
            m = subst.step_mask(m);
        };
        let period = seq.len() - start;
        if let Some(j) = (start..seq.len()).find(|&j| seq[j] & (1 << e) == 0) {
            return Err((c, j, period));
        }
        let k = seq.iter().rposition(|&x| x & (1 << e) == 0).map_or(0, |j| j + 1);
        out.push((c, k));
    }
    Ok(out)
}

fn never_produced(subst: &Substitution, e: Letter, c: Letter, mut n: usize, period: usize) -> GapViolation {
    while subst.length_of_power(&[c], n).map_or(true, |l| l < WITNESS_LENGTH as u128) {
        n += period;
    }
    let mut w = Word::single(c);
    for _ in 0..n {
        w = subst.apply_prefix(&w, WITNESS_LENGTH);
    }
    GapViolation {
        e,
        cause: GapCause::NeverProduced { letter: c },
        witness: w,
        provenance: Provenance { letter: c, power: n },
    }
}

/// Longest `S^n(b)` over bounded `b`.
fn bounded_orbit_length(subst: &Substitution, split: &AlphabetSplit) -> usize {
    let mut best = 0;
    for b in split.bounded_letters() {
        let mut seen = HashSet::new();
        let mut w = Word::single(b);
        while seen.insert(w.clone()) {
            best = best.max(w.len());
            w = subst.apply(&w);
        }
    }
    best
}

type Triple = (Option<Letter>, Word, Option<Letter>);

struct Seed {
    triple: Triple,
    letter: Letter,
    power: usize,
}

enum RunBound {
    Bounded(usize),
    Pumping(GapViolation),
    Exceeded,
}

/// Shape of `S(c)` for a growing `c`: bounded prefix and suffix and the
/// outermost growing letters.
struct ImageShape {
    prefix: Word,
    suffix: Word,
    first: Letter,
    last: Letter,
}

struct RunAnalysis<'a> {
    subst: &'a Substitution,
    shapes: Vec<Option<ImageShape>>,
    seeds: Vec<Seed>,
}

impl<'a> RunAnalysis<'a> {
    fn new(subst: &'a Substitution, split: &AlphabetSplit) -> Self {
        let mut shapes: Vec<Option<ImageShape>> = (0..subst.size()).map(|_| None).collect();
        let mut seeds = Vec::new();
        for c in split.growing_letters() {
            let image = subst.image(c);
            let growing: Vec<usize> = (0..image.len()).filter(|&i| split.is_growing(image[i])).collect();
            let (lo, hi) = (growing[0], *growing.last().expect("growing image"));
            shapes[c as usize] = Some(ImageShape {
                prefix: Word::from(&image[..lo]),
                suffix: Word::from(&image[hi + 1..]),
                first: image[lo],
                last: image[hi],
            });
            seeds.push(Seed { triple: (None, Word::new(), Some(c)), letter: c, power: 0 });
            seeds.push(Seed { triple: (Some(c), Word::new(), None), letter: c, power: 0 });
            for pair in growing.windows(2) {
                let triple = (Some(image[pair[0]]), Word::from(&image[pair[0] + 1..pair[1]]), Some(image[pair[1]]));
                seeds.push(Seed { triple, letter: c, power: 1 });
            }
        }
        Self { subst, shapes, seeds }
    }

    fn shape(&self, c: Letter) -> &ImageShape {
        self.shapes[c as usize].as_ref().expect("growing letter")
    }

    fn step_context(&self, (l, r): (Option<Letter>, Option<Letter>)) -> (Option<Letter>, Option<Letter>) {
        (l.map(|c| self.shape(c).last), r.map(|c| self.shape(c).first))
    }

    fn adds(&self, (l, r): (Option<Letter>, Option<Letter>)) -> bool {
        l.is_some_and(|c| !self.shape(c).suffix.is_empty()) || r.is_some_and(|c| !self.shape(c).prefix.is_empty())
    }

    fn step(&self, (l, run, r): &Triple) -> Triple {
        let mut out = Vec::new();
        if let Some(c) = l {
            out.extend_from_slice(&self.shape(*c).suffix);
        }
        out.extend_from_slice(&self.subst.apply(run));
        if let Some(c) = r {
            out.extend_from_slice(&self.shape(*c).prefix);
        }
        (l.map(|c| self.shape(c).last), Word::from(out), r.map(|c| self.shape(c).first))
    }

    fn bound(&self, options: &GapOptions) -> RunBound {
        for seed in &self.seeds {
            let start = (seed.triple.0, seed.triple.2);
            let mut contexts = vec![start];
            let mut ctx = self.step_context(start);
            while !contexts.contains(&ctx) {
                contexts.push(ctx);
                ctx = self.step_context(ctx);
            }
            let cycle_start = contexts.iter().position(|&x| x == ctx).expect("repeat");
            if contexts[cycle_start..].iter().any(|&x| self.adds(x)) {
                let mut t = seed.triple.clone();
                let mut steps = 0;
                while t.1.len() < WITNESS_LENGTH {
                    t = self.step(&t);
                    steps += 1;
                }
                return RunBound::Pumping(GapViolation {
                    e: 0,
                    cause: GapCause::GrowingBBlocks { left: ctx.0, right: ctx.1 },
                    witness: t.1,
                    provenance: Provenance { letter: seed.letter, power: seed.power + steps },
                });
            }
        }
        let mut visited: HashSet<Triple> = HashSet::new();
        let mut best = 0;
        for seed in &self.seeds {
            let mut t = seed.triple.clone();
            while !visited.contains(&t) {
                best = best.max(t.1.len());
                if visited.len() >= options.max_triples || t.1.len() > options.max_run {
                    return RunBound::Exceeded;
                }
                let next = self.step(&t);
                visited.insert(t);
                t = next;
            }
        }
        RunBound::Bounded(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::bounded_letters;

    fn decide(chars: &str, rules: &[&str], e: Letter) -> (Substitution, GapDecision) {
        let s = Substitution::from_strs(chars, rules).unwrap();
        let split = bounded_letters(&s);
        let d = bounded_gaps(&s, &split, e, &GapOptions::default()).unwrap();
        (s, d)
    }

    #[test]
    fn minimal_nonprimitive() {
        let (s, d) = decide("ab", &["abaa", "b"], 0);
        let GapDecision::Yes(cert) = d else { panic!("{d:?}") };
        assert_eq!(cert.bblock_bound, 1);
        assert_eq!(cert.kappa, 2);
        cert.verify(&s, &ClosureOptions::default()).unwrap();
    }

    #[test]
    fn fibonacci_second_letter() {
        let (_, d) = decide("ab", &["ab", "a"], 1);
        let GapDecision::Yes(cert) = d else { panic!("{d:?}") };
        assert_eq!(cert.kappa, 3);
        assert_eq!(cert.bblock_bound, 0);
    }

    #[test]
    fn growing_blocks_of_ones() {
        let (s, d) = decide("01", &["101", "1"], 0);
        let GapDecision::No(v) = d else { panic!("{d:?}") };
        assert!(matches!(v.cause, GapCause::GrowingBBlocks { .. }));
        assert_eq!(s.render(&v.witness), "1111111111");
        v.verify(&s).unwrap();
    }

    #[test]
    fn letter_never_produced() {
        // b -> bb never produces a, though a -> ab reaches b
        let (s, d) = decide("ab", &["ab", "bb"], 0);
        let GapDecision::No(v) = d else { panic!("{d:?}") };
        assert_eq!(v.cause, GapCause::NeverProduced { letter: 1 });
        assert_eq!(v.witness.len(), WITNESS_LENGTH);
        v.verify(&s).unwrap();
    }

    #[test]
    fn preconditions() {
        let s = Substitution::from_strs("01", &["101", "1"]).unwrap();
        let split = bounded_letters(&s);
        assert!(matches!(bounded_gaps(&s, &split, 1, &GapOptions::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn kappa_is_the_true_minimum() {
        // oracle: longest e-free window in a long fixed-point prefix, plus one
        for (chars, rules, e) in [("ab", vec!["ab", "a"], 0u8), ("ab", vec!["abaa", "b"], 0), ("abc", vec!["abc", "ac", "b"], 2)] {
            let (s, d) = decide(chars, &rules, e);
            let GapDecision::Yes(cert) = d else { panic!("{d:?}") };
            let x = s.fixed_point_prefix(0, 20_000).unwrap();
            let mut longest = 0;
            let mut run = 0;
            for &l in x.iter() {
                run = if l == e { 0 } else { run + 1 };
                longest = longest.max(run);
            }
            assert_eq!(cert.kappa, longest + 1, "{chars} {rules:?}");
        }
    }
}
