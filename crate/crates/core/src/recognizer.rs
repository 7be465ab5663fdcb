//! 1-partitions for substitutions on `{a, b}` with `S(b) = b` and
//! `|S(a)| > 1`: decompositions `w = z_0 z_1 ... z_n z_{n+1}` with interior
//! blocks in `{S(a), b}`, `z_0` a proper suffix and `z_{n+1}` a proper prefix
//! of a block.
//!
//! For minimal aperiodic such substitutions all 1-partitions of a factor agree
//! away from its ends. Two constructive windows are available: if `aa`
//! occurs in `S(a)`, `L = L_0 + 2|S(a) b|` where `L_0` is the longest power
//! `v^n` in the language with `v` a factor of `S(a)`; otherwise
//! `L = (N + 2) 2|S(a)|` where `N` bounds the exponents of powers of words of
//! length at most `2|S(a)|`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::classifier::{classify, ClassifyOptions, Periodicity, TriState};
use crate::error::Error;
use crate::language::{factor_language, factors_of_length, ClosureOptions, FactorSet};
use crate::par::Execution;
use crate::substitution::Substitution;
use crate::words::{Letter, Word};

/// Largest factor length used to certify power bounds.
pub const MAX_POWER_DEPTH: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Block {
    /// `S(a)`.
    Image,
    /// `b`.
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OnePartition {
    pub z0: Word,
    pub blocks: Vec<Block>,
    pub z_end: Word,
    /// Boundaries between consecutive pieces, `|z_0|` first.
    pub cuts: Vec<usize>,
}

impl OnePartition {
    /// Cuts in `[lo, hi]`.
    pub fn cuts_within(&self, lo: usize, hi: usize) -> Vec<usize> {
        self.cuts.iter().copied().filter(|&c| c >= lo && c <= hi).collect()
    }

    pub fn starts_with(&self, blocks: &[Block]) -> bool {
        self.z0.is_empty() && self.blocks.starts_with(blocks)
    }
}

/// Which bound produced the window `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowRoute {
    /// `aa` occurs in `S(a)`; uses `L_0`.
    DoubleA { l0: usize },
    /// `aa` does not occur in `S(a)`; uses the exponent bound `N`.
    PowerBound { n: usize },
}

/// A minimal aperiodic nonprimitive substitution on two letters in the
/// `S(b) = b` shape.
#[derive(Debug, Clone)]
pub struct TwoLetterShape {
    subst: Substitution,
    pub a: Letter,
    pub b: Letter,
    pub image: Word,
    pub route: WindowRoute,
    pub window: usize,
}

impl TwoLetterShape {
    pub fn new(subst: &Substitution, options: &ClassifyOptions) -> Result<Self, Error> {
        let (a, b) = shape_letters(subst)?;
        let image = subst.image(a).clone();
        let report = classify(subst, options)?;
        if report.minimal != TriState::Yes {
            return Err(Error::Precondition(format!("1-partitions need a certified minimal subshift (minimal: {})", report.minimal.as_str())));
        }
        if let Periodicity::Periodic { period, .. } = &report.periodicity {
            return Err(Error::Precondition(format!("aperiodicity fails: periodic with period {}", subst.render(period))));
        }
        // S(a) is neither a prefix of b S(a) nor a suffix of S(a) b
        let mut bsa = Word::single(b);
        bsa.extend_from_slice(&image);
        let mut sab = image.clone();
        sab.push(b);
        if bsa.starts_with(&image) || sab.ends_with(&image) {
            return Err(Error::Structure(format!("S(a) = {} is a power of b", subst.render(&image))));
        }

        let m = image.len();
        let aa = image.windows(2).any(|w| w == [a, a]);
        let (route, window) = if aa {
            let subwords: BTreeSet<Word> =
                (1..=m).flat_map(|k| image.windows(k).map(Word::from)).collect();
            let mut l0 = 0;
            for v in &subwords {
                l0 = l0.max(v.len() * max_exponent(subst, v, options.closure)?);
            }
            (WindowRoute::DoubleA { l0 }, l0 + 2 * (m + 1))
        } else {
            let f = certified_set(subst, 4 * m, options.closure)?;
            let mut n = 1;
            for k in 1..=2 * m {
                for v in f.words_of_length(k) {
                    n = n.max(max_exponent(subst, v, options.closure)?);
                }
            }
            (WindowRoute::PowerBound { n }, (n + 2) * 2 * m)
        };
        Ok(Self { subst: subst.clone(), a, b, image, route, window })
    }

    pub fn substitution(&self) -> &Substitution {
        &self.subst
    }

    fn block_word(&self, block: Block) -> &[Letter] {
        match block {
            Block::Image => &self.image,
            Block::Fixed => std::slice::from_ref(&self.b),
        }
    }

    /// Threshold length above which a leading `S(a) S(a)` is forced.
    pub fn propagation_threshold(&self) -> Option<usize> {
        match self.route {
            WindowRoute::DoubleA { l0 } => Some(2 * self.image.len() + l0),
            WindowRoute::PowerBound { .. } => None,
        }
    }
}

fn shape_letters(subst: &Substitution) -> Result<(Letter, Letter), Error> {
    const NEED: &str = "requires nonprimitive two-letter shape";
    if subst.size() != 2 {
        return Err(Error::Precondition(format!("{NEED}: alphabet has {} letters", subst.size())));
    }
    let fixed: Vec<Letter> = subst.letters().filter(|&l| subst.image(l).as_slice() == [l]).collect();
    let (a, b) = match fixed.as_slice() {
        [b] => (1 - *b, *b),
        [] => return Err(Error::Precondition(format!("{NEED}: no letter b with S(b) = b"))),
        _ => return Err(Error::Precondition(format!("{NEED}: both letters are fixed"))),
    };
    let image = subst.image(a);
    if image.len() < 2 {
        return Err(Error::Precondition(format!("{NEED}: |S(a)| must exceed 1")));
    }
    if !image.contains(&b) {
        return Err(Error::Precondition(format!("{NEED}: S(a) must contain b")));
    }
    Ok((a, b))
}

fn certified_set(subst: &Substitution, depth: usize, closure: ClosureOptions) -> Result<FactorSet, Error> {
    let f = factor_language(subst, depth, &closure);
    f.require_saturated()?;
    Ok(f)
}

/// Largest `n` with `v^n` in the language, certified by a factor set deep
/// enough to exclude `v^(n+1)`.
pub fn max_exponent(subst: &Substitution, v: &[Letter], closure: ClosureOptions) -> Result<usize, Error> {
    let mut depth = (4 * v.len()).max(16);
    loop {
        let f = certified_set(subst, depth.min(MAX_POWER_DEPTH), closure)?;
        let mut n = 1;
        while v.len() * (n + 1) <= f.max_length() && f.contains(&Word::from(v).power(n + 1)) {
            n += 1;
        }
        if v.len() * (n + 1) <= f.max_length() {
            return Ok(n);
        }
        if depth >= MAX_POWER_DEPTH {
            return Err(Error::UndecidedAtDepth(format!(
                "{}^{n} is a factor and longer powers exceed length {MAX_POWER_DEPTH}",
                subst.render(v)
            )));
        }
        depth *= 2;
    }
}

/// Every 1-partition of `w`, ordered by `|z_0|` then by cuts.
pub fn enumerate_one_partitions(shape: &TwoLetterShape, w: &[Letter]) -> Result<Vec<OnePartition>, Error> {
    if let Some(&l) = w.iter().find(|&&l| l != shape.a && l != shape.b) {
        return Err(Error::InvalidArgument(format!("letter {l} is outside the two-letter alphabet")));
    }
    let n = w.len();
    let m = shape.image.len();
    let is_end = |i: usize| i == n || (n - i < m && shape.image.starts_with(&w[i..]));
    let blocks_at = |i: usize| {
        [Block::Image, Block::Fixed]
            .into_iter()
            .filter(move |&blk| w[i..].starts_with(shape.block_word(blk)))
    };
    // viable[i]: some sequence of blocks from i reaches a valid end
    let mut viable = vec![false; n + 1];
    for i in (0..=n).rev() {
        viable[i] = is_end(i) || (i < n && blocks_at(i).any(|blk| viable[i + shape.block_word(blk).len()]));
    }

    let mut out = Vec::new();
    for s in 0..m.min(n + 1) {
        if s > 0 && !shape.image.ends_with(&w[..s]) {
            continue;
        }
        if !viable[s] {
            continue;
        }
        let mut stack = vec![(s, Vec::<Block>::new())];
        while let Some((i, blocks)) = stack.pop() {
            if is_end(i) {
                let mut cuts = vec![s];
                let mut pos = s;
                for &blk in &blocks {
                    pos += shape.block_word(blk).len();
                    cuts.push(pos);
                }
                out.push(OnePartition {
                    z0: Word::from(&w[..s]),
                    blocks: blocks.clone(),
                    z_end: Word::from(&w[i..]),
                    cuts,
                });
            }
            if i < n {
                for blk in blocks_at(i) {
                    let j = i + shape.block_word(blk).len();
                    if viable[j] {
                        let mut next = blocks.clone();
                        next.push(blk);
                        stack.push((j, next));
                    }
                }
            }
        }
    }
    out.sort_by(|p, q| (p.z0.len(), &p.cuts).cmp(&(q.z0.len(), &q.cuts)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Agreement {
    /// All 1-partitions have these cuts in `[L, |w| - L]`.
    Agree { cuts: Vec<usize> },
    /// Two 1-partitions that differ inside the window.
    Violation { word: Word, first: OnePartition, second: OnePartition },
}

pub fn interior_agreement(shape: &TwoLetterShape, w: &[Letter]) -> Result<Agreement, Error> {
    let l = shape.window;
    if w.len() <= 2 * l {
        return Err(Error::InvalidArgument(format!("word of length {} is not longer than 2L = {}", w.len(), 2 * l)));
    }
    let parts = enumerate_one_partitions(shape, w)?;
    let Some(first) = parts.first() else {
        return Err(Error::InvalidArgument(format!("{} has no 1-partition", shape.subst.render(w))));
    };
    let hi = w.len() - l;
    let cuts = first.cuts_within(l, hi);
    match parts.iter().find(|p| p.cuts_within(l, hi) != cuts) {
        Some(other) => Ok(Agreement::Violation { word: Word::from(w), first: first.clone(), second: other.clone() }),
        None => Ok(Agreement::Agree { cuts }),
    }
}

/// Cut positions are exactly the centres of the listed `(2L+1)`-windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognitionRule {
    pub l: usize,
    pub windows: BTreeSet<Word>,
    /// Letters checked in the validation pass.
    pub validated_length: usize,
}

impl RecognitionRule {
    /// Cuts `E` with `L <= E < |w| - L` read from the windows alone.
    pub fn cuts(&self, w: &[Letter]) -> Vec<usize> {
        let l = self.l;
        if w.len() < 2 * l + 1 {
            return Vec::new();
        }
        (l..w.len() - l).filter(|&e| self.windows.contains(&w[e - l..=e + l])).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RecognizerOptions {
    pub validation_length: usize,
    pub execution: Execution,
    pub closure: ClosureOptions,
}

impl Default for RecognizerOptions {
    fn default() -> Self {
        Self { validation_length: 10_000, execution: Execution::default(), closure: ClosureOptions::default() }
    }
}

pub fn recognition_rule(shape: &TwoLetterShape, options: &RecognizerOptions) -> Result<RecognitionRule, Error> {
    let l = shape.window;
    let layer = factors_of_length(&shape.subst, 4 * l, &options.closure.limits);
    if !layer.saturated {
        return Err(Error::Unsaturated { rounds: layer.rounds, words: layer.len() });
    }
    let words: Vec<&Word> = layer.iter().collect();
    let per_word = options.execution.map(&words, |w| -> Result<(Vec<Word>, Vec<Word>), Error> {
        let cuts = match interior_agreement(shape, w)? {
            Agreement::Agree { cuts } => cuts,
            Agreement::Violation { first, second, .. } => {
                return Err(Error::Validation(format!(
                    "{} has 1-partitions with cuts {:?} and {:?}",
                    shape.subst.render(w),
                    first.cuts,
                    second.cuts
                )))
            }
        };
        let mut yes = Vec::new();
        let mut no = Vec::new();
        for e in l..3 * l {
            let win = Word::from(&w[e - l..=e + l]);
            if cuts.binary_search(&e).is_ok() {
                yes.push(win);
            } else {
                no.push(win);
            }
        }
        Ok((yes, no))
    });
    let mut windows = BTreeSet::new();
    let mut rejected = BTreeSet::new();
    for r in per_word {
        let (yes, no) = r?;
        windows.extend(yes);
        rejected.extend(no);
    }
    if let Some(w) = windows.intersection(&rejected).next() {
        return Err(Error::Validation(format!("window {} is both a cut and a non-cut", shape.subst.render(w))));
    }

    let mut rule = RecognitionRule { l, windows, validated_length: 0 };
    let sample = shape.subst.fixed_point_prefix(shape.a, options.validation_length.max(4 * l + 3))?;
    let want = match interior_agreement(shape, &sample)? {
        Agreement::Agree { cuts } => cuts,
        Agreement::Violation { first, second, .. } => {
            return Err(Error::Validation(format!(
                "sample has 1-partitions differing at interior cuts {:?} / {:?}",
                first.cuts_within(l, sample.len() - l),
                second.cuts_within(l, sample.len() - l)
            )))
        }
    };
    let got: Vec<usize> = rule.cuts(&sample).into_iter().filter(|&e| e <= sample.len() - l).collect();
    let want: Vec<usize> = want.into_iter().filter(|&e| e < sample.len() - l).collect();
    if got != want {
        let at = got.iter().zip(&want).position(|(x, y)| x != y).unwrap_or(got.len().min(want.len()));
        return Err(Error::Validation(format!("window rule disagrees with the sample partition near cut #{at}")));
    }
    rule.validated_length = sample.len();
    Ok(rule)
}

/// Cuts the interior of `window` with `rule` and maps the blocks back.
/// Returns the preimage and the position of its first cut.
pub fn desubstitute(shape: &TwoLetterShape, window: &[Letter], rule: &RecognitionRule) -> Result<(Word, usize), Error> {
    if window.len() <= 4 * rule.l + 2 {
        return Err(Error::InvalidArgument(format!(
            "window of length {} must exceed 4L + 2 = {}",
            window.len(),
            4 * rule.l + 2
        )));
    }
    preimage_from_cuts(shape, window, &rule.cuts(window))
}

/// Maps the pieces between consecutive `cuts` back to letters. Returns the
/// preimage and the first cut.
pub fn preimage_from_cuts(shape: &TwoLetterShape, w: &[Letter], cuts: &[usize]) -> Result<(Word, usize), Error> {
    let (&first, _) = cuts
        .split_first()
        .ok_or_else(|| Error::Validation("no cut inside the window".into()))?;
    let mut pre = Word::new();
    for pair in cuts.windows(2) {
        let piece = &w[pair[0]..pair[1]];
        if piece == shape.image.as_slice() {
            pre.push(shape.a);
        } else if piece == [shape.b] {
            pre.push(shape.b);
        } else {
            return Err(Error::Validation(format!(
                "piece {} between cuts {} and {} is not a block",
                shape.subst.render(piece),
                pair[0],
                pair[1]
            )));
        }
    }
    Ok((pre, first))
}

/// Counts the words of `layer` by the number of distinct interior cut sets.
pub fn interior_cut_set_counts(shape: &TwoLetterShape, words: &[Word], execution: Execution) -> Result<BTreeMap<usize, usize>, Error> {
    let l = shape.window;
    let counts = execution.map(words, |w| -> Result<usize, Error> {
        let parts = enumerate_one_partitions(shape, w)?;
        let sets: BTreeSet<Vec<usize>> = parts.iter().map(|p| p.cuts_within(l, w.len() - l)).collect();
        Ok(sets.len())
    });
    let mut hist = BTreeMap::new();
    for c in counts {
        *hist.entry(c?).or_insert(0) += 1;
    }
    Ok(hist)
}
