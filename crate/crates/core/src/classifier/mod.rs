//! Minimality and linear repetitivity of substitution subshifts.
//!
//! A subshift is minimal iff some letter `e` that grows and reaches every
//! letter occurs with bounded gaps, and minimal substitution subshifts are
//! linearly repetitive with the explicit constant `(3 + G) theta rho / lambda`
//! built from the return words of `e`.

mod gaps;

pub use gaps::{bounded_gaps, BgCertificate, GapCause, GapDecision, GapOptions, GapViolation, WITNESS_LENGTH};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::language::{factor_language, return_words, ClosureOptions, FactorSet};
use crate::substitution::{
    bounded_letters, check_compatibility, is_primitive, perron_growth, reduced_substitution, validate, AlphabetSplit,
    Compatibility, GrowthEstimate, Primitivity, Substitution,
};
use crate::words::{contains, least_rotation, smallest_period, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriState {
    #[serde(rename = "yes")]
    Yes,
    #[serde(rename = "no")]
    No,
    #[serde(rename = "undecided-at-depth")]
    Undecided,
}

impl TriState {
    pub fn as_str(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Undecided => "undecided-at-depth",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Periodicity {
    /// Some `p(n) <= n`; `period` is a period word at its least rotation.
    Periodic { period: Word, length: usize },
    /// `p(n) >= n + 1` for every `n <= depth`.
    AperiodicUpToDepth { depth: usize },
}

impl Periodicity {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Periodicity::Periodic { .. })
    }
}

pub fn is_periodic(f: &FactorSet, depth: usize) -> Result<Periodicity, Error> {
    f.require_saturated()?;
    if depth == 0 || depth > f.max_length() {
        return Err(Error::TooShallow { requested: depth, available: f.max_length() });
    }
    for n in 1..=depth {
        if f.complexity(n) <= n {
            let longest = f.words_of_length(f.max_length()).next().expect("nonempty layer");
            let p = smallest_period(longest);
            let period = least_rotation(&longest[..p]);
            return Ok(Periodicity::Periodic { period, length: n });
        }
    }
    Ok(Periodicity::AperiodicUpToDepth { depth })
}

/// Return words of `e`, their admissible pairs and the constant built on them.
#[derive(Debug, Clone, PartialEq)]
pub struct LrBound {
    pub return_words: BTreeSet<Word>,
    pub pairs: BTreeSet<Word>,
    /// Every factor of length at least `g` contains every pair.
    pub g: usize,
    pub growth: GrowthEstimate,
    pub c_lr: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct LrOptions {
    pub n_max: usize,
    /// Deepest factor set used while looking for `G`.
    pub max_scan: usize,
    pub closure: ClosureOptions,
}

impl Default for LrOptions {
    fn default() -> Self {
        Self { n_max: 30, max_scan: 4_096, closure: ClosureOptions::default() }
    }
}

/// `(3 + G) theta rho(V) / lambda(V)`.
pub fn lr_constant(g: usize, growth: &GrowthEstimate) -> f64 {
    (3.0 + g as f64) * growth.theta * growth.rho_v / growth.lambda_v
}

/// Computes `V`, `U`, `G`, the growth constants on `V` and `C_LR`, growing
/// `f` as needed.
pub fn lr_constant_bound(
    subst: &Substitution,
    cert: &BgCertificate,
    f: &mut FactorSet,
    options: &LrOptions,
) -> Result<LrBound, Error> {
    let e = [cert.e];
    f.extend_to(subst, cert.kappa + 1, &options.closure);
    let v = loop {
        f.require_saturated()?;
        let r = return_words(f, &e)?;
        if r.complete {
            break r.words;
        }
        if f.max_length() >= options.max_scan {
            return Err(Error::UndecidedAtDepth("return words of e not complete within the scan depth".into()));
        }
        let next = (2 * f.max_length()).min(options.max_scan);
        f.extend_to(subst, next, &options.closure);
    };
    let longest = v.iter().map(|w| w.len()).max().unwrap_or(1);
    f.extend_to(subst, 2 * longest, &options.closure);
    f.require_saturated()?;
    let mut pairs = BTreeSet::new();
    for z1 in &v {
        for z2 in &v {
            let mut z = z1.clone();
            z.extend_from_slice(z2);
            if f.contains(&z) {
                pairs.insert(z);
            }
        }
    }
    let g = coverage_length(subst, f, &pairs, options)?;

    let split = bounded_letters(subst);
    let reduced = reduced_substitution(subst, &split)?;
    let words: Vec<Word> = v.iter().cloned().collect();
    let mut n_max = options.n_max;
    let growth = loop {
        match perron_growth(subst, &reduced, &words, n_max) {
            Err(Error::LengthOverflow { power }) if power > 1 => n_max = power - 1,
            other => break other?,
        }
    };
    let c_lr = lr_constant(g, &growth);
    Ok(LrBound { return_words: v, pairs, g, growth, c_lr })
}

/// Smallest `L` such that every factor of length `L` contains every word of
/// `pairs`.
fn coverage_length(
    subst: &Substitution,
    f: &mut FactorSet,
    pairs: &BTreeSet<Word>,
    options: &LrOptions,
) -> Result<usize, Error> {
    let start = pairs.iter().map(|w| w.len()).max().unwrap_or(1);
    let mut len = start;
    loop {
        if len > f.max_length() {
            if len > options.max_scan {
                return Err(Error::UndecidedAtDepth(format!(
                    "pair coverage length exceeds the scan depth {}",
                    options.max_scan
                )));
            }
            let next = (2 * f.max_length()).max(len).min(options.max_scan);
            f.extend_to(subst, next, &options.closure);
            f.require_saturated()?;
        }
        if f.words_of_length(len).all(|w| pairs.iter().all(|u| contains(w, u))) {
            return Ok(len);
        }
        len += 1;
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Factor length up to which periodicity is tested.
    pub depth: usize,
    pub n_max: usize,
    /// Largest power tried by the compatibility check.
    pub compat_depth: usize,
    /// Proceed when compatibility is not certified either way.
    pub assume_compatible: bool,
    pub gaps: GapOptions,
    pub max_scan: usize,
    pub closure: ClosureOptions,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            depth: 20,
            n_max: 30,
            compat_depth: 8,
            assume_compatible: false,
            gaps: GapOptions::default(),
            max_scan: 4_096,
            closure: ClosureOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub primitivity: Primitivity,
    pub compatibility: Compatibility,
    pub split: AlphabetSplit,
    /// Outcome of the bounded-gap search for every candidate letter.
    pub candidates: Vec<(Letter, GapDecision)>,
    pub minimal: TriState,
    pub linearly_repetitive: TriState,
    /// Minimal substitution subshifts are uniquely ergodic.
    pub uniquely_ergodic: bool,
    pub periodicity: Periodicity,
    pub certificate: Option<BgCertificate>,
    /// Violation for the smallest candidate when every candidate fails.
    pub violation: Option<GapViolation>,
    pub lr: Option<LrBound>,
    pub depth_caveats: Vec<String>,
    pub depth: usize,
    pub n_max: usize,
}

impl ClassificationReport {
    pub fn primitive(&self) -> bool {
        self.primitivity.is_primitive()
    }

    pub fn c_lr(&self) -> Option<f64> {
        self.lr.as_ref().map(|l| l.c_lr)
    }
}

pub fn classify(subst: &Substitution, options: &ClassifyOptions) -> Result<ClassificationReport, Error> {
    let validation = validate(subst)?;
    let compatibility = check_compatibility(subst, options.compat_depth);
    match &compatibility {
        Compatibility::Holds(_) => {}
        Compatibility::Fails(_) => {
            return Err(Error::Precondition("finite and infinite words are not compatible".into()));
        }
        Compatibility::Unknown { .. } if !options.assume_compatible => {
            return Err(Error::UndecidedAtDepth(format!(
                "compatibility of finite and infinite words not certified up to power {}",
                options.compat_depth
            )));
        }
        Compatibility::Unknown { .. } => {}
    }
    let mut depth_caveats = Vec::new();
    if !compatibility.holds() {
        depth_caveats.push("compatibility of finite and infinite words assumed by the caller".to_string());
    }
    let letters: Vec<Letter> = validation.candidates.iter().filter(|c| c.reaches_all).map(|c| c.letter).collect();
    if letters.is_empty() {
        return Err(Error::OccurrenceFails(subst.describe_mask(validation.candidates[0].pruned_alphabet)));
    }
    let split = bounded_letters(subst);
    let decisions = options
        .closure
        .execution
        .map(&letters, |&e| bounded_gaps(subst, &split, e, &options.gaps));
    let mut candidates = Vec::with_capacity(letters.len());
    for (&e, d) in letters.iter().zip(decisions) {
        candidates.push((e, d?));
    }
    let certificate = candidates.iter().find_map(|(_, d)| match d {
        GapDecision::Yes(c) => Some(c.clone()),
        _ => None,
    });
    let all_no = candidates.iter().all(|(_, d)| matches!(d, GapDecision::No(_)));
    let minimal = if certificate.is_some() {
        TriState::Yes
    } else if all_no {
        TriState::No
    } else {
        TriState::Undecided
    };
    for (e, d) in &candidates {
        if let GapDecision::Undecided { reason } = d {
            depth_caveats.push(format!("bounded gaps for {}: {reason}", subst.alphabet().symbol(*e).name));
        }
    }
    let violation = if minimal == TriState::No {
        candidates.iter().find_map(|(_, d)| match d {
            GapDecision::No(v) => Some(v.clone()),
            _ => None,
        })
    } else {
        None
    };

    let mut f = factor_language(subst, options.depth, &options.closure);
    let periodicity = is_periodic(&f, options.depth)?;
    if !periodicity.is_periodic() {
        depth_caveats.push(format!("aperiodicity checked for factor lengths up to {}", options.depth));
    }

    let mut lr = None;
    let mut linearly_repetitive = minimal;
    if let Some(cert) = &certificate {
        if !cert.kappa_minimized {
            depth_caveats.push(format!("gap bound {} not minimized", cert.kappa));
        }
        let lr_options = LrOptions { n_max: options.n_max, max_scan: options.max_scan, closure: options.closure };
        match lr_constant_bound(subst, cert, &mut f, &lr_options) {
            Ok(b) => {
                if b.growth.n_checked < options.n_max {
                    depth_caveats.push(format!("growth constants checked up to n = {} (length overflow)", b.growth.n_checked));
                }
                depth_caveats.push(format!(
                    "growth constants and C_LR valid for iterates up to n = {}",
                    b.growth.n_checked
                ));
                lr = Some(b);
            }
            Err(Error::UndecidedAtDepth(why)) => {
                depth_caveats.push(format!("linear repetitivity constant: {why}"));
            }
            Err(other) => return Err(other),
        }
    }
    if minimal == TriState::Yes && lr.is_none() {
        // minimality implies linear repetitivity; only the constant is missing
        linearly_repetitive = TriState::Yes;
    }

    Ok(ClassificationReport {
        primitivity: is_primitive(subst),
        compatibility,
        split,
        candidates,
        minimal,
        linearly_repetitive,
        uniquely_ergodic: minimal == TriState::Yes,
        periodicity,
        certificate,
        violation,
        lr,
        depth_caveats,
        depth: options.depth,
        n_max: options.n_max,
    })
}
