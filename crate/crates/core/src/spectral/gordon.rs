//! Cubes with positive frequency along `n_k = |S^k(u)|` when `uuue` is a
//! factor and `u` starts with a growing letter `e`.
//!
//! Each occurrence of `S^k(uuue)` yields `|S^k(e)|` cubes of period `n_k`, and
//! linear repetitivity bounds the frequency of `S^k(uuue)` from below, so the
//! cube frequency is at least `lambda / (C_LR * rho)` with `lambda` the lower
//! growth constant of `e` and `rho` the upper one of `uuue`.

use crate::classifier::{ClassificationReport, TriState};
use crate::error::Error;
use crate::language::{factor_language, find_power, ClosureOptions};
use crate::par::Execution;
use crate::substitution::{bounded_letters, perron_growth, reduced_substitution, Substitution};
use crate::words::{Letter, Word};

/// Allowed shortfall of a measured frequency below the bound.
pub const FREQUENCY_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy)]
pub struct GordonOptions {
    /// Factor length searched for `uuue`.
    pub depth: usize,
    pub first_level: usize,
    pub last_level: usize,
    pub sample_length: usize,
    pub n_max: usize,
    pub closure: ClosureOptions,
}

impl Default for GordonOptions {
    fn default() -> Self {
        Self {
            depth: 48,
            first_level: 2,
            last_level: 6,
            sample_length: 1_000_000,
            n_max: 30,
            closure: ClosureOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeLevel {
    pub level: usize,
    pub n_k: u128,
    /// `None` when `3 n_k` exceeds the sample.
    pub frequency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GordonReport {
    pub u: Word,
    pub e: Letter,
    pub theta: f64,
    pub lambda: f64,
    pub rho: f64,
    pub c_lr: f64,
    pub freq_lower_bound: f64,
    pub levels: Vec<CubeLevel>,
    pub sample_length: usize,
    pub growth_checked: usize,
}

impl GordonReport {
    /// Every measured frequency reaches the bound up to [`FREQUENCY_SLACK`].
    pub fn bound_holds(&self) -> bool {
        self.levels
            .iter()
            .filter_map(|l| l.frequency)
            .all(|f| f >= self.freq_lower_bound - FREQUENCY_SLACK)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GordonOutcome {
    Found(GordonReport),
    /// No `u` with `uuue` a factor up to this factor length.
    HypothesisNotFound { depth: usize },
}

pub fn gordon_check(
    subst: &Substitution,
    report: &ClassificationReport,
    options: &GordonOptions,
) -> Result<GordonOutcome, Error> {
    if report.minimal != TriState::Yes {
        return Err(Error::Precondition("the cube bound needs a certified minimal subshift".into()));
    }
    let lr = report
        .lr
        .as_ref()
        .ok_or_else(|| Error::Precondition("the cube bound needs the linear repetitivity constant".into()))?;
    let split = bounded_letters(subst);
    let f = factor_language(subst, options.depth, &options.closure);
    f.require_saturated()?;
    let Some(u) = find_power(&f, |w| split.is_growing(w[0]), 3) else {
        return Ok(GordonOutcome::HypothesisNotFound { depth: options.depth });
    };
    let e = u[0];
    let mut uuue = u.power(3);
    uuue.push(e);

    let reduced = reduced_substitution(subst, &split)?;
    let mut n_max = options.n_max;
    let (low, high) = loop {
        let low = perron_growth(subst, &reduced, &[Word::single(e)], n_max);
        let high = perron_growth(subst, &reduced, &[uuue.clone()], n_max);
        match (low, high) {
            (Err(Error::LengthOverflow { power }), _) | (_, Err(Error::LengthOverflow { power })) if power > 1 => {
                n_max = power - 1
            }
            (low, high) => break (low?, high?),
        }
    };
    let freq_lower_bound = low.lambda_v / (lr.c_lr * high.rho_v);

    let start = if subst.prefix_power(e).is_some() {
        e
    } else {
        subst
            .letters()
            .find(|&a| subst.prefix_power(a).is_some())
            .ok_or_else(|| Error::Precondition("no letter generates a one-sided fixed point".into()))?
    };
    let sample = subst.fixed_point_prefix(start, options.sample_length)?;
    let lengths = subst.lengths(&u, options.last_level)?;
    let levels: Vec<usize> = (options.first_level..=options.last_level).collect();
    let levels = options.closure.execution.map(&levels, |&k| {
        let n = lengths[k];
        let frequency = usize::try_from(n).ok().and_then(|n| cube_frequency(&sample, n));
        CubeLevel { level: k, n_k: n, frequency }
    });
    Ok(GordonOutcome::Found(GordonReport {
        u,
        e,
        theta: low.theta,
        lambda: low.lambda_v,
        rho: high.rho_v,
        c_lr: lr.c_lr,
        freq_lower_bound,
        levels,
        sample_length: options.sample_length,
        growth_checked: n_max,
    }))
}

/// Fraction of positions `j` with `x[j..j+3n]` a cube of period `n`.
pub fn cube_frequency(x: &[Letter], n: usize) -> Option<f64> {
    if n == 0 || 3 * n > x.len() {
        return None;
    }
    let eq: Vec<bool> = (0..x.len() - n).map(|i| x[i] == x[i + n]).collect();
    let width = 2 * n;
    let mut run: usize = eq[..width].iter().filter(|&&b| b).count();
    let positions = x.len() - 3 * n + 1;
    let mut hits = usize::from(run == width);
    for j in 1..positions {
        run = run + usize::from(eq[j + width - 1]) - usize::from(eq[j - 1]);
        hits += usize::from(run == width);
    }
    Some(hits as f64 / positions as f64)
}

/// [`cube_frequency`] with an explicit execution mode, for benchmarks.
pub fn cube_frequencies(x: &[Letter], periods: &[usize], execution: Execution) -> Vec<Option<f64>> {
    execution.map(periods, |&n| cube_frequency(x, n))
}
