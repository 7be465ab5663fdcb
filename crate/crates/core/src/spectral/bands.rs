//! Spectra of periodic operators: `{E : |tr T(E)| <= 2}` for the transfer
//! matrix `T(E)` over one period.
//!
//! A period of `q` sites has `q` bands (some possibly touching). The `q - 1`
//! Dirichlet eigenvalues of the first `q - 1` sites lie one in the closure of
//! each gap, so consecutive Dirichlet eigenvalues bracket exactly one band and
//! one zero of the trace. Each zero is found by bisection on the sign of the
//! trace, then each edge by bisection on `|tr| <= 2` between the zero and the
//! bracket end. No energy grid is involved, so thin bands cannot be missed.

use crate::error::Error;
use crate::par::Execution;
use crate::substitution::Substitution;
use crate::words::{Letter, Word};

use super::transfer::{trace, Potential};
use super::tridiag::kth_eigenvalue;

/// Absolute tolerance for band edges.
pub const EDGE_TOLERANCE: f64 = 1e-12;
/// Bands closer than this are reported as one band; the merge is flagged.
pub const MERGE_GAP: f64 = 1e-7;
/// Longest period word accepted.
pub const MAX_PERIOD: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandSpectrum {
    pub level: usize,
    pub period_word: Word,
    pub window: (f64, f64),
    pub bands: Vec<Band>,
    pub total_measure: f64,
    /// Gaps narrower than [`MERGE_GAP`] were closed while merging.
    pub merged_gaps: usize,
    pub possible_band_merging: bool,
}

/// Energies certainly containing the spectrum, widened by `margin`.
pub fn default_window(sites: &[f64], margin: f64) -> (f64, f64) {
    let lo = sites.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sites.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo - 2.0 - margin, hi + 2.0 + margin)
}

/// Bands of the periodic operator with one period `sites`, clipped to
/// `window`.
pub fn periodic_bands(
    sites: &[f64],
    window: (f64, f64),
    execution: Execution,
) -> Result<(Vec<Band>, usize), Error> {
    if sites.is_empty() {
        return Err(Error::EmptyWord("periodic_bands"));
    }
    if window.0.partial_cmp(&window.1) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidArgument(format!("inverted energy window [{}, {}]", window.0, window.1)));
    }
    let q = sites.len();
    let (outer_lo, outer_hi) = default_window(sites, 1.0);
    let block = &sites[..q - 1];
    let dirichlet = execution.map_range(0..q - 1, |k| kth_eigenvalue(block, k));
    let mut ends = Vec::with_capacity(q + 1);
    ends.push(outer_lo);
    ends.extend(dirichlet);
    ends.push(outer_hi);
    let raw = execution.map_range(0..q, |j| band_in(sites, ends[j], ends[j + 1]));

    let mut bands: Vec<Band> = Vec::with_capacity(q);
    let mut merged = 0;
    for b in raw {
        match bands.last_mut() {
            Some(last) if b.lo - last.hi < MERGE_GAP => {
                last.hi = last.hi.max(b.hi);
                merged += 1;
            }
            _ => bands.push(b),
        }
    }
    let clipped = bands
        .into_iter()
        .filter_map(|b| {
            let lo = b.lo.max(window.0);
            let hi = b.hi.min(window.1);
            (lo < hi).then_some(Band { lo, hi })
        })
        .collect();
    Ok((clipped, merged))
}

/// The band inside `[a, b]`, where `a` and `b` lie in gap closures.
fn band_in(sites: &[f64], a: f64, b: f64) -> Band {
    let (ta, tb) = (trace(sites, a), trace(sites, b));
    // the trace changes sign exactly once on [a, b]
    let root = if ta.signum() == tb.signum() {
        // both ends numerically on a touching point; the band is degenerate
        0.5 * (a + b)
    } else {
        bisect(a, b, |x| trace(sites, x).signum() == ta.signum())
    };
    let inside = |x: f64| trace(sites, x).abs() <= 2.0;
    let lo = bisect(a, root, |x| !inside(x));
    let hi = bisect(root, b, inside);
    Band { lo, hi }
}

/// Boundary of a predicate that holds at `lo` and fails at `hi`.
fn bisect(mut lo: f64, mut hi: f64, holds: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        if hi - lo <= EDGE_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Bands of the periodic approximant with period `S^level(e)`.
pub fn band_spectrum(
    subst: &Substitution,
    potential: &Potential,
    e: Letter,
    level: usize,
    window: Option<(f64, f64)>,
    execution: Execution,
) -> Result<BandSpectrum, Error> {
    let len = subst.length_of_power(&[e], level)?;
    if len > MAX_PERIOD as u128 {
        return Err(Error::InvalidArgument(format!("period word of length {len} exceeds {MAX_PERIOD}")));
    }
    let period_word = subst.iterate(&[e], level);
    let sites = potential.sites(&period_word);
    let window = window.unwrap_or_else(|| default_window(potential.values(), 0.5));
    let (bands, merged_gaps) = periodic_bands(&sites, window, execution)?;
    let total_measure = bands.iter().map(Band::width).sum();
    Ok(BandSpectrum {
        level,
        possible_band_merging: merged_gaps > 0,
        period_word,
        window,
        bands,
        total_measure,
        merged_gaps,
    })
}
