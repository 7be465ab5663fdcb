//! JSON reports. Every report carries `schema_version` and `depth_caveats`;
//! words are rendered with the alphabet's symbols and tri-states as
//! `"yes"`, `"no"` or `"undecided-at-depth"`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::classifier::{classify, ClassificationReport, ClassifyOptions, GapCause, GapDecision, Periodicity, TriState};
use crate::error::Error;
use crate::number_theory::{StutterCase, TranscendenceOptions, TranscendenceReport};
use crate::recognizer::{Block, OnePartition, TwoLetterShape, WindowRoute};
use crate::spectral::{BandSpectrum, GordonOutcome};
use crate::substitution::{check_compatibility, Compatibility, CompatibilityEvidence, Side, Substitution};
use crate::words::Letter;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize)]
pub struct ReportFile<T: Serialize> {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub name: String,
    #[serde(flatten)]
    pub body: T,
    pub depth_caveats: Vec<String>,
}

impl<T: Serialize> ReportFile<T> {
    pub fn new(kind: &'static str, name: impl Into<String>, body: T, depth_caveats: Vec<String>) -> Self {
        Self { schema_version: SCHEMA_VERSION, kind, name: name.into(), body, depth_caveats }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn tri(b: bool) -> TriState {
    if b {
        TriState::Yes
    } else {
        TriState::No
    }
}

fn symbol(subst: &Substitution, l: Letter) -> String {
    subst.alphabet().symbol(l).name.to_string()
}

fn rules(subst: &Substitution) -> BTreeMap<String, String> {
    subst.letters().map(|a| (symbol(subst, a), subst.render(subst.image(a)))).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisSettings {
    pub depth: usize,
    pub n_max: usize,
    pub compat_depth: usize,
    pub assume_compatible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvidenceJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub letter: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatibilityJson {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tried_powers: Option<usize>,
}

fn evidence(subst: &Substitution, ev: &CompatibilityEvidence) -> EvidenceJson {
    match ev {
        CompatibilityEvidence::PrefixFixpoint { letter, power } => EvidenceJson {
            kind: "recurrent-prefix-fixed-point",
            letter: Some(symbol(subst, *letter)),
            word: None,
            power: Some(*power),
            side: None,
        },
        CompatibilityEvidence::InteriorSeed { seed, power } => EvidenceJson {
            kind: "interior-seed",
            letter: None,
            word: Some(subst.render(seed)),
            power: Some(*power),
            side: None,
        },
        CompatibilityEvidence::MissingExtension { word, side } => EvidenceJson {
            kind: "missing-extension",
            letter: None,
            word: Some(subst.render(word)),
            power: None,
            side: Some(match side {
                Side::Left => "left",
                Side::Right => "right",
            }),
        },
    }
}

fn compatibility(subst: &Substitution, c: &Compatibility) -> CompatibilityJson {
    match c {
        Compatibility::Holds(ev) => {
            CompatibilityJson { status: "holds-certified", evidence: Some(evidence(subst, ev)), tried_powers: None }
        }
        Compatibility::Fails(ev) => {
            CompatibilityJson { status: "fails-certified", evidence: Some(evidence(subst, ev)), tried_powers: None }
        }
        Compatibility::Unknown { depth } => {
            CompatibilityJson { status: "undecided-at-depth", evidence: None, tried_powers: Some(*depth) }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicityJson {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<String>,
    /// Factor length at which `p(n) <= n` was seen, or the depth tested.
    pub length: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapJson {
    pub letter: String,
    pub decision: TriState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_upper: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_minimized: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reachability: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounded_block_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cause: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn gap(subst: &Substitution, e: Letter, d: &GapDecision) -> GapJson {
    let mut g = GapJson {
        letter: symbol(subst, e),
        decision: TriState::Undecided,
        kappa: None,
        kappa_upper: None,
        kappa_minimized: None,
        reachability: None,
        bounded_block_bound: None,
        cause: None,
        witness: None,
        witness_source: None,
        reason: None,
    };
    match d {
        GapDecision::Yes(c) => {
            g.decision = TriState::Yes;
            g.kappa = Some(c.kappa);
            g.kappa_upper = Some(c.kappa_upper);
            g.kappa_minimized = Some(c.kappa_minimized);
            g.reachability = Some(c.reachability.iter().map(|&(l, k)| (symbol(subst, l), k)).collect());
            g.bounded_block_bound = Some(c.bblock_bound);
        }
        GapDecision::No(v) => {
            g.decision = TriState::No;
            g.cause = Some(match v.cause {
                GapCause::NeverProduced { letter } => {
                    format!("{} is missing from S^n({}) for infinitely many n", symbol(subst, e), symbol(subst, letter))
                }
                GapCause::GrowingBBlocks { left, right } => {
                    let side = |l: Option<Letter>| l.map_or("boundary".to_string(), |l| symbol(subst, l));
                    format!("growing bounded-letter blocks between {} and {}", side(left), side(right))
                }
            });
            g.witness = Some(subst.render(&v.witness));
            g.witness_source = Some(format!("S^{}({})", v.provenance.power, symbol(subst, v.provenance.letter)));
        }
        GapDecision::Undecided { reason } => g.reason = Some(reason.clone()),
    }
    g
}

#[derive(Debug, Clone, Serialize)]
pub struct LrJson {
    pub return_words: Vec<String>,
    pub return_word_pairs: usize,
    pub g: usize,
    pub theta: f64,
    pub lambda: f64,
    pub rho: f64,
    pub growth_checked_to: usize,
    pub c_lr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationJson {
    pub primitive: TriState,
    pub bounded_letters: Vec<String>,
    pub growing_letters: Vec<String>,
    pub minimal: TriState,
    pub linearly_repetitive: TriState,
    /// "yes" when implied by linear repetitivity, else "not-established".
    pub uniquely_ergodic: &'static str,
    pub periodicity: PeriodicityJson,
    pub bounded_gaps: Vec<GapJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_repetitivity: Option<LrJson>,
}

fn classification(subst: &Substitution, r: &ClassificationReport) -> ClassificationJson {
    ClassificationJson {
        primitive: tri(r.primitive()),
        bounded_letters: r.split.bounded_letters().map(|l| symbol(subst, l)).collect(),
        growing_letters: r.split.growing_letters().map(|l| symbol(subst, l)).collect(),
        minimal: r.minimal,
        linearly_repetitive: r.linearly_repetitive,
        uniquely_ergodic: if r.uniquely_ergodic { "yes" } else { "not-established" },
        periodicity: match &r.periodicity {
            Periodicity::Periodic { period, length } => {
                PeriodicityJson { status: "periodic", period: Some(subst.render(period)), length: *length }
            }
            Periodicity::AperiodicUpToDepth { depth } => {
                PeriodicityJson { status: "aperiodic-up-to-depth", period: None, length: *depth }
            }
        },
        bounded_gaps: r.candidates.iter().map(|(e, d)| gap(subst, *e, d)).collect(),
        linear_repetitivity: r.lr.as_ref().map(|lr| LrJson {
            return_words: lr.return_words.iter().map(|w| subst.render(w)).collect(),
            return_word_pairs: lr.pairs.len(),
            g: lr.g,
            theta: lr.growth.theta,
            lambda: lr.growth.lambda_v,
            rho: lr.growth.rho_v,
            growth_checked_to: lr.growth.n_checked,
            c_lr: lr.c_lr,
        }),
    }
}

/// Compatibility first, then the classification when it may proceed.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub settings: AnalysisSettings,
    pub rules: BTreeMap<String, String>,
    pub compatibility: CompatibilityJson,
    pub classification: Option<ClassificationJson>,
    #[serde(skip)]
    pub report: Option<ClassificationReport>,
    #[serde(skip)]
    pub caveats: Vec<String>,
}

impl Analysis {
    /// Every question asked got a yes or no.
    pub fn decided(&self) -> bool {
        match &self.classification {
            None => self.compatibility.status == "fails-certified",
            Some(c) => c.minimal != TriState::Undecided,
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let Some(c) = &self.classification else {
            return match self.compatibility.status {
                "fails-certified" => "compatibility of finite and infinite words: fails-certified".to_string(),
                _ => "compatibility of finite and infinite words: undecided-at-depth".to_string(),
            };
        };
        let mut parts = vec![if c.primitive == TriState::Yes { "primitive" } else { "nonprimitive" }.to_string()];
        parts.push(match c.minimal {
            TriState::Yes => "minimal".into(),
            TriState::No => "not minimal".into(),
            TriState::Undecided => "minimality undecided-at-depth".into(),
        });
        if c.linearly_repetitive == TriState::Yes {
            parts.push("linearly repetitive".into());
        }
        parts.push(match (&c.periodicity.status, &c.periodicity.period) {
            (&"periodic", Some(p)) => format!("periodic (period {p})"),
            _ => format!("aperiodic (depth {})", c.periodicity.length),
        });
        parts.join(", ")
    }

    pub fn into_report(self, name: &str) -> ReportFile<Analysis> {
        let caveats = self.caveats.clone();
        ReportFile::new("analysis", name, self, caveats)
    }
}

pub fn analyze(subst: &Substitution, options: &ClassifyOptions) -> Result<Analysis, Error> {
    let compat = check_compatibility(subst, options.compat_depth);
    let settings = AnalysisSettings {
        depth: options.depth,
        n_max: options.n_max,
        compat_depth: options.compat_depth,
        assume_compatible: options.assume_compatible,
    };
    let mut analysis = Analysis {
        settings,
        rules: rules(subst),
        compatibility: compatibility(subst, &compat),
        classification: None,
        report: None,
        caveats: Vec::new(),
    };
    match compat {
        Compatibility::Fails(_) => return Ok(analysis),
        Compatibility::Unknown { depth } if !options.assume_compatible => {
            analysis.caveats.push(format!(
                "compatibility of finite and infinite words not certified up to power {depth}; pass the assume-compatible override to classify anyway"
            ));
            return Ok(analysis);
        }
        _ => {}
    }
    let report = classify(subst, options)?;
    analysis.classification = Some(classification(subst, &report));
    analysis.caveats = report.depth_caveats.clone();
    analysis.report = Some(report);
    Ok(analysis)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumLevel {
    pub level: usize,
    pub period_length: usize,
    pub window: [f64; 2],
    pub band_count: usize,
    pub total_measure: f64,
    pub merged_gaps: usize,
    pub possible_band_merging: bool,
    pub bands: Vec<[f64; 2]>,
}

impl From<&BandSpectrum> for SpectrumLevel {
    fn from(s: &BandSpectrum) -> Self {
        SpectrumLevel {
            level: s.level,
            period_length: s.period_word.len(),
            window: [s.window.0, s.window.1],
            band_count: s.bands.len(),
            total_measure: s.total_measure,
            merged_gaps: s.merged_gaps,
            possible_band_merging: s.possible_band_merging,
            bands: s.bands.iter().map(|b| [b.lo, b.hi]).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CubeLevelJson {
    pub level: usize,
    pub period: u128,
    pub frequency: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GordonJson {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_lr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequency_lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<CubeLevelJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub searched_length: Option<usize>,
}

pub fn gordon_json(subst: &Substitution, g: &GordonOutcome) -> GordonJson {
    let mut out = GordonJson {
        status: "hypothesis-not-found",
        u: None,
        e: None,
        lambda: None,
        rho: None,
        c_lr: None,
        frequency_lower_bound: None,
        levels: Vec::new(),
        sample_length: None,
        bound_holds: None,
        searched_length: None,
    };
    match g {
        GordonOutcome::HypothesisNotFound { depth } => out.searched_length = Some(*depth),
        GordonOutcome::Found(r) => {
            out.status = "found";
            out.u = Some(subst.render(&r.u));
            out.e = Some(symbol(subst, r.e));
            out.lambda = Some(r.lambda);
            out.rho = Some(r.rho);
            out.c_lr = Some(r.c_lr);
            out.frequency_lower_bound = Some(r.freq_lower_bound);
            out.levels = r
                .levels
                .iter()
                .map(|l| CubeLevelJson { level: l.level, period: l.n_k, frequency: l.frequency })
                .collect();
            out.sample_length = Some(r.sample_length);
            out.bound_holds = Some(r.bound_holds());
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub rules: BTreeMap<String, String>,
    pub potential: BTreeMap<String, f64>,
    pub start_letter: String,
    pub minimal: TriState,
    pub levels: Vec<SpectrumLevel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cubes: Option<GordonJson>,
}

impl SpectrumReport {
    pub fn new(
        subst: &Substitution,
        potential: &[f64],
        start: Letter,
        minimal: TriState,
        spectra: &[BandSpectrum],
        cubes: Option<GordonJson>,
    ) -> Self {
        SpectrumReport {
            rules: rules(subst),
            potential: subst.letters().map(|a| (symbol(subst, a), potential[a as usize])).collect(),
            start_letter: symbol(subst, start),
            minimal,
            levels: spectra.iter().map(SpectrumLevel::from).collect(),
            cubes,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TranscendenceJson {
    pub rules: BTreeMap<String, String>,
    pub case: StutterCase,
    pub case_tag: &'static str,
    pub letters_swapped: bool,
    pub p: String,
    pub u_lengths: Vec<u128>,
    pub v_lengths: Vec<u128>,
    pub v_prime_lengths: Vec<u128>,
    pub ratios_uv: Vec<f64>,
    pub ratios_vpv: Vec<f64>,
    pub v_unbounded: TriState,
    pub uv_bounded: TriState,
    pub vpv_positive: TriState,
    pub max_ratio_uv: f64,
    pub min_ratio_vpv: f64,
    pub minimal: TriState,
    pub depth: usize,
    pub base: u32,
    pub bits: usize,
    pub digits_used: usize,
    pub value_binary: String,
    pub value_decimal: String,
    pub precision_checked: bool,
    pub statement: String,
}

impl TranscendenceJson {
    pub fn new(subst: &Substitution, r: &TranscendenceReport, options: &TranscendenceOptions) -> Self {
        let w = &r.witness;
        TranscendenceJson {
            rules: rules(subst),
            case: w.skeleton.case.clone(),
            case_tag: w.skeleton.case.tag(),
            letters_swapped: w.skeleton.swapped,
            p: subst.render(&w.p),
            u_lengths: w.u.clone(),
            v_lengths: w.v.clone(),
            v_prime_lengths: w.v_prime.clone(),
            ratios_uv: w.ratios_uv(),
            ratios_vpv: w.ratios_vpv(),
            v_unbounded: r.conditions.v_unbounded,
            uv_bounded: r.conditions.uv_bounded,
            vpv_positive: r.conditions.vpv_positive,
            max_ratio_uv: r.conditions.max_ratio_uv,
            min_ratio_vpv: r.conditions.min_ratio_vpv,
            minimal: r.minimal,
            depth: options.depth,
            base: r.value.base,
            bits: r.value.bits,
            digits_used: r.value.digits_used,
            value_binary: r.value.to_binary_string(),
            value_decimal: r.value.to_decimal_string(((r.value.bits as f64) * std::f64::consts::LOG10_2) as usize),
            precision_checked: r.precision_checked,
            statement: r.statement.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionJson {
    pub z0: String,
    pub blocks: Vec<String>,
    pub z_end: String,
    pub cut_positions: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub rules: BTreeMap<String, String>,
    pub word: String,
    pub route: WindowRoute,
    pub l: usize,
    pub partitions: Vec<PartitionJson>,
    pub interior: [usize; 2],
    pub interior_cut_sets: usize,
    pub interior_cuts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preimage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preimage_offset: Option<usize>,
}

pub fn partition_json(shape: &TwoLetterShape, p: &OnePartition) -> PartitionJson {
    let subst = shape.substitution();
    let a = symbol(subst, shape.a);
    let b = symbol(subst, shape.b);
    PartitionJson {
        z0: subst.render(&p.z0),
        blocks: p
            .blocks
            .iter()
            .map(|blk| match blk {
                Block::Image => format!("S({a})"),
                Block::Fixed => b.clone(),
            })
            .collect(),
        z_end: subst.render(&p.z_end),
        cut_positions: p.cuts.clone(),
    }
}

impl PartitionReport {
    pub fn rules_of(shape: &TwoLetterShape) -> BTreeMap<String, String> {
        rules(shape.substitution())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remark_summaries() {
        let s = Substitution::from_strs("01", &["10", "1"]).unwrap();
        let a = analyze(&s, &ClassifyOptions::default()).unwrap();
        assert!(a.decided());
        assert_eq!(a.compatibility.status, "fails-certified");
        assert!(a.summary().contains("fails-certified"));

        let s = Substitution::from_strs("01", &["101", "1"]).unwrap();
        let a = analyze(&s, &ClassifyOptions::default()).unwrap();
        assert!(a.decided());
        assert!(a.summary().contains("not minimal"));

        let s = Substitution::from_strs("ab", &["ab", "a"]).unwrap();
        let a = analyze(&s, &ClassifyOptions::default()).unwrap();
        assert_eq!(a.summary(), "primitive, minimal, linearly repetitive, aperiodic (depth 20)");
        let json = a.into_report("fibonacci").to_json();
        assert!(json.contains("\"schema_version\": \"1\""));
        assert!(json.contains("\"depth_caveats\""));
    }

    #[test]
    fn undecided_compatibility() {
        let s = Substitution::from_strs("abc", &["ab", "a", "cc"]).unwrap();
        let a = analyze(&s, &ClassifyOptions::default()).unwrap();
        assert!(!a.decided());
        assert!(a.classification.is_none());
    }
}
