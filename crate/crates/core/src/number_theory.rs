//! Premises of the stutter criterion for fixed points of nonprimitive
//! two-letter substitutions, and high-precision evaluation of the number
//! `z = sum u_n / b^n` they define.
//!
//! Write the letters as `0` (growing) and `1` with `S(1) = 1`. Under bounded
//! gaps `S(0)` begins and ends with `0` and contains `1`, and aperiodicity
//! rules out `S(0) = 0 1^k 0`. So either `S(0) = 0 1^k 0 w 0` and the fixed
//! point `u` contains `0 1^k 0 1^k 0`, or `S(0) = 0 0 w 0` with `w` containing
//! `1` and `u` contains `000`. Writing `u = p x ...` at the first such
//! occurrence, the words `U_n = S^n(p)`, `V_n = S^n(0 1^k)` (or `S^n(0)`) and
//! `V'_n = S^n(0)` are the input of the Ferenczi–Mauduit criterion. Only
//! finitely many `n` are checked, so every condition is reported at depth.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::classifier::{ClassificationReport, Periodicity, TriState};
use crate::error::Error;
use crate::substitution::Substitution;
use crate::words::{Letter, Word};

/// Longest fixed-point prefix searched for the stutter pattern.
pub const PATTERN_SEARCH_CAP: usize = 1 << 20;
/// Extra digits beyond the requested precision.
pub const GUARD_DIGITS: usize = 8;
/// Margin for the ratio conditions.
pub const RATIO_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum StutterCase {
    /// `S(0) = 0 1^k 0 w 0`.
    ZeroOnesZero { k: usize, w: String },
    /// `S(0) = 0 0 w 0`, `w` containing `1`.
    DoubleZero { w: String },
}

impl StutterCase {
    pub fn tag(&self) -> &'static str {
        match self {
            StutterCase::ZeroOnesZero { .. } => "zero-ones-zero",
            StutterCase::DoubleZero { .. } => "double-zero",
        }
    }
}

/// The shape of `S(0)` with the roles of the two letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSkeleton {
    pub case: StutterCase,
    /// The growing letter, written `0` above.
    pub zero: Letter,
    /// The letter with `S(one) = one`.
    pub one: Letter,
    /// The letters were swapped to bring the input into the `S(1) = 1` shape.
    pub swapped: bool,
}

impl CaseSkeleton {
    /// The word whose cube-like repetition is located in the fixed point.
    pub fn pattern(&self) -> Word {
        match &self.case {
            StutterCase::ZeroOnesZero { k, .. } => {
                let mut w = Word::single(self.zero);
                for _ in 0..2 {
                    w.extend_from_slice(&vec![self.one; *k]);
                    w.push(self.zero);
                }
                w
            }
            StutterCase::DoubleZero { .. } => Word::from(vec![self.zero; 3]),
        }
    }

    /// The word `V` iterated to give `V_n`.
    pub fn v_word(&self) -> Word {
        match &self.case {
            StutterCase::ZeroOnesZero { k, .. } => {
                let mut w = Word::single(self.zero);
                w.extend_from_slice(&vec![self.one; *k]);
                w
            }
            StutterCase::DoubleZero { .. } => Word::single(self.zero),
        }
    }
}

/// Classifies the image of the growing letter of a nonprimitive two-letter
/// substitution.
pub fn detect_case(subst: &Substitution) -> Result<CaseSkeleton, Error> {
    if subst.size() != 2 {
        return Err(Error::Precondition(format!("needs a two-letter alphabet, got {} letters", subst.size())));
    }
    let fixed = |l: Letter| subst.image(l).as_slice() == [l];
    let (zero, one, swapped) = if fixed(1) {
        (0, 1, false)
    } else if fixed(0) {
        (1, 0, true)
    } else if subst.letters().all(|a| subst.image(a).letter_mask() == subst.full_mask()) {
        return Err(Error::Precondition("primitive case: covered by Allouche–Zamboni, not analyzed here".into()));
    } else {
        return Err(Error::Structure(format!(
            "no letter is fixed by S (S({}) = {}, S({}) = {})",
            subst.alphabet().symbol(0).name,
            subst.render(subst.image(0)),
            subst.alphabet().symbol(1).name,
            subst.render(subst.image(1)),
        )));
    };
    let image = subst.image(zero).as_slice();
    let rule = || format!("S({}) = {}", subst.alphabet().symbol(zero).name, subst.render(image));
    let ones = image.iter().filter(|&&l| l == one).count();
    if ones == 0 || image.len() < 3 {
        return Err(Error::Structure(format!("{} must contain both letters", rule())));
    }
    if image[0] != zero || image[image.len() - 1] != zero {
        return Err(Error::Structure(format!("{} must begin and end with the growing letter", rule())));
    }
    let case = if image[1] == one {
        let k = image[1..].iter().take_while(|&&l| l == one).count();
        if k + 2 == image.len() {
            return Err(Error::Structure(format!("{} is 0 1^{k} 0: periodic, excluded", rule())));
        }
        StutterCase::ZeroOnesZero { k, w: subst.render(&image[k + 2..image.len() - 1]) }
    } else {
        StutterCase::DoubleZero { w: subst.render(&image[2..image.len() - 1]) }
    };
    Ok(CaseSkeleton { case, zero, one, swapped })
}

/// Lengths `|U_n|`, `|V_n|`, `|V'_n|` for `n = 0..=depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct StutterWitness {
    pub skeleton: CaseSkeleton,
    /// Prefix of the fixed point before the first occurrence of the pattern.
    pub p: Word,
    pub u: Vec<u128>,
    pub v: Vec<u128>,
    pub v_prime: Vec<u128>,
}

impl StutterWitness {
    pub fn depth(&self) -> usize {
        self.v.len() - 1
    }

    pub fn ratios_uv(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(&a, &b)| a as f64 / b as f64).collect()
    }

    pub fn ratios_vpv(&self) -> Vec<f64> {
        self.v_prime.iter().zip(&self.v).map(|(&a, &b)| a as f64 / b as f64).collect()
    }
}

pub fn build_witness(subst: &Substitution, skeleton: &CaseSkeleton, depth: usize) -> Result<StutterWitness, Error> {
    let pattern = skeleton.pattern();
    let mut len = 256;
    let position = loop {
        let u = subst.fixed_point_prefix(skeleton.zero, len)?;
        if let Some(i) = u.windows(pattern.len()).position(|x| x == pattern.as_slice()) {
            break i;
        }
        if len >= PATTERN_SEARCH_CAP {
            return Err(Error::Structure(format!(
                "{} not found in the first {len} letters of the fixed point",
                subst.render(&pattern)
            )));
        }
        len *= 4;
    };
    let p = Word::from(&subst.fixed_point_prefix(skeleton.zero, position.max(1))?[..position]);
    let u = if p.is_empty() { vec![0; depth + 1] } else { subst.lengths(&p, depth)? };
    Ok(StutterWitness {
        skeleton: skeleton.clone(),
        u,
        v: subst.lengths(&skeleton.v_word(), depth)?,
        v_prime: subst.lengths(&[skeleton.zero], depth)?,
        p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StutterConditions {
    /// `|V_n|` grows without bound.
    pub v_unbounded: TriState,
    /// `|U_n| / |V_n|` stays bounded.
    pub uv_bounded: TriState,
    /// `|V'_n| / |V_n|` stays away from zero.
    pub vpv_positive: TriState,
    pub max_ratio_uv: f64,
    pub min_ratio_vpv: f64,
    pub depth: usize,
}

pub fn check_conditions(witness: &StutterWitness) -> Result<StutterConditions, Error> {
    let n = witness.depth();
    if n < 10 {
        return Err(Error::Precondition(format!("conditions need depth at least 10, got {n}")));
    }
    let v = &witness.v;
    let v_unbounded = if v[1..].windows(2).all(|w| w[0] < w[1]) {
        TriState::Yes
    } else if v[n] == v[n / 2] {
        TriState::No
    } else {
        TriState::Undecided
    };

    let uv = witness.ratios_uv();
    let max_ratio_uv = uv.iter().cloned().fold(0.0, f64::max);
    let tail = &uv[n / 2..];
    let steps: Vec<f64> = tail.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let settled = steps.last().is_some_and(|&d| d <= RATIO_MARGIN * uv[n].max(1.0));
    let shrinking = steps.windows(2).rev().take(3).all(|w| w[1] <= w[0] + f64::EPSILON);
    let uv_bounded = if settled && shrinking { TriState::Yes } else { TriState::Undecided };

    let vpv = witness.ratios_vpv();
    let min_ratio_vpv = vpv[n / 2..].iter().cloned().fold(f64::INFINITY, f64::min);
    let vpv_positive = if min_ratio_vpv > RATIO_MARGIN { TriState::Yes } else { TriState::Undecided };

    Ok(StutterConditions { v_unbounded, uv_bounded, vpv_positive, max_ratio_uv, min_ratio_vpv, depth: n })
}

/// `sum digits[i] / base^(i+1)` rounded to `bits` binary places.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionValue {
    pub base: u32,
    pub bits: usize,
    pub digits_used: usize,
    /// The value is `mantissa / 2^bits`, rounded to nearest.
    pub mantissa: BigUint,
}

impl ExpansionValue {
    pub fn to_f64(&self) -> f64 {
        let shift = self.bits.saturating_sub(60);
        let top = (&self.mantissa >> shift).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(-((self.bits - shift) as i32))
    }

    /// `0.` followed by `bits` binary digits.
    pub fn to_binary_string(&self) -> String {
        let body = self.mantissa.to_str_radix(2);
        if body.len() > self.bits {
            // rounded up to exactly 1
            return format!("1.{}", "0".repeat(self.bits));
        }
        format!("0.{}{}", "0".repeat(self.bits - body.len()), body)
    }

    /// Decimal digits after the point, truncated.
    pub fn to_decimal_string(&self, places: usize) -> String {
        let scaled = (&self.mantissa * BigUint::from(10u32).pow(places as u32)) >> self.bits;
        let body = scaled.to_str_radix(10);
        if body.len() > places {
            return format!("1.{}", "0".repeat(places));
        }
        format!("0.{}{}", "0".repeat(places - body.len()), body)
    }

    /// Truncation error of the digit prefix, as `(base, -digits_used)`:
    /// the true value lies within `base^-digits_used` of the partial sum.
    pub fn truncation_exponent(&self) -> (u32, i64) {
        (self.base, -(self.digits_used as i64))
    }

    /// Agreement with a more precise evaluation up to one unit in the last
    /// place of the coarser one.
    pub fn agrees_with(&self, finer: &ExpansionValue) -> bool {
        if finer.bits < self.bits {
            return finer.agrees_with(self);
        }
        let shift = finer.bits - self.bits;
        let ours = &self.mantissa << shift;
        let diff = if ours > finer.mantissa { &ours - &finer.mantissa } else { &finer.mantissa - &ours };
        diff <= BigUint::one() << shift
    }
}

/// Digits needed for `bits` binary places in base `base`.
pub fn digits_needed(base: u32, bits: usize) -> usize {
    (bits as f64 * std::f64::consts::LN_2 / (base as f64).ln()).ceil() as usize + GUARD_DIGITS
}

pub fn expansion_value(digits: &[u8], base: u32, bits: usize) -> Result<ExpansionValue, Error> {
    if base < 2 {
        return Err(Error::InvalidArgument(format!("base must be at least 2, got {base}")));
    }
    let need = digits_needed(base, bits);
    if digits.len() < need {
        return Err(Error::InvalidArgument(format!(
            "{} digits given, {need} needed for {bits} bits in base {base}",
            digits.len()
        )));
    }
    if let Some(&d) = digits.iter().find(|&&d| u32::from(d) >= base) {
        return Err(Error::InvalidArgument(format!("digit {d} out of range for base {base}")));
    }
    let b = BigUint::from(base);
    let mut numerator = BigUint::zero();
    for &d in digits {
        numerator = numerator * &b + BigUint::from(d);
    }
    let denominator = b.pow(digits.len() as u32);
    let scaled = (numerator << bits) + (&denominator >> 1u32);
    Ok(ExpansionValue { base, bits, digits_used: digits.len(), mantissa: scaled / denominator })
}

#[derive(Debug, Clone, Copy)]
pub struct TranscendenceOptions {
    pub depth: usize,
    pub bits: usize,
    pub base: u32,
}

impl Default for TranscendenceOptions {
    fn default() -> Self {
        Self { depth: 20, bits: 256, base: 2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranscendenceReport {
    pub witness: StutterWitness,
    pub conditions: StutterConditions,
    pub value: ExpansionValue,
    /// The same sum at `bits + 64` agrees with `value`.
    pub precision_checked: bool,
    pub minimal: TriState,
    pub aperiodic_depth: usize,
    pub statement: String,
}

/// Runs case detection, the witness and the value for the fixed point of the
/// growing letter, with digits given by alphabet positions.
pub fn transcendence_report(
    subst: &Substitution,
    classification: &ClassificationReport,
    options: &TranscendenceOptions,
) -> Result<TranscendenceReport, Error> {
    if classification.minimal == TriState::No {
        return Err(Error::Precondition("the subshift is not minimal".into()));
    }
    let aperiodic_depth = match classification.periodicity {
        Periodicity::Periodic { .. } => return Err(Error::Precondition("the subshift is periodic".into())),
        Periodicity::AperiodicUpToDepth { depth } => depth,
    };
    if classification.primitive() {
        return Err(Error::Precondition("primitive case: covered by Allouche–Zamboni, not analyzed here".into()));
    }
    let skeleton = detect_case(subst)?;
    let witness = build_witness(subst, &skeleton, options.depth)?;
    let conditions = check_conditions(&witness)?;

    let fine_bits = options.bits + 64;
    let u = subst.fixed_point_prefix(skeleton.zero, digits_needed(options.base, fine_bits))?;
    let digits: Vec<u8> = u.iter().copied().collect();
    let value = expansion_value(&digits, options.base, options.bits)?;
    let finer = expansion_value(&digits, options.base, fine_bits)?;
    let all_yes = [conditions.v_unbounded, conditions.uv_bounded, conditions.vpv_positive]
        .iter()
        .all(|&c| c == TriState::Yes);
    let statement = if all_yes && classification.minimal == TriState::Yes {
        format!(
            "criterion premises verified at depth {}; conclusion per the Ferenczi–Mauduit criterion",
            options.depth
        )
    } else {
        format!("criterion premises not all verified at depth {}", options.depth)
    };
    Ok(TranscendenceReport {
        precision_checked: value.agrees_with(&finer),
        witness,
        conditions,
        value,
        minimal: classification.minimal,
        aperiodic_depth,
        statement,
    })
}
