mod common;

use num_bigint::BigUint;
use proptest::prelude::*;

use subdyn::classifier::{classify, ClassifyOptions, Periodicity, TriState};
use subdyn::number_theory::{build_witness, detect_case, digits_needed, expansion_value};
use subdyn::substitution::Substitution;

proptest! {
    #[test]
    fn two_precisions_agree(digits in prop::collection::vec(0u8..10, 400), base in 2u32..=10, bits in 32usize..=200) {
        let digits: Vec<u8> = digits.into_iter().map(|d| d % base as u8).collect();
        assert!(digits.len() >= digits_needed(base, bits + 64));
        let coarse = expansion_value(&digits, base, bits).unwrap();
        let fine = expansion_value(&digits, base, bits + 64).unwrap();
        prop_assert!(coarse.agrees_with(&fine));
        let naive: f64 = digits.iter().take(60).enumerate().map(|(i, &d)| d as f64 / (base as f64).powi(i as i32 + 1)).sum();
        // rounding to `bits` places plus the tail after 60 digits
        let tol = 2f64.powi(-(bits as i32)) + (base as f64).powi(-59) + 1e-15;
        prop_assert!((coarse.to_f64() - naive).abs() <= tol);
    }
}

// every minimal aperiodic rule in the `S(1) = 1` shape has one of the two forms
#[test]
fn case_dichotomy() {
    let mut matched = 0;
    for len in 1..=5u32 {
        for code in 0..1u32 << len {
            let middle: String = (0..len).map(|i| if code >> i & 1 == 1 { '1' } else { '0' }).collect();
            if !middle.contains('1') {
                continue;
            }
            let text = format!("0{middle}0");
            let s = Substitution::from_strs("01", &[&text, "1"]).unwrap();
            let r = classify(&s, &ClassifyOptions::default()).unwrap();
            if r.minimal != TriState::Yes || matches!(r.periodicity, Periodicity::Periodic { .. }) {
                continue;
            }
            let skeleton = detect_case(&s).unwrap_or_else(|e| panic!("{text}: {e}"));
            let w = build_witness(&s, &skeleton, 12).unwrap();
            assert!(w.v.windows(2).skip(1).all(|p| p[0] < p[1]), "{text}");
            for n in 0..=12 {
                assert_eq!(w.v[n], common::length(&common::rules(&s), &skeleton.v_word(), n), "{text}");
                if n <= 6 {
                    assert_eq!(w.v[n], s.iterate(&skeleton.v_word(), n).len() as u128, "{text}");
                }
            }
            matched += 1;
        }
    }
    assert!(matched > 20);
}

#[test]
fn geometric_series() {
    let digits: Vec<u8> = (0..400).map(|i| (i % 2) as u8).collect();
    let v = expansion_value(&digits, 2, 256).unwrap();
    // round(2^256 / 3)
    let third = ((BigUint::from(1u8) << 256u32) + BigUint::from(1u8)) / BigUint::from(3u8);
    assert_eq!(v.mantissa, third);

    let mut ones = vec![0u8; 300];
    ones[0] = 1;
    let v = expansion_value(&ones, 3, 128).unwrap();
    assert!((v.to_f64() - 1.0 / 3.0).abs() < 1e-16);
}

#[test]
fn form_two_ratio_is_one() {
    for image in ["00110", "0010", "001110", "0011010"] {
        let s = Substitution::from_strs("01", &[image, "1"]).unwrap();
        let skeleton = detect_case(&s).unwrap();
        let w = build_witness(&s, &skeleton, 25).unwrap();
        assert!(w.ratios_vpv().iter().all(|&r| r == 1.0), "{image}");
    }
}
