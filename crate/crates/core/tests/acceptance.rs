//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines always reach the output; exits nonzero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subdyn::catalog;
use subdyn::classifier::{classify, ClassificationReport, ClassifyOptions, GapCause, TriState};
use subdyn::language::{factor_language, factors_of_length, find_power, return_words, ClosureOptions};
use subdyn::number_theory::{
    build_witness, detect_case, digits_needed, expansion_value, transcendence_report, StutterCase,
    TranscendenceOptions,
};
use subdyn::par::Execution;
use subdyn::recognizer::{
    desubstitute, enumerate_one_partitions, interior_cut_set_counts, recognition_rule, Block, RecognizerOptions,
    TwoLetterShape,
};
use subdyn::report::analyze;
use subdyn::spectral::{
    band_spectrum, finite_section_eigenvalues, gordon_check, transfer_matrix, GordonOptions, GordonOutcome, Potential,
};
use subdyn::substitution::{bounded_letters, reduced_substitution, Substitution};

type Outcome = Result<String, String>;
/// Name, check, time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn entry(name: &str) -> Substitution {
    catalog::lookup(name).unwrap().definition.substitution().unwrap()
}

fn entries() -> Vec<(&'static str, Substitution)> {
    catalog::names().map(|n| (n, entry(n))).collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn classified(s: &Substitution) -> Option<ClassificationReport> {
    classify(s, &ClassifyOptions::default()).ok()
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}.json", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn counterexamples() -> Outcome {
    let mut timings = Vec::new();
    for name in ["remark1b", "remarkc"] {
        let start = Instant::now();
        let analysis = analyze(&entry(name), &ClassifyOptions::default()).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let cl = analysis.report.clone();
        let json = analysis.into_report(name).to_json();
        check(json.trim_end() == golden(name).trim_end(), || format!("{name}: report differs from golden file"))?;
        check(elapsed < Duration::from_secs(1), || format!("{name}: took {elapsed:?}"))?;
        timings.push(format!("{name} {:.0} ms", elapsed.as_secs_f64() * 1e3));
        if name == "remarkc" {
            let r = cl.ok_or("remarkc: no classification")?;
            check(r.minimal == TriState::No, || "remarkc: not decided non-minimal".into())?;
            let v = r.violation.ok_or("remarkc: no violation")?;
            check(matches!(v.cause, GapCause::GrowingBBlocks { .. }), || "remarkc: wrong cause".into())?;
            v.verify(&entry(name)).map_err(|e| e.to_string())?;
        }
    }
    Ok(timings.join(", "))
}

fn tri_agreement() -> Outcome {
    let mut minimal = Vec::new();
    let mut non_minimal = Vec::new();
    for (name, s) in entries() {
        let Some(r) = classified(&s) else { continue };
        match r.minimal {
            TriState::Yes => {
                let c = r.c_lr().ok_or(format!("{name}: minimal without C_LR"))?;
                let rules = common::rules(&s);
                let g = common::growing(&rules);
                let a = (0..s.size() as u8)
                    .find(|&a| g[a as usize] && rules[a as usize][0] == a)
                    .ok_or(format!("{name}: no fixed point"))?;
                let x = common::fixed_point(&rules, a, 200_000);
                for n in 1..=20 {
                    let rn = common::repetitivity(&x, n);
                    check(rn as f64 <= c * n as f64, || format!("{name}: R({n}) = {rn} > {c} * {n}"))?;
                }
                minimal.push(name);
            }
            TriState::No => {
                let v = r.violation.ok_or(format!("{name}: non-minimal without witness"))?;
                let rules = common::rules(&s);
                let host = common::iterate(&rules, &[v.provenance.letter], v.provenance.power);
                let w: &[u8] = &v.witness;
                // a factor of length 10 |e| avoiding the letter e
                check(
                    common::occurrences(w, &host) > 0 && !w.contains(&v.e) && w.len() >= 10,
                    || format!("{name}: witness does not show a gap violation"),
                )?;
                non_minimal.push(name);
            }
            TriState::Undecided => return Err(format!("{name}: undecided")),
        }
    }
    Ok(format!("R(n) <= C_LR n on {} minimal entries; witnesses for {:?}", minimal.len(), non_minimal))
}

fn growth_sandwich() -> Outcome {
    let mut checked = 0;
    let mut fib_theta = None;
    for (name, s) in entries() {
        let Some(r) = classified(&s) else { continue };
        let (Some(_), Some(lr)) = (&r.certificate, &r.lr) else { continue };
        let g = &lr.growth;
        let rules = common::rules(&s);
        for v in &lr.return_words {
            for n in 1..=30 {
                let len = common::length(&rules, v, n) as f64;
                let t = g.theta.powi(n as i32);
                check(g.lambda_v * t <= len && len <= g.rho_v * t, || {
                    format!("{name}: sandwich fails for {} at n = {n}", s.render(v))
                })?;
            }
        }
        if name == "fibonacci" {
            fib_theta = Some(g.theta);
        }
        checked += 1;
    }
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let theta = fib_theta.ok_or("fibonacci has no growth data")?;
    check((theta - golden).abs() < 1e-8, || format!("fibonacci theta {theta}"))?;
    Ok(format!("{checked} entries, 1 <= n <= 30; fibonacci theta - golden = {:.1e}", theta - golden))
}

fn random_substitution(rng: &mut ChaCha8Rng) -> Substitution {
    let d = rng.gen_range(2..=4);
    let chars: String = "abcd".chars().take(d).collect();
    let images: Vec<String> = (0..d)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            (0..len).map(|_| chars.as_bytes()[rng.gen_range(0..d)] as char).collect()
        })
        .collect();
    let refs: Vec<&str> = images.iter().map(String::as_str).collect();
    Substitution::from_strs(&chars, &refs).unwrap()
}

fn erasure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut done = 0;
    while done < 200 {
        let s = random_substitution(&mut rng);
        let rules = common::rules(&s);
        let g = common::growing(&rules);
        if !g.iter().any(|&b| b) {
            continue;
        }
        let split = bounded_letters(&s);
        for a in s.letters() {
            check(split.is_growing(a) == g[a as usize], || format!("{:?}: growth of letter {a}", s.rules()))?;
        }
        let reduced = reduced_substitution(&s, &split).map_err(|e| e.to_string())?;
        let x: Vec<u8> = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(0..s.size() as u8)).collect();
        let n = rng.gen_range(0..=6);
        let left = common::erase(&g, &common::iterate(&rules, &x, n));
        let right = reduced.embed(&reduced.base.iterate(&reduced.project(&x), n));
        check(left == right.to_vec(), || format!("{:?}, x = {x:?}, n = {n}", s.rules()))?;
        done += 1;
    }
    Ok("200 random instances".into())
}

fn spectral() -> Outcome {
    let zero = entry("zero-potential");
    let flat = Potential::new(vec![0.0; 2]);
    for level in 1..=8 {
        let b = band_spectrum(&zero, &flat, 0, level, Some((-3.0, 3.0)), Execution::default()).map_err(|e| e.to_string())?;
        check(
            b.bands.len() == 1 && (b.bands[0].lo + 2.0).abs() < 1e-8 && (b.bands[0].hi - 2.0).abs() < 1e-8,
            || format!("zero potential level {level}: {:?}", b.bands),
        )?;
    }

    // words of at most four sites keep the entries small enough that the
    // determinant is not dominated by cancellation
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let sites: Vec<f64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let energy = rng.gen_range(-2.5..=2.5);
        worst = worst.max((transfer_matrix(&sites, energy).det() - 1.0).abs());
    }
    check(worst <= 1e-10, || format!("det deviates by {worst:e}"))?;

    let fib = catalog::lookup("fibonacci").unwrap().definition;
    let (s, v) = (fib.substitution().unwrap(), fib.potential().unwrap());
    let measures: Vec<f64> = (4..=10)
        .map(|k| band_spectrum(&s, &v, 0, k, None, Execution::default()).map(|b| b.total_measure))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for (k, w) in measures.windows(2).enumerate() {
        check(w[1] < w[0] - 1e-6, || format!("fibonacci measure at level {} is {} after {}", k + 5, w[1], w[0]))?;
    }

    let n = 64;
    let eig = finite_section_eigenvalues(&vec![0.0; n], Execution::default()).map_err(|e| e.to_string())?;
    let mut want: Vec<f64> =
        (1..=n).map(|j| 2.0 * (std::f64::consts::PI * j as f64 / (n + 1) as f64).cos()).collect();
    want.sort_by(f64::total_cmp);
    let dev = eig.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    check(eig.len() == n && dev < 1e-8, || format!("finite section deviates by {dev:e}"))?;
    Ok(format!(
        "det error {worst:.1e}; fibonacci measures {:.4} .. {:.4}; finite section error {dev:.1e}",
        measures[0],
        measures[measures.len() - 1]
    ))
}

fn gordon() -> Outcome {
    let mut found = Vec::new();
    let opts = GordonOptions::default();
    for (name, s) in entries() {
        let Some(r) = classified(&s) else { continue };
        if r.minimal != TriState::Yes {
            continue;
        }
        let outcome = gordon_check(&s, &r, &opts).map_err(|e| format!("{name}: {e}"))?;
        if name == "thue-morse" {
            check(matches!(outcome, GordonOutcome::HypothesisNotFound { .. }), || "thue-morse has a cube".into())?;
        }
        let GordonOutcome::Found(g) = outcome else { continue };
        let rules = common::rules(&s);
        let start = (0..s.size() as u8)
            .find(|&a| rules[a as usize][0] == a && common::growing(&rules)[a as usize])
            .ok_or(format!("{name}: no fixed point"))?;
        let x = common::fixed_point(&rules, start, opts.sample_length);
        let mut cube = g.u.repeat(3);
        cube.push(g.u[0]);
        check(common::occurrences(&cube, &x) > 0, || format!("{name}: uuue not in the sample"))?;
        for k in 2..=6 {
            let n = common::length(&rules, &g.u, k) as usize;
            let f = common::cube_frequency(&x, n);
            check(f >= g.freq_lower_bound - 1e-3, || {
                format!("{name}: frequency {f} at level {k} below {}", g.freq_lower_bound)
            })?;
            let lib = g.levels.iter().find(|l| l.level == k).and_then(|l| l.frequency);
            check(lib.is_some_and(|l| (l - f).abs() < 1e-12), || format!("{name}: library frequency {lib:?} != {f}"))?;
        }
        found.push(name);
    }
    Ok(format!("bound holds for {found:?}; thue-morse: hypothesis not found"))
}

fn recognizer() -> Outcome {
    let s = entry("minimal-nonprimitive");
    let shape = TwoLetterShape::new(&s, &ClassifyOptions::default()).map_err(|e| e.to_string())?;
    let rule = recognition_rule(&shape, &RecognizerOptions::default()).map_err(|e| e.to_string())?;
    let l = shape.window;

    let limits = ClosureOptions::default().limits;
    let mut swept = 0;
    for len in 4 * l + 2..=600 {
        let layer = factors_of_length(&s, len, &limits);
        check(layer.saturated, || format!("length {len} not saturated"))?;
        let words: Vec<_> = layer.iter().cloned().collect();
        let counts = interior_cut_set_counts(&shape, &words, Execution::default()).map_err(|e| e.to_string())?;
        check(counts.keys().all(|&k| k == 1), || format!("length {len}: cut-set counts {counts:?}"))?;
        swept += words.len();
    }

    let threshold = shape.propagation_threshold().ok_or("no propagation threshold")?;
    let mut propagated = 0;
    for len in threshold + 1..=2 * threshold {
        for v in factors_of_length(&s, len, &limits).iter() {
            let parts = enumerate_one_partitions(&shape, v).map_err(|e| e.to_string())?;
            let lead = [Block::Image, Block::Image];
            if parts.iter().any(|p| p.starts_with(&lead)) {
                check(parts.iter().all(|p| p.starts_with(&lead)), || format!("propagation fails on {}", s.render(v)))?;
                propagated += 1;
            }
        }
    }

    let rules = common::rules(&s);
    let host = common::fixed_point(&rules, shape.a, 50_000);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut trips = 0;
    while trips < 100 {
        let len = rng.gen_range(30..=100);
        let at = rng.gen_range(0..host.len() - len);
        let x = &host[at..at + len];
        let w = common::apply(&rules, x);
        if w.len() <= 4 * l + 2 {
            continue;
        }
        let mut truth = vec![0];
        for &c in x {
            truth.push(truth.last().unwrap() + rules[c as usize].len());
        }
        let (pre, first) = desubstitute(&shape, &w, &rule).map_err(|e| e.to_string())?;
        let i = truth.binary_search(&first).map_err(|_| format!("first cut {first} is not a true cut"))?;
        check(!pre.is_empty() && x[i..].starts_with(&pre), || format!("round trip fails on {}", s.render(x)))?;
        let interior: Vec<usize> = truth.iter().copied().filter(|&c| c >= l && c < w.len() - l).collect();
        check(rule.cuts(&w) == interior, || format!("cuts differ on {}", s.render(x)))?;
        trips += 1;
    }
    Ok(format!(
        "L = {l}; {swept} factors of length {}..=600 unique; {propagated} factors propagate; 100 round trips",
        4 * l + 2
    ))
}

fn transcendence() -> Outcome {
    let form51 = detect_case(&entry("form51")).map_err(|e| e.to_string())?;
    check(form51.case == StutterCase::ZeroOnesZero { k: 1, w: String::new() }, || format!("form51: {:?}", form51.case))?;
    let form52 = detect_case(&entry("form52")).map_err(|e| e.to_string())?;
    check(form52.case == StutterCase::DoubleZero { w: "11".into() }, || format!("form52: {:?}", form52.case))?;

    let s52 = entry("form52");
    let witness = build_witness(&s52, &form52, 30).map_err(|e| e.to_string())?;
    check(witness.v_prime == witness.v, || "form52: |V'_n| != |V_n|".into())?;

    let bits = 256;
    for name in ["form51", "form52"] {
        let s = entry(name);
        let cl = classify(&s, &ClassifyOptions::default()).map_err(|e| e.to_string())?;
        let opts = TranscendenceOptions { bits, ..TranscendenceOptions::default() };
        let r = transcendence_report(&s, &cl, &opts).map_err(|e| e.to_string())?;
        check(r.precision_checked, || format!("{name}: precision check failed"))?;

        let digits = common::fixed_point(&common::rules(&s), 0, digits_needed(2, bits + 64));
        let coarse = expansion_value(&digits, 2, bits).map_err(|e| e.to_string())?;
        let fine = expansion_value(&digits, 2, bits + 64).map_err(|e| e.to_string())?;
        check(coarse.agrees_with(&fine), || format!("{name}: {bits} and {} bits disagree", bits + 64))?;
        let naive: f64 = digits.iter().take(60).enumerate().map(|(i, &d)| d as f64 * 0.5f64.powi(i as i32 + 1)).sum();
        check((coarse.to_f64() - naive).abs() < 1e-15, || format!("{name}: {} vs {naive}", coarse.to_f64()))?;
        check(r.value == coarse, || format!("{name}: report value differs"))?;
    }
    Ok("form detection pinned; |V'_n| = |V_n| for n <= 30; 256 vs 320 bits agree".into())
}

fn oracle_equivalence() -> Outcome {
    let depth = 12;
    let mut compared = 0;
    for (name, s) in entries() {
        let naive = common::factors(&s, depth);
        let f = factor_language(&s, depth, &ClosureOptions::default());
        check(f.saturated(), || format!("{name}: not saturated"))?;
        for n in 1..=depth {
            let lib: BTreeSet<Vec<u8>> = f.words_of_length(n).map(|w| w.to_vec()).collect();
            check(lib == naive[n], || format!("{name}: factors of length {n} differ"))?;
        }
        for v in naive.iter().take(4).flatten() {
            let lib: BTreeSet<Vec<u8>> =
                return_words(&f, v).map_err(|e| e.to_string())?.words.iter().map(|w| w.to_vec()).collect();
            check(lib == common::return_words(&naive, v), || format!("{name}: return words of {}", s.render(v)))?;
            compared += 1;
        }
        let g = common::growing(&common::rules(&s));
        for keep_growing in [false, true] {
            let keep = |u: &[u8]| !keep_growing || g[u[0] as usize];
            let lib = find_power(&f, keep, 3).map(|w| w.to_vec());
            let want = common::find_power(&naive, keep, 3);
            check(lib == want, || format!("{name}: find_power {lib:?} vs {want:?}"))?;
        }
    }
    Ok(format!("{} entries at depth {depth}; return words of {compared} factors", catalog::names().count()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("counterexample fidelity", counterexamples, 2),
        ("tri-agreement", tri_agreement, 30),
        ("growth sandwich", growth_sandwich, 5),
        ("erasure intertwining", erasure, 5),
        ("spectral sanity", spectral, 60),
        ("cube frequency bound", gordon, 60),
        ("recognizer uniqueness", recognizer, 60),
        ("transcendence premises", transcendence, 10),
        ("oracle equivalence", oracle_equivalence, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let outcome = outcome.and_then(|m| {
            if secs < *limit as f64 {
                Ok(m)
            } else {
                Err(format!("{m}; over the {limit} s limit"))
            }
        });
        match outcome {
            Ok(m) => println!("PASS {} {name} ({secs:.2} s): {m}", i + 1),
            Err(m) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.2} s): {m}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
