//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library beyond reading the rules of a substitution.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use subdyn::substitution::Substitution;

pub type Factors = Vec<BTreeSet<Vec<u8>>>;

pub fn rules(s: &Substitution) -> Vec<Vec<u8>> {
    s.rules().iter().map(|w| w.to_vec()).collect()
}

pub fn apply(rules: &[Vec<u8>], w: &[u8]) -> Vec<u8> {
    w.iter().flat_map(|&l| rules[l as usize].iter().copied()).collect()
}

pub fn iterate(rules: &[Vec<u8>], w: &[u8], n: usize) -> Vec<u8> {
    let mut x = w.to_vec();
    for _ in 0..n {
        x = apply(rules, &x);
    }
    x
}

/// `|S^n(w)|` through letter counts.
pub fn length(rules: &[Vec<u8>], w: &[u8], n: usize) -> u128 {
    let d = rules.len();
    let mut counts = vec![0u128; d];
    for &l in w {
        counts[l as usize] += 1;
    }
    for _ in 0..n {
        let mut next = vec![0u128; d];
        for (a, &c) in counts.iter().enumerate() {
            for &l in &rules[a] {
                next[l as usize] += c;
            }
        }
        counts = next;
    }
    counts.iter().sum()
}

/// A letter grows iff its length still increases between `2d` and `3d`
/// iterations: bounded lengths settle within `d` steps, growing ones increase
/// at least once every `d` steps.
pub fn growing(rules: &[Vec<u8>]) -> Vec<bool> {
    let d = rules.len();
    (0..d as u8).map(|a| length(rules, &[a], 3 * d + 2) > length(rules, &[a], 2 * d + 1)).collect()
}

pub fn erase(growing: &[bool], w: &[u8]) -> Vec<u8> {
    w.iter().copied().filter(|&l| growing[l as usize]).collect()
}

fn scan(word: &[u8], max_len: usize, into: &mut Factors) -> usize {
    let mut fresh = 0;
    for i in 0..word.len() {
        for len in 1..=max_len.min(word.len() - i) {
            if into[len].insert(word[i..i + len].to_vec()) {
                fresh += 1;
            }
        }
    }
    fresh
}

/// Factors of length `1..=max_len` of the words `S^n(a)`: every letter is
/// iterated until three consecutive powers add nothing new (and at least
/// `max_len` powers were scanned) or the word outgrows `cap` letters.
pub fn factors(s: &Substitution, max_len: usize) -> Factors {
    let r = rules(s);
    let cap = 400_000;
    let mut out: Factors = vec![BTreeSet::new(); max_len + 1];
    for a in 0..r.len() as u8 {
        let mut w = vec![a];
        let mut quiet = 0;
        let mut n = 0;
        loop {
            if scan(&w, max_len, &mut out) == 0 {
                quiet += 1;
            } else {
                quiet = 0;
            }
            n += 1;
            if (quiet >= 3 && n > max_len) || w.len() > cap {
                break;
            }
            w = apply(&r, &w);
        }
    }
    out
}

/// Occurrences of `v` in `w`, overlaps included.
pub fn occurrences(v: &[u8], w: &[u8]) -> usize {
    if v.len() > w.len() {
        return 0;
    }
    w.windows(v.len()).filter(|x| *x == v).count()
}

/// `x` with `xv` a factor, `xv` starting with `v` and exactly two
/// occurrences of `v` in `xv`.
pub fn return_words(f: &Factors, v: &[u8]) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::new();
    for layer in f.iter().skip(v.len() + 1) {
        for u in layer {
            if u.starts_with(v) && u.ends_with(v) && occurrences(v, u) == 2 {
                out.insert(u[..u.len() - v.len()].to_vec());
            }
        }
    }
    out
}

/// Shortest, then least, `u` with `u^k u[0]` a factor and `u` accepted by
/// `keep`, searching `k |u| < max_len`.
pub fn find_power(f: &Factors, keep: impl Fn(&[u8]) -> bool, k: usize) -> Option<Vec<u8>> {
    let max_len = f.len() - 1;
    let mut m = 1;
    while m * k < max_len {
        for u in &f[m] {
            if !keep(u) {
                continue;
            }
            let mut c: Vec<u8> = u.repeat(k);
            c.push(u[0]);
            if f[c.len()].contains(&c) {
                return Some(u.clone());
            }
        }
        m += 1;
    }
    None
}

/// Smallest `L` such that every window of `x` of length `L` contains every
/// length-`n` factor of `x`, counting only windows between two occurrences.
pub fn repetitivity(x: &[u8], n: usize) -> usize {
    let mut seen: HashMap<&[u8], (usize, usize)> = HashMap::new();
    for (i, v) in x.windows(n).enumerate() {
        seen.entry(v)
            .and_modify(|(last, gap)| {
                *gap = (*gap).max(i - *last);
                *last = i;
            })
            .or_insert((i, 0));
    }
    seen.values().map(|&(_, gap)| gap.max(1) - 1 + n).max().unwrap_or(n)
}

/// Share of positions `j` where `x[j..j+3n]` has period `n`.
pub fn cube_frequency(x: &[u8], n: usize) -> f64 {
    let positions = x.len() - 3 * n + 1;
    let hits = (0..positions)
        .filter(|&j| x[j..j + 2 * n] == x[j + n..j + 3 * n])
        .count();
    hits as f64 / positions as f64
}

/// Prefix of length `len` of the fixed point starting with `a` (the image of
/// `a` must start with `a`).
pub fn fixed_point(rules: &[Vec<u8>], a: u8, len: usize) -> Vec<u8> {
    assert_eq!(rules[a as usize][0], a);
    let mut w = vec![a];
    while w.len() < len {
        let next = apply(rules, &w);
        assert!(next.len() > w.len(), "letter does not grow");
        w = next;
    }
    w.truncate(len);
    w
}
