use crate::error::Error;
use crate::words::Word;

use super::{is_primitive, ReducedSubstitution, Substitution};

/// Constants with `lambda_v * theta^n <= |S^n(v)| <= rho_v * theta^n` for every
/// `v` in `words` and `1 <= n <= n_checked`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthEstimate {
    pub theta: f64,
    pub lambda_v: f64,
    pub rho_v: f64,
    pub words: Vec<Word>,
    pub n_checked: usize,
}

impl GrowthEstimate {
    /// Re-checks the sandwich against exact lengths.
    pub fn verify(&self, subst: &Substitution) -> Result<(), Error> {
        for v in &self.words {
            let lens = subst.lengths(v, self.n_checked)?;
            for (n, &len) in lens.iter().enumerate().skip(1) {
                let t = self.theta.powi(n as i32);
                let len = len as f64;
                if !(self.lambda_v * t <= len && len <= self.rho_v * t) {
                    return Err(Error::Validation(format!(
                        "growth sandwich fails for {} at n = {n}",
                        subst.render(v)
                    )));
                }
            }
        }
        Ok(())
    }
}

const ROOT_TOLERANCE: f64 = 1e-12;
const ROOT_MAX_STEPS: usize = 1_000_000;

/// Perron root of a primitive nonnegative matrix.
///
/// Power iteration with Collatz-Wielandt bounds: for positive `x`,
/// `min_i (Mx)_i / x_i <= theta <= max_i (Mx)_i / x_i`; iteration stops when
/// the bracket is narrower than `1e-12` relative.
pub fn perron_root(rows: &[Vec<f64>]) -> Result<f64, Error> {
    let n = rows.len();
    let mut x = vec![1.0f64; n];
    for _ in 0..ROOT_MAX_STEPS {
        let y: Vec<f64> = rows.iter().map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (yi, xi) in y.iter().zip(&x) {
            let q = yi / xi;
            lo = lo.min(q);
            hi = hi.max(q);
        }
        if hi - lo <= ROOT_TOLERANCE * hi {
            return Ok(0.5 * (lo + hi));
        }
        // iterate with M + I: same Perron vector, and no eigenvalue of modulus
        // close to the Perron root survives the shift
        let next: Vec<f64> = y.iter().zip(&x).map(|(yi, xi)| yi + xi).collect();
        let norm = next.iter().cloned().fold(0.0, f64::max);
        x = next.into_iter().map(|v| v / norm).collect();
    }
    Err(Error::NoConvergence(ROOT_MAX_STEPS))
}

/// Growth constants for the words `words` (each containing a growing letter).
///
/// `theta` is the Perron root of the reduced substitution's abelianization;
/// `lambda_v` / `rho_v` are the extrema of `|S^n(v)| / theta^n` over
/// `1 <= n <= n_max`, widened by a relative `1e-12` so the floating-point
/// sandwich check is robust.
pub fn perron_growth(
    subst: &Substitution,
    reduced: &ReducedSubstitution,
    words: &[Word],
    n_max: usize,
) -> Result<GrowthEstimate, Error> {
    if !is_primitive(&reduced.base).is_primitive() {
        return Err(Error::NotPrimitive);
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    for v in words {
        if reduced.project(v).is_empty() {
            return Err(Error::PureBoundedWord(subst.render(v)));
        }
    }
    let theta = perron_root(&reduced.base.abelianization().as_f64_rows())?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for v in words {
        let lens = subst.lengths(v, n_max)?;
        for (n, &len) in lens.iter().enumerate().skip(1) {
            let r = len as f64 / theta.powi(n as i32);
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    Ok(GrowthEstimate {
        theta,
        lambda_v: lo * (1.0 - 1e-12),
        rho_v: hi * (1.0 + 1e-12),
        words: words.to_vec(),
        n_checked: n_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::{bounded_letters, reduced_substitution};

    fn growth(s: &Substitution, words: &[&str]) -> GrowthEstimate {
        let split = bounded_letters(s);
        let r = reduced_substitution(s, &split).unwrap();
        let ws: Vec<Word> = words.iter().map(|w| s.alphabet().parse(w).unwrap()).collect();
        perron_growth(s, &r, &ws, 30).unwrap()
    }

    #[test]
    fn theta_examples() {
        let s = Substitution::from_strs("ab", &["abaa", "b"]).unwrap();
        assert!((growth(&s, &["a"]).theta - 3.0).abs() < 1e-12);
        let f = Substitution::from_strs("ab", &["ab", "a"]).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((growth(&f, &["a"]).theta - golden).abs() < 1e-12);
        let c = Substitution::from_strs("ab", &["ab", "ab"]).unwrap();
        assert!((growth(&c, &["a"]).theta - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sandwich_holds_by_construction() {
        let s = Substitution::from_strs("ab", &["abaa", "b"]).unwrap();
        let g = growth(&s, &["a", "ab", "aab"]);
        g.verify(&s).unwrap();
        for v in &g.words {
            let one = s.length_of_power(v, 1).unwrap() as f64 / g.theta;
            assert!(g.lambda_v <= one && one <= g.rho_v);
        }
    }

    #[test]
    fn rejects_pure_bounded_words_and_imprimitive_reduction() {
        let s = Substitution::from_strs("ab", &["abaa", "b"]).unwrap();
        let split = bounded_letters(&s);
        let r = reduced_substitution(&s, &split).unwrap();
        let b = s.alphabet().parse("b").unwrap();
        assert!(matches!(perron_growth(&s, &r, &[b], 10), Err(Error::PureBoundedWord(_))));

        let s = Substitution::from_strs("abc", &["ab", "b", "cc"]).unwrap();
        let split = bounded_letters(&s);
        let r = reduced_substitution(&s, &split).unwrap();
        let a = s.alphabet().parse("a").unwrap();
        assert!(matches!(perron_growth(&s, &r, &[a], 10), Err(Error::NotPrimitive)));
    }

    #[test]
    fn perron_root_matches_ratio_of_lengths() {
        for (chars, rules) in [("ab", vec!["ab", "a"]), ("ab", vec!["ab", "ba"]), ("abc", vec!["abc", "ac", "b"])] {
            let s = Substitution::from_strs(chars, &rules).unwrap();
            let theta = perron_root(&s.abelianization().as_f64_rows()).unwrap();
            let l = s.lengths(&[0], 41).unwrap();
            let ratio = l[41] as f64 / l[40] as f64;
            assert!((theta - ratio).abs() < 1e-8, "{chars} {rules:?}: {theta} vs {ratio}");
        }
    }
}
