use crate::error::Error;
use crate::par::Execution;

/// Largest finite section accepted by [`finite_section_eigenvalues`].
pub const MAX_SECTION: usize = 4096;

const TOLERANCE: f64 = 1e-12;

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// diagonal `diag` and unit off-diagonal (Sturm count of the `LDL^T` pivots).
pub fn count_below(diag: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0f64;
    for (i, &a) in diag.iter().enumerate() {
        d = if i == 0 { a - x } else { a - x - 1.0 / d };
        if d == 0.0 {
            d = -f64::EPSILON * (a.abs() + x.abs() + 2.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest eigenvalue (`k` from 0) by bisection on the Sturm count.
pub fn kth_eigenvalue(diag: &[f64], k: usize) -> f64 {
    let (mut lo, mut hi) = gershgorin(diag);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= TOLERANCE * mid.abs().max(1.0) {
            break;
        }
        if count_below(diag, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn gershgorin(diag: &[f64]) -> (f64, f64) {
    let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 - 1.0;
    let hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0 + 1.0;
    (lo, hi)
}

/// All eigenvalues, ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], execution: Execution) -> Vec<f64> {
    execution.map_range(0..diag.len(), |k| kth_eigenvalue(diag, k))
}

/// Eigenvalues of the operator restricted to the sites of `sites` with
/// Dirichlet boundary conditions.
pub fn finite_section_eigenvalues(sites: &[f64], execution: Execution) -> Result<Vec<f64>, Error> {
    if sites.len() > MAX_SECTION {
        return Err(Error::InvalidArgument(format!(
            "finite section of {} sites exceeds the cap of {MAX_SECTION}",
            sites.len()
        )));
    }
    Ok(tridiagonal_eigenvalues(sites, execution))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(finite_section_eigenvalues(&[], Execution::Sequential).unwrap(), Vec::<f64>::new());
        let one = finite_section_eigenvalues(&[0.0], Execution::Sequential).unwrap();
        assert!(one[0].abs() < 1e-12);
        let two = finite_section_eigenvalues(&[0.0, 0.0], Execution::Sequential).unwrap();
        assert!((two[0] + 1.0).abs() < 1e-12 && (two[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_laplacian() {
        let n = 64;
        let ev = finite_section_eigenvalues(&vec![0.0; n], Execution::Parallel).unwrap();
        for (j, e) in ev.iter().enumerate() {
            let exact = 2.0 * (std::f64::consts::PI * (n - j) as f64 / (n + 1) as f64).cos();
            assert!((e - exact).abs() < 1e-10, "{j}: {e} vs {exact}");
        }
    }

    #[test]
    fn cap() {
        assert!(finite_section_eigenvalues(&vec![0.0; MAX_SECTION + 1], Execution::Sequential).is_err());
    }
}
