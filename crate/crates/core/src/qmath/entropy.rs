use super::matrix::{DensityMatrix, PSD_TOL};
use crate::error::{Error, Result};

const BISECTION_MAX_ITER: usize = 200;

/// Von Neumann entropy in bits, `-Σ λ log₂ λ` with `0 log 0 = 0`.
///
/// Eigenvalues in `[-1e-10, 0]` are clamped to zero; anything more negative
/// is reported as a PSD violation.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = rho.eigenvalues();
    if let Some(&min) = eig.first() {
        if min < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
    }
    let s: f64 = eig
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum();
    Ok(s.clamp(0.0, (rho.dim() as f64).log2()))
}

/// Binary Shannon entropy `h₂(q)` in bits.
pub fn binary_entropy(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("q", q, "binary entropy needs a probability in [0, 1]"));
    }
    Ok(h2(q))
}

/// `h₂` for callers that already hold a probability.
pub(crate) fn h2(q: f64) -> f64 {
    if q <= 0.0 || q >= 1.0 {
        0.0
    } else {
        -q * q.log2() - (1.0 - q) * (1.0 - q).log2()
    }
}

/// `h₂` saturated at 1 for error rates at or beyond one half.
pub(crate) fn h2_saturating(q: f64) -> f64 {
    if q >= 0.5 {
        1.0
    } else {
        h2(q.max(0.0))
    }
}

/// Inverse of `h₂` on the branch `[0, 0.5]`.
///
/// Bisection runs until the bracket collapses to adjacent floats (or 200
/// iterations), so `h₂(result)` matches `y` well inside 1e-12.
pub fn inv_binary_entropy(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::domain("y", y, "inverse binary entropy needs a value in [0, 1]"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h2(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick whichever endpoint lands closer
    if (h2(lo) - y).abs() <= (h2(hi) - y).abs() {
        Ok(lo)
    } else {
        Ok(hi)
    }
}
