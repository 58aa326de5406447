//! Univariate polynomial roots by companion-matrix eigenvalues.
//!
//! The coefficient vector is trimmed of numerically-zero leading terms,
//! normalized to a monic polynomial, and fed to a complex Schur
//! decomposition; each eigenvalue then gets one guarded Newton polish to
//! tighten residuals. The Schur iteration runs under a finite budget:
//! if it stalls (which happens for equimodular root sets, where the
//! companion matrix is a scaled permutation), the polynomial is rewritten
//! in a shifted variable and solved again. This is the standard dense
//! method: robust for the moderate degrees produced by slice
//! restrictions, with no pretense of handling wildly unbalanced
//! coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::consts::{COEFF_TRIM_REL_TOL, SCHUR_EPS, SCHUR_ITERS_PER_DIM};
use crate::error::{Error, Result};

/// Variable shifts tried when the direct companion iteration stalls.
///
/// Shifted QR can cycle on companion matrices whose eigenvalues share a
/// modulus (the companion of `z^k - c` is a scaled permutation).
/// Rewriting the polynomial in powers of `z - s` destroys that symmetry
/// without changing the roots, which are recovered by adding `s` back.
const FALLBACK_SHIFTS: [Complex64; 2] = [
    Complex64 { re: 0.31, im: 0.17 },
    Complex64 { re: -0.73, im: 0.41 },
];

/// Drops trailing coefficients below `COEFF_TRIM_REL_TOL` times the
/// largest magnitude; returns the effective ascending coefficients.
pub fn trim_coefficients(coeffs: &[Complex64]) -> Vec<Complex64> {
    let max_mag = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if max_mag == 0.0 {
        return Vec::new();
    }
    let cut = COEFF_TRIM_REL_TOL * max_mag;
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1].norm() <= cut {
        end -= 1;
    }
    coeffs[..end].to_vec()
}

/// Evaluates `p` (ascending coefficients) and its derivative at `z`.
pub fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Eigenvalues of the monic companion matrix of the ascending
/// coefficient vector, or `None` if the Schur iteration exhausts its
/// budget.
fn companion_eigenvalues(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let mut companion = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let schur = companion.try_schur(SCHUR_EPS, SCHUR_ITERS_PER_DIM * deg)?;
    let eigenvalues = schur.eigenvalues()?;
    Some(eigenvalues.iter().copied().collect())
}

/// Coefficients of `p(s + y)` in powers of `y`, by the Ruffini-Horner
/// repeated synthetic division.
fn shifted_coefficients(coeffs: &[Complex64], s: Complex64) -> Vec<Complex64> {
    let mut b = coeffs.to_vec();
    let deg = b.len() - 1;
    for k in 0..deg {
        for j in (k..deg).rev() {
            let carry = s * b[j + 1];
            b[j] += carry;
        }
    }
    b
}

/// All complex roots of the polynomial with ascending coefficients
/// `coeffs`, with multiplicity. Errors on the zero polynomial; a constant
/// has no roots.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let trimmed = trim_coefficients(coeffs);
    if trimmed.is_empty() {
        return Err(Error::InvalidParameter(
            "root finding needs a nonzero polynomial".into(),
        ));
    }
    let deg = trimmed.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = trimmed[deg];
    if deg == 1 {
        return Ok(vec![-trimmed[0] / lead]);
    }
    let mut found = companion_eigenvalues(&trimmed);
    if found.is_none() {
        for &s in &FALLBACK_SHIFTS {
            // The shift preserves the leading coefficient exactly.
            let shifted = shifted_coefficients(&trimmed, s);
            if let Some(mut ys) = companion_eigenvalues(&shifted) {
                for y in &mut ys {
                    *y += s;
                }
                found = Some(ys);
                break;
            }
        }
    }
    let mut roots = found
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    for r in &mut roots {
        // One guarded Newton step; skip near-critical points.
        let (p, dp) = horner_with_derivative(&trimmed, *r);
        if dp.norm() > 1e-12 * (1.0 + p.norm()) {
            let step = p / dp;
            if step.norm() < 1.0 {
                *r -= step;
            }
        }
    }
    Ok(roots)
}
