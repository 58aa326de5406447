//! Planar Green functions and closed-form extremal envelopes.
//!
//! For a product set `K = E_1 × ⋯ × E_d` with regular planar factors, the
//! extremal growth function of `Poly(nC)` is the body's upper envelope
//! applied to the factor Green functions:
//! `V_{C,K}(z) = φ_C(g_{E_1}(z_1), …, g_{E_d}(z_d))`. For bodies sandwiched
//! between the axis cross and the simplex this reduces to `max_j g_{E_j}`;
//! for the triangle it is `max(0, β·g_{E_1}, α·g_{E_2})`. On the Euclidean
//! unit ball closed forms exist for the axis cross and the simplex only.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::body::Body;
use crate::error::{Error, Result};

/// Planar compact set with a classical Green function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlanarCompactum {
    /// Closed disk; `center` is `(re, im)`.
    Disk { center: [f64; 2], radius: f64 },
    /// Real segment `[a, b]`, `a < b`.
    Segment { a: f64, b: f64 },
}

impl PlanarCompactum {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PlanarCompactum::Disk { radius, .. } => {
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "disk radius must be positive, got {radius}"
                    )));
                }
            }
            PlanarCompactum::Segment { a, b } => {
                if !(b > a && a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "segment needs a < b, got [{a}, {b}]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Green function with pole at infinity, `g ≥ 0`, zero on the set.
    ///
    /// Disk: `log⁺(|z - c| / r)`. Segment: `log|w + √(w² - 1)|` with
    /// `w = (2z - a - b)/(b - a)`, taking the square-root branch that puts
    /// the modulus at least 1 (the two candidates have product 1).
    pub fn green(&self, z: Complex64) -> f64 {
        match *self {
            PlanarCompactum::Disk { center, radius } => {
                let c = Complex64::new(center[0], center[1]);
                ((z - c).norm() / radius).ln().max(0.0)
            }
            PlanarCompactum::Segment { a, b } => {
                let w = (2.0 * z - a - b) / (b - a);
                let s = (w * w - Complex64::new(1.0, 0.0)).sqrt();
                (w + s).norm().max((w - s).norm()).ln()
            }
        }
    }

    /// Points of the set itself, used for boundary-value spot checks and
    /// grid-estimated sup norms.
    pub fn boundary_sample(&self, count: usize) -> Vec<Complex64> {
        match *self {
            PlanarCompactum::Disk { center, radius } => {
                let c = Complex64::new(center[0], center[1]);
                (0..count)
                    .map(|k| {
                        let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                        c + radius * Complex64::new(t.cos(), t.sin())
                    })
                    .collect()
            }
            PlanarCompactum::Segment { a, b } => {
                // Chebyshev points: equidistributed for the segment's
                // equilibrium (arcsine) measure.
                let c = 0.5 * (a + b);
                let h = 0.5 * (b - a);
                (0..count)
                    .map(|k| {
                        let t = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * count) as f64;
                        Complex64::new(c + h * t.cos(), 0.0)
                    })
                    .collect()
            }
        }
    }
}

/// Cartesian product of planar compacta, one factor per coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductSet {
    pub factors: Vec<PlanarCompactum>,
}

impl ProductSet {
    pub fn new(factors: Vec<PlanarCompactum>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("product set needs at least one factor".into()));
        }
        for f in &factors {
            f.validate()?;
        }
        Ok(ProductSet { factors })
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }
}

/// Extremal growth function of `Poly(nC)` relative to a product set.
///
/// Evaluates `φ_C` on the vector of factor Green functions; exact for every
/// supported body (the factor Green values are nonnegative, so the `max`
/// with zero in `φ_C` is inactive for simplex-hulled bodies).
pub fn product_extremal(body: &Body, set: &ProductSet, z: &[Complex64]) -> Result<f64> {
    if set.dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: set.dim() });
    }
    if z.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: z.len() });
    }
    let greens: Vec<f64> =
        set.factors.iter().zip(z.iter()).map(|(factor, &zi)| factor.green(zi)).collect();
    body.indicator_phi(&greens)
}

/// Extremal growth function relative to the Euclidean unit ball.
///
/// Axis cross: `max_j log⁺|z_j|`. Simplex: `½·log⁺(Σ |z_j|²)`. No closed
/// form is available for the strict ℓ^p bodies or triangles.
pub fn ball_extremal(body: &Body, z: &[Complex64]) -> Result<f64> {
    if z.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: z.len() });
    }
    match *body {
        Body::AxisCross { .. } => {
            Ok(z.iter().fold(0f64, |acc, zi| acc.max(zi.norm().ln())))
        }
        Body::Simplex { .. } => {
            let s: f64 = z.iter().map(|zi| zi.norm_sqr()).sum();
            Ok(0.5 * s.ln().max(0.0))
        }
        _ => Err(Error::NoClosedForm(format!(
            "ball extremal function has no closed form for {body}"
        ))),
    }
}

/// Logarithmic upper envelope `H_C(z) = φ_C(log|z_1|, …, log|z_d|)`.
///
/// Coincides with the extremal function when `K` is the unit torus. Zero
/// coordinates contribute `-∞` to the envelope's argument, which the `max`
/// against zero absorbs, so the result is always finite and `≥ 0`.
pub fn log_indicator(body: &Body, z: &[Complex64]) -> Result<f64> {
    if z.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: z.len() });
    }
    let logs: Vec<f64> = z.iter().map(|zi| zi.norm().ln()).collect();
    match *body {
        Body::Triangle { alpha, beta } => {
            Ok(0f64.max(beta * logs[0]).max(alpha * logs[1]))
        }
        _ => Ok(logs.iter().fold(0f64, |acc, &v| acc.max(v))),
    }
}

/// Binary entropy with natural logarithm:
/// `f(x) = -[(1-x)·ln(1-x) + x·ln x]`, continuously extended by 0 at the
/// endpoints. Controls binomial growth: `ln C(n,k) ≤ n·f(k/n)` and
/// `C(n,k) ≥ e^{n·f(k/n)}/(n+1)`.
pub fn entropy_f(x: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x), "entropy_f needs x in [0,1], got {x}");
    let term = |t: f64| if t == 0.0 { 0.0 } else { t * t.ln() };
    -(term(x) + term(1.0 - x))
}
