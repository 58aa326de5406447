//! Moment models: probability measures with computable monomial moments.
//!
//! Each model reports the inner products `⟨z^a, z^b⟩ = ∫ z^a conj(z)^b dμ`
//! that feed the Gram matrices of [`crate::orthopoly`]. The torus, circle,
//! and sphere-surface models are monomial-diagonal, so their norms are kept
//! in log scale and no factorization is ever needed; arcsine and product
//! models are handled by tensor structure; discrete quadrature models go
//! through the dense path.
//!
//! The module also produces the sup-norm comparison constants `M_n` with
//! `‖p‖_K ≤ M_n·‖p‖_μ` on `Poly(nC)`: exact `√(dim)` bounds for torus and
//! circle models, grid estimates (flagged as such) for the rest.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::body::Body;
use crate::consts::{BOUND_SAMPLE_POINTS, GRID_SAFETY};
use crate::error::{Error, Result};
use crate::orthopoly::OrthoBasis;

/// Probability measure with computable monomial moments.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureModel {
    /// Haar measure on the unit torus `(∂D)^d`.
    TorusHaar { d: usize },
    /// Product of circles `|z_i| = r_i` with Haar measure on each.
    CircleHaar { radii: Vec<f64> },
    /// Arcsine (Chebyshev equilibrium) measure on the real segment `[a, b]`.
    Arcsine { a: f64, b: f64 },
    /// Normalized surface measure on the unit sphere of `ℂ^d`.
    SphereSurface { d: usize },
    /// Product of one-dimensional factors (circle or arcsine).
    Product { factors: Vec<MeasureModel> },
    /// Finitely supported quadrature `Σ w_k δ_{nodes_k}`.
    Discrete { nodes: Vec<Vec<Complex64>>, weights: Vec<f64> },
}

/// Sup-vs-L² comparison constant for `Poly(nC)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BmBound {
    pub value: f64,
    /// True when the constant came from a finite sample of the support
    /// rather than a closed form.
    pub grid_estimated: bool,
}

impl MeasureModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureModel::TorusHaar { d } | MeasureModel::SphereSurface { d } => {
                if *d == 0 {
                    return Err(Error::InvalidParameter("measure dimension must be ≥ 1".into()));
                }
            }
            MeasureModel::CircleHaar { radii } => {
                if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
                    return Err(Error::InvalidParameter(
                        "circle radii must be positive and finite".into(),
                    ));
                }
            }
            MeasureModel::Arcsine { a, b } => {
                if !(b > a && a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "arcsine segment needs a < b, got [{a}, {b}]"
                    )));
                }
            }
            MeasureModel::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::InvalidParameter("product measure needs factors".into()));
                }
                for f in factors {
                    f.validate()?;
                    if f.dim() != 1 {
                        return Err(Error::InvalidParameter(
                            "product measure factors must be one-dimensional".into(),
                        ));
                    }
                    if matches!(f, MeasureModel::Discrete { .. } | MeasureModel::Product { .. }) {
                        return Err(Error::InvalidParameter(
                            "product factors must be circle or arcsine models".into(),
                        ));
                    }
                }
            }
            MeasureModel::Discrete { nodes, weights } => {
                if nodes.is_empty() || nodes.len() != weights.len() {
                    return Err(Error::InvalidParameter(
                        "discrete measure needs matching nonempty nodes and weights".into(),
                    ));
                }
                let d = nodes[0].len();
                if d == 0 || nodes.iter().any(|z| z.len() != d) {
                    return Err(Error::InvalidParameter(
                        "discrete nodes must share a positive dimension".into(),
                    ));
                }
                if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
                    return Err(Error::InvalidParameter(
                        "discrete weights must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            MeasureModel::TorusHaar { d } | MeasureModel::SphereSurface { d } => *d,
            MeasureModel::CircleHaar { radii } => radii.len(),
            MeasureModel::Arcsine { .. } => 1,
            MeasureModel::Product { factors } => factors.len(),
            MeasureModel::Discrete { nodes, .. } => nodes[0].len(),
        }
    }

    /// True when monomials are already orthogonal under the measure.
    pub fn is_monomial_diagonal(&self) -> bool {
        matches!(
            self,
            MeasureModel::TorusHaar { .. }
                | MeasureModel::CircleHaar { .. }
                | MeasureModel::SphereSurface { .. }
        )
    }

    /// `ln ⟨z^a, z^a⟩` for monomial-diagonal measures.
    ///
    /// Sphere-surface norms are `(d-1)!·a! / (d-1+|a|)!`, evaluated through
    /// log-gamma so that high degrees neither overflow nor underflow.
    pub fn log_monomial_norm_sq(&self, a: &[u32]) -> Result<f64> {
        self.check_index(a)?;
        match self {
            MeasureModel::TorusHaar { .. } => Ok(0.0),
            MeasureModel::CircleHaar { radii } => Ok(2.0
                * a.iter()
                    .zip(radii.iter())
                    .map(|(&ai, &r)| ai as f64 * r.ln())
                    .sum::<f64>()),
            MeasureModel::SphereSurface { d } => {
                let total: usize = a.iter().map(|&v| v as usize).sum();
                let mut ln = ln_gamma(*d as f64) - ln_gamma((*d + total) as f64);
                for &ai in a {
                    ln += ln_gamma(ai as f64 + 1.0);
                }
                Ok(ln)
            }
            _ => Err(Error::Unsupported(format!(
                "{self:?} is not monomial-diagonal"
            ))),
        }
    }

    /// Monomial inner product `⟨z^a, z^b⟩`.
    pub fn monomial_inner(&self, a: &[u32], b: &[u32]) -> Result<Complex64> {
        self.check_index(a)?;
        self.check_index(b)?;
        match self {
            MeasureModel::TorusHaar { .. }
            | MeasureModel::CircleHaar { .. }
            | MeasureModel::SphereSurface { .. } => {
                if a == b {
                    Ok(Complex64::new(self.log_monomial_norm_sq(a)?.exp(), 0.0))
                } else {
                    Ok(Complex64::new(0.0, 0.0))
                }
            }
            MeasureModel::Arcsine { a: lo, b: hi } => {
                Ok(Complex64::new(arcsine_moment(*lo, *hi, (a[0] + b[0]) as usize), 0.0))
            }
            MeasureModel::Product { factors } => {
                let mut acc = Complex64::new(1.0, 0.0);
                for (i, f) in factors.iter().enumerate() {
                    acc *= f.monomial_inner(&a[i..=i], &b[i..=i])?;
                }
                Ok(acc)
            }
            MeasureModel::Discrete { nodes, weights } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (z, &w) in nodes.iter().zip(weights.iter()) {
                    let mut term = Complex64::new(w, 0.0);
                    for (i, &zi) in z.iter().enumerate() {
                        term *= zi.powu(a[i]) * zi.conj().powu(b[i]);
                    }
                    acc += term;
                }
                Ok(acc)
            }
        }
    }

    fn check_index(&self, a: &[u32]) -> Result<()> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: a.len() });
        }
        Ok(())
    }

    /// Deterministic, equidistributed sample of the measure's support.
    ///
    /// Used for grid-estimated sup norms; the sample size is at least
    /// `count` for product-structured supports (per-axis counts are rounded
    /// up) and exactly `count` for the sphere. Discrete measures return
    /// their own nodes.
    pub fn support_sample(&self, count: usize) -> Vec<Vec<Complex64>> {
        match self {
            MeasureModel::TorusHaar { d } => {
                let radii = vec![1.0; *d];
                circle_grid(&radii, count)
            }
            MeasureModel::CircleHaar { radii } => circle_grid(radii, count),
            MeasureModel::Arcsine { a, b } => chebyshev_points(*a, *b, count)
                .into_iter()
                .map(|x| vec![Complex64::new(x, 0.0)])
                .collect(),
            MeasureModel::SphereSurface { d } => sphere_kronecker(*d, count),
            MeasureModel::Product { factors } => {
                let per_axis =
                    (count as f64).powf(1.0 / factors.len() as f64).ceil() as usize;
                let axes: Vec<Vec<Complex64>> = factors
                    .iter()
                    .map(|f| f.support_sample(per_axis).into_iter().map(|v| v[0]).collect())
                    .collect();
                cartesian(&axes)
            }
            MeasureModel::Discrete { nodes, .. } => nodes.clone(),
        }
    }

    /// Comparison constant `M_n` with `‖p‖_K ≤ M_n·‖p‖_μ` on `Poly(nC)`.
    ///
    /// * Torus and circle models: `M_n = √(dim Poly(nC))` exactly, by
    ///   Cauchy-Schwarz against the orthonormal monomials.
    /// * Everything else: `1.05 × max_j sup_sample |p_j|` over the
    ///   orthonormal basis and an equidistributed support sample, flagged
    ///   `grid_estimated`.
    pub fn bm_constant(&self, body: &Body, n: usize) -> Result<BmBound> {
        self.validate()?;
        if self.dim() != body.dim() {
            return Err(Error::DimensionMismatch { expected: body.dim(), got: self.dim() });
        }
        match self {
            MeasureModel::TorusHaar { .. } | MeasureModel::CircleHaar { .. } => {
                let m = body.lattice_dim(n)?;
                Ok(BmBound { value: (m as f64).sqrt(), grid_estimated: false })
            }
            _ => {
                let basis = OrthoBasis::new(body.clone(), self.clone(), n)?;
                let sample = self.support_sample(BOUND_SAMPLE_POINTS);
                let mut max_log = f64::NEG_INFINITY;
                for z in &sample {
                    for t in basis.log_abs_terms(z)? {
                        max_log = max_log.max(t);
                    }
                }
                Ok(BmBound { value: GRID_SAFETY * max_log.exp(), grid_estimated: true })
            }
        }
    }
}

/// `∫ x^k dμ` for the arcsine measure of `[lo, hi]`.
///
/// On `[-1, 1]` the moments satisfy `m_0 = 1`, `m_odd = 0`,
/// `m_k = m_{k-2}·(k-1)/k`; the affine pushforward `x = c + h·t` expands by
/// the binomial theorem.
fn arcsine_moment(lo: f64, hi: f64, k: usize) -> f64 {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut std_moments = vec![0.0; k + 1];
    std_moments[0] = 1.0;
    for j in 2..=k {
        if j % 2 == 0 {
            std_moments[j] = std_moments[j - 2] * (j - 1) as f64 / j as f64;
        }
    }
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        // binom = C(k, j); only even j contribute.
        if j % 2 == 0 {
            acc += binom * c.powi((k - j) as i32) * h.powi(j as i32) * std_moments[j];
        }
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Chebyshev points of `[a, b]`: equidistributed for the arcsine measure.
fn chebyshev_points(a: f64, b: f64, count: usize) -> Vec<f64> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (0..count)
        .map(|k| {
            let t = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * count) as f64;
            c + h * t.cos()
        })
        .collect()
}

fn circle_grid(radii: &[f64], count: usize) -> Vec<Vec<Complex64>> {
    let d = radii.len();
    let per_axis = (count as f64).powf(1.0 / d as f64).ceil() as usize;
    let axes: Vec<Vec<Complex64>> = radii
        .iter()
        .map(|&r| {
            (0..per_axis)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / per_axis as f64;
                    r * Complex64::new(t.cos(), t.sin())
                })
                .collect()
        })
        .collect();
    cartesian(&axes)
}

fn cartesian(axes: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for &v in axis {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Kronecker low-discrepancy sample of the unit sphere of `ℂ^d`.
///
/// The squared moduli of surface measure are uniform on the simplex; they
/// are produced by sorting `d-1` Kronecker coordinates (stick breaking) and
/// the phases fill `d` further coordinates.
fn sphere_kronecker(d: usize, count: usize) -> Vec<Vec<Complex64>> {
    const PRIMES: [f64; 12] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0];
    let dims = 2 * d - 1;
    assert!(dims <= PRIMES.len(), "sphere sampler supports d ≤ 6");
    let alphas: Vec<f64> = PRIMES[..dims].iter().map(|p| p.sqrt()).collect();
    (0..count)
        .map(|k| {
            let u: Vec<f64> =
                alphas.iter().map(|a| ((k as f64 + 0.5) * a).fract()).collect();
            let mut cuts: Vec<f64> = u[..d - 1].to_vec();
            cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let mut moduli_sq = Vec::with_capacity(d);
            let mut prev = 0.0;
            for &c in &cuts {
                moduli_sq.push(c - prev);
                prev = c;
            }
            moduli_sq.push(1.0 - prev);
            (0..d)
                .map(|i| {
                    let phase = 2.0 * std::f64::consts::PI * u[d - 1 + i];
                    moduli_sq[i].sqrt() * Complex64::new(phase.cos(), phase.sin())
                })
                .collect()
        })
        .collect()
}
