//! Best-approximation error curves and fitted geometric rates.
//!
//! The test functions have geometric Taylor coefficients `c_k = ρ^{k+1}`
//! (that is, `f(t) = ρ/(1-ρt)`), so every tail that appears in a best `L²`
//! error is an exact geometric sum: the error curves here are closed
//! forms, not quadratures. Two-variable targets are either separable,
//! `F(z,w) = f(z) + g(w)`, where the best approximant truncates each
//! variable at the body's axis cut, or diagonal, `F(z,w) = f(zw)`, where
//! it truncates at the largest `k` with `(k,k)` in the dilated body.
//!
//! Fitted rates estimate `limsup d_n^{1/n}` by least squares on
//! `ln d_n` over the top half of the degree range; the area-normalized
//! comparison evaluates error curves at degree `⌊n/√area⌋` so that bodies
//! of different size compete per unit of lattice budget.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::body::{isosceles_alpha, tangent_beta, Body};
use crate::error::{Error, Result};
use crate::par;

/// Analytic one-variable test function with geometric coefficients
/// `c_k = ρ^{k+1}` for `k ≤ max_k` (untruncated when `max_k` is `None`).
#[derive(Clone, Copy, Debug)]
pub struct AnalyticFunction1D {
    rho: f64,
    max_k: Option<usize>,
}

impl AnalyticFunction1D {
    pub fn geometric(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "geometric rate must lie in (0,1), got {rho}"
            )));
        }
        Ok(AnalyticFunction1D { rho, max_k: None })
    }

    /// Polynomial truncation: coefficients vanish beyond `max_k`.
    pub fn truncated(rho: f64, max_k: usize) -> Result<Self> {
        Ok(AnalyticFunction1D { max_k: Some(max_k), ..Self::geometric(rho)? })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn coeff(&self, k: usize) -> f64 {
        match self.max_k {
            Some(kmax) if k > kmax => 0.0,
            _ => self.rho.powi(k as i32 + 1),
        }
    }

    /// Exact squared tail `Σ_{k>m} |c_k|²` (unit-norm basis weights).
    pub fn tail_sq(&self, m: usize) -> f64 {
        let r2 = self.rho * self.rho;
        // c_k = ρ^{k+1}, so the tail past m starts at ρ^{2(m+2)}.
        let full = |from: usize| r2.powi(from as i32 + 2) / (1.0 - r2);
        match self.max_k {
            None => full(m),
            Some(kmax) if m >= kmax => 0.0,
            Some(kmax) => full(m) - full(kmax),
        }
    }

    /// Value of `Σ c_k t^k`.
    pub fn eval(&self, t: Complex64) -> Complex64 {
        match self.max_k {
            None => {
                debug_assert!(self.rho * t.norm() < 1.0, "outside the disk of convergence");
                self.rho / (Complex64::new(1.0, 0.0) - self.rho * t)
            }
            Some(kmax) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in (0..=kmax).rev() {
                    acc = acc * t + self.coeff(k);
                }
                acc
            }
        }
    }

    /// Exact tail value `Σ_{k>m} c_k t^k` for `|ρt| < 1`.
    pub fn tail_eval(&self, m: usize, t: Complex64) -> Complex64 {
        let geometric_from = |from: usize| {
            // Σ_{k ≥ from} ρ^{k+1} t^k = ρ^{from+1} t^{from} / (1 - ρt)
            self.rho.powi(from as i32 + 1) * t.powu(from as u32)
                / (Complex64::new(1.0, 0.0) - self.rho * t)
        };
        match self.max_k {
            None => geometric_from(m + 1),
            Some(kmax) if m >= kmax => Complex64::new(0.0, 0.0),
            Some(kmax) => geometric_from(m + 1) - geometric_from(kmax + 1),
        }
    }
}

/// Two-variable approximation target.
#[derive(Clone, Copy, Debug)]
pub enum TwoVarFunction {
    /// `F(z,w) = f(z) + g(w)`.
    Separable { f: AnalyticFunction1D, g: AnalyticFunction1D },
    /// `F(z,w) = f(z·w)`.
    Diagonal { f: AnalyticFunction1D },
}

impl TwoVarFunction {
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        match self {
            TwoVarFunction::Separable { f, g } => f.eval(z) + g.eval(w),
            TwoVarFunction::Diagonal { f } => f.eval(z * w),
        }
    }
}

/// Per-variable truncation orders `(⌊α̂n⌋, ⌊β̂n⌋)` from the body's axis
/// cuts.
pub fn separable_cuts(body: &Body, n: usize) -> (usize, usize) {
    let (a, b) = body.axis_cuts();
    ((a * n as f64).floor() as usize, (b * n as f64).floor() as usize)
}

/// Exact best `L²` error over the product torus for a separable target:
/// the projection onto the body's space truncates `f` and `g` at the axis
/// cuts, so the error is the root of the two squared tails.
pub fn best_error_separable(
    body: &Body,
    n: usize,
    f: &AnalyticFunction1D,
    g: &AnalyticFunction1D,
) -> Result<f64> {
    if body.dim() != 2 {
        return Err(Error::Unsupported(format!(
            "separable error curves need d = 2, got d = {}",
            body.dim()
        )));
    }
    let (mf, mg) = separable_cuts(body, n);
    Ok((f.tail_sq(mf) + g.tail_sq(mg)).sqrt())
}

/// Largest `k` with `(k,k)` in the dilated body (0 when only the origin
/// qualifies, as for the axis cross).
pub fn diagonal_cutoff(body: &Body, n: usize) -> Result<usize> {
    if body.dim() != 2 {
        return Err(Error::Unsupported(format!(
            "diagonal cutoff needs d = 2, got d = {}",
            body.dim()
        )));
    }
    for k in (1..=n).rev() {
        if body.contains_scaled(&[k as f64, k as f64], n)? {
            return Ok(k);
        }
    }
    Ok(0)
}

/// Asymptotic slope of the diagonal cutoff, `cutoff(n)/n → slope`.
pub fn diagonal_slope(body: &Body) -> Result<f64> {
    Ok(match *body {
        Body::LpBall { p, .. } => 0.5f64.powf(1.0 / p),
        Body::Triangle { alpha, beta } => alpha * beta / (alpha + beta),
        Body::Simplex { .. } => 0.5,
        Body::AxisCross { .. } => 0.0,
    })
}

/// Exact best `L²` error over the torus for a diagonal target: only the
/// powers `(zw)^k` with `(k,k)` in the dilated body survive.
pub fn best_error_diagonal(body: &Body, n: usize, f: &AnalyticFunction1D) -> Result<f64> {
    let cutoff = diagonal_cutoff(body, n)?;
    Ok(f.tail_sq(cutoff).sqrt())
}

/// Error curve with its fitted and target rates.
#[derive(Clone, Debug)]
pub struct RateReport {
    pub n_values: Vec<usize>,
    pub errors: Vec<f64>,
    /// `exp` of the least-squares slope of `ln e` against `n` over the
    /// top half of the degree range.
    pub fitted: f64,
    pub target: f64,
    /// Index where the fit window begins.
    pub window_start: usize,
}

/// Smallest error magnitude the fit accepts; below this the curve has
/// left double precision and the fit is declared degenerate.
const FIT_FLOOR: f64 = 1e-300;

/// Fits `exp(slope)` of `ln e` vs `n` over the largest-`n` half of the
/// data. Needs at least 8 points and positive errors in the window.
pub fn fitted_rate(n_values: &[usize], errors: &[f64]) -> Result<(f64, usize)> {
    if n_values.len() != errors.len() {
        return Err(Error::DimensionMismatch {
            expected: n_values.len(),
            got: errors.len(),
        });
    }
    if n_values.len() < 8 {
        return Err(Error::DegenerateFit(format!(
            "rate fit needs at least 8 points, got {}",
            n_values.len()
        )));
    }
    let start = n_values.len() / 2;
    let xs: Vec<f64> = n_values[start..].iter().map(|&n| n as f64).collect();
    let mut ys = Vec::with_capacity(xs.len());
    for &e in &errors[start..] {
        if !(e > FIT_FLOOR) {
            return Err(Error::DegenerateFit(format!(
                "error {e:.3e} in the fit window is at or below the {FIT_FLOOR:.0e} floor"
            )));
        }
        ys.push(e.ln());
    }
    let m = xs.len() as f64;
    let mean_x = par::pairwise_sum(&xs) / m;
    let mean_y = par::pairwise_sum(&ys) / m;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    if var == 0.0 {
        return Err(Error::DegenerateFit("degenerate degree window".into()));
    }
    Ok(((cov / var).exp(), start))
}

/// Error curve and rates for a separable target on the product torus.
pub fn rate_curve_separable(
    body: &Body,
    f: &AnalyticFunction1D,
    g: &AnalyticFunction1D,
    n_values: &[usize],
) -> Result<RateReport> {
    let errors = n_values
        .iter()
        .map(|&n| best_error_separable(body, n, f, g))
        .collect::<Result<Vec<f64>>>()?;
    let (fitted, window_start) = fitted_rate(n_values, &errors)?;
    let (a, b) = body.axis_cuts();
    let target = f.rho().powf(a).max(g.rho().powf(b));
    Ok(RateReport { n_values: n_values.to_vec(), errors, fitted, target, window_start })
}

/// Error curve and rates for a diagonal target on the torus.
pub fn rate_curve_diagonal(
    body: &Body,
    f: &AnalyticFunction1D,
    n_values: &[usize],
) -> Result<RateReport> {
    let errors = n_values
        .iter()
        .map(|&n| best_error_diagonal(body, n, f))
        .collect::<Result<Vec<f64>>>()?;
    let (fitted, window_start) = fitted_rate(n_values, &errors)?;
    let target = f.rho().powf(diagonal_slope(body)?);
    Ok(RateReport { n_values: n_values.to_vec(), errors, fitted, target, window_start })
}

/// Multiples of 8 up to and including `n_max` (so that quarter- and
/// half-cuts land on exact integers along the sequence).
pub fn degree_sequence(n_max: usize) -> Vec<usize> {
    (1..=n_max / 8).map(|k| 8 * k).collect()
}

/// Area-normalized error comparison between an `ℓ^p` body and a tangent
/// triangle.
#[derive(Clone, Debug)]
pub struct NormalizedCompare {
    pub n_values: Vec<usize>,
    /// Errors of the `ℓ^p` body at degree `⌊n/√area(C_p)⌋`.
    pub lp_errors: Vec<f64>,
    /// Errors of the triangle at degree `⌊n/√area(T)⌋`.
    pub tri_errors: Vec<f64>,
    pub lp_fitted: f64,
    pub tri_fitted: f64,
    /// Closed-form normalized targets `ρ_raw^{1/√area}`.
    pub lp_target: f64,
    pub tri_target: f64,
}

/// Evaluates both error curves at area-rescaled degrees and fits the
/// normalized rates, together with their closed-form targets.
pub fn normalized_compare(
    p: f64,
    alpha: f64,
    fun: &TwoVarFunction,
    n_max: usize,
) -> Result<NormalizedCompare> {
    let lp = Body::lp(p, 2)?;
    let tri = Body::tangent_triangle(p, alpha)?;
    let a_lp = lp.area_sqrt()?;
    let a_tri = tri.area_sqrt()?;
    let n_values = degree_sequence(n_max);
    if n_values.len() < 8 {
        return Err(Error::DegenerateFit(format!(
            "normalized comparison needs n_max ≥ 64, got {n_max}"
        )));
    }
    let error_at = |body: &Body, scaled_n: usize| -> Result<f64> {
        match fun {
            TwoVarFunction::Separable { f, g } => best_error_separable(body, scaled_n, f, g),
            TwoVarFunction::Diagonal { f } => best_error_diagonal(body, scaled_n, f),
        }
    };
    let mut lp_errors = Vec::with_capacity(n_values.len());
    let mut tri_errors = Vec::with_capacity(n_values.len());
    for &n in &n_values {
        lp_errors.push(error_at(&lp, (n as f64 / a_lp).floor() as usize)?);
        tri_errors.push(error_at(&tri, (n as f64 / a_tri).floor() as usize)?);
    }
    let (lp_fitted, _) = fitted_rate(&n_values, &lp_errors)?;
    let (tri_fitted, _) = fitted_rate(&n_values, &tri_errors)?;
    let (lp_raw, tri_raw) = match fun {
        TwoVarFunction::Separable { f, g } => {
            let (ta, tb) = tri.axis_cuts();
            (
                f.rho().max(g.rho()),
                f.rho().powf(ta).max(g.rho().powf(tb)),
            )
        }
        TwoVarFunction::Diagonal { f } => (
            f.rho().powf(diagonal_slope(&lp)?),
            f.rho().powf(diagonal_slope(&tri)?),
        ),
    };
    Ok(NormalizedCompare {
        n_values,
        lp_errors,
        tri_errors,
        lp_fitted,
        tri_fitted,
        lp_target: lp_raw.powf(1.0 / a_lp),
        tri_target: tri_raw.powf(1.0 / a_tri),
    })
}

/// Raw and reformulated forms of the proof-step inequality, plus the
/// orientation-unambiguous geometric comparison that the normalized-rate
/// conclusion actually needs.
#[derive(Clone, Copy, Debug)]
pub struct GammaCheck {
    /// `Γ(1 + 2/p)`.
    pub lhs: f64,
    /// `2·Γ(1 + 1/p)²`.
    pub rhs: f64,
    /// Whether `lhs ≤ rhs` as printed.
    pub printed_holds: bool,
    /// `p·Γ(1 + 2/p)` and `2·Γ(1/p)·Γ(1 + 1/p)`, the other printed form.
    pub original_lhs: f64,
    pub original_rhs: f64,
    /// `√area` of the `ℓ^p` body.
    pub a_p: f64,
    /// `√area` of the isosceles tangent triangle.
    pub a_iso: f64,
    /// `a_iso ≤ a_p`: the geometric inequality behind the normalized
    /// ordering; equality exactly at `p = 1`.
    pub geometric_ok: bool,
}

/// Evaluates the proof-step Γ expressions and the geometric area
/// comparison. The Γ forms are recorded and logged but not asserted: at
/// `p = 1/2` both printed orientations fail numerically (24 vs 8, and
/// 12 vs 4), while the area comparison `a_iso ≤ a_p` is what the
/// normalized ordering uses, after the `< 1` base reverses the exponent
/// comparison.
pub fn gamma_check(p: f64) -> Result<GammaCheck> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < p ≤ 1, got {p}")));
    }
    let lhs = gamma(1.0 + 2.0 / p);
    let rhs = 2.0 * gamma(1.0 + 1.0 / p).powi(2);
    let original_lhs = p * lhs;
    let original_rhs = 2.0 * gamma(1.0 / p) * gamma(1.0 + 1.0 / p);
    let a_p = Body::lp(p, 2)?.area_sqrt()?;
    let a_iso = if p == 1.0 {
        // The tangent construction degenerates: the hypotenuse lies on
        // the simplex boundary, giving the simplex itself.
        Body::simplex(2)?.area_sqrt()?
    } else {
        let alpha = isosceles_alpha(p);
        let beta = tangent_beta(p, alpha)?;
        Body::triangle(alpha, beta)?.area_sqrt()?
    };
    let check = GammaCheck {
        lhs,
        rhs,
        printed_holds: lhs <= rhs * (1.0 + 1e-12),
        original_lhs,
        original_rhs,
        a_p,
        a_iso,
        geometric_ok: a_iso <= a_p * (1.0 + 1e-12),
    };
    log::info!(
        "gamma forms at p = {p}: Γ(1+2/p) = {lhs:.6e} vs 2Γ(1+1/p)² = {rhs:.6e} \
         (holds: {}); p·Γ(1+2/p) = {original_lhs:.6e} vs 2Γ(1/p)Γ(1+1/p) = \
         {original_rhs:.6e}; areas a_iso = {:.12} vs a_p = {:.12}",
        check.printed_holds,
        a_iso,
        a_p,
    );
    Ok(check)
}

/// Fitted sup-norm and `L²` rates of the same best-`L²` approximant
/// sequence; the sup norm is sampled on `sample_count` quasi-random torus
/// points.
pub fn sup_vs_l2_rate(
    fun: &TwoVarFunction,
    body: &Body,
    n_values: &[usize],
    sample_count: usize,
) -> Result<(f64, f64)> {
    if body.dim() != 2 {
        return Err(Error::Unsupported("sup/L² comparison needs d = 2".into()));
    }
    // Kronecker sequence on the torus: equidistributed, deterministic.
    let torus: Vec<(Complex64, Complex64)> = (0..sample_count)
        .map(|k| {
            let t = k as f64 + 0.5;
            let u = (t * 2f64.sqrt()).fract();
            let v = (t * 3f64.sqrt()).fract();
            (
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * u),
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * v),
            )
        })
        .collect();
    let mut l2 = Vec::with_capacity(n_values.len());
    let mut sup = Vec::with_capacity(n_values.len());
    for &n in n_values {
        match fun {
            TwoVarFunction::Separable { f, g } => {
                l2.push(best_error_separable(body, n, f, g)?);
                let (mf, mg) = separable_cuts(body, n);
                let worst = torus
                    .iter()
                    .map(|&(z, w)| (f.tail_eval(mf, z) + g.tail_eval(mg, w)).norm())
                    .fold(0.0f64, f64::max);
                sup.push(worst);
            }
            TwoVarFunction::Diagonal { f } => {
                l2.push(best_error_diagonal(body, n, f)?);
                let cutoff = diagonal_cutoff(body, n)?;
                let worst = torus
                    .iter()
                    .map(|&(z, w)| f.tail_eval(cutoff, z * w).norm())
                    .fold(0.0f64, f64::max);
                sup.push(worst);
            }
        }
    }
    let (rate_l2, _) = fitted_rate(n_values, &l2)?;
    let (rate_sup, _) = fitted_rate(n_values, &sup)?;
    Ok((rate_l2, rate_sup))
}
