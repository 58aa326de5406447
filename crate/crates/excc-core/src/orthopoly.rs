//! Orthonormal polynomial bases of `Poly(nC)` and Bergman-kernel
//! estimators.
//!
//! The basis is obtained by Gram-Schmidt over the graded monomial order,
//! realized as an ordered (pivot-free) Cholesky factorization `G = L·Lᴴ` of
//! the moment matrix followed by the triangular inversion `R = L^{-ᴴ}`;
//! column `j` of `R` holds the monomial coefficients of the `j`-th
//! orthonormal element, whose leading coefficient `1/L_{jj}` is positive.
//!
//! Three evaluation paths share one interface:
//!
//! * **diagonal**: torus, circle, and sphere-surface measures, where the
//!   monomials are already orthogonal; norms live in log scale, so degrees
//!   in the hundreds stay finite;
//! * **tensor**: products of circle and arcsine factors, evaluated by
//!   scaled Chebyshev recurrences;
//! * **dense**: any measure via the explicit factorization, capped at
//!   degree [`crate::consts::DENSE_PATH_MAX_N`] because moment matrices are
//!   exponentially ill-conditioned.
//!
//! The Bergman function `S_n(z) = Σ_j |p_j(z)|²` yields the growth
//! estimator `(1/2n)·log S_n(z)`, sandwiched around the true extremal
//! function by the comparison constant `M_n` and the dimension.

use std::sync::Arc;

use num_complex::Complex64;

use crate::body::{Body, LatticeBasis, MultiIndex};
use crate::consts::{CONDITION_WARN, DENSE_PATH_MAX_N, RANK_REL_TOL};
use crate::error::{Error, Result};
use crate::measure::{BmBound, MeasureModel};
use crate::par::log_sum_exp;

/// Moment matrix of the lattice monomials in basis order:
/// entry `(r, c)` is `⟨z^{J_c}, z^{J_r}⟩`.
pub fn gram_matrix(
    lattice: &LatticeBasis,
    measure: &MeasureModel,
) -> Result<Vec<Vec<Complex64>>> {
    measure.validate()?;
    if measure.dim() != lattice.body.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.body.dim(),
            got: measure.dim(),
        });
    }
    let idx = lattice.indices();
    let m = idx.len();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for r in 0..m {
        for c in 0..m {
            g[r][c] = measure.monomial_inner(&idx[c], &idx[r])?;
        }
    }
    Ok(g)
}

/// Ordered Cholesky factor `L` (lower triangular) of a Hermitian positive
/// definite matrix, without pivoting: the given order is the Gram-Schmidt
/// order and must be preserved.
///
/// Fails with the offending basis position when a pivot drops below
/// [`RANK_REL_TOL`] times the largest diagonal entry.
pub fn cholesky_ordered(g: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let m = g.len();
    let max_diag = (0..m).map(|i| g[i][i].re).fold(0.0f64, f64::max);
    let floor = RANK_REL_TOL * max_diag;
    let mut l = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for j in 0..m {
        let mut d = g[j][j].re;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        if !(d > floor) {
            return Err(Error::RankDeficient { pivot: j });
        }
        let ljj = d.sqrt();
        l[j][j] = Complex64::new(ljj, 0.0);
        for i in j + 1..m {
            let mut s = g[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / ljj;
        }
    }
    Ok(l)
}

/// Columns of `R = L^{-ᴴ}`: `transform[j]` holds rows `0..=j` of column
/// `j`, the monomial coefficients of the `j`-th orthonormal element.
fn invert_transposed(l: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let m = l.len();
    let mut cols = Vec::with_capacity(m);
    for j in 0..m {
        // Solve Lᴴ r = e_j by back substitution; r vanishes beyond row j.
        let mut r = vec![Complex64::new(0.0, 0.0); j + 1];
        r[j] = Complex64::new(1.0, 0.0) / l[j][j].conj();
        for i in (0..j).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for (k, rk) in r.iter().enumerate().take(j + 1).skip(i + 1) {
                s += l[k][i].conj() * rk;
            }
            r[i] = -s / l[i][i].conj();
        }
        cols.push(r);
    }
    cols
}

/// One-dimensional orthonormal family powering the tensor path.
#[derive(Clone, Debug)]
enum AxisFamily {
    /// `(z/r)^k`: orthonormal for the circle of radius `r`.
    ScaledMonomial { radius: f64 },
    /// `T̃_0 = 1`, `T̃_k = √2·T_k((x-c)/h)`: orthonormal for the arcsine
    /// measure of `[c-h, c+h]`.
    Chebyshev { center: f64, half: f64 },
}

impl AxisFamily {
    /// Values of the family at `z` for orders `0..=kmax`.
    fn values(&self, z: Complex64, kmax: usize) -> Vec<Complex64> {
        match *self {
            AxisFamily::ScaledMonomial { radius } => {
                let w = z / radius;
                let mut out = Vec::with_capacity(kmax + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=kmax {
                    out.push(acc);
                    acc *= w;
                }
                out
            }
            AxisFamily::Chebyshev { center, half } => {
                let w = (z - center) / half;
                let mut out = Vec::with_capacity(kmax + 1);
                out.push(Complex64::new(1.0, 0.0));
                if kmax == 0 {
                    return out;
                }
                let sqrt2 = 2f64.sqrt();
                let mut prev = Complex64::new(1.0, 0.0);
                let mut cur = w;
                out.push(sqrt2 * cur);
                for _ in 2..=kmax {
                    let next = 2.0 * w * cur - prev;
                    prev = cur;
                    cur = next;
                    out.push(sqrt2 * cur);
                }
                out
            }
        }
    }

    /// `ln` of the absolute values for orders `0..=kmax`, safe against
    /// overflow: the recurrence is rescaled whenever it grows past `1e150`.
    fn log_abs_values(&self, z: Complex64, kmax: usize) -> Vec<f64> {
        match *self {
            AxisFamily::ScaledMonomial { radius } => {
                let step = (z.norm() / radius).ln();
                (0..=kmax).map(|k| k as f64 * step).collect()
            }
            AxisFamily::Chebyshev { center, half } => {
                let w = (z - center) / half;
                let mut out = Vec::with_capacity(kmax + 1);
                out.push(0.0);
                if kmax == 0 {
                    return out;
                }
                let half_ln2 = 0.5 * 2f64.ln();
                let mut prev = Complex64::new(1.0, 0.0);
                let mut cur = w;
                let mut shift = 0.0f64; // accumulated log of applied rescalings
                out.push(half_ln2 + cur.norm().ln());
                for _ in 2..=kmax {
                    let next = 2.0 * w * cur - prev;
                    prev = cur;
                    cur = next;
                    let mag = cur.norm();
                    if mag > 1e150 {
                        prev /= mag;
                        cur /= mag;
                        shift += mag.ln();
                    }
                    out.push(half_ln2 + shift + cur.norm().ln());
                }
                out
            }
        }
    }

    /// Monomial coefficients (in the ambient variable) of the order-`k`
    /// element, ascending by power.
    fn coeff_column(&self, k: usize) -> Vec<f64> {
        match *self {
            AxisFamily::ScaledMonomial { radius } => {
                let mut col = vec![0.0; k + 1];
                col[k] = radius.powi(-(k as i32));
                col
            }
            AxisFamily::Chebyshev { center, half } => {
                // T_k in the normalized variable t, then t = (x - c)/h.
                let mut prev = vec![1.0];
                let mut cur = vec![0.0, 1.0];
                if k == 0 {
                    return prev;
                }
                for _ in 2..=k {
                    let mut next = vec![0.0; cur.len() + 1];
                    for (i, &c) in cur.iter().enumerate() {
                        next[i + 1] += 2.0 * c;
                    }
                    for (i, &c) in prev.iter().enumerate() {
                        next[i] -= c;
                    }
                    prev = cur;
                    cur = next;
                }
                let t_coeffs = if k == 1 { vec![0.0, 1.0] } else { cur };
                // Substitute t = (x - c)/h by accumulating binomial
                // expansions of ((x - c)/h)^j.
                let mut out = vec![0.0; k + 1];
                for (j, &tc) in t_coeffs.iter().enumerate() {
                    if tc == 0.0 {
                        continue;
                    }
                    let scale = tc / half.powi(j as i32);
                    let mut binom = 1.0;
                    for i in 0..=j {
                        // coefficient of x^i in (x - c)^j
                        out[i] += scale * binom * (-center).powi((j - i) as i32);
                        binom = binom * (j - i) as f64 / (i + 1) as f64;
                    }
                }
                for v in &mut out {
                    *v *= 2f64.sqrt();
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug)]
enum BasisKind {
    Diagonal { log_inv_norms: Vec<f64> },
    Tensor { axes: Vec<AxisFamily> },
    Dense { transform: Vec<Vec<Complex64>> },
}

/// Orthonormal basis of `Poly(nC)` for a moment model; doubles as the
/// cached Bergman evaluator.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    lattice: Arc<LatticeBasis>,
    measure: MeasureModel,
    kind: BasisKind,
}

impl OrthoBasis {
    /// Builds the basis along the cheapest applicable path.
    pub fn new(body: Body, measure: MeasureModel, n: usize) -> Result<Self> {
        body.validate()?;
        measure.validate()?;
        if measure.dim() != body.dim() {
            return Err(Error::DimensionMismatch { expected: body.dim(), got: measure.dim() });
        }
        let lattice = Arc::new(body.lattice(n)?);
        if measure.is_monomial_diagonal() {
            let log_inv_norms = lattice
                .indices()
                .iter()
                .map(|j| measure.log_monomial_norm_sq(j).map(|v| -0.5 * v))
                .collect::<Result<Vec<f64>>>()?;
            return Ok(OrthoBasis {
                lattice,
                measure,
                kind: BasisKind::Diagonal { log_inv_norms },
            });
        }
        match &measure {
            MeasureModel::Arcsine { a, b } => {
                let axes = vec![AxisFamily::Chebyshev {
                    center: 0.5 * (a + b),
                    half: 0.5 * (b - a),
                }];
                Ok(OrthoBasis { lattice, measure, kind: BasisKind::Tensor { axes } })
            }
            MeasureModel::Product { factors } => {
                let axes = factors
                    .iter()
                    .map(|f| match f {
                        MeasureModel::CircleHaar { radii } => {
                            Ok(AxisFamily::ScaledMonomial { radius: radii[0] })
                        }
                        MeasureModel::TorusHaar { .. } => {
                            Ok(AxisFamily::ScaledMonomial { radius: 1.0 })
                        }
                        MeasureModel::Arcsine { a, b } => Ok(AxisFamily::Chebyshev {
                            center: 0.5 * (a + b),
                            half: 0.5 * (b - a),
                        }),
                        other => Err(Error::Unsupported(format!(
                            "product factor {other:?} has no tensor family"
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(OrthoBasis { lattice, measure, kind: BasisKind::Tensor { axes } })
            }
            _ => Self::dense_from_lattice(lattice, measure),
        }
    }

    /// Reference construction through the explicit moment-matrix
    /// factorization, for any measure. Capped at degree
    /// [`DENSE_PATH_MAX_N`].
    pub fn new_dense(body: Body, measure: MeasureModel, n: usize) -> Result<Self> {
        body.validate()?;
        let lattice = Arc::new(body.lattice(n)?);
        Self::dense_from_lattice(lattice, measure)
    }

    fn dense_from_lattice(lattice: Arc<LatticeBasis>, measure: MeasureModel) -> Result<Self> {
        if lattice.n > DENSE_PATH_MAX_N {
            return Err(Error::Unsupported(format!(
                "dense orthonormalization is capped at n = {DENSE_PATH_MAX_N}; got n = {}",
                lattice.n
            )));
        }
        let g = gram_matrix(&lattice, &measure)?;
        let l = cholesky_ordered(&g)?;
        let m = l.len();
        if m > 0 {
            let pivots: Vec<f64> = (0..m).map(|i| l[i][i].re).collect();
            let hi = pivots.iter().cloned().fold(f64::MIN, f64::max);
            let lo = pivots.iter().cloned().fold(f64::MAX, f64::min);
            let cond = (hi / lo).powi(2);
            if cond > CONDITION_WARN {
                log::warn!(
                    "moment matrix condition estimate {cond:.3e} exceeds {CONDITION_WARN:.0e} \
                     (body {}, n = {})",
                    lattice.body,
                    lattice.n
                );
            }
        }
        let transform = invert_transposed(&l);
        Ok(OrthoBasis { lattice, measure, kind: BasisKind::Dense { transform } })
    }

    pub fn lattice(&self) -> &Arc<LatticeBasis> {
        &self.lattice
    }

    pub fn measure(&self) -> &MeasureModel {
        &self.measure
    }

    pub fn n(&self) -> usize {
        self.lattice.n
    }

    /// Number of basis elements, `dim Poly(nC)`.
    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    /// True when the basis avoided the dense factorization.
    pub fn is_shortcut(&self) -> bool {
        !matches!(self.kind, BasisKind::Dense { .. })
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.lattice.body.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.lattice.body.dim(),
                got: z.len(),
            });
        }
        Ok(())
    }

    /// `ln|p_j(z)|` for every basis element (`-∞` where `p_j(z) = 0`).
    pub fn log_abs_terms(&self, z: &[Complex64]) -> Result<Vec<f64>> {
        self.check_point(z)?;
        let idx = self.lattice.indices();
        Ok(match &self.kind {
            BasisKind::Diagonal { log_inv_norms } => {
                let logs: Vec<f64> = z.iter().map(|zi| zi.norm().ln()).collect();
                idx.iter()
                    .zip(log_inv_norms.iter())
                    .map(|(j, &inv)| {
                        let mut acc = inv;
                        for (i, &ji) in j.iter().enumerate() {
                            if ji > 0 {
                                acc += ji as f64 * logs[i];
                            }
                        }
                        acc
                    })
                    .collect()
            }
            BasisKind::Tensor { axes } => {
                let kmax = self.lattice.n;
                let tables: Vec<Vec<f64>> = axes
                    .iter()
                    .zip(z.iter())
                    .map(|(fam, &zi)| fam.log_abs_values(zi, kmax))
                    .collect();
                idx.iter()
                    .map(|j| {
                        j.iter()
                            .enumerate()
                            .map(|(i, &ji)| tables[i][ji as usize])
                            .sum()
                    })
                    .collect()
            }
            BasisKind::Dense { .. } => {
                self.values(z)?.iter().map(|v| v.norm().ln()).collect()
            }
        })
    }

    /// Values `p_j(z)` of every basis element. Linear-scale: prefer
    /// [`OrthoBasis::log_abs_terms`] at high degree.
    pub fn values(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_point(z)?;
        let idx = self.lattice.indices();
        Ok(match &self.kind {
            BasisKind::Diagonal { log_inv_norms } => idx
                .iter()
                .zip(log_inv_norms.iter())
                .map(|(j, &inv)| {
                    let mut acc = Complex64::new(inv.exp(), 0.0);
                    for (i, &ji) in j.iter().enumerate() {
                        acc *= z[i].powu(ji);
                    }
                    acc
                })
                .collect(),
            BasisKind::Tensor { axes } => {
                let kmax = self.lattice.n;
                let tables: Vec<Vec<Complex64>> = axes
                    .iter()
                    .zip(z.iter())
                    .map(|(fam, &zi)| fam.values(zi, kmax))
                    .collect();
                idx.iter()
                    .map(|j| {
                        let mut acc = Complex64::new(1.0, 0.0);
                        for (i, &ji) in j.iter().enumerate() {
                            acc *= tables[i][ji as usize];
                        }
                        acc
                    })
                    .collect()
            }
            BasisKind::Dense { transform } => {
                let monomials: Vec<Complex64> = idx
                    .iter()
                    .map(|j| {
                        let mut acc = Complex64::new(1.0, 0.0);
                        for (i, &ji) in j.iter().enumerate() {
                            acc *= z[i].powu(ji);
                        }
                        acc
                    })
                    .collect();
                transform
                    .iter()
                    .map(|col| {
                        col.iter()
                            .zip(monomials.iter())
                            .map(|(&c, &m)| c * m)
                            .sum::<Complex64>()
                    })
                    .collect()
            }
        })
    }

    /// Bergman function `S_n(z) = Σ_j |p_j(z)|²` in linear scale.
    pub fn bergman_value(&self, z: &[Complex64]) -> Result<f64> {
        Ok((self.bergman_log_value(z)?).exp())
    }

    /// `ln S_n(z)`, overflow-safe.
    pub fn bergman_log_value(&self, z: &[Complex64]) -> Result<f64> {
        let terms: Vec<f64> =
            self.log_abs_terms(z)?.into_iter().map(|t| 2.0 * t).collect();
        Ok(log_sum_exp(&terms))
    }

    /// Growth estimator `(1/2n)·ln S_n(z)`; nonnegative for probability
    /// measures because the constant is a basis element.
    pub fn bergman_log_estimate(&self, z: &[Complex64]) -> Result<f64> {
        if self.n() == 0 {
            return Err(Error::InvalidParameter("growth estimator needs n ≥ 1".into()));
        }
        Ok(self.bergman_log_value(z)? / (2.0 * self.n() as f64))
    }

    /// Degree-weighted sup estimator
    /// `max_j (1/deg p_j)·ln|p_j(z)|` over non-constant basis elements.
    pub fn onb_sup_estimate(&self, z: &[Complex64]) -> Result<f64> {
        if self.n() == 0 {
            return Err(Error::InvalidParameter("growth estimator needs n ≥ 1".into()));
        }
        let terms = self.log_abs_terms(z)?;
        let degs = self.lattice.degrees();
        let mut best = f64::NEG_INFINITY;
        for (t, &deg) in terms.iter().zip(degs.iter()) {
            if deg >= 1 {
                best = best.max(t / deg as f64);
            }
        }
        Ok(best)
    }

    /// Two-sided bracket for the exact growth function `(1/n)·ln Φ_n`:
    /// upper bound is the Bergman estimator, lower bound subtracts the
    /// bracket width `(1/n)·ln(M_n·√(dim))`.
    pub fn phi_bracket(&self, bound: &BmBound, z: &[Complex64]) -> Result<(f64, f64)> {
        let upper = self.bergman_log_estimate(z)?;
        Ok((upper - self.bracket_width(bound), upper))
    }

    /// `(1/n)·ln(M_n·√(dim Poly(nC)))`.
    pub fn bracket_width(&self, bound: &BmBound) -> f64 {
        (bound.value * (self.len() as f64).sqrt()).ln() / self.n() as f64
    }

    /// Materialized triangular transform: column `j` holds monomial
    /// coefficients of `p_j` over basis positions `0..=j`. Intended for
    /// export and small-degree inspection; the diagonal path exponentiates
    /// its log-scale norms.
    pub fn transform_matrix(&self) -> Vec<Vec<Complex64>> {
        match &self.kind {
            BasisKind::Diagonal { log_inv_norms } => log_inv_norms
                .iter()
                .enumerate()
                .map(|(j, &inv)| {
                    let mut col = vec![Complex64::new(0.0, 0.0); j + 1];
                    col[j] = Complex64::new(inv.exp(), 0.0);
                    col
                })
                .collect(),
            BasisKind::Dense { transform } => transform.clone(),
            BasisKind::Tensor { axes } => {
                let idx = self.lattice.indices();
                idx.iter()
                    .enumerate()
                    .map(|(jpos, j)| {
                        let mut col = vec![Complex64::new(0.0, 0.0); jpos + 1];
                        let axis_cols: Vec<Vec<f64>> = j
                            .iter()
                            .enumerate()
                            .map(|(i, &ji)| axes[i].coeff_column(ji as usize))
                            .collect();
                        // Expand the tensor product over all sub-powers.
                        let mut stack: Vec<(MultiIndex, f64)> = vec![(Vec::new(), 1.0)];
                        for axis_col in &axis_cols {
                            let mut next = Vec::new();
                            for (prefix, coeff) in &stack {
                                for (power, &c) in axis_col.iter().enumerate() {
                                    if c == 0.0 {
                                        continue;
                                    }
                                    let mut p = prefix.clone();
                                    p.push(power as u32);
                                    next.push((p, coeff * c));
                                }
                            }
                            stack = next;
                        }
                        for (index, coeff) in stack {
                            let pos = self
                                .lattice
                                .position(&index)
                                .expect("sub-powers of a lattice point stay in the lattice");
                            debug_assert!(pos <= jpos, "transform must stay triangular");
                            col[pos] += Complex64::new(coeff, 0.0);
                        }
                        col
                    })
                    .collect()
            }
        }
    }

    /// Expands basis coefficients into a monomial-coefficient polynomial:
    /// `p = Σ_j a_j·p_j`.
    pub fn monomial_polynomial(&self, basis_coeffs: &[Complex64]) -> Result<PolyC> {
        if basis_coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: basis_coeffs.len(),
            });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.len()];
        match &self.kind {
            BasisKind::Diagonal { log_inv_norms } => {
                for (j, (&a, &inv)) in basis_coeffs.iter().zip(log_inv_norms.iter()).enumerate()
                {
                    coeffs[j] = a * inv.exp();
                }
            }
            _ => {
                let transform = self.transform_matrix();
                for (j, col) in transform.iter().enumerate() {
                    let a = basis_coeffs[j];
                    if a == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (i, &c) in col.iter().enumerate() {
                        coeffs[i] += a * c;
                    }
                }
            }
        }
        PolyC::new(Arc::clone(&self.lattice), coeffs)
    }
}

/// Polynomial with monomial coefficients aligned to a lattice basis.
#[derive(Clone, Debug)]
pub struct PolyC {
    lattice: Arc<LatticeBasis>,
    coeffs: Vec<Complex64>,
}

impl PolyC {
    pub fn new(lattice: Arc<LatticeBasis>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.len(),
                got: coeffs.len(),
            });
        }
        Ok(PolyC { lattice, coeffs })
    }

    /// Builds from sparse terms; every exponent must lie in the lattice.
    pub fn from_terms(
        lattice: Arc<LatticeBasis>,
        terms: &[(MultiIndex, Complex64)],
    ) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); lattice.len()];
        for (j, c) in terms {
            let pos = lattice.position(j).ok_or_else(|| {
                Error::InvalidParameter(format!("exponent {j:?} is outside the lattice"))
            })?;
            coeffs[pos] += c;
        }
        Ok(PolyC { lattice, coeffs })
    }

    pub fn lattice(&self) -> &Arc<LatticeBasis> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &c) in self.lattice.indices().iter().zip(self.coeffs.iter()) {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut term = c;
            for (i, &ji) in j.iter().enumerate() {
                term *= z[i].powu(ji);
            }
            acc += term;
        }
        acc
    }

    /// Value and gradient `(p(z), [∂p/∂z_i])`.
    pub fn eval_grad(&self, z: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let d = self.lattice.body.dim();
        let mut value = Complex64::new(0.0, 0.0);
        let mut grad = vec![Complex64::new(0.0, 0.0); d];
        for (j, &c) in self.lattice.indices().iter().zip(self.coeffs.iter()) {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let powers: Vec<Complex64> =
                j.iter().enumerate().map(|(i, &ji)| z[i].powu(ji)).collect();
            let mut term = c;
            for &p in &powers {
                term *= p;
            }
            value += term;
            for (i, &ji) in j.iter().enumerate() {
                if ji == 0 {
                    continue;
                }
                let mut dterm = c * ji as f64 * z[i].powu(ji - 1);
                for (t, &p) in powers.iter().enumerate() {
                    if t != i {
                        dterm *= p;
                    }
                }
                grad[i] += dterm;
            }
        }
        (value, grad)
    }

    /// Restriction to a coordinate line: all coordinates fixed except the
    /// single `None` entry. Returns the free axis and ascending univariate
    /// coefficients.
    pub fn restrict(&self, fixed: &[Option<Complex64>]) -> Result<(usize, Vec<Complex64>)> {
        let d = self.lattice.body.dim();
        if fixed.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: fixed.len() });
        }
        let free: Vec<usize> =
            (0..d).filter(|&i| fixed[i].is_none()).collect();
        if free.len() != 1 {
            return Err(Error::InvalidParameter(format!(
                "restriction needs exactly one free coordinate, got {}",
                free.len()
            )));
        }
        let axis = free[0];
        let max_pow = self
            .lattice
            .indices()
            .iter()
            .map(|j| j[axis] as usize)
            .max()
            .unwrap_or(0);
        let mut out = vec![Complex64::new(0.0, 0.0); max_pow + 1];
        for (j, &c) in self.lattice.indices().iter().zip(self.coeffs.iter()) {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut term = c;
            for (i, &ji) in j.iter().enumerate() {
                if i != axis {
                    term *= fixed[i].unwrap().powu(ji);
                }
            }
            out[j[axis] as usize] += term;
        }
        Ok((axis, out))
    }
}
