//! Index bodies in `(ℝ₊)^d` and the graded monomial lattices they generate.
//!
//! A body `C` assigns to each dilation `nC` the finite lattice
//! `nC ∩ ℕ^d`, hence the polynomial space `Poly(nC) = span{z^J : J ∈ nC}`.
//! Four families are supported:
//!
//! * [`Body::LpBall`]: `{x : Σ x_i^p ≤ 1}` with `0 < p ≤ 1` (non-convex for
//!   `p < 1`, the standard simplex at `p = 1`);
//! * [`Body::AxisCross`]: the union of the coordinate segments `[0, e_i]`,
//!   the degenerate limit `p → 0`; its lattice holds only pure powers;
//! * [`Body::Triangle`]: vertices `(0,0)`, `(0,α)`, `(β,0)`, the convex
//!   triangles used to sandwich ℓ^p balls via tangent hypotenuses;
//! * [`Body::Simplex`]: the classical total-degree body.
//!
//! The `C`-degree of an index is the smallest dilation containing it, and
//! basis elements are ordered by (`C`-degree, total degree, descending
//! lexicographic), which refines inclusion of lattices along `n`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::consts::MEMBERSHIP_REL_TOL;
use crate::error::{Error, Result};

/// Exponent vector of a monomial `z^J`.
pub type MultiIndex = Vec<u32>;

/// Sum of the entries of an exponent vector.
pub fn total_degree(j: &[u32]) -> usize {
    j.iter().map(|&v| v as usize).sum()
}

/// Compact index body in the closed positive orthant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    /// `{x ∈ (ℝ₊)^d : Σ x_i^p ≤ 1}`, `0 < p ≤ 1`.
    #[serde(rename = "lp")]
    LpBall { p: f64, d: usize },
    /// Union of the coordinate segments from the origin to each `e_i`.
    #[serde(rename = "cross")]
    AxisCross { d: usize },
    /// Planar triangle with vertices `(0,0)`, `(0,α)`, `(β,0)`.
    Triangle { alpha: f64, beta: f64 },
    /// `{x ∈ (ℝ₊)^d : Σ x_i ≤ 1}`.
    Simplex { d: usize },
}

/// `ε·Σ ⊂ C ⊂ δ·Σ` constants; `degenerate` flags bodies with empty interior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichConstants {
    pub epsilon: f64,
    pub delta: f64,
    pub degenerate: bool,
}

impl Body {
    pub fn lp(p: f64, d: usize) -> Result<Self> {
        let body = Body::LpBall { p, d };
        body.validate()?;
        Ok(body)
    }

    pub fn cross(d: usize) -> Result<Self> {
        let body = Body::AxisCross { d };
        body.validate()?;
        Ok(body)
    }

    pub fn triangle(alpha: f64, beta: f64) -> Result<Self> {
        let body = Body::Triangle { alpha, beta };
        body.validate()?;
        Ok(body)
    }

    pub fn simplex(d: usize) -> Result<Self> {
        let body = Body::Simplex { d };
        body.validate()?;
        Ok(body)
    }

    /// Triangle whose hypotenuse through `(0, α)` is tangent to the unit
    /// ℓ^p sphere; see [`tangent_beta`].
    pub fn tangent_triangle(p: f64, alpha: f64) -> Result<Self> {
        Body::triangle(alpha, tangent_beta(p, alpha)?)
    }

    /// Checks parameter ranges; every constructor and deserialized value
    /// should pass through here before use.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Body::LpBall { p, d } => {
                if !(p > 0.0 && p <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "lp body needs 0 < p <= 1, got p = {p}"
                    )));
                }
                require_dim(d)
            }
            Body::AxisCross { d } | Body::Simplex { d } => require_dim(d),
            Body::Triangle { alpha, beta } => {
                if !(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "triangle needs alpha, beta in (0,1), got ({alpha}, {beta})"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Ambient dimension of the body.
    pub fn dim(&self) -> usize {
        match *self {
            Body::LpBall { d, .. } | Body::AxisCross { d } | Body::Simplex { d } => d,
            Body::Triangle { .. } => 2,
        }
    }

    /// True for bodies with empty interior (no sandwich lower constant).
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Body::AxisCross { .. })
    }

    /// Membership of a real point in the dilation `nC`, with relative slack
    /// [`MEMBERSHIP_REL_TOL`] so that boundary lattice points are kept.
    pub fn contains_scaled(&self, x: &[f64], n: usize) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if x.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "membership is defined on finite nonnegative coordinates".into(),
            ));
        }
        let nf = n as f64;
        let budget = nf * (1.0 + MEMBERSHIP_REL_TOL);
        Ok(match *self {
            Body::LpBall { p, .. } => {
                let s: f64 = x.iter().map(|&v| v.powf(p)).sum();
                s <= nf.powf(p) * (1.0 + MEMBERSHIP_REL_TOL)
            }
            Body::AxisCross { .. } => {
                let positive: Vec<f64> = x.iter().copied().filter(|&v| v > 0.0).collect();
                match positive.len() {
                    0 => true,
                    1 => positive[0] <= budget,
                    _ => false,
                }
            }
            Body::Triangle { alpha, beta } => x[0] / beta + x[1] / alpha <= budget,
            Body::Simplex { .. } => x.iter().sum::<f64>() <= budget,
        })
    }

    /// Integer-index form of [`Body::contains_scaled`].
    pub fn contains_index(&self, j: &[u32], n: usize) -> Result<bool> {
        let x: Vec<f64> = j.iter().map(|&v| v as f64).collect();
        self.contains_scaled(&x, n)
    }

    /// Smallest `n` with `J ∈ nC`, or `None` when no dilation contains `J`
    /// (mixed indices of the axis cross). The zero index has degree 0.
    pub fn c_degree(&self, j: &[u32]) -> Option<usize> {
        if j.len() != self.dim() {
            return None;
        }
        if j.iter().all(|&v| v == 0) {
            return Some(0);
        }
        match *self {
            Body::AxisCross { .. } => {
                let positive: Vec<u32> = j.iter().copied().filter(|&v| v > 0).collect();
                (positive.len() == 1).then(|| positive[0] as usize)
            }
            Body::Simplex { .. } => Some(total_degree(j)),
            Body::LpBall { p, .. } => {
                let s: f64 = j.iter().map(|&v| (v as f64).powf(p)).sum();
                Some(self.scan_up_from(j, s.powf(1.0 / p)))
            }
            Body::Triangle { alpha, beta } => {
                let v = j[0] as f64 / beta + j[1] as f64 / alpha;
                Some(self.scan_up_from(j, v))
            }
        }
    }

    /// First containing dilation at or above a floating-point candidate.
    /// The candidate is backed off by two to absorb round-off; membership is
    /// monotone in `n`, so the scan returns the exact minimum.
    fn scan_up_from(&self, j: &[u32], candidate: f64) -> usize {
        let mut n = (candidate.floor() as usize).saturating_sub(2);
        loop {
            if self.contains_index(j, n).expect("index dims checked by caller") {
                return n;
            }
            n += 1;
        }
    }

    /// Ordered monomial lattice of the dilation `nC`.
    pub fn lattice(&self, n: usize) -> Result<LatticeBasis> {
        self.validate()?;
        let d = self.dim();
        let mut indices: Vec<MultiIndex> = Vec::new();
        match *self {
            Body::AxisCross { .. } => {
                // Only pure powers survive; enumerate them directly.
                indices.push(vec![0; d]);
                for axis in 0..d {
                    for k in 1..=n {
                        let mut j = vec![0u32; d];
                        j[axis] = k as u32;
                        indices.push(j);
                    }
                }
            }
            _ => {
                // Every other body is downward closed, so a nested scan with
                // early break enumerates exactly the lattice.
                let mut prefix = vec![0u32; d];
                self.enumerate_rec(n, 0, &mut prefix, &mut indices)?;
            }
        }
        let mut entries: Vec<(usize, MultiIndex)> = indices
            .into_iter()
            .map(|j| {
                let deg = self
                    .c_degree(&j)
                    .expect("every enumerated index lies in some dilation");
                (deg, j)
            })
            .collect();
        entries.sort_by(|(da, ja), (db, jb)| {
            da.cmp(db)
                .then(total_degree(ja).cmp(&total_degree(jb)))
                // Descending lexicographic tie-break: (1,0) precedes (0,1).
                .then_with(|| jb.cmp(ja))
        });
        let (degrees, indices): (Vec<usize>, Vec<MultiIndex>) = entries.into_iter().unzip();
        debug_assert!(degrees.iter().all(|&deg| deg <= n));
        let positions = indices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, j)| (j, i))
            .collect();
        Ok(LatticeBasis { body: self.clone(), n, indices, degrees, positions })
    }

    fn enumerate_rec(
        &self,
        n: usize,
        axis: usize,
        prefix: &mut MultiIndex,
        out: &mut Vec<MultiIndex>,
    ) -> Result<()> {
        if axis == prefix.len() {
            out.push(prefix.clone());
            return Ok(());
        }
        let mut k = 0u32;
        loop {
            prefix[axis] = k;
            for later in axis + 1..prefix.len() {
                prefix[later] = 0;
            }
            if !self.contains_index(prefix, n)? {
                break;
            }
            self.enumerate_rec(n, axis + 1, prefix, out)?;
            k += 1;
        }
        prefix[axis] = 0;
        Ok(())
    }

    /// `dim Poly(nC)`.
    pub fn lattice_dim(&self, n: usize) -> Result<usize> {
        Ok(self.lattice(n)?.len())
    }

    /// Square root of the planar area of the body (`d = 2` only).
    ///
    /// For the ℓ^p ball the area is
    /// `Γ(1/p)·Γ(1 + 1/p) / (p·Γ(1 + 2/p))`; for the triangle `αβ/2`; the
    /// axis cross has area zero.
    pub fn area_sqrt(&self) -> Result<f64> {
        if self.dim() != 2 {
            return Err(Error::Unsupported(format!(
                "area_sqrt is a planar quantity; body has dimension {}",
                self.dim()
            )));
        }
        use statrs::function::gamma::gamma;
        Ok(match *self {
            Body::LpBall { p, .. } => {
                (gamma(1.0 / p) * gamma(1.0 + 1.0 / p) / (p * gamma(1.0 + 2.0 / p))).sqrt()
            }
            Body::Triangle { alpha, beta } => (alpha * beta / 2.0).sqrt(),
            Body::Simplex { .. } => 0.5f64.sqrt(),
            Body::AxisCross { .. } => 0.0,
        })
    }

    /// Best constants `ε, δ` with `ε·Σ ⊂ C ⊂ δ·Σ`.
    ///
    /// For the ℓ^p ball the inner constant is attained on the diagonal:
    /// `ε = d^(1 - 1/p)`. The axis cross is degenerate (`ε = 0`).
    pub fn sandwich_constants(&self) -> SandwichConstants {
        match *self {
            Body::LpBall { p, d } => SandwichConstants {
                epsilon: (d as f64).powf(1.0 - 1.0 / p),
                delta: 1.0,
                degenerate: false,
            },
            Body::Triangle { alpha, beta } => SandwichConstants {
                epsilon: alpha.min(beta),
                delta: 1.0,
                degenerate: false,
            },
            Body::Simplex { .. } => {
                SandwichConstants { epsilon: 1.0, delta: 1.0, degenerate: false }
            }
            Body::AxisCross { .. } => {
                SandwichConstants { epsilon: 0.0, delta: 1.0, degenerate: true }
            }
        }
    }

    /// Support-type upper envelope `φ_C(x) = sup{⟨x, y⟩ : y ∈ co(C ∪ {0})}`.
    ///
    /// The convex hull of every supported body except the triangle is the
    /// simplex, giving `max(0, x_1, …, x_d)`; the triangle's hull has
    /// vertices `(β, 0)` and `(0, α)`, giving `max(0, β·x_1, α·x_2)`.
    pub fn indicator_phi(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(match *self {
            Body::Triangle { alpha, beta } => 0f64.max(beta * x[0]).max(alpha * x[1]),
            _ => x.iter().fold(0f64, |acc, &v| acc.max(v)),
        })
    }

    /// First-axis and second-axis cut fractions used by the separable
    /// approximation error: the degree budget for a function of `z_1` alone
    /// is `⌊cut.0 · n⌋` and likewise for `z_2`.
    ///
    /// For the triangle the pair is `(α, β)`, matching the closed-form rate
    /// `max(ρ_A^α, ρ_B^β)` of the tangent-triangle comparison.
    pub fn axis_cuts(&self) -> (f64, f64) {
        match *self {
            Body::Triangle { alpha, beta } => (alpha, beta),
            _ => (1.0, 1.0),
        }
    }
}

fn require_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    Ok(())
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Body::LpBall { p, d } => write!(f, "lp(p={p},d={d})"),
            Body::AxisCross { d } => write!(f, "cross(d={d})"),
            Body::Triangle { alpha, beta } => write!(f, "triangle(alpha={alpha},beta={beta})"),
            Body::Simplex { d } => write!(f, "simplex(d={d})"),
        }
    }
}

/// `x`-intercept of the line through `(0, α)` tangent to the unit ℓ^p
/// sphere `x^p + y^p = 1`, for `0 < p < 1` and `0 < α < 1`.
///
/// With `q = p/(1-p)` the intercept is `β = (1 - α^q)^(1/q)`; the triangle
/// is isosceles exactly at `α = (1/2)^(1/q)`, see [`isosceles_alpha`].
pub fn tangent_beta(p: f64, alpha: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tangency needs 0 < p < 1, got p = {p}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tangency needs 0 < alpha < 1, got alpha = {alpha}"
        )));
    }
    let q = p / (1.0 - p);
    Ok((1.0 - alpha.powf(q)).powf(1.0 / q))
}

/// The `α` with `tangent_beta(p, α) = α`, i.e. `(1/2)^(1/p - 1)`.
pub fn isosceles_alpha(p: f64) -> f64 {
    0.5f64.powf(1.0 / p - 1.0)
}

/// Monomial lattice of a dilated body, sorted by
/// (`C`-degree, total degree, descending lexicographic).
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    pub body: Body,
    pub n: usize,
    indices: Vec<MultiIndex>,
    degrees: Vec<usize>,
    positions: HashMap<MultiIndex, usize>,
}

impl LatticeBasis {
    /// Number of lattice points, i.e. `dim Poly(nC)`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Exponent vectors in basis order.
    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    /// `C`-degrees aligned with [`LatticeBasis::indices`].
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Basis position of an exponent vector, if present.
    pub fn position(&self, j: &[u32]) -> Option<usize> {
        self.positions.get(j).copied()
    }

    /// Largest `k` with `(k, k, …, k)` in the lattice (0 when only the
    /// origin is diagonal, as for the axis cross).
    pub fn diagonal_cutoff(&self) -> usize {
        let d = self.body.dim();
        let mut k = 0usize;
        loop {
            let j = vec![(k + 1) as u32; d];
            match self.position(&j) {
                Some(_) => k += 1,
                None => return k,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: enumerate the lattice by scanning the full bounding box
    /// `[0, n]^d` and filtering with membership only.
    fn box_scan_lattice(body: &Body, n: usize) -> Vec<MultiIndex> {
        let d = body.dim();
        let mut out = Vec::new();
        let mut j = vec![0u32; d];
        loop {
            if body.contains_index(&j, n).unwrap() {
                out.push(j.clone());
            }
            // Odometer increment over the box.
            let mut axis = d;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                if j[axis] < n as u32 {
                    j[axis] += 1;
                    for later in axis + 1..d {
                        j[later] = 0;
                    }
                    break;
                }
            }
        }
    }

    /// Oracle: first dilation containing `j` by unbounded linear scan.
    fn linear_scan_degree(body: &Body, j: &[u32], cap: usize) -> Option<usize> {
        (0..=cap).find(|&n| body.contains_index(j, n).unwrap())
    }

    /// Oracle: planar area of the ℓ^p ball by Simpson quadrature after the
    /// smoothing substitution `x = t^(1/p)`, which turns the integrand into
    /// `(1/p)·t^(1/p - 1)·(1 - t)^(1/p)` (smooth on `[0, 1]` for `p < 1`).
    fn lp_area_quadrature(p: f64) -> f64 {
        // Double-exponential rule on (0,1): the substituted integrand
        // has algebraic endpoint singularities (t^{1/p-1} at 0), which
        // polynomial rules resolve only at a fractional order; the
        // tanh-sinh map restores spectral accuracy.
        let f = |t: f64| {
            if t <= 0.0 || t >= 1.0 {
                0.0
            } else {
                (1.0 / p) * t.powf(1.0 / p - 1.0) * (1.0 - t).powf(1.0 / p)
            }
        };
        let h = 1.0 / 32.0;
        let levels = 160i64;
        let mut sum = 0.0;
        for k in -levels..=levels {
            let u = k as f64 * h;
            let s = std::f64::consts::FRAC_PI_2 * u.sinh();
            let t = 0.5 * (1.0 + s.tanh());
            let dt = std::f64::consts::FRAC_PI_2 * u.cosh() / (s.cosh() * s.cosh()) * 0.5;
            if dt.is_finite() && dt > 0.0 {
                sum += dt * f(t);
            }
        }
        sum * h
    }

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut acc = 1usize;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn lattice_matches_box_scan_oracle() {
        let bodies = [
            Body::lp(0.5, 2).unwrap(),
            Body::lp(0.3, 2).unwrap(),
            Body::lp(1.0, 3).unwrap(),
            Body::cross(2).unwrap(),
            Body::triangle(0.5, 0.75).unwrap(),
            Body::simplex(2).unwrap(),
        ];
        for body in &bodies {
            for n in [0usize, 1, 2, 5, 9] {
                let lattice = body.lattice(n).unwrap();
                let mut got: Vec<MultiIndex> = lattice.indices().to_vec();
                let mut want = box_scan_lattice(body, n);
                got.sort();
                want.sort();
                assert_eq!(got, want, "lattice set mismatch for {body} at n={n}");
            }
        }
    }

    #[test]
    fn lattice_order_is_graded_and_descending_lex() {
        let body = Body::lp(0.5, 2).unwrap();
        let lattice = body.lattice(2).unwrap();
        let want: Vec<MultiIndex> =
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![0, 2]];
        assert_eq!(lattice.indices(), &want[..]);
        assert_eq!(lattice.degrees(), &[0, 1, 1, 2, 2]);
    }

    #[test]
    fn cross_lattice_lists_pure_powers_in_order() {
        let body = Body::cross(2).unwrap();
        let lattice = body.lattice(3).unwrap();
        let want: Vec<MultiIndex> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![2, 0],
            vec![0, 2],
            vec![3, 0],
            vec![0, 3],
        ];
        assert_eq!(lattice.indices(), &want[..]);
    }

    #[test]
    fn lattice_dims_match_closed_forms() {
        let simplex = Body::simplex(2).unwrap();
        for n in 0..=50 {
            assert_eq!(simplex.lattice_dim(n).unwrap(), binom(n + 2, 2));
        }
        for d in 1..=4 {
            let cross = Body::cross(d).unwrap();
            for n in 0..=50 {
                assert_eq!(cross.lattice_dim(n).unwrap(), d * n + 1);
            }
        }
    }

    #[test]
    fn lattices_nest_along_n() {
        for body in [Body::lp(0.5, 2).unwrap(), Body::triangle(0.4, 0.7).unwrap()] {
            let mut prev = 0usize;
            for n in 1..=12 {
                let lattice = body.lattice(n).unwrap();
                let smaller = body.lattice(n - 1).unwrap();
                for j in smaller.indices() {
                    assert!(lattice.position(j).is_some(), "{body}: lattice not nested at n={n}");
                }
                assert!(lattice.len() > prev || n == 1 && lattice.len() >= prev);
                prev = lattice.len();
            }
        }
    }

    #[test]
    fn c_degree_matches_linear_scan_oracle() {
        let bodies = [
            Body::lp(0.3, 2).unwrap(),
            Body::lp(0.5, 2).unwrap(),
            Body::simplex(2).unwrap(),
            Body::triangle(0.5, 0.5).unwrap(),
            Body::cross(2).unwrap(),
        ];
        for body in &bodies {
            for j1 in 0u32..=20 {
                for j2 in 0u32..=20 {
                    let j = vec![j1, j2];
                    let got = body.c_degree(&j);
                    let want = linear_scan_degree(body, &j, 400);
                    if got.is_none() {
                        // Mixed axis-cross indices: the oracle must also fail
                        // within any dilation bound.
                        assert!(want.is_none(), "{body}: oracle found degree for {j:?}");
                    } else {
                        assert_eq!(got, want, "{body}: degree mismatch for {j:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn c_degree_examples() {
        assert_eq!(Body::lp(0.5, 2).unwrap().c_degree(&[1, 1]), Some(4));
        assert_eq!(Body::triangle(0.5, 0.5).unwrap().c_degree(&[1, 1]), Some(4));
        assert_eq!(Body::cross(2).unwrap().c_degree(&[3, 0]), Some(3));
        assert_eq!(Body::cross(2).unwrap().c_degree(&[1, 1]), None);
        assert_eq!(Body::simplex(2).unwrap().c_degree(&[0, 0]), Some(0));
    }

    #[test]
    fn degree_monotone_under_body_inclusion() {
        let tight = Body::lp(0.3, 2).unwrap();
        let mid = Body::lp(0.5, 2).unwrap();
        let loose = Body::simplex(2).unwrap();
        for j1 in 0u32..=20 {
            for j2 in 0u32..=20 {
                let j = vec![j1, j2];
                let a = tight.c_degree(&j).unwrap();
                let b = mid.c_degree(&j).unwrap();
                let c = loose.c_degree(&j).unwrap();
                assert!(a >= b && b >= c, "inclusion violated at {j:?}: {a} {b} {c}");
            }
        }
    }

    #[test]
    fn membership_iff_degree_within_n() {
        let body = Body::lp(0.5, 2).unwrap();
        for j1 in 0u32..=12 {
            for j2 in 0u32..=12 {
                let j = vec![j1, j2];
                let deg = body.c_degree(&j).unwrap();
                for n in 0..=30 {
                    assert_eq!(body.contains_index(&j, n).unwrap(), deg <= n);
                }
            }
        }
    }

    #[test]
    fn tangent_beta_examples_and_fixed_point() {
        assert!((tangent_beta(0.5, 0.25).unwrap() - 0.75).abs() < 1e-12);
        let a = 0.5f64.powf(0.25);
        assert!((tangent_beta(0.8, a).unwrap() - a).abs() < 1e-12);
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let alpha = isosceles_alpha(p);
            assert!(
                (tangent_beta(p, alpha).unwrap() - alpha).abs() < 1e-12,
                "isosceles fixed point failed at p={p}"
            );
        }
        assert!(tangent_beta(1.0, 0.5).is_err());
    }

    #[test]
    fn tangent_triangle_sits_inside_the_lp_ball() {
        for p in [0.2, 0.5, 0.8] {
            for alpha in [0.1, 0.4, isosceles_alpha(p), 0.9] {
                let beta = tangent_beta(p, alpha).unwrap();
                let ball = Body::lp(p, 2).unwrap();
                // Sample the hypotenuse; tangency allows equality.
                for k in 0..=64 {
                    let t = k as f64 / 64.0;
                    let x = [beta * (1.0 - t), alpha * t];
                    assert!(
                        ball.contains_scaled(&x, 1).unwrap(),
                        "hypotenuse point {x:?} escaped C_p at p={p}, alpha={alpha}"
                    );
                }
            }
        }
    }

    #[test]
    fn area_sqrt_matches_quadrature_oracle() {
        for p in [0.3, 0.5, 0.7] {
            let body = Body::lp(p, 2).unwrap();
            let got = body.area_sqrt().unwrap().powi(2);
            let want = lp_area_quadrature(p);
            assert!((got - want).abs() < 1e-12, "area mismatch at p={p}: {got} vs {want}");
        }
        let half: f64 = Body::lp(0.5, 2).unwrap().area_sqrt().unwrap();
        assert!((half.powi(2) - 1.0 / 6.0).abs() < 1e-12);
        let simplex: f64 = Body::simplex(2).unwrap().area_sqrt().unwrap();
        assert!((simplex.powi(2) - 0.5).abs() < 1e-15);
        let tri: f64 = Body::triangle(0.5, 0.5).unwrap().area_sqrt().unwrap();
        assert!((tri.powi(2) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn sandwich_constants_witnessed_by_membership() {
        let half = Body::lp(0.5, 2).unwrap().sandwich_constants();
        assert!((half.epsilon - 0.5).abs() < 1e-15);
        assert_eq!(half.delta, 1.0);
        let cross = Body::cross(2).unwrap().sandwich_constants();
        assert!(cross.degenerate && cross.epsilon == 0.0);

        for body in [Body::lp(0.4, 2).unwrap(), Body::triangle(0.3, 0.8).unwrap()] {
            let sc = body.sandwich_constants();
            // eps * simplex boundary stays inside the body...
            for k in 0..=32 {
                let t = k as f64 / 32.0;
                let x = [sc.epsilon * (1.0 - t), sc.epsilon * t];
                assert!(body.contains_scaled(&x, 1).unwrap(), "{body}: eps point {x:?} escaped");
            }
            // ...and the body stays inside delta * simplex (grid check).
            for a in 0..=40 {
                for b in 0..=40 {
                    let x = [a as f64 / 40.0, b as f64 / 40.0];
                    if body.contains_scaled(&x, 1).unwrap() {
                        assert!(
                            x[0] + x[1] <= sc.delta + 1e-6,
                            "{body}: point {x:?} escaped delta simplex"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn indicator_examples() {
        let simplex = Body::simplex(2).unwrap();
        assert!((simplex.indicator_phi(&[0.3, 0.7]).unwrap() - 0.7).abs() < 1e-15);
        let tri = Body::triangle(0.5, 0.5).unwrap();
        assert!((tri.indicator_phi(&[1.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
        let cross = Body::cross(2).unwrap();
        assert_eq!(cross.indicator_phi(&[-1.0, -1.0]).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_cutoff_matches_membership() {
        let body = Body::lp(0.5, 2).unwrap();
        assert_eq!(body.lattice(7).unwrap().diagonal_cutoff(), 1);
        for n in [4usize, 8, 16, 40] {
            let cutoff = body.lattice(n).unwrap().diagonal_cutoff();
            assert_eq!(cutoff, n / 4, "quarter law failed at n={n}");
        }
        assert_eq!(Body::cross(2).unwrap().lattice(9).unwrap().diagonal_cutoff(), 0);
    }

    #[test]
    fn serde_round_trip_matches_schema() {
        let body: Body = serde_json::from_str(r#"{"kind":"lp","p":0.5,"d":2}"#).unwrap();
        assert_eq!(body, Body::LpBall { p: 0.5, d: 2 });
        let tri: Body = serde_json::from_str(r#"{"kind":"triangle","alpha":0.5,"beta":0.75}"#)
            .unwrap();
        assert_eq!(tri, Body::Triangle { alpha: 0.5, beta: 0.75 });
        let text = serde_json::to_string(&Body::Simplex { d: 2 }).unwrap();
        let back: Body = serde_json::from_str(&text).unwrap();
        assert_eq!(back, Body::Simplex { d: 2 });
    }
}
