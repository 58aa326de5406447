//! Random polynomial ensembles `H(z) = Σ_j a_j·p_j(z)` over an
//! orthonormal basis, their normalized potentials `(1/n)·ln|H|`, slice
//! zero statistics, and a multistart Newton probe for common zeros.
//!
//! Every random draw comes from its own ChaCha8 stream keyed by
//! `(master seed, n, sample index, coefficient index)`, so any coefficient
//! of any sample can be regenerated independently and results never depend
//! on scheduling. Ensemble reductions (mean, standard deviation) are
//! ordered pairwise sums over the per-sample values.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::consts::{FIELD_SENTINEL, NEWTON_RESIDUAL_TOL, ZERO_DEDUP_TOL};
use crate::error::{Error, Result};
use crate::grid::{EstimatorKind, FieldResult, GridSpec};
use crate::orthopoly::{OrthoBasis, PolyC};
use crate::par;
use crate::roots::{polynomial_roots, trim_coefficients};

/// Distribution of one complex coefficient.
#[derive(Clone, Copy, Debug)]
pub enum CoefficientLaw {
    /// Rotation-invariant complex Gaussian with `E|a|² = 1`.
    ComplexGaussian,
    /// Uniform on the closed disk of this radius.
    UniformDisk { radius: f64 },
}

impl CoefficientLaw {
    /// Supremum of the density over ℂ.
    pub fn density_bound(&self) -> f64 {
        match *self {
            CoefficientLaw::ComplexGaussian => 1.0 / std::f64::consts::PI,
            CoefficientLaw::UniformDisk { radius } => {
                1.0 / (std::f64::consts::PI * radius * radius)
            }
        }
    }

    /// `P(|a| ≥ r)` in closed form.
    pub fn tail_mass(&self, r: f64) -> f64 {
        match *self {
            CoefficientLaw::ComplexGaussian => (-r * r).exp(),
            CoefficientLaw::UniformDisk { radius } => {
                if r >= radius {
                    0.0
                } else {
                    1.0 - (r / radius) * (r / radius)
                }
            }
        }
    }

    /// `E|a|²`.
    pub fn second_moment(&self) -> f64 {
        match *self {
            CoefficientLaw::ComplexGaussian => 1.0,
            CoefficientLaw::UniformDisk { radius } => radius * radius / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let CoefficientLaw::UniformDisk { radius } = *self {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "disk law needs a positive radius, got {radius}"
                )));
            }
        }
        Ok(())
    }

    /// One draw. The Gaussian uses independent real and imaginary parts of
    /// variance 1/2; the disk law uses the polar square-root transform, so
    /// both consume a fixed number of uniforms.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        match *self {
            CoefficientLaw::ComplexGaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * 0.5f64.sqrt()
            }
            CoefficientLaw::UniformDisk { radius } => {
                let u: f64 = rng.gen();
                let v: f64 = rng.gen();
                Complex64::from_polar(
                    radius * u.sqrt(),
                    2.0 * std::f64::consts::PI * v,
                )
            }
        }
    }
}

/// Dedicated RNG stream for one scalar draw site.
pub fn coefficient_stream(seed: u64, n: u64, sample: u64, coeff: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&n.to_le_bytes());
    key[16..24].copy_from_slice(&sample.to_le_bytes());
    key[24..32].copy_from_slice(&coeff.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// A random-polynomial experiment: basis, law, sample count, master seed,
/// and the grid where potentials are read off.
#[derive(Clone, Debug)]
pub struct EnsembleConfig {
    pub basis: OrthoBasis,
    pub law: CoefficientLaw,
    pub count: usize,
    pub seed: u64,
    pub grid: GridSpec,
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        self.law.validate()?;
        self.grid.validate()?;
        if self.count == 0 {
            return Err(Error::InvalidParameter("ensemble needs at least one sample".into()));
        }
        if self.basis.n() == 0 {
            return Err(Error::InvalidParameter("normalized potentials need n ≥ 1".into()));
        }
        if self.grid.dim() != self.basis.lattice().body.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.lattice().body.dim(),
                got: self.grid.dim(),
            });
        }
        Ok(())
    }

    /// Basis coefficients of sample `i`.
    pub fn sample_coefficients(&self, i: usize) -> Vec<Complex64> {
        let n = self.basis.n() as u64;
        (0..self.basis.len())
            .map(|j| {
                let mut rng = coefficient_stream(self.seed, n, i as u64, j as u64);
                self.law.sample(&mut rng)
            })
            .collect()
    }

    /// Sample `i` as a monomial-coefficient polynomial.
    pub fn sample_polynomial(&self, i: usize) -> Result<PolyC> {
        if i >= self.count {
            return Err(Error::InvalidParameter(format!(
                "sample index {i} out of range (N = {})",
                self.count
            )));
        }
        self.basis.monomial_polynomial(&self.sample_coefficients(i))
    }
}

fn normalized_log_abs(value: Complex64, n: usize) -> f64 {
    let v = value.norm().ln() / n as f64;
    if v.is_finite() {
        v
    } else {
        FIELD_SENTINEL
    }
}

/// `(1/n)·ln|H|` over the grid, with exact zeros clipped to the sentinel
/// [`FIELD_SENTINEL`].
pub fn potential_field(h: &PolyC, grid: &GridSpec) -> Result<FieldResult> {
    grid.validate()?;
    let n = h.lattice().n;
    if n == 0 {
        return Err(Error::InvalidParameter("normalized potentials need n ≥ 1".into()));
    }
    if grid.dim() != h.lattice().body.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.lattice().body.dim(),
            got: grid.dim(),
        });
    }
    let points = grid.points();
    let values = par::map_ordered(&points, |z| normalized_log_abs(h.eval(z), n));
    FieldResult::new(
        grid.clone(),
        n,
        EstimatorKind::Potential,
        format!("potential | {}", h.lattice().body),
        values,
    )
}

/// Pointwise ensemble mean and dispersion of sample potentials.
#[derive(Clone, Debug)]
pub struct EnsembleField {
    pub mean: FieldResult,
    /// Sample standard deviation (denominator `N - 1`); zero when `N = 1`.
    pub std: FieldResult,
    /// Number of point evaluations clipped to the sentinel.
    pub clipped: usize,
}

/// Samples the ensemble and aggregates `(1/n)·ln|H_i|` pointwise.
pub fn ensemble_mean_field(cfg: &EnsembleConfig) -> Result<EnsembleField> {
    cfg.validate()?;
    let points = cfg.grid.points();
    let n = cfg.basis.n();
    let per_sample: Vec<Result<Vec<f64>>> = par::map_index(cfg.count, |i| {
        let h = cfg.sample_polynomial(i)?;
        Ok(points.iter().map(|z| normalized_log_abs(h.eval(z), n)).collect())
    });
    let per_sample = per_sample.into_iter().collect::<Result<Vec<Vec<f64>>>>()?;
    let clipped = per_sample
        .iter()
        .flat_map(|row| row.iter())
        .filter(|&&v| v == FIELD_SENTINEL)
        .count();
    let m = points.len();
    let nf = cfg.count as f64;
    let mut means = Vec::with_capacity(m);
    let mut stds = Vec::with_capacity(m);
    let mut column = vec![0.0; cfg.count];
    for p in 0..m {
        for (i, row) in per_sample.iter().enumerate() {
            column[i] = row[p];
        }
        let mean = par::pairwise_sum(&column) / nf;
        means.push(mean);
        if cfg.count == 1 {
            stds.push(0.0);
        } else {
            let sq: Vec<f64> = column.iter().map(|&v| (v - mean) * (v - mean)).collect();
            stds.push((par::pairwise_sum(&sq) / (nf - 1.0)).sqrt());
        }
    }
    let label = format!("ensemble | {}", cfg.basis.lattice().body);
    Ok(EnsembleField {
        mean: FieldResult::new(
            cfg.grid.clone(),
            n,
            EstimatorKind::EnsembleMean,
            label.clone(),
            means,
        )?,
        std: FieldResult::new(cfg.grid.clone(), n, EstimatorKind::EnsembleStd, label, stds)?,
        clipped,
    })
}

/// Roots of the univariate restriction of `h` along the single free
/// coordinate of `fixed`. Errors when the restriction vanishes
/// identically.
pub fn slice_zeros(h: &PolyC, fixed: &[Option<Complex64>]) -> Result<Vec<Complex64>> {
    let (_, coeffs) = h.restrict(fixed)?;
    let trimmed = trim_coefficients(&coeffs);
    if trimmed.is_empty() {
        return Err(Error::Numerical("slice restriction is the zero polynomial".into()));
    }
    polynomial_roots(&trimmed)
}

/// Radial and angular summary of an aggregated root cloud.
#[derive(Clone, Debug)]
pub struct ZeroStats {
    pub count: usize,
    /// Roots at exactly zero, clipped to the sentinel in the radial data.
    pub clipped: usize,
    pub mean_log_radius: f64,
    /// Nearest-rank quantiles of `ln|root|` at 5%, 25%, 50%, 75%, 95%.
    pub quantiles_log_radius: [f64; 5],
    /// Kolmogorov-Smirnov distance of the angles from uniform on
    /// `[0, 2π)`.
    pub ks_angle: f64,
}

/// Summarizes at least 100 aggregated roots.
pub fn zero_statistics(roots: &[Complex64]) -> Result<ZeroStats> {
    if roots.len() < 100 {
        return Err(Error::InvalidParameter(format!(
            "zero statistics need at least 100 roots, got {}",
            roots.len()
        )));
    }
    let mut clipped = 0usize;
    let log_radii: Vec<f64> = roots
        .iter()
        .map(|z| {
            let v = z.norm().ln();
            if v.is_finite() {
                v
            } else {
                clipped += 1;
                FIELD_SENTINEL
            }
        })
        .collect();
    let mean_log_radius = par::pairwise_sum(&log_radii) / log_radii.len() as f64;
    let mut sorted = log_radii.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = sorted.len();
    let quantile = |q: f64| {
        let rank = (q * m as f64).ceil().max(1.0) as usize;
        sorted[rank.min(m) - 1]
    };
    let quantiles_log_radius =
        [quantile(0.05), quantile(0.25), quantile(0.5), quantile(0.75), quantile(0.95)];
    let mut angles: Vec<f64> = roots
        .iter()
        .map(|z| {
            let mut u = z.arg() / (2.0 * std::f64::consts::PI);
            if u < 0.0 {
                u += 1.0;
            }
            u
        })
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ks = 0.0f64;
    for (k, &u) in angles.iter().enumerate() {
        let lo = u - k as f64 / m as f64;
        let hi = (k + 1) as f64 / m as f64 - u;
        ks = ks.max(lo).max(hi);
    }
    Ok(ZeroStats {
        count: m,
        clipped,
        mean_log_radius,
        quantiles_log_radius,
        ks_angle: ks,
    })
}

/// Damped Newton iteration on the pair `(h1, h2)` from `starts` random
/// points in the polydisk of radius 2. Converged points (residual
/// `|h1| + |h2| < 10⁻¹⁰`) are deduplicated at distance `10⁻⁸`; starts
/// with singular Jacobians or stalled line searches are discarded, so the
/// output is a possibly-incomplete subset of the common zero set.
pub fn common_zeros_newton(
    h1: &PolyC,
    h2: &PolyC,
    starts: usize,
    seed: u64,
) -> Result<Vec<[Complex64; 2]>> {
    if h1.lattice().body.dim() != 2 || h2.lattice().body.dim() != 2 {
        return Err(Error::Unsupported("common-zero search needs d = 2".into()));
    }
    let residual = |z: &[Complex64; 2]| h1.eval(z).norm() + h2.eval(z).norm();
    let attempts: Vec<Option<[Complex64; 2]>> = par::map_index(starts, |i| {
        let mut rng = coefficient_stream(seed, 0, i as u64, 0);
        let mut z = [Complex64::new(0.0, 0.0); 2];
        for zi in &mut z {
            let u: f64 = rng.gen();
            let v: f64 = rng.gen();
            *zi = Complex64::from_polar(2.0 * u.sqrt(), 2.0 * std::f64::consts::PI * v);
        }
        let mut res = residual(&z);
        for _ in 0..80 {
            if res < NEWTON_RESIDUAL_TOL {
                return Some(z);
            }
            let (f1, g1) = h1.eval_grad(&z);
            let (f2, g2) = h2.eval_grad(&z);
            let det = g1[0] * g2[1] - g1[1] * g2[0];
            let scale = g1[0].norm() + g1[1].norm() + g2[0].norm() + g2[1].norm();
            if det.norm() <= 1e-14 * (1.0 + scale * scale) {
                return None;
            }
            let dz = (f1 * g2[1] - f2 * g1[1]) / det;
            let dw = (g1[0] * f2 - g2[0] * f1) / det;
            let mut lambda = 1.0f64;
            let mut advanced = false;
            for _ in 0..20 {
                let trial = [z[0] - lambda * dz, z[1] - lambda * dw];
                let trial_res = residual(&trial);
                if trial_res < res {
                    z = trial;
                    res = trial_res;
                    advanced = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !advanced || z[0].norm() > 100.0 || z[1].norm() > 100.0 {
                return None;
            }
        }
        if res < NEWTON_RESIDUAL_TOL {
            Some(z)
        } else {
            None
        }
    });
    let mut found: Vec<[Complex64; 2]> = Vec::new();
    for z in attempts.into_iter().flatten() {
        let dup = found.iter().any(|w| {
            ((z[0] - w[0]).norm_sqr() + (z[1] - w[1]).norm_sqr()).sqrt() < ZERO_DEDUP_TOL
        });
        if !dup {
            found.push(z);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::Body;
    use crate::grid::AxisSpec;
    use crate::measure::MeasureModel;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn torus_config(n: usize, count: usize, seed: u64) -> EnsembleConfig {
        EnsembleConfig {
            basis: OrthoBasis::new(
                Body::lp(0.5, 2).unwrap(),
                MeasureModel::TorusHaar { d: 2 },
                n,
            )
            .unwrap(),
            law: CoefficientLaw::ComplexGaussian,
            count,
            seed,
            grid: GridSpec::new(vec![AxisSpec::point(2.0, 0.0), AxisSpec::point(0.5, 0.7)])
                .unwrap(),
        }
    }

    #[test]
    fn identical_inputs_reproduce_coefficients() {
        let cfg = torus_config(8, 4, 99);
        let a = cfg.sample_coefficients(2);
        let b = cfg.sample_coefficients(2);
        assert_eq!(a.len(), cfg.basis.len());
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x, y, "streams must be bit-identical");
        }
        // Different samples differ.
        let other = cfg.sample_coefficients(3);
        assert!(a.iter().zip(other.iter()).any(|(x, y)| x != y));
    }

    #[test]
    fn gaussian_second_moment_close_to_one() {
        let law = CoefficientLaw::ComplexGaussian;
        let mut acc = 0.0;
        let draws = 100_000;
        for i in 0..draws {
            let mut rng = coefficient_stream(7, 1, i, 0);
            acc += law.sample(&mut rng).norm_sqr();
        }
        let mean = acc / draws as f64;
        assert!((mean - 1.0).abs() < 0.02, "sample second moment {mean}");
    }

    #[test]
    fn disk_law_is_bounded_and_tails_vanish() {
        let law = CoefficientLaw::UniformDisk { radius: 1.0 };
        for i in 0..1000 {
            let mut rng = coefficient_stream(3, 1, i, 0);
            assert!(law.sample(&mut rng).norm() <= 1.0 + 1e-15);
        }
        assert_eq!(law.tail_mass(1.0), 0.0);
        assert!((law.second_moment() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn law_tail_bounds_hold_at_dyadic_radii() {
        // Quadratic-decay tail hypothesis with constant 1.
        for law in [CoefficientLaw::ComplexGaussian, CoefficientLaw::UniformDisk { radius: 1.0 }]
        {
            for &r in &[2.0, 4.0, 8.0] {
                assert!(law.tail_mass(r) <= 1.0 / (r * r), "{law:?} at r = {r}");
            }
            assert!(law.density_bound().is_finite());
        }
    }

    #[test]
    fn constant_sample_has_zero_potential() {
        let cfg = torus_config(8, 1, 1);
        let lattice = Arc::clone(cfg.basis.lattice());
        let mut coeffs = vec![c(0.0, 0.0); lattice.len()];
        coeffs[0] = c(1.0, 0.0);
        let h = PolyC::new(lattice, coeffs).unwrap();
        let field = potential_field(&h, &cfg.grid).unwrap();
        assert!(field.values.iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn top_basis_element_field_matches_circle_growth() {
        let basis = OrthoBasis::new(
            Body::simplex(1).unwrap(),
            MeasureModel::CircleHaar { radii: vec![1.0] },
            6,
        )
        .unwrap();
        let mut coeffs = vec![c(0.0, 0.0); basis.len()];
        *coeffs.last_mut().unwrap() = c(1.0, 0.0);
        let h = basis.monomial_polynomial(&coeffs).unwrap();
        let grid = GridSpec::new(vec![AxisSpec::point(2.0, 0.3)]).unwrap();
        let field = potential_field(&h, &grid).unwrap();
        assert!((field.values[0] - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sample_potential_obeys_cauchy_schwarz_bound() {
        let cfg = torus_config(12, 6, 5);
        for i in 0..cfg.count {
            let a = cfg.sample_coefficients(i);
            let h = cfg.basis.monomial_polynomial(&a).unwrap();
            let norm = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for z in cfg.grid.points() {
                let pot = normalized_log_abs(h.eval(&z), cfg.basis.n());
                let bound = cfg.basis.bergman_log_estimate(&z).unwrap()
                    + norm.ln() / cfg.basis.n() as f64;
                assert!(
                    pot <= bound + 1e-10,
                    "sample {i}: potential {pot} above bound {bound}"
                );
            }
        }
    }

    #[test]
    fn mean_field_reduces_to_single_sample_and_tracks_reference() {
        let single = torus_config(16, 1, 11);
        let out = ensemble_mean_field(&single).unwrap();
        let h = single.sample_polynomial(0).unwrap();
        let direct = potential_field(&h, &single.grid).unwrap();
        assert_eq!(out.mean.values, direct.values);
        assert!(out.std.values.iter().all(|&s| s == 0.0));

        let cfg = torus_config(32, 40, 2024);
        let out = ensemble_mean_field(&cfg).unwrap();
        // At (2, 0.5) the product reference is ln 2.
        assert!(
            (out.mean.values[0] - 2f64.ln()).abs() < 0.2,
            "mean {} far from ln 2",
            out.mean.values[0]
        );
    }

    #[test]
    fn dispersion_shrinks_with_degree() {
        let coarse = torus_config(16, 60, 7);
        let fine = torus_config(64, 60, 7);
        let a = ensemble_mean_field(&coarse).unwrap();
        let b = ensemble_mean_field(&fine).unwrap();
        assert!(
            b.std.values[0] < a.std.values[0],
            "std at n=64 ({}) should drop below n=16 ({})",
            b.std.values[0],
            a.std.values[0]
        );
    }

    #[test]
    fn slice_roots_recover_known_factors() {
        let lattice = Arc::new(Body::simplex(2).unwrap().lattice(8).unwrap());
        // z⁸ - 1 at any w.
        let h = PolyC::from_terms(
            Arc::clone(&lattice),
            &[(vec![8, 0], c(1.0, 0.0)), (vec![0, 0], c(-1.0, 0.0))],
        )
        .unwrap();
        let roots = slice_zeros(&h, &[None, Some(c(0.3, 0.1))]).unwrap();
        assert_eq!(roots.len(), 8);
        for r in &roots {
            assert!((r.norm() - 1.0).abs() < 1e-10);
            assert!((r.powu(8) - c(1.0, 0.0)).norm() < 1e-9);
        }
        // z² - w at w = 4.
        let lattice2 = Arc::new(Body::simplex(2).unwrap().lattice(2).unwrap());
        let g = PolyC::from_terms(
            Arc::clone(&lattice2),
            &[(vec![2, 0], c(1.0, 0.0)), (vec![0, 1], c(-1.0, 0.0))],
        )
        .unwrap();
        let mut r = slice_zeros(&g, &[None, Some(c(4.0, 0.0))]).unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - c(-2.0, 0.0)).norm() < 1e-10);
        assert!((r[1] - c(2.0, 0.0)).norm() < 1e-10);
        // Restriction of the zero polynomial errors out.
        let zero = PolyC::from_terms(Arc::clone(&lattice2), &[]).unwrap();
        assert!(slice_zeros(&zero, &[None, Some(c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn ensemble_slice_roots_have_small_residuals() {
        let cfg = torus_config(16, 4, 31);
        for i in 0..cfg.count {
            let h = cfg.sample_polynomial(i).unwrap();
            let fixed = [None, Some(Complex64::from_polar(1.0, 0.37))];
            let (_, coeffs) = h.restrict(&fixed).unwrap();
            let norm = coeffs.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let roots = slice_zeros(&h, &fixed).unwrap();
            assert!(!roots.is_empty());
            for r in &roots {
                let mut acc = c(0.0, 0.0);
                for (k, &ck) in coeffs.iter().enumerate() {
                    acc += ck * r.powu(k as u32);
                }
                assert!(acc.norm() < 1e-8 * (1.0 + norm), "residual {}", acc.norm());
            }
        }
    }

    #[test]
    fn zero_statistics_null_case_and_degenerate_case() {
        let m = 2000;
        let uniform: Vec<Complex64> = (0..m)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64))
            .collect();
        let stats = zero_statistics(&uniform).unwrap();
        assert!(stats.mean_log_radius.abs() < 1e-12);
        assert!(stats.ks_angle < 0.04);
        assert_eq!(stats.clipped, 0);
        assert!(stats.quantiles_log_radius.iter().all(|q| q.abs() < 1e-12));

        let at_origin = vec![c(0.0, 0.0); 150];
        let stats0 = zero_statistics(&at_origin).unwrap();
        assert_eq!(stats0.clipped, 150);
        assert_eq!(stats0.mean_log_radius, FIELD_SENTINEL);
        assert!(stats0.ks_angle > 0.99);

        assert!(zero_statistics(&uniform[..99]).is_err());
    }

    #[test]
    fn newton_finds_product_and_coupled_zeros() {
        let lattice = Arc::new(Body::simplex(2).unwrap().lattice(2).unwrap());
        let h1 = PolyC::from_terms(
            Arc::clone(&lattice),
            &[(vec![2, 0], c(1.0, 0.0)), (vec![0, 0], c(-1.0, 0.0))],
        )
        .unwrap();
        let h2 = PolyC::from_terms(
            Arc::clone(&lattice),
            &[(vec![0, 2], c(1.0, 0.0)), (vec![0, 0], c(-1.0, 0.0))],
        )
        .unwrap();
        let zeros = common_zeros_newton(&h1, &h2, 200, 5).unwrap();
        assert_eq!(zeros.len(), 4, "expected the four corners, got {zeros:?}");
        for z in &zeros {
            assert!((z[0].powu(2) - c(1.0, 0.0)).norm() < 1e-8);
            assert!((z[1].powu(2) - c(1.0, 0.0)).norm() < 1e-8);
        }

        // z = w together with zw = 1.
        let g1 = PolyC::from_terms(
            Arc::clone(&lattice),
            &[(vec![1, 0], c(1.0, 0.0)), (vec![0, 1], c(-1.0, 0.0))],
        )
        .unwrap();
        let g2 = PolyC::from_terms(
            Arc::clone(&lattice),
            &[(vec![1, 1], c(1.0, 0.0)), (vec![0, 0], c(-1.0, 0.0))],
        )
        .unwrap();
        let zeros2 = common_zeros_newton(&g1, &g2, 200, 6).unwrap();
        assert_eq!(zeros2.len(), 2, "expected ±(1,1), got {zeros2:?}");
        for z in &zeros2 {
            assert!((z[0] - z[1]).norm() < 1e-8);
            assert!((z[0] * z[1] - c(1.0, 0.0)).norm() < 1e-8);
        }
    }
}
