//! Evaluation grids in `ℂ^d` and the field containers produced on them.
//!
//! A grid is a Cartesian product of per-coordinate samples; each coordinate
//! samples moduli on a linear range and phases either at one fixed angle or
//! equally spaced. Closed-form references depend only on moduli, so the
//! default experiment grids use a single generic phase per coordinate to
//! avoid symmetry artifacts while keeping budgets small.
//!
//! [`FieldResult`] stores one scalar per grid point in row-major order
//! (last coordinate fastest) together with the estimator tag and the
//! degree, which is all the downstream comparison and CSV layers need.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Phase sampling rule for one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseSpec {
    /// One fixed phase in radians.
    Fixed(f64),
    /// This many phases, equally spaced over `[0, 2π)`.
    Count(usize),
}

impl PhaseSpec {
    fn phases(&self) -> Vec<f64> {
        match *self {
            PhaseSpec::Fixed(theta) => vec![theta],
            PhaseSpec::Count(k) => {
                (0..k).map(|j| 2.0 * std::f64::consts::PI * j as f64 / k as f64).collect()
            }
        }
    }

    fn count(&self) -> usize {
        match *self {
            PhaseSpec::Fixed(_) => 1,
            PhaseSpec::Count(k) => k,
        }
    }
}

/// Sampling rule for one coordinate: moduli linearly spaced over
/// `[r_min, r_max]`, combined with every phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
    pub phase: PhaseSpec,
}

impl AxisSpec {
    /// Single-point axis at modulus `r` with phase `theta`.
    pub fn point(r: f64, theta: f64) -> Self {
        AxisSpec { r_min: r, r_max: r, count: 1, phase: PhaseSpec::Fixed(theta) }
    }

    /// Moduli-only axis with one fixed phase.
    pub fn moduli(r_min: f64, r_max: f64, count: usize, theta: f64) -> Self {
        AxisSpec { r_min, r_max, count, phase: PhaseSpec::Fixed(theta) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min >= 0.0 && self.r_max >= self.r_min) {
            return Err(Error::InvalidParameter(format!(
                "modulus range [{}, {}] must satisfy 0 ≤ r_min ≤ r_max",
                self.r_min, self.r_max
            )));
        }
        if self.count == 0 || self.phase.count() == 0 {
            return Err(Error::InvalidParameter("axis needs at least one sample".into()));
        }
        if self.count > 1 && self.r_max == self.r_min {
            return Err(Error::InvalidParameter(
                "several moduli requested on a zero-length range".into(),
            ));
        }
        Ok(())
    }

    fn radii(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.r_min];
        }
        let step = (self.r_max - self.r_min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.r_min + step * i as f64).collect()
    }

    /// All samples on this axis, modulus-major then phase.
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.count * self.phase.count());
        for r in self.radii() {
            for theta in self.phase.phases() {
                out.push(Complex64::from_polar(r, theta));
            }
        }
        out
    }
}

/// Product grid over all coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<AxisSpec>,
}

impl GridSpec {
    pub fn new(axes: Vec<AxisSpec>) -> Result<Self> {
        let grid = GridSpec { axes };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::InvalidParameter("grid needs at least one axis".into()));
        }
        for axis in &self.axes {
            axis.validate()?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Total number of grid points.
    pub fn budget(&self) -> usize {
        self.axes.iter().map(|a| a.count * a.phase.count()).product()
    }

    /// All grid points, row-major with the last coordinate fastest.
    pub fn points(&self) -> Vec<Vec<Complex64>> {
        let per_axis: Vec<Vec<Complex64>> = self.axes.iter().map(|a| a.points()).collect();
        let mut out: Vec<Vec<Complex64>> = vec![Vec::new()];
        for axis in &per_axis {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for prefix in &out {
                for &z in axis {
                    let mut p = prefix.clone();
                    p.push(z);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}

/// What a field's values mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    /// `(1/2n)·ln S_n`, the Bergman growth estimator.
    Bergman,
    /// Degree-weighted sup estimator over the orthonormal basis.
    OnbSup,
    /// Bergman estimator minus the bracket width.
    BracketLower,
    /// Closed-form reference value.
    Reference,
    /// `(1/n)·ln|H|` for one random sample.
    Potential,
    /// Pointwise ensemble mean of sample potentials.
    EnsembleMean,
    /// Pointwise ensemble standard deviation of sample potentials.
    EnsembleStd,
}

impl EstimatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            EstimatorKind::Bergman => "bergman",
            EstimatorKind::OnbSup => "onb_sup",
            EstimatorKind::BracketLower => "bracket_lower",
            EstimatorKind::Reference => "reference",
            EstimatorKind::Potential => "potential",
            EstimatorKind::EnsembleMean => "ensemble_mean",
            EstimatorKind::EnsembleStd => "ensemble_std",
        }
    }
}

/// Scalar field sampled on a grid, in the grid's point order.
#[derive(Clone, Debug)]
pub struct FieldResult {
    pub grid: GridSpec,
    /// Degree of the underlying polynomial space; 0 for references.
    pub n: usize,
    pub estimator: EstimatorKind,
    /// Human-readable body/measure/set description for artifacts.
    pub label: String,
    pub values: Vec<f64>,
}

impl FieldResult {
    pub fn new(
        grid: GridSpec,
        n: usize,
        estimator: EstimatorKind,
        label: impl Into<String>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != grid.budget() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.budget()
            )));
        }
        Ok(FieldResult { grid, n, estimator, label: label.into(), values })
    }

    /// Mask of points where the field lies strictly below `log_r`,
    /// approximating the sublevel set `{V < log R}`.
    pub fn level_set(&self, log_r: f64) -> Vec<bool> {
        self.values.iter().map(|&v| v < log_r).collect()
    }

    /// Pairs each value with its grid point.
    pub fn iter_points(&self) -> impl Iterator<Item = (Vec<Complex64>, f64)> + '_ {
        self.grid.points().into_iter().zip(self.values.iter().copied())
    }
}
