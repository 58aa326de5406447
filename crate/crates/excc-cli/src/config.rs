//! Experiment configuration: JSON schema, validation, and resolution.
//!
//! A configuration file declares one experiment together with its
//! geometric and stochastic inputs. [`validate`] resolves the raw schema
//! into a [`Plan`] of constructed core objects, so every cheap
//! precondition (parameter ranges, dimension agreement, referenced
//! files, monotone degree lists) fails before any numerics start. The
//! runner consumes only the `Plan`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use excc_core::ensemble::CoefficientLaw;
use excc_core::grid::EstimatorKind;
use excc_core::lab::ReferenceSet;
use excc_core::rates::AnalyticFunction1D;
use excc_core::{Body, GridSpec, MeasureModel, PlanarCompactum, ProductSet};

use crate::CliError;

/// Experiment selector; one per configuration file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Dump the ordered monomial lattice of a body.
    Lattice,
    /// Growth-estimator fields, optionally against a closed-form
    /// reference.
    Extremal,
    /// Diagonal sandwich bounds for an `ℓ^p` body over the unit ball.
    BallStudy,
    /// Best-approximation error curves with fitted geometric rates.
    Rates,
    /// Best uniform approximation of `xy` by `p(x) + q(y)`.
    MinimaxXy,
    /// Random ensembles: mean and dispersion fields plus slice roots.
    Random,
    /// Slice-root statistics without the field pass.
    ZeroStats,
    /// `ℓ^p` estimate against a tangent-triangle upper envelope.
    TriangleEnvelope,
}

/// Measure description as written in configuration files.
///
/// Mirrors the core moment models except that discrete quadrature nodes
/// live in a separate CSV file referenced by path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureConfig {
    Torus { d: usize },
    Circle { radii: Vec<f64> },
    Arcsine { a: f64, b: f64 },
    Sphere { d: usize },
    Product { factors: Vec<MeasureConfig> },
    /// Quadrature nodes from a CSV of `re_1,im_1,…,re_d,im_d,weight`
    /// rows; the path is resolved relative to the configuration file.
    Discrete { nodes_file: PathBuf },
}

impl MeasureConfig {
    /// Builds the core measure model, reading node files under `base`.
    pub fn resolve(&self, base: &Path) -> Result<MeasureModel, CliError> {
        let model = match self {
            MeasureConfig::Torus { d } => MeasureModel::TorusHaar { d: *d },
            MeasureConfig::Circle { radii } => MeasureModel::CircleHaar { radii: radii.clone() },
            MeasureConfig::Arcsine { a, b } => MeasureModel::Arcsine { a: *a, b: *b },
            MeasureConfig::Sphere { d } => MeasureModel::SphereSurface { d: *d },
            MeasureConfig::Product { factors } => MeasureModel::Product {
                factors: factors
                    .iter()
                    .map(|f| f.resolve(base))
                    .collect::<Result<Vec<MeasureModel>, CliError>>()?,
            },
            MeasureConfig::Discrete { nodes_file } => {
                let path =
                    if nodes_file.is_absolute() { nodes_file.clone() } else { base.join(nodes_file) };
                let text = fs::read_to_string(&path).map_err(|e| {
                    CliError::Validation(format!("cannot read nodes file {}: {e}", path.display()))
                })?;
                parse_nodes_csv(&text, &path)?
            }
        };
        model.validate()?;
        Ok(model)
    }
}

/// Parses discrete quadrature nodes: one `re,im,…,weight` row per node,
/// dimension inferred from the first data row.
fn parse_nodes_csv(text: &str, path: &Path) -> Result<MeasureModel, CliError> {
    let mut nodes: Vec<Vec<Complex64>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut width: Option<usize> = None;
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| {
                CliError::Validation(format!(
                    "{} line {}: bad number: {e}",
                    path.display(),
                    line_no + 1
                ))
            })?;
        match width {
            None if fields.len() >= 3 && fields.len() % 2 == 1 => width = Some(fields.len()),
            None => {
                return Err(CliError::Validation(format!(
                    "{} line {}: need re,im pairs plus a weight, got {} fields",
                    path.display(),
                    line_no + 1,
                    fields.len()
                )))
            }
            Some(w) if fields.len() != w => {
                return Err(CliError::Validation(format!(
                    "{} line {}: expected {} fields, got {}",
                    path.display(),
                    line_no + 1,
                    w,
                    fields.len()
                )))
            }
            Some(_) => {}
        }
        let node: Vec<Complex64> =
            fields[..fields.len() - 1].chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        nodes.push(node);
        weights.push(fields[fields.len() - 1]);
    }
    if nodes.is_empty() {
        return Err(CliError::Validation(format!("{}: no quadrature nodes", path.display())));
    }
    Ok(MeasureModel::Discrete { nodes, weights })
}

/// Reference compactum for extremal comparisons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetConfig {
    /// Euclidean unit ball.
    Ball,
    /// Product of disks and segments.
    Product { factors: Vec<PlanarCompactum> },
}

impl SetConfig {
    pub fn resolve(&self) -> Result<ReferenceSet, CliError> {
        Ok(match self {
            SetConfig::Ball => ReferenceSet::Ball,
            SetConfig::Product { factors } => {
                ReferenceSet::Product(ProductSet::new(factors.clone())?)
            }
        })
    }
}

/// Coefficient law for random ensembles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LawConfig {
    ComplexGaussian,
    UniformDisk { radius: f64 },
}

impl LawConfig {
    pub fn resolve(&self) -> CoefficientLaw {
        match *self {
            LawConfig::ComplexGaussian => CoefficientLaw::ComplexGaussian,
            LawConfig::UniformDisk { radius } => CoefficientLaw::UniformDisk { radius },
        }
    }
}

/// Rate-curve family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateFamily {
    /// `F(z,w) = f(z) + g(w)` with geometric coefficient rates.
    Separable,
    /// `F(z,w) = f(z·w)`.
    Diagonal,
    /// Area-normalized comparison of an `ℓ^p` body against a tangent
    /// triangle, using the diagonal family.
    Normalized,
}

/// Raw configuration schema; unknown keys are rejected.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub body: Option<Body>,
    #[serde(default)]
    pub measure: Option<MeasureConfig>,
    #[serde(default)]
    pub set: Option<SetConfig>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Degrees, strictly increasing.
    #[serde(default)]
    pub n_list: Vec<usize>,
    #[serde(default)]
    pub estimator: Option<EstimatorKind>,
    /// Master seed; required for stochastic experiments.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Ensemble sample count.
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub law: Option<LawConfig>,
    /// Body exponent for ball-study, triangle-envelope, and normalized
    /// rates.
    #[serde(default)]
    pub p: Option<f64>,
    /// Tangency heights for the triangle envelope.
    #[serde(default)]
    pub alpha_list: Vec<f64>,
    /// Tangency height for normalized rate comparisons.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Diagonal radii for the ball study.
    #[serde(default)]
    pub radii: Vec<f64>,
    #[serde(default)]
    pub family: Option<RateFamily>,
    /// Coefficient rate of the first (or only) analytic factor.
    #[serde(default)]
    pub rho_a: Option<f64>,
    /// Coefficient rate of the second analytic factor.
    #[serde(default)]
    pub rho_b: Option<f64>,
    /// Torus sample count for empirical sup norms of rate curves.
    #[serde(default)]
    pub sup_samples: Option<usize>,
    /// Grid points per axis for the minimax linear program.
    #[serde(default)]
    pub grid_count: Option<usize>,
    /// Output directory; the `--out` flag overrides it.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl Config {
    pub fn from_path(path: &Path) -> Result<(Config, Vec<u8>), CliError> {
        let bytes = fs::read(path).map_err(|e| {
            CliError::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        let cfg: Config = serde_json::from_slice(&bytes).map_err(|e| {
            CliError::Validation(format!("cannot parse config {}: {e}", path.display()))
        })?;
        Ok((cfg, bytes))
    }
}

/// Fully resolved experiment, ready to run.
#[derive(Clone, Debug)]
pub enum Plan {
    Lattice {
        body: Body,
        n_list: Vec<usize>,
    },
    Extremal {
        body: Body,
        measure: MeasureModel,
        set: Option<ReferenceSet>,
        grid: GridSpec,
        n_list: Vec<usize>,
        estimator: EstimatorKind,
    },
    BallStudy {
        p: f64,
        n: usize,
        radii: Vec<f64>,
    },
    Rates {
        family: ResolvedRates,
        sup_samples: usize,
    },
    MinimaxXy {
        n_list: Vec<usize>,
        grid_count: usize,
    },
    Random {
        body: Body,
        measure: MeasureModel,
        grid: GridSpec,
        n: usize,
        samples: usize,
        seed: u64,
        law: CoefficientLaw,
    },
    ZeroStats {
        body: Body,
        measure: MeasureModel,
        n: usize,
        samples: usize,
        seed: u64,
        law: CoefficientLaw,
    },
    TriangleEnvelope {
        p: f64,
        alphas: Vec<f64>,
        measure: MeasureModel,
        grid: GridSpec,
        n: usize,
    },
}

/// Rate experiment after parameter resolution.
#[derive(Clone, Debug)]
pub enum ResolvedRates {
    Separable { body: Body, f: AnalyticFunction1D, g: AnalyticFunction1D, n_values: Vec<usize> },
    Diagonal { body: Body, f: AnalyticFunction1D, n_values: Vec<usize> },
    Normalized { p: f64, alpha: f64, f: AnalyticFunction1D, n_max: usize },
}

fn require<T: Clone>(field: &Option<T>, name: &str) -> Result<T, CliError> {
    field
        .clone()
        .ok_or_else(|| CliError::Validation(format!("missing required field `{name}`")))
}

fn require_n_list(cfg: &Config) -> Result<Vec<usize>, CliError> {
    if cfg.n_list.is_empty() {
        return Err(CliError::Validation("`n_list` must be nonempty".into()));
    }
    if cfg.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Validation("`n_list` must be strictly increasing".into()));
    }
    Ok(cfg.n_list.clone())
}

fn require_single_n(cfg: &Config) -> Result<usize, CliError> {
    let list = require_n_list(cfg)?;
    if list.len() != 1 {
        return Err(CliError::Validation(format!(
            "this experiment takes exactly one degree in `n_list`, got {}",
            list.len()
        )));
    }
    Ok(list[0])
}

fn check_dims(body: &Body, measure: &MeasureModel, grid: Option<&GridSpec>) -> Result<(), CliError> {
    if measure.dim() != body.dim() {
        return Err(CliError::Validation(format!(
            "measure dimension {} does not match body dimension {}",
            measure.dim(),
            body.dim()
        )));
    }
    if let Some(g) = grid {
        if g.dim() != body.dim() {
            return Err(CliError::Validation(format!(
                "grid dimension {} does not match body dimension {}",
                g.dim(),
                body.dim()
            )));
        }
    }
    Ok(())
}

fn resolve_rho(value: Option<f64>, name: &str) -> Result<AnalyticFunction1D, CliError> {
    let rho =
        value.ok_or_else(|| CliError::Validation(format!("missing required field `{name}`")))?;
    Ok(AnalyticFunction1D::geometric(rho)?)
}

/// Resolves and checks a configuration. `base` is the directory of the
/// configuration file, used for relative node paths.
pub fn validate(cfg: &Config, base: &Path) -> Result<Plan, CliError> {
    match cfg.experiment {
        ExperimentKind::Lattice => {
            let body = require(&cfg.body, "body")?;
            body.validate()?;
            Ok(Plan::Lattice { body, n_list: require_n_list(cfg)? })
        }
        ExperimentKind::Extremal => {
            let body = require(&cfg.body, "body")?;
            body.validate()?;
            let measure = require(&cfg.measure, "measure")?.resolve(base)?;
            let grid = require(&cfg.grid, "grid")?;
            grid.validate()?;
            check_dims(&body, &measure, Some(&grid))?;
            let estimator = cfg.estimator.unwrap_or(EstimatorKind::Bergman);
            if !matches!(
                estimator,
                EstimatorKind::Bergman | EstimatorKind::OnbSup | EstimatorKind::BracketLower
            ) {
                return Err(CliError::Validation(format!(
                    "estimator `{}` is an output label, not a runnable estimator",
                    estimator.label()
                )));
            }
            let set = match &cfg.set {
                Some(s) => {
                    let set = s.resolve()?;
                    if let ReferenceSet::Product(p) = &set {
                        if p.dim() != body.dim() {
                            return Err(CliError::Validation(format!(
                                "reference set dimension {} does not match body dimension {}",
                                p.dim(),
                                body.dim()
                            )));
                        }
                    }
                    Some(set)
                }
                None => None,
            };
            Ok(Plan::Extremal {
                body,
                measure,
                set,
                grid,
                n_list: require_n_list(cfg)?,
                estimator,
            })
        }
        ExperimentKind::BallStudy => {
            let p = require(&cfg.p, "p")?;
            Body::lp(p, 2)?;
            if cfg.radii.is_empty() {
                return Err(CliError::Validation("`radii` must be nonempty".into()));
            }
            if cfg.radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
                return Err(CliError::Validation("`radii` must be positive and finite".into()));
            }
            Ok(Plan::BallStudy { p, n: require_single_n(cfg)?, radii: cfg.radii.clone() })
        }
        ExperimentKind::Rates => {
            let family = require(&cfg.family, "family")?;
            let sup_samples = cfg.sup_samples.unwrap_or(2000);
            if sup_samples == 0 {
                return Err(CliError::Validation("`sup_samples` must be positive".into()));
            }
            let resolved = match family {
                RateFamily::Separable => {
                    let body = require(&cfg.body, "body")?;
                    body.validate()?;
                    if body.dim() != 2 {
                        return Err(CliError::Validation(
                            "separable rate curves need a planar body".into(),
                        ));
                    }
                    ResolvedRates::Separable {
                        body,
                        f: resolve_rho(cfg.rho_a, "rho_a")?,
                        g: resolve_rho(cfg.rho_b, "rho_b")?,
                        n_values: require_n_list(cfg)?,
                    }
                }
                RateFamily::Diagonal => {
                    let body = require(&cfg.body, "body")?;
                    body.validate()?;
                    if body.dim() != 2 {
                        return Err(CliError::Validation(
                            "diagonal rate curves need a planar body".into(),
                        ));
                    }
                    ResolvedRates::Diagonal {
                        body,
                        f: resolve_rho(cfg.rho_a, "rho_a")?,
                        n_values: require_n_list(cfg)?,
                    }
                }
                RateFamily::Normalized => {
                    let p = require(&cfg.p, "p")?;
                    let alpha = require(&cfg.alpha, "alpha")?;
                    Body::tangent_triangle(p, alpha)?;
                    let n_max = *require_n_list(cfg)?.last().expect("nonempty");
                    ResolvedRates::Normalized {
                        p,
                        alpha,
                        f: resolve_rho(cfg.rho_a, "rho_a")?,
                        n_max,
                    }
                }
            };
            Ok(Plan::Rates { family: resolved, sup_samples })
        }
        ExperimentKind::MinimaxXy => {
            let grid_count = cfg.grid_count.unwrap_or(excc_core::minimax::DEFAULT_MINIMAX_GRID);
            Ok(Plan::MinimaxXy { n_list: require_n_list(cfg)?, grid_count })
        }
        ExperimentKind::Random | ExperimentKind::ZeroStats => {
            let body = require(&cfg.body, "body")?;
            body.validate()?;
            let measure = require(&cfg.measure, "measure")?.resolve(base)?;
            let n = require_single_n(cfg)?;
            if n == 0 {
                return Err(CliError::Validation("ensembles need degree n ≥ 1".into()));
            }
            let samples = require(&cfg.samples, "samples")?;
            if samples == 0 {
                return Err(CliError::Validation("`samples` must be positive".into()));
            }
            let seed = cfg
                .seed
                .ok_or_else(|| CliError::Validation("stochastic experiments need `seed`".into()))?;
            let law = cfg.law.unwrap_or(LawConfig::ComplexGaussian).resolve();
            law.validate()?;
            if cfg.experiment == ExperimentKind::Random {
                let grid = require(&cfg.grid, "grid")?;
                grid.validate()?;
                check_dims(&body, &measure, Some(&grid))?;
                Ok(Plan::Random { body, measure, grid, n, samples, seed, law })
            } else {
                check_dims(&body, &measure, None)?;
                Ok(Plan::ZeroStats { body, measure, n, samples, seed, law })
            }
        }
        ExperimentKind::TriangleEnvelope => {
            let p = require(&cfg.p, "p")?;
            if cfg.alpha_list.is_empty() {
                return Err(CliError::Validation("`alpha_list` must be nonempty".into()));
            }
            for &a in &cfg.alpha_list {
                Body::tangent_triangle(p, a)?;
            }
            let measure = require(&cfg.measure, "measure")?.resolve(base)?;
            let grid = require(&cfg.grid, "grid")?;
            grid.validate()?;
            let body = Body::lp(p, 2)?;
            check_dims(&body, &measure, Some(&grid))?;
            Ok(Plan::TriangleEnvelope {
                p,
                alphas: cfg.alpha_list.clone(),
                measure,
                grid,
                n: require_single_n(cfg)?,
            })
        }
    }
}
