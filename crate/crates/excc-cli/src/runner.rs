//! Experiment dispatch: turns a resolved [`Plan`] into CSV and JSON
//! artifacts plus a manifest.
//!
//! Every artifact except `manifest.json` is byte-deterministic for a
//! fixed configuration and seed: field evaluation and ensemble sampling
//! use order-preserving parallel maps with sequential reductions, and
//! the root pass iterates samples in index order. The manifest differs
//! between runs only in its wall-clock entry.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;

use excc_core::body::total_degree;
use excc_core::ensemble::{self, EnsembleConfig, ZeroStats};
use excc_core::grid::{EstimatorKind, GridSpec};
use excc_core::lab::{self, MarginLevel};
use excc_core::rates;
use excc_core::{AxisSpec, Body, MeasureModel, OrthoBasis, PolyC};

use crate::artifacts::{fmt_f64, write_csv, write_json, Manifest};
use crate::config::{Plan, ResolvedRates};
use crate::CliError;

/// Runs the plan, writing artifacts and the manifest under `out_dir`.
///
/// `config_bytes` is the raw configuration file for checksumming;
/// `extra_flags` records command-line overrides.
pub fn run(
    plan: &Plan,
    out_dir: &Path,
    config_bytes: &[u8],
    extra_flags: &BTreeMap<String, serde_json::Value>,
) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(|e| {
        CliError::Validation(format!("cannot create output directory {}: {e}", out_dir.display()))
    })?;
    let started = Instant::now();
    let mut manifest = Manifest::new(config_bytes, plan_seed(plan));
    for (key, value) in extra_flags {
        manifest.flags.insert(key.clone(), value.clone());
    }
    match plan {
        Plan::Lattice { body, n_list } => run_lattice(body, n_list, out_dir, &mut manifest)?,
        Plan::Extremal { body, measure, set, grid, n_list, estimator } => {
            run_extremal(body, measure, set.as_ref(), grid, n_list, *estimator, out_dir, &mut manifest)?
        }
        Plan::BallStudy { p, n, radii } => run_ball_study(*p, *n, radii, out_dir, &mut manifest)?,
        Plan::Rates { family, sup_samples } => {
            run_rates(family, *sup_samples, out_dir, &mut manifest)?
        }
        Plan::MinimaxXy { n_list, grid_count } => {
            run_minimax(n_list, *grid_count, out_dir, &mut manifest)?
        }
        Plan::Random { body, measure, grid, n, samples, seed, law } => {
            let basis = OrthoBasis::new(body.clone(), measure.clone(), *n)?;
            let cfg = EnsembleConfig {
                basis,
                law: *law,
                count: *samples,
                seed: *seed,
                grid: grid.clone(),
            };
            run_mean_field(&cfg, out_dir, &mut manifest)?;
            run_slice_roots(&cfg, false, out_dir, &mut manifest)?;
        }
        Plan::ZeroStats { body, measure, n, samples, seed, law } => {
            let basis = OrthoBasis::new(body.clone(), measure.clone(), *n)?;
            // The grid is unused by the root pass; one point per axis
            // keeps the ensemble configuration valid.
            let grid = GridSpec::new(vec![AxisSpec::point(1.0, 0.0); body.dim()])?;
            let cfg =
                EnsembleConfig { basis, law: *law, count: *samples, seed: *seed, grid };
            run_slice_roots(&cfg, true, out_dir, &mut manifest)?;
        }
        Plan::TriangleEnvelope { p, alphas, measure, grid, n } => {
            run_envelope(*p, alphas, measure, grid, *n, out_dir, &mut manifest)?
        }
    }
    manifest.wall_ms = started.elapsed().as_millis();
    manifest.write(out_dir)?;
    log::info!("wrote {} artifacts to {}", manifest.artifacts.len() + 1, out_dir.display());
    Ok(())
}

fn plan_seed(plan: &Plan) -> Option<u64> {
    match plan {
        Plan::Random { seed, .. } | Plan::ZeroStats { seed, .. } => Some(*seed),
        _ => None,
    }
}

/// CSV cell for a body label; the display form contains commas.
fn body_cell(body: &Body) -> String {
    body.to_string().replace(',', ";")
}

fn point_header(dim: usize) -> String {
    let mut cols = Vec::with_capacity(2 * dim);
    for i in 1..=dim {
        cols.push(format!("z{i}_re"));
        cols.push(format!("z{i}_im"));
    }
    cols.join(",")
}

fn point_cells(z: &[Complex64]) -> String {
    z.iter().map(|c| format!("{},{}", fmt_f64(c.re), fmt_f64(c.im))).collect::<Vec<_>>().join(",")
}

fn run_lattice(
    body: &Body,
    n_list: &[usize],
    out_dir: &Path,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let d = body.dim();
    let mut header = String::from("n,position");
    for i in 1..=d {
        header.push_str(&format!(",j{i}"));
    }
    header.push_str(",degree,total_degree");
    let mut rows = Vec::new();
    for &n in n_list {
        let lattice = body.lattice(n)?;
        manifest.flag(&format!("dim_n{n}"), lattice.len());
        for (pos, j) in lattice.indices().iter().enumerate() {
            let mut row = format!("{n},{pos}");
            for &v in j.iter() {
                row.push_str(&format!(",{v}"));
            }
            row.push_str(&format!(",{},{}", lattice.degrees()[pos], total_degree(j)));
            rows.push(row);
        }
    }
    let record = write_csv(out_dir, "lattice.csv", &header, &rows)?;
    manifest.artifacts.push(record);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_extremal(
    body: &Body,
    measure: &MeasureModel,
    set: Option<&lab::ReferenceSet>,
    grid: &GridSpec,
    n_list: &[usize],
    estimator: EstimatorKind,
    out_dir: &Path,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let points = grid.points();
    let header = format!("{},value", point_header(grid.dim()));
    manifest.flag("estimator", estimator.label());
    manifest.flag("body", body_cell(body));

    let reference = match set {
        Some(s) => {
            let field = lab::field_reference(body, s, grid)?;
            let rows: Vec<String> = points
                .iter()
                .zip(&field.values)
                .map(|(z, v)| format!("{},{}", point_cells(z), fmt_f64(*v)))
                .collect();
            let record = write_csv(out_dir, "reference.csv", &header, &rows)?;
            manifest.artifacts.push(record);
            Some(field)
        }
        None => None,
    };

    let mut error_rows = Vec::new();
    for &n in n_list {
        let basis = OrthoBasis::new(body.clone(), measure.clone(), n)?;
        let field = lab::field_from_basis(&basis, grid, estimator, None)?;
        let rows: Vec<String> = points
            .iter()
            .zip(&field.values)
            .map(|(z, v)| format!("{},{}", point_cells(z), fmt_f64(*v)))
            .collect();
        let record = write_csv(out_dir, &format!("field_n{n:04}.csv"), &header, &rows)?;
        manifest.artifacts.push(record);
        if let Some(reference) = &reference {
            let err = lab::field_compare(&field, reference)?;
            let bound = measure.bm_constant(body, n)?;
            let width = basis.bracket_width(&bound);
            if bound.grid_estimated {
                manifest.flag("bound_grid_estimated", true);
            }
            error_rows.push(format!(
                "{n},{},{},{}",
                fmt_f64(err.sup),
                fmt_f64(err.mean),
                fmt_f64(width)
            ));
        }
    }
    if !error_rows.is_empty() {
        let record =
            write_csv(out_dir, "errors.csv", "n,sup_error,mean_error,bracket_width", &error_rows)?;
        manifest.artifacts.push(record);
    }
    Ok(())
}

fn run_ball_study(
    p: f64,
    n: usize,
    radii: &[f64],
    out_dir: &Path,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let rows = lab::ball_diagonal_study(p, n, radii)?;
    let csv_rows: Vec<String> = rows
        .iter()
        .map(|row| {
            format!(
                "{},{},{},{},{},{}",
                fmt_f64(row.r),
                fmt_f64(row.lower),
                fmt_f64(row.estimate),
                fmt_f64(row.upper),
                fmt_f64(row.lower_margin),
                fmt_f64(row.upper_margin)
            )
        })
        .collect();
    let record = write_csv(
        out_dir,
        "ball_study.csv",
        "r,lower,estimate,upper,lower_margin,upper_margin",
        &csv_rows,
    )?;
    manifest.artifacts.push(record);
    let min_margin = rows.iter().map(|r| r.min_margin()).fold(f64::INFINITY, f64::min);
    let level = lab::margin_level(min_margin);
    manifest.flag("ball_margin_min", min_margin);
    manifest.flag(
        "ball_margin_level",
        match level {
            MarginLevel::Full => "full",
            MarginLevel::Reduced => "reduced",
            MarginLevel::Failed => "failed",
        },
    );
    manifest.flag("reduced_margin_used", level == MarginLevel::Reduced);
    Ok(())
}

/// Low-discrepancy torus sample used for empirical sup norms: the
/// Kronecker sequence with frequencies `√2` and `√3`.
fn torus_sample(count: usize) -> Vec<(Complex64, Complex64)> {
    (0..count)
        .map(|k| {
            let t = (k as f64 * std::f64::consts::SQRT_2).fract();
            let u = (k as f64 * 3.0f64.sqrt()).fract();
            (
                Complex64::from_polar(1.0, 2.0 * PI * t),
                Complex64::from_polar(1.0, 2.0 * PI * u),
            )
        })
        .collect()
}

fn run_rates(
    family: &ResolvedRates,
    sup_samples: usize,
    out_dir: &Path,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    match family {
        ResolvedRates::Separable { body, f, g, n_values } => {
            let report = rates::rate_curve_separable(body, f, g, n_values)?;
            let sample = torus_sample(sup_samples);
            let sup_errors: Vec<f64> = n_values
                .iter()
                .map(|&n| {
                    let (mf, mg) = rates::separable_cuts(body, n);
                    sample
                        .iter()
                        .map(|&(z, w)| (f.tail_eval(mf, z) + g.tail_eval(mg, w)).norm())
                        .fold(0.0f64, f64::max)
                })
                .collect();
            write_rate_csv(body, "separable", &report, &sup_errors, out_dir, manifest)?;
        }
        ResolvedRates::Diagonal { body, f, n_values } => {
            let report = rates::rate_curve_diagonal(body, f, n_values)?;
            let sample = torus_sample(sup_samples);
            let sup_errors: Vec<f64> = n_values
                .iter()
                .map(|&n| {
                    let cutoff = rates::diagonal_cutoff(body, n)?;
                    Ok(sample
                        .iter()
                        .map(|&(z, w)| f.tail_eval(cutoff, z * w).norm())
                        .fold(0.0f64, f64::max))
                })
                .collect::<Result<Vec<f64>, CliError>>()?;
            write_rate_csv(body, "diagonal", &report, &sup_errors, out_dir, manifest)?;
        }
        ResolvedRates::Normalized { p, alpha, f, n_max } => {
            let fun = rates::TwoVarFunction::Diagonal { f: f.clone() };
            let cmp = rates::normalized_compare(*p, *alpha, &fun, *n_max)?;
            let rows: Vec<String> = cmp
                .n_values
                .iter()
                .zip(cmp.lp_errors.iter().zip(&cmp.tri_errors))
                .map(|(&n, (&lp, &tri))| format!("{n},{},{}", fmt_f64(lp), fmt_f64(tri)))
                .collect();
            let record =
                write_csv(out_dir, "rates_normalized.csv", "n,lp_error,tri_error", &rows)?;
            manifest.artifacts.push(record);
            let summary = serde_json::json!({
                "p": p,
                "alpha": alpha,
                "rho": f.rho(),
                "lp_fitted": cmp.lp_fitted,
                "lp_target": cmp.lp_target,
                "tri_fitted": cmp.tri_fitted,
                "tri_target": cmp.tri_target,
            });
            let record = write_json(out_dir, "rates_summary.json", &summary)?;
            manifest.artifacts.push(record);
        }
    }
    Ok(())
}

fn write_rate_csv(
    body: &Body,
    descriptor: &str,
    report: &rates::RateReport,
    sup_errors: &[f64],
    out_dir: &Path,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let rows: Vec<String> = report
        .n_values
        .iter()
        .zip(report.errors.iter().zip(sup_errors))
        .map(|(&n, (&l2, &sup))| {
            format!("{n},{},{},{},{descriptor}", fmt_f64(l2), fmt_f64(sup), body_cell(body))
        })
        .collect();
    let record =
        write_csv(out_dir, "rates.csv", "n,error_l2,error_sup,body,descriptor", &rows)?;
    manifest.artifacts.push(record);
    let (sup_fitted, _) = rates::fitted_rate(&report.n_values, sup_errors)?;
    let summary = serde_json::json!({
        "descriptor": descriptor,
        "body": body.to_string(),
        "l2_fitted": report.fitted,
        "target": report.target,
        "sup_fitted": sup_fitted,
        "window_start": report.window_start,
    });
    let record = write_json(out_dir, "rates_summary.json", &summary)?;
    manifest.artifacts.push(record);
    Ok(())
}

fn run_minimax(
    n_list: &[usize],
    grid_count: usize,
    out_dir: &Path,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let value = excc_core::minimax::minimax_xy(n, grid_count)?;
        rows.push(format!("{n},{}", fmt_f64(value)));
    }
    let record = write_csv(out_dir, "minimax.csv", "n,value", &rows)?;
    manifest.artifacts.push(record);
    Ok(())
}

fn run_mean_field(
    cfg: &EnsembleConfig,
    out_dir: &Path,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let field = ensemble::ensemble_mean_field(cfg)?;
    let points = cfg.grid.points();
    let header = format!("{},mean,std", point_header(cfg.grid.dim()));
    let rows: Vec<String> = points
        .iter()
        .zip(field.mean.values.iter().zip(&field.std.values))
        .map(|(z, (&m, &s))| format!("{},{},{}", point_cells(z), fmt_f64(m), fmt_f64(s)))
        .collect();
    let record = write_csv(out_dir, "ensemble_mean.csv", &header, &rows)?;
    manifest.artifacts.push(record);
    manifest.flag("field_clipped", field.clipped);
    Ok(())
}

/// Summary document for the aggregated slice roots.
#[derive(serde::Serialize)]
struct ZeroStatsDoc {
    seed: u64,
    n: usize,
    samples: usize,
    count: usize,
    clipped: usize,
    mean_log_radius: f64,
    quantiles_log_radius: [f64; 5],
    ks_angle: f64,
}

impl ZeroStatsDoc {
    fn new(cfg: &EnsembleConfig, stats: &ZeroStats) -> Self {
        ZeroStatsDoc {
            seed: cfg.seed,
            n: cfg.basis.n(),
            samples: cfg.count,
            count: stats.count,
            clipped: stats.clipped,
            mean_log_radius: stats.mean_log_radius,
            quantiles_log_radius: stats.quantiles_log_radius,
            ks_angle: stats.ks_angle,
        }
    }
}

/// Root pass shared by the `random` and `zero-stats` experiments: for
/// sample `i` the trailing coordinates are pinned to the unit-modulus
/// phase `exp(2πi·i/N)` and the surviving univariate slice is solved.
fn run_slice_roots(
    cfg: &EnsembleConfig,
    stats_required: bool,
    out_dir: &Path,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let d = cfg.basis.lattice().body.dim();
    let mut rows = Vec::new();
    let mut all_roots = Vec::new();
    for i in 0..cfg.count {
        let h: PolyC = cfg.sample_polynomial(i)?;
        let mut fixed: Vec<Option<Complex64>> = vec![None; d];
        if d > 1 {
            let w = Complex64::from_polar(1.0, 2.0 * PI * i as f64 / cfg.count as f64);
            for slot in fixed.iter_mut().skip(1) {
                *slot = Some(w);
            }
        }
        let roots = ensemble::slice_zeros(&h, &fixed)?;
        for root in &roots {
            rows.push(format!("{},{},{i}", fmt_f64(root.re), fmt_f64(root.im)));
        }
        all_roots.extend(roots);
    }
    let record = write_csv(out_dir, "roots.csv", "re,im,sample_index", &rows)?;
    manifest.artifacts.push(record);
    manifest.flag("root_count", all_roots.len());
    match ensemble::zero_statistics(&all_roots) {
        Ok(stats) => {
            let doc = ZeroStatsDoc::new(cfg, &stats);
            let record = write_json(out_dir, "zero_stats.json", &doc)?;
            manifest.artifacts.push(record);
        }
        Err(e) if !stats_required => {
            manifest.flag("zero_stats_skipped", e.to_string());
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn run_envelope(
    p: f64,
    alphas: &[f64],
    measure: &MeasureModel,
    grid: &GridSpec,
    n: usize,
    out_dir: &Path,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let points = grid.points();
    let rows = lab::triangle_envelope_study(p, alphas, &points, measure, n)?;
    let header = format!("{},lp_estimate,envelope,gap", point_header(grid.dim()));
    let csv_rows: Vec<String> = rows
        .iter()
        .map(|row| {
            format!(
                "{},{},{},{}",
                point_cells(&row.point),
                fmt_f64(row.lp_estimate),
                fmt_f64(row.envelope),
                fmt_f64(row.gap)
            )
        })
        .collect();
    let record = write_csv(out_dir, "envelope.csv", &header, &csv_rows)?;
    manifest.artifacts.push(record);
    let max_gap = rows.iter().map(|r| r.gap).fold(f64::NEG_INFINITY, f64::max);
    let min_gap = rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
    manifest.flag("envelope_max_gap", max_gap);
    manifest.flag("envelope_min_gap", min_gap);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_sample_stays_on_the_torus() {
        let sample = torus_sample(64);
        assert_eq!(sample.len(), 64);
        for (z, w) in sample {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((w.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn body_cell_contains_no_comma() {
        let body = Body::lp(0.5, 2).unwrap();
        assert!(!body_cell(&body).contains(','));
    }
}
