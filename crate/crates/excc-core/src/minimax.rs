//! Discrete minimax approximation of a two-variable function by sums
//! `p(x) + q(y)`, solved as a linear program.
//!
//! The model problem is `f(x, y) = x·y` on `[0,1]²`: no separable sum
//! approximates it uniformly better than `1/4`, independent of the degree.
//! The lower bound comes from the four-corner functional
//! `f(0,0) + f(1,1) - f(1,0) - f(0,1) = 1`, which annihilates every
//! `p(x) + q(y)`; the bound is attained by `(x + y)/2 - 1/4`. The LP
//! minimizes the bound `t` subject to `±(f - p - q) ≤ t` on a uniform grid
//! that includes the endpoints, so the corner functional acts on actual
//! grid points.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};

/// Default edge count for the minimax grid; includes both endpoints.
pub const DEFAULT_MINIMAX_GRID: usize = 33;

/// Discrete minimax error of approximating `f` on `[0,1]²` by
/// `p(x) + q(y)` with both degrees at most `n`, over a
/// `grid_count × grid_count` uniform grid with endpoints.
///
/// The constant term of `q` is pinned to zero: only `p + q` matters, and
/// removing the shift ambiguity keeps the program bounded in every
/// variable.
pub fn minimax_separable_gap(
    f: impl Fn(f64, f64) -> f64,
    n: usize,
    grid_count: usize,
) -> Result<f64> {
    if grid_count < 2 {
        return Err(Error::InvalidParameter(
            "minimax grid needs at least 2 points per edge".into(),
        ));
    }
    let ticks: Vec<f64> = (0..grid_count)
        .map(|i| i as f64 / (grid_count - 1) as f64)
        .collect();
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let t = problem.add_var(1.0, (0.0, f64::INFINITY));
    let p_coeffs: Vec<_> =
        (0..=n).map(|_| problem.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    let q_coeffs: Vec<_> =
        (1..=n).map(|_| problem.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    for &x in &ticks {
        for &y in &ticks {
            let fxy = f(x, y);
            let mut terms = Vec::with_capacity(2 * n + 2);
            let mut xp = 1.0;
            for &v in &p_coeffs {
                terms.push((v, xp));
                xp *= x;
            }
            let mut yp = y;
            for &v in &q_coeffs {
                terms.push((v, yp));
                yp *= y;
            }
            // f - p - q ≤ t  and  p + q - f ≤ t
            let mut le: Vec<_> = terms.iter().map(|&(v, c)| (v, -c)).collect();
            le.push((t, -1.0));
            problem.add_constraint(&le, ComparisonOp::Le, -fxy);
            let mut ge = terms;
            ge.push((t, -1.0));
            problem.add_constraint(&ge, ComparisonOp::Le, fxy);
        }
    }
    let solution = problem
        .solve()
        .map_err(|e| Error::Numerical(format!("minimax linear program failed: {e}")))?;
    Ok(solution[t])
}

/// Minimax error for the model function `x·y`; equals `1/4` at every
/// degree.
pub fn minimax_xy(n: usize, grid_count: usize) -> Result<f64> {
    minimax_separable_gap(|x, y| x * y, n, grid_count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xy_gap_is_a_quarter_for_all_small_degrees() {
        for n in 1..=5 {
            let v = minimax_xy(n, DEFAULT_MINIMAX_GRID).unwrap();
            assert!((v - 0.25).abs() < 1e-3, "degree {n}: got {v}");
        }
    }

    #[test]
    fn separable_target_is_matched_exactly() {
        let v = minimax_separable_gap(|x, y| 0.5 * (x + y), 1, DEFAULT_MINIMAX_GRID).unwrap();
        assert!(v.abs() < 1e-9, "got {v}");
    }

    #[test]
    fn gap_never_increases_with_degree() {
        let mut prev = f64::INFINITY;
        for n in 0..=4 {
            let v = minimax_xy(n, DEFAULT_MINIMAX_GRID).unwrap();
            assert!(v <= prev + 1e-9);
            prev = v;
        }
    }

    #[test]
    fn corner_functional_certifies_the_lower_bound() {
        // The four-corner alternating sum of x·y equals 1, and any
        // separable p(x) + q(y) cancels in it; with sup error t the sum is
        // at most 4t, so t ≥ 1/4 on any grid containing the corners.
        let corners = [(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)];
        let signs = [1.0, 1.0, -1.0, -1.0];
        let alternating: f64 = corners
            .iter()
            .zip(signs.iter())
            .map(|(&(x, y), &s)| s * x * y)
            .sum();
        assert!((alternating - 1.0).abs() < 1e-15);
        let v = minimax_xy(3, DEFAULT_MINIMAX_GRID).unwrap();
        assert!(v >= 0.25 - 1e-6);
    }

    #[test]
    fn tiny_grid_is_rejected() {
        assert!(minimax_xy(1, 1).is_err());
    }
}
