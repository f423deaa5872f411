//! Iterates of a mean-type mapping `(x, y) -> (K(x, y), L(x, y))`.

use serde::Serialize;

use crate::complement::MeanPair;
use crate::error::{MeanError, Result};
use crate::num::rel_diff;
use crate::verify::ScanReport;

/// Tolerance for the invariant value along a trajectory.
pub const TRAJECTORY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationTrace {
    /// `iterates[0]` is the starting pair.
    pub iterates: Vec<(f64, f64)>,
    pub converged: bool,
    /// Midpoint of the final pair.
    pub limit: f64,
    pub iterations: usize,
    /// `|x_n - y_n| / max(x_n, y_n)` at the final pair; also an error bar
    /// on `limit`.
    pub final_gap: f64,
    /// Steps where the relative gap grew.
    pub gap_increases: Vec<usize>,
}

/// Relative gap `|x - y| / max(x, y)`.
pub fn gap(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        (x - y).abs() / x.max(y)
    }
}

impl IterationTrace {
    pub fn gaps(&self) -> Vec<f64> {
        self.iterates.iter().map(|&(x, y)| gap(x, y)).collect()
    }

    /// Empirical order of convergence `ln(g_{n+1}/g_n) / ln(g_n/g_{n-1})`
    /// from the last three gaps that are still above rounding level.
    pub fn order_estimate(&self) -> Option<f64> {
        let g: Vec<f64> = self.gaps().into_iter().filter(|&v| v > 1e-15).collect();
        if g.len() < 3 {
            return None;
        }
        let n = g.len();
        let num = (g[n - 1] / g[n - 2]).ln();
        let den = (g[n - 2] / g[n - 3]).ln();
        (den != 0.0).then(|| num / den)
    }
}

/// Applies the pair until the relative gap is at most `rel_stop` or
/// `max_iter` steps are done. Failure to converge is reported in the trace,
/// not as an error.
pub fn iterate_pair(
    pair: &MeanPair,
    x0: f64,
    y0: f64,
    rel_stop: f64,
    max_iter: usize,
) -> Result<IterationTrace> {
    if !(x0 > 0.0 && y0 > 0.0 && x0.is_finite() && y0.is_finite()) {
        return Err(MeanError::Parameter(format!(
            "starting point must be positive, got ({x0}, {y0})"
        )));
    }
    if !(rel_stop > 0.0 && rel_stop < 1.0) {
        return Err(MeanError::Parameter(format!(
            "stop tolerance must lie in (0, 1), got {rel_stop}"
        )));
    }
    if max_iter == 0 {
        return Err(MeanError::Parameter("max_iter must be at least 1".into()));
    }

    let mut iterates = vec![(x0, y0)];
    let mut gap_increases = Vec::new();
    let (mut x, mut y) = (x0, y0);
    let mut g = gap(x, y);
    let mut n = 0;
    while g > rel_stop && n < max_iter {
        let (k, l) = pair.apply(x, y);
        n += 1;
        let next = gap(k, l);
        if next > g {
            gap_increases.push(n);
        }
        (x, y, g) = (k, l, next);
        iterates.push((x, y));
        if !g.is_finite() {
            break;
        }
    }
    Ok(IterationTrace {
        iterates,
        converged: g <= rel_stop,
        limit: 0.5 * x + 0.5 * y,
        iterations: n,
        final_gap: g,
        gap_increases,
    })
}

/// Checks that the target mean is constant along the trajectory, relative
/// to its value at the starting pair.
pub fn invariant_value_along_trajectory(pair: &MeanPair, trace: &IterationTrace) -> ScanReport {
    let m = pair.target();
    let mut report = ScanReport::start("trajectory", TRAJECTORY_TOL);
    let Some(&(x0, y0)) = trace.iterates.first() else {
        return report.finish();
    };
    let m0 = m.eval(x0, y0);
    for &(x, y) in &trace.iterates {
        report.observe(rel_diff(m.eval(x, y), m0, m0), &[x, y]);
    }
    report.finish()
}
