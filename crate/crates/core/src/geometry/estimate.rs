//! Box-counting fits over the symbolic cover.

use serde::Serialize;

use crate::carpet::CarpetSystem;
use crate::error::{Error, Result};
use crate::geometry::cover::count_squares;

/// Ordinary least squares line through `(x, y)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (zero for two points).
    pub slope_stderr: f64,
}

pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::WrongShape(format!("{} x values and {} y values", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(Error::EmptyInput("need at least two points to fit a line"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::WrongShape("all x values are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if xs.len() > 2 {
        let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LinearFit { slope, intercept, slope_stderr })
}

/// Slope of `log N` against `log(1/scale)` for `(scale, count)` pairs.
pub fn log_log_slope(table: &[(f64, u64)]) -> Result<LinearFit> {
    let xs: Vec<f64> = table.iter().map(|(s, _)| -s.ln()).collect();
    let ys: Vec<f64> = table.iter().map(|(_, n)| (*n as f64).ln()).collect();
    least_squares(&xs, &ys)
}

/// Empirical box dimension with an uncertainty band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxDimEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub fit: LinearFit,
    /// `(scale, number of approximate squares)`
    pub counts: Vec<(f64, u64)>,
}

/// Scales `2^(-n/2)` for `n = 6..=24`, i.e. from `1/8` down to `1/4096`.
pub fn default_scales() -> Vec<f64> {
    (6..=24).map(|n| 2f64.powf(-(n as f64) / 2.0)).collect()
}

/// Fit the growth of the number of approximate squares over `scales`.
///
/// Counts are step functions of the scale, so a dense sweep matters more than a
/// long one. The band covers the slopes of the two half-range fits and two
/// standard errors of the full fit.
pub fn box_dim_estimate(system: &CarpetSystem, scales: &[f64]) -> Result<BoxDimEstimate> {
    let mut counts = Vec::new();
    for &scale in scales {
        counts.push((scale, count_squares(system, scale)?));
    }
    if counts.len() < 4 {
        return Err(Error::EmptyInput("need at least four scales for a box-dimension estimate"));
    }
    let fit = log_log_slope(&counts)?;
    let half = counts.len() / 2;
    let early = log_log_slope(&counts[..=half])?.slope;
    let late = log_log_slope(&counts[half..])?.slope;
    let lower = early.min(late).min(fit.slope - 2.0 * fit.slope_stderr);
    let upper = early.max(late).max(fit.slope + 2.0 * fit.slope_stderr);
    Ok(BoxDimEstimate { value: fit.slope, lower, upper, fit, counts })
}
