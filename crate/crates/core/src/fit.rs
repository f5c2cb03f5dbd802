//! Least-squares fits used to extract rates and scaling exponents.

use crate::error::{Error, Result};

/// Straight-line fit y = intercept + slope·x.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

pub fn linear_regression(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() {
        return Err(Error::Fit(format!("{} abscissae but {} ordinates", x.len(), y.len())));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::Fit(format!("need at least two points, got {n}")));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all abscissae are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LineFit { slope, intercept, r_squared, n_points: n })
}

/// Exponential decay rate of a positive signal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    /// γ in v ≈ A e^{−γ t}.
    pub rate: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Fits ln v = ln A − γ t over the samples with t in [window.0, window.1].
pub fn fit_decay_rate(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    if times.len() != values.len() {
        return Err(Error::Fit(format!("{} times but {} values", times.len(), values.len())));
    }
    let mut t = Vec::new();
    let mut y = Vec::new();
    for (&ti, &vi) in times.iter().zip(values) {
        if ti < window.0 || ti > window.1 {
            continue;
        }
        if !(vi > 0.0) {
            return Err(Error::Fit(format!("non-positive sample {vi} at t = {ti}")));
        }
        t.push(ti);
        y.push(vi.ln());
    }
    let line = linear_regression(&t, &y)?;
    Ok(DecayFit { rate: -line.slope, amplitude: line.intercept.exp(), r_squared: line.r_squared, n_points: line.n_points })
}

/// Slope of ln y against ln x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return Err(Error::Fit("log-log fit needs strictly positive data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_regression(&lx, &ly)
}
