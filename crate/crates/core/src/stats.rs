//! Small statistics helpers shared by scoring and reporting.

use crate::{Error, Result};

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Statistics(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::Statistics(format!(
            "need at least 3 pairs, got {}",
            x.len()
        )));
    }
    pearson_unchecked(x, y).ok_or_else(|| Error::Statistics("zero variance".into()))
}

/// Pearson correlation, `None` when either input has zero variance.
pub(crate) fn pearson_unchecked(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        0.0
    } else {
        x.iter().sum::<f64>() / x.len() as f64
    }
}

/// Round half away from zero to 3 decimals, tolerant of binary
/// representation error (0.2235 rounds to 0.224).
pub fn round3(x: f64) -> f64 {
    let scaled = x * 1000.0;
    let bumped = scaled + scaled.signum() * 1e-7;
    bumped.round() / 1000.0
}
