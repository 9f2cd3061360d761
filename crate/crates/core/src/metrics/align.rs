use crate::audio::convolve_slices;
use crate::{Error, Result};

/// Normalized cross-correlation below which an alignment is flagged.
pub const LOW_CONFIDENCE: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    /// Samples by which `proc` lags `ref`.
    pub lag: i64,
    /// Cross-correlation at `lag`, normalized by both signal norms.
    pub correlation: f64,
    pub low_confidence: bool,
}

/// Lag in `[-max_lag, max_lag]` maximizing the cross-correlation of `proc`
/// against `reference`.
pub fn align(reference: &[f64], proc: &[f64], max_lag: usize) -> Result<Alignment> {
    if max_lag >= reference.len().min(proc.len()) {
        return Err(Error::arg(format!(
            "max lag {max_lag} must be below the shorter length {}",
            reference.len().min(proc.len())
        )));
    }
    let nr = reference.iter().map(|v| v * v).sum::<f64>().sqrt();
    let np = proc.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nr == 0.0 || np == 0.0 {
        return Err(Error::Alignment("cannot align an all-zero signal".into()));
    }
    // xcorr[l] = sum_n ref[n] proc[n + l] = (reversed ref * proc)[len_ref - 1 + l]
    let rev: Vec<f64> = reference.iter().rev().copied().collect();
    let full = convolve_slices(&rev, proc)?;
    let zero = reference.len() as i64 - 1;
    let mut best = (0i64, f64::NEG_INFINITY);
    for lag in -(max_lag as i64)..=max_lag as i64 {
        let v = full[(zero + lag) as usize];
        if v > best.1 {
            best = (lag, v);
        }
    }
    let correlation = best.1 / (nr * np);
    Ok(Alignment {
        lag: best.0,
        correlation,
        low_confidence: correlation.abs() < LOW_CONFIDENCE,
    })
}

/// Shifts `proc` by the lag and trims both signals to their common span.
/// Fails when the aligned lengths differ by more than 10 %.
pub fn apply_alignment(reference: &[f64], proc: &[f64], lag: i64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (r, p) = if lag >= 0 {
        let l = (lag as usize).min(proc.len());
        (reference, &proc[l..])
    } else {
        let l = (lag.unsigned_abs() as usize).min(reference.len());
        (&reference[l..], proc)
    };
    let longer = r.len().max(p.len());
    if r.len().abs_diff(p.len()) as f64 > 0.1 * longer as f64 {
        return Err(Error::arg(format!(
            "aligned lengths {} and {} differ by more than 10%",
            r.len(),
            p.len()
        )));
    }
    let n = r.len().min(p.len());
    Ok((r[..n].to_vec(), p[..n].to_vec()))
}
