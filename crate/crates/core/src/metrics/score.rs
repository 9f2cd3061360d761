use serde::{Deserialize, Serialize};

use super::align::{align, apply_alignment};
use super::filterbank::{bands_of, center_frequencies, envelope, AuditoryConfig};
use crate::audio::{db_to_gain, rms_slice, SampleBuffer};
use crate::hearing_aid::EarLevels;
use crate::stats::{mean, pearson_unchecked};
use crate::{Error, Result};

/// Intelligibility-like score, quality-like score and their mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricScore {
    pub haspi_like: f64,
    pub hasqi_like: f64,
    pub combined: f64,
}

pub fn combined_score(haspi_like: f64, hasqi_like: f64) -> Result<MetricScore> {
    for (name, v) in [("haspi_like", haspi_like), ("hasqi_like", hasqi_like)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::arg(format!("{name} = {v} outside [0, 1]")));
        }
    }
    Ok(MetricScore {
        haspi_like,
        hasqi_like,
        combined: (haspi_like + hasqi_like) / 2.0,
    })
}

/// Listener score from two ear scores.
pub fn better_ear(left: f64, right: f64) -> f64 {
    left.max(right)
}

/// Reference and processed signals after alignment, ready for analysis.
struct Aligned {
    reference: Vec<f64>,
    proc: Vec<f64>,
}

fn prepare(
    reference: &SampleBuffer,
    proc: &SampleBuffer,
    config: &AuditoryConfig,
) -> Result<Option<Aligned>> {
    reference.expect_channels(1, "reference")?;
    proc.expect_channels(1, "processed signal")?;
    if reference.rate() != proc.rate() {
        return Err(Error::RateMismatch {
            expected: reference.rate(),
            found: proc.rate(),
        });
    }
    if reference.rate() < 16_000 {
        return Err(Error::arg(format!(
            "scoring needs at least 16 kHz, got {}",
            reference.rate()
        )));
    }
    let (r, p) = (reference.channel(0), proc.channel(0));
    if r.iter().all(|&v| v == 0.0) || p.iter().all(|&v| v == 0.0) {
        return Ok(None);
    }
    let max_lag =
        ((config.max_lag_s * reference.rate() as f64) as usize).min(r.len().min(p.len()) - 1);
    let a = align(r, p, max_lag)?;
    let (reference, proc) = apply_alignment(r, p, a.lag)?;
    Ok(Some(Aligned { reference, proc }))
}

/// Envelope analysis of the reference (normal hearing) and the processed
/// signal (impaired branch: each band attenuated by the hearing loss at its
/// center frequency).
struct BandAnalysis {
    ref_env: Vec<Vec<f64>>,
    proc_env: Vec<Vec<f64>>,
    ref_bands: Vec<Vec<f64>>,
    proc_bands: Vec<Vec<f64>>,
}

fn analyse(
    reference: &[f64],
    proc: &[f64],
    rate: f64,
    loss: &EarLevels,
    config: &AuditoryConfig,
) -> BandAnalysis {
    let ref_bands = bands_of(reference, rate, config);
    let mut proc_bands = bands_of(proc, rate, config);
    for (band, fc) in proc_bands.iter_mut().zip(center_frequencies(config)) {
        let g = db_to_gain(-loss.interpolate(fc));
        band.iter_mut().for_each(|v| *v *= g);
    }
    let ref_env = ref_bands
        .iter()
        .map(|b| envelope(b, rate, config))
        .collect();
    let proc_env = proc_bands
        .iter()
        .map(|b| envelope(b, rate, config))
        .collect();
    BandAnalysis {
        ref_env,
        proc_env,
        ref_bands,
        proc_bands,
    }
}

/// Mean over qualifying bands of the clipped-at-zero envelope correlation.
fn envelope_correlation(a: &BandAnalysis, config: &AuditoryConfig) -> f64 {
    let mut per_band = Vec::new();
    for (re, pe) in a.ref_env.iter().zip(&a.proc_env) {
        let (x, y): (Vec<f64>, Vec<f64>) = re
            .iter()
            .zip(pe)
            .filter(|(r, _)| **r > config.audibility_db)
            .map(|(r, p)| (*r, *p))
            .unzip();
        if x.len() < config.min_frames {
            continue;
        }
        per_band.push(pearson_unchecked(&x, &y).unwrap_or(0.0).max(0.0));
    }
    if per_band.is_empty() {
        0.0
    } else {
        mean(&per_band).clamp(0.0, 1.0)
    }
}

/// Envelope-correlation intelligibility surrogate in [0, 1].
pub fn intelligibility_score(
    reference: &SampleBuffer,
    proc: &SampleBuffer,
    loss: &EarLevels,
    config: &AuditoryConfig,
) -> Result<f64> {
    let Some(al) = prepare(reference, proc, config)? else {
        return Ok(0.0);
    };
    let rate = reference.rate() as f64;
    let a = analyse(&al.reference, &al.proc, rate, loss, config);
    Ok(envelope_correlation(&a, config))
}

/// Components of the quality surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityBreakdown {
    pub correlation: f64,
    pub spectral: f64,
    pub score: f64,
}

fn band_level_db(x: &[f64]) -> f64 {
    10.0 * (x.iter().map(|v| v * v).sum::<f64>() / x.len().max(1) as f64)
        .max(1e-12)
        .log10()
}

pub fn quality_breakdown(
    reference: &SampleBuffer,
    proc: &SampleBuffer,
    loss: &EarLevels,
    config: &AuditoryConfig,
) -> Result<QualityBreakdown> {
    let Some(al) = prepare(reference, proc, config)? else {
        return Ok(QualityBreakdown {
            correlation: 0.0,
            spectral: 0.0,
            score: 0.0,
        });
    };
    let target = db_to_gain(config.quality_level_dbfs);
    let normalize = |x: &[f64]| {
        let g = target / rms_slice(x);
        x.iter().map(|v| v * g).collect::<Vec<f64>>()
    };
    let (r, p) = (normalize(&al.reference), normalize(&al.proc));
    let a = analyse(&r, &p, reference.rate() as f64, loss, config);
    let correlation = envelope_correlation(&a, config);
    let diffs: Vec<f64> = a
        .ref_bands
        .iter()
        .zip(&a.proc_bands)
        .map(|(rb, pb)| (band_level_db(pb) - band_level_db(rb)).abs())
        .collect();
    let spectral = 1.0 - (mean(&diffs) / config.spectral_scale_db).min(1.0);
    Ok(QualityBreakdown {
        correlation,
        spectral,
        score: (0.5 * correlation + 0.5 * spectral).clamp(0.0, 1.0),
    })
}

/// Quality surrogate: half envelope correlation, half long-term spectral
/// fidelity, after normalizing both signals to a common RMS level.
pub fn quality_score(
    reference: &SampleBuffer,
    proc: &SampleBuffer,
    loss: &EarLevels,
    config: &AuditoryConfig,
) -> Result<f64> {
    quality_breakdown(reference, proc, loss, config).map(|q| q.score)
}
