use std::f64::consts::PI;

use crate::audio::SampleBuffer;
use crate::{Error, Result};

/// Parameters of the auditory front end.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditoryConfig {
    pub bands: usize,
    pub low_hz: f64,
    pub high_hz: f64,
    pub envelope_rate: f64,
    pub envelope_cutoff_hz: f64,
    pub floor_db: f64,
    /// Reference-envelope level a frame must exceed to count (dB re full scale).
    pub audibility_db: f64,
    pub min_frames: usize,
    /// Largest lag searched when aligning processed to reference, seconds.
    pub max_lag_s: f64,
    /// Level both signals are normalized to for the quality score, dBFS RMS.
    pub quality_level_dbfs: f64,
    /// dB of mean band-level error that drives the spectral term to zero.
    pub spectral_scale_db: f64,
}

impl Default for AuditoryConfig {
    fn default() -> Self {
        Self {
            bands: 32,
            low_hz: 80.0,
            high_hz: 8000.0,
            envelope_rate: 256.0,
            envelope_cutoff_hz: 32.0,
            floor_db: -80.0,
            audibility_db: -60.0,
            min_frames: 50,
            max_lag_s: 0.25,
            quality_level_dbfs: -26.0,
            spectral_scale_db: 30.0,
        }
    }
}

/// Equivalent rectangular bandwidth in Hz.
pub fn erb(f: f64) -> f64 {
    24.7 * (4.37 * f / 1000.0 + 1.0)
}

fn erb_number(f: f64) -> f64 {
    21.4 * (4.37 * f / 1000.0 + 1.0).log10()
}

fn erb_number_inv(e: f64) -> f64 {
    (10f64.powf(e / 21.4) - 1.0) * 1000.0 / 4.37
}

/// Band centers: midpoints of equal ERB-number segments spanning
/// `[low_hz, high_hz]`, so every center lies strictly inside the range.
pub fn center_frequencies(config: &AuditoryConfig) -> Vec<f64> {
    let (lo, hi) = (erb_number(config.low_hz), erb_number(config.high_hz));
    let step = (hi - lo) / config.bands as f64;
    (0..config.bands)
        .map(|k| erb_number_inv(lo + (k as f64 + 0.5) * step))
        .collect()
}

/// Decay parameter `b` (Hz) of a 4th-order gammatone whose −3 dB bandwidth is
/// 1.019·ERB(fc). For `|H| = (1 + ((f−fc)/b)²)^−2` the −3 dB full width is
/// `2b·sqrt(2^{1/4} − 1)`.
pub fn gammatone_bandwidth(fc: f64) -> f64 {
    1.019 * erb(fc) / (2.0 * (2f64.powf(0.25) - 1.0).sqrt())
}

fn gammatone(x: &[f64], fc: f64, rate: f64) -> Vec<f64> {
    let w = 2.0 * PI * fc / rate;
    let p = (-2.0 * PI * gammatone_bandwidth(fc) / rate).exp();
    let g = 1.0 - p;
    let (sw, cw) = w.sin_cos();
    let mut state = [(0.0f64, 0.0f64); 4];
    let (mut c, mut s) = (1.0, 0.0);
    let mut out = Vec::with_capacity(x.len());
    for (n, &v) in x.iter().enumerate() {
        // The carrier advances by complex rotation, resynchronized now and
        // then to keep rounding from accumulating.
        if n % 1024 == 0 {
            (s, c) = (w * n as f64).sin_cos();
        }
        // Shift the band down to DC, low-pass with four one-pole stages,
        // shift back up.
        let mut re = v * c;
        let mut im = -v * s;
        for st in state.iter_mut() {
            st.0 = g * re + p * st.0;
            st.1 = g * im + p * st.1;
            re = st.0;
            im = st.1;
        }
        out.push(2.0 * (re * c - im * s));
        (c, s) = (c * cw - s * sw, s * cw + c * sw);
    }
    out
}

/// Splits a mono signal into gammatone bands.
pub fn gammatone_bands(signal: &SampleBuffer, config: &AuditoryConfig) -> Result<Vec<Vec<f64>>> {
    signal.expect_channels(1, "gammatone_bands")?;
    if signal.rate() < 16_000 {
        return Err(Error::arg(format!(
            "filterbank needs at least 16 kHz, got {} Hz",
            signal.rate()
        )));
    }
    Ok(bands_of(signal.channel(0), signal.rate() as f64, config))
}

pub(crate) fn bands_of(x: &[f64], rate: f64, config: &AuditoryConfig) -> Vec<Vec<f64>> {
    center_frequencies(config)
        .into_iter()
        .map(|fc| gammatone(x, fc, rate))
        .collect()
}

/// RBJ second-order Butterworth low-pass.
fn lowpass2(x: &[f64], cutoff: f64, rate: f64) -> Vec<f64> {
    let w0 = 2.0 * PI * cutoff / rate;
    let (s, c) = w0.sin_cos();
    let alpha = s / 2f64.sqrt();
    let a0 = 1.0 + alpha;
    let b0 = (1.0 - c) / 2.0 / a0;
    let b1 = (1.0 - c) / a0;
    let a1 = -2.0 * c / a0;
    let a2 = (1.0 - alpha) / a0;
    let (mut x1, mut x2, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0);
    x.iter()
        .map(|&v| {
            let y = b0 * v + b1 * x1 + b0 * x2 - a1 * y1 - a2 * y2;
            x2 = x1;
            x1 = v;
            y2 = y1;
            y1 = y;
            y
        })
        .collect()
}

/// dB envelope of one band at the envelope rate: half-wave rectification,
/// low-pass, resampling by linear interpolation, log with a floor.
pub fn envelope(band: &[f64], rate: f64, config: &AuditoryConfig) -> Vec<f64> {
    let rect: Vec<f64> = band.iter().map(|v| v.max(0.0)).collect();
    let smooth = lowpass2(&rect, config.envelope_cutoff_hz, rate);
    if smooth.is_empty() {
        return Vec::new();
    }
    let step = rate / config.envelope_rate;
    let frames = ((smooth.len() - 1) as f64 / step).floor() as usize + 1;
    let floor = 10f64.powf(config.floor_db / 20.0);
    (0..frames)
        .map(|k| {
            let pos = k as f64 * step;
            let i = pos.floor() as usize;
            let t = pos - i as f64;
            let v = if i + 1 < smooth.len() {
                smooth[i] * (1.0 - t) + smooth[i + 1] * t
            } else {
                smooth[i]
            };
            20.0 * v.max(floor).log10()
        })
        .collect()
}
