//! The fixed amplification stage: audiograms, NAL-R insertion gains, their
//! linear-phase FIR realization, and per-ear amplification with hard clipping.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::audio::{convolve_slices, SampleBuffer};
use crate::{Error, Result};

/// Audiometric frequencies in Hz.
pub const AUDIOGRAM_FREQS: [f64; 6] = [250.0, 500.0, 1000.0, 2000.0, 4000.0, 6000.0];

/// NAL-R frequency-specific offsets k_f in dB, aligned with [`AUDIOGRAM_FREQS`].
pub const NALR_OFFSETS: [f64; 6] = [-17.0, -8.0, 1.0, -1.0, -2.0, -2.0];

pub const DEFAULT_TAPS: usize = 127;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Hearing levels (dB HL) of one ear at [`AUDIOGRAM_FREQS`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarLevels(pub [f64; 6]);

impl EarLevels {
    pub fn flat(level: f64) -> Self {
        Self([level; 6])
    }

    pub fn at(&self, freq_hz: u32) -> Option<f64> {
        AUDIOGRAM_FREQS
            .iter()
            .position(|&f| f as u32 == freq_hz)
            .map(|i| self.0[i])
    }

    /// Hearing level at an arbitrary frequency: linear in (log f, dB) between
    /// audiometric points, held constant outside them.
    pub fn interpolate(&self, freq: f64) -> f64 {
        interp_log_db(&AUDIOGRAM_FREQS, &self.0, freq)
    }

    fn validate(&self, ear: &str, problems: &mut Vec<String>) {
        for (f, &v) in AUDIOGRAM_FREQS.iter().zip(&self.0) {
            if !(0.0..=120.0).contains(&v) {
                problems.push(format!("{ear}.{f}: {v} dB HL outside [0, 120]"));
            }
        }
    }
}

impl Serialize for EarLevels {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(6))?;
        for (f, v) in AUDIOGRAM_FREQS.iter().zip(&self.0) {
            m.serialize_entry(&(*f as u32).to_string(), v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for EarLevels {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, f64>::deserialize(d)?;
        let mut levels = [0.0; 6];
        for (i, f) in AUDIOGRAM_FREQS.iter().enumerate() {
            let key = (*f as u32).to_string();
            levels[i] = *map
                .get(&key)
                .ok_or_else(|| serde::de::Error::custom(format!("missing frequency {key}")))?;
        }
        if let Some(extra) = map.keys().find(|k| {
            !AUDIOGRAM_FREQS
                .iter()
                .any(|f| (*f as u32).to_string() == **k)
        }) {
            return Err(serde::de::Error::custom(format!(
                "unexpected frequency {extra}"
            )));
        }
        Ok(EarLevels(levels))
    }
}

/// Per-ear hearing thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Audiogram {
    pub left: EarLevels,
    pub right: EarLevels,
}

impl Audiogram {
    pub fn new(left: EarLevels, right: EarLevels) -> Result<Self> {
        let a = Self { left, right };
        a.validate()?;
        Ok(a)
    }

    pub fn flat(level: f64) -> Self {
        Self {
            left: EarLevels::flat(level),
            right: EarLevels::flat(level),
        }
    }

    pub fn normal() -> Self {
        Self::flat(0.0)
    }

    pub fn ear(&self, side: Side) -> &EarLevels {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        self.left.validate("left", &mut problems);
        self.right.validate("right", &mut problems);
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e).at_path(path))?;
        let a: Audiogram = serde_json::from_str(&text).map_err(|e| Error::Json(e).at_path(path))?;
        a.validate().map_err(|e| e.at_path(path))?;
        Ok(a)
    }
}

/// Insertion gain (dB) at each audiometric frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainCurve {
    pub gains_db: [f64; 6],
}

impl GainCurve {
    pub fn flat(db: f64) -> Self {
        Self { gains_db: [db; 6] }
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        AUDIOGRAM_FREQS
            .iter()
            .copied()
            .zip(self.gains_db.iter().copied())
    }

    pub fn interpolate(&self, freq: f64) -> f64 {
        interp_log_db(&AUDIOGRAM_FREQS, &self.gains_db, freq)
    }
}

fn interp_log_db(freqs: &[f64; 6], values: &[f64; 6], f: f64) -> f64 {
    if f <= freqs[0] {
        return values[0];
    }
    if f >= freqs[5] {
        return values[5];
    }
    let i = freqs.iter().rposition(|&x| x <= f).unwrap();
    let t = (f.ln() - freqs[i].ln()) / (freqs[i + 1].ln() - freqs[i].ln());
    values[i] + t * (values[i + 1] - values[i])
}

/// NAL-R insertion gains from one ear's thresholds:
/// X = 0.05·(H500 + H1000 + H2000), IG(f) = max(0, X + 0.31·H_f + k_f).
pub fn nalr_gains_for(levels: &EarLevels) -> GainCurve {
    let h = &levels.0;
    let x = 0.05 * (h[1] + h[2] + h[3]);
    let mut gains_db = [0.0; 6];
    for i in 0..6 {
        gains_db[i] = (x + 0.31 * h[i] + NALR_OFFSETS[i]).max(0.0);
    }
    GainCurve { gains_db }
}

pub fn nalr_gains(audiogram: &Audiogram, ear: Side) -> GainCurve {
    nalr_gains_for(audiogram.ear(ear))
}

/// Magnitude response of an FIR at `freq` Hz.
pub fn fir_magnitude(h: &[f64], freq: f64, rate: u32) -> f64 {
    let w = 2.0 * PI * freq / rate as f64;
    let (re, im) = h.iter().enumerate().fold((0.0, 0.0), |(a, b), (n, &v)| {
        let (s, c) = (w * n as f64).sin_cos();
        (a + v * c, b - v * s)
    });
    (re * re + im * im).sqrt()
}

fn realize(control_db: &[f64; 6], taps: usize, rate: u32) -> Vec<f64> {
    let half = (taps - 1) / 2;
    let grid = (8 * taps).next_power_of_two();
    let target: Vec<f64> = (0..=grid / 2)
        .map(|k| {
            let f = k as f64 * rate as f64 / grid as f64;
            10f64.powf(interp_log_db(&AUDIOGRAM_FREQS, control_db, f) / 20.0)
        })
        .collect();
    // Zero-phase impulse response of the real, even target spectrum.
    (0..taps)
        .map(|i| {
            let n = i as f64 - half as f64;
            let mut acc = target[0];
            for (k, &m) in target.iter().enumerate().skip(1) {
                let weight = if k == grid / 2 { 1.0 } else { 2.0 };
                acc += weight * m * (2.0 * PI * k as f64 * n / grid as f64).cos();
            }
            let window = 0.5 * (1.0 + (PI * n / (half as f64 + 1.0)).cos());
            acc / grid as f64 * window
        })
        .collect()
}

/// Linear-phase FIR (delay `(taps-1)/2`) realizing a gain curve by frequency
/// sampling. Control points are refined until the measured response meets
/// the curve at every audiometric frequency.
pub fn design_fir(curve: &GainCurve, taps: usize, rate: u32) -> Result<Vec<f64>> {
    if taps.is_multiple_of(2) || taps < 63 {
        return Err(Error::arg(format!(
            "FIR length must be odd and at least 63, got {taps}"
        )));
    }
    if AUDIOGRAM_FREQS[5] >= rate as f64 / 2.0 {
        return Err(Error::arg(format!(
            "rate {rate} Hz too low for the 6 kHz control point"
        )));
    }
    let mut control = curve.gains_db;
    let mut h = realize(&control, taps, rate);
    for _ in 0..50 {
        let mut worst: f64 = 0.0;
        for (i, (f, want)) in curve.points().enumerate() {
            let err = want - 20.0 * fir_magnitude(&h, f, rate).log10();
            worst = worst.max(err.abs());
            control[i] += err;
        }
        if worst < 0.01 {
            break;
        }
        h = realize(&control, taps, rate);
    }
    Ok(h)
}

/// Result of amplifying a stereo signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplified {
    pub signal: SampleBuffer,
    /// Samples hard-clamped to [−1, 1], both ears together.
    pub clipped: usize,
}

/// Applies each ear's NAL-R filter. Output keeps the input frame count and
/// carries the `(taps-1)/2` filter delay in both ears.
pub fn amplify(ears: &SampleBuffer, audiogram: &Audiogram, taps: usize) -> Result<Amplified> {
    ears.expect_channels(2, "amplify")?;
    let mut clipped = 0;
    let mut out = Vec::with_capacity(2);
    for (ch, side) in ears.channels().iter().zip([Side::Left, Side::Right]) {
        let fir = design_fir(&nalr_gains(audiogram, side), taps, ears.rate())?;
        let mut y = convolve_slices(ch, &fir)?;
        y.truncate(ch.len());
        for v in y.iter_mut() {
            if v.abs() > 1.0 {
                clipped += 1;
                *v = v.clamp(-1.0, 1.0);
            }
        }
        out.push(y);
    }
    Ok(Amplified {
        signal: SampleBuffer::new(ears.rate(), out)?,
        clipped,
    })
}
