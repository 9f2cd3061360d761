//! Signal containers, WAV I/O, convolution and level measurement.

mod convolve;
mod wav;

pub use convolve::{convolve, convolve_direct, convolve_many, convolve_slices};
pub use wav::{read_wav, write_wav, write_wav_pcm16};

use std::ops::Range;

use crate::{Error, Result};

/// Multichannel sampled audio. Channels are stored planar and always have
/// equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBuffer {
    rate: u32,
    channels: Vec<Vec<f64>>,
}

impl SampleBuffer {
    pub fn new(rate: u32, channels: Vec<Vec<f64>>) -> Result<Self> {
        if rate == 0 {
            return Err(Error::arg("sample rate must be positive"));
        }
        if channels.is_empty() {
            return Err(Error::arg("buffer needs at least one channel"));
        }
        let frames = channels[0].len();
        if channels.iter().any(|c| c.len() != frames) {
            return Err(Error::arg("all channels must have equal frame count"));
        }
        Ok(Self { rate, channels })
    }

    pub fn mono(rate: u32, data: Vec<f64>) -> Result<Self> {
        Self::new(rate, vec![data])
    }

    pub fn silence(rate: u32, channels: usize, frames: usize) -> Result<Self> {
        Self::new(rate, vec![vec![0.0; frames]; channels])
    }

    pub fn rate(&self) -> u32 {
        self.rate
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn frames(&self) -> usize {
        self.channels[0].len()
    }

    /// `(channels, frames, rate)`.
    pub fn shape(&self) -> (usize, usize, u32) {
        (self.num_channels(), self.frames(), self.rate)
    }

    pub fn channel(&self, idx: usize) -> &[f64] {
        &self.channels[idx]
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    pub fn into_channels(self) -> Vec<Vec<f64>> {
        self.channels
    }

    pub fn duration_s(&self) -> f64 {
        self.frames() as f64 / self.rate as f64
    }

    pub fn expect_channels(&self, n: usize, what: &str) -> Result<()> {
        if self.num_channels() != n {
            return Err(Error::arg(format!(
                "{what}: expected {n} channel(s), got {}",
                self.num_channels()
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, gain: f64) -> Self {
        Self {
            rate: self.rate,
            channels: self
                .channels
                .iter()
                .map(|c| c.iter().map(|x| x * gain).collect())
                .collect(),
        }
    }
}

/// Root-mean-square level of each channel over `range`.
pub fn rms(signal: &SampleBuffer, range: Range<usize>) -> Result<Vec<f64>> {
    if range.is_empty() {
        return Err(Error::arg("rms over an empty frame range"));
    }
    if range.end > signal.frames() {
        return Err(Error::arg(format!(
            "rms range {}..{} exceeds {} frames",
            range.start,
            range.end,
            signal.frames()
        )));
    }
    Ok(signal
        .channels()
        .iter()
        .map(|c| rms_slice(&c[range.clone()]))
        .collect())
}

/// RMS of a slice; zero for an empty slice.
pub fn rms_slice(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

pub fn db_to_gain(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

pub fn gain_to_db(gain: f64) -> f64 {
    20.0 * gain.log10()
}
