//! Real spherical-harmonic (ACN/SN3D) sound-field representation: plane-wave
//! encoding, yaw rotation, order truncation and binaural decoding.

mod decode;
mod rotation;
mod sh;

pub use decode::{binaural_decode, decode_matrix, fibonacci_grid, BinauralDecoder};
pub use rotation::{apply_rotation, YawRotation, MAX_ROTATION_ORDER};
pub use sh::{acn, channel_count, degree_of, sh_eval, sh_eval_dir, Direction, ShBasis};

use crate::audio::SampleBuffer;
use crate::{Error, Result};

/// An order-N Ambisonic signal: `(N+1)^2` channels in ACN order, SN3D
/// normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiSignal {
    order: usize,
    buffer: SampleBuffer,
}

impl AmbiSignal {
    pub fn new(order: usize, buffer: SampleBuffer) -> Result<Self> {
        if buffer.num_channels() != channel_count(order) {
            return Err(Error::arg(format!(
                "order {order} needs {} channels, got {}",
                channel_count(order),
                buffer.num_channels()
            )));
        }
        Ok(Self { order, buffer })
    }

    pub fn from_channels(order: usize, rate: u32, channels: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(order, SampleBuffer::new(rate, channels)?)
    }

    pub fn silence(order: usize, rate: u32, frames: usize) -> Result<Self> {
        Self::new(
            order,
            SampleBuffer::silence(rate, channel_count(order), frames)?,
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rate(&self) -> u32 {
        self.buffer.rate()
    }

    pub fn frames(&self) -> usize {
        self.buffer.frames()
    }

    pub fn channel(&self, idx: usize) -> &[f64] {
        self.buffer.channel(idx)
    }

    /// The omnidirectional (ACN 0) channel.
    pub fn w(&self) -> &[f64] {
        self.buffer.channel(0)
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        self.buffer.channels()
    }

    pub fn buffer(&self) -> &SampleBuffer {
        &self.buffer
    }

    pub fn into_buffer(self) -> SampleBuffer {
        self.buffer
    }

    pub fn scaled(&self, gain: f64) -> Self {
        Self {
            order: self.order,
            buffer: self.buffer.scaled(gain),
        }
    }

    /// Sample-wise sum; both fields must share order and rate. The result has
    /// the length of the longer input.
    pub fn add(&self, other: &AmbiSignal) -> Result<Self> {
        if self.order != other.order || self.rate() != other.rate() {
            return Err(Error::arg("cannot sum fields of different order or rate"));
        }
        let frames = self.frames().max(other.frames());
        let channels = self
            .channels()
            .iter()
            .zip(other.channels())
            .map(|(a, b)| {
                (0..frames)
                    .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
                    .collect()
            })
            .collect();
        Self::from_channels(self.order, self.rate(), channels)
    }

    /// Copies the field into a `frames`-long window, zero-padding or cutting.
    pub fn fit_length(&self, frames: usize) -> Self {
        let channels = self
            .channels()
            .iter()
            .map(|c| {
                let mut v = c[..c.len().min(frames)].to_vec();
                v.resize(frames, 0.0);
                v
            })
            .collect();
        Self::from_channels(self.order, self.rate(), channels).expect("shape preserved")
    }

    /// The same field with every channel above degree `order` zeroed, keeping
    /// the original channel count.
    pub fn zero_above(&self, order: usize) -> Self {
        let keep = channel_count(order.min(self.order));
        let channels = self
            .channels()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i < keep {
                    c.clone()
                } else {
                    vec![0.0; c.len()]
                }
            })
            .collect();
        Self::from_channels(self.order, self.rate(), channels).expect("shape preserved")
    }

    /// Zero-pads the field up to a higher order.
    pub fn pad_to_order(&self, order: usize) -> Result<Self> {
        if order < self.order {
            return Err(Error::arg(format!(
                "cannot pad order {} down to {order}",
                self.order
            )));
        }
        let mut channels = self.channels().to_vec();
        channels.resize(channel_count(order), vec![0.0; self.frames()]);
        Self::from_channels(order, self.rate(), channels)
    }
}

/// Plane-wave encoding of a mono signal arriving from `(azimuth, elevation)`.
pub fn encode(
    mono: &SampleBuffer,
    azimuth: f64,
    elevation: f64,
    order: usize,
) -> Result<AmbiSignal> {
    mono.expect_channels(1, "encode")?;
    let coeffs = sh_eval(order, azimuth, elevation)?;
    let x = mono.channel(0);
    let channels = coeffs
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            if i == 0 {
                x.to_vec()
            } else {
                x.iter().map(|v| v * g).collect()
            }
        })
        .collect();
    AmbiSignal::from_channels(order, mono.rate(), channels)
}

/// Keeps the first `(new_order+1)^2` channels.
pub fn truncate(signal: &AmbiSignal, new_order: usize) -> Result<AmbiSignal> {
    if new_order > signal.order() {
        return Err(Error::arg(format!(
            "cannot truncate order {} to higher order {new_order}",
            signal.order()
        )));
    }
    let channels = signal.channels()[..channel_count(new_order)].to_vec();
    AmbiSignal::from_channels(new_order, signal.rate(), channels)
}
