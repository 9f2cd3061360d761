use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{channel_count, sh_eval_dir, AmbiSignal, Direction};
use crate::audio::{convolve_many, SampleBuffer};
use crate::hrtf::{nearest_filters, HrtfSet};
use crate::{Error, Result};

/// Deterministic spherical Fibonacci point set of `n` directions.
pub fn fibonacci_grid(n: usize) -> Vec<Direction> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let az = (golden * i as f64).rem_euclid(2.0 * PI);
            Direction::new(if az > PI { az - 2.0 * PI } else { az }, z.asin())
        })
        .collect()
}

/// Moore–Penrose pseudo-inverse of the `L×(N+1)^2` matrix whose rows are the
/// harmonics at the grid directions. Column `i` of the result maps a field to
/// the feed of virtual loudspeaker `i`.
pub fn decode_matrix(order: usize, grid: &[Direction]) -> Result<DMatrix<f64>> {
    let k = channel_count(order);
    if grid.len() < k {
        return Err(Error::arg(format!(
            "grid of {} directions cannot decode order {order} ({k} channels)",
            grid.len()
        )));
    }
    let mut y = DMatrix::zeros(grid.len(), k);
    for (i, &d) in grid.iter().enumerate() {
        for (c, v) in sh_eval_dir(order, d)?.into_iter().enumerate() {
            y[(i, c)] = v;
        }
    }
    y.pseudo_inverse(1e-10)
        .map_err(|e| Error::arg(format!("pseudo-inverse failed: {e}")))
}

/// Virtual-loudspeaker binaural decoder. Because decoding is linear, the
/// loudspeaker feeds and their HRTFs are folded into one filter pair per
/// Ambisonic channel.
#[derive(Debug, Clone)]
pub struct BinauralDecoder {
    order: usize,
    rate: u32,
    taps: usize,
    /// `[channel] -> (left, right)`.
    filters: Vec<(Vec<f64>, Vec<f64>)>,
}

impl BinauralDecoder {
    pub fn new(order: usize, hrtfs: &HrtfSet, grid: &[Direction]) -> Result<Self> {
        let d = decode_matrix(order, grid)?;
        let taps = hrtfs.taps();
        let pairs = grid
            .iter()
            .map(|&dir| nearest_filters(hrtfs, dir))
            .collect::<Result<Vec<_>>>()?;
        let filters = (0..channel_count(order))
            .map(|c| {
                let mut left = vec![0.0; taps];
                let mut right = vec![0.0; taps];
                for (i, (hl, hr)) in pairs.iter().enumerate() {
                    let g = d[(c, i)];
                    for t in 0..taps {
                        left[t] += g * hl[t];
                        right[t] += g * hr[t];
                    }
                }
                (left, right)
            })
            .collect();
        Ok(Self {
            order,
            rate: hrtfs.rate(),
            taps,
            filters,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn taps(&self) -> usize {
        self.taps
    }

    /// Decodes a field of order ≤ the decoder order; missing channels are
    /// treated as zero. Output has `frames + taps - 1` samples.
    pub fn decode(&self, signal: &AmbiSignal) -> Result<SampleBuffer> {
        if signal.order() > self.order {
            return Err(Error::arg(format!(
                "decoder of order {} cannot decode order {}",
                self.order,
                signal.order()
            )));
        }
        if signal.rate() != self.rate {
            return Err(Error::RateMismatch {
                expected: self.rate,
                found: signal.rate(),
            });
        }
        let len = signal.frames() + self.taps - 1;
        let mut left = vec![0.0; len];
        let mut right = vec![0.0; len];
        for (ch, (fl, fr)) in signal.channels().iter().zip(&self.filters) {
            if ch.iter().all(|&v| v == 0.0) {
                continue;
            }
            let ys = convolve_many(ch, &[fl, fr])?;
            for (acc, y) in [&mut left, &mut right].into_iter().zip(ys) {
                acc.iter_mut().zip(y).for_each(|(a, v)| *a += v);
            }
        }
        SampleBuffer::new(self.rate, vec![left, right])
    }
}

/// Decodes a field to two ear signals through virtual loudspeakers at the grid
/// directions, using a decoder of the field's own order.
pub fn binaural_decode(
    signal: &AmbiSignal,
    hrtfs: &HrtfSet,
    grid: &[Direction],
) -> Result<SampleBuffer> {
    BinauralDecoder::new(signal.order(), hrtfs, grid)?.decode(signal)
}
