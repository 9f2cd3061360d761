use nalgebra::DMatrix;

use super::{channel_count, AmbiSignal};
use crate::{Error, Result};

/// Highest order for which rotation matrices are built.
pub const MAX_ROTATION_ORDER: usize = 8;

/// Rotation of a field about the vertical axis. A plane wave at azimuth φ is
/// moved to φ + angle. Stored as one `(2l+1)×(2l+1)` block per degree.
#[derive(Debug, Clone, PartialEq)]
pub struct YawRotation {
    angle: f64,
    order: usize,
    /// Row-major blocks, local index `m + l`.
    blocks: Vec<Vec<f64>>,
}

impl YawRotation {
    pub fn new(order: usize, angle: f64) -> Result<Self> {
        if order > MAX_ROTATION_ORDER {
            return Err(Error::arg(format!(
                "rotation order {order} unsupported (max {MAX_ROTATION_ORDER})"
            )));
        }
        // cos(mθ), sin(mθ) by the angle-addition recurrence over m.
        let (s1, c1) = angle.sin_cos();
        let mut cos_m = vec![1.0; order + 1];
        let mut sin_m = vec![0.0; order + 1];
        for m in 1..=order {
            cos_m[m] = cos_m[m - 1] * c1 - sin_m[m - 1] * s1;
            sin_m[m] = sin_m[m - 1] * c1 + cos_m[m - 1] * s1;
        }

        let blocks = (0..=order)
            .map(|l| {
                let w = 2 * l + 1;
                let mut b = vec![0.0; w * w];
                b[l * w + l] = 1.0;
                for m in 1..=l {
                    let (pc, ps) = (l + m, l - m);
                    // cos(m(φ+θ)) = cos mφ cos mθ − sin mφ sin mθ
                    // sin(m(φ+θ)) = sin mφ cos mθ + cos mφ sin mθ
                    b[pc * w + pc] = cos_m[m];
                    b[pc * w + ps] = -sin_m[m];
                    b[ps * w + ps] = cos_m[m];
                    b[ps * w + pc] = sin_m[m];
                }
                b
            })
            .collect();
        Ok(Self {
            angle,
            order,
            blocks,
        })
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Row-major `(2l+1)×(2l+1)` block acting on degree `l`.
    pub fn block(&self, l: usize) -> &[f64] {
        &self.blocks[l]
    }

    /// The full `(N+1)^2` square matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let k = channel_count(self.order);
        let mut m = DMatrix::zeros(k, k);
        for (l, b) in self.blocks.iter().enumerate() {
            let w = 2 * l + 1;
            let off = l * l;
            for r in 0..w {
                for c in 0..w {
                    m[(off + r, off + c)] = b[r * w + c];
                }
            }
        }
        m
    }

    /// Rotates one frame (channel vector) into `out`.
    pub fn rotate_frame(&self, input: &[f64], out: &mut [f64]) {
        for (l, b) in self.blocks.iter().enumerate() {
            let w = 2 * l + 1;
            let off = l * l;
            for r in 0..w {
                let row = &b[r * w..(r + 1) * w];
                out[off + r] = row
                    .iter()
                    .zip(&input[off..off + w])
                    .map(|(a, x)| a * x)
                    .sum();
            }
        }
    }
}

/// Applies a rotation frame by frame.
pub fn apply_rotation(signal: &AmbiSignal, rotation: &YawRotation) -> Result<AmbiSignal> {
    if signal.order() != rotation.order() {
        return Err(Error::arg(format!(
            "rotation order {} does not match signal order {}",
            rotation.order(),
            signal.order()
        )));
    }
    let k = channel_count(signal.order());
    let frames = signal.frames();
    let mut out = vec![vec![0.0; frames]; k];
    let mut fin = vec![0.0; k];
    let mut fout = vec![0.0; k];
    for i in 0..frames {
        for (c, ch) in signal.channels().iter().enumerate() {
            fin[c] = ch[i];
        }
        rotation.rotate_frame(&fin, &mut fout);
        for (c, ch) in out.iter_mut().enumerate() {
            ch[i] = fout[c];
        }
    }
    AmbiSignal::from_channels(signal.order(), signal.rate(), out)
}
