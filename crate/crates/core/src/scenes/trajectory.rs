use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ambisonics::{AmbiSignal, YawRotation};
use crate::{Error, Result};

/// Rotation block length; blocks overlap by half.
pub const BLOCK_SECONDS: f64 = 0.01;

/// Piecewise-linear head yaw, `(time s, yaw rad)` breakpoints. The final yaw
/// is held after the last breakpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct RotationTrajectory {
    breakpoints: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for RotationTrajectory {
    type Error = Error;

    fn try_from(b: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(b)
    }
}

impl From<RotationTrajectory> for Vec<(f64, f64)> {
    fn from(t: RotationTrajectory) -> Self {
        t.breakpoints
    }
}

impl RotationTrajectory {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        let t = Self { breakpoints };
        t.validate()?;
        Ok(t)
    }

    pub fn constant(yaw: f64) -> Self {
        Self {
            breakpoints: vec![(0.0, yaw)],
        }
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.breakpoints;
        if b.is_empty() {
            return Err(Error::arg("empty trajectory"));
        }
        if b[0].0 != 0.0 {
            return Err(Error::arg(format!(
                "first breakpoint at {} s, expected 0",
                b[0].0
            )));
        }
        if b.iter().any(|(t, y)| !t.is_finite() || !y.is_finite()) {
            return Err(Error::arg("trajectory breakpoints must be finite"));
        }
        if b.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::arg("trajectory times must increase strictly"));
        }
        Ok(())
    }

    pub fn yaw_at(&self, t: f64) -> f64 {
        let b = &self.breakpoints;
        match b.iter().position(|&(bt, _)| bt > t) {
            Some(0) => b[0].1,
            Some(i) => {
                let (t0, y0) = b[i - 1];
                let (t1, y1) = b[i];
                y0 + (y1 - y0) * (t - t0) / (t1 - t0)
            }
            None => b[b.len() - 1].1,
        }
    }
}

/// A seeded head turn toward a target at `target_azimuth`: the listener
/// starts 15–30° off, begins turning within the 0.6 s before `target_onset`
/// and settles within ±10° of the target over 0.2–0.4 s.
pub fn default_trajectory(target_azimuth: f64, target_onset: f64, seed: u64) -> RotationTrajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deg = PI / 180.0;
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let initial = target_azimuth + sign * rng.gen_range(15.0..=30.0) * deg;
    let start = rng.gen_range((target_onset - 0.6)..=target_onset).max(0.0);
    let duration = rng.gen_range(0.2..=0.4);
    let fin = target_azimuth + rng.gen_range(-10.0..=10.0) * deg;
    let mut b = vec![(0.0, initial)];
    if start > 0.0 {
        b.push((start, initial));
    }
    b.push((start + duration, fin));
    RotationTrajectory { breakpoints: b }
}

/// Rotates a field by the negated listener yaw. Blocks of 10 ms centred on
/// multiples of the 5 ms hop are rotated by the yaw at their centres and
/// blended with triangular windows, which sum to one everywhere.
pub fn apply_trajectory(field: &AmbiSignal, trajectory: &RotationTrajectory) -> Result<AmbiSignal> {
    trajectory.validate()?;
    let rate = field.rate() as f64;
    let hop = ((BLOCK_SECONDS * rate / 2.0).round() as usize).max(1);
    let order = field.order();
    let k = field.channels().len();
    let frames = field.frames();
    let n_blocks = frames / hop + 2;
    let rotations = (0..n_blocks)
        .map(|b| YawRotation::new(order, -trajectory.yaw_at((b * hop) as f64 / rate)))
        .collect::<Result<Vec<_>>>()?;

    let mut out = vec![vec![0.0; frames]; k];
    let mut frame = vec![0.0; k];
    let mut ra = vec![0.0; k];
    let mut rb = vec![0.0; k];
    for n in 0..frames {
        let b = n / hop;
        let w = (n - b * hop) as f64 / hop as f64;
        for (c, f) in frame.iter_mut().enumerate() {
            *f = field.channel(c)[n];
        }
        rotations[b].rotate_frame(&frame, &mut ra);
        if w == 0.0 {
            for c in 0..k {
                out[c][n] = ra[c];
            }
            continue;
        }
        rotations[b + 1].rotate_frame(&frame, &mut rb);
        for c in 0..k {
            out[c][n] = (1.0 - w) * ra[c] + w * rb[c];
        }
    }
    AmbiSignal::from_channels(order, field.rate(), out)
}
