//! Shoebox image-source simulation in the Ambisonic domain, source
//! directivity, and Schroeder reverberation-time measurement.

mod image;
mod rt60;

pub use image::{count_images, image_source_rir, image_sources, AmbiRir, ImageSource};
pub use rt60::{energy_decay_curve, schroeder_rt60};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_SPEED_OF_SOUND: f64 = 343.0;

fn default_c() -> f64 {
    DEFAULT_SPEED_OF_SOUND
}

/// Rectangular room with uniform, frequency-independent absorption. The
/// room spans `[0, L]` on each axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoomSpec {
    pub dimensions: [f64; 3],
    pub absorption: f64,
    #[serde(default = "default_c")]
    pub speed_of_sound: f64,
}

impl RoomSpec {
    pub fn new(dimensions: [f64; 3], absorption: f64) -> Result<Self> {
        let r = Self {
            dimensions,
            absorption,
            speed_of_sound: DEFAULT_SPEED_OF_SOUND,
        };
        r.validate()?;
        Ok(r)
    }

    /// The 6.6 × 5.8 × 2.8 m listening room with the Sabine absorption
    /// giving a 0.27 s reverberation time.
    pub fn listening_room() -> Self {
        Self {
            dimensions: [6.6, 5.8, 2.8],
            absorption: 0.438,
            speed_of_sound: DEFAULT_SPEED_OF_SOUND,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.dimensions.iter().any(|&d| !(d > 0.0)) {
            problems.push(format!(
                "room.dimensions must be positive, got {:?}",
                self.dimensions
            ));
        }
        if !(self.absorption > 0.0 && self.absorption <= 1.0) {
            problems.push(format!(
                "room.absorption must be in (0, 1], got {}",
                self.absorption
            ));
        }
        if !(self.speed_of_sound > 0.0) {
            problems.push("room.speed_of_sound must be positive".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// Pressure reflection coefficient √(1−α).
    pub fn reflection_coefficient(&self) -> f64 {
        (1.0 - self.absorption).sqrt()
    }

    pub fn volume(&self) -> f64 {
        self.dimensions.iter().product()
    }

    pub fn surface_area(&self) -> f64 {
        let [x, y, z] = self.dimensions;
        2.0 * (x * y + x * z + y * z)
    }

    /// Sabine estimate 0.161·V/(α·S).
    pub fn sabine_rt60(&self) -> f64 {
        0.161 * self.volume() / (self.absorption * self.surface_area())
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        p.iter()
            .zip(&self.dimensions)
            .all(|(&v, &l)| v > 0.0 && v < l)
    }

    /// Smallest distance from `p` to any wall.
    pub fn wall_clearance(&self, p: [f64; 3]) -> f64 {
        p.iter()
            .zip(&self.dimensions)
            .map(|(&v, &l)| v.min(l - v))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn with_absorption(&self, absorption: f64) -> Self {
        Self {
            absorption,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Directivity {
    #[default]
    Omni,
    Cardioid,
}

/// Gain of a source pattern at angle `psi` from its aim.
pub fn directivity_gain(pattern: Directivity, psi: f64) -> f64 {
    match pattern {
        Directivity::Omni => 1.0,
        Directivity::Cardioid => 0.5 * (1.0 + psi.cos()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    pub position: [f64; 3],
    pub directivity: Directivity,
    /// Unit aim vector; required for cardioid sources.
    pub aim: Option<[f64; 3]>,
}

impl SourceSpec {
    pub fn omni(position: [f64; 3]) -> Self {
        Self {
            position,
            directivity: Directivity::Omni,
            aim: None,
        }
    }

    pub fn cardioid(position: [f64; 3], aim: [f64; 3]) -> Self {
        Self {
            position,
            directivity: Directivity::Cardioid,
            aim: Some(aim),
        }
    }
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
