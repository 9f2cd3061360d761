//! Listening scenes: their file format, the fidelity profiles, and the full
//! rendering pipeline from dry sources to ear signals.

mod dataset;
mod mix;
mod render;
pub mod signals;
mod trajectory;

pub use dataset::{
    generate_dataset, load_manifest, random_scene, DatasetConfig, ManifestRecord, SceneFiles,
    MANIFEST_FILE, MIN_SOURCE_SPACING, MIN_WALL_CLEARANCE, SNR_RANGE_DB,
};
pub use mix::{add_transducer_noise, mix_at_snr, Mixed};
pub use render::{default_hrtfs, RenderedScene, Renderer, SceneComponents};
pub use trajectory::{apply_trajectory, default_trajectory, RotationTrajectory, BLOCK_SECONDS};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::room::{Directivity, RoomSpec};
use crate::{Error, Result};

pub const MAX_INTERFERERS: usize = 3;

fn default_rate() -> u32 {
    crate::DEFAULT_RATE
}

/// Where a source's dry signal comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalSource {
    /// Seeded synthetic signal of the given length.
    Synth {
        seed: u64,
        duration_s: f64,
    },
    /// Mono WAV file; relative paths resolve against the scene file.
    File {
        path: PathBuf,
    },
    Silence {
        duration_s: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterfererKind {
    Speech,
    Music,
    Noise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub position: [f64; 3],
    pub source: SignalSource,
    pub onset_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfererSpec {
    pub kind: InterfererKind,
    pub position: [f64; 3],
    pub onset_s: f64,
    #[serde(default)]
    pub directivity: Directivity,
    /// Aim of a directional source; defaults to the listener.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aim: Option<[f64; 3]>,
    pub source: SignalSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListenerSpec {
    pub position: [f64; 3],
    /// Head yaw over time; when absent a turn toward the target is drawn
    /// from the scene seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<RotationTrajectory>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fidelity {
    Simulated,
    MeasuredLike,
}

impl Fidelity {
    pub const NAMES: [&'static str; 2] = ["simulated", "measured_like"];

    pub fn name(self) -> &'static str {
        match self {
            Fidelity::Simulated => "simulated",
            Fidelity::MeasuredLike => "measured_like",
        }
    }
}

impl std::str::FromStr for Fidelity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simulated" => Ok(Fidelity::Simulated),
            "measured_like" => Ok(Fidelity::MeasuredLike),
            _ => Err(Error::arg(format!(
                "unknown fidelity '{s}', expected one of: {}",
                Fidelity::NAMES.join(", ")
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub id: String,
    #[serde(default = "default_rate")]
    pub rate: u32,
    pub duration_s: f64,
    pub room: RoomSpec,
    pub target: TargetSpec,
    pub interferers: Vec<InterfererSpec>,
    pub listener: ListenerSpec,
    /// W-channel target-to-interferer ratio; `null` sums sources unscaled.
    pub snr_db: Option<f64>,
    pub fidelity: Fidelity,
    pub seed: u64,
}

impl SceneSpec {
    pub fn frames(&self) -> usize {
        (self.duration_s * self.rate as f64).round() as usize
    }

    /// Checks every invariant and reports all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.id.is_empty() || self.id.contains(['/', '\\']) {
            problems.push(format!(
                "id: '{}' must be a non-empty file-name-safe string",
                self.id
            ));
        }
        if self.rate == 0 {
            problems.push("rate: must be positive".into());
        }
        if !(self.duration_s > 0.0 && self.duration_s.is_finite()) {
            problems.push(format!("duration_s: {} must be positive", self.duration_s));
        }
        if let Err(Error::Validation(p)) = self.room.validate() {
            problems.extend(p);
        }
        let inside = |p: [f64; 3]| self.room.contains(p);
        if !inside(self.target.position) {
            problems.push(format!(
                "target.position: {:?} lies outside the room",
                self.target.position
            ));
        }
        check_source(&self.target.source, "target.source", &mut problems);
        check_onset(
            self.target.onset_s,
            self.duration_s,
            "target.onset_s",
            &mut problems,
        );
        let n = self.interferers.len();
        if !(1..=MAX_INTERFERERS).contains(&n) {
            problems.push(format!(
                "interferers: count {n} violates 1 ≤ count ≤ {MAX_INTERFERERS}"
            ));
        }
        for (i, it) in self.interferers.iter().enumerate() {
            if !inside(it.position) {
                problems.push(format!(
                    "interferers[{i}].position: {:?} lies outside the room",
                    it.position
                ));
            }
            check_onset(
                it.onset_s,
                self.duration_s,
                &format!("interferers[{i}].onset_s"),
                &mut problems,
            );
            check_source(
                &it.source,
                &format!("interferers[{i}].source"),
                &mut problems,
            );
            if let Some(a) = it.aim {
                if a.iter().all(|&v| v == 0.0) || a.iter().any(|v| !v.is_finite()) {
                    problems.push(format!(
                        "interferers[{i}].aim: must be a finite non-zero vector"
                    ));
                }
            }
        }
        if !inside(self.listener.position) {
            problems.push(format!(
                "listener.position: {:?} lies outside the room",
                self.listener.position
            ));
        }
        if let Some(t) = &self.listener.trajectory {
            if let Err(e) = t.validate() {
                problems.push(format!("listener.trajectory: {e}"));
            }
        }
        if let Some(s) = self.snr_db {
            if !s.is_finite() {
                problems.push("snr_db: must be finite".into());
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}

fn check_onset(onset: f64, duration: f64, field: &str, problems: &mut Vec<String>) {
    if !(onset >= 0.0 && onset < duration) {
        problems.push(format!("{field}: {onset} must lie in [0, duration_s)"));
    }
}

fn check_source(src: &SignalSource, field: &str, problems: &mut Vec<String>) {
    match src {
        SignalSource::Synth { duration_s, .. } | SignalSource::Silence { duration_s } => {
            if !(*duration_s > 0.0 && duration_s.is_finite()) {
                problems.push(format!("{field}.duration_s: {duration_s} must be positive"));
            }
        }
        SignalSource::File { path } => {
            if path.as_os_str().is_empty() {
                problems.push(format!("{field}.path: empty"));
            }
        }
    }
}

/// Reads and validates a scene file. Relative source paths are made relative
/// to the scene file's directory.
pub fn load_scene(path: impl AsRef<Path>) -> Result<SceneSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e).at_path(path))?;
    let mut scene: SceneSpec =
        serde_json::from_str(&text).map_err(|e| Error::Json(e).at_path(path))?;
    scene.validate().map_err(|e| e.at_path(path))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let resolve = |src: &mut SignalSource| {
        if let SignalSource::File { path: p } = src {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    };
    resolve(&mut scene.target.source);
    scene
        .interferers
        .iter_mut()
        .for_each(|i| resolve(&mut i.source));
    Ok(scene)
}

/// The knobs separating a simulated rendering from a measured-like one. Each
/// can be toggled on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityProfile {
    pub name: String,
    pub order: usize,
    /// Overrides every interferer's directivity when set.
    pub interferer_directivity: Option<Directivity>,
    /// Transducer noise per Ambisonic channel, dB re the target W RMS.
    pub transducer_noise_db: Option<f64>,
    pub absorption_multiplier: f64,
}

impl FidelityProfile {
    pub fn simulated() -> Self {
        Self {
            name: "simulated".into(),
            order: 6,
            interferer_directivity: Some(Directivity::Omni),
            transducer_noise_db: None,
            absorption_multiplier: 1.0,
        }
    }

    pub fn measured_like() -> Self {
        Self {
            name: "measured_like".into(),
            order: 1,
            interferer_directivity: Some(Directivity::Cardioid),
            transducer_noise_db: Some(-40.0),
            absorption_multiplier: 0.85,
        }
    }

    pub fn for_fidelity(f: Fidelity) -> Self {
        match f {
            Fidelity::Simulated => Self::simulated(),
            Fidelity::MeasuredLike => Self::measured_like(),
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_interferer_directivity(mut self, d: Option<Directivity>) -> Self {
        self.interferer_directivity = d;
        self
    }

    pub fn with_transducer_noise(mut self, level_db: Option<f64>) -> Self {
        self.transducer_noise_db = level_db;
        self
    }

    pub fn with_absorption_multiplier(mut self, m: f64) -> Self {
        self.absorption_multiplier = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(1..=6).contains(&self.order) {
            problems.push(format!("order: {} outside 1..=6", self.order));
        }
        if !(self.absorption_multiplier > 0.0 && self.absorption_multiplier.is_finite()) {
            problems.push(format!(
                "absorption_multiplier: {} must be positive",
                self.absorption_multiplier
            ));
        }
        if let Some(n) = self.transducer_noise_db {
            if n.is_nan() || n == f64::INFINITY {
                problems.push(format!("transducer_noise_db: {n} is not a level"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}
