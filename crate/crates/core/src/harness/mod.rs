//! Batch scoring of rendered datasets and leaderboard arithmetic.

mod leaderboard;

pub use leaderboard::{
    best_per_team, parse_leaderboard, read_leaderboard, team_of, verify_rows, write_leaderboard,
    LeaderboardRow, RowCheck, AVE_TOLERANCE,
};

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::audio::{read_wav, SampleBuffer};
use crate::exec::{self, Execution};
use crate::hearing_aid::{amplify, Audiogram, Side, DEFAULT_TAPS};
use crate::metrics::{
    better_ear, combined_score, intelligibility_score, quality_score, AuditoryConfig, MetricScore,
};
use crate::scenes::{load_manifest, FidelityProfile};
use crate::stats::{mean, round3};
use crate::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Baseline scoring of one listener: passthrough enhancement, NAL-R
/// amplification, then each metric taken from the better ear.
pub fn score_ears(
    ears: &SampleBuffer,
    reference: &SampleBuffer,
    audiogram: &Audiogram,
    config: &AuditoryConfig,
) -> Result<MetricScore> {
    let amplified = amplify(ears, audiogram, DEFAULT_TAPS)?.signal;
    let mut haspi = [0.0; 2];
    let mut hasqi = [0.0; 2];
    for (i, side) in [Side::Left, Side::Right].into_iter().enumerate() {
        let ear = SampleBuffer::mono(amplified.rate(), amplified.channel(i).to_vec())?;
        let loss = audiogram.ear(side);
        haspi[i] = intelligibility_score(reference, &ear, loss, config)?;
        hasqi[i] = quality_score(reference, &ear, loss, config)?;
    }
    combined_score(
        better_ear(haspi[0], haspi[1]),
        better_ear(hasqi[0], hasqi[1]),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneScore {
    pub scene: String,
    pub haspi_like: f64,
    pub hasqi_like: f64,
    pub ave: f64,
}

impl SceneScore {
    /// Rounds both scores to 3 decimals and derives the rounded mean.
    pub fn rounded(scene: impl Into<String>, s: &MetricScore) -> Self {
        let h = round3(s.haspi_like);
        let q = round3(s.hasqi_like);
        Self {
            scene: scene.into(),
            haspi_like: h,
            hasqi_like: q,
            ave: round3((h + q) / 2.0),
        }
    }
}

/// Scores every scene of a dataset directory, sorted by scene id.
pub fn score_dataset(
    dir: impl AsRef<Path>,
    audiogram: &Audiogram,
    config: &AuditoryConfig,
    exec: Execution,
) -> Result<Vec<SceneScore>> {
    let dir = dir.as_ref();
    audiogram.validate()?;
    let mut records = load_manifest(dir)?;
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let results = exec::map(exec, &records, |r| {
        let run = || -> Result<SceneScore> {
            let ears = read_wav(dir.join(&r.files.ears), None)?;
            let reference = read_wav(dir.join(&r.files.reference), Some(ears.rate()))?;
            Ok(SceneScore::rounded(
                &r.id,
                &score_ears(&ears, &reference, audiogram, config)?,
            ))
        };
        run().map_err(|e| e.in_scene(&r.id))
    });
    results.into_iter().collect()
}

/// Per-metric means of a score table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub count: usize,
    pub haspi_like: f64,
    pub hasqi_like: f64,
    pub ave: f64,
}

pub fn summarize(scores: &[SceneScore]) -> ScoreSummary {
    let col = |f: fn(&SceneScore) -> f64| mean(&scores.iter().map(f).collect::<Vec<_>>());
    ScoreSummary {
        count: scores.len(),
        haspi_like: col(|s| s.haspi_like),
        hasqi_like: col(|s| s.hasqi_like),
        ave: col(|s| s.ave),
    }
}

pub fn write_scores_csv(path: impl AsRef<Path>, scores: &[SceneScore]) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::new();
    writeln!(out, "scene,haspi_like,hasqi_like,ave")?;
    for s in scores {
        writeln!(
            out,
            "{},{:.3},{:.3},{:.3}",
            s.scene, s.haspi_like, s.hasqi_like, s.ave
        )?;
    }
    std::fs::write(path, out).map_err(|e| Error::Io(e).at_path(path))
}

/// Record of one scoring run; the means can be recomputed from `scores`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub seed: Option<u64>,
    pub profile: Option<FidelityProfile>,
    pub audiogram: Audiogram,
    pub scores: Vec<SceneScore>,
    pub means: ScoreSummary,
}

impl RunManifest {
    pub fn new(
        seed: Option<u64>,
        profile: Option<FidelityProfile>,
        audiogram: Audiogram,
        scores: Vec<SceneScore>,
    ) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            seed,
            profile,
            means: summarize(&scores),
            audiogram,
            scores,
        }
    }

    /// True when the stored means match the per-scene records.
    pub fn is_consistent(&self) -> bool {
        let m = summarize(&self.scores);
        m.count == self.means.count
            && [
                (m.haspi_like, self.means.haspi_like),
                (m.hasqi_like, self.means.hasqi_like),
                (m.ave, self.means.ave),
            ]
            .iter()
            .all(|(a, b)| (a - b).abs() < 1e-12)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, serde_json::to_string_pretty(self)?)
            .map_err(|e| Error::Io(e).at_path(path))
    }
}
