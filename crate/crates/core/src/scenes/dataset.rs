use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::render::Renderer;
use super::{
    Fidelity, FidelityProfile, InterfererKind, InterfererSpec, ListenerSpec, SceneSpec,
    SignalSource, TargetSpec,
};
use crate::audio::write_wav;
use crate::exec::{self, Execution};
use crate::room::{norm, sub, Directivity, RoomSpec};
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MIN_SOURCE_SPACING: f64 = 1.0;
pub const MIN_WALL_CLEARANCE: f64 = 0.5;
pub const SNR_RANGE_DB: (f64, f64) = (-6.0, 6.0);

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetConfig {
    pub count: usize,
    pub room: RoomSpec,
    pub fidelity: Fidelity,
    pub profile: FidelityProfile,
    pub seed: u64,
    pub duration_s: f64,
    pub rate: u32,
}

impl DatasetConfig {
    /// `count` three-second scenes in the listening room.
    pub fn new(count: usize, fidelity: Fidelity, seed: u64) -> Self {
        Self {
            count,
            room: RoomSpec::listening_room(),
            fidelity,
            profile: FidelityProfile::for_fidelity(fidelity),
            seed,
            duration_s: 3.0,
            rate: crate::DEFAULT_RATE,
        }
    }
}

/// File names of one scene, relative to the dataset directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFiles {
    pub scene: String,
    pub ears: String,
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    /// Seed of the batch the scene was drawn from.
    pub dataset_seed: u64,
    pub scene: SceneSpec,
    pub profile: FidelityProfile,
    pub files: SceneFiles,
    pub interferer_gain: Option<f64>,
    pub target_active: [usize; 2],
}

fn sample_point(
    rng: &mut ChaCha8Rng,
    room: &RoomSpec,
    z: (f64, f64),
    others: &[[f64; 3]],
) -> Result<[f64; 3]> {
    let [lx, ly, _] = room.dimensions;
    let c = MIN_WALL_CLEARANCE;
    for _ in 0..10_000 {
        let p = [
            rng.gen_range(c..lx - c),
            rng.gen_range(c..ly - c),
            if z.0 < z.1 {
                rng.gen_range(z.0..z.1)
            } else {
                z.0
            },
        ];
        if others
            .iter()
            .all(|&o| norm(sub(p, o)) >= MIN_SOURCE_SPACING)
        {
            return Ok(p);
        }
    }
    Err(Error::arg(format!(
        "room {:?} too small to place sources {MIN_SOURCE_SPACING} m apart",
        room.dimensions
    )))
}

/// The `index`-th scene of a seeded batch. Each index draws from its own
/// random stream, so a scene does not depend on how many others exist.
pub fn random_scene(index: usize, config: &DatasetConfig) -> Result<SceneSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let room = config.room;
    if room
        .dimensions
        .iter()
        .any(|&d| d <= 2.0 * MIN_WALL_CLEARANCE)
        || room.dimensions[2] < 1.8 + MIN_WALL_CLEARANCE
    {
        return Err(Error::arg(format!(
            "room {:?} leaves no placement area",
            room.dimensions
        )));
    }
    let dur = config.duration_s;
    let listener = sample_point(&mut rng, &room, (1.2, 1.2), &[])?;
    let mut placed = vec![listener];
    let target_pos = sample_point(&mut rng, &room, (1.2, 1.8), &placed)?;
    placed.push(target_pos);

    let onset = rng.gen_range(0.5..1.0f64).min(0.3 * dur);
    let utterance = rng.gen_range(1.4..1.8f64).min(dur - onset - 0.1).max(0.1);
    let target = TargetSpec {
        position: target_pos,
        source: SignalSource::Synth {
            seed: rng.gen(),
            duration_s: utterance,
        },
        onset_s: onset,
    };

    let n = rng.gen_range(1..=3);
    let mut interferers = Vec::with_capacity(n);
    for _ in 0..n {
        let kind = [
            InterfererKind::Speech,
            InterfererKind::Music,
            InterfererKind::Noise,
        ][rng.gen_range(0..3)];
        let position = sample_point(&mut rng, &room, (1.2, 1.8), &placed)?;
        placed.push(position);
        let onset_s = rng.gen_range(0.0..0.3f64).min(0.1 * dur);
        interferers.push(InterfererSpec {
            kind,
            position,
            onset_s,
            directivity: Directivity::Omni,
            aim: None,
            source: SignalSource::Synth {
                seed: rng.gen(),
                duration_s: dur - onset_s,
            },
        });
    }
    Ok(SceneSpec {
        id: format!("S{index:05}"),
        rate: config.rate,
        duration_s: dur,
        room,
        target,
        interferers,
        listener: ListenerSpec {
            position: listener,
            trajectory: None,
        },
        snr_db: Some(rng.gen_range(SNR_RANGE_DB.0..=SNR_RANGE_DB.1)),
        fidelity: config.fidelity,
        seed: rng.gen(),
    })
}

fn write_scene(
    out: &Path,
    scene: &SceneSpec,
    renderer: &Renderer,
    config: &DatasetConfig,
) -> Result<ManifestRecord> {
    let profile = &config.profile;
    let r = renderer
        .render(scene, profile)
        .map_err(|e| e.at_path(out.join(&scene.id)))?;
    let files = SceneFiles {
        scene: format!("{}.json", scene.id),
        ears: format!("{}_ears.wav", scene.id),
        reference: format!("{}_ref.wav", scene.id),
    };
    let json = serde_json::to_string_pretty(scene)?;
    std::fs::write(out.join(&files.scene), json)
        .map_err(|e| Error::Io(e).at_path(out.join(&files.scene)))?;
    write_wav(out.join(&files.ears), &r.ears).map_err(|e| e.at_path(out.join(&files.ears)))?;
    write_wav(out.join(&files.reference), &r.reference)
        .map_err(|e| e.at_path(out.join(&files.reference)))?;
    Ok(ManifestRecord {
        id: scene.id.clone(),
        dataset_seed: config.seed,
        scene: scene.clone(),
        profile: profile.clone(),
        files,
        interferer_gain: r.interferer_gain,
        target_active: [r.target_active.start, r.target_active.end],
    })
}

/// Draws, renders and writes a seeded batch of scenes, then the manifest.
/// Scenes render concurrently under [`Execution::Parallel`]; the output is
/// byte-identical either way.
pub fn generate_dataset(
    config: &DatasetConfig,
    out: impl AsRef<Path>,
    renderer: &Renderer,
    exec: Execution,
) -> Result<Vec<ManifestRecord>> {
    let out = out.as_ref();
    std::fs::create_dir_all(out).map_err(|e| Error::Io(e).at_path(out))?;
    let scenes = (0..config.count)
        .map(|i| random_scene(i, config))
        .collect::<Result<Vec<_>>>()?;
    let records = exec::map(exec, &scenes, |s| write_scene(out, s, renderer, config))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let path = out.join(MANIFEST_FILE);
    std::fs::write(&path, serde_json::to_string_pretty(&records)?)
        .map_err(|e| Error::Io(e).at_path(&path))?;
    Ok(records)
}

pub fn load_manifest(dir: impl AsRef<Path>) -> Result<Vec<ManifestRecord>> {
    let path = dir.as_ref().join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(e).at_path(&path))?;
    serde_json::from_str(&text).map_err(|e| Error::Json(e).at_path(&path))
}
