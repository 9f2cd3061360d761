use std::ops::Range;

use super::mix::{add_transducer_noise, mix_at_snr};
use super::signals::{music_like, noise_like, speech_like, SOURCE_LEVEL_DBFS};
use super::trajectory::{apply_trajectory, default_trajectory, RotationTrajectory};
use super::{FidelityProfile, InterfererKind, SceneSpec, SignalSource};
use crate::ambisonics::{
    fibonacci_grid, AmbiSignal, BinauralDecoder, Direction, MAX_ROTATION_ORDER,
};
use crate::audio::{convolve_many, db_to_gain, read_wav, rms_slice, SampleBuffer};
use crate::error::StageExt;
use crate::hrtf::{HeadModel, HrtfSet};
use crate::room::{image_source_rir, sub, RoomSpec, SourceSpec};
use crate::{Error, Result};

/// Length of every simulated room impulse response.
pub const RIR_SECONDS: f64 = 0.5;
/// W-channel level of the target in a mixed scene.
pub const PRESENTATION_LEVEL_DBFS: f64 = SOURCE_LEVEL_DBFS;
pub const GRID_POINTS: usize = 64;
pub const HRTF_TAPS: usize = 64;

/// Spherical-head HRTFs on the virtual loudspeaker grid.
pub fn default_hrtfs(rate: u32) -> Result<HrtfSet> {
    HrtfSet::synthesize(
        &fibonacci_grid(GRID_POINTS),
        &HeadModel::default(),
        rate,
        HRTF_TAPS,
    )
}

/// Ear signals, the scoring reference and bookkeeping for one scene.
#[derive(Debug, Clone)]
pub struct RenderedScene {
    pub ears: SampleBuffer,
    pub reference: SampleBuffer,
    pub interferer_gain: Option<f64>,
    pub trajectory: RotationTrajectory,
    /// Frames where the target utterance plays.
    pub target_active: Range<usize>,
}

/// The same rendering with the target, the scaled interferers and the
/// transducer noise decoded separately.
#[derive(Debug, Clone)]
pub struct SceneComponents {
    pub target: SampleBuffer,
    pub interferers: SampleBuffer,
    pub noise: Option<SampleBuffer>,
    pub reference: SampleBuffer,
    pub target_active: Range<usize>,
}

impl SceneComponents {
    /// Target-to-everything-else energy ratio per ear over the active range.
    pub fn ear_snr_db(&self) -> [f64; 2] {
        let r = self.target_active.clone();
        let energy = |x: &[f64]| x[r.clone()].iter().map(|v| v * v).sum::<f64>();
        [0, 1].map(|e| {
            let mut rest: Vec<f64> = self.interferers.channel(e).to_vec();
            if let Some(n) = &self.noise {
                rest.iter_mut().zip(n.channel(e)).for_each(|(a, b)| *a += b);
            }
            10.0 * (energy(self.target.channel(e)) / energy(&rest)).log10()
        })
    }

    pub fn mixture(&self) -> Result<SampleBuffer> {
        let channels = (0..2)
            .map(|e| {
                let mut v = self.target.channel(e).to_vec();
                v.iter_mut()
                    .zip(self.interferers.channel(e))
                    .for_each(|(a, b)| *a += b);
                if let Some(n) = &self.noise {
                    v.iter_mut().zip(n.channel(e)).for_each(|(a, b)| *a += b);
                }
                v
            })
            .collect();
        SampleBuffer::new(self.target.rate(), channels)
    }
}

/// Renders scenes against one HRTF set, with a binaural decoder per order
/// built once.
pub struct Renderer {
    rate: u32,
    decoders: Vec<BinauralDecoder>,
}

struct Fields {
    target: AmbiSignal,
    interferers: AmbiSignal,
    noise: Option<AmbiSignal>,
    gain: Option<f64>,
    reference: SampleBuffer,
    trajectory: RotationTrajectory,
    active: Range<usize>,
}

fn place(signal: &[f64], onset: usize, frames: usize) -> Vec<f64> {
    let mut v = vec![0.0; frames];
    let end = (onset + signal.len()).min(frames);
    if onset < end {
        v[onset..end].copy_from_slice(&signal[..end - onset]);
    }
    v
}

fn load_source(
    src: &SignalSource,
    synth: fn(u64, f64, u32) -> Vec<f64>,
    rate: u32,
) -> Result<Vec<f64>> {
    match src {
        SignalSource::Synth { seed, duration_s } => Ok(synth(*seed, *duration_s, rate)),
        SignalSource::Silence { duration_s } => {
            Ok(vec![0.0; (duration_s * rate as f64).round() as usize])
        }
        SignalSource::File { path } => {
            let buf = read_wav(path, Some(rate))?;
            buf.expect_channels(1, "source file")
                .map_err(|e| e.at_path(path))?;
            Ok(buf.into_channels().swap_remove(0))
        }
    }
}

impl Renderer {
    pub fn new(hrtfs: &HrtfSet) -> Result<Self> {
        let grid = fibonacci_grid(GRID_POINTS);
        let decoders = (0..=MAX_ROTATION_ORDER.min(6))
            .map(|n| BinauralDecoder::new(n, hrtfs, &grid))
            .collect::<Result<_>>()?;
        Ok(Self {
            rate: hrtfs.rate(),
            decoders,
        })
    }

    pub fn with_default_hrtfs(rate: u32) -> Result<Self> {
        Self::new(&default_hrtfs(rate)?)
    }

    pub fn rate(&self) -> u32 {
        self.rate
    }

    /// Room response of one source convolved with its dry track, which starts
    /// at `onset` and is cut to `frames`.
    #[allow(clippy::too_many_arguments)]
    fn spatialize(
        &self,
        room: &RoomSpec,
        source: &SourceSpec,
        listener: [f64; 3],
        dry: &[f64],
        onset: usize,
        frames: usize,
        order: usize,
    ) -> Result<AmbiSignal> {
        let rir = image_source_rir(room, source, listener, order, RIR_SECONDS, self.rate)
            .stage("room")?;
        let k = rir.signal.channels().len();
        let avail = frames.saturating_sub(onset);
        let dry = &dry[..dry.len().min(avail)];
        if dry.is_empty() {
            return AmbiSignal::silence(order, self.rate, frames);
        }
        let wet = convolve_many(dry, rir.signal.channels()).stage("convolve")?;
        let channels = wet
            .iter()
            .map(|c| place(c, onset, frames))
            .collect::<Vec<_>>();
        debug_assert_eq!(channels.len(), k);
        AmbiSignal::from_channels(order, self.rate, channels)
    }

    fn fields(&self, scene: &SceneSpec, profile: &FidelityProfile) -> Result<Fields> {
        scene.validate().stage("scene")?;
        profile.validate().stage("profile")?;
        if scene.rate != self.rate {
            return Err(Error::RateMismatch {
                expected: self.rate,
                found: scene.rate,
            });
        }
        let frames = scene.frames();
        let rate = scene.rate as f64;
        let order = profile.order;
        let room = scene
            .room
            .with_absorption((scene.room.absorption * profile.absorption_multiplier).min(1.0));
        let listener = scene.listener.position;
        let onset_of = |t: f64| ((t * rate).round() as usize).min(frames);

        let mut utterance =
            load_source(&scene.target.source, speech_like, scene.rate).stage("source")?;
        let level = rms_slice(&utterance);
        if level > 0.0 {
            let g = db_to_gain(SOURCE_LEVEL_DBFS) / level;
            utterance.iter_mut().for_each(|v| *v *= g);
        }
        let t_onset = onset_of(scene.target.onset_s);
        let active = t_onset..(t_onset + utterance.len()).min(frames);
        let reference = SampleBuffer::mono(scene.rate, place(&utterance, t_onset, frames))?;
        let target = self.spatialize(
            &room,
            &SourceSpec::omni(scene.target.position),
            listener,
            &utterance,
            t_onset,
            frames,
            order,
        )?;

        let mut interferer_fields = Vec::with_capacity(scene.interferers.len());
        for it in &scene.interferers {
            let synth = match it.kind {
                InterfererKind::Speech => speech_like,
                InterfererKind::Music => music_like,
                InterfererKind::Noise => noise_like,
            };
            let dry = load_source(&it.source, synth, scene.rate).stage("source")?;
            let source = SourceSpec {
                position: it.position,
                directivity: profile.interferer_directivity.unwrap_or(it.directivity),
                aim: Some(it.aim.unwrap_or_else(|| sub(listener, it.position))),
            };
            interferer_fields.push(self.spatialize(
                &room,
                &source,
                listener,
                &dry,
                onset_of(it.onset_s),
                frames,
                order,
            )?);
        }

        let mut total = AmbiSignal::silence(order, scene.rate, frames)?;
        for f in &interferer_fields {
            total = total.add(f)?;
        }
        // Mixing also presents the scene at a fixed level: the whole mixture
        // is scaled so the target W channel matches the reference level.
        let (target, interferers, gain) = match scene.snr_db {
            Some(snr) => {
                let g = mix_at_snr(&target, &[total.clone()], snr, active.clone())
                    .stage("mix")?
                    .interferer_gain;
                let level = rms_slice(&target.w()[active.clone()]);
                let p = if level > 0.0 {
                    db_to_gain(PRESENTATION_LEVEL_DBFS) / level
                } else {
                    1.0
                };
                (target.scaled(p), total.scaled(g * p), Some(g))
            }
            None => (target, total, None),
        };

        let noise = match profile.transducer_noise_db {
            Some(level) => {
                let reference_rms = if active.is_empty() {
                    0.0
                } else {
                    rms_slice(&target.w()[active.clone()])
                };
                let silent = AmbiSignal::silence(order, scene.rate, frames)?;
                Some(
                    add_transducer_noise(
                        &silent,
                        level,
                        reference_rms,
                        scene.seed ^ 0x006e_6f69_7365,
                    )
                    .stage("noise")?,
                )
            }
            None => None,
        };

        let trajectory = match &scene.listener.trajectory {
            Some(t) => t.clone(),
            None => {
                let az = Direction::from_vector(sub(scene.target.position, listener)).azimuth;
                default_trajectory(az, scene.target.onset_s, scene.seed)
            }
        };
        Ok(Fields {
            target,
            interferers,
            noise,
            gain,
            reference,
            trajectory,
            active,
        })
    }

    fn to_ears(&self, field: &AmbiSignal, trajectory: &RotationTrajectory) -> Result<SampleBuffer> {
        let frames = field.frames();
        let rotated = apply_trajectory(field, trajectory).stage("rotation")?;
        let ears = self.decoders[field.order()]
            .decode(&rotated)
            .stage("decode")?;
        let channels = ears.into_channels().into_iter().map(|mut c| {
            c.truncate(frames);
            c
        });
        SampleBuffer::new(self.rate, channels.collect())
    }

    /// Full pipeline: room responses, convolution, SNR mixing, transducer
    /// noise, head rotation and binaural decoding.
    pub fn render(&self, scene: &SceneSpec, profile: &FidelityProfile) -> Result<RenderedScene> {
        let f = self.fields(scene, profile)?;
        let mut mix = f.target.add(&f.interferers)?;
        if let Some(n) = &f.noise {
            mix = mix.add(n)?;
        }
        Ok(RenderedScene {
            ears: self.to_ears(&mix, &f.trajectory)?,
            reference: f.reference,
            interferer_gain: f.gain,
            trajectory: f.trajectory,
            target_active: f.active,
        })
    }

    pub fn render_components(
        &self,
        scene: &SceneSpec,
        profile: &FidelityProfile,
    ) -> Result<SceneComponents> {
        let f = self.fields(scene, profile)?;
        Ok(SceneComponents {
            target: self.to_ears(&f.target, &f.trajectory)?,
            interferers: self.to_ears(&f.interferers, &f.trajectory)?,
            noise: f
                .noise
                .map(|n| self.to_ears(&n, &f.trajectory))
                .transpose()?,
            reference: f.reference,
            target_active: f.active,
        })
    }
}
