use std::path::Path;

use hound::{SampleFormat, WavSpec};

use super::SampleBuffer;
use crate::{Error, Result};

fn wav_err(e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::Io(io),
        other => Error::Format(other.to_string()),
    }
}

/// Reads a PCM16 or IEEE-float32 WAV file. When `expected_rate` is given the
/// file must match it; there is no resampler.
pub fn read_wav(path: impl AsRef<Path>, expected_rate: Option<u32>) -> Result<SampleBuffer> {
    let path = path.as_ref();
    let reader = hound::WavReader::open(path).map_err(|e| wav_err(e).at_path(path))?;
    let spec = reader.spec();
    if let Some(expected) = expected_rate {
        if spec.sample_rate != expected {
            return Err(Error::RateMismatch {
                expected,
                found: spec.sample_rate,
            }
            .at_path(path));
        }
    }
    let nch = spec.channels as usize;
    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<Result<_, _>>()
            .map_err(|e| wav_err(e).at_path(path))?,
        (SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<Result<_, _>>()
            .map_err(|e| wav_err(e).at_path(path))?,
        (fmt, bits) => {
            return Err(Error::Format(format!(
                "{bits}-bit {fmt:?} samples (only 16-bit PCM and 32-bit float are supported)"
            ))
            .at_path(path))
        }
    };
    let frames = interleaved.len() / nch;
    let mut channels = vec![Vec::with_capacity(frames); nch];
    for frame in interleaved.chunks_exact(nch) {
        for (c, &v) in frame.iter().enumerate() {
            channels[c].push(v);
        }
    }
    SampleBuffer::new(spec.sample_rate, channels)
}

fn write_with<F>(path: &Path, buf: &SampleBuffer, spec: WavSpec, mut put: F) -> Result<()>
where
    F: FnMut(&mut hound::WavWriter<std::io::BufWriter<std::fs::File>>, f64) -> hound::Result<()>,
{
    let mut writer = hound::WavWriter::create(path, spec).map_err(|e| wav_err(e).at_path(path))?;
    for i in 0..buf.frames() {
        for c in buf.channels() {
            put(&mut writer, c[i]).map_err(|e| wav_err(e).at_path(path))?;
        }
    }
    writer.finalize().map_err(|e| wav_err(e).at_path(path))
}

/// Writes an interleaved IEEE-float32 WAV file.
pub fn write_wav(path: impl AsRef<Path>, buf: &SampleBuffer) -> Result<()> {
    let spec = WavSpec {
        channels: buf.num_channels() as u16,
        sample_rate: buf.rate(),
        bits_per_sample: 32,
        sample_format: SampleFormat::Float,
    };
    write_with(path.as_ref(), buf, spec, |w, v| w.write_sample(v as f32))
}

/// Writes a 16-bit PCM WAV file, saturating at full scale.
pub fn write_wav_pcm16(path: impl AsRef<Path>, buf: &SampleBuffer) -> Result<()> {
    let spec = WavSpec {
        channels: buf.num_channels() as u16,
        sample_rate: buf.rate(),
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    write_with(path.as_ref(), buf, spec, |w, v| {
        w.write_sample((v * 32768.0).round().clamp(-32768.0, 32767.0) as i16)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float32_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.wav");
        let ch: Vec<Vec<f64>> = (0..2)
            .map(|c| {
                (0..300)
                    .map(|i| ((i * 7 + c * 13) as f32 * 0.0123).sin() as f64)
                    .collect()
            })
            .collect();
        let buf = SampleBuffer::new(16000, ch).unwrap();
        write_wav(&path, &buf).unwrap();
        let back = read_wav(&path, Some(16000)).unwrap();
        assert_eq!(back, buf);
    }

    #[test]
    fn pcm16_scaling_and_shape() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.wav");
        let spec = WavSpec {
            channels: 3,
            sample_rate: 16000,
            bits_per_sample: 16,
            sample_format: SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(&path, spec).unwrap();
        for i in 0..480 * 3 {
            w.write_sample(if i == 0 { 32767i16 } else { 0 }).unwrap();
        }
        w.finalize().unwrap();
        let b = read_wav(&path, None).unwrap();
        assert_eq!(b.shape(), (3, 480, 16000));
        assert_eq!(b.channel(0)[0], 32767.0 / 32768.0);
    }

    #[test]
    fn rejects_rate_mismatch_and_other_depths() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.wav");
        write_wav(&path, &SampleBuffer::silence(22050, 1, 10).unwrap()).unwrap();
        let err = read_wav(&path, Some(16000)).unwrap_err();
        assert!(
            matches!(err, Error::File { source, .. } if matches!(*source, Error::RateMismatch { .. }))
        );

        let path24 = dir.path().join("24.wav");
        let spec = WavSpec {
            channels: 1,
            sample_rate: 16000,
            bits_per_sample: 24,
            sample_format: SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(&path24, spec).unwrap();
        w.write_sample(5i32).unwrap();
        w.finalize().unwrap();
        let err = read_wav(&path24, None).unwrap_err();
        assert!(matches!(err, Error::File { source, .. } if matches!(*source, Error::Format(_))));
    }
}
