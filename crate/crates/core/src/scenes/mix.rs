use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::ambisonics::AmbiSignal;
use crate::audio::{db_to_gain, rms_slice};
use crate::{Error, Result};

/// A mixture and the scalar applied to the summed interferers.
#[derive(Debug, Clone)]
pub struct Mixed {
    pub field: AmbiSignal,
    pub interferer_gain: f64,
}

fn w_rms(field: &AmbiSignal, range: &Range<usize>) -> Result<f64> {
    let w = field.w();
    if range.is_empty() || range.end > w.len() {
        return Err(Error::Mix(format!(
            "target-active range {range:?} is empty or exceeds {} frames",
            w.len()
        )));
    }
    Ok(rms_slice(&w[range.clone()]))
}

/// Sums the interferers, scales them by one gain so the W-channel SNR over
/// `active` equals `snr_db`, and adds the target.
pub fn mix_at_snr(
    target: &AmbiSignal,
    interferers: &[AmbiSignal],
    snr_db: f64,
    active: Range<usize>,
) -> Result<Mixed> {
    let (first, rest) = interferers
        .split_first()
        .ok_or_else(|| Error::Mix("no interferers to mix".into()))?;
    let sum = rest.iter().try_fold(first.clone(), |acc, f| acc.add(f))?;
    let rt = w_rms(target, &active)?;
    let ri = w_rms(&sum, &active)?;
    if ri == 0.0 {
        return Err(Error::Mix(
            "interferers are silent over the target-active range".into(),
        ));
    }
    let g = rt / (ri * db_to_gain(snr_db));
    Ok(Mixed {
        field: target.add(&sum.scaled(g))?,
        interferer_gain: g,
    })
}

/// Adds independent seeded white noise to every channel from the first
/// sample on, at `level_db` relative to `reference_rms`. A level of −∞ leaves
/// the field unchanged.
pub fn add_transducer_noise(
    field: &AmbiSignal,
    level_db: f64,
    reference_rms: f64,
    seed: u64,
) -> Result<AmbiSignal> {
    if level_db == f64::NEG_INFINITY {
        return Ok(field.clone());
    }
    let sigma = reference_rms * db_to_gain(level_db);
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::arg(format!("noise level: {e}")))?;
    let channels = field
        .channels()
        .iter()
        .enumerate()
        .map(|(c, ch)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            ch.iter().map(|v| v + normal.sample(&mut rng)).collect()
        })
        .collect();
    AmbiSignal::from_channels(field.order(), field.rate(), channels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambisonics::encode;
    use crate::audio::SampleBuffer;
    use rand::Rng;

    fn field(seed: u64, az: f64, frames: usize, scale: f64) -> AmbiSignal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = (0..frames)
            .map(|_| scale * rng.gen_range(-1.0..1.0))
            .collect();
        encode(&SampleBuffer::mono(16000, x).unwrap(), az, 0.0, 2).unwrap()
    }

    #[test]
    fn equal_levels() {
        let t = field(1, 0.0, 4000, 1.0);
        let mut i = t.clone();
        i = i.scaled(-1.0);
        let m = mix_at_snr(&t, &[i.clone()], 0.0, 0..4000).unwrap();
        assert!((m.interferer_gain - 1.0).abs() < 1e-12);
        let m = mix_at_snr(&t, &[i], 6.0, 0..4000).unwrap();
        assert!((m.interferer_gain - 10f64.powf(-6.0 / 20.0)).abs() < 1e-12);
        assert!((m.interferer_gain - 0.501).abs() < 1e-3);
    }

    #[test]
    fn achieved_snr_on_components() {
        let t = field(1, 0.3, 8000, 0.2);
        let ints = [field(2, 1.0, 8000, 0.7), field(3, -2.0, 6000, 0.1)];
        for snr in [-6.0, 0.0, 3.5, 12.0] {
            let m = mix_at_snr(&t, &ints, snr, 1000..7000).unwrap();
            let sum = ints[0].add(&ints[1]).unwrap().scaled(m.interferer_gain);
            let got =
                20.0 * (rms_slice(&t.w()[1000..7000]) / rms_slice(&sum.w()[1000..7000])).log10();
            assert!((got - snr).abs() < 1e-9);
        }
    }

    #[test]
    fn silent_interferers_are_a_mix_error() {
        let t = field(1, 0.0, 100, 1.0);
        let s = AmbiSignal::silence(2, 16000, 100).unwrap();
        assert!(matches!(
            mix_at_snr(&t, &[s], 0.0, 0..100),
            Err(Error::Mix(_))
        ));
        assert!(matches!(
            mix_at_snr(&t, &[], 0.0, 0..100),
            Err(Error::Mix(_))
        ));
        assert!(matches!(
            mix_at_snr(&t, std::slice::from_ref(&t), 0.0, 50..200),
            Err(Error::Mix(_))
        ));
    }

    #[test]
    fn transducer_noise_level_and_seed() {
        let s = AmbiSignal::silence(1, 16000, 64000).unwrap();
        assert_eq!(
            add_transducer_noise(&s, f64::NEG_INFINITY, 0.1, 1).unwrap(),
            s
        );
        let n = add_transducer_noise(&s, 0.0, 0.1, 4).unwrap();
        for ch in n.channels() {
            assert!((rms_slice(ch) / 0.1 - 1.0).abs() < 0.02);
            assert!(ch[0] != 0.0);
        }
        assert_ne!(n.channel(0), n.channel(1));
        assert_eq!(n, add_transducer_noise(&s, 0.0, 0.1, 4).unwrap());
        assert_ne!(n, add_transducer_noise(&s, 0.0, 0.1, 5).unwrap());
    }
}
