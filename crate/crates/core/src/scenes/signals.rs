//! Seeded synthetic source material: a speech-like modulated harmonic
//! complex, coloured noise, and a tonal arpeggio. Every generator returns a
//! signal normalized to −26 dBFS RMS.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::audio::{db_to_gain, rms_slice};

pub const SOURCE_LEVEL_DBFS: f64 = -26.0;

fn normalize(mut x: Vec<f64>) -> Vec<f64> {
    let r = rms_slice(&x);
    if r > 0.0 {
        let g = db_to_gain(SOURCE_LEVEL_DBFS) / r;
        x.iter_mut().for_each(|v| *v *= g);
    }
    x
}

fn frames(duration_s: f64, rate: u32) -> usize {
    (duration_s * rate as f64).round().max(0.0) as usize
}

struct Syllable {
    start: usize,
    len: usize,
    f0_start: f64,
    f0_end: f64,
    formants: [f64; 3],
}

/// Voiced syllables (120–300 ms) separated by short pauses. Each syllable
/// glides its fundamental and carries its own three-formant envelope.
pub fn speech_like(seed: u64, duration_s: f64, rate: u32) -> Vec<f64> {
    let n = frames(duration_s, rate);
    let fs = rate as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let register = rng.gen_range(0.8..1.6);
    let mut syllables = Vec::new();
    let mut t = (rng.gen_range(0.0..0.05) * fs) as usize;
    while t < n {
        let len = (rng.gen_range(0.12..0.30) * fs) as usize;
        let f0 = 110.0 * register * rng.gen_range(0.85..1.2);
        syllables.push(Syllable {
            start: t,
            len: len.min(n - t),
            f0_start: f0,
            f0_end: f0 * rng.gen_range(0.8..1.15),
            formants: [
                rng.gen_range(300.0..800.0),
                rng.gen_range(900.0..2300.0),
                rng.gen_range(2400.0..3300.0),
            ],
        });
        t += len + (rng.gen_range(0.03..0.12) * fs) as usize;
    }

    let top = (0.45 * fs).min(5000.0);
    let mut out = vec![0.0; n];
    for syl in &syllables {
        let max_h = (top / syl.f0_start.min(syl.f0_end)).floor() as usize;
        let mut phases = vec![0.0; max_h + 1];
        for i in 0..syl.len {
            let frac = i as f64 / syl.len.max(1) as f64;
            let f0 = syl.f0_start + (syl.f0_end - syl.f0_start) * frac;
            // Raised-cosine syllable envelope.
            let env = 0.5 * (1.0 - (2.0 * PI * frac).cos());
            let mut v = 0.0;
            for h in 1..=max_h {
                let f = h as f64 * f0;
                phases[h] += 2.0 * PI * f / fs;
                if f > top {
                    continue;
                }
                let shape: f64 = syl
                    .formants
                    .iter()
                    .zip([1.0, 0.6, 0.35])
                    .map(|(&fm, a)| a / (1.0 + ((f - fm) / 90.0).powi(2)))
                    .sum::<f64>()
                    + 0.02;
                v += shape / h as f64 * phases[h].sin();
            }
            out[syl.start + i] = env * v;
        }
    }
    normalize(out)
}

/// Gaussian noise through a seeded one-pole low-pass with slow level drift.
pub fn noise_like(seed: u64, duration_s: f64, rate: u32) -> Vec<f64> {
    let n = frames(duration_s, rate);
    let fs = rate as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cutoff = rng.gen_range(500.0..4000.0);
    let drift = rng.gen_range(0.2..1.0);
    let p = (-2.0 * PI * cutoff / fs).exp();
    let mut y = 0.0;
    let out = (0..n)
        .map(|i| {
            let g: f64 = StandardNormal.sample(&mut rng);
            y = (1.0 - p) * g + p * y;
            y * (1.0 + 0.3 * (2.0 * PI * drift * i as f64 / fs).sin())
        })
        .collect();
    normalize(out)
}

/// Repeating arpeggio over a seeded triad, harmonic tones with exponential
/// decay.
pub fn music_like(seed: u64, duration_s: f64, rate: u32) -> Vec<f64> {
    let n = frames(duration_s, rate);
    let fs = rate as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = rng.gen_range(48..60) as f64;
    let third = if rng.gen_bool(0.5) { 4.0 } else { 3.0 };
    let steps = [0.0, third, 7.0, 12.0];
    let note_len = (rng.gen_range(0.15..0.25) * fs) as usize;
    let mut out = vec![0.0; n];
    let mut start = 0;
    let mut k = 0;
    while start < n {
        let midi = root + steps[k % steps.len()];
        let f = 440.0 * 2f64.powf((midi - 69.0) / 12.0);
        let len = (2 * note_len).min(n - start);
        for i in 0..len {
            let t = i as f64 / fs;
            let env = (-t * 8.0).exp();
            let v: f64 = (1..=4)
                .map(|h| (2.0 * PI * f * h as f64 * t).sin() / h as f64)
                .sum();
            out[start + i] += env * v;
        }
        start += note_len;
        k += 1;
    }
    normalize(out)
}
