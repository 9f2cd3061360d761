//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use clarity_core::ambisonics::{
    apply_rotation, channel_count, degree_of, encode, sh_eval, AmbiSignal, YawRotation,
};
use clarity_core::audio::{convolve_many, SampleBuffer};
use clarity_core::exec::{self, Execution};
use clarity_core::harness::{best_per_team, parse_leaderboard, score_ears};
use clarity_core::hearing_aid::{
    design_fir, fir_magnitude, nalr_gains, Audiogram, EarLevels, Side, AUDIOGRAM_FREQS,
};
use clarity_core::metrics::{intelligibility_score, quality_score, AuditoryConfig};
use clarity_core::room::{count_images, image_source_rir, schroeder_rt60, RoomSpec, SourceSpec};
use clarity_core::scenes::signals::{music_like, noise_like, speech_like};
use clarity_core::scenes::{
    mix_at_snr, random_scene, DatasetConfig, Fidelity, FidelityProfile, Renderer, SceneSpec,
};
use clarity_core::stats::pearson;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIN: &str = env!("CARGO_BIN_EXE_clarity-bench");
const LEADERBOARD: &str = include_str!("../data/leaderboard.csv");
const RATE: u32 = 16_000;

// Tolerances and targets.
const AVE_TOL: f64 = 0.0005;
const PUBLISHED_R: f64 = 0.943;
const R_TOL: f64 = 0.005;
const COLLAPSE_FRACTION: f64 = 0.8;
const ROTATION_TOL: f64 = 1e-9;
const RT60_WINDOW: (f64, f64) = (0.22, 0.32);
const NALR_TOL_DB: f64 = 1.0;
const FLAT40_1K_DB: f64 = 19.4;
const ZERO_1K_DB: f64 = 1.0;
const IDENTITY_MIN: f64 = 0.99;
const GAIN_INVARIANCE_TOL: f64 = 1e-6;
const CONV_TOL: f64 = 1e-9;
const SNR_TOL_DB: f64 = 0.1;

// Batch used by the sim-to-real and ablation criteria.
const BATCH_SCENES: usize = 20;
const BATCH_SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn run(id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        outcome(false, format!("panicked: {msg}"))
    });
    let elapsed = t.elapsed();
    let in_time = elapsed < budget;
    let pass = o.pass && in_time;
    println!(
        "{} {id:>2} {name}: {} [{:.2} s, budget {} s{}]",
        if pass { "PASS" } else { "FAIL" },
        o.detail,
        elapsed.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { ", over budget" }
    );
    pass
}

fn leaderboard() -> Vec<clarity_core::harness::LeaderboardRow> {
    parse_leaderboard(LEADERBOARD, Path::new("leaderboard.csv"), "Eval1")
        .expect("bundled table parses")
}

fn pearson_oracle(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

fn leaderboard_arithmetic() -> Outcome {
    let out = Command::new(BIN)
        .args(["report", "--paper-table"])
        .output()
        .expect("run report");
    if !out.status.success() {
        return outcome(false, format!("report exited with {}", out.status));
    }
    let text = String::from_utf8_lossy(&out.stdout);
    let summary = text.lines().find(|l| l.starts_with("rows:")).unwrap_or("");
    let rows = leaderboard();
    let per_set = |s: &str| rows.iter().filter(|r| r.eval_set == s).count();
    let flagged: Vec<String> = rows
        .iter()
        .filter(|r| (r.ave - (r.haspi_like + r.hasqi_like) / 2.0).abs() > AVE_TOL + 1e-9)
        .map(|r| format!("{} {}", r.entry, r.eval_set))
        .collect();
    let ok = summary == "rows: 20  flagged: 0" && per_set("Eval1") == 10 && per_set("Eval2") == 10;
    outcome(
        ok && flagged.is_empty(),
        format!(
            "report says '{summary}'; oracle flags {} row(s) beyond ±{AVE_TOL} [{}]",
            flagged.len(),
            flagged.join(", ")
        ),
    )
}

fn correlation() -> Outcome {
    let rows = leaderboard();
    let best = best_per_team(&rows, "Eval1");
    let x: Vec<f64> = best.iter().map(|r| r.haspi_like).collect();
    let y: Vec<f64> = best.iter().map(|r| r.hasqi_like).collect();
    let r = pearson(&x, &y).expect("pearson");
    let oracle = pearson_oracle(&x, &y);
    let names: Vec<&str> = best.iter().map(|r| r.entry.as_str()).collect();
    outcome(
        best.len() == 7 && (r - oracle).abs() < 1e-12 && (r - PUBLISHED_R).abs() <= R_TOL,
        format!(
            "r = {r:.4} (oracle {oracle:.4}) over {:?}, want {PUBLISHED_R} ± {R_TOL}",
            names
        ),
    )
}

struct Batch {
    renderer: Renderer,
    scenes: Vec<SceneSpec>,
    audiogram: Audiogram,
    metric: AuditoryConfig,
}

impl Batch {
    fn new() -> Self {
        let config = DatasetConfig::new(BATCH_SCENES, Fidelity::Simulated, BATCH_SEED);
        Self {
            renderer: Renderer::with_default_hrtfs(RATE).expect("renderer"),
            scenes: (0..BATCH_SCENES)
                .map(|i| random_scene(i, &config).expect("scene"))
                .collect(),
            audiogram: Audiogram::flat(40.0),
            metric: AuditoryConfig::default(),
        }
    }

    fn combined(&self, profile: &FidelityProfile) -> Vec<f64> {
        exec::map(Execution::Parallel, &self.scenes, |s| {
            let r = self.renderer.render(s, profile).expect("render");
            score_ears(&r.ears, &r.reference, &self.audiogram, &self.metric)
                .expect("score")
                .combined
        })
    }
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn collapse(batch: &Batch, sim: &[f64]) -> Outcome {
    let meas = batch.combined(&FidelityProfile::measured_like());
    let lower = sim.iter().zip(&meas).filter(|(s, m)| m < s).count();
    let frac = lower as f64 / sim.len() as f64;
    outcome(
        sim.len() >= 10 && mean(&meas) < mean(sim) && frac >= COLLAPSE_FRACTION,
        format!(
            "mean combined simulated {:.4}, measured_like {:.4}; lower in {lower}/{} scenes (need ≥ {:.0}%)",
            mean(sim),
            mean(&meas),
            sim.len(),
            COLLAPSE_FRACTION * 100.0
        ),
    )
}

fn ablation(batch: &Batch, sim: &[f64]) -> Outcome {
    let base = FidelityProfile::simulated();
    let meas = FidelityProfile::measured_like();
    let knobs = [
        ("order", base.clone().with_order(meas.order), true),
        (
            "noise",
            base.clone().with_transducer_noise(meas.transducer_noise_db),
            true,
        ),
        (
            "cardioid",
            base.clone()
                .with_interferer_directivity(meas.interferer_directivity),
            false,
        ),
        (
            "absorption",
            base.clone()
                .with_absorption_multiplier(meas.absorption_multiplier),
            false,
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, profile, strict) in knobs {
        let delta = mean(&batch.combined(&profile)) - mean(sim);
        ok &= if strict { delta < 0.0 } else { delta <= 0.0 };
        parts.push(format!("{name} {delta:+.5}"));
    }
    outcome(ok, format!("Δ mean combined: {}", parts.join(", ")))
}

fn rotation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_plane: f64 = 0.0;
    let mut worst_orth: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    let mut leaks = 0;
    let probe =
        SampleBuffer::mono(RATE, (0..64).map(|i| (0.37 * i as f64).sin()).collect()).unwrap();
    for _ in 0..100 {
        let az = rng.gen_range(-PI..PI);
        let el = rng.gen_range(-PI / 2.0..=PI / 2.0);
        let angle = rng.gen_range(-2.0 * PI..2.0 * PI);
        for order in 1..=6 {
            let rot = YawRotation::new(order, angle).unwrap();
            let field = encode(&probe, az, el, order).unwrap();
            let rotated = apply_rotation(&field, &rot).unwrap();
            let want = sh_eval(order, az + angle, el).unwrap();
            for (c, ch) in rotated.channels().iter().enumerate() {
                for (i, v) in ch.iter().enumerate() {
                    worst_plane = worst_plane.max((v - want[c] * probe.channel(0)[i]).abs());
                }
            }
            let m = rot.matrix();
            let k = channel_count(order);
            for i in 0..k {
                for j in 0..k {
                    let dot: f64 = (0..k).map(|n| m[(i, n)] * m[(j, n)]).sum();
                    worst_orth = worst_orth.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
                    if degree_of(i) != degree_of(j) && m[(i, j)] != 0.0 {
                        leaks += 1;
                    }
                }
            }
            for i in 0..field.frames() {
                let n0: f64 = field.channels().iter().map(|c| c[i] * c[i]).sum();
                let n1: f64 = rotated.channels().iter().map(|c| c[i] * c[i]).sum();
                worst_norm = worst_norm.max((n0.sqrt() - n1.sqrt()).abs());
            }
        }
    }
    outcome(
        worst_plane < ROTATION_TOL && worst_orth < ROTATION_TOL && worst_norm < ROTATION_TOL && leaks == 0,
        format!(
            "max plane-wave error {worst_plane:.1e}, max |RRᵀ−I| {worst_orth:.1e}, max norm change {worst_norm:.1e}, cross-degree entries {leaks}"
        ),
    )
}

fn room_rt60() -> Outcome {
    let room = RoomSpec::listening_room();
    let rir = image_source_rir(
        &room,
        &SourceSpec::omni([4.6, 3.9, 1.6]),
        [2.3, 2.5, 1.2],
        0,
        0.8,
        RATE,
    )
    .unwrap();
    let rt = schroeder_rt60(rir.signal.w(), RATE).unwrap();
    outcome(
        (RT60_WINDOW.0..=RT60_WINDOW.1).contains(&rt),
        format!(
            "T30 RT60 = {rt:.3} s (Sabine {:.3} s), want [{}, {}] s",
            room.sabine_rt60(),
            RT60_WINDOW.0,
            RT60_WINDOW.1
        ),
    )
}

fn prescription() -> Outcome {
    let measured = |levels: f64| -> Vec<(f64, f64, f64)> {
        let curve = nalr_gains(&Audiogram::flat(levels), Side::Left);
        let h = design_fir(&curve, 127, RATE).unwrap();
        AUDIOGRAM_FREQS
            .iter()
            .zip(curve.gains_db)
            .map(|(&f, g)| (f, g, 20.0 * fir_magnitude(&h, f, RATE).log10()))
            .collect()
    };
    // Independent arithmetic: X = 0.05·3·40 = 6, 6 + 0.31·40 + 1 = 19.4 at 1 kHz;
    // a zero audiogram leaves max(0, k_f), i.e. +1 dB at 1 kHz only.
    let oracle_flat40: [f64; 6] = [1.4, 10.4, 19.4, 17.4, 16.4, 16.4];
    let oracle_zero: [f64; 6] = [0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    let flat40 = measured(40.0);
    let zero = measured(0.0);
    let mut worst: f64 = 0.0;
    let mut ok = (flat40[2].2 - FLAT40_1K_DB).abs() <= NALR_TOL_DB
        && (zero[2].2 - ZERO_1K_DB).abs() <= NALR_TOL_DB;
    for (got, want) in [(&flat40, oracle_flat40), (&zero, oracle_zero)] {
        for ((_, g, m), w) in got.iter().zip(want) {
            ok &= (g - w).abs() < 1e-9;
            worst = worst.max((m - w).abs());
        }
    }
    ok &= worst <= NALR_TOL_DB;
    outcome(
        ok,
        format!(
            "1 kHz response: flat-40 {:.2} dB (want {FLAT40_1K_DB}), zero {:.2} dB (want {ZERO_1K_DB}); worst deviation over six frequencies {worst:.3} dB",
            flat40[2].2, zero[2].2
        ),
    )
}

fn metric_suite() -> Outcome {
    let config = AuditoryConfig::default();
    let normal = EarLevels::flat(0.0);
    let mono = |x: Vec<f64>| SampleBuffer::mono(RATE, x).unwrap();
    let both = |r: &SampleBuffer, p: &SampleBuffer| {
        (
            intelligibility_score(r, p, &normal, &config).unwrap(),
            quality_score(r, p, &normal, &config).unwrap(),
        )
    };
    let speech = speech_like(21, 2.5, RATE);
    let reference = mono(speech.clone());
    let mut problems = Vec::new();

    let id = both(&reference, &reference);
    if id.0 < IDENTITY_MIN || id.1 < IDENTITY_MIN {
        problems.push(format!("identity {id:?}"));
    }
    let silent = both(&reference, &mono(vec![0.0; speech.len()]));
    if silent != (0.0, 0.0) {
        problems.push(format!("silence {silent:?}"));
    }
    let noise = noise_like(5, 2.5, RATE);
    let mut ladder = Vec::new();
    for snr in [12.0, 6.0, 0.0, -6.0] {
        let g = 10f64.powf(-snr / 20.0);
        let p = mono(speech.iter().zip(&noise).map(|(a, b)| a + g * b).collect());
        ladder.push(both(&reference, &p));
    }
    if !ladder
        .windows(2)
        .all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1)
    {
        problems.push(format!("ladder not strictly decreasing {ladder:?}"));
    }
    let loud: Vec<f64> = speech.iter().map(|v| 10.0 * v).collect();
    let loud_ref = mono(loud.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let degraded: Vec<f64> = loud.iter().map(|a| a + rng.gen_range(-1.7..1.7)).collect();
    let base = both(&loud_ref, &mono(degraded.clone()));
    let mut worst_gain: f64 = 0.0;
    for db in [-20.0, -7.0, 10.0, 20.0] {
        let g = 10f64.powf(db / 20.0);
        let s = both(&loud_ref, &mono(degraded.iter().map(|v| v * g).collect()));
        worst_gain = worst_gain
            .max((s.0 - base.0).abs())
            .max((s.1 - base.1).abs());
    }
    if worst_gain >= GAIN_INVARIANCE_TOL {
        problems.push(format!("gain invariance error {worst_gain:.1e}"));
    }
    let ladder_text: Vec<String> = ladder
        .iter()
        .map(|(i, q)| format!("{i:.3}/{q:.3}"))
        .collect();
    outcome(
        problems.is_empty(),
        format!(
            "identity {:.4}/{:.4}, ladder {}, gain invariance {worst_gain:.1e}{}",
            id.0,
            id.1,
            ladder_text.join(" > "),
            if problems.is_empty() {
                String::new()
            } else {
                format!("; {}", problems.join("; "))
            }
        ),
    )
}

fn generate(out: &Path, threads: usize) -> Result<(), String> {
    let status = Command::new(BIN)
        .env("CLARITY_BENCH_THREADS", threads.to_string())
        .args([
            "generate",
            "--n",
            "4",
            "--seed",
            "77",
            "--fidelity",
            "measured_like",
            "--duration",
            "2",
            "--out",
        ])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&status.stderr).into_owned())
    }
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let max = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .max(4);
    let tmp = tempfile::tempdir().unwrap();
    let runs = [("a", max), ("b", max), ("c", 1)];
    let mut snaps = Vec::new();
    for (name, threads) in runs {
        let dir = tmp.path().join(name);
        if let Err(e) = generate(&dir, threads) {
            return outcome(
                false,
                format!("generate with {threads} threads failed: {e}"),
            );
        }
        snaps.push(snapshot(&dir));
    }
    let files = snaps[0].len();
    let wavs = snaps[0].iter().filter(|(n, _)| n.ends_with(".wav")).count();
    let has_manifest = snaps[0].iter().any(|(n, _)| n == "manifest.json");
    outcome(
        has_manifest && wavs == 8 && snaps[0] == snaps[1] && snaps[0] == snaps[2],
        format!(
            "{files} files ({wavs} WAVs, scene JSONs, manifest) byte-identical across two runs at {max} threads and one at 1 thread: {}",
            snaps[0] == snaps[1] && snaps[0] == snaps[2]
        ),
    )
}

fn direct_sum(x: &[f64], h: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len() + h.len() - 1];
    for n in 0..y.len() {
        let lo = n.saturating_sub(h.len() - 1);
        let hi = n.min(x.len() - 1);
        y[n] = (lo..=hi).map(|k| x[k] * h[n - k]).sum();
    }
    y
}

fn lattice_count(room: &RoomSpec, s: [f64; 3], l: [f64; 3], r: f64) -> usize {
    // Images at 2nL + s and 2nL − s along each axis.
    let axis = |a: usize| -> Vec<f64> {
        let len = room.dimensions[a];
        let n = (r / (2.0 * len)).ceil() as i64 + 2;
        (-n..=n)
            .flat_map(|k| [2.0 * k as f64 * len + s[a], 2.0 * k as f64 * len - s[a]])
            .collect()
    };
    let (xs, ys, zs) = (axis(0), axis(1), axis(2));
    let mut count = 0;
    for x in &xs {
        for y in &ys {
            for z in &zs {
                let d = ((x - l[0]).powi(2) + (y - l[1]).powi(2) + (z - l[2]).powi(2)).sqrt();
                if d <= r {
                    count += 1;
                }
            }
        }
    }
    count
}

fn w_rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

fn oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);

    let mut conv_worst: f64 = 0.0;
    for _ in 0..100 {
        let x: Vec<f64> = (0..rng.gen_range(1..4000))
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let kernels: Vec<Vec<f64>> = (0..rng.gen_range(1..4))
            .map(|_| {
                (0..rng.gen_range(1..700))
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect()
            })
            .collect();
        let fast = convolve_many(&x, &kernels).unwrap();
        for (k, y) in kernels.iter().zip(&fast) {
            let want = direct_sum(&x, k);
            assert_eq!(y.len(), want.len());
            for (a, b) in y.iter().zip(&want) {
                conv_worst = conv_worst.max((a - b).abs());
            }
        }
    }

    let mut count_mismatch = Vec::new();
    for i in 0..10 {
        let dims = [
            rng.gen_range(1.5..4.0),
            rng.gen_range(1.5..4.0),
            rng.gen_range(1.5..3.0),
        ];
        let room = RoomSpec::new(dims, 0.5).unwrap();
        let inside = |rng: &mut ChaCha8Rng| -> [f64; 3] {
            [0usize, 1, 2].map(|a| rng.gen_range(0.1 * dims[a]..0.9 * dims[a]))
        };
        let (s, l) = (inside(&mut rng), inside(&mut rng));
        let r = rng.gen_range(5.0..25.0);
        let (got, want) = (count_images(&room, s, l, r), lattice_count(&room, s, l, r));
        let rir = image_source_rir(
            &room,
            &SourceSpec::omni(s),
            l,
            1,
            r / room.speed_of_sound,
            RATE,
        )
        .unwrap();
        if got != want || rir.image_count != want {
            count_mismatch.push(format!("room {i}: {got}/{} vs {want}", rir.image_count));
        }
    }

    let mut snr_worst: f64 = 0.0;
    let frames = 8000;
    for case in 0..100u64 {
        let order = rng.gen_range(0..=3);
        let dir = |rng: &mut ChaCha8Rng| (rng.gen_range(-PI..PI), rng.gen_range(-0.5..0.5));
        let place = |x: Vec<f64>, (az, el): (f64, f64)| -> AmbiSignal {
            encode(
                &SampleBuffer::mono(RATE, x[..frames].to_vec()).unwrap(),
                az,
                el,
                order,
            )
            .unwrap()
        };
        let target = place(speech_like(case, 0.5, RATE), dir(&mut rng));
        let interferers: Vec<AmbiSignal> = (0..rng.gen_range(1..=3))
            .map(|k| {
                let seed = 1000 * case + k;
                let sig = match rng.gen_range(0..3) {
                    0 => speech_like(seed, 0.5, RATE),
                    1 => music_like(seed, 0.5, RATE),
                    _ => noise_like(seed, 0.5, RATE),
                };
                place(sig, dir(&mut rng))
            })
            .collect();
        let start = rng.gen_range(0..frames / 4);
        let end = rng.gen_range(frames / 2..frames);
        let snr = rng.gen_range(-6.0..6.0);
        let mixed = mix_at_snr(&target, &interferers, snr, start..end).unwrap();
        let residual: Vec<f64> = mixed.field.w()[start..end]
            .iter()
            .zip(&target.w()[start..end])
            .map(|(m, t)| m - t)
            .collect();
        let achieved = 20.0 * (w_rms(&target.w()[start..end]) / w_rms(&residual)).log10();
        snr_worst = snr_worst.max((achieved - snr).abs());
    }

    outcome(
        conv_worst < CONV_TOL && count_mismatch.is_empty() && snr_worst <= SNR_TOL_DB,
        format!(
            "convolution max error {conv_worst:.1e}; image counts {}; max SNR error {snr_worst:.1e} dB",
            if count_mismatch.is_empty() { "exact in 10 rooms".to_string() } else { count_mismatch.join(", ") }
        ),
    )
}

fn main() {
    let secs = Duration::from_secs;
    let mut results = vec![
        run(
            1,
            "leaderboard Ave arithmetic",
            secs(1),
            leaderboard_arithmetic,
        ),
        run(2, "best-per-team correlation", secs(1), correlation),
    ];

    let batch = Batch::new();
    let mut sim = Vec::new();
    results.push(run(3, "sim-to-real collapse", secs(300), || {
        sim = batch.combined(&FidelityProfile::simulated());
        collapse(&batch, &sim)
    }));
    results.push(run(4, "knob ablation", secs(600), || {
        ablation(&batch, &sim)
    }));

    results.push(run(5, "rotation correctness", secs(10), rotation));
    results.push(run(6, "listening-room RT60", secs(30), room_rt60));
    results.push(run(7, "NAL-R prescription", secs(5), prescription));
    results.push(run(8, "metric sanity", secs(60), metric_suite));
    results.push(run(9, "determinism", secs(120), determinism));
    results.push(run(10, "oracle equivalence", secs(60), oracles));

    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
