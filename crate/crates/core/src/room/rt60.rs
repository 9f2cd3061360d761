use crate::{Error, Result};

/// Backward-integrated energy decay curve in dB re its start.
pub fn energy_decay_curve(rir: &[f64]) -> Result<Vec<f64>> {
    let mut acc = 0.0;
    let mut edc: Vec<f64> = rir
        .iter()
        .rev()
        .map(|v| {
            acc += v * v;
            acc
        })
        .collect();
    edc.reverse();
    let total = edc.first().copied().unwrap_or(0.0);
    if !(total > 0.0) {
        return Err(Error::arg("impulse response is silent"));
    }
    Ok(edc.iter().map(|e| 10.0 * (e / total).log10()).collect())
}

/// T30-based RT60: least-squares line through the decay curve between −5 dB
/// and −35 dB, extrapolated to 60 dB.
pub fn schroeder_rt60(rir: &[f64], rate: u32) -> Result<f64> {
    let edc = energy_decay_curve(rir)?;
    let start = edc
        .iter()
        .position(|&v| v <= -5.0)
        .ok_or_else(|| Error::InsufficientDecay("never decays by 5 dB".into()))?;
    let end = edc
        .iter()
        .position(|&v| v <= -35.0)
        .ok_or_else(|| Error::InsufficientDecay("never decays by 35 dB".into()))?;
    if end <= start + 1 {
        return Err(Error::InsufficientDecay(
            "decay segment too short to fit".into(),
        ));
    }
    let n = (end - start + 1) as f64;
    let ts = (start..=end).map(|i| i as f64 / rate as f64);
    let mean_t = ts.clone().sum::<f64>() / n;
    let mean_v = edc[start..=end].iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, &v) in ts.zip(&edc[start..=end]) {
        sxy += (t - mean_t) * (v - mean_v);
        sxx += (t - mean_t) * (t - mean_t);
    }
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(Error::InsufficientDecay("non-decaying fit".into()));
    }
    Ok(-60.0 / slope)
}
