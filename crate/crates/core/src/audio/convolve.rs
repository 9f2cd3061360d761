use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::SampleBuffer;
use crate::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(len), p.plan_fft_inverse(len))
    })
}

/// Direct `O(nm)` linear convolution.
pub fn convolve_direct(x: &[f64], h: &[f64]) -> Vec<f64> {
    if x.is_empty() || h.is_empty() {
        return Vec::new();
    }
    let mut y = vec![0.0; x.len() + h.len() - 1];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        for (yk, &hj) in y[i..i + h.len()].iter_mut().zip(h) {
            *yk += xi * hj;
        }
    }
    y
}

fn prefer_direct(n: usize, m: usize) -> bool {
    let nfft = (n + m - 1).next_power_of_two();
    let log = nfft.trailing_zeros().max(1) as usize;
    n.min(m) <= 8 || n * m <= 16 * nfft * log
}

fn to_spectrum(x: &[f64], nfft: usize, fwd: &dyn Fft<f64>) -> Vec<Complex<f64>> {
    let mut buf = vec![Complex::new(0.0, 0.0); nfft];
    for (b, &v) in buf.iter_mut().zip(x) {
        b.re = v;
    }
    fwd.process(&mut buf);
    buf
}

/// Full linear convolution of two sequences (length `n + m - 1`). Picks direct
/// summation or FFT multiplication by size.
pub fn convolve_slices(x: &[f64], h: &[f64]) -> Result<Vec<f64>> {
    if x.is_empty() || h.is_empty() {
        return Err(Error::arg("convolution of an empty sequence"));
    }
    if prefer_direct(x.len(), h.len()) {
        return Ok(convolve_direct(x, h));
    }
    let mut out = convolve_many(x, &[h])?;
    Ok(out.pop().unwrap())
}

/// Convolves one signal with several kernels, sharing the signal transform.
/// Kernels are processed in pairs packed into the real and imaginary parts of
/// one complex transform.
pub fn convolve_many<K: AsRef<[f64]>>(x: &[f64], kernels: &[K]) -> Result<Vec<Vec<f64>>> {
    if x.is_empty() || kernels.iter().any(|k| k.as_ref().is_empty()) {
        return Err(Error::arg("convolution of an empty sequence"));
    }
    let Some(max_m) = kernels.iter().map(|k| k.as_ref().len()).max() else {
        return Ok(Vec::new());
    };
    if prefer_direct(x.len(), max_m) {
        return Ok(kernels
            .iter()
            .map(|k| convolve_direct(x, k.as_ref()))
            .collect());
    }
    let nfft = (x.len() + max_m - 1).next_power_of_two();
    let (fwd, inv) = plan(nfft);
    let xs = to_spectrum(x, nfft, fwd.as_ref());
    let scale = 1.0 / nfft as f64;
    let mut out = Vec::with_capacity(kernels.len());
    let mut buf = vec![Complex::new(0.0, 0.0); nfft];
    for pair in kernels.chunks(2) {
        buf.iter_mut().for_each(|b| *b = Complex::new(0.0, 0.0));
        for (b, &v) in buf.iter_mut().zip(pair[0].as_ref()) {
            b.re = v;
        }
        if let Some(second) = pair.get(1) {
            for (b, &v) in buf.iter_mut().zip(second.as_ref()) {
                b.im = v;
            }
        }
        fwd.process(&mut buf);
        for (b, xv) in buf.iter_mut().zip(&xs) {
            *b *= xv;
        }
        inv.process(&mut buf);
        for (i, k) in pair.iter().enumerate() {
            let len = x.len() + k.as_ref().len() - 1;
            out.push(
                buf[..len]
                    .iter()
                    .map(|c| if i == 0 { c.re } else { c.im } * scale)
                    .collect(),
            );
        }
    }
    Ok(out)
}

/// Convolves a mono buffer with an impulse response.
pub fn convolve(signal: &SampleBuffer, kernel: &[f64]) -> Result<SampleBuffer> {
    signal.expect_channels(1, "convolve")?;
    let y = convolve_slices(signal.channel(0), kernel)?;
    SampleBuffer::mono(signal.rate(), y)
}
