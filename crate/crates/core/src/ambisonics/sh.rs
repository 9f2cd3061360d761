use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Number of channels of an order-N field.
pub fn channel_count(order: usize) -> usize {
    (order + 1) * (order + 1)
}

/// ACN index of degree `l`, index `m` (−l ≤ m ≤ l).
pub fn acn(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// Degree ℓ of an ACN channel.
pub fn degree_of(acn: usize) -> usize {
    (acn as f64).sqrt().floor() as usize
}

/// A direction of arrival: azimuth counter-clockwise from +x, elevation up
/// from the horizontal plane, both in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub azimuth: f64,
    pub elevation: f64,
}

impl Direction {
    pub fn new(azimuth: f64, elevation: f64) -> Self {
        Self { azimuth, elevation }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (sa, ca) = self.azimuth.sin_cos();
        let (se, ce) = self.elevation.sin_cos();
        [ce * ca, ce * sa, se]
    }

    /// Direction of a non-zero vector.
    pub fn from_vector(v: [f64; 3]) -> Self {
        let horiz = v[0].hypot(v[1]);
        Self {
            azimuth: v[1].atan2(v[0]),
            elevation: v[2].atan2(horiz),
        }
    }
}

/// Real spherical harmonics up to `order`, ACN order, SN3D normalization,
/// without the Condon-Shortley phase.
pub fn sh_eval(order: usize, azimuth: f64, elevation: f64) -> Result<Vec<f64>> {
    if !(-FRAC_PI_2 - 1e-12..=FRAC_PI_2 + 1e-12).contains(&elevation) {
        return Err(Error::arg(format!(
            "elevation {elevation} outside [-pi/2, pi/2]"
        )));
    }
    let mut out = vec![0.0; channel_count(order)];
    let (sa, ca) = azimuth.sin_cos();
    ShBasis::new(order).eval_into(elevation.sin(), elevation.cos().max(0.0), ca, sa, &mut out);
    Ok(out)
}

/// Reusable spherical-harmonic evaluator for repeated calls at one order.
#[derive(Debug, Clone)]
pub struct ShBasis {
    order: usize,
    /// SN3D factor for each (l, m), indexed `l * (order + 1) + m`.
    norms: Vec<f64>,
    legendre: Vec<f64>,
}

impl ShBasis {
    pub fn new(order: usize) -> Self {
        let n = order + 1;
        let mut norms = vec![1.0; n * n];
        for l in 0..n {
            for m in 1..=l {
                let ratio: f64 = ((l - m + 1)..=(l + m)).map(|k| k as f64).product();
                norms[l * n + m] = (2.0 / ratio).sqrt();
            }
        }
        Self {
            order,
            norms,
            legendre: vec![0.0; n * n],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Harmonics toward a non-zero vector, written into `out`.
    pub fn eval_vector_into(&mut self, v: [f64; 3], out: &mut [f64]) {
        let h = v[0].hypot(v[1]);
        let r = h.hypot(v[2]);
        let (ca, sa) = if h > 0.0 {
            (v[0] / h, v[1] / h)
        } else {
            (1.0, 0.0)
        };
        self.eval_into(v[2] / r, h / r, ca, sa, out);
    }

    /// Harmonics from the sine and cosine of elevation and azimuth.
    fn eval_into(&mut self, se: f64, ce: f64, ca: f64, sa: f64, out: &mut [f64]) {
        let n = self.order + 1;
        let p = &mut self.legendre;
        // Associated Legendre P_l^m(sin el) for m >= 0.
        let mut pmm = 1.0;
        for m in 0..n {
            if m > 0 {
                pmm *= (2 * m - 1) as f64 * ce;
            }
            p[m * n + m] = pmm;
            if m + 1 < n {
                p[(m + 1) * n + m] = se * (2 * m + 1) as f64 * pmm;
            }
            for l in m + 2..n {
                p[l * n + m] = ((2 * l - 1) as f64 * se * p[(l - 1) * n + m]
                    - (l + m - 1) as f64 * p[(l - 2) * n + m])
                    / (l - m) as f64;
            }
        }
        for l in 0..n {
            out[l * l + l] = p[l * n];
        }
        // cos(m az), sin(m az) by angle addition.
        let (mut c, mut s) = (1.0, 0.0);
        for m in 1..n {
            (c, s) = (c * ca - s * sa, s * ca + c * sa);
            for l in m..n {
                let base = l * l + l;
                let v = self.norms[l * n + m] * p[l * n + m];
                out[base + m] = v * c;
                out[base - m] = v * s;
            }
        }
    }
}

pub fn sh_eval_dir(order: usize, dir: Direction) -> Result<Vec<f64>> {
    sh_eval(order, dir.azimuth, dir.elevation)
}
