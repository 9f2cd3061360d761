use super::{directivity_gain, dot, norm, sub, Directivity, RoomSpec, SourceSpec};
use crate::ambisonics::{channel_count, AmbiSignal, ShBasis};
use crate::{Error, Result};

/// One mirrored source of the image lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSource {
    pub position: [f64; 3],
    /// Lattice index per axis; `|index|` reflections on that axis.
    pub index: [i64; 3],
    pub distance: f64,
}

impl ImageSource {
    pub fn reflections(&self) -> u32 {
        self.index.iter().map(|i| i.unsigned_abs() as u32).sum()
    }

    /// Aim vector after mirroring: flipped on every axis with an odd
    /// reflection count.
    pub fn mirrored_aim(&self, aim: [f64; 3]) -> [f64; 3] {
        let mut a = aim;
        for (v, i) in a.iter_mut().zip(self.index) {
            if i.rem_euclid(2) == 1 {
                *v = -*v;
            }
        }
        a
    }
}

/// Image coordinate along one axis for lattice index `i`: even indices
/// translate the source, odd indices mirror it.
fn image_coord(i: i64, len: f64, s: f64) -> f64 {
    i as f64 * len + if i.rem_euclid(2) == 0 { s } else { len - s }
}

/// Every image source within `max_distance` of the listener, in lattice order.
pub fn image_sources(
    room: &RoomSpec,
    source: [f64; 3],
    listener: [f64; 3],
    max_distance: f64,
) -> Vec<ImageSource> {
    let range = |axis: usize| {
        let l = room.dimensions[axis];
        let lo = ((listener[axis] - max_distance) / l).floor() as i64 - 1;
        let hi = ((listener[axis] + max_distance) / l).ceil() as i64 + 1;
        lo..=hi
    };
    let mut out = Vec::new();
    for ix in range(0) {
        let x = image_coord(ix, room.dimensions[0], source[0]);
        let dx = x - listener[0];
        if dx.abs() > max_distance {
            continue;
        }
        for iy in range(1) {
            let y = image_coord(iy, room.dimensions[1], source[1]);
            let dy = y - listener[1];
            if dx * dx + dy * dy > max_distance * max_distance {
                continue;
            }
            for iz in range(2) {
                let z = image_coord(iz, room.dimensions[2], source[2]);
                let d = norm([dx, dy, z - listener[2]]);
                if d <= max_distance {
                    out.push(ImageSource {
                        position: [x, y, z],
                        index: [ix, iy, iz],
                        distance: d,
                    });
                }
            }
        }
    }
    out
}

pub fn count_images(
    room: &RoomSpec,
    source: [f64; 3],
    listener: [f64; 3],
    max_distance: f64,
) -> usize {
    image_sources(room, source, listener, max_distance).len()
}

/// An Ambisonic-domain room impulse response.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiRir {
    pub signal: AmbiSignal,
    pub time_limit: f64,
    pub image_count: usize,
}

/// Image-source impulse response with the direction of arrival of every
/// image encoded into `(order+1)^2` channels. Images arriving after
/// `time_limit` seconds are dropped.
pub fn image_source_rir(
    room: &RoomSpec,
    source: &SourceSpec,
    listener: [f64; 3],
    order: usize,
    time_limit: f64,
    rate: u32,
) -> Result<AmbiRir> {
    room.validate()?;
    if !room.contains(source.position) || !room.contains(listener) {
        return Err(Error::arg(
            "source and listener must lie strictly inside the room",
        ));
    }
    let direct = norm(sub(source.position, listener));
    if !(direct > 1e-9) {
        return Err(Error::arg("source coincides with the listener"));
    }
    let c = room.speed_of_sound;
    if !(time_limit > direct / c) {
        return Err(Error::arg(format!(
            "time limit {time_limit} s does not exceed the direct-path delay {:.4} s",
            direct / c
        )));
    }
    let aim = match (source.directivity, source.aim) {
        (Directivity::Omni, _) => [1.0, 0.0, 0.0],
        (Directivity::Cardioid, Some(a)) if norm(a) > 0.0 => {
            let n = norm(a);
            [a[0] / n, a[1] / n, a[2] / n]
        }
        (Directivity::Cardioid, _) => {
            return Err(Error::arg("cardioid source needs an aim vector"))
        }
    };

    let fs = rate as f64;
    let len = (time_limit * fs).round() as usize + 1;
    let k = channel_count(order);
    let mut channels = vec![vec![0.0; len]; k];
    let beta = room.reflection_coefficient();
    let mut basis = ShBasis::new(order);
    let mut y = vec![0.0; k];
    let images = image_sources(room, source.position, listener, c * time_limit);
    for img in &images {
        let d = img.distance;
        let emit = sub(listener, img.position);
        let gain = match source.directivity {
            Directivity::Omni => 1.0,
            Directivity::Cardioid => {
                let cos_psi = (dot(img.mirrored_aim(aim), emit) / d).clamp(-1.0, 1.0);
                directivity_gain(Directivity::Cardioid, cos_psi.acos())
            }
        };
        let amp = beta.powi(img.reflections() as i32) / d * gain;
        if amp == 0.0 {
            continue;
        }
        let n = (d / c * fs).round() as usize;
        basis.eval_vector_into(sub(img.position, listener), &mut y);
        for (ch, yc) in channels.iter_mut().zip(&y) {
            ch[n] += amp * yc;
        }
    }
    Ok(AmbiRir {
        signal: AmbiSignal::from_channels(order, rate, channels)?,
        time_limit,
        image_count: images.len(),
    })
}
