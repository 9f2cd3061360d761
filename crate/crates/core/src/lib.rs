//! Desk-scale evaluation pipeline for hearing-aid speech enhancement.
//!
//! Noisy domestic scenes are simulated as Ambisonic sound fields (image-source
//! rooms, head rotation in the spherical-harmonic domain), rendered to the two
//! ear signals through a spherical-head HRTF set, amplified by a fixed NAL-R
//! prescription and scored with audiogram-aware intelligibility and quality
//! surrogates.
//!
//! Two fidelity profiles are provided: `simulated` (sixth-order Ambisonics,
//! omnidirectional interferers, no microphone self-noise) and `measured_like`
//! (first-order, loudspeaker-like cardioid interferers, transducer noise and a
//! perturbed room). Each difference is an individually toggleable knob.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ambisonics;
pub mod audio;
pub mod error;
pub mod exec;
pub mod harness;
pub mod hearing_aid;
pub mod hrtf;
pub mod metrics;
pub mod room;
pub mod scenes;
pub mod stats;

pub use error::{Error, Result};

/// Default pipeline sample rate in Hz.
pub const DEFAULT_RATE: u32 = 16_000;
