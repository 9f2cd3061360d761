//! Audiogram-aware objective scoring: an envelope-correlation
//! intelligibility surrogate, a quality surrogate adding a long-term spectral
//! penalty, and their mean.

mod align;
mod filterbank;
mod score;

pub use align::{align, apply_alignment, Alignment, LOW_CONFIDENCE};
pub use filterbank::{
    center_frequencies, envelope, erb, gammatone_bands, gammatone_bandwidth, AuditoryConfig,
};
pub use score::{
    better_ear, combined_score, intelligibility_score, quality_breakdown, quality_score,
    MetricScore, QualityBreakdown,
};
