//! Cross-camera trajectory scoring, peering and merging.
//!
//! Every paired pair of samples contributes `C_i = D_i * Q_i` where
//! `D_i = 1 - d²` penalises disagreement in position and `Q_i` multiplies the
//! two measurement qualities with a time-proximity term. A trajectory
//! correlation is the plain sum of the `C_i`; pairs below a threshold are
//! discarded and the remaining ones are accepted greedily from the highest
//! correlation down.

mod correlation;
mod matching;
mod merge;
mod track;

pub use correlation::{
    pair_samples, quality_measure, quality_time, sample_correlation, trajectory_correlation, CorrelationReport,
    PairedSample,
};
pub use matching::{match_tracks, select_matches, Candidate, Decision, MatchOutcome, TrackMatch};
pub use merge::merge_tracks;
pub use track::{project_detection, tracks_from_samples, Detection, ProjectedSample, Sample, Track};

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::calibration::DEFAULT_D_MAX;
use crate::error::{Error, Result};

/// Correlation below which two trajectories are never peered.
pub const DEFAULT_THRESHOLD: f64 = 5.0;

/// Tunables for pairing, peering and merging.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MergeConfig {
    pub threshold: f64,
    /// Largest time gap between two paired samples; `1/sqrt(2)` s is where the
    /// time quality reaches zero.
    pub max_pair_dt: f64,
    pub d_max: f64,
}

impl Default for MergeConfig {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            max_pair_dt: FRAC_1_SQRT_2,
            d_max: DEFAULT_D_MAX,
        }
    }
}

impl MergeConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.threshold.is_finite() {
            return Err(Error::invalid("merge threshold must be finite"));
        }
        if !(self.max_pair_dt.is_finite() && self.max_pair_dt > 0.0) {
            return Err(Error::invalid("max_pair_dt must be positive"));
        }
        if !(self.d_max.is_finite() && self.d_max > 0.0) {
            return Err(Error::invalid("d_max must be positive"));
        }
        Ok(())
    }
}
