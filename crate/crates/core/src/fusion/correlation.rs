use crate::calibration::{quality_distance, CameraCalibration};
use crate::error::{Error, Result};
use crate::point::UnifiedPoint;

use super::{MergeConfig, Sample, Track};

/// Quality of a single projected measurement: 1 on the calibration geometry,
/// falling linearly to 0 at `d_max` away from it.
pub fn quality_measure(cal: &CameraCalibration, p: UnifiedPoint) -> Result<f64> {
    let d = quality_distance(cal, p)?;
    let d_max = cal.d_max();
    Ok(1.0 - d.min(d_max) / d_max)
}

/// Time-proximity quality of two samples `delta_t` seconds apart.
pub fn quality_time(delta_t: f64) -> Result<f64> {
    if !(delta_t.is_finite() && delta_t >= 0.0) {
        return Err(Error::invalid(format!(
            "delta_t must be finite and >= 0, got {delta_t}"
        )));
    }
    Ok(time_quality(delta_t))
}

fn time_quality(delta_t: f64) -> f64 {
    (1.0 - 2.0 * delta_t * delta_t).max(0.0)
}

/// Two samples from different cameras and their contribution to a correlation.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedSample {
    pub a: Sample,
    pub b: Sample,
    pub delta_t: f64,
    pub d: f64,
    /// `Q_i`, product of both measurement qualities and the time quality.
    pub quality: f64,
    /// `D_i = 1 - d²`; negative beyond one meter of disagreement.
    pub distance_factor: f64,
    /// `C_i = D_i * Q_i`.
    pub c: f64,
}

fn correlate(a: &Sample, b: &Sample) -> PairedSample {
    let delta_t = (a.t - b.t).abs();
    let d = a.pos.distance(&b.pos);
    let quality = a.quality * b.quality * time_quality(delta_t);
    let distance_factor = 1.0 - d * d;
    PairedSample {
        a: a.clone(),
        b: b.clone(),
        delta_t,
        d,
        quality,
        distance_factor,
        c: distance_factor * quality,
    }
}

pub fn sample_correlation(a: &Sample, b: &Sample) -> Result<PairedSample> {
    if a.source_camera == b.source_camera {
        return Err(Error::invalid(format!(
            "cannot correlate two samples from the same camera '{}'",
            a.source_camera
        )));
    }
    if !(a.t.is_finite() && b.t.is_finite()) {
        return Err(Error::invalid("sample times must be finite"));
    }
    Ok(correlate(a, b))
}

/// Index pairs `(i in ta, j in tb, delta_t)` chosen by the pairing rule.
///
/// Every sample of the shorter track (`ta` on equal length) is offered its
/// candidates in the other track within `max_pair_dt`; candidates are accepted
/// by ascending `delta_t`, ties going to the earlier `ta` sample, and no
/// sample is used twice. Pairs of samples from the same camera are skipped.
pub(crate) fn pair_indices(ta: &Track, tb: &Track, max_pair_dt: f64) -> Vec<(usize, usize, f64)> {
    let (a, b) = (ta.samples(), tb.samples());
    let a_is_short = a.len() <= b.len();
    let (short, long) = if a_is_short { (a, b) } else { (b, a) };

    let mut candidates = Vec::new();
    for (i, s) in short.iter().enumerate() {
        let lo = long.partition_point(|l| l.t < s.t - max_pair_dt);
        for (j, l) in long.iter().enumerate().skip(lo) {
            if l.t > s.t + max_pair_dt {
                break;
            }
            let dt = (s.t - l.t).abs();
            if dt <= max_pair_dt && s.source_camera != l.source_camera {
                let (ia, ib) = if a_is_short { (i, j) } else { (j, i) };
                candidates.push((ia, ib, dt));
            }
        }
    }
    candidates.sort_by(|x, y| {
        x.2.total_cmp(&y.2)
            .then(a[x.0].t.total_cmp(&a[y.0].t))
            .then(b[x.1].t.total_cmp(&b[y.1].t))
    });

    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut chosen = Vec::new();
    for (ia, ib, dt) in candidates {
        if !used_a[ia] && !used_b[ib] {
            used_a[ia] = true;
            used_b[ib] = true;
            chosen.push((ia, ib, dt));
        }
    }
    chosen.sort_by_key(|&(ia, _, _)| ia);
    chosen
}

/// Pairs the samples of two tracks (see the pairing rule on [`trajectory_correlation`]).
pub fn pair_samples(ta: &Track, tb: &Track, cfg: &MergeConfig) -> Vec<PairedSample> {
    pair_indices(ta, tb, cfg.max_pair_dt)
        .into_iter()
        .map(|(i, j, _)| correlate(&ta.samples()[i], &tb.samples()[j]))
        .collect()
}

/// Correlation of two trajectories with every paired sample behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationReport {
    pub track_a: String,
    pub track_b: String,
    pub c: f64,
    pub pairs: Vec<PairedSample>,
}

impl CorrelationReport {
    pub fn n_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// `C / n_pairs`, for diagnostics only; 0 without pairs.
    pub fn mean_c(&self) -> f64 {
        if self.pairs.is_empty() {
            0.0
        } else {
            self.c / self.pairs.len() as f64
        }
    }
}

/// Sums `C_i` over the paired samples of two tracks.
///
/// Pairing walks the shorter track and matches each of its samples to the
/// nearest-in-time free sample of the other track within `max_pair_dt`, so
/// the result is only guaranteed symmetric for tracks of equal length.
pub fn trajectory_correlation(ta: &Track, tb: &Track, cfg: &MergeConfig) -> CorrelationReport {
    let pairs = pair_samples(ta, tb, cfg);
    CorrelationReport {
        track_a: ta.track_id().to_string(),
        track_b: tb.track_id().to_string(),
        c: pairs.iter().map(|p| p.c).sum(),
        pairs,
    }
}
