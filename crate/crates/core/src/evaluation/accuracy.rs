use std::collections::BTreeMap;

use crate::error::Result;
use crate::fusion::{MergeConfig, Track};
use crate::pipeline::{run_pipeline, PipelineRun};
use crate::simulator::Scenario;

/// Share of a fused track's samples its dominant walker must own.
pub const PURITY: f64 = 0.95;

/// Per-track purity of one pipeline run.
#[derive(Clone, Debug)]
pub struct AccuracyReport {
    /// Fraction of fused tracks with purity >= 95%.
    pub accuracy: f64,
    /// `(fused track id, dominant walker, purity)`.
    pub tracks: Vec<(String, String, f64)>,
    /// Number of peerings accepted.
    pub matches: usize,
}

fn walker_of(track_id: &str) -> &str {
    track_id.split_once('/').map_or(track_id, |(_, hint)| hint)
}

fn purity(fused: &Track, originals: &BTreeMap<&str, &Track>) -> (String, f64) {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for id in fused.merged_from() {
        *counts.entry(walker_of(id)).or_default() += originals[id.as_str()].len();
    }
    let total: usize = counts.values().sum();
    let (walker, best) = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(w, c)| (w.to_string(), *c))
        .unwrap_or_default();
    (walker, best as f64 / total.max(1) as f64)
}

fn report(run: &PipelineRun) -> AccuracyReport {
    let originals: BTreeMap<&str, &Track> = run
        .tracks_by_camera
        .values()
        .flatten()
        .map(|t| (t.track_id(), t))
        .collect();
    let tracks: Vec<_> = run
        .fused
        .iter()
        .map(|f| {
            let (walker, p) = purity(f, &originals);
            (f.track_id().to_string(), walker, p)
        })
        .collect();
    let good = tracks.iter().filter(|(_, _, p)| *p >= PURITY).count();
    AccuracyReport {
        accuracy: if tracks.is_empty() {
            1.0
        } else {
            good as f64 / tracks.len() as f64
        },
        tracks,
        matches: run.outcome.matches.len(),
    }
}

/// Runs the full pipeline and reports the purity of every fused track.
///
/// Simulated detections carry their walker id as person hint, so each
/// per-camera track belongs to one walker and a fused track is impure only
/// when tracks of different walkers were peered.
pub fn matching_report(sc: &Scenario, cfg: &MergeConfig) -> Result<AccuracyReport> {
    Ok(report(&run_pipeline(sc, cfg)?))
}

pub fn matching_accuracy(sc: &Scenario, cfg: &MergeConfig) -> Result<f64> {
    Ok(matching_report(sc, cfg)?.accuracy)
}

/// Correlations of every cross-camera candidate, split by whether both
/// tracks follow the same walker: `(same, different)`.
pub fn labelled_correlations(sc: &Scenario, cfg: &MergeConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let run = run_pipeline(sc, cfg)?;
    let (mut same, mut different) = (Vec::new(), Vec::new());
    for r in &run.outcome.reports {
        if walker_of(&r.track_a) == walker_of(&r.track_b) {
            same.push(r.c);
        } else {
            different.push(r.c);
        }
    }
    Ok((same, different))
}

/// Threshold separating same-person from different-person correlations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdSuggestion {
    pub threshold: f64,
    /// Distance from the threshold to the closest correlation on either side.
    pub margin: f64,
    /// Correlations left on the wrong side.
    pub errors: usize,
}

/// Sweeps thresholds between observed correlations and keeps the one with the
/// fewest misclassifications, then the widest margin. Same-person pairs must
/// reach the threshold; different-person pairs must fall below it.
pub fn suggest_threshold(same: &[f64], different: &[f64]) -> Option<ThresholdSuggestion> {
    let mut values: Vec<f64> = same.iter().chain(different).copied().collect();
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mut cuts = Vec::with_capacity(values.len() + 1);
    cuts.push(values[0] - 1.0);
    cuts.extend(values.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    cuts.push(values[values.len() - 1] + 1.0);

    cuts.into_iter()
        .map(|threshold| {
            let errors =
                same.iter().filter(|&&c| c < threshold).count() + different.iter().filter(|&&c| c >= threshold).count();
            let margin = values
                .iter()
                .map(|v| (v - threshold).abs())
                .fold(f64::INFINITY, f64::min);
            ThresholdSuggestion {
                threshold,
                margin,
                errors,
            }
        })
        .min_by(|a, b| a.errors.cmp(&b.errors).then(b.margin.total_cmp(&a.margin)))
}
