use std::collections::{BTreeMap, HashSet};

use super::{trajectory_correlation, CorrelationReport, MergeConfig, Track};

/// One cross-camera track pair and its correlation, as seen by the peering step.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub track_a: String,
    pub camera_a: String,
    pub track_b: String,
    pub camera_b: String,
    pub c: f64,
}

/// Outcome of the peering step for one candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Matched,
    BelowThreshold,
    /// Above threshold, but one of its tracks was already peered with a
    /// higher-correlation track of the same camera.
    Superseded,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::Matched => "matched",
            Decision::BelowThreshold => "below_threshold",
            Decision::Superseded => "superseded",
        }
    }
}

/// An accepted peering.
#[derive(Clone, Debug, PartialEq)]
pub struct TrackMatch {
    pub track_a: String,
    pub track_b: String,
    pub c: f64,
}

/// Greedy peering: candidates under `threshold` are dropped, the rest are
/// accepted by descending correlation as long as neither track is already
/// peered with a track of the other's camera. Returns one decision per
/// candidate, in input order.
pub fn select_matches(candidates: &[Candidate], threshold: f64) -> Vec<Decision> {
    let mut decisions = vec![Decision::BelowThreshold; candidates.len()];
    let mut order: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].c >= threshold)
        .collect();
    order.sort_by(|&i, &j| {
        let (x, y) = (&candidates[i], &candidates[j]);
        y.c.total_cmp(&x.c)
            .then_with(|| x.track_a.cmp(&y.track_a))
            .then_with(|| x.track_b.cmp(&y.track_b))
    });
    // (track, camera of its partner)
    let mut taken: HashSet<(&str, &str)> = HashSet::new();
    for i in order {
        let cand = &candidates[i];
        let ka = (cand.track_a.as_str(), cand.camera_b.as_str());
        let kb = (cand.track_b.as_str(), cand.camera_a.as_str());
        if taken.contains(&ka) || taken.contains(&kb) {
            decisions[i] = Decision::Superseded;
        } else {
            taken.insert(ka);
            taken.insert(kb);
            decisions[i] = Decision::Matched;
        }
    }
    decisions
}

/// Every candidate report with its decision, and the accepted matches.
#[derive(Clone, Debug, Default)]
pub struct MatchOutcome {
    pub reports: Vec<CorrelationReport>,
    pub decisions: Vec<Decision>,
    pub matches: Vec<TrackMatch>,
}

/// Scores every cross-camera track pair and peers them greedily.
///
/// Cameras are visited in key order; fewer than two cameras yields no
/// candidates.
pub fn match_tracks(tracks_by_camera: &BTreeMap<String, Vec<Track>>, cfg: &MergeConfig) -> MatchOutcome {
    let cameras: Vec<&String> = tracks_by_camera.keys().collect();
    let mut reports = Vec::new();
    let mut candidates = Vec::new();
    for (ci, cam_a) in cameras.iter().enumerate() {
        for cam_b in &cameras[ci + 1..] {
            for ta in &tracks_by_camera[*cam_a] {
                for tb in &tracks_by_camera[*cam_b] {
                    let report = trajectory_correlation(ta, tb, cfg);
                    candidates.push(Candidate {
                        track_a: ta.track_id().to_string(),
                        camera_a: (*cam_a).clone(),
                        track_b: tb.track_id().to_string(),
                        camera_b: (*cam_b).clone(),
                        c: report.c,
                    });
                    reports.push(report);
                }
            }
        }
    }
    let decisions = select_matches(&candidates, cfg.threshold);
    let matches = candidates
        .iter()
        .zip(&decisions)
        .filter(|(_, d)| **d == Decision::Matched)
        .map(|(c, _)| TrackMatch {
            track_a: c.track_a.clone(),
            track_b: c.track_b.clone(),
            c: c.c,
        })
        .collect();
    MatchOutcome {
        reports,
        decisions,
        matches,
    }
}
