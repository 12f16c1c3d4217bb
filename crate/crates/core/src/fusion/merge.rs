use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::point::UnifiedPoint;

use super::correlation::pair_indices;
use super::{MergeConfig, Sample, Track, TrackMatch};

/// Fuses matched tracks into one track per person hypothesis.
///
/// Matches are closed transitively. Inside each group, tracks are folded in
/// breadth-first order along the matches: paired samples collapse into one
/// sample at the earlier timestamp, positioned at the quality-weighted mean of
/// the two, and unpaired samples pass through. Unmatched tracks come out
/// unchanged. Output order follows the first member of each group in `tracks`.
pub fn merge_tracks(tracks: &[Track], matches: &[TrackMatch], cfg: &MergeConfig) -> Result<Vec<Track>> {
    let index: HashMap<&str, usize> = tracks.iter().enumerate().map(|(i, t)| (t.track_id(), i)).collect();
    let lookup = |id: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| Error::invalid(format!("match refers to unknown track '{id}'")))
    };

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); tracks.len()];
    for m in matches {
        let (a, b) = (lookup(&m.track_a)?, lookup(&m.track_b)?);
        adjacency[a].push(b);
        adjacency[b].push(a);
    }

    let mut seen = vec![false; tracks.len()];
    let mut fused = Vec::new();
    for root in 0..tracks.len() {
        if seen[root] {
            continue;
        }
        let mut order = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &j in &adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }

        let mut cameras: BTreeSet<&str> = BTreeSet::new();
        for &i in &order {
            for cam in tracks[i].contributing_cameras() {
                if !cameras.insert(cam) {
                    let ids: Vec<_> = order.iter().map(|&k| tracks[k].track_id()).collect();
                    return Err(Error::ConflictingMatch(format!(
                        "tracks [{}] would merge two tracks of camera '{cam}'",
                        ids.join(", ")
                    )));
                }
            }
        }

        let mut acc = tracks[order[0]].clone();
        for &i in &order[1..] {
            acc = fuse_pair(&acc, &tracks[i], cfg)?;
        }
        fused.push(acc);
    }
    Ok(fused)
}

fn weighted_mean(a: &Sample, b: &Sample) -> UnifiedPoint {
    let w = a.quality + b.quality;
    if w > 0.0 {
        UnifiedPoint::new(
            (a.quality * a.pos.x + b.quality * b.pos.x) / w,
            (a.quality * a.pos.y + b.quality * b.pos.y) / w,
        )
    } else {
        UnifiedPoint::new((a.pos.x + b.pos.x) / 2.0, (a.pos.y + b.pos.y) / 2.0)
    }
}

fn fuse_pair(a: &Track, b: &Track, cfg: &MergeConfig) -> Result<Track> {
    let pairs = pair_indices(a, b, cfg.max_pair_dt);
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut samples = Vec::with_capacity(a.len() + b.len() - pairs.len());
    for &(i, j, _) in &pairs {
        used_a[i] = true;
        used_b[j] = true;
        let (sa, sb) = (&a.samples()[i], &b.samples()[j]);
        let earlier = if sb.t < sa.t { sb } else { sa };
        samples.push(Sample {
            t: earlier.t,
            pos: weighted_mean(sa, sb),
            quality: sa.quality.max(sb.quality),
            source_camera: earlier.source_camera.clone(),
        });
    }
    samples.extend(
        a.samples()
            .iter()
            .zip(&used_a)
            .filter(|(_, &u)| !u)
            .map(|(s, _)| s.clone()),
    );
    samples.extend(
        b.samples()
            .iter()
            .zip(&used_b)
            .filter(|(_, &u)| !u)
            .map(|(s, _)| s.clone()),
    );

    let mut merged_from: Vec<String> = a.merged_from().iter().chain(b.merged_from()).cloned().collect();
    merged_from.sort();
    Track::fused(merged_from.join("+"), samples, merged_from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn track(id: &str, cam: &str, pts: &[(f64, f64, f64, f64)]) -> Track {
        Track::new(
            id,
            pts.iter()
                .map(|&(t, x, y, q)| Sample {
                    t,
                    pos: UnifiedPoint::new(x, y),
                    quality: q,
                    source_camera: cam.into(),
                })
                .collect(),
        )
        .unwrap()
    }

    fn m(a: &str, b: &str) -> TrackMatch {
        TrackMatch {
            track_a: a.into(),
            track_b: b.into(),
            c: 10.0,
        }
    }

    #[test]
    fn identical_overlap_is_preserved() {
        let pts = [(0.0, 1.0, 1.0, 0.8), (0.1, 1.1, 1.0, 0.6), (0.2, 1.2, 1.0, 0.9)];
        let a = track("K1/w", "K1", &pts);
        let b = track("K2/w", "K2", &pts);
        let out = merge_tracks(&[a.clone(), b], &[m("K1/w", "K2/w")], &MergeConfig::default()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].track_id(), "K1/w+K2/w");
        assert_eq!(out[0].len(), 3);
        for (f, s) in out[0].samples().iter().zip(a.samples()) {
            assert_eq!(f.t, s.t);
            assert!(f.pos.distance(&s.pos) < 1e-12);
        }
    }

    #[test]
    fn zero_weight_side_is_ignored() {
        let a = track("a", "K1", &[(0.0, 1.0, 2.0, 1.0)]);
        let b = track("b", "K2", &[(0.05, 3.0, 4.0, 0.0)]);
        let out = merge_tracks(&[a, b], &[m("a", "b")], &MergeConfig::default()).unwrap();
        assert_eq!(out[0].samples()[0].pos, UnifiedPoint::new(1.0, 2.0));
        assert_eq!(out[0].samples()[0].t, 0.0);
    }

    #[test]
    fn passthrough_outside_overlap() {
        let a = track(
            "a",
            "K1",
            &[(0.0, 0.0, 0.0, 1.0), (1.0, 1.0, 0.0, 1.0), (2.0, 2.0, 0.0, 1.0)],
        );
        let b = track(
            "b",
            "K2",
            &[(2.0, 2.0, 0.0, 1.0), (3.0, 3.0, 0.0, 1.0), (4.0, 4.0, 0.0, 1.0)],
        );
        let out = merge_tracks(&[a, b], &[m("a", "b")], &MergeConfig::default()).unwrap();
        let times: Vec<f64> = out[0].samples().iter().map(|s| s.t).collect();
        assert_eq!(times, [0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(out[0].contributing_cameras().len(), 2);
    }

    #[test]
    fn unmatched_tracks_pass_through() {
        let a = track("a", "K1", &[(0.0, 0.0, 0.0, 1.0)]);
        let b = track("b", "K2", &[(0.0, 5.0, 0.0, 1.0)]);
        let out = merge_tracks(&[a.clone(), b.clone()], &[], &MergeConfig::default()).unwrap();
        assert_eq!(out, [a, b]);
    }

    #[test]
    fn transitive_closure_conflict() {
        let a1 = track("K1/a", "K1", &[(0.0, 0.0, 0.0, 1.0)]);
        let a2 = track("K1/b", "K1", &[(0.0, 0.0, 0.0, 1.0)]);
        let b = track("K2/a", "K2", &[(0.0, 0.0, 0.0, 1.0)]);
        let err = merge_tracks(
            &[a1, a2, b],
            &[m("K1/a", "K2/a"), m("K2/a", "K1/b")],
            &MergeConfig::default(),
        );
        assert!(matches!(err, Err(Error::ConflictingMatch(_))));
    }

    #[test]
    fn three_cameras_chain() {
        let a = track("a", "K1", &[(0.0, 0.0, 0.0, 1.0), (1.0, 1.0, 0.0, 1.0)]);
        let b = track("b", "K2", &[(1.0, 1.0, 0.0, 1.0), (2.0, 2.0, 0.0, 1.0)]);
        let c = track("c", "K3", &[(2.0, 2.0, 0.0, 1.0), (3.0, 3.0, 0.0, 1.0)]);
        let out = merge_tracks(&[a, b, c], &[m("a", "b"), m("b", "c")], &MergeConfig::default()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].len(), 4);
        assert_eq!(out[0].merged_from(), ["a", "b", "c"]);
    }

    #[test]
    fn unknown_track_in_match() {
        let a = track("a", "K1", &[(0.0, 0.0, 0.0, 1.0)]);
        assert!(merge_tracks(&[a], &[m("a", "zz")], &MergeConfig::default()).is_err());
    }
}
