use std::collections::{BTreeMap, BTreeSet};

use crate::calibration::{project, CameraCalibration};
use crate::error::{Error, Result};
use crate::point::{CameraPoint, UnifiedPoint};

use super::quality_measure;

/// One timestamped center-of-mass measurement from one camera.
#[derive(Clone, Debug, PartialEq)]
pub struct Detection {
    pub camera_id: String,
    pub t: f64,
    pub pos_cam: CameraPoint,
    /// Local track id assigned by the camera's own body tracker.
    pub person_hint: Option<String>,
    /// Vertical coordinate, carried along untouched and never used in any computation.
    pub vertical: Option<f64>,
}

impl Detection {
    pub fn validate(&self) -> Result<()> {
        if !self.t.is_finite() {
            return Err(Error::invalid(format!("detection time {} is not finite", self.t)));
        }
        crate::point::ensure_finite(&self.pos_cam, "detection position")
    }
}

/// A measurement projected into the unified landmark, with its quality.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub pos: UnifiedPoint,
    pub quality: f64,
    pub source_camera: String,
}

/// A projected detection that still remembers its per-camera hint.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectedSample {
    pub person_hint: Option<String>,
    pub sample: Sample,
    pub vertical: Option<f64>,
}

pub fn project_detection(cal: &CameraCalibration, det: &Detection) -> Result<ProjectedSample> {
    det.validate()?;
    let pos = project(cal, det.pos_cam)?;
    Ok(ProjectedSample {
        person_hint: det.person_hint.clone(),
        sample: Sample {
            t: det.t,
            pos,
            quality: quality_measure(cal, pos)?,
            source_camera: det.camera_id.clone(),
        },
        vertical: det.vertical,
    })
}

/// A time-ordered trajectory attributed to one person hypothesis.
#[derive(Clone, Debug, PartialEq)]
pub struct Track {
    track_id: String,
    samples: Vec<Sample>,
    contributing_cameras: BTreeSet<String>,
    merged_from: Vec<String>,
}

impl Track {
    /// Builds a track, sorting samples by time. Fails on an empty track, a
    /// quality outside `[0, 1]`, non-finite values or a repeated timestamp
    /// within one camera.
    pub fn new(track_id: impl Into<String>, mut samples: Vec<Sample>) -> Result<Self> {
        let track_id = track_id.into();
        if samples.is_empty() {
            return Err(Error::invalid(format!("track '{track_id}' has no samples")));
        }
        for s in &samples {
            if !(s.t.is_finite() && s.pos.x.is_finite() && s.pos.y.is_finite()) {
                return Err(Error::invalid(format!("track '{track_id}' has a non-finite sample")));
            }
            if !(0.0..=1.0).contains(&s.quality) {
                return Err(Error::invalid(format!(
                    "track '{track_id}' has quality {} outside [0, 1]",
                    s.quality
                )));
            }
        }
        samples.sort_by(|a, b| a.t.total_cmp(&b.t));
        let mut last: BTreeMap<&str, f64> = BTreeMap::new();
        for s in &samples {
            if let Some(prev) = last.insert(&s.source_camera, s.t) {
                if prev >= s.t {
                    return Err(Error::invalid(format!(
                        "track '{track_id}' repeats t={} for camera '{}'",
                        s.t, s.source_camera
                    )));
                }
            }
        }
        let contributing_cameras = samples.iter().map(|s| s.source_camera.clone()).collect();
        Ok(Self {
            merged_from: vec![track_id.clone()],
            track_id,
            samples,
            contributing_cameras,
        })
    }

    pub(crate) fn fused(track_id: String, samples: Vec<Sample>, merged_from: Vec<String>) -> Result<Self> {
        let mut track = Self::new(track_id, samples)?;
        track.merged_from = merged_from;
        Ok(track)
    }

    pub fn track_id(&self) -> &str {
        &self.track_id
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn contributing_cameras(&self) -> &BTreeSet<String> {
        &self.contributing_cameras
    }

    /// Ids of the per-camera tracks fused into this one (itself when unmerged).
    pub fn merged_from(&self) -> &[String] {
        &self.merged_from
    }

    pub fn start(&self) -> f64 {
        self.samples[0].t
    }

    pub fn end(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    /// Copy of the track with every timestamp moved by `dt` seconds.
    pub fn shifted(&self, dt: f64) -> Track {
        let mut out = self.clone();
        for s in &mut out.samples {
            s.t += dt;
        }
        out
    }
}

/// Groups projected samples into one track per `(camera, hint)`.
///
/// Track ids are `"<camera>/<hint>"`, with `_` standing in for a missing hint.
/// A sample repeating an earlier timestamp of the same track is dropped; the
/// number of dropped samples is returned alongside the tracks.
pub fn tracks_from_samples(samples: &[ProjectedSample]) -> Result<(Vec<Track>, usize)> {
    let mut groups: BTreeMap<String, Vec<Sample>> = BTreeMap::new();
    for p in samples {
        let hint = p.person_hint.as_deref().unwrap_or("_");
        groups
            .entry(format!("{}/{}", p.sample.source_camera, hint))
            .or_default()
            .push(p.sample.clone());
    }
    let mut dropped = 0;
    let mut tracks = Vec::with_capacity(groups.len());
    for (id, mut group) in groups {
        group.sort_by(|a, b| a.t.total_cmp(&b.t));
        let before = group.len();
        group.dedup_by(|b, a| a.t == b.t);
        dropped += before - group.len();
        tracks.push(Track::new(id, group)?);
    }
    Ok((tracks, dropped))
}
