//! Per-camera affine projection into the unified landmark.
//!
//! A depth camera reports people as `(x_cam, z_cam)` once the vertical axis is
//! dropped. Three positions known in both frames fix the six coefficients of
//!
//! ```text
//! x = a1 * x_cam + a2 * z_cam + a3
//! y = b1 * x_cam + b2 * z_cam + b3
//! ```
//!
//! The wider the camera-frame triangle spanned by the three calibration points,
//! the smaller the worst-case projection error, so [`select_calibration_set`]
//! ranks candidate triples by area.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{ensure_finite, planar_distance, CameraPoint, Planar, UnifiedPoint};

/// Camera-frame triangles with a smaller area (m²) are treated as collinear.
pub const DEGENERACY_AREA: f64 = 1e-6;

/// Default saturation distance of the measurement quality, in meters.
pub const DEFAULT_D_MAX: f64 = 2.0;

/// Residual allowed when re-projecting the calibration points themselves.
pub const NODE_TOLERANCE: f64 = 1e-9;

/// One position known in both the camera frame and the unified landmark.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPair {
    pub cam: CameraPoint,
    pub unified: UnifiedPoint,
    #[serde(default)]
    pub label: String,
}

impl CalibrationPair {
    pub fn new(cam: CameraPoint, unified: UnifiedPoint, label: impl Into<String>) -> Self {
        Self {
            cam,
            unified,
            label: label.into(),
        }
    }
}

/// Which anchors the measurement-quality distance is measured against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceAnchors {
    /// Nearest of the three calibration points and their barycenter.
    #[default]
    PointsAndBarycenter,
    /// The barycenter alone.
    BarycenterOnly,
}

/// A solved affine projection for one camera. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct CameraCalibration {
    camera_id: String,
    alpha: [f64; 3],
    beta: [f64; 3],
    points: [CalibrationPair; 3],
    barycenter: UnifiedPoint,
    d_max: f64,
    anchors: DistanceAnchors,
}

impl CameraCalibration {
    pub fn camera_id(&self) -> &str {
        &self.camera_id
    }

    /// Coefficients of the `x` equation: `(a1, a2, a3)`.
    pub fn alpha(&self) -> [f64; 3] {
        self.alpha
    }

    /// Coefficients of the `y` equation: `(b1, b2, b3)`.
    pub fn beta(&self) -> [f64; 3] {
        self.beta
    }

    pub fn calibration_points(&self) -> &[CalibrationPair; 3] {
        &self.points
    }

    pub fn barycenter(&self) -> UnifiedPoint {
        self.barycenter
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn anchors(&self) -> DistanceAnchors {
        self.anchors
    }

    /// Same calibration with a different quality-distance anchor set.
    pub fn with_anchors(mut self, anchors: DistanceAnchors) -> Self {
        self.anchors = anchors;
        self
    }

    /// Camera-frame area of the calibration triangle.
    pub fn camera_area(&self) -> f64 {
        let [a, b, c] = &self.points;
        signed_area(&a.cam, &b.cam, &c.cam).abs()
    }

    pub fn project(&self, p: CameraPoint) -> Result<UnifiedPoint> {
        project(self, p)
    }
}

/// Solves the six coefficients from exactly three calibration pairs.
pub fn solve_calibration(
    pairs: &[CalibrationPair],
    camera_id: impl Into<String>,
    d_max: f64,
) -> Result<CameraCalibration> {
    let points: [CalibrationPair; 3] = pairs
        .to_vec()
        .try_into()
        .map_err(|v: Vec<_>| Error::invalid(format!("calibration needs exactly 3 pairs, got {}", v.len())))?;
    if !(d_max.is_finite() && d_max > 0.0) {
        return Err(Error::invalid(format!("d_max must be positive, got {d_max}")));
    }
    for pair in &points {
        ensure_finite(&pair.cam, "calibration camera point")?;
        ensure_finite(&pair.unified, "calibration unified point")?;
    }

    let [p0, p1, p2] = &points;
    let area = signed_area(&p0.cam, &p1.cam, &p2.cam).abs();
    if area < DEGENERACY_AREA {
        return Err(Error::DegenerateCalibration(format!(
            "camera-frame points are collinear or duplicated (area {area:.3e} m²)"
        )));
    }

    // Rows [x_cam, z_cam, 1]; subtracting row 0 from rows 1 and 2 eliminates the
    // constant column and leaves a 2x2 system shared by both equations.
    let (e1x, e1z) = (p1.cam.x_cam - p0.cam.x_cam, p1.cam.z_cam - p0.cam.z_cam);
    let (e2x, e2z) = (p2.cam.x_cam - p0.cam.x_cam, p2.cam.z_cam - p0.cam.z_cam);
    let det = e1x * e2z - e1z * e2x;
    let solve2 = |r1: f64, r2: f64| ((r1 * e2z - e1z * r2) / det, (e1x * r2 - r1 * e2x) / det);

    let (a1, a2) = solve2(p1.unified.x - p0.unified.x, p2.unified.x - p0.unified.x);
    let (b1, b2) = solve2(p1.unified.y - p0.unified.y, p2.unified.y - p0.unified.y);
    let a3 = p0.unified.x - a1 * p0.cam.x_cam - a2 * p0.cam.z_cam;
    let b3 = p0.unified.y - b1 * p0.cam.x_cam - b2 * p0.cam.z_cam;

    let barycenter = UnifiedPoint::new(
        (p0.unified.x + p1.unified.x + p2.unified.x) / 3.0,
        (p0.unified.y + p1.unified.y + p2.unified.y) / 3.0,
    );

    let cal = CameraCalibration {
        camera_id: camera_id.into(),
        alpha: [a1, a2, a3],
        beta: [b1, b2, b3],
        points,
        barycenter,
        d_max,
        anchors: DistanceAnchors::default(),
    };

    for pair in &cal.points {
        let q = apply(&cal, pair.cam);
        let scale = pair.unified.x.abs().max(pair.unified.y.abs()).max(1.0);
        let tol = NODE_TOLERANCE.max(scale * 8.0 * f64::EPSILON);
        let err = q.distance(&pair.unified);
        if err.is_nan() || err > tol {
            return Err(Error::DegenerateCalibration(format!(
                "calibration point '{}' is not reproduced (residual {:.3e} m)",
                pair.label, err
            )));
        }
    }
    Ok(cal)
}

fn apply(cal: &CameraCalibration, p: CameraPoint) -> UnifiedPoint {
    let [a1, a2, a3] = cal.alpha;
    let [b1, b2, b3] = cal.beta;
    UnifiedPoint::new(a1 * p.x_cam + a2 * p.z_cam + a3, b1 * p.x_cam + b2 * p.z_cam + b3)
}

/// Maps a camera-frame position into the unified landmark.
pub fn project(cal: &CameraCalibration, p: CameraPoint) -> Result<UnifiedPoint> {
    ensure_finite(&p, "camera point")?;
    Ok(apply(cal, p))
}

fn signed_area<P: Planar>(a: &P, b: &P, c: &P) -> f64 {
    let (ax, ay) = a.xy();
    let (bx, by) = b.xy();
    let (cx, cy) = c.xy();
    0.5 * ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))
}

/// Area of the triangle `p1 p2 p3`; zero for collinear points.
pub fn triangle_area<P: Planar>(p1: &P, p2: &P, p3: &P) -> Result<f64> {
    for p in [p1, p2, p3] {
        ensure_finite(p, "triangle vertex")?;
    }
    Ok(signed_area(p1, p2, p3).abs())
}

pub fn triangle_perimeter<P: Planar>(p1: &P, p2: &P, p3: &P) -> Result<f64> {
    for p in [p1, p2, p3] {
        ensure_finite(p, "triangle vertex")?;
    }
    Ok(planar_distance(p1, p2) + planar_distance(p2, p3) + planar_distance(p3, p1))
}

/// Distance from `p` to the calibration geometry, following the calibration's
/// [`DistanceAnchors`].
pub fn quality_distance(cal: &CameraCalibration, p: UnifiedPoint) -> Result<f64> {
    quality_distance_with(cal, p, cal.anchors)
}

pub fn quality_distance_with(cal: &CameraCalibration, p: UnifiedPoint, anchors: DistanceAnchors) -> Result<f64> {
    ensure_finite(&p, "unified point")?;
    let to_barycenter = p.distance(&cal.barycenter);
    Ok(match anchors {
        DistanceAnchors::BarycenterOnly => to_barycenter,
        DistanceAnchors::PointsAndBarycenter => cal
            .points
            .iter()
            .map(|pair| p.distance(&pair.unified))
            .fold(to_barycenter, f64::min),
    })
}

/// A candidate calibration triple and its camera-frame area.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankedSubset {
    pub indices: [usize; 3],
    pub area: f64,
}

/// Enumerates every 3-subset of `candidates`, drops degenerate ones and ranks
/// the rest by descending camera-frame area (ties: lexicographic indices).
/// At most `limit` entries are returned; the first is the recommended set.
pub fn select_calibration_set(candidates: &[CalibrationPair], limit: usize) -> Result<Vec<RankedSubset>> {
    let n = candidates.len();
    if n < 3 {
        return Err(Error::InsufficientCandidates(n));
    }
    for pair in candidates {
        ensure_finite(&pair.cam, "candidate camera point")?;
    }
    let mut ranked = Vec::with_capacity(n * (n - 1) * (n - 2) / 6);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let area = signed_area(&candidates[i].cam, &candidates[j].cam, &candidates[k].cam).abs();
                if area >= DEGENERACY_AREA {
                    ranked.push(RankedSubset {
                        indices: [i, j, k],
                        area,
                    });
                }
            }
        }
    }
    if ranked.is_empty() {
        return Err(Error::NoValidSubset);
    }
    // stable: equal areas keep enumeration (lexicographic) order
    ranked.sort_by(|a, b| b.area.total_cmp(&a.area));
    ranked.truncate(limit);
    Ok(ranked)
}

/// Picks the best-ranked triple and solves it.
pub fn calibrate_best(
    candidates: &[CalibrationPair],
    camera_id: impl Into<String>,
    d_max: f64,
) -> Result<(CameraCalibration, RankedSubset)> {
    let best = select_calibration_set(candidates, 1)?[0];
    let pairs: Vec<_> = best.indices.iter().map(|&i| candidates[i].clone()).collect();
    Ok((solve_calibration(&pairs, camera_id, d_max)?, best))
}
