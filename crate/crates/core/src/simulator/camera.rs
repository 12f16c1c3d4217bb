use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{ensure_finite, CameraPoint, UnifiedPoint};

/// Rounding slack on the range and bearing gates, so that points placed on
/// the boundary survive a round trip through the rigid transform.
pub const GATE_SLACK: f64 = 1e-9;

/// Depth noise and timing jitter of one simulated camera.
///
/// Position noise is applied independently to both camera-frame axes with a
/// standard deviation of `sigma0 + k_quad * d²`, `d` being the distance to the
/// camera.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    pub sigma0: f64,
    pub k_quad: f64,
    /// Standard deviation of the capture instant around the nominal frame time, in seconds.
    pub jitter_t: f64,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            sigma0: 0.01,
            k_quad: 0.0035,
            jitter_t: 0.005,
            seed: 0,
        }
    }
}

impl NoiseModel {
    pub fn zero() -> Self {
        Self {
            sigma0: 0.0,
            k_quad: 0.0,
            jitter_t: 0.0,
            seed: 0,
        }
    }

    pub fn sigma_at(&self, distance: f64) -> f64 {
        self.sigma0 + self.k_quad * distance * distance
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sigma0", self.sigma0),
            ("k_quad", self.k_quad),
            ("jitter_t", self.jitter_t),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidScenario(format!(
                    "noise {name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// A depth camera placed in the unified landmark.
///
/// `yaw` is the heading of the optical axis, counter-clockwise from `+y`:
/// at `yaw = 0` the camera looks along `+y` and its lateral axis `x_cam`
/// points along `+x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CameraModel {
    pub camera_id: String,
    pub position: UnifiedPoint,
    pub yaw: f64,
    pub fov_h: f64,
    pub range_min: f64,
    pub range_max: f64,
    pub sample_rate: f64,
    pub noise: NoiseModel,
    pub clock_offset: f64,
}

impl CameraModel {
    /// Camera with the sensor defaults: 60° horizontal field of view, 0.5 to 5 m
    /// range, 30 Hz and the default noise.
    pub fn new(camera_id: impl Into<String>, position: UnifiedPoint, yaw: f64) -> Self {
        Self {
            camera_id: camera_id.into(),
            position,
            yaw,
            fov_h: 60f64.to_radians(),
            range_min: 0.5,
            range_max: 5.0,
            sample_rate: 30.0,
            noise: NoiseModel::default(),
            clock_offset: 0.0,
        }
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_clock_offset(mut self, offset: f64) -> Self {
        self.clock_offset = offset;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(format!("camera '{}': {msg}", self.camera_id)));
        if self.camera_id.is_empty() {
            return Err(Error::InvalidScenario("camera_id must not be empty".into()));
        }
        if !(self.position.x.is_finite() && self.position.y.is_finite() && self.yaw.is_finite()) {
            return bad("position and yaw must be finite".into());
        }
        if !(self.fov_h > 0.0 && self.fov_h < std::f64::consts::PI) {
            return bad(format!("fov_h must lie in (0, pi), got {}", self.fov_h));
        }
        if !(self.range_min >= 0.0 && self.range_min < self.range_max && self.range_max.is_finite()) {
            return bad(format!(
                "need 0 <= range_min < range_max, got {} and {}",
                self.range_min, self.range_max
            ));
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return bad(format!("sample_rate must be positive, got {}", self.sample_rate));
        }
        if !self.clock_offset.is_finite() {
            return bad("clock_offset must be finite".into());
        }
        self.noise.validate()
    }

    fn forward(&self) -> (f64, f64) {
        (-self.yaw.sin(), self.yaw.cos())
    }

    fn lateral(&self) -> (f64, f64) {
        (self.yaw.cos(), self.yaw.sin())
    }

    /// Rigid transform into the camera frame, with no gating.
    pub fn to_camera(&self, p: UnifiedPoint) -> CameraPoint {
        let (dx, dy) = (p.x - self.position.x, p.y - self.position.y);
        let (rx, ry) = self.lateral();
        let (fx, fy) = self.forward();
        CameraPoint::new(dx * rx + dy * ry, dx * fx + dy * fy)
    }

    /// Inverse of [`CameraModel::to_camera`].
    pub fn to_unified(&self, p: CameraPoint) -> UnifiedPoint {
        let (rx, ry) = self.lateral();
        let (fx, fy) = self.forward();
        UnifiedPoint::new(
            self.position.x + p.x_cam * rx + p.z_cam * fx,
            self.position.y + p.x_cam * ry + p.z_cam * fy,
        )
    }

    /// Range and field-of-view gate, inclusive up to [`GATE_SLACK`].
    pub fn sees(&self, p: CameraPoint) -> bool {
        p.z_cam >= self.range_min - GATE_SLACK
            && p.z_cam <= self.range_max + GATE_SLACK
            && p.x_cam.atan2(p.z_cam).abs() <= self.fov_h / 2.0 + GATE_SLACK
    }
}

/// Camera-frame position of `p`, or `None` when it is out of range or outside
/// the horizontal field of view. No noise is applied.
pub fn camera_view(cam: &CameraModel, p: UnifiedPoint) -> Result<Option<CameraPoint>> {
    ensure_finite(&p, "unified point")?;
    let c = cam.to_camera(p);
    Ok(cam.sees(c).then_some(c))
}
