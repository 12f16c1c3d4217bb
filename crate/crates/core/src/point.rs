//! Planar points in a camera frame and in the unified landmark.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A position seen from a depth camera: lateral offset and forward depth, in meters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CameraPoint {
    pub x_cam: f64,
    pub z_cam: f64,
}

impl CameraPoint {
    pub const fn new(x_cam: f64, z_cam: f64) -> Self {
        Self { x_cam, z_cam }
    }
}

/// A position in the unified planar landmark, in meters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UnifiedPoint {
    pub x: f64,
    pub y: f64,
}

impl UnifiedPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &UnifiedPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Anything with two planar coordinates.
pub trait Planar {
    fn xy(&self) -> (f64, f64);

    fn is_finite(&self) -> bool {
        let (a, b) = self.xy();
        a.is_finite() && b.is_finite()
    }
}

impl Planar for CameraPoint {
    fn xy(&self) -> (f64, f64) {
        (self.x_cam, self.z_cam)
    }
}

impl Planar for UnifiedPoint {
    fn xy(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

impl Planar for (f64, f64) {
    fn xy(&self) -> (f64, f64) {
        *self
    }
}

pub(crate) fn ensure_finite<P: Planar>(p: &P, what: &str) -> Result<()> {
    if p.is_finite() {
        Ok(())
    } else {
        let (a, b) = p.xy();
        Err(Error::invalid(format!("{what} has non-finite coordinates ({a}, {b})")))
    }
}

pub(crate) fn planar_distance<P: Planar, Q: Planar>(p: &P, q: &Q) -> f64 {
    let (ax, ay) = p.xy();
    let (bx, by) = q.xy();
    (ax - bx).hypot(ay - by)
}
