use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::calibration::CalibrationPair;
use crate::error::{Error, Result};
use crate::point::CameraPoint;

use super::CameraModel;

/// Points of the reference grid used by the calibration study.
pub const DEFAULT_GRID_POINTS: usize = 47;

const GRID_NEAR: f64 = 1.0;
const GRID_FAR: f64 = 5.0;

fn square_lattice(cam: &CameraModel, near: f64, far: f64, rows: usize) -> Vec<CameraPoint> {
    let pitch = (far - near) / (rows - 1) as f64;
    let tan_half = (cam.fov_h / 2.0).tan();
    let mut points = Vec::new();
    for r in 0..rows {
        let z = near + pitch * r as f64;
        let columns = (z * tan_half / pitch + 1e-9).floor() as i64;
        points.extend((-columns..=columns).map(|i| CameraPoint::new(i as f64 * pitch, z)));
    }
    points
}

fn collinear(points: &[CameraPoint]) -> bool {
    let (a, b) = (points[0], points[1]);
    points[2..]
        .iter()
        .all(|c| ((b.x_cam - a.x_cam) * (c.z_cam - a.z_cam) - (b.z_cam - a.z_cam) * (c.x_cam - a.x_cam)).abs() < 1e-12)
}

/// Lays `n` floor points out in the camera's field of view between 1 and 5 m.
///
/// Layout: a square lattice with rows from 1 m to 5 m of depth and columns on
/// multiples of the same pitch around the optical axis, clipped to the field
/// of view. The coarsest such lattice holding at least `n` points is used, and
/// the points farthest from the camera are dropped until `n` remain (ties:
/// leftmost kept). If that leaves the points collinear, the next finer
/// lattice is used. Points are labelled `g0..` near to far, left to right.
pub fn generate_grid(cam: &CameraModel, n: usize) -> Result<Vec<CalibrationPair>> {
    if n < 3 {
        return Err(Error::invalid(format!(
            "a calibration grid needs at least 3 points, got {n}"
        )));
    }
    cam.validate()?;
    let near = GRID_NEAR.max(cam.range_min);
    let far = GRID_FAR.min(cam.range_max);
    if near >= far {
        return Err(Error::invalid(format!(
            "camera '{}' range does not overlap the 1-5 m grid band",
            cam.camera_id
        )));
    }

    let mut rows = 2;
    let mut points = loop {
        let mut lattice = square_lattice(cam, near, far, rows);
        rows += 1;
        if lattice.len() < n {
            continue;
        }
        lattice.sort_by(|a, b| {
            a.x_cam
                .hypot(a.z_cam)
                .total_cmp(&b.x_cam.hypot(b.z_cam))
                .then(a.x_cam.total_cmp(&b.x_cam))
        });
        lattice.truncate(n);
        if !collinear(&lattice) {
            break lattice;
        }
    };
    points.sort_by(|a, b| a.z_cam.total_cmp(&b.z_cam).then(a.x_cam.total_cmp(&b.x_cam)));
    Ok(points
        .into_iter()
        .enumerate()
        .map(|(i, p)| CalibrationPair::new(p, cam.to_unified(p), format!("g{i}")))
        .collect())
}

/// The grid as the camera would measure it: camera-frame coordinates get the
/// camera's position noise, reference positions stay exact.
pub fn measure_grid(cam: &CameraModel, grid: &[CalibrationPair], seed: u64) -> Vec<CalibrationPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    grid.iter()
        .map(|pair| {
            let sigma = cam.noise.sigma_at(pair.cam.x_cam.hypot(pair.cam.z_cam));
            let nx: f64 = StandardNormal.sample(&mut rng);
            let nz: f64 = StandardNormal.sample(&mut rng);
            CalibrationPair {
                cam: CameraPoint::new(pair.cam.x_cam + sigma * nx, pair.cam.z_cam + sigma * nz),
                ..pair.clone()
            }
        })
        .collect()
}
