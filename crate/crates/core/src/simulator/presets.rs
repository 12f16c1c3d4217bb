//! Ready-made scenarios for the examples and experiments.
//!
//! All of them use the same office: 5.5 m between two cameras mounted at mid
//! height of the side walls, K2 on the left looking right and K1 on the right
//! looking left. A door in the top-right corner sits outside K1's view but
//! within K2's range, so a person entering is first seen by K2.

use std::f64::consts::FRAC_PI_2;

use crate::point::UnifiedPoint;

use super::{CameraModel, NoiseModel, Scenario, WalkerPath};

/// Normal walking speed, m/s.
pub const WALKING_SPEED: f64 = 1.2;

const fn p(x: f64, y: f64) -> UnifiedPoint {
    UnifiedPoint::new(x, y)
}

/// The two office cameras with default sensor parameters.
pub fn office_cameras() -> Vec<CameraModel> {
    let mut k1 = CameraModel::new("K1", p(5.5, 2.0), FRAC_PI_2);
    let mut k2 = CameraModel::new("K2", p(0.0, 2.0), -FRAC_PI_2);
    k1.noise.seed = 1;
    k2.noise.seed = 2;
    vec![k1, k2]
}

/// Door to far side, around the desks in the middle of the room.
pub fn crossing_path() -> Vec<UnifiedPoint> {
    vec![p(5.4, 3.6), p(4.5, 3.0), p(2.8, 2.6), p(1.0, 1.2), p(0.6, 1.0)]
}

/// One person crossing the office at walking speed.
pub fn crossing_room(seed: u64) -> Scenario {
    let walker = WalkerPath::at_speed("w0", 0.5, WALKING_SPEED, &crossing_path());
    Scenario::new(office_cameras(), vec![walker], 6.0).with_seed(seed)
}

/// [`crossing_room`] without any noise or jitter.
pub fn crossing_room_noiseless() -> Scenario {
    let mut sc = crossing_room(0);
    for cam in &mut sc.cameras {
        cam.noise = NoiseModel {
            seed: cam.noise.seed,
            ..NoiseModel::zero()
        };
    }
    sc
}

/// Two people on the exact same path, `gap` seconds apart.
pub fn followers(seed: u64, gap: f64) -> Scenario {
    let path = crossing_path();
    let walkers = vec![
        WalkerPath::at_speed("w0", 0.5, WALKING_SPEED, &path),
        WalkerPath::at_speed("w1", 0.5 + gap, WALKING_SPEED, &path),
    ];
    Scenario::new(office_cameras(), walkers, 7.0 + gap).with_seed(seed)
}

/// Five people on distinct paths, several of them in the room at once.
pub fn five_walkers(seed: u64) -> Scenario {
    let v = WALKING_SPEED;
    let walkers = vec![
        WalkerPath::at_speed("w0", 0.5, v, &crossing_path()),
        WalkerPath::at_speed("w1", 1.0, v, &[p(0.8, 1.3), p(2.6, 1.5), p(4.8, 1.8)]),
        WalkerPath::at_speed("w2", 4.0, v, &[p(2.9, 0.3), p(3.0, 3.7)]),
        WalkerPath::at_speed("w3", 5.5, v, &[p(1.2, 3.4), p(2.8, 2.2), p(4.4, 1.0)]),
        WalkerPath::at_speed("w4", 8.0, v, &[p(4.8, 2.4), p(3.0, 2.5), p(1.2, 2.2)]),
    ];
    Scenario::new(office_cameras(), walkers, 12.0).with_seed(seed)
}
