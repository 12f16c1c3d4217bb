//! Indoor trajectory fusion for several depth cameras.
//!
//! * [`calibration`] maps each camera's `(x_cam, z_cam)` plane into one
//!   unified planar landmark with a three-point affine solve.
//! * [`fusion`] scores how well two per-camera trajectories agree, peers the
//!   ones that belong to the same person and merges them.
//! * [`simulator`] produces deterministic detection streams from walker paths
//!   and camera models, so every experiment runs without hardware.
//! * [`evaluation`] holds the calibration, separation and matching studies.
//! * [`io`] and [`cli`] provide the text formats and the `roomtrack` command.
//!
//! The runnable programs under `examples/` walk through each capability.

pub mod calibration;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod fusion;
pub mod io;
pub mod pipeline;
pub mod point;
pub mod simulator;

pub use calibration::{
    project, select_calibration_set, solve_calibration, triangle_area, CalibrationPair, CameraCalibration,
};
pub use error::{Error, Result};
pub use fusion::{Detection, MergeConfig, Sample, Track};
pub use point::{CameraPoint, UnifiedPoint};
pub use simulator::{simulate, CameraModel, NoiseModel, Scenario, WalkerPath};
