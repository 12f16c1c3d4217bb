//! Calibrate, project, peer and merge: the whole chain on simulated streams.

use std::collections::BTreeMap;

use crate::calibration::{calibrate_best, CameraCalibration};
use crate::error::Result;
use crate::fusion::{
    match_tracks, merge_tracks, project_detection, tracks_from_samples, MatchOutcome, MergeConfig, Track,
};
use crate::simulator::{
    generate_grid, measure_grid, simulate, CameraModel, Scenario, SimulationOutput, DEFAULT_GRID_POINTS,
};

/// Seed used to measure the reference grid of the `index`-th camera.
pub fn grid_seed(scenario_seed: u64, index: usize) -> u64 {
    scenario_seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(0xC0FF_EE00 + index as u64)
}

/// Calibrates one camera the way an installer would: measure the reference
/// grid with the camera's noise, keep the widest triangle.
pub fn calibrate_camera(cam: &CameraModel, d_max: f64, seed: u64) -> Result<CameraCalibration> {
    let grid = generate_grid(cam, DEFAULT_GRID_POINTS)?;
    let measured = measure_grid(cam, &grid, seed);
    Ok(calibrate_best(&measured, cam.camera_id.clone(), d_max)?.0)
}

pub fn calibrate_scenario(sc: &Scenario, d_max: f64) -> Result<BTreeMap<String, CameraCalibration>> {
    sc.cameras
        .iter()
        .enumerate()
        .map(|(i, cam)| {
            Ok((
                cam.camera_id.clone(),
                calibrate_camera(cam, d_max, grid_seed(sc.seed, i))?,
            ))
        })
        .collect()
}

/// Projects every stream with its camera's calibration and groups the samples
/// into per-camera tracks.
pub fn project_streams(
    calibrations: &BTreeMap<String, CameraCalibration>,
    sim: &SimulationOutput,
) -> Result<BTreeMap<String, Vec<Track>>> {
    let mut by_camera = BTreeMap::new();
    for stream in &sim.streams {
        let cal = &calibrations[&stream.camera_id];
        let samples = stream
            .detections
            .iter()
            .map(|d| project_detection(cal, d))
            .collect::<Result<Vec<_>>>()?;
        let (tracks, _) = tracks_from_samples(&samples)?;
        by_camera.insert(stream.camera_id.clone(), tracks);
    }
    Ok(by_camera)
}

/// Everything produced by one pass of the pipeline.
#[derive(Debug)]
pub struct PipelineRun {
    pub calibrations: BTreeMap<String, CameraCalibration>,
    pub simulation: SimulationOutput,
    pub tracks_by_camera: BTreeMap<String, Vec<Track>>,
    pub outcome: MatchOutcome,
    pub fused: Vec<Track>,
}

pub fn run_pipeline(sc: &Scenario, cfg: &MergeConfig) -> Result<PipelineRun> {
    cfg.validate()?;
    let calibrations = calibrate_scenario(sc, cfg.d_max)?;
    let simulation = simulate(sc)?;
    let tracks_by_camera = project_streams(&calibrations, &simulation)?;
    let outcome = match_tracks(&tracks_by_camera, cfg);
    let all: Vec<Track> = tracks_by_camera.values().flatten().cloned().collect();
    let fused = merge_tracks(&all, &outcome.matches, cfg)?;
    Ok(PipelineRun {
        calibrations,
        simulation,
        tracks_by_camera,
        outcome,
        fused,
    })
}
