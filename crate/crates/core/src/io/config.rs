use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::round9;
use crate::calibration::{solve_calibration, CalibrationPair, CameraCalibration, DistanceAnchors, DEFAULT_D_MAX};
use crate::error::{Error, Result};
use crate::fusion::MergeConfig;
use crate::point::{CameraPoint, UnifiedPoint};
use crate::simulator::{CameraModel, NoiseModel, Occluder, Scenario, WalkerPath};

fn parse_toml<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse(format!("{what}: {}", e.to_string().trim_end())))
}

fn to_toml<T: Serialize>(doc: &T) -> Result<String> {
    toml::to_string(doc).map_err(|e| Error::invalid(e.to_string()))
}

fn default_d_max() -> f64 {
    DEFAULT_D_MAX
}

/// A calibration as stored on disk, every float at 9 significant digits.
/// The coefficients are written for reference only; loading always re-solves
/// them from the three pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFile {
    pub camera_id: String,
    #[serde(default = "default_d_max")]
    pub d_max: f64,
    #[serde(default)]
    pub anchors: DistanceAnchors,
    pub pairs: Vec<PairEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Coefficients>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    #[serde(default)]
    pub label: String,
    pub x_cam: f64,
    pub z_cam: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficients {
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    pub camera_area: f64,
}

impl CalibrationFile {
    pub fn from_calibration(cal: &CameraCalibration) -> Self {
        Self {
            camera_id: cal.camera_id().to_string(),
            d_max: round9(cal.d_max()),
            anchors: cal.anchors(),
            pairs: cal
                .calibration_points()
                .iter()
                .map(|p| PairEntry {
                    label: p.label.clone(),
                    x_cam: round9(p.cam.x_cam),
                    z_cam: round9(p.cam.z_cam),
                    x: round9(p.unified.x),
                    y: round9(p.unified.y),
                })
                .collect(),
            coefficients: Some(Coefficients {
                alpha: cal.alpha().map(round9),
                beta: cal.beta().map(round9),
                camera_area: round9(cal.camera_area()),
            }),
        }
    }

    pub fn to_calibration(&self) -> Result<CameraCalibration> {
        let pairs: Vec<CalibrationPair> = self
            .pairs
            .iter()
            .map(|p| {
                CalibrationPair::new(
                    CameraPoint::new(p.x_cam, p.z_cam),
                    UnifiedPoint::new(p.x, p.y),
                    p.label.clone(),
                )
            })
            .collect();
        if pairs.len() != 3 {
            return Err(Error::invalid(format!(
                "a calibration needs exactly 3 pairs, found {}",
                pairs.len()
            )));
        }
        Ok(solve_calibration(&pairs, self.camera_id.clone(), self.d_max)?.with_anchors(self.anchors))
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_toml(text, "calibration")
    }

    pub fn to_toml(&self) -> Result<String> {
        to_toml(self)
    }
}

pub fn read_calibration(path: impl AsRef<Path>) -> Result<CameraCalibration> {
    CalibrationFile::parse(&fs::read_to_string(path)?)?.to_calibration()
}

pub fn write_calibration(path: impl AsRef<Path>, cal: &CameraCalibration) -> Result<()> {
    fs::write(path, CalibrationFile::from_calibration(cal).to_toml()?)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    duration: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    datum_offset: Option<[f64; 2]>,
    cameras: Vec<CameraDoc>,
    walkers: Vec<WalkerDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    occluders: Vec<OccluderDoc>,
}

fn default_fov() -> f64 {
    60.0
}
fn default_range_min() -> f64 {
    0.5
}
fn default_range_max() -> f64 {
    5.0
}
fn default_rate() -> f64 {
    30.0
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CameraDoc {
    camera_id: String,
    position: [f64; 2],
    yaw_deg: f64,
    #[serde(default = "default_fov")]
    fov_h_deg: f64,
    #[serde(default = "default_range_min")]
    range_min: f64,
    #[serde(default = "default_range_max")]
    range_max: f64,
    #[serde(default = "default_rate")]
    sample_rate: f64,
    #[serde(default)]
    clock_offset: f64,
    #[serde(default)]
    noise: NoiseModel,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WalkerDoc {
    walker_id: String,
    /// `[t, x, y]` triples.
    waypoints: Vec<[f64; 3]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OccluderDoc {
    min: [f64; 2],
    max: [f64; 2],
}

/// Parses and validates a scenario document.
pub fn scenario_from_toml(text: &str) -> Result<Scenario> {
    let doc: ScenarioDoc = parse_toml(text, "scenario")?;
    let sc = Scenario {
        cameras: doc
            .cameras
            .into_iter()
            .map(|c| CameraModel {
                camera_id: c.camera_id,
                position: UnifiedPoint::new(c.position[0], c.position[1]),
                yaw: c.yaw_deg.to_radians(),
                fov_h: c.fov_h_deg.to_radians(),
                range_min: c.range_min,
                range_max: c.range_max,
                sample_rate: c.sample_rate,
                noise: c.noise,
                clock_offset: c.clock_offset,
            })
            .collect(),
        walkers: doc
            .walkers
            .into_iter()
            .map(|w| {
                let points = w
                    .waypoints
                    .iter()
                    .map(|&[t, x, y]| (t, UnifiedPoint::new(x, y)))
                    .collect();
                WalkerPath::new(w.walker_id, points)
            })
            .collect(),
        duration: doc.duration,
        datum_offset: doc.datum_offset.map(|[x, y]| (x, y)),
        occluders: doc
            .occluders
            .into_iter()
            .map(|o| Occluder {
                min: UnifiedPoint::new(o.min[0], o.min[1]),
                max: UnifiedPoint::new(o.max[0], o.max[1]),
            })
            .collect(),
        seed: doc.seed,
    };
    sc.validate()?;
    Ok(sc)
}

/// Writes a scenario with angles in degrees and every float at 9 significant digits.
pub fn scenario_to_toml(sc: &Scenario) -> Result<String> {
    let pair = |p: UnifiedPoint| [round9(p.x), round9(p.y)];
    let doc = ScenarioDoc {
        duration: round9(sc.duration),
        seed: sc.seed,
        datum_offset: sc.datum_offset.map(|(x, y)| [round9(x), round9(y)]),
        cameras: sc
            .cameras
            .iter()
            .map(|c| CameraDoc {
                camera_id: c.camera_id.clone(),
                position: pair(c.position),
                yaw_deg: round9(c.yaw.to_degrees()),
                fov_h_deg: round9(c.fov_h.to_degrees()),
                range_min: round9(c.range_min),
                range_max: round9(c.range_max),
                sample_rate: round9(c.sample_rate),
                clock_offset: round9(c.clock_offset),
                noise: NoiseModel {
                    sigma0: round9(c.noise.sigma0),
                    k_quad: round9(c.noise.k_quad),
                    jitter_t: round9(c.noise.jitter_t),
                    seed: c.noise.seed,
                },
            })
            .collect(),
        walkers: sc
            .walkers
            .iter()
            .map(|w| WalkerDoc {
                walker_id: w.walker_id.clone(),
                waypoints: w
                    .waypoints
                    .iter()
                    .map(|(t, p)| [round9(*t), round9(p.x), round9(p.y)])
                    .collect(),
            })
            .collect(),
        occluders: sc
            .occluders
            .iter()
            .map(|o| OccluderDoc {
                min: pair(o.min),
                max: pair(o.max),
            })
            .collect(),
    };
    to_toml(&doc)
}

pub fn read_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    scenario_from_toml(&fs::read_to_string(path)?)
}

pub fn write_scenario(path: impl AsRef<Path>, sc: &Scenario) -> Result<()> {
    fs::write(path, scenario_to_toml(sc)?)?;
    Ok(())
}

/// Settings shared by the command-line tools.
///
/// Relative calibration paths are resolved against the directory holding the
/// configuration file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub merge: MergeConfig,
    /// Added to every fused position on output.
    pub datum_offset: Option<[f64; 2]>,
    pub output_dir: Option<PathBuf>,
    /// Calibration file per camera id.
    pub calibrations: BTreeMap<String, PathBuf>,
}

impl PipelineConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = parse_toml(text, "pipeline config")?;
        cfg.merge.validate()?;
        if let Some([x, y]) = cfg.datum_offset {
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::invalid("datum_offset must be finite"));
            }
        }
        Ok(cfg)
    }

    pub fn datum_offset(&self) -> Option<(f64, f64)> {
        self.datum_offset.map(|[x, y]| (x, y))
    }
}

/// Loads a configuration and checks that every referenced calibration exists.
pub fn read_pipeline_config(path: impl AsRef<Path>) -> Result<PipelineConfig> {
    let path = path.as_ref();
    let mut cfg = PipelineConfig::parse(&fs::read_to_string(path)?)?;
    let base = path.parent().unwrap_or(Path::new(""));
    for (camera, file) in cfg.calibrations.iter_mut() {
        if file.is_relative() {
            *file = base.join(&*file);
        }
        if !file.is_file() {
            return Err(Error::invalid(format!(
                "calibration for camera '{camera}' not found at {}",
                file.display()
            )));
        }
    }
    if let Some(dir) = cfg.output_dir.as_mut() {
        if dir.is_relative() {
            *dir = base.join(&*dir);
        }
    }
    Ok(cfg)
}
