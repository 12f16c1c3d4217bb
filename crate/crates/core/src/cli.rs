//! The `roomtrack` command line.
//!
//! Exit status is 0 on success, 1 for usage and parse errors (including
//! unreadable files) and 2 for domain errors such as a degenerate calibration
//! or a conflicting match.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::calibration::{calibrate_best, solve_calibration, CameraCalibration, DistanceAnchors};
use crate::error::{Error, Result};
use crate::evaluation::{
    area_bins, calibration_study, labelled_correlations, matching_report, separation_study, stats, suggest_threshold,
    AREA_BINS, DEFAULT_OFFSETS,
};
use crate::fusion::{match_tracks, merge_tracks, project_detection, tracks_from_samples, Track};
use crate::io::{self, PipelineConfig};
use crate::pipeline::grid_seed;
use crate::simulator::{generate_grid, measure_grid, presets, simulate, Scenario, DEFAULT_GRID_POINTS};

/// Camera-frame area below which a calibration triangle is flagged as small.
pub const SMALL_AREA: f64 = 1.5;

#[derive(Debug, Parser)]
#[command(
    name = "roomtrack",
    version,
    about = "Fuse people trajectories seen by several depth cameras"
)]
struct Cli {
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Pipeline configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Abort on the first malformed input line.
    #[arg(long, global = true)]
    strict: bool,
    /// Directory for output files [default: current directory].
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a camera calibration from measured reference points.
    Calibrate {
        /// Pairs file: label,x_cam,z_cam,x,y.
        pairs: PathBuf,
        #[arg(long)]
        camera_id: String,
        #[arg(long)]
        d_max: Option<f64>,
        /// Pick the widest triangle among more than three pairs.
        #[arg(long)]
        select: bool,
        #[arg(long, value_enum, default_value_t = Anchors::PointsAndBarycenter)]
        anchors: Anchors,
    },
    /// Project camera detections into the unified landmark.
    Project {
        /// Detections file: camera_id,t,x_cam,z_cam,person_hint,vertical.
        detections: PathBuf,
        /// Calibration for every line; defaults to the configured one per camera.
        #[arg(long)]
        calibration: Option<PathBuf>,
    },
    /// Peer and merge projected tracks from several cameras.
    Merge {
        /// Projected sample files.
        #[arg(required = true)]
        samples: Vec<PathBuf>,
        #[arg(long)]
        threshold: Option<f64>,
        /// Offset added to fused positions, as `x,y`.
        #[arg(long, value_parser = parse_offset, allow_hyphen_values = true)]
        datum_offset: Option<(f64, f64)>,
    },
    /// Generate synthetic detection streams and their ground truth.
    Simulate {
        /// Scenario file; a preset is used when omitted.
        scenario: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "scenario")]
        preset: Option<Preset>,
        /// Also write each camera's measured reference grid.
        #[arg(long)]
        grid: bool,
    },
    /// Run one of the evaluation studies.
    Evaluate {
        #[arg(value_enum)]
        study: Study,
        /// Scenario file; the study's preset is used when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Pairs file for the calibration study instead of a simulated grid.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Delays for the separation study, comma separated.
        #[arg(long, value_delimiter = ',')]
        offsets: Option<Vec<f64>>,
        /// Seeds to run for the matching study, counting up from --seed.
        #[arg(long, default_value_t = 1)]
        runs: u64,
        /// Drop all simulated noise.
        #[arg(long)]
        zero_noise: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Anchors {
    PointsAndBarycenter,
    BarycenterOnly,
}

impl From<Anchors> for DistanceAnchors {
    fn from(a: Anchors) -> Self {
        match a {
            Anchors::PointsAndBarycenter => DistanceAnchors::PointsAndBarycenter,
            Anchors::BarycenterOnly => DistanceAnchors::BarycenterOnly,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    /// One walker crossing two facing cameras.
    Crossing,
    /// Two walkers on the same path one second apart.
    Followers,
    /// Five walkers on distinct paths.
    FiveWalkers,
}

// variant names are the subcommand values
#[allow(clippy::enum_variant_names)]
#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Study {
    CalibrationStudy,
    SeparationStudy,
    MatchingAccuracy,
}

struct Context {
    config: PipelineConfig,
    output_dir: PathBuf,
    seed: Option<u64>,
    strict: bool,
}

impl Context {
    fn output(&self, name: &str) -> Result<BufWriter<File>> {
        fs::create_dir_all(&self.output_dir)?;
        let path = self.output_dir.join(name);
        println!("wrote {}", path.display());
        Ok(BufWriter::new(File::create(path)?))
    }
}

fn parse_offset(s: &str) -> std::result::Result<(f64, f64), String> {
    let parsed = s
        .split_once(',')
        .and_then(|(x, y)| Some((x.trim().parse::<f64>().ok()?, y.trim().parse::<f64>().ok()?)));
    match parsed {
        Some((x, y)) if x.is_finite() && y.is_finite() => Ok((x, y)),
        _ => Err(format!("expected two finite numbers as x,y, got '{s}'")),
    }
}

fn warn(msg: impl std::fmt::Display) {
    eprintln!("warning: {msg}");
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn report_skipped<T>(path: &Path, records: &io::Records<T>) {
    for e in &records.errors {
        warn(format!("{}: skipped {e}", path.display()));
    }
}

/// Runs the command line with the process arguments and returns the exit status.
pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Runs the command line with explicit arguments (the first one is the program name).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) => 1,
        _ => 2,
    }
}

fn execute(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => io::read_pipeline_config(path)?,
        None => PipelineConfig::default(),
    };
    let output_dir = cli
        .output_dir
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let ctx = Context {
        config,
        output_dir,
        seed: cli.seed,
        strict: cli.strict,
    };
    match cli.command {
        Command::Calibrate {
            pairs,
            camera_id,
            d_max,
            select,
            anchors,
        } => calibrate(&ctx, &pairs, camera_id, d_max, select, anchors.into()),
        Command::Project {
            detections,
            calibration,
        } => project(&ctx, &detections, calibration.as_deref()),
        Command::Merge {
            samples,
            threshold,
            datum_offset,
        } => merge(&ctx, &samples, threshold, datum_offset),
        Command::Simulate { scenario, preset, grid } => simulate_cmd(&ctx, scenario.as_deref(), preset, grid),
        Command::Evaluate {
            study,
            scenario,
            grid,
            offsets,
            runs,
            zero_noise,
        } => evaluate(
            &ctx,
            study,
            scenario.as_deref(),
            grid.as_deref(),
            offsets,
            runs,
            zero_noise,
        ),
    }
}

fn calibrate(
    ctx: &Context,
    path: &Path,
    camera_id: String,
    d_max: Option<f64>,
    select: bool,
    anchors: DistanceAnchors,
) -> Result<()> {
    let records = io::read_calibration_pairs(open(path)?, ctx.strict)?;
    report_skipped(path, &records);
    let pairs = records.rows;
    let d_max = d_max.unwrap_or(ctx.config.merge.d_max);
    let cal = if select {
        let (cal, best) = calibrate_best(&pairs, camera_id, d_max)?;
        let labels: Vec<&str> = best.indices.iter().map(|&i| pairs[i].label.as_str()).collect();
        println!("selected {} of {} pairs", labels.join(", "), pairs.len());
        cal
    } else if pairs.len() == 3 {
        solve_calibration(&pairs, camera_id, d_max)?
    } else {
        return Err(Error::InvalidInput(format!(
            "{} pairs given; exactly 3 are needed, or pass --select",
            pairs.len()
        )));
    }
    .with_anchors(anchors);

    let area = cal.camera_area();
    println!("camera {}: triangle area {} m²", cal.camera_id(), io::fmt_num(area));
    if area < SMALL_AREA {
        warn(format!(
            "calibration triangle area {} m² is below {SMALL_AREA} m²; projections may be inaccurate",
            io::fmt_num(area)
        ));
    }
    fs::create_dir_all(&ctx.output_dir)?;
    let out = ctx.output_dir.join(format!("{}.calibration.toml", cal.camera_id()));
    io::write_calibration(&out, &cal)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn stem(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    for suffix in [".detections.csv", ".csv"] {
        if let Some(s) = name.strip_suffix(suffix) {
            return s.to_string();
        }
    }
    name
}

fn project(ctx: &Context, path: &Path, calibration: Option<&Path>) -> Result<()> {
    let records = io::read_detections(open(path)?, ctx.strict)?;
    report_skipped(path, &records);

    let single = calibration.map(io::read_calibration).transpose()?;
    let mut configured: BTreeMap<String, CameraCalibration> = BTreeMap::new();
    let mut samples = Vec::with_capacity(records.rows.len());
    for det in &records.rows {
        let cal = match &single {
            Some(cal) => {
                if cal.camera_id() != det.camera_id {
                    warn(format!(
                        "detection at t={} is from camera '{}' but the calibration is for '{}'",
                        io::fmt_num(det.t),
                        det.camera_id,
                        cal.camera_id()
                    ));
                }
                cal
            }
            None => {
                if !configured.contains_key(&det.camera_id) {
                    let file = ctx.config.calibrations.get(&det.camera_id).ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "no calibration for camera '{}'; pass --calibration or list it in --config",
                            det.camera_id
                        ))
                    })?;
                    configured.insert(det.camera_id.clone(), io::read_calibration(file)?);
                }
                &configured[&det.camera_id]
            }
        };
        samples.push(project_detection(cal, det)?);
    }
    io::write_samples(ctx.output(&format!("{}.samples.csv", stem(path)))?, &samples)?;
    println!("projected {} detections", samples.len());
    Ok(())
}

fn merge(ctx: &Context, paths: &[PathBuf], threshold: Option<f64>, datum_offset: Option<(f64, f64)>) -> Result<()> {
    let mut cfg = ctx.config.merge;
    if let Some(t) = threshold {
        cfg.threshold = t;
    }
    cfg.validate()?;
    let mut samples = Vec::new();
    for path in paths {
        let records = io::read_samples(open(path)?, ctx.strict)?;
        report_skipped(path, &records);
        samples.extend(records.rows);
    }
    let (tracks, dropped) = tracks_from_samples(&samples)?;
    if dropped > 0 {
        warn(format!(
            "dropped {dropped} samples repeating a timestamp of their track"
        ));
    }
    let mut by_camera: BTreeMap<String, Vec<Track>> = BTreeMap::new();
    for t in &tracks {
        let camera = t
            .contributing_cameras()
            .iter()
            .next()
            .expect("tracks are non-empty")
            .clone();
        by_camera.entry(camera).or_default().push(t.clone());
    }
    let outcome = match_tracks(&by_camera, &cfg);
    let fused = merge_tracks(&tracks, &outcome.matches, &cfg)?;

    let offset = datum_offset.or(ctx.config.datum_offset());
    io::write_fused_tracks(ctx.output("fused_tracks.csv")?, &fused, offset)?;
    io::write_correlation_report(
        ctx.output("correlation_report.csv")?,
        &outcome.reports,
        &outcome.decisions,
        cfg.threshold,
    )?;
    io::write_correlation_pairs(ctx.output("correlation_pairs.csv")?, &outcome.reports)?;
    println!(
        "{} tracks from {} cameras, {} matches, {} fused tracks",
        tracks.len(),
        by_camera.len(),
        outcome.matches.len(),
        fused.len()
    );
    Ok(())
}

fn preset_scenario(preset: Preset) -> Scenario {
    match preset {
        Preset::Crossing => presets::crossing_room(0),
        Preset::Followers => presets::followers(0, 1.0),
        Preset::FiveWalkers => presets::five_walkers(0),
    }
}

fn load_scenario(ctx: &Context, path: Option<&Path>, fallback: Preset, zero_noise: bool) -> Result<Scenario> {
    let mut sc = match path {
        Some(p) => io::read_scenario(p)?,
        None => preset_scenario(fallback),
    };
    if let Some(seed) = ctx.seed {
        sc.seed = seed;
    }
    if zero_noise {
        for cam in &mut sc.cameras {
            cam.noise = crate::simulator::NoiseModel {
                seed: cam.noise.seed,
                ..crate::simulator::NoiseModel::zero()
            };
        }
    }
    Ok(sc)
}

fn simulate_cmd(ctx: &Context, path: Option<&Path>, preset: Option<Preset>, grid: bool) -> Result<()> {
    let sc = load_scenario(ctx, path, preset.unwrap_or(Preset::Crossing), false)?;
    let out = simulate(&sc)?;
    if path.is_none() {
        fs::create_dir_all(&ctx.output_dir)?;
        let file = ctx.output_dir.join("scenario.toml");
        io::write_scenario(&file, &sc)?;
        println!("wrote {}", file.display());
    }
    for stream in &out.streams {
        io::write_detections(
            ctx.output(&format!("{}.detections.csv", stream.camera_id))?,
            &stream.detections,
        )?;
    }
    io::write_ground_truth(ctx.output("ground_truth.csv")?, out.ground_truth())?;
    if grid {
        for (i, cam) in sc.cameras.iter().enumerate() {
            let measured = measure_grid(cam, &generate_grid(cam, DEFAULT_GRID_POINTS)?, grid_seed(sc.seed, i));
            io::write_calibration_pairs(ctx.output(&format!("{}.grid.csv", cam.camera_id))?, &measured)?;
        }
    }
    Ok(())
}

fn evaluate(
    ctx: &Context,
    study: Study,
    scenario: Option<&Path>,
    grid: Option<&Path>,
    offsets: Option<Vec<f64>>,
    runs: u64,
    zero_noise: bool,
) -> Result<()> {
    let cfg = ctx.config.merge;
    cfg.validate()?;
    match study {
        Study::CalibrationStudy => {
            let pairs = match grid {
                Some(path) => {
                    let records = io::read_calibration_pairs(open(path)?, ctx.strict)?;
                    report_skipped(path, &records);
                    records.rows
                }
                None => {
                    let sc = load_scenario(ctx, scenario, Preset::Crossing, zero_noise)?;
                    let cam = &sc.cameras[0];
                    measure_grid(cam, &generate_grid(cam, DEFAULT_GRID_POINTS)?, sc.seed)
                }
            };
            let rows = calibration_study(&pairs)?;
            io::write_calibration_study(ctx.output("calibration_study.csv")?, &rows)?;
            let n = pairs.len();
            let total = n * (n - 1) * (n - 2) / 6;
            let errors: Vec<f64> = rows.iter().map(|r| r.mean_error).collect();
            let areas: Vec<f64> = rows.iter().map(|r| r.area).collect();
            let perimeters: Vec<f64> = rows.iter().map(|r| r.perimeter).collect();
            println!("{} subsets, {} skipped as degenerate", rows.len(), total - rows.len());
            println!(
                "spearman(area, error) = {}",
                io::fmt_num(stats::spearman(&areas, &errors))
            );
            println!(
                "spearman(perimeter, error) = {}",
                io::fmt_num(stats::spearman(&perimeters, &errors))
            );
            for bin in area_bins(&rows, AREA_BINS) {
                println!(
                    "area [{}, {}]: {} subsets, max error {}, mean error {}",
                    io::fmt_num(bin.area_min),
                    io::fmt_num(bin.area_max),
                    bin.count,
                    io::fmt_num(bin.max_error),
                    io::fmt_num(bin.mean_error)
                );
            }
        }
        Study::SeparationStudy => {
            let sc = load_scenario(ctx, scenario, Preset::Crossing, zero_noise)?;
            let offsets = offsets.unwrap_or_else(|| DEFAULT_OFFSETS.to_vec());
            let rows = separation_study(&sc, &offsets, &cfg)?;
            io::write_separation_study(ctx.output("separation_study.csv")?, &rows)?;
            for r in &rows {
                println!(
                    "offset {} s: C = {} over {} pairs",
                    io::fmt_num(r.offset),
                    io::fmt_num(r.c),
                    r.n_pairs
                );
            }
        }
        Study::MatchingAccuracy => {
            let base = load_scenario(ctx, scenario, Preset::FiveWalkers, zero_noise)?;
            let mut reports = Vec::new();
            let (mut same, mut different) = (Vec::new(), Vec::new());
            for k in 0..runs.max(1) {
                let sc = base.clone().with_seed(base.seed.wrapping_add(k));
                let report = matching_report(&sc, &cfg)?;
                println!(
                    "seed {}: accuracy {} over {} fused tracks",
                    sc.seed,
                    io::fmt_num(report.accuracy),
                    report.tracks.len()
                );
                let (s, d) = labelled_correlations(&sc, &cfg)?;
                same.extend(s);
                different.extend(d);
                reports.push((sc.seed, report));
            }
            io::write_accuracy_table(ctx.output("matching_accuracy.csv")?, &reports)?;
            let mean = reports.iter().map(|(_, r)| r.accuracy).sum::<f64>() / reports.len() as f64;
            println!("mean accuracy {}", io::fmt_num(mean));
            if let Some(s) = suggest_threshold(&same, &different) {
                println!(
                    "suggested threshold {} (margin {}, {} misclassified)",
                    io::fmt_num(s.threshold),
                    io::fmt_num(s.margin),
                    s.errors
                );
            }
        }
    }
    Ok(())
}
