//! Runs the `roomtrack` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn roomtrack(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roomtrack"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

const COLLINEAR: &str = "label,x_cam,z_cam,x,y\na,0,1,0,1\nb,0,2,0,2\nc,0,3,0,3\n";

const GOOD_PAIRS: &str = "label,x_cam,z_cam,x,y\na,-1,1,1,1\nb,1,1,3,1\nc,0,3,2,3\n";

#[test]
fn help_and_version_succeed() {
    let dir = TempDir::new().unwrap();
    let out = roomtrack(dir.path(), &["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("simulate"));
    assert_eq!(code(&roomtrack(dir.path(), &["--version"])), 0);
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&roomtrack(dir.path(), &["evaluate", "no-such-study"])), 1);
    assert_eq!(code(&roomtrack(dir.path(), &["frobnicate"])), 1);
    let out = roomtrack(dir.path(), &["merge", "missing.csv"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("missing.csv"));
}

#[test]
fn collinear_pairs_are_a_domain_error() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("pairs.csv"), COLLINEAR).unwrap();
    let out = roomtrack(dir.path(), &["calibrate", "pairs.csv", "--camera-id", "K1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("degenerate"), "{}", stderr(&out));
    assert!(!dir.path().join("K1.calibration.toml").exists());
}

#[test]
fn four_pairs_need_select() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("pairs.csv"), format!("{GOOD_PAIRS}d,0,2,2,2\n")).unwrap();
    let out = roomtrack(dir.path(), &["calibrate", "pairs.csv", "--camera-id", "K1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--select"));
    let out = roomtrack(dir.path(), &["calibrate", "pairs.csv", "--camera-id", "K1", "--select"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(dir.path().join("K1.calibration.toml").exists());
}

#[test]
fn small_triangle_warns() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("pairs.csv"), GOOD_PAIRS).unwrap();
    let out = roomtrack(dir.path(), &["calibrate", "pairs.csv", "--camera-id", "K1"]);
    assert_eq!(code(&out), 0);
    // the triangle has an area of 2 m², which is fine
    assert!(!stderr(&out).contains("warning"));

    let tiny = "label,x_cam,z_cam,x,y\na,0,1,0,1\nb,0.5,1,0.5,1\nc,0,1.5,0,1.5\n";
    fs::write(dir.path().join("tiny.csv"), tiny).unwrap();
    let out = roomtrack(dir.path(), &["calibrate", "tiny.csv", "--camera-id", "K9"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("below"), "{}", stderr(&out));
}

#[test]
fn simulate_calibrate_project_merge() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let out = roomtrack(d, &["simulate", "--preset", "crossing", "--grid"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for f in [
        "scenario.toml",
        "K1.detections.csv",
        "K2.detections.csv",
        "ground_truth.csv",
        "K1.grid.csv",
    ] {
        assert!(d.join(f).exists(), "{f} missing");
    }

    for cam in ["K1", "K2"] {
        let grid = format!("{cam}.grid.csv");
        let out = roomtrack(d, &["calibrate", &grid, "--camera-id", cam, "--select"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let det = format!("{cam}.detections.csv");
        let cal = format!("{cam}.calibration.toml");
        let out = roomtrack(d, &["project", &det, "--calibration", &cal]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert!(!stderr(&out).contains("warning"));
    }

    let out = roomtrack(
        d,
        &["merge", "K1.samples.csv", "K2.samples.csv", "--datum-offset", "100,-5"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = fs::read_to_string(d.join("correlation_report.csv")).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines[0], "track_a,track_b,c,n_pairs,c_per_pair,threshold,decision");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].ends_with("matched"), "{}", lines[1]);

    let fused = fs::read_to_string(d.join("fused_tracks.csv")).unwrap();
    let ids: std::collections::BTreeSet<&str> = fused.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids.len(), 1);
    assert!(ids.iter().next().unwrap().contains('+'));
    // the datum offset moves every fused position into the building frame
    let x_col = fused.lines().next().unwrap().split(',').position(|h| h == "x").unwrap();
    assert!(fused
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(x_col).unwrap().parse::<f64>().unwrap() > 99.0));
    assert!(
        fs::read_to_string(d.join("correlation_pairs.csv"))
            .unwrap()
            .lines()
            .count()
            > 10
    );
}

#[test]
fn projection_uses_configured_calibrations() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&roomtrack(d, &["simulate", "--grid"])), 0);
    assert_eq!(
        code(&roomtrack(
            d,
            &["calibrate", "K1.grid.csv", "--camera-id", "K1", "--select"]
        )),
        0
    );
    fs::write(
        d.join("pipeline.toml"),
        "[calibrations]\nK1 = \"K1.calibration.toml\"\n",
    )
    .unwrap();
    let out = roomtrack(d, &["--config", "pipeline.toml", "project", "K1.detections.csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // K2 is not configured
    let out = roomtrack(d, &["--config", "pipeline.toml", "project", "K2.detections.csv"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("K2"));
}

#[test]
fn camera_mismatch_warns() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("pairs.csv"), GOOD_PAIRS).unwrap();
    assert_eq!(code(&roomtrack(d, &["calibrate", "pairs.csv", "--camera-id", "K1"])), 0);
    fs::write(d.join("det.csv"), "camera_id,t,x_cam,z_cam\nK2,0.5,0,2\n").unwrap();
    let out = roomtrack(d, &["project", "det.csv", "--calibration", "K1.calibration.toml"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("camera 'K2'"), "{}", stderr(&out));
}

#[test]
fn strict_mode_aborts_on_malformed_lines() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("pairs.csv"), GOOD_PAIRS).unwrap();
    assert_eq!(code(&roomtrack(d, &["calibrate", "pairs.csv", "--camera-id", "K1"])), 0);
    let det = "camera_id,t,x_cam,z_cam\nK1,0.0,0,2\nK1,oops,0,2\nK1,0.1,0,2\nK1,0.2,0\n";
    fs::write(d.join("det.csv"), det).unwrap();

    let out = roomtrack(d, &["project", "det.csv", "--calibration", "K1.calibration.toml"]);
    assert_eq!(code(&out), 0);
    let err = stderr(&out);
    assert!(err.contains("line 3") && err.contains("line 5"), "{err}");
    let samples = fs::read_to_string(d.join("det.samples.csv")).unwrap();
    assert_eq!(samples.lines().count(), 3);

    let out = roomtrack(
        d,
        &["--strict", "project", "det.csv", "--calibration", "K1.calibration.toml"],
    );
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 3"));
}

#[test]
fn single_camera_merge_passes_tracks_through() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let samples = "camera_id,person_hint,t,x,y,quality,vertical\nK1,p1,0,1,1,0.9,1.7\nK1,p1,0.1,1.1,1,0.9,1.7\n";
    fs::write(d.join("one.csv"), samples).unwrap();
    let out = roomtrack(d, &["merge", "one.csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        fs::read_to_string(d.join("fused_tracks.csv")).unwrap().lines().count(),
        3
    );
    assert_eq!(
        fs::read_to_string(d.join("correlation_report.csv"))
            .unwrap()
            .lines()
            .count(),
        1
    );
}

#[test]
fn simulate_is_byte_identical_across_runs() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for dir in [&a, &b] {
        assert_eq!(
            code(&roomtrack(
                dir.path(),
                &["simulate", "--preset", "five-walkers", "--seed", "7", "--grid"]
            )),
            0
        );
    }
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 6);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name:?} differs"
        );
    }
}

#[test]
fn scenario_file_round_trips_through_simulate() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&roomtrack(d, &["simulate", "--preset", "followers"])), 0);
    let out_dir = d.join("again");
    let out = roomtrack(
        d,
        &["simulate", "scenario.toml", "--output-dir", out_dir.to_str().unwrap()],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out_dir.join("ground_truth.csv").exists());
}

#[test]
fn zero_noise_calibration_study_has_no_error() {
    let dir = TempDir::new().unwrap();
    let out = roomtrack(dir.path(), &["evaluate", "calibration-study", "--zero-noise"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("calibration_study.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "i,j,k,area,perimeter,mean_error");
    let mut n = 0;
    for line in lines {
        let err: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(err < 1e-6, "{line}");
        n += 1;
    }
    assert!(n > 10_000);
}

#[test]
fn missing_scenario_field_is_named() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&roomtrack(d, &["simulate"])), 0);
    let text = fs::read_to_string(d.join("scenario.toml")).unwrap();
    let broken: String = text
        .lines()
        .filter(|l| !l.starts_with("duration"))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_ne!(broken, text);
    fs::write(d.join("broken.toml"), broken).unwrap();
    let out = roomtrack(d, &["simulate", "broken.toml"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("duration"), "{}", stderr(&out));
}

#[test]
fn separation_study_writes_requested_offsets() {
    let dir = TempDir::new().unwrap();
    let out = roomtrack(dir.path(), &["evaluate", "separation-study", "--offsets", "0,0.5,1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("separation_study.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("offset,c,n_pairs\n"));
}
