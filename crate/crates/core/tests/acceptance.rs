//! Acceptance checks. Each criterion prints one PASS/FAIL line with the
//! measured values; the test fails if any criterion does.

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roomtrack::calibration::{solve_calibration, CalibrationPair};
use roomtrack::evaluation::{
    area_bins, calibration_study, matching_report, separation_study, stats, CalibrationStudyRow, AREA_BINS,
};
use roomtrack::fusion::{
    match_tracks, quality_measure, quality_time, sample_correlation, trajectory_correlation, Sample, Track,
};
use roomtrack::io;
use roomtrack::pipeline::run_pipeline;
use roomtrack::simulator::{generate_grid, measure_grid, presets, DEFAULT_GRID_POINTS};
use roomtrack::{project, CameraPoint, MergeConfig, UnifiedPoint};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn calibration_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut maps = 0;
    while maps < 1000 {
        let a: [f64; 3] = [
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-10.0..10.0),
        ];
        let b: [f64; 3] = [
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-10.0..10.0),
        ];
        if (a[0] * b[1] - a[1] * b[0]).abs() < 0.2 {
            continue;
        }
        let map = |c: CameraPoint| {
            UnifiedPoint::new(
                a[0] * c.x_cam + a[1] * c.z_cam + a[2],
                b[0] * c.x_cam + b[1] * c.z_cam + b[2],
            )
        };
        let mut point = || CameraPoint::new(rng.random_range(-5.0..5.0), rng.random_range(0.0..6.0));
        let cams = [point(), point(), point()];
        let area = ((cams[1].x_cam - cams[0].x_cam) * (cams[2].z_cam - cams[0].z_cam)
            - (cams[2].x_cam - cams[0].x_cam) * (cams[1].z_cam - cams[0].z_cam))
            .abs()
            / 2.0;
        if area < 0.5 {
            continue;
        }
        let pairs: Vec<_> = cams.iter().map(|&c| CalibrationPair::new(c, map(c), "")).collect();
        let cal = solve_calibration(&pairs, "K", 2.0).expect("non-degenerate triple");
        for _ in 0..10 {
            let c = point();
            let err = project(&cal, c).unwrap().distance(&map(c));
            worst = worst.max(err);
        }
        maps += 1;
    }
    outcome(
        worst <= 1e-9,
        format!("1000 maps x 10 held-out points, worst error {worst:.3e} m"),
    )
}

fn k1_grid() -> (roomtrack::CameraModel, Vec<CalibrationPair>) {
    let camera = presets::office_cameras().remove(0);
    let grid = generate_grid(&camera, DEFAULT_GRID_POINTS).unwrap();
    (camera, grid)
}

fn study_columns(rows: &[CalibrationStudyRow]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    (
        rows.iter().map(|r| r.area).collect(),
        rows.iter().map(|r| r.perimeter).collect(),
        rows.iter().map(|r| r.mean_error).collect(),
    )
}

fn area_error_trend(rows: &[CalibrationStudyRow], elapsed: f64) -> Outcome {
    let (area, _, error) = study_columns(rows);
    let rho = stats::spearman(&area, &error);
    let maxima: Vec<f64> = area_bins(rows, AREA_BINS).iter().map(|b| b.max_error).collect();
    let non_increasing = maxima.windows(2).filter(|w| w[1] <= w[0]).count();
    let comparisons = maxima.len() - 1;
    outcome(
        rho < -0.3 && non_increasing == comparisons,
        format!(
            "{} rows in {elapsed:.2} s, spearman(area, error) = {rho:.3}, bin max errors {:?}, \
             non-increasing in {non_increasing} of {comparisons} comparisons",
            rows.len(),
            maxima.iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>()
        ),
    )
}

fn perimeter_non_indicator(rows: &[CalibrationStudyRow]) -> Outcome {
    let (area, perimeter, error) = study_columns(rows);
    let by_area = stats::spearman(&area, &error);
    let by_perimeter = stats::spearman(&perimeter, &error);
    outcome(
        by_perimeter.abs() < by_area.abs(),
        format!(
            "|spearman(perimeter)| = {:.3}, |spearman(area)| = {:.3}",
            by_perimeter.abs(),
            by_area.abs()
        ),
    )
}

fn wide_triangle_error() -> Outcome {
    let (camera, grid) = k1_grid();
    let start = Instant::now();
    let mut errors = Vec::new();
    for seed in 0..100 {
        let rows = calibration_study(&measure_grid(&camera, &grid, seed)).unwrap();
        errors.extend(rows.iter().filter(|r| r.area >= 1.5).map(|r| r.mean_error));
    }
    let p90 = stats::percentile(&errors, 0.9);
    outcome(
        p90 < 0.2,
        format!(
            "{} subsets of at least 1.5 m² over 100 seeds, 90th percentile {p90:.4} m, median {:.4} m, {:.1} s",
            errors.len(),
            stats::percentile(&errors, 0.5),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn separation() -> Outcome {
    let rows = separation_study(
        &presets::crossing_room(0),
        &[0.0, 0.25, 0.5, 1.0],
        &MergeConfig::default(),
    )
    .unwrap();
    let c: Vec<f64> = rows.iter().map(|r| r.c).collect();
    let decreasing = c.windows(2).all(|w| w[1] < w[0]);
    outcome(
        decreasing && c[3] < 0.8 * c[0],
        format!(
            "C at 0, 0.25, 0.5, 1.0 s = {:?}, C(1)/C(0) = {:.3}",
            c.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>(),
            c[3] / c[0]
        ),
    )
}

/// Accuracy per run, and whether every walker seen by both cameras was peered.
fn peering_runs(scenario: impl Fn(u64) -> roomtrack::Scenario) -> (Vec<f64>, usize) {
    let cfg = MergeConfig::default();
    let mut accuracies = Vec::new();
    let mut missed = 0;
    for seed in 0..20 {
        let sc = scenario(seed);
        let run = run_pipeline(&sc, &cfg).unwrap();
        let walkers_in_both = sc
            .walkers
            .iter()
            .filter(|w| {
                run.tracks_by_camera.values().all(|tracks| {
                    tracks
                        .iter()
                        .any(|t| t.track_id().ends_with(&format!("/{}", w.walker_id)))
                })
            })
            .count();
        let report = matching_report(&sc, &cfg).unwrap();
        missed += walkers_in_both.saturating_sub(report.matches);
        accuracies.push(report.accuracy);
    }
    (accuracies, missed)
}

fn followers() -> Outcome {
    let (acc, missed) = peering_runs(|seed| presets::followers(seed, 1.0));
    let min = acc.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(
        min == 1.0 && missed == 0,
        format!("20 runs, minimum accuracy {min:.3}, walkers left unpeered {missed}"),
    )
}

fn five_walkers() -> Outcome {
    let (acc, missed) = peering_runs(presets::five_walkers);
    let mean = acc.iter().sum::<f64>() / acc.len() as f64;
    let min = acc.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(
        mean >= 0.9,
        format!("20 runs, mean accuracy {mean:.3}, minimum {min:.3}, walkers left unpeered {missed}"),
    )
}

fn formulas() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut check = |name: &str, got: f64, want: f64| {
        checked += 1;
        if got != want {
            failures.push(format!("{name}: got {got}, want {want}"));
        }
    };
    let pairs = [
        CalibrationPair::new(CameraPoint::new(0.0, 0.0), UnifiedPoint::new(0.0, 0.0), "a"),
        CalibrationPair::new(CameraPoint::new(1.0, 0.0), UnifiedPoint::new(1.0, 0.0), "b"),
        CalibrationPair::new(CameraPoint::new(0.0, 1.0), UnifiedPoint::new(0.0, 1.0), "c"),
    ];
    let cal = solve_calibration(&pairs, "K", 2.0).unwrap();
    for (x, want) in [(0.0, 1.0), (-1.0, 0.5), (-2.0, 0.0), (-3.0, 0.0)] {
        check(
            &format!("quality_measure at distance {}", -x),
            quality_measure(&cal, UnifiedPoint::new(x, 0.0)).unwrap(),
            want,
        );
    }
    for (dt, want) in [(0.0, 1.0), (0.5, 0.5), (1.0, 0.0), (FRAC_1_SQRT_2, 0.0)] {
        check(&format!("quality_time({dt})"), quality_time(dt).unwrap(), want);
    }
    let s = |t: f64, x: f64, q: f64, cam: &str| Sample {
        t,
        pos: UnifiedPoint::new(x, 0.0),
        quality: q,
        source_camera: cam.into(),
    };
    let p = sample_correlation(&s(0.0, 0.0, 1.0, "A"), &s(0.0, 0.0, 1.0, "B")).unwrap();
    check("C_i perfect", p.c, 1.0);
    let p = sample_correlation(&s(0.0, 0.0, 0.5, "A"), &s(0.0, 0.5, 0.5, "B")).unwrap();
    check("Q_i", p.quality, 0.25);
    check("D_i", p.distance_factor, 0.75);
    check("C_i", p.c, 0.1875);
    let p = sample_correlation(&s(0.0, 0.0, 1.0, "A"), &s(0.0, 2.0, 1.0, "B")).unwrap();
    check("D_i far", p.distance_factor, -3.0);
    check("C_i far", p.c, -3.0);

    let track = |id: &str, cam: &str, t0: f64| {
        Track::new(id, (0..10).map(|i| s(t0 + i as f64 / 30.0, 1.0, 1.0, cam)).collect()).unwrap()
    };
    let cfg = MergeConfig::default();
    check(
        "C identical tracks",
        trajectory_correlation(&track("a", "A", 0.0), &track("b", "B", 0.0), &cfg).c,
        10.0,
    );
    check(
        "C disjoint tracks",
        trajectory_correlation(&track("a", "A", 0.0), &track("b", "B", 50.0), &cfg).c,
        0.0,
    );

    let by_camera = [
        ("A".to_string(), vec![track("a", "A", 0.0)]),
        ("B".to_string(), vec![track("b", "B", 0.0)]),
    ]
    .into_iter()
    .collect();
    check(
        "matched pairs",
        match_tracks(&by_camera, &cfg).matches.len() as f64,
        1.0,
    );

    let detail = if failures.is_empty() {
        format!("{checked} hand-computed values exact")
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn determinism() -> Outcome {
    let dirs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    let mut codes = Vec::new();
    for d in &dirs {
        let out = d.path().to_str().unwrap();
        codes.push(roomtrack::cli::run([
            "roomtrack",
            "--seed",
            "42",
            "--output-dir",
            out,
            "simulate",
            "--preset",
            "five-walkers",
            "--grid",
        ]));
    }
    let mut names: Vec<_> = std::fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let simulate_identical = codes == [0, 0]
        && names
            .iter()
            .all(|n| std::fs::read(dirs[0].path().join(n)).ok() == std::fs::read(dirs[1].path().join(n)).ok());

    let fused: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let run = run_pipeline(&presets::five_walkers(42), &MergeConfig::default()).unwrap();
            let mut buf = Vec::new();
            io::write_fused_tracks(&mut buf, &run.fused, None).unwrap();
            io::write_correlation_report(&mut buf, &run.outcome.reports, &run.outcome.decisions, 5.0).unwrap();
            buf
        })
        .collect();
    let pipeline_identical = fused[0] == fused[1];
    outcome(
        simulate_identical && pipeline_identical,
        format!(
            "simulate: {} files byte-identical = {simulate_identical}; pipeline output identical = {pipeline_identical}",
            names.len()
        ),
    )
}

#[test]
fn acceptance() {
    let (camera, grid) = k1_grid();
    let start = Instant::now();
    let rows = calibration_study(&measure_grid(&camera, &grid, 0)).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    let results = [
        ("1 calibration exactness", calibration_exactness()),
        ("2 area-error trend", area_error_trend(&rows, elapsed)),
        ("3 perimeter non-indicator", perimeter_non_indicator(&rows)),
        ("4 wide-triangle error below 0.2 m", wide_triangle_error()),
        ("5 time-offset separation", separation()),
        ("6 two followers", followers()),
        ("7 five walkers", five_walkers()),
        ("8 formula values", formulas()),
        ("9 determinism", determinism()),
    ];
    for (name, o) in &results {
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
