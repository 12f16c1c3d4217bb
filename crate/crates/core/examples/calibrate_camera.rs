//! Solve a camera calibration from three measured points, then pick the
//! widest triangle from a whole reference grid.

use roomtrack::calibration::{calibrate_best, quality_distance, select_calibration_set};
use roomtrack::simulator::{generate_grid, measure_grid, presets};
use roomtrack::{project, solve_calibration, CalibrationPair, CameraPoint, UnifiedPoint};

fn main() -> roomtrack::Result<()> {
    // Three marks on the floor, measured by the camera and by tape.
    let pairs = [
        CalibrationPair::new(CameraPoint::new(-1.0, 1.5), UnifiedPoint::new(4.0, 1.0), "A"),
        CalibrationPair::new(CameraPoint::new(1.2, 2.0), UnifiedPoint::new(3.5, 3.2), "B"),
        CalibrationPair::new(CameraPoint::new(0.0, 4.0), UnifiedPoint::new(1.5, 2.0), "C"),
    ];
    let cal = solve_calibration(&pairs, "K1", 2.0)?;
    println!("alpha = {:?}", cal.alpha());
    println!("beta  = {:?}", cal.beta());
    println!("camera-frame triangle area = {:.3} m²", cal.camera_area());

    for cam in [CameraPoint::new(0.0, 2.5), CameraPoint::new(2.0, 4.8)] {
        let p = project(&cal, cam)?;
        println!(
            "({:.2}, {:.2}) -> ({:.3}, {:.3}), {:.2} m from the nearest anchor",
            cam.x_cam,
            cam.z_cam,
            p.x,
            p.y,
            quality_distance(&cal, p)?
        );
    }

    // With a full grid of candidates, the widest triangle calibrates best.
    let camera = &presets::office_cameras()[0];
    let grid = measure_grid(camera, &generate_grid(camera, 47)?, 7);
    for ranked in select_calibration_set(&grid, 3)? {
        println!("subset {:?}: area {:.3} m²", ranked.indices, ranked.area);
    }
    let (best, subset) = calibrate_best(&grid, "K1", 2.0)?;
    println!("calibrated {} on {:?}", best.camera_id(), subset.indices);
    Ok(())
}
