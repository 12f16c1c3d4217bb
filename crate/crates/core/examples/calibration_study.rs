//! Which calibration triangle should an installer pick? Calibrate on every
//! triple of a measured grid and relate the projection error to the
//! triangle's area and perimeter.

use roomtrack::evaluation::{area_bins, calibration_study, stats, AREA_BINS};
use roomtrack::simulator::{generate_grid, measure_grid, presets, DEFAULT_GRID_POINTS};

fn main() -> roomtrack::Result<()> {
    let camera = &presets::office_cameras()[0];
    let grid = generate_grid(camera, DEFAULT_GRID_POINTS)?;

    let rows = calibration_study(&measure_grid(camera, &grid, 0))?;
    let errors: Vec<f64> = rows.iter().map(|r| r.mean_error).collect();
    let areas: Vec<f64> = rows.iter().map(|r| r.area).collect();
    let perimeters: Vec<f64> = rows.iter().map(|r| r.perimeter).collect();
    println!("{} triangles", rows.len());
    println!("spearman(area, error)      = {:+.3}", stats::spearman(&areas, &errors));
    println!(
        "spearman(perimeter, error) = {:+.3}",
        stats::spearman(&perimeters, &errors)
    );
    for bin in area_bins(&rows, AREA_BINS) {
        println!(
            "area {:5.2}..{:5.2} m²: max error {:8.3} m, mean {:.3} m",
            bin.area_min, bin.area_max, bin.max_error, bin.mean_error
        );
    }

    // Large triangles over many noise draws.
    let mut large = Vec::new();
    for seed in 0..20 {
        let rows = calibration_study(&measure_grid(camera, &grid, seed))?;
        large.extend(rows.iter().filter(|r| r.area >= 1.5).map(|r| r.mean_error));
    }
    println!(
        "triangles of at least 1.5 m² over 20 draws: median error {:.3} m, 90th percentile {:.3} m",
        stats::percentile(&large, 0.5),
        stats::percentile(&large, 0.9)
    );
    Ok(())
}
